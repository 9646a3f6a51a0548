//! Repeated-game instances: the state-indexed payoff family, beliefs over
//! states, mixed actions, belief segments, the builtin examples and the
//! payoff-preserving transforms.
//!
//! Everything here is exact. Payoff families are immutable once built.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_game::game_value;
use crate::rational::{format_rational, int, parse_rational, ratio, serde_rational, Rational};

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidGame("matrix has no rows".into()));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::InvalidGame("matrix has no columns".into()));
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integer tables.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .expect("rectangular integer table")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Entrywise `self + factor * other`.
    pub fn add_scaled(&self, factor: &Rational, other: &Matrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + factor * b)
                .collect(),
        }
    }

    pub fn shift(&self, delta: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v + delta).collect(),
        }
    }

    /// `M y`
    pub fn apply(&self, y: &[Rational]) -> Vec<Rational> {
        assert_eq!(y.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(y)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `xᵀ M`
    pub fn apply_left(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(Rational::zero(), |acc, i| acc + &x[i] * self.get(i, j))
            })
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(crate::rational::to_f64).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn check_distribution(weights: &[Rational]) -> std::result::Result<(), String> {
    if weights.is_empty() {
        return Err("empty weight vector".into());
    }
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(format!("negative weight {}", format_rational(w)));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(format!("weights sum to {}", format_rational(&total)));
    }
    Ok(())
}

/// A prior or posterior over the states, summing exactly to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct Belief(Vec<Rational>);

/// Probability vector over one player's actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct MixedAction(Vec<Rational>);

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawWeights(#[serde(with = "serde_rational::vec")] Vec<Rational>);

impl TryFrom<RawWeights> for Belief {
    type Error = Error;
    fn try_from(raw: RawWeights) -> Result<Self> {
        Belief::new(raw.0)
    }
}

impl From<Belief> for RawWeights {
    fn from(b: Belief) -> Self {
        RawWeights(b.0)
    }
}

impl TryFrom<RawWeights> for MixedAction {
    type Error = Error;
    fn try_from(raw: RawWeights) -> Result<Self> {
        MixedAction::new(raw.0)
    }
}

impl From<MixedAction> for RawWeights {
    fn from(m: MixedAction) -> Self {
        RawWeights(m.0)
    }
}

impl Belief {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        check_distribution(&weights).map_err(Error::InvalidBelief)?;
        Ok(Self(weights))
    }

    pub fn dirac(state: usize, states: usize) -> Self {
        let mut w = vec![Rational::zero(); states];
        w[state] = Rational::one();
        Self(w)
    }

    /// Two-state belief `(1 - p1, p1)`.
    pub fn binary(p1: Rational) -> Result<Self> {
        Self::new(vec![Rational::one() - &p1, p1])
    }

    pub fn uniform(states: usize) -> Self {
        Self(vec![ratio(1, states as i64); states])
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `t·self + (1 - t)·other`
    pub fn mix(&self, t: &Rational, other: &Belief) -> Belief {
        assert_eq!(self.len(), other.len());
        let s = Rational::one() - t;
        Belief(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| t * a + &s * b)
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::rational::to_f64).collect()
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", cells.join(", "))
    }
}

impl MixedAction {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        check_distribution(&weights).map_err(Error::InvalidMixedAction)?;
        Ok(Self(weights))
    }

    pub fn pure(action: usize, actions: usize) -> Self {
        let mut w = vec![Rational::zero(); actions];
        w[action] = Rational::one();
        Self(w)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the action played with certainty, if any.
    pub fn as_pure(&self) -> Option<usize> {
        self.0.iter().position(One::is_one)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&j| !self.0[j].is_zero()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::rational::to_f64).collect()
    }

    /// Euclidean distance, computed in floating point.
    pub fn euclidean_distance(&self, other: &MixedAction) -> f64 {
        self.to_f64()
            .iter()
            .zip(other.to_f64())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl fmt::Display for MixedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", cells.join(", "))
    }
}

/// The belief segment `p(α) = α·at_one + (1 - α)·at_zero`, `α ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub at_one: Belief,
    pub at_zero: Belief,
}

impl Segment {
    pub fn new(at_one: Belief, at_zero: Belief) -> Result<Self> {
        if at_one.len() != at_zero.len() {
            return Err(Error::DimensionMismatch {
                expected: at_one.len(),
                found: at_zero.len(),
            });
        }
        if at_one == at_zero {
            return Err(Error::DegenerateSegment);
        }
        Ok(Self { at_one, at_zero })
    }

    /// The edge from `δ_0` (α = 0) to `δ_{K-1}` (α = 1). For two states the
    /// parameter α is the probability of the second state.
    pub fn full(states: usize) -> Self {
        assert!(states >= 2, "a segment needs at least two states");
        Self {
            at_one: Belief::dirac(states - 1, states),
            at_zero: Belief::dirac(0, states),
        }
    }

    pub fn states(&self) -> usize {
        self.at_one.len()
    }

    pub fn at(&self, alpha: &Rational) -> Belief {
        self.at_one.mix(alpha, &self.at_zero)
    }

    pub fn at_f64(&self, alpha: f64) -> Vec<f64> {
        self.at_one
            .to_f64()
            .iter()
            .zip(self.at_zero.to_f64())
            .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
            .collect()
    }

    /// α with `p(α) = p`, if `p` lies on the segment.
    pub fn locate(&self, p: &Belief) -> Option<Rational> {
        let k = (0..self.states()).find(|&k| self.at_one.0[k] != self.at_zero.0[k])?;
        let alpha = (&p.0[k] - &self.at_zero.0[k]) / (&self.at_one.0[k] - &self.at_zero.0[k]);
        if alpha.is_negative() || alpha > Rational::one() {
            return None;
        }
        (self.at(&alpha) == *p).then_some(alpha)
    }
}

/// A finite family of payoff matrices `A^k`, one per state, all of the same
/// shape. Row player (informed) maximizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameFamily {
    states: Vec<String>,
    payoffs: Vec<Matrix>,
}

impl GameFamily {
    pub fn new(states: Vec<String>, payoffs: Vec<Matrix>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidGame("at least one state is required".into()));
        }
        if states.len() != payoffs.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: payoffs.len(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(Error::InvalidGame(format!("duplicate state label `{s}`")));
            }
        }
        let (r, c) = (payoffs[0].rows(), payoffs[0].cols());
        for m in &payoffs {
            if m.rows() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: m.rows(),
                });
            }
            if m.cols() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: m.cols(),
                });
            }
        }
        Ok(Self { states, payoffs })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn rows(&self) -> usize {
        self.payoffs[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.payoffs[0].cols()
    }

    pub fn payoff(&self, state: usize) -> &Matrix {
        &self.payoffs[state]
    }

    pub fn payoffs(&self) -> &[Matrix] {
        &self.payoffs
    }

    /// `A^p = Σ_k p_k A^k`.
    pub fn expected_matrix(&self, p: &Belief) -> Result<Matrix> {
        if p.len() != self.num_states() {
            return Err(Error::DimensionMismatch {
                expected: self.num_states(),
                found: p.len(),
            });
        }
        let mut m = Matrix::zeros(self.rows(), self.cols());
        for (w, a) in p.weights().iter().zip(&self.payoffs) {
            if !w.is_zero() {
                m = m.add_scaled(w, a);
            }
        }
        Ok(m)
    }

    /// Expected matrix in floating point for a numeric belief.
    pub fn expected_matrix_f64(&self, p: &[f64]) -> Vec<Vec<f64>> {
        assert_eq!(p.len(), self.num_states());
        let mut m = vec![vec![0.0; self.cols()]; self.rows()];
        for (w, a) in p.iter().zip(&self.payoffs) {
            if *w == 0.0 {
                continue;
            }
            for (i, row) in m.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v += w * crate::rational::to_f64(a.get(i, j));
                }
            }
        }
        m
    }

    /// `‖A‖_lip = max_{i,j,k,k'} |A^k_{ij} - A^{k'}_{ij}|`.
    pub fn lipschitz_seminorm(&self) -> Rational {
        let mut best = Rational::zero();
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let entries = self.payoffs.iter().map(|m| m.get(i, j));
                let hi = entries.clone().max().expect("nonempty");
                let lo = entries.min().expect("nonempty");
                let spread = hi - lo;
                if spread > best {
                    best = spread;
                }
            }
        }
        best
    }

    /// Shifts every `A^k` by its own matrix-game value so each state game
    /// has value zero.
    pub fn normalize_flat(&self) -> Result<GameFamily> {
        let payoffs = self
            .payoffs
            .iter()
            .map(|m| Ok(m.shift(&-game_value(m)?)))
            .collect::<Result<Vec<_>>>()?;
        GameFamily::new(self.states.clone(), payoffs)
    }

    /// Appends one column per strategy, holding the mixed payoff
    /// `Σ_j y_j A^k_{·j}`; original columns are untouched.
    pub fn pure_piecewise_transform(&self, strategies: &[MixedAction]) -> Result<GameFamily> {
        for y in strategies {
            if y.len() != self.cols() {
                return Err(Error::DimensionMismatch {
                    expected: self.cols(),
                    found: y.len(),
                });
            }
        }
        let payoffs = self
            .payoffs
            .iter()
            .map(|m| {
                let extra: Vec<Vec<Rational>> = strategies.iter().map(|y| m.apply(y.weights())).collect();
                let rows = (0..m.rows())
                    .map(|i| {
                        let mut row = m.row(i).to_vec();
                        row.extend(extra.iter().map(|col| col[i].clone()));
                        row
                    })
                    .collect();
                Matrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>>>()?;
        GameFamily::new(self.states.clone(), payoffs)
    }

    /// Appends a row holding the mixed payoff `Σ_i x_i A^k_{i·}`.
    pub fn add_mixed_row(&self, weights: &MixedAction) -> Result<GameFamily> {
        if weights.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.rows(),
                found: weights.len(),
            });
        }
        let payoffs = self
            .payoffs
            .iter()
            .map(|m| {
                let mut rows = m.to_rows();
                rows.push(m.apply_left(weights.weights()));
                Matrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>>>()?;
        GameFamily::new(self.states.clone(), payoffs)
    }

    /// Matrix along a segment: `A(α) = α A^{at_one} + (1 - α) A^{at_zero}`.
    pub fn segment_matrix(&self, segment: &Segment, alpha: &Rational) -> Result<Matrix> {
        self.expected_matrix(&segment.at(alpha))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let payoffs: serde_json::Map<String, serde_json::Value> = self
            .states
            .iter()
            .zip(&self.payoffs)
            .map(|(s, m)| {
                let rows: Vec<Vec<String>> = m
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(format_rational).collect())
                    .collect();
                (s.clone(), serde_json::json!(rows))
            })
            .collect();
        serde_json::json!({
            "states": self.states,
            "rows": self.rows(),
            "cols": self.cols(),
            "payoffs": payoffs,
        })
    }

    /// Loads the JSON game format. Entries must be integers or rational
    /// strings; JSON floats are rejected.
    pub fn from_json(value: &serde_json::Value) -> Result<GameFamily> {
        let bad = |msg: &str| Error::InvalidGame(msg.to_string());
        let obj = value.as_object().ok_or_else(|| bad("top level must be an object"))?;
        let states: Vec<String> = obj
            .get("states")
            .and_then(|s| s.as_array())
            .ok_or_else(|| bad("`states` must be an array"))?
            .iter()
            .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("state labels must be strings")))
            .collect::<Result<_>>()?;
        let rows = obj
            .get("rows")
            .and_then(|r| r.as_u64())
            .ok_or_else(|| bad("`rows` must be a positive integer"))? as usize;
        let cols = obj
            .get("cols")
            .and_then(|c| c.as_u64())
            .ok_or_else(|| bad("`cols` must be a positive integer"))? as usize;
        if rows == 0 || cols == 0 {
            return Err(bad("`rows` and `cols` must be at least 1"));
        }
        let payoffs_obj = obj
            .get("payoffs")
            .and_then(|p| p.as_object())
            .ok_or_else(|| bad("`payoffs` must be an object keyed by state"))?;
        if payoffs_obj.len() != states.len() {
            return Err(bad("`payoffs` must have exactly one matrix per state"));
        }
        let mut payoffs = Vec::with_capacity(states.len());
        for state in &states {
            let m = payoffs_obj
                .get(state)
                .ok_or_else(|| Error::InvalidGame(format!("missing payoffs for state `{state}`")))?;
            let table = m
                .as_array()
                .ok_or_else(|| bad("payoff matrix must be an array of rows"))?;
            let parsed: Vec<Vec<Rational>> = table
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("payoff row must be an array"))?
                        .iter()
                        .map(json_rational)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            let matrix = Matrix::from_rows(parsed)?;
            if matrix.rows() != rows || matrix.cols() != cols {
                return Err(Error::InvalidGame(format!(
                    "state `{state}` matrix is {}x{}, declared {rows}x{cols}",
                    matrix.rows(),
                    matrix.cols()
                )));
            }
            payoffs.push(matrix);
        }
        GameFamily::new(states, payoffs)
    }
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else {
                Err(Error::InvalidGame(format!("non-rational numeric `{n}`; write it as \"a/b\"")))
            }
        }
        serde_json::Value::String(s) => {
            if s.contains('.') {
                return Err(Error::InvalidGame(format!("decimal payoff `{s}`; write it as \"a/b\"")));
            }
            parse_rational(s)
        }
        other => Err(Error::InvalidGame(format!("unexpected payoff entry {other}"))),
    }
}

/// The builtin example families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    /// Zamir's 2×2 game with √N growth.
    Zamir,
    /// Domansky–Kreps family with parameter `alpha ∈ [0, 1]`.
    Dk { alpha: Rational },
    /// Discrete market with price grid `{0, 1/m, …, 1}`.
    Market { m: u32 },
}

impl Builtin {
    /// Parses `zamir`, `dk:alpha=1/2`, `market:m=3`.
    pub fn parse(spec: &str) -> Result<Builtin> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::ParameterOutOfRange {
                name: kv.to_string(),
                reason: "expected key=value".into(),
            })?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Builtin::from_params(name.trim(), &params)
    }

    pub fn from_params(name: &str, params: &BTreeMap<String, String>) -> Result<Builtin> {
        let allow = |keys: &[&str]| -> Result<()> {
            match params.keys().find(|k| !keys.contains(&k.as_str())) {
                Some(k) => Err(Error::ParameterOutOfRange {
                    name: k.clone(),
                    reason: format!("not a parameter of `{name}`"),
                }),
                None => Ok(()),
            }
        };
        match name {
            "zamir" => {
                allow(&[])?;
                Ok(Builtin::Zamir)
            }
            "dk" => {
                allow(&["alpha"])?;
                let alpha = match params.get("alpha") {
                    Some(a) => parse_rational(a)?,
                    None => Rational::zero(),
                };
                if alpha.is_negative() || alpha > Rational::one() {
                    return Err(Error::ParameterOutOfRange {
                        name: "alpha".into(),
                        reason: format!("{} not in [0, 1]", format_rational(&alpha)),
                    });
                }
                Ok(Builtin::Dk { alpha })
            }
            "market" => {
                allow(&["m"])?;
                let text = params.get("m").ok_or_else(|| Error::ParameterOutOfRange {
                    name: "m".into(),
                    reason: "market requires m".into(),
                })?;
                let m: u32 = text.parse().map_err(|_| Error::ParameterOutOfRange {
                    name: "m".into(),
                    reason: format!("`{text}` is not a positive integer"),
                })?;
                if m == 0 {
                    return Err(Error::ParameterOutOfRange {
                        name: "m".into(),
                        reason: "m must be at least 1".into(),
                    });
                }
                Ok(Builtin::Market { m })
            }
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn build(&self) -> GameFamily {
        let states = vec!["0".to_string(), "1".to_string()];
        let payoffs = match self {
            Builtin::Zamir => vec![
                Matrix::from_ints(&[&[3, -1], &[-3, 1]]),
                Matrix::from_ints(&[&[2, -2], &[-2, 2]]),
            ],
            Builtin::Dk { alpha } => {
                let d = Rational::one() - alpha;
                let a0 = Matrix::from_rows(vec![
                    vec![int(1), int(0)],
                    vec![int(0), -d.clone()],
                ]);
                let a1 = Matrix::from_rows(vec![vec![int(-1), int(0)], vec![int(0), d]]);
                vec![a0.expect("2x2"), a1.expect("2x2")]
            }
            Builtin::Market { m } => {
                let n = *m as usize + 1;
                let price = |q: usize| ratio(q as i64, *m as i64);
                (0..2)
                    .map(|k| {
                        let value = int(k);
                        let rows = (0..n)
                            .map(|i| {
                                (0..n)
                                    .map(|j| {
                                        let sign = int((i as i64 - j as i64).signum());
                                        sign * (&value - price(i.max(j)))
                                    })
                                    .collect()
                            })
                            .collect();
                        Matrix::from_rows(rows).expect("square price grid")
                    })
                    .collect()
            }
        };
        GameFamily::new(states, payoffs).expect("builtin families are well formed")
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Zamir => "zamir".into(),
            Builtin::Dk { alpha } => format!("dk:alpha={}", format_rational(alpha)),
            Builtin::Market { m } => format!("market:m={m}"),
        }
    }
}

/// Builds a builtin by name and parameter map.
pub fn build_builtin(name: &str, params: &BTreeMap<String, String>) -> Result<GameFamily> {
    Ok(Builtin::from_params(name, params)?.build())
}
