//! Exact solution of finite zero-sum matrix games.
//!
//! The row player maximizes. All routines run the rational simplex, so
//! values and strategies are exact and every returned strategy is checked
//! against the guarantee inequalities it claims.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Matrix, MixedAction};
use crate::lp::{LinearProgram, LpOutcome, Sense};
use crate::rational::{format_rational, serde_rational, Rational};

/// Largest matrix dimension for which extreme strategies are enumerated.
pub const SNOW_SHAPLEY_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixGameSolution {
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub row_optimal: MixedAction,
    pub col_optimal: MixedAction,
}

/// Coordinatewise range of the column player's optimal set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalSetBounds {
    #[serde(with = "serde_rational::vec")]
    pub min: Vec<Rational>,
    #[serde(with = "serde_rational::vec")]
    pub max: Vec<Rational>,
}

impl OptimalSetBounds {
    pub fn is_singleton(&self) -> bool {
        self.min == self.max
    }
}

/// `max_i (M y)_i`, the payoff the row player can force against `y`.
pub fn best_response_payoff(m: &Matrix, y: &[Rational]) -> Rational {
    m.apply(y).into_iter().max().expect("matrix has rows")
}

/// `min_j (xᵀ M)_j`, the payoff `x` guarantees to the row player.
pub fn guaranteed_payoff(m: &Matrix, x: &[Rational]) -> Rational {
    m.apply_left(x).into_iter().min().expect("matrix has columns")
}

/// Value only; one LP.
pub fn game_value(m: &Matrix) -> Result<Rational> {
    let (rows, cols) = (m.rows(), m.cols());
    // variables: y_0..y_{J-1}, v (free)
    let mut objective = vec![Rational::zero(); cols + 1];
    objective[cols] = Rational::one();
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    lp.set_free(cols);
    for i in 0..rows {
        let mut row = m.row(i).to_vec();
        row.push(-Rational::one());
        lp.le(row, Rational::zero());
    }
    let mut simplex = vec![Rational::one(); cols];
    simplex.push(Rational::zero());
    lp.eq(simplex, Rational::one());
    Ok(lp.solve()?.optimal()?.objective)
}

/// Lexicographically smallest point of `{y ∈ Δ: M y <= bound·e}`.
fn lexmin_column_strategy(m: &Matrix, bound: &Rational) -> Result<Option<MixedAction>> {
    let cols = m.cols();
    let mut fixed: Vec<Rational> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut objective = vec![Rational::zero(); cols];
        objective[j] = Rational::one();
        let mut lp = LinearProgram::new(Sense::Minimize, objective);
        for i in 0..m.rows() {
            lp.le(m.row(i).to_vec(), bound.clone());
        }
        lp.eq(vec![Rational::one(); cols], Rational::one());
        for (k, v) in fixed.iter().enumerate() {
            let mut e = vec![Rational::zero(); cols];
            e[k] = Rational::one();
            lp.eq(e, v.clone());
        }
        match lp.solve()? {
            LpOutcome::Optimal(sol) => fixed.push(sol.objective),
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => unreachable!("coordinates of a simplex are bounded"),
        }
    }
    Ok(Some(MixedAction::new(fixed)?))
}

/// Exact value and one optimal strategy per player (the lexicographically
/// smallest one in each optimal set).
pub fn matrix_game_value(m: &Matrix) -> Result<MatrixGameSolution> {
    let value = game_value(m)?;
    let col_optimal = lexmin_column_strategy(m, &value)?
        .ok_or_else(|| Error::Lp("column optimal set is empty".into()))?;
    let negated_transpose = m.transpose().scale(&-Rational::one());
    let row_optimal = lexmin_column_strategy(&negated_transpose, &-value.clone())?
        .ok_or_else(|| Error::Lp("row optimal set is empty".into()))?;
    if best_response_payoff(m, col_optimal.weights()) > value
        || guaranteed_payoff(m, row_optimal.weights()) < value
    {
        return Err(Error::Lp("optimality certificate failed".into()));
    }
    Ok(MatrixGameSolution {
        value,
        row_optimal,
        col_optimal,
    })
}

/// Coordinate bounds of `{y ∈ Δ(J): M y <= value·e}`.
pub fn optimal_set_bounds(m: &Matrix, value: &Rational) -> Result<OptimalSetBounds> {
    let cols = m.cols();
    let mut min = Vec::with_capacity(cols);
    let mut max = Vec::with_capacity(cols);
    for j in 0..cols {
        for sense in [Sense::Minimize, Sense::Maximize] {
            let mut objective = vec![Rational::zero(); cols];
            objective[j] = Rational::one();
            let mut lp = LinearProgram::new(sense, objective);
            for i in 0..m.rows() {
                lp.le(m.row(i).to_vec(), value.clone());
            }
            lp.eq(vec![Rational::one(); cols], Rational::one());
            match lp.solve()? {
                LpOutcome::Optimal(sol) => match sense {
                    Sense::Minimize => min.push(sol.objective),
                    Sense::Maximize => max.push(sol.objective),
                },
                LpOutcome::Infeasible => return Err(Error::ValueNotAttained(format_rational(value))),
                LpOutcome::Unbounded => unreachable!("coordinates of a simplex are bounded"),
            }
        }
    }
    Ok(OptimalSetBounds { min, max })
}

/// Some `y ∈ Δ(J)` with `M y <= 0` for every matrix, or `None`.
pub fn feasible_common_strategy_all(matrices: &[&Matrix]) -> Result<Option<MixedAction>> {
    let cols = matrices
        .first()
        .map(|m| m.cols())
        .ok_or_else(|| Error::Precondition("no matrices given".into()))?;
    let mut lp = LinearProgram::<Rational>::feasibility(cols);
    for m in matrices {
        if m.cols() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: m.cols(),
            });
        }
        for i in 0..m.rows() {
            lp.le(m.row(i).to_vec(), Rational::zero());
        }
    }
    lp.eq(vec![Rational::one(); cols], Rational::one());
    match lp.solve()? {
        LpOutcome::Optimal(sol) => Ok(Some(MixedAction::new(sol.x)?)),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("feasibility objective is zero"),
    }
}

/// Some `y ∈ Δ(J)` with `M_a y <= 0` and `M_b y <= 0`.
///
/// Both systems are affine in a segment parameter, so a common `y` at the
/// two endpoints of a segment works on the whole segment.
pub fn feasible_common_strategy(m_a: &Matrix, m_b: &Matrix) -> Result<Option<MixedAction>> {
    feasible_common_strategy_all(&[m_a, m_b])
}

/// Row-player counterpart: some `x ∈ Δ(I)` with `xᵀ M_a >= 0` and
/// `xᵀ M_b >= 0`.
pub fn feasible_common_row_strategy(m_a: &Matrix, m_b: &Matrix) -> Result<Option<MixedAction>> {
    let minus = -Rational::one();
    let a = m_a.transpose().scale(&minus);
    let b = m_b.transpose().scale(&minus);
    feasible_common_strategy(&a, &b)
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            let (upper, lower) = a.split_at_mut(r);
            for (target, source) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target -= &factor * source;
            }
        }
    }
    det
}

/// `adj(M) e`, i.e. the row sums of the adjugate.
pub fn adjugate_row_sums(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    if n == 1 {
        return vec![Rational::one()];
    }
    (0..n)
        .map(|i| {
            // adj(M)_{ij} = (-1)^{i+j} det(M without row j and column i)
            (0..n).fold(Rational::zero(), |acc, j| {
                let minor: Vec<Vec<Rational>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                    .collect();
                let d = determinant(&minor);
                if (i + j) % 2 == 0 {
                    acc + d
                } else {
                    acc - d
                }
            })
        })
        .collect()
}

/// All extreme points of the column player's optimal set via the
/// Snow–Shapley kernel: for each square submatrix `M` the candidate
/// `adj(M)e / ⟨e, adj(M)e⟩` is kept when it is a valid, optimal strategy.
pub fn snow_shapley_extremes(m: &Matrix) -> Result<Vec<MixedAction>> {
    if m.rows() > SNOW_SHAPLEY_CAP || m.cols() > SNOW_SHAPLEY_CAP {
        return Err(Error::TooLarge {
            rows: m.rows(),
            cols: m.cols(),
            cap: SNOW_SHAPLEY_CAP,
        });
    }
    let value = game_value(m)?;
    let mut found: Vec<MixedAction> = Vec::new();
    for size in 1..=m.rows().min(m.cols()) {
        for rows in (0..m.rows()).combinations(size) {
            for cols in (0..m.cols()).combinations(size) {
                let sub: Vec<Vec<Rational>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect())
                    .collect();
                let kernel = adjugate_row_sums(&sub);
                let denominator: Rational = kernel.iter().sum();
                if denominator.is_zero() {
                    continue;
                }
                let mut y = vec![Rational::zero(); m.cols()];
                for (c, k) in cols.iter().zip(&kernel) {
                    y[*c] = k / &denominator;
                }
                if y.iter().any(Signed::is_negative) {
                    continue;
                }
                if best_response_payoff(m, &y) > value {
                    continue;
                }
                let y = MixedAction::new(y)?;
                if !found.contains(&y) {
                    found.push(y);
                }
            }
        }
    }
    found.sort();
    Ok(found)
}
