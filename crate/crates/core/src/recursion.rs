//! The one-stage splitting value, the Shapley operator on a belief grid and
//! the value curve `N ↦ V_N`.
//!
//! Grid values are floating point. Splittings are restricted to grid atoms,
//! so every value computed here is a lower approximation of the true one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Belief, GameFamily, Segment};
use crate::lp::{LinearProgram, Scalar, Sense};
use crate::metric::{invariant_h, BeliefDistribution};
use crate::nonrevealing::almost_fair_check;
use crate::piecewise::{detect_piecewise, PiecewiseOutcome};
use crate::rational::{dyadic, ratio, serde_rational, to_f64, Rational};

pub const DEFAULT_GRID: usize = 257;
/// Tolerance for floating-point comparisons on grid values.
pub const DP_TOLERANCE: f64 = 1e-9;
pub const LOWER_BOUND_NOTE: &str =
    "grid-restricted splittings: values are lower approximations of V_N";

/// `min_y Σ_s w_s max_i (A^{p_s} y)_i` with free epigraph variables `m_s`.
fn v1_lp<S: Scalar>(matrices: &[Vec<Vec<S>>], weights: &[S]) -> Result<S> {
    let cols = matrices[0][0].len();
    let atoms = matrices.len();
    let mut objective = vec![S::zero(); cols];
    objective.extend(weights.iter().cloned());
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for s in 0..atoms {
        lp.set_free(cols + s);
    }
    for (s, m) in matrices.iter().enumerate() {
        for row in m {
            let mut coeffs = row.clone();
            coeffs.resize(cols + atoms, S::zero());
            coeffs[cols + s] = S::one().neg();
            lp.le(coeffs, S::zero());
        }
    }
    let mut simplex = vec![S::one(); cols];
    simplex.resize(cols + atoms, S::zero());
    lp.eq(simplex, S::one());
    Ok(lp.solve()?.optimal()?.objective)
}

fn rows_of<S: Scalar>(m: &crate::game::Matrix) -> Vec<Vec<S>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(S::from_rational).collect())
        .collect()
}

/// One-stage value when Player 1 privately knows the realized posterior.
pub fn v1(family: &GameFamily, dist: &BeliefDistribution) -> Result<Rational> {
    let matrices = dist
        .atoms()
        .iter()
        .map(|p| Ok(rows_of::<Rational>(&family.expected_matrix(p)?)))
        .collect::<Result<Vec<_>>>()?;
    v1_lp(&matrices, dist.weights())
}

/// Floating-point `v1` for atoms that are not rational.
pub fn v1_numeric(family: &GameFamily, atoms: &[Vec<f64>], weights: &[f64]) -> Result<f64> {
    if atoms.is_empty() || atoms.len() != weights.len() {
        return Err(Error::InvalidBelief("atoms and weights differ in length".into()));
    }
    let matrices: Vec<Vec<Vec<f64>>> = atoms.iter().map(|p| family.expected_matrix_f64(p)).collect();
    v1_lp(&matrices, weights)
}

/// Grid points `α_s` on a segment with precomputed stage matrices.
#[derive(Debug, Clone)]
pub struct GridOperator<S> {
    alphas: Vec<S>,
    matrices: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> GridOperator<S> {
    pub fn new(family: &GameFamily, segment: &Segment, alphas: &[Rational]) -> Result<Self> {
        let matrices = alphas
            .iter()
            .map(|a| Ok(rows_of::<S>(&family.segment_matrix(segment, a)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridOperator {
            alphas: alphas.iter().map(S::from_rational).collect(),
            matrices,
        })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// `T_grid[f](α)` with its pivot count.
    ///
    /// Solved in splitting-weight form: `π_{s,i} ≥ 0` is the probability of
    /// posterior `α_s` together with row `i`, and `t` is the column
    /// player's best reply value. This is the LP dual of
    /// `min μ + λ·p` over `(y, λ, μ)`.
    pub fn apply_at(&self, f: &[S], alpha: &S) -> Result<(S, usize)> {
        if f.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: f.len(),
            });
        }
        let rows = self.matrices[0].len();
        let cols = self.matrices[0][0].len();
        let n = self.len() * rows;
        let mut objective = Vec::with_capacity(n + 1);
        for fs in f {
            objective.extend(std::iter::repeat_n(fs.clone(), rows));
        }
        objective.push(S::one());
        let mut lp = LinearProgram::new(Sense::Maximize, objective);
        lp.set_free(n);
        let mut mass = vec![S::one(); n];
        mass.push(S::zero());
        lp.eq(mass, S::one());
        let mut centre = Vec::with_capacity(n + 1);
        for a in &self.alphas {
            centre.extend(std::iter::repeat_n(a.clone(), rows));
        }
        centre.push(S::zero());
        lp.eq(centre, alpha.clone());
        for j in 0..cols {
            let mut coeffs = Vec::with_capacity(n + 1);
            for m in &self.matrices {
                coeffs.extend(m.iter().map(|row| row[j].neg()));
            }
            coeffs.push(S::one());
            lp.le(coeffs, S::zero());
        }
        match lp.solve()? {
            crate::lp::LpOutcome::Optimal(sol) => Ok((sol.objective, sol.pivots)),
            crate::lp::LpOutcome::Infeasible => Err(Error::OutsideHull),
            crate::lp::LpOutcome::Unbounded => Err(Error::Lp("splitting LP unbounded".into())),
        }
    }

    /// `T_grid[f]` at every grid point, in parallel; returns total pivots.
    pub fn apply(&self, f: &[S]) -> Result<(Vec<S>, usize)> {
        let out: Vec<(S, usize)> = self
            .alphas
            .par_iter()
            .map(|a| self.apply_at(f, a))
            .collect::<Result<_>>()?;
        let pivots = out.iter().map(|o| o.1).sum();
        Ok((out.into_iter().map(|o| o.0).collect(), pivots))
    }
}

/// `grid_size` equally spaced points `i/(grid_size − 1)`; dyadic when
/// `grid_size − 1` is a power of two.
pub fn uniform_alphas(grid_size: usize) -> Result<Vec<Rational>> {
    if grid_size < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "grid".into(),
            reason: "at least 2 grid points are needed".into(),
        });
    }
    let d = (grid_size - 1) as i64;
    Ok((0..=d).map(|i| ratio(i, d)).collect())
}

/// Function values on grid points of a segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueGrid {
    pub segment: Segment,
    #[serde(with = "serde_rational::vec")]
    pub alphas: Vec<Rational>,
    pub values: Vec<f64>,
}

impl ValueGrid {
    pub fn zeros(segment: Segment, grid_size: usize) -> Result<Self> {
        let alphas = uniform_alphas(grid_size)?;
        let values = vec![0.0; alphas.len()];
        Ok(ValueGrid {
            segment,
            alphas,
            values,
        })
    }

    pub fn beliefs(&self) -> Vec<Belief> {
        self.alphas.iter().map(|a| self.segment.at(a)).collect()
    }

    pub fn index_of(&self, alpha: &Rational) -> Option<usize> {
        self.alphas.binary_search(alpha).ok()
    }
}

/// `T_grid[f](p)` for one belief on the grid's segment.
pub fn shapley_t_grid(family: &GameFamily, f: &ValueGrid, p: &Belief) -> Result<f64> {
    let alpha = f.segment.locate(p).ok_or(Error::OutsideHull)?;
    let op = GridOperator::<f64>::new(family, &f.segment, &f.alphas)?;
    Ok(op.apply_at(&f.values, &to_f64(&alpha))?.0)
}

/// Exact `T_grid[f](α)` for rational grid values.
pub fn shapley_t_grid_exact(
    family: &GameFamily,
    segment: &Segment,
    alphas: &[Rational],
    f: &[Rational],
    alpha: &Rational,
) -> Result<Rational> {
    let op = GridOperator::<Rational>::new(family, segment, alphas)?;
    Ok(op.apply_at(f, alpha)?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub n: usize,
    pub lp_solves: usize,
    pub pivots: usize,
}

/// All grid values `V_0, …, V_{n_max}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueIteration {
    pub segment: Segment,
    #[serde(with = "serde_rational::vec")]
    pub alphas: Vec<Rational>,
    pub values: Vec<Vec<f64>>,
    pub stats: Vec<IterationStats>,
}

impl ValueIteration {
    pub fn grid(&self, n: usize) -> ValueGrid {
        ValueGrid {
            segment: self.segment.clone(),
            alphas: self.alphas.clone(),
            values: self.values[n].clone(),
        }
    }
}

/// `V_{N+1} = T_grid[V_N]` from `V_0 ≡ 0`.
pub fn value_iteration(family: &GameFamily, segment: &Segment, grid_size: usize, n_max: usize) -> Result<ValueIteration> {
    let alphas = uniform_alphas(grid_size)?;
    let op = GridOperator::<f64>::new(family, segment, &alphas)?;
    let mut values = vec![vec![0.0; alphas.len()]];
    let mut stats = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (next, pivots) = op.apply(values.last().expect("V_0 present"))?;
        values.push(next);
        stats.push(IterationStats {
            n,
            lp_solves: alphas.len(),
            pivots,
        });
    }
    Ok(ValueIteration {
        segment: segment.clone(),
        alphas,
        values,
        stats,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueCurve {
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    pub grid_size: usize,
    /// `values[N]` is the grid lower approximation of `V_N(p)`.
    pub values: Vec<f64>,
    pub stats: Vec<IterationStats>,
    pub lower_bound: bool,
    pub note: String,
}

impl ValueCurve {
    pub fn max_decrease(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,V_N,grid_size,lower_bound_flag\n");
        for (n, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{v},{},{}\n", self.grid_size, self.lower_bound));
        }
        out
    }
}

pub fn value_curve(
    family: &GameFamily,
    segment: &Segment,
    p: &Belief,
    n_max: usize,
    grid_size: usize,
) -> Result<ValueCurve> {
    if n_max < 1 {
        return Err(Error::ParameterOutOfRange {
            name: "n_max".into(),
            reason: "must be at least 1".into(),
        });
    }
    let alpha = segment.locate(p).ok_or(Error::OutsideHull)?;
    let alphas = uniform_alphas(grid_size)?;
    let idx = alphas.binary_search(&alpha).map_err(|_| Error::GridTooCoarse {
        grid_size,
        point: crate::rational::format_rational(&alpha),
    })?;
    let it = value_iteration(family, segment, grid_size, n_max)?;
    Ok(ValueCurve {
        alpha,
        grid_size,
        values: it.values.iter().map(|v| v[idx]).collect(),
        stats: it.stats,
        lower_bound: true,
        note: LOWER_BOUND_NOTE.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    #[serde(rename = "Q")]
    pub q: usize,
    pub stages: usize,
    /// `max_{N, p} V_N(p) − h(p)`; nonpositive up to tolerance.
    pub max_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub grid_size: usize,
    pub trials: usize,
    pub seed: u64,
    /// `max (T[g] − T[f])` over random pairs with `f ≥ g`.
    pub monotone_max_violation: f64,
    pub almost_fair: bool,
    /// `max (f − T[f])`, checked for almost-fair families only.
    pub increasing_max_violation: Option<f64>,
    pub invariant: Option<InvariantCheck>,
}

impl OperatorReport {
    pub fn passes(&self) -> bool {
        self.monotone_max_violation <= DP_TOLERANCE
            && self.increasing_max_violation.is_none_or(|v| v <= DP_TOLERANCE)
            && self.invariant.as_ref().is_none_or(|c| c.max_excess <= DP_TOLERANCE)
    }
}

/// Stages used for the `V_N ≤ h` check.
pub const INVARIANT_STAGES: usize = 20;

/// Random checks of monotonicity and the increasing property of `T_grid`,
/// plus `V_N ≤ h` when the family carries a piecewise certificate.
pub fn check_operator_properties(
    family: &GameFamily,
    grid_size: usize,
    trials: usize,
    seed: u64,
) -> Result<OperatorReport> {
    let segment = Segment::full(family.num_states());
    let alphas = uniform_alphas(grid_size)?;
    let op = GridOperator::<f64>::new(family, &segment, &alphas)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = to_f64(&family.lipschitz_seminorm()).max(1.0);
    let mut pairs = Vec::with_capacity(trials);
    for _ in 0..trials {
        let f: Vec<f64> = (0..alphas.len()).map(|_| rng.gen_range(-scale..scale)).collect();
        let g: Vec<f64> = f.iter().map(|v| v - rng.gen_range(0.0..scale)).collect();
        pairs.push((f, g));
    }
    let fair = almost_fair_check(family, &segment, 6)?;
    let almost_fair = !fair.has_violation();
    let mut monotone = f64::NEG_INFINITY;
    let mut increasing = f64::NEG_INFINITY;
    for (f, g) in &pairs {
        let tf = op.apply(f)?.0;
        let tg = op.apply(g)?.0;
        for s in 0..alphas.len() {
            monotone = monotone.max(tg[s] - tf[s]);
            increasing = increasing.max(f[s] - tf[s]);
        }
    }
    let invariant = match detect_piecewise(family, &segment, &dyadic(12))? {
        PiecewiseOutcome::Certificate(cert) if almost_fair => {
            let regions = cert.regions();
            let h: Vec<f64> = alphas
                .par_iter()
                .map(|a| Ok(to_f64(&invariant_h(family, &regions, &segment.at(a))?)))
                .collect::<Result<_>>()?;
            let it = value_iteration(family, &segment, grid_size, INVARIANT_STAGES)?;
            let max_excess = it
                .values
                .iter()
                .flat_map(|v| v.iter().zip(&h).map(|(x, y)| x - y))
                .fold(f64::NEG_INFINITY, f64::max);
            Some(InvariantCheck {
                q: cert.q,
                stages: INVARIANT_STAGES,
                max_excess,
            })
        }
        _ => None,
    };
    Ok(OperatorReport {
        grid_size,
        trials,
        seed,
        monotone_max_violation: if trials == 0 { 0.0 } else { monotone },
        almost_fair,
        increasing_max_violation: (almost_fair && trials > 0).then_some(increasing),
        invariant,
    })
}

/// `h` on the grid as exact rationals.
pub fn invariant_on_grid(
    family: &GameFamily,
    regions: &[crate::piecewise::Region],
    segment: &Segment,
    alphas: &[Rational],
) -> Result<Vec<Rational>> {
    alphas
        .par_iter()
        .map(|a| invariant_h(family, regions, &segment.at(a)))
        .collect()
}

/// Whether `f` is within `tol` of zero at every simplex vertex of the grid.
pub fn vertices_vanish(values: &[f64], tol: f64) -> bool {
    values.first().is_some_and(|v| v.abs() <= tol) && values.last().is_some_and(|v| v.abs() <= tol)
}
