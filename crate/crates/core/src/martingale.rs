//! The simple-random-walk posterior martingale on a segment: exact
//! survival probabilities and occupation measures, the resulting lower
//! bound for `V_N` at the segment midpoint, and seeded Monte Carlo traces.
//!
//! Probabilities are exact. Walk positions `1/2 + z/(4√N)` are generally
//! irrational, so `v1` at those positions runs in floating point.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Belief, GameFamily, Segment};
use crate::metric::tv_distance;
use crate::rational::{int, ratio, serde_rational, to_f64, Rational};
use crate::recursion::v1_numeric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkSpec {
    pub n: usize,
    /// Absorption level for `|z|`: the least integer `≥ 2√N − 1`.
    pub threshold: i64,
}

impl WalkSpec {
    pub fn new(n: usize) -> Result<WalkSpec> {
        if n == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "n".into(),
                reason: "must be at least 1".into(),
            });
        }
        let four_n = 4 * n as i64;
        let mut c = 0i64;
        while (c + 1) * (c + 1) < four_n {
            c += 1;
        }
        // positions up to |z| = c must stay inside [0, 1]: c² ≤ 4N
        if c * c > four_n {
            return Err(Error::WalkOutOfRange(format!("threshold {c} for N = {n}")));
        }
        Ok(WalkSpec { n, threshold: c })
    }

    /// `1/(4√N)` in α units.
    pub fn step(&self) -> f64 {
        1.0 / (4.0 * (self.n as f64).sqrt())
    }

    pub fn alpha(&self, z: i64) -> f64 {
        0.5 + z as f64 * self.step()
    }

    pub fn is_absorbed(&self, z: i64) -> bool {
        z.abs() >= self.threshold
    }

    /// Successor positions with their probabilities; the mean is `z`.
    pub fn transition(&self, z: i64) -> [(i64, Rational); 2] {
        if self.is_absorbed(z) {
            [(z, ratio(1, 2)), (z, ratio(1, 2))]
        } else {
            [(z - 1, ratio(1, 2)), (z + 1, ratio(1, 2))]
        }
    }

    pub fn live_positions(&self) -> std::ops::Range<i64> {
        (1 - self.threshold)..self.threshold
    }
}

/// Exact law of the walk killed at the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkLaw {
    pub spec: WalkSpec,
    /// `P(τ_N > N)`.
    pub survival: Rational,
    /// `Σ_{n=1}^N P(Z^{(n)} = z, τ_N > n)` for each live `z`.
    pub occupancy: BTreeMap<i64, Rational>,
    /// `P(τ_N > n)` for `n = 1..N`.
    pub survival_by_stage: Vec<Rational>,
}

pub fn walk_law(n: usize) -> Result<WalkLaw> {
    let spec = WalkSpec::new(n)?;
    let half = ratio(1, 2);
    let mut alive: BTreeMap<i64, Rational> = BTreeMap::new();
    alive.insert(0, Rational::one());
    let mut occupancy: BTreeMap<i64, Rational> = BTreeMap::new();
    let mut survival_by_stage = Vec::with_capacity(n);
    for stage in 1..=n {
        survival_by_stage.push(alive.values().sum());
        for (z, p) in &alive {
            *occupancy.entry(*z).or_insert_with(Rational::zero) += p;
        }
        if stage == n {
            break;
        }
        let mut next: BTreeMap<i64, Rational> = BTreeMap::new();
        for (z, p) in &alive {
            let mass = p * &half;
            for w in [z - 1, z + 1] {
                if !spec.is_absorbed(w) {
                    *next.entry(w).or_insert_with(Rational::zero) += &mass;
                }
            }
        }
        alive = next;
    }
    Ok(WalkLaw {
        spec,
        survival: alive.values().sum(),
        occupancy,
        survival_by_stage,
    })
}

/// `P(τ_N > N)`, exact.
pub fn tau_survival_probability(n: usize) -> Result<Rational> {
    Ok(walk_law(n)?.survival)
}

/// Checks `P(max_{n≤N} |Z^{(n)}| ≥ λ) ≤ (N − 1)/λ²` with `λ = 2√N − 1`
/// exactly, by squaring out the root.
pub fn doob_bound_holds(law: &WalkLaw) -> bool {
    let q = Rational::one() - &law.survival;
    let n = int(law.spec.n as i64);
    // q(4N − 4√N + 1) ≤ N − 1  ⇔  q(4N + 1) − (N − 1) ≤ 4q√N
    let lhs = &q * (int(4) * &n + int(1)) - (&n - int(1));
    if lhs <= Rational::zero() {
        return true;
    }
    &lhs * &lhs <= int(16) * &q * &q * n
}

/// `v1(½δ_{p(α_z+h)} + ½δ_{p(α_z−h)})` for every live position.
pub fn jump_values(family: &GameFamily, segment: &Segment, spec: &WalkSpec) -> Result<BTreeMap<i64, f64>> {
    let h = spec.step();
    let zs: Vec<i64> = spec.live_positions().collect();
    let values: Vec<f64> = zs
        .par_iter()
        .map(|&z| {
            let a = spec.alpha(z);
            if a - h < -1e-12 || a + h > 1.0 + 1e-12 {
                return Err(Error::WalkOutOfRange(format!("position {z} leaves the segment")));
            }
            let atoms = [segment.at_f64((a + h).min(1.0)), segment.at_f64((a - h).max(0.0))];
            v1_numeric(family, &atoms, &[0.5, 0.5])
        })
        .collect::<Result<_>>()?;
    Ok(zs.into_iter().zip(values).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkBound {
    #[serde(rename = "N")]
    pub n: usize,
    pub threshold: i64,
    pub step: f64,
    #[serde(with = "serde_rational")]
    pub survival_prob: Rational,
    pub exact_bound: f64,
}

/// Payoff of the random-walk martingale: a lower bound for `V_N` at the
/// segment midpoint.
pub fn walk_lower_bound_exact(family: &GameFamily, segment: &Segment, n: usize) -> Result<WalkBound> {
    let law = walk_law(n)?;
    let jumps = jump_values(family, segment, &law.spec)?;
    let exact_bound = law
        .occupancy
        .iter()
        .map(|(z, e)| to_f64(e) * jumps[z])
        .sum();
    Ok(WalkBound {
        n,
        threshold: law.spec.threshold,
        step: law.spec.step(),
        survival_prob: law.survival,
        exact_bound,
    })
}

/// Lower bound at `p` from the bound at the midpoint `p(1/2)`, by
/// concavity of `V_N` and `V_N(δ_k) = 0`.
pub fn concavity_extension(segment: &Segment, p: &Belief, midpoint_bound: f64) -> Result<f64> {
    let mid = segment.at(&ratio(1, 2));
    let beta = Rational::one() - tv_distance(p, &mid)?;
    Ok(to_f64(&beta) * midpoint_bound)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub n: usize,
    pub z: i64,
    pub alpha: f64,
    pub absorbed: bool,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub seed: u64,
    pub trial: u64,
    pub steps: Vec<TraceStep>,
}

impl WalkTrace {
    pub fn total(&self) -> f64 {
        self.steps.iter().map(|s| s.contribution).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,z,alpha,absorbed,contribution\n");
        for s in &self.steps {
            out.push_str(&format!("{},{},{},{},{}\n", s.n, s.z, s.alpha, s.absorbed, s.contribution));
        }
        out
    }
}

fn run_trial(spec: &WalkSpec, jumps: &BTreeMap<i64, f64>, seed: u64, trial: u64, keep: bool) -> (f64, Option<WalkTrace>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut z = 0i64;
    let mut total = 0.0;
    let mut steps = Vec::new();
    for n in 1..=spec.n {
        let absorbed = spec.is_absorbed(z);
        let contribution = if absorbed { 0.0 } else { jumps[&z] };
        total += contribution;
        if keep {
            steps.push(TraceStep {
                n,
                z,
                alpha: spec.alpha(z),
                absorbed,
                contribution,
            });
        }
        if !absorbed {
            z += if rng.gen::<bool>() { 1 } else { -1 };
        }
    }
    (total, keep.then_some(WalkTrace { seed, trial, steps }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkSimulation {
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mc_estimate: f64,
    pub stderr: f64,
    /// Path of trial 0.
    pub trace: WalkTrace,
}

/// Monte Carlo counterpart of [`walk_lower_bound_exact`]. Trial `i` draws
/// from stream `i` of a generator seeded with `seed`.
pub fn simulate_walk(family: &GameFamily, segment: &Segment, n: usize, trials: usize, seed: u64) -> Result<WalkSimulation> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials".into(),
            reason: "must be at least 1".into(),
        });
    }
    let spec = WalkSpec::new(n)?;
    let jumps = jump_values(family, segment, &spec)?;
    let totals: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(&spec, &jumps, seed, t, false).0)
        .collect();
    let mean = totals.iter().sum::<f64>() / trials as f64;
    let stderr = if trials > 1 {
        let var = totals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        (var / trials as f64).sqrt()
    } else {
        0.0
    };
    let trace = run_trial(&spec, &jumps, seed, 0, true).1.expect("trace kept");
    Ok(WalkSimulation {
        n,
        trials,
        seed,
        mc_estimate: mean,
        stderr,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkSummary {
    #[serde(rename = "N")]
    pub n: usize,
    pub exact_bound: f64,
    #[serde(with = "serde_rational")]
    pub survival_prob: Rational,
    pub mc_estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Builtin;

    #[test]
    fn thresholds() {
        assert_eq!(WalkSpec::new(1).unwrap().threshold, 1);
        assert_eq!(WalkSpec::new(4).unwrap().threshold, 3);
        assert_eq!(WalkSpec::new(16).unwrap().threshold, 7);
        assert_eq!(WalkSpec::new(5).unwrap().threshold, 4);
    }

    #[test]
    fn small_survival_values() {
        assert_eq!(tau_survival_probability(1).unwrap(), int(1));
        assert_eq!(tau_survival_probability(4).unwrap(), ratio(3, 4));
    }

    #[test]
    fn occupancy_sums_to_expected_lifetime() {
        let law = walk_law(9).unwrap();
        let total: Rational = law.occupancy.values().sum();
        let lifetime: Rational = law.survival_by_stage.iter().sum();
        assert_eq!(total, lifetime);
        assert!(doob_bound_holds(&law));
    }

    #[test]
    fn transition_is_a_martingale() {
        let spec = WalkSpec::new(16).unwrap();
        for z in -spec.threshold..=spec.threshold {
            let mean: Rational = spec.transition(z).iter().map(|(w, p)| int(*w) * p).sum();
            assert_eq!(mean, int(z));
        }
    }

    #[test]
    fn flat_segment_gives_zero() {
        let dk = Builtin::Dk { alpha: int(0) }.build();
        let seg = Segment::new(Belief::dirac(1, 2), Belief::binary(ratio(3, 4)).unwrap()).unwrap();
        assert_eq!(walk_lower_bound_exact(&dk, &seg, 16).unwrap().exact_bound, 0.0);
    }

    #[test]
    fn absorbed_trace_contributes_nothing() {
        let z = Builtin::Zamir.build();
        let sim = simulate_walk(&z, &Segment::full(2), 4, 1, 3).unwrap();
        let mut dead = false;
        for s in &sim.trace.steps {
            dead |= s.absorbed;
            if dead {
                assert_eq!(s.contribution, 0.0);
            }
        }
        let again = simulate_walk(&z, &Segment::full(2), 4, 1, 3).unwrap();
        assert_eq!(sim, again);
    }

    #[test]
    fn midpoint_extension() {
        let seg = Segment::full(2);
        let v = concavity_extension(&seg, &Belief::binary(ratio(1, 4)).unwrap(), 2.0).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
    }
}
