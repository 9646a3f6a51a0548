//! Finitely many optimal non-revealing strategies: region polytopes, the
//! greedy interval certificate along a segment, the resulting value bound,
//! and sampled estimates of the revelation constants.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Belief, GameFamily, Matrix, MixedAction, Segment};
use crate::lp::{LinearProgram, LpOutcome};
use crate::matrix_game::feasible_common_strategy_all;
use crate::metric::BeliefDistribution;
use crate::nonrevealing::{interval_list, optimal_strategy_at};
use crate::rational::{int, ratio, serde_rational, simplest_in, to_f64, Rational};
use crate::recursion::v1;

/// Linear form `Σ_k coeffs[k]·p_k ≤ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inequality {
    #[serde(with = "serde_rational::vec")]
    pub coeffs: Vec<Rational>,
}

impl Inequality {
    pub fn eval(&self, p: &[Rational]) -> Rational {
        self.coeffs.iter().zip(p).map(|(c, x)| c * x).sum()
    }
}

/// The beliefs where `strategy` keeps every row payoff nonpositive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub strategy: MixedAction,
    pub inequalities: Vec<Inequality>,
    pub states: usize,
}

impl Region {
    pub fn new(family: &GameFamily, strategy: &MixedAction) -> Result<Region> {
        if strategy.len() != family.cols() {
            return Err(Error::DimensionMismatch {
                expected: family.cols(),
                found: strategy.len(),
            });
        }
        let per_state: Vec<Vec<Rational>> = family
            .payoffs()
            .iter()
            .map(|a| a.apply(strategy.weights()))
            .collect();
        let mut inequalities: Vec<Inequality> = (0..family.rows())
            .map(|i| Inequality {
                coeffs: per_state.iter().map(|v| v[i].clone()).collect(),
            })
            // rows nonpositive at every vertex hold on the whole simplex
            .filter(|ineq| ineq.coeffs.iter().any(|c| c.is_positive()))
            .collect();
        inequalities.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        inequalities.dedup();
        Ok(Region {
            strategy: strategy.clone(),
            inequalities,
            states: family.num_states(),
        })
    }

    pub fn contains(&self, p: &Belief) -> bool {
        self.inequalities
            .iter()
            .all(|ineq| !ineq.eval(p.weights()).is_positive())
    }

    /// Some belief in the region, or `None` if it is empty.
    pub fn witness(&self) -> Result<Option<Belief>> {
        let mut lp = LinearProgram::<Rational>::feasibility(self.states);
        for ineq in &self.inequalities {
            lp.le(ineq.coeffs.clone(), Rational::zero());
        }
        lp.eq(vec![Rational::one(); self.states], Rational::one());
        match lp.solve()? {
            LpOutcome::Optimal(sol) => Ok(Some(Belief::new(sol.x)?)),
            _ => Ok(None),
        }
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.witness()?.is_none())
    }

    /// The α-interval `{α : p(α) ∈ region}`, exact.
    pub fn interval_on_segment(&self, segment: &Segment) -> Option<(Rational, Rational)> {
        let mut lo = Rational::zero();
        let mut hi = Rational::one();
        for ineq in &self.inequalities {
            // c·p(α) = c0 + α (c1 − c0)
            let c0 = ineq.eval(segment.at_zero.weights());
            let c1 = ineq.eval(segment.at_one.weights());
            let slope = &c1 - &c0;
            if slope.is_zero() {
                if c0.is_positive() {
                    return None;
                }
            } else {
                let root = -&c0 / &slope;
                if slope.is_positive() {
                    hi = hi.min(root);
                } else {
                    lo = lo.max(root);
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

pub fn regions_from_strategies(family: &GameFamily, strategies: &[MixedAction]) -> Result<Vec<Region>> {
    strategies.iter().map(|y| Region::new(family, y)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub strategy: MixedAction,
    /// Greedy cover intervals served by this strategy.
    #[serde(with = "interval_list")]
    pub intervals: Vec<(Rational, Rational)>,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseCertificate {
    pub segment: Segment,
    pub entries: Vec<CertificateEntry>,
    #[serde(rename = "Q")]
    pub q: usize,
}

impl PiecewiseCertificate {
    pub fn strategies(&self) -> Vec<MixedAction> {
        self.entries.iter().map(|e| e.strategy.clone()).collect()
    }

    pub fn regions(&self) -> Vec<Region> {
        self.entries.iter().map(|e| e.region.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonPiecewiseEvidence {
    pub segment: Segment,
    #[serde(with = "serde_rational")]
    pub start: Rational,
    #[serde(with = "serde_rational")]
    pub end: Rational,
    pub strategy_at_start: MixedAction,
    pub strategy_at_end: MixedAction,
    pub unique_at_start: bool,
    pub unique_at_end: bool,
    pub strategy_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PiecewiseOutcome {
    Certificate(PiecewiseCertificate),
    NonPiecewise(NonPiecewiseEvidence),
    Inconclusive {
        #[serde(with = "serde_rational")]
        covered_up_to: Rational,
        reason: String,
    },
}

/// Bisection precision for the right endpoint of a greedy interval.
const ENDPOINT_BITS: u32 = 48;

fn common_strategy(family: &GameFamily, segment: &Segment, a: &Rational, b: &Rational) -> Result<Option<MixedAction>> {
    let ma = family.segment_matrix(segment, a)?;
    let mb = family.segment_matrix(segment, b)?;
    // a pure strategy reads better in reports when one exists
    for j in 0..family.cols() {
        let y = MixedAction::pure(j, family.cols());
        if is_nonpositive(&ma, &y) && is_nonpositive(&mb, &y) {
            return Ok(Some(y));
        }
    }
    feasible_common_strategy_all(&[&ma, &mb])
}

fn is_nonpositive(m: &Matrix, y: &MixedAction) -> bool {
    m.apply(y.weights()).iter().all(|v| !v.is_positive())
}

/// Largest `b ∈ [a, 1]` with a strategy optimal on all of `[a, b]`,
/// together with that strategy.
fn furthest_reach(family: &GameFamily, segment: &Segment, a: &Rational) -> Result<Option<(Rational, MixedAction)>> {
    if let Some(y) = common_strategy(family, segment, a, &Rational::one())? {
        return Ok(Some((Rational::one(), y)));
    }
    let Some(mut best) = common_strategy(family, segment, a, a)? else {
        return Ok(None);
    };
    let mut lo = a.clone();
    let mut hi = Rational::one();
    let tolerance = crate::rational::dyadic(ENDPOINT_BITS);
    while &hi - &lo > tolerance {
        let mid = (&lo + &hi) / int(2);
        match common_strategy(family, segment, a, &mid)? {
            Some(y) => {
                lo = mid;
                best = y;
            }
            None => hi = mid,
        }
    }
    // the true reach is usually a simple rational inside [lo, hi)
    let guess = simplest_in(&lo, &hi);
    if guess > lo {
        if let Some(y) = common_strategy(family, segment, a, &guess)? {
            return Ok(Some((guess, y)));
        }
    }
    Ok(Some((lo, best)))
}

/// Greedy left-to-right cover of the segment by intervals with a constant
/// optimal strategy. A stall shorter than `min_width` with unique, distinct
/// endpoint strategies is reported as evidence against the property.
pub fn detect_piecewise(family: &GameFamily, segment: &Segment, min_width: &Rational) -> Result<PiecewiseOutcome> {
    if !min_width.is_positive() {
        return Err(Error::ParameterOutOfRange {
            name: "min_width".into(),
            reason: "must be positive".into(),
        });
    }
    let mut pieces: Vec<(Rational, Rational, MixedAction)> = Vec::new();
    let mut a = Rational::zero();
    loop {
        let Some((b, y)) = furthest_reach(family, segment, &a)? else {
            return Ok(PiecewiseOutcome::Inconclusive {
                covered_up_to: a,
                reason: "non-revealing value is not zero here".into(),
            });
        };
        if &b - &a < *min_width {
            return stall_evidence(family, segment, &a, min_width);
        }
        pieces.push((a, b.clone(), y));
        if b.is_one() {
            break;
        }
        a = b;
    }
    let entries = group_pieces(family, segment, pieces)?;
    Ok(PiecewiseOutcome::Certificate(PiecewiseCertificate {
        segment: segment.clone(),
        q: entries.len(),
        entries,
    }))
}

fn stall_evidence(family: &GameFamily, segment: &Segment, a: &Rational, min_width: &Rational) -> Result<PiecewiseOutcome> {
    let (ya, unique_a) = optimal_strategy_at(family, segment, a)?;
    let inconclusive = |reason: &str| PiecewiseOutcome::Inconclusive {
        covered_up_to: a.clone(),
        reason: reason.into(),
    };
    if !unique_a {
        return Ok(inconclusive("optimal strategy is not unique at the stall point"));
    }
    let mut width = Rational::one() - a;
    while width >= *min_width {
        let b = a + &width;
        let (yb, unique_b) = optimal_strategy_at(family, segment, &b)?;
        if unique_b && yb != ya {
            let gap = ya.euclidean_distance(&yb);
            return Ok(PiecewiseOutcome::NonPiecewise(NonPiecewiseEvidence {
                segment: segment.clone(),
                start: a.clone(),
                end: b,
                strategy_at_start: ya,
                strategy_at_end: yb,
                unique_at_start: true,
                unique_at_end: true,
                strategy_gap: gap,
            }));
        }
        width /= int(2);
    }
    Ok(inconclusive("no probe with a unique, distinct optimal strategy"))
}

/// Merges cover intervals that share an optimal strategy, adjacent or not.
fn group_pieces(
    family: &GameFamily,
    segment: &Segment,
    pieces: Vec<(Rational, Rational, MixedAction)>,
) -> Result<Vec<CertificateEntry>> {
    struct Group {
        intervals: Vec<(Rational, Rational)>,
        matrices: Vec<Matrix>,
        strategy: MixedAction,
    }
    let mut groups: Vec<Group> = Vec::new();
    for (a, b, y) in pieces {
        let ma = family.segment_matrix(segment, &a)?;
        let mb = family.segment_matrix(segment, &b)?;
        let mut placed = false;
        for g in groups.iter_mut() {
            if is_nonpositive(&ma, &g.strategy) && is_nonpositive(&mb, &g.strategy) {
                g.intervals.push((a.clone(), b.clone()));
                g.matrices.extend([ma.clone(), mb.clone()]);
                placed = true;
                break;
            }
            let mut all: Vec<&Matrix> = g.matrices.iter().collect();
            all.extend([&ma, &mb]);
            if let Some(common) = feasible_common_strategy_all(&all)? {
                g.intervals.push((a.clone(), b.clone()));
                g.matrices.extend([ma.clone(), mb.clone()]);
                g.strategy = common;
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push(Group {
                intervals: vec![(a, b)],
                matrices: vec![ma, mb],
                strategy: y,
            });
        }
    }
    groups
        .into_iter()
        .map(|g| {
            Ok(CertificateEntry {
                region: Region::new(family, &g.strategy)?,
                strategy: g.strategy,
                intervals: g.intervals,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CoverMode {
    Exact1d,
    Grid { resolution: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub covered: bool,
    pub exact: bool,
    pub resolution: Option<u32>,
    pub uncovered_witness: Option<Belief>,
}

/// Checks that the regions cover the segment (exact mode, two states) or
/// every point of a lattice on the simplex (grid mode).
pub fn verify_cover(regions: &[Region], segment: &Segment, mode: CoverMode) -> Result<CoverReport> {
    match mode {
        CoverMode::Exact1d => {
            if segment.states() != 2 {
                return Err(Error::Precondition("exact cover check needs two states".into()));
            }
            let mut intervals: Vec<_> = regions
                .iter()
                .filter_map(|r| r.interval_on_segment(segment))
                .collect();
            intervals.sort();
            let mut reach = Rational::zero();
            let mut witness = None;
            let mut started = false;
            for (lo, hi) in intervals {
                let gap = if started { lo > reach } else { lo > Rational::zero() };
                if gap {
                    witness = Some((&reach + &lo) / int(2));
                    break;
                }
                started = true;
                reach = reach.max(hi);
            }
            if witness.is_none() && (!started || reach < Rational::one()) {
                let from = if started { reach } else { Rational::zero() };
                witness = Some((from + Rational::one()) / int(2));
            }
            Ok(CoverReport {
                covered: witness.is_none(),
                exact: true,
                resolution: None,
                uncovered_witness: witness.map(|alpha| segment.at(&alpha)),
            })
        }
        CoverMode::Grid { resolution } => {
            let states = segment.states();
            let witness = simplex_lattice(states, resolution)
                .into_iter()
                .find(|p| !regions.iter().any(|r| r.contains(p)));
            Ok(CoverReport {
                covered: witness.is_none(),
                exact: false,
                resolution: Some(resolution),
                uncovered_witness: witness,
            })
        }
    }
}

/// All beliefs with coordinates in `{0, 1/r, …, 1}`.
pub fn simplex_lattice(states: usize, resolution: u32) -> Vec<Belief> {
    let r = resolution.max(1) as i64;
    let mut out = Vec::new();
    let mut counts = vec![0i64; states];
    fn rec(k: usize, left: i64, r: i64, counts: &mut Vec<i64>, out: &mut Vec<Belief>) {
        if k + 1 == counts.len() {
            counts[k] = left;
            let w = counts.iter().map(|&c| ratio(c, r)).collect();
            out.push(Belief::new(w).expect("lattice point on the simplex"));
            return;
        }
        for c in 0..=left {
            counts[k] = c;
            rec(k + 1, left - c, r, counts, out);
        }
    }
    if states > 0 {
        rec(0, r, r, &mut counts, &mut out);
    }
    out
}

/// `‖A‖_lip · Q`.
pub fn theorem1_bound(family: &GameFamily, cert: &PiecewiseCertificate) -> Rational {
    family.lipschitz_seminorm() * int(cert.q as i64)
}

/// Sampled estimates of the revelation constants along a segment. These
/// are minima over samples, not certified constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevelationConstants {
    #[serde(with = "serde_rational")]
    pub c_a: Rational,
    pub c_a_samples: usize,
    pub c: Option<f64>,
    pub c_samples: usize,
    pub c_prime: Option<f64>,
    pub c_prime_samples: usize,
    #[serde(with = "serde_rational::option")]
    pub non_unique_witness: Option<Rational>,
    pub seed: u64,
    pub certified: bool,
}

const SAMPLE_BITS: u32 = 16;

/// Sample pairs are drawn in a fixed order from the seed, so `n` samples
/// are always a prefix of `n + 1` samples.
pub fn sample_alpha_pairs(samples: usize, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = 1i64 << SAMPLE_BITS;
    (0..samples)
        .map(|_| {
            let a = rng.gen_range(0..=denom);
            let mut b = rng.gen_range(0..=denom);
            while b == a {
                b = rng.gen_range(0..=denom);
            }
            (ratio(a, denom), ratio(b, denom))
        })
        .collect()
}

pub fn estimate_small_revelation_constants(
    family: &GameFamily,
    segment: &Segment,
    samples: usize,
    seed: u64,
) -> Result<RevelationConstants> {
    if samples < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "samples".into(),
            reason: "at least 2 samples are needed".into(),
        });
    }
    let pairs = sample_alpha_pairs(samples, seed);
    let half = ratio(1, 2);
    let slopes: Vec<Rational> = pairs
        .par_iter()
        .map(|(a1, a2)| {
            let dist = BeliefDistribution::new(
                vec![segment.at(a1), segment.at(a2)],
                vec![half.clone(), half.clone()],
            )?;
            Ok(v1(family, &dist)? / (a1 - a2).abs())
        })
        .collect::<Result<_>>()?;
    let c_a = slopes.into_iter().min().expect("samples >= 2");

    let strategies: Vec<(MixedAction, bool, MixedAction, bool)> = pairs
        .par_iter()
        .map(|(a1, a2)| {
            let (y1, u1) = optimal_strategy_at(family, segment, a1)?;
            let (y2, u2) = optimal_strategy_at(family, segment, a2)?;
            Ok((y1, u1, y2, u2))
        })
        .collect::<Result<_>>()?;
    let non_unique_witness = pairs.iter().zip(&strategies).find_map(|((a1, a2), (_, u1, _, u2))| {
        if !u1 {
            Some(a1.clone())
        } else if !u2 {
            Some(a2.clone())
        } else {
            None
        }
    });

    let (c, c_prime, c_prime_samples) = if non_unique_witness.is_some() {
        (None, None, 0)
    } else {
        let c = pairs
            .iter()
            .zip(&strategies)
            .map(|((a1, a2), (y1, _, y2, _))| y1.euclidean_distance(y2) / to_f64(&(a1 - a2).abs()))
            .fold(f64::INFINITY, f64::min);
        let deviation: Vec<(f64, usize)> = pairs
            .par_iter()
            .zip(&strategies)
            .enumerate()
            .map(|(idx, ((a1, _), (y1, ..)))| deviation_cost(family, segment, a1, y1, seed, idx as u64))
            .collect::<Result<_>>()?;
        let count = deviation.iter().map(|d| d.1).sum();
        let min = deviation.iter().map(|d| d.0).fold(f64::INFINITY, f64::min);
        (Some(c), min.is_finite().then_some(min), count)
    };
    Ok(RevelationConstants {
        c_a,
        c_a_samples: samples,
        c,
        c_samples: if non_unique_witness.is_some() { 0 } else { samples },
        c_prime,
        c_prime_samples,
        non_unique_witness,
        seed,
        certified: false,
    })
}

/// Step length for deviations from `y*`.
const DEVIATION_STEP: (i64, i64) = (1, 64);
const RANDOM_DIRECTIONS: usize = 4;

/// Minimum of `max_i (A(α)(y*+tε))_i / (t‖ε‖)` over edge directions
/// `e_j − e_l` and a few random zero-sum directions.
fn deviation_cost(
    family: &GameFamily,
    segment: &Segment,
    alpha: &Rational,
    y_star: &MixedAction,
    seed: u64,
    stream: u64,
) -> Result<(f64, usize)> {
    let cols = family.cols();
    let m = family.segment_matrix(segment, alpha)?;
    let mut directions: Vec<Vec<Rational>> = Vec::new();
    for j in 0..cols {
        for l in 0..cols {
            if j != l {
                let mut e = vec![Rational::zero(); cols];
                e[j] = int(1);
                e[l] = int(-1);
                directions.push(e);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    rng.set_stream(stream);
    for _ in 0..RANDOM_DIRECTIONS {
        let raw: Vec<i64> = (0..cols).map(|_| rng.gen_range(-8..=8)).collect();
        let mean: Rational = ratio(raw.iter().sum(), cols as i64);
        let e: Vec<Rational> = raw.iter().map(|&v| int(v) - &mean).collect();
        if e.iter().any(|v| !v.is_zero()) {
            directions.push(e);
        }
    }
    let step = ratio(DEVIATION_STEP.0, DEVIATION_STEP.1);
    let mut best = f64::INFINITY;
    let mut used = 0;
    for e in directions {
        // largest t keeping y* + tε in the simplex
        let t_max = y_star
            .weights()
            .iter()
            .zip(&e)
            .filter(|(_, d)| d.is_negative())
            .map(|(y, d)| -y / d)
            .min();
        let t = match t_max {
            Some(t_max) if t_max.is_zero() => continue,
            Some(t_max) => step.clone().min(t_max),
            None => step.clone(),
        };
        let y: Vec<Rational> = y_star.weights().iter().zip(&e).map(|(y, d)| y + &t * d).collect();
        let worst = m.apply(&y).into_iter().max().expect("nonempty rows");
        let norm = e.iter().map(|d| to_f64(d).powi(2)).sum::<f64>().sqrt();
        best = best.min(to_f64(&worst) / (to_f64(&t) * norm));
        used += 1;
    }
    Ok((best, used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Builtin;
    use crate::rational::dyadic;

    fn full() -> Segment {
        Segment::full(2)
    }

    #[test]
    fn dk_left_region() {
        let dk = Builtin::Dk { alpha: int(0) }.build();
        let region = Region::new(&dk, &MixedAction::pure(0, 2)).unwrap();
        assert_eq!(region.inequalities.len(), 1);
        assert_eq!(region.inequalities[0].coeffs, vec![int(1), int(-1)]);
        assert_eq!(region.interval_on_segment(&full()), Some((ratio(1, 2), int(1))));
    }

    #[test]
    fn market_regions_are_price_bands() {
        let m = 3;
        let market = Builtin::Market { m }.build();
        for q in 1..m as usize {
            let region = Region::new(&market, &MixedAction::pure(q, m as usize + 1)).unwrap();
            assert_eq!(
                region.interval_on_segment(&full()),
                Some((ratio(q as i64, 3), ratio(q as i64 + 1, 3)))
            );
        }
    }

    #[test]
    fn nowhere_optimal_region_is_empty() {
        let g = GameFamily::new(
            vec!["a".into(), "b".into()],
            vec![Matrix::from_ints(&[&[1, -1]]), Matrix::from_ints(&[&[1, -1]])],
        )
        .unwrap();
        assert!(Region::new(&g, &MixedAction::pure(0, 2)).unwrap().is_empty().unwrap());
        assert!(!Region::new(&g, &MixedAction::pure(1, 2)).unwrap().is_empty().unwrap());
    }

    #[test]
    fn dk_half_certificate() {
        let dk = Builtin::Dk { alpha: ratio(1, 2) }.build();
        let PiecewiseOutcome::Certificate(cert) = detect_piecewise(&dk, &full(), &dyadic(12)).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(cert.q, 2);
        assert_eq!(theorem1_bound(&dk, &cert), int(4));
        assert_eq!(cert.strategies(), vec![MixedAction::pure(1, 2), MixedAction::pure(0, 2)]);
    }

    #[test]
    fn market_three_breakpoints_are_exact() {
        let market = Builtin::Market { m: 3 }.build();
        let PiecewiseOutcome::Certificate(cert) = detect_piecewise(&market, &full(), &dyadic(12)).unwrap() else {
            panic!("expected a certificate");
        };
        let ends: Vec<_> = cert.entries.iter().flat_map(|e| e.intervals.iter().map(|i| i.1.clone())).collect();
        assert_eq!(ends, vec![ratio(1, 3), ratio(2, 3), int(1)]);
        assert!(cert.q <= 4);
        let report = verify_cover(&cert.regions(), &full(), CoverMode::Exact1d).unwrap();
        assert!(report.covered);
    }

    #[test]
    fn dropping_a_region_leaves_a_gap() {
        let market = Builtin::Market { m: 3 }.build();
        let strategies: Vec<_> = [0, 2, 3].iter().map(|&q| MixedAction::pure(q, 4)).collect();
        let regions = regions_from_strategies(&market, &strategies).unwrap();
        let report = verify_cover(&regions, &full(), CoverMode::Exact1d).unwrap();
        assert!(!report.covered);
        let alpha = full().locate(&report.uncovered_witness.unwrap()).unwrap();
        assert!(alpha > ratio(1, 3) && alpha < ratio(2, 3));
    }

    #[test]
    fn grid_cover_agrees_with_exact() {
        let dk = Builtin::Dk { alpha: int(0) }.build();
        let regions =
            regions_from_strategies(&dk, &[MixedAction::pure(0, 2), MixedAction::pure(1, 2)]).unwrap();
        assert!(verify_cover(&regions, &full(), CoverMode::Grid { resolution: 16 }).unwrap().covered);
        assert!(verify_cover(&regions[..1], &full(), CoverMode::Grid { resolution: 16 }).unwrap().uncovered_witness.is_some());
    }

    #[test]
    fn zamir_is_not_piecewise() {
        let z = Builtin::Zamir.build();
        let PiecewiseOutcome::NonPiecewise(ev) = detect_piecewise(&z, &full(), &dyadic(12)).unwrap() else {
            panic!("expected evidence");
        };
        assert_eq!((ev.start.clone(), ev.end.clone()), (int(0), int(1)));
        assert_eq!(ev.strategy_at_start.weights(), &[ratio(1, 4), ratio(3, 4)]);
        assert_eq!(ev.strategy_at_end.weights(), &[ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn zamir_constants() {
        let z = Builtin::Zamir.build();
        let c = estimate_small_revelation_constants(&z, &full(), 40, 0).unwrap();
        assert_eq!(c.c_a, ratio(1, 2));
        let expected = (2f64).sqrt() / 4.0;
        assert!((c.c.unwrap() - expected).abs() < 1e-12);
        assert!(c.c_prime.unwrap() > 0.0);
    }

    #[test]
    fn lattice_size() {
        assert_eq!(simplex_lattice(3, 4).len(), 15);
        assert_eq!(simplex_lattice(2, 8).len(), 9);
    }
}
