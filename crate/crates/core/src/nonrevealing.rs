//! The non-revealing game: its value `u(p)`, almost-fairness certificates
//! along belief segments, and the parametric structure of the uninformed
//! player's optimal strategies along a segment.
//!
//! Queried parameters are dyadic or small-denominator rationals, so all LPs
//! stay exact.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::game::{Belief, GameFamily, MixedAction, Segment};
use crate::matrix_game::{
    feasible_common_row_strategy, feasible_common_strategy, game_value, matrix_game_value,
    optimal_set_bounds,
};
use crate::rational::{dyadic, int, serde_rational, simplest_in, Rational};

pub const DEFAULT_DEPTH: u32 = 10;

/// `u(p) = val(A^p)`, exact.
pub fn u_value(family: &GameFamily, p: &Belief) -> Result<Rational> {
    game_value(&family.expected_matrix(p)?)
}

/// `‖A(1) − A(0)‖_max` along a segment: the Lipschitz constant of `u` in α.
pub fn segment_lipschitz(family: &GameFamily, segment: &Segment) -> Result<Rational> {
    let a1 = family.expected_matrix(&segment.at_one)?;
    let a0 = family.expected_matrix(&segment.at_zero)?;
    Ok(a1.add_scaled(&-Rational::one(), &a0).max_abs())
}

/// Interval `[start, end]` of α on which `u ≡ 0` is certified: `x` makes
/// the row player's payoff nonnegative and `y` the column player's payoff
/// nonpositive at both endpoints, hence at every point in between.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedInterval {
    #[serde(with = "serde_rational")]
    pub start: Rational,
    #[serde(with = "serde_rational")]
    pub end: Rational,
    pub row_witness: MixedAction,
    pub col_witness: MixedAction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonzeroPoint {
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostFairReport {
    pub segment: Segment,
    pub depth: u32,
    pub certified_intervals: Vec<CertifiedInterval>,
    /// Leaves of width `2^-depth` without a witness pair, as `[start, end]`.
    #[serde(with = "interval_list")]
    pub uncertified_intervals: Vec<(Rational, Rational)>,
    /// Endpoints of uncertified leaves where `u` was checked to be exactly 0.
    #[serde(with = "serde_rational::vec")]
    pub sampled_zero_points: Vec<Rational>,
    /// Endpoints where `u ≠ 0`; any entry disproves almost-fairness.
    pub nonzero_points: Vec<NonzeroPoint>,
    #[serde(with = "serde_rational")]
    pub segment_lipschitz: Rational,
    /// Bound on `|u|` over the uncertified leaves; zero iff all certified.
    #[serde(with = "serde_rational")]
    pub epsilon_bound: Rational,
}

impl AlmostFairReport {
    pub fn fully_certified(&self) -> bool {
        self.uncertified_intervals.is_empty()
    }

    pub fn has_violation(&self) -> bool {
        !self.nonzero_points.is_empty()
    }
}

pub(crate) mod interval_list {
    use super::Rational;
    use crate::rational::{format_rational, parse_rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(a, b)| [format_rational(a), format_rational(b)]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Rational, Rational)>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[a, b]| {
                Ok((
                    parse_rational(a).map_err(D::Error::custom)?,
                    parse_rational(b).map_err(D::Error::custom)?,
                ))
            })
            .collect()
    }
}

fn witness_pair(
    family: &GameFamily,
    segment: &Segment,
    start: &Rational,
    end: &Rational,
) -> Result<Option<(MixedAction, MixedAction)>> {
    let a = family.segment_matrix(segment, start)?;
    let b = family.segment_matrix(segment, end)?;
    let Some(y) = feasible_common_strategy(&a, &b)? else {
        return Ok(None);
    };
    Ok(feasible_common_row_strategy(&a, &b)?.map(|x| (x, y)))
}

/// Bisects `[0, 1]` down to dyadic depth `depth`, certifying `u ≡ 0` on
/// every interval that admits a constant witness pair. Uncertified leaves
/// get exact zero checks at their endpoints and a Lipschitz slack.
pub fn almost_fair_check(family: &GameFamily, segment: &Segment, depth: u32) -> Result<AlmostFairReport> {
    let mut certified = Vec::new();
    let mut uncertified = Vec::new();
    let mut frontier = vec![(Rational::zero(), Rational::one())];
    for level in 0..=depth {
        let examined: Vec<_> = frontier
            .par_iter()
            .map(|(a, b)| witness_pair(family, segment, a, b))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for ((a, b), witness) in frontier.into_iter().zip(examined) {
            match witness {
                Some((x, y)) => certified.push(CertifiedInterval {
                    start: a,
                    end: b,
                    row_witness: x,
                    col_witness: y,
                }),
                None if level < depth => {
                    let mid = (&a + &b) / int(2);
                    next.push((a, mid.clone()));
                    next.push((mid, b));
                }
                None => uncertified.push((a, b)),
            }
        }
        frontier = next;
    }
    certified.sort_by(|l, r| l.start.cmp(&r.start));
    uncertified.sort();

    let mut points: Vec<Rational> = uncertified
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    points.sort();
    points.dedup();
    let values: Vec<Rational> = points
        .par_iter()
        .map(|alpha| u_value(family, &segment.at(alpha)))
        .collect::<Result<_>>()?;
    let mut sampled_zero_points = Vec::new();
    let mut nonzero_points = Vec::new();
    for (alpha, value) in points.into_iter().zip(values) {
        if value.is_zero() {
            sampled_zero_points.push(alpha);
        } else {
            nonzero_points.push(NonzeroPoint { alpha, value });
        }
    }
    let lipschitz = segment_lipschitz(family, segment)?;
    let epsilon_bound = if uncertified.is_empty() {
        Rational::zero()
    } else {
        &lipschitz * dyadic(depth)
    };
    Ok(AlmostFairReport {
        segment: segment.clone(),
        depth,
        certified_intervals: certified,
        uncertified_intervals: uncertified,
        sampled_zero_points,
        nonzero_points,
        segment_lipschitz: lipschitz,
        epsilon_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakpointInterval {
    #[serde(with = "serde_rational")]
    pub start: Rational,
    #[serde(with = "serde_rational")]
    pub end: Rational,
    /// A single strategy optimal on the whole interval, when one exists.
    pub constant_strategy: Option<MixedAction>,
    /// The optimal strategy is unique at every examined interior sample.
    pub unique: bool,
    #[serde(with = "serde_rational")]
    pub sample_point: Rational,
    pub sample_strategy: MixedAction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakpointReport {
    pub segment: Segment,
    pub depth: u32,
    pub intervals: Vec<BreakpointInterval>,
}

struct Leaf {
    start: Rational,
    end: Rational,
    constant: Option<MixedAction>,
    unique: bool,
}

/// Optimal strategy at α plus a uniqueness flag.
pub fn optimal_strategy_at(
    family: &GameFamily,
    segment: &Segment,
    alpha: &Rational,
) -> Result<(MixedAction, bool)> {
    let m = family.segment_matrix(segment, alpha)?;
    let sol = matrix_game_value(&m)?;
    let unique = optimal_set_bounds(&m, &sol.value)?.is_singleton();
    Ok((sol.col_optimal, unique))
}

/// A finest-level leaf often straddles a breakpoint with a small
/// denominator; split there when both sides have a constant strategy.
fn split_at_simple_breakpoint(
    family: &GameFamily,
    segment: &Segment,
    a: &Rational,
    b: &Rational,
) -> Result<Option<[Leaf; 2]>> {
    let c = simplest_in(a, b);
    if &c == a {
        return Ok(None);
    }
    let (ma, mc, mb) = (
        family.segment_matrix(segment, a)?,
        family.segment_matrix(segment, &c)?,
        family.segment_matrix(segment, b)?,
    );
    let (Some(left), Some(right)) = (feasible_common_strategy(&ma, &mc)?, feasible_common_strategy(&mc, &mb)?) else {
        return Ok(None);
    };
    let unique_left = optimal_strategy_at(family, segment, &((a + &c) / int(2)))?.1;
    let unique_right = optimal_strategy_at(family, segment, &((&c + b) / int(2)))?.1;
    Ok(Some([
        Leaf {
            start: a.clone(),
            end: c.clone(),
            constant: Some(left),
            unique: unique_left,
        },
        Leaf {
            start: c,
            end: b.clone(),
            constant: Some(right),
            unique: unique_right,
        },
    ]))
}

/// Adaptive bisection of a segment into intervals where the uninformed
/// player's optimal strategy is constant, and stretches where it varies.
pub fn parametric_breakpoints(family: &GameFamily, segment: &Segment, depth: u32) -> Result<BreakpointReport> {
    let depth = depth.max(1);
    let mut leaves: Vec<Leaf> = Vec::new();
    let mut frontier = vec![(Rational::zero(), Rational::one())];
    for level in 0..=depth {
        let examined: Vec<_> = frontier
            .par_iter()
            .map(|(a, b)| -> Result<_> {
                let ma = family.segment_matrix(segment, a)?;
                let mb = family.segment_matrix(segment, b)?;
                let constant = feasible_common_strategy(&ma, &mb)?;
                let closes = constant.is_some() || level == depth;
                let unique = if closes {
                    optimal_strategy_at(family, segment, &((a + b) / int(2)))?.1
                } else {
                    false
                };
                Ok((constant, closes, unique))
            })
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for ((a, b), (constant, closes, unique)) in frontier.into_iter().zip(examined) {
            if closes && constant.is_none() {
                if let Some(halves) = split_at_simple_breakpoint(family, segment, &a, &b)? {
                    leaves.extend(halves);
                    continue;
                }
            }
            if closes {
                leaves.push(Leaf {
                    start: a,
                    end: b,
                    constant,
                    unique,
                });
            } else {
                let mid = (&a + &b) / int(2);
                next.push((a, mid.clone()));
                next.push((mid, b));
            }
        }
        frontier = next;
    }
    leaves.sort_by(|l, r| l.start.cmp(&r.start));

    // Merge neighbours: a constant strategy extends while it stays feasible;
    // varying leaves coalesce with varying leaves.
    let mut merged: Vec<Leaf> = Vec::new();
    for leaf in leaves {
        if let Some(last) = merged.last_mut() {
            let joinable = match (&last.constant, &leaf.constant) {
                (Some(y), Some(_)) => {
                    let m_end = family.segment_matrix(segment, &leaf.end)?;
                    m_end
                        .apply(y.weights())
                        .iter()
                        .all(|v| *v <= Rational::zero())
                }
                (None, None) => true,
                _ => false,
            };
            if joinable {
                last.end = leaf.end;
                last.unique &= leaf.unique;
                continue;
            }
        }
        merged.push(leaf);
    }

    let intervals = merged
        .into_par_iter()
        .map(|leaf| {
            let sample_point = (&leaf.start + &leaf.end) / int(2);
            let (sample_strategy, _) = optimal_strategy_at(family, segment, &sample_point)?;
            Ok(BreakpointInterval {
                start: leaf.start,
                end: leaf.end,
                constant_strategy: leaf.constant,
                unique: leaf.unique,
                sample_point,
                sample_strategy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BreakpointReport {
        segment: segment.clone(),
        depth,
        intervals,
    })
}
