//! Total-variation distance on beliefs, its level-two transport lift on
//! belief distributions, and the invariant function built from regions.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Belief, GameFamily};
use crate::lp::{LinearProgram, LpOutcome, Sense};
use crate::piecewise::Region;
use crate::rational::{abs, int, ratio, serde_rational, Rational};

/// Finitely supported distribution over beliefs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeliefDistribution {
    atoms: Vec<Belief>,
    #[serde(with = "serde_rational::vec")]
    weights: Vec<Rational>,
}

impl BeliefDistribution {
    pub fn new(atoms: Vec<Belief>, weights: Vec<Rational>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::InvalidBelief(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        let states = atoms[0].len();
        if let Some(bad) = atoms.iter().find(|a| a.len() != states) {
            return Err(Error::DimensionMismatch {
                expected: states,
                found: bad.len(),
            });
        }
        if weights.iter().any(|w| w < &Rational::zero()) {
            return Err(Error::InvalidBelief("negative atom weight".into()));
        }
        if weights.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidBelief("atom weights do not sum to 1".into()));
        }
        Ok(BeliefDistribution { atoms, weights })
    }

    pub fn dirac(p: Belief) -> Self {
        BeliefDistribution {
            atoms: vec![p],
            weights: vec![Rational::one()],
        }
    }

    /// `½δ_p + ½δ_q`.
    pub fn even_pair(p: Belief, q: Belief) -> Self {
        let half = ratio(1, 2);
        BeliefDistribution {
            atoms: vec![p, q],
            weights: vec![half.clone(), half],
        }
    }

    pub fn atoms(&self) -> &[Belief] {
        &self.atoms
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn states(&self) -> usize {
        self.atoms[0].len()
    }

    pub fn barycenter(&self) -> Belief {
        let mut acc = vec![Rational::zero(); self.states()];
        for (atom, w) in self.atoms.iter().zip(&self.weights) {
            for (a, p) in acc.iter_mut().zip(atom.weights()) {
                *a += w * p;
            }
        }
        Belief::new(acc).expect("convex combination of beliefs")
    }

    /// `t·self + (1−t)·other`, atoms concatenated.
    pub fn mix(&self, t: &Rational, other: &BeliefDistribution) -> Result<Self> {
        let s = Rational::one() - t;
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        let mut weights: Vec<Rational> = self.weights.iter().map(|w| w * t).collect();
        weights.extend(other.weights.iter().map(|w| w * &s));
        BeliefDistribution::new(atoms, weights)
    }
}

fn check_dims(p: &Belief, q: &Belief) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(())
}

/// `max_B |p(B) − q(B)|`, i.e. half the L1 distance.
pub fn tv_distance(p: &Belief, q: &Belief) -> Result<Rational> {
    check_dims(p, q)?;
    let l1: Rational = p.weights().iter().zip(q.weights()).map(|(a, b)| abs(&(a - b))).sum();
    Ok(l1 / int(2))
}

/// `inf_{q ∈ region} d₁(p, q)` by an exact LP.
pub fn tv_distance_to_region(p: &Belief, region: &Region) -> Result<Rational> {
    let k = p.len();
    if region.states != k {
        return Err(Error::DimensionMismatch {
            expected: region.states,
            found: k,
        });
    }
    if region.contains(p) {
        return Ok(Rational::zero());
    }
    // variables: q (k), s (k) with s ≥ |p − q|
    let half = Rational::one() / int(2);
    let mut objective = vec![Rational::zero(); k];
    objective.extend(std::iter::repeat_n(half, k));
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for ineq in &region.inequalities {
        let mut row = ineq.coeffs.clone();
        row.resize(2 * k, Rational::zero());
        lp.le(row, Rational::zero());
    }
    let mut simplex = vec![Rational::one(); k];
    simplex.resize(2 * k, Rational::zero());
    lp.eq(simplex, Rational::one());
    for (i, pi) in p.weights().iter().enumerate() {
        let mut upper = vec![Rational::zero(); 2 * k];
        upper[i] = int(1);
        upper[k + i] = int(-1);
        lp.le(upper, pi.clone());
        let mut lower = vec![Rational::zero(); 2 * k];
        lower[i] = int(-1);
        lower[k + i] = int(-1);
        lp.le(lower, -pi);
    }
    match lp.solve()? {
        LpOutcome::Optimal(sol) => Ok(sol.objective),
        _ => Err(Error::EmptyRegion),
    }
}

/// Level-two Kantorovich distance with ground cost `d₁`, by the exact
/// transport LP.
pub fn kantorovich_d2(a: &BeliefDistribution, b: &BeliefDistribution) -> Result<Rational> {
    let (n, m) = (a.atoms.len(), b.atoms.len());
    let mut cost = Vec::with_capacity(n * m);
    for p in &a.atoms {
        for q in &b.atoms {
            cost.push(tv_distance(p, q)?);
        }
    }
    let mut lp = LinearProgram::new(Sense::Minimize, cost);
    for s in 0..n {
        let mut row = vec![Rational::zero(); n * m];
        row[s * m..(s + 1) * m].fill(Rational::one());
        lp.eq(row, a.weights[s].clone());
    }
    for t in 0..m {
        let mut row = vec![Rational::zero(); n * m];
        for s in 0..n {
            row[s * m + t] = Rational::one();
        }
        lp.eq(row, b.weights[t].clone());
    }
    Ok(lp.solve()?.optimal()?.objective)
}

/// `‖A‖_lip · Σ_q (1 − d₁(p, Δ_q))`.
pub fn invariant_h(family: &GameFamily, regions: &[Region], p: &Belief) -> Result<Rational> {
    let mut total = Rational::zero();
    for region in regions {
        total += Rational::one() - tv_distance_to_region(p, region)?;
    }
    Ok(family.lipschitz_seminorm() * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Builtin, MixedAction};
    use crate::piecewise::regions_from_strategies;

    fn b(p1: (i64, i64)) -> Belief {
        Belief::binary(ratio(p1.0, p1.1)).unwrap()
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&Belief::dirac(0, 3), &Belief::dirac(2, 3)).unwrap(), int(1));
        assert_eq!(tv_distance(&b((1, 2)), &b((1, 4))).unwrap(), ratio(1, 4));
        assert_eq!(tv_distance(&b((1, 3)), &b((1, 3))).unwrap(), int(0));
    }

    #[test]
    fn region_distances() {
        let dk = Builtin::Dk { alpha: int(0) }.build();
        let left = Region::new(&dk, &MixedAction::pure(0, 2)).unwrap();
        assert_eq!(tv_distance_to_region(&b((1, 4)), &left).unwrap(), ratio(1, 4));
        assert_eq!(tv_distance_to_region(&b((3, 4)), &left).unwrap(), int(0));
        let market = Builtin::Market { m: 2 }.build();
        let mid = Region::new(&market, &MixedAction::pure(1, 3)).unwrap();
        assert_eq!(tv_distance_to_region(&b((1, 4)), &mid).unwrap(), ratio(1, 4));
    }

    #[test]
    fn empty_region_errors() {
        let g = GameFamily::new(
            vec!["a".into(), "b".into()],
            vec![crate::game::Matrix::from_ints(&[&[1]]), crate::game::Matrix::from_ints(&[&[1]])],
        )
        .unwrap();
        let r = Region::new(&g, &MixedAction::pure(0, 1)).unwrap();
        assert!(matches!(tv_distance_to_region(&b((1, 2)), &r), Err(Error::EmptyRegion)));
    }

    #[test]
    fn transport_examples() {
        let p = b((1, 3));
        let q = b((3, 4));
        let dp = BeliefDistribution::dirac(p.clone());
        let dq = BeliefDistribution::dirac(q.clone());
        assert_eq!(kantorovich_d2(&dp, &dq).unwrap(), tv_distance(&p, &q).unwrap());
        assert_eq!(kantorovich_d2(&dp, &dp).unwrap(), int(0));
        let split = BeliefDistribution::even_pair(Belief::dirac(0, 2), Belief::dirac(1, 2));
        let centre = BeliefDistribution::dirac(Belief::uniform(2));
        assert_eq!(kantorovich_d2(&split, &centre).unwrap(), ratio(1, 2));
        assert_eq!(split.barycenter(), Belief::uniform(2));
    }

    #[test]
    fn invariant_h_examples() {
        let dk = Builtin::Dk { alpha: int(0) }.build();
        let regions =
            regions_from_strategies(&dk, &[MixedAction::pure(0, 2), MixedAction::pure(1, 2)]).unwrap();
        assert_eq!(invariant_h(&dk, &regions, &Belief::uniform(2)).unwrap(), int(4));
        assert_eq!(invariant_h(&dk, &regions, &Belief::dirac(0, 2)).unwrap(), int(3));
    }
}
