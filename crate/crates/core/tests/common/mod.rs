// Oracles and generators shared by the integration and acceptance suites.
#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use repgame::game::{Belief, GameFamily, Segment};
use repgame::lp::{LinearProgram, Sense};
use repgame::metric::BeliefDistribution;
use repgame::rational::{int, ratio, Rational};
use repgame::Builtin;

pub fn builtins() -> Vec<Builtin> {
    vec![
        Builtin::Zamir,
        Builtin::Dk { alpha: int(0) },
        Builtin::Dk { alpha: ratio(1, 2) },
        Builtin::Market { m: 1 },
        Builtin::Market { m: 2 },
        Builtin::Market { m: 3 },
    ]
}

pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, denom: i64) -> Rational {
    ratio(rng.gen_range(lo * denom..=hi * denom), denom)
}

/// Belief with weights on the lattice `1/denom`.
pub fn random_belief<R: Rng>(rng: &mut R, states: usize, denom: i64) -> Belief {
    let mut cuts: Vec<i64> = (0..states - 1).map(|_| rng.gen_range(0..=denom)).collect();
    cuts.sort();
    let mut prev = 0;
    let mut w = Vec::with_capacity(states);
    for c in cuts.into_iter().chain(std::iter::once(denom)) {
        w.push(ratio(c - prev, denom));
        prev = c;
    }
    Belief::new(w).unwrap()
}

pub fn random_distribution<R: Rng>(rng: &mut R, states: usize, max_atoms: usize) -> BeliefDistribution {
    let atoms: Vec<Belief> = (0..rng.gen_range(1..=max_atoms)).map(|_| random_belief(rng, states, 12)).collect();
    let raw: Vec<i64> = atoms.iter().map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    BeliefDistribution::new(atoms, raw.iter().map(|&r| ratio(r, total)).collect()).unwrap()
}

fn stage_rows(family: &GameFamily, segment: &Segment, alpha: &Rational) -> Vec<Vec<Rational>> {
    family.segment_matrix(segment, alpha).unwrap().to_rows()
}

/// Splittings of `alpha` onto the grid with at most two atoms: the Dirac
/// mass when `alpha` is a grid point, and every bracketing pair.
pub fn two_point_splittings(alphas: &[Rational], alpha: &Rational) -> Vec<Vec<(usize, Rational)>> {
    let mut out = Vec::new();
    for (s, a) in alphas.iter().enumerate() {
        if a == alpha {
            out.push(vec![(s, Rational::one())]);
        }
    }
    for (s1, a1) in alphas.iter().enumerate() {
        for (s2, a2) in alphas.iter().enumerate() {
            if a1 < alpha && alpha < a2 {
                let w1 = (a2 - alpha) / (a2 - a1);
                let w2 = Rational::one() - &w1;
                out.push(vec![(s1, w1), (s2, w2)]);
            }
        }
    }
    out
}

/// `min_y max_𝒫 Σ_s w_s [max_i (A_s y)_i + f_s]` with `𝒫` ranging over the
/// explicit list of two-point splittings. The splitting polytope's
/// vertices are exactly these, so this equals the grid Shapley operator.
pub fn brute_force_t_grid(
    family: &GameFamily,
    segment: &Segment,
    alphas: &[Rational],
    f: &[Rational],
    alpha: &Rational,
) -> Rational {
    let cols = family.cols();
    let s_count = alphas.len();
    let z = cols + s_count;
    let width = z + 1;
    let mut objective = vec![Rational::zero(); width];
    objective[z] = Rational::one();
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for s in 0..s_count {
        lp.set_free(cols + s);
    }
    lp.set_free(z);
    for (s, a) in alphas.iter().enumerate() {
        for row in stage_rows(family, segment, a) {
            let mut c = row.clone();
            c.resize(width, Rational::zero());
            c[cols + s] = int(-1);
            lp.le(c, -f[s].clone());
        }
    }
    for split in two_point_splittings(alphas, alpha) {
        let mut c = vec![Rational::zero(); width];
        for (s, w) in split {
            c[cols + s] = w;
        }
        c[z] = int(-1);
        lp.le(c, Rational::zero());
    }
    let mut simplex = vec![Rational::one(); cols];
    simplex.resize(width, Rational::zero());
    lp.eq(simplex, Rational::one());
    lp.solve().unwrap().optimal().unwrap().objective
}

/// Hyperplane form: `min μ + λα` over `(y, λ, μ)` with
/// `μ + λα_s ≥ (A_s y)_i + f_s` for all grid points and rows.
pub fn hyperplane_t_grid(
    family: &GameFamily,
    segment: &Segment,
    alphas: &[Rational],
    f: &[Rational],
    alpha: &Rational,
) -> Rational {
    let cols = family.cols();
    let (mu, lambda) = (cols, cols + 1);
    let mut objective = vec![Rational::zero(); cols + 2];
    objective[mu] = Rational::one();
    objective[lambda] = alpha.clone();
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    lp.set_free(mu).set_free(lambda);
    for (s, a) in alphas.iter().enumerate() {
        for row in stage_rows(family, segment, a) {
            let mut c: Vec<Rational> = row.iter().map(|v| -v).collect();
            c.push(Rational::one());
            c.push(a.clone());
            lp.ge(c, f[s].clone());
        }
    }
    let mut simplex = vec![Rational::one(); cols];
    simplex.extend([Rational::zero(), Rational::zero()]);
    lp.eq(simplex, Rational::one());
    lp.solve().unwrap().optimal().unwrap().objective
}

/// Kantorovich–Rubinstein dual: the best 1-Lipschitz potential on the
/// union of atoms.
pub fn kr_dual_d2(a: &BeliefDistribution, b: &BeliefDistribution) -> Rational {
    let mut atoms: Vec<Belief> = a.atoms().to_vec();
    atoms.extend(b.atoms().iter().cloned());
    let mut mass = vec![Rational::zero(); atoms.len()];
    for (i, w) in a.weights().iter().enumerate() {
        mass[i] += w;
    }
    for (j, w) in b.weights().iter().enumerate() {
        mass[a.atoms().len() + j] -= w;
    }
    let n = atoms.len();
    let mut lp = LinearProgram::new(Sense::Maximize, mass);
    for v in 0..n {
        lp.set_free(v);
    }
    for u in 0..n {
        for v in 0..n {
            if u != v {
                let mut c = vec![Rational::zero(); n];
                c[u] = int(1);
                c[v] = int(-1);
                lp.le(c, repgame::metric::tv_distance(&atoms[u], &atoms[v]).unwrap());
            }
        }
    }
    lp.solve().unwrap().optimal().unwrap().objective
}
