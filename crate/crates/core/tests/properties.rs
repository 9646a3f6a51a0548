mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use repgame::game::{Belief, MixedAction, Segment};
use repgame::martingale::{doob_bound_holds, tau_survival_probability, walk_law};
use repgame::matrix_game::game_value;
use repgame::metric::{invariant_h, kantorovich_d2, tv_distance, tv_distance_to_region, BeliefDistribution};
use repgame::piecewise::{
    detect_piecewise, estimate_small_revelation_constants, verify_cover, CoverMode, PiecewiseCertificate,
    PiecewiseOutcome,
};
use repgame::rational::{dyadic, int, ratio, Rational};
use repgame::recursion::v1;
use repgame::{Builtin, GameFamily};

use common::{builtins, kr_dual_d2, random_belief, random_distribution};

fn certificate(family: &GameFamily) -> PiecewiseCertificate {
    match detect_piecewise(family, &Segment::full(2), &dyadic(12)).unwrap() {
        PiecewiseOutcome::Certificate(c) => c,
        other => panic!("expected a certificate, got {other:?}"),
    }
}

fn piecewise_builtins() -> Vec<Builtin> {
    builtins().into_iter().filter(|b| !matches!(b, Builtin::Zamir)).collect()
}

fn belief_strategy(states: usize) -> impl Strategy<Value = Belief> {
    prop::collection::vec(0i64..=12, states).prop_filter_map("nonzero mass", |w| {
        let total: i64 = w.iter().sum();
        (total > 0).then(|| Belief::new(w.iter().map(|&x| ratio(x, total)).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tv_is_a_metric(p in belief_strategy(3), q in belief_strategy(3), r in belief_strategy(3)) {
        let pq = tv_distance(&p, &q).unwrap();
        prop_assert_eq!(&pq, &tv_distance(&q, &p).unwrap());
        prop_assert!(pq <= tv_distance(&p, &r).unwrap() + tv_distance(&r, &q).unwrap());
        prop_assert_eq!(tv_distance(&p, &p).unwrap(), int(0));
        prop_assert!(pq >= int(0) && pq <= int(1));
    }

    #[test]
    fn transforms_preserve_value(p1 in 0i64..=16, yw in 0i64..=8, xw in 0i64..=8) {
        let zamir = Builtin::Zamir.build();
        let p = Belief::binary(ratio(p1, 16)).unwrap();
        let base = game_value(&zamir.expected_matrix(&p).unwrap()).unwrap();
        let y = MixedAction::new(vec![ratio(yw, 8), ratio(8 - yw, 8)]).unwrap();
        let x = MixedAction::new(vec![ratio(xw, 8), ratio(8 - xw, 8)]).unwrap();
        let wide = zamir.pure_piecewise_transform(&[y]).unwrap();
        let tall = zamir.add_mixed_row(&x).unwrap();
        prop_assert_eq!(&base, &game_value(&wide.expected_matrix(&p).unwrap()).unwrap());
        prop_assert_eq!(&base, &game_value(&tall.expected_matrix(&p).unwrap()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transport_dominates_barycenter_shift(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_distribution(&mut rng, 2, 3);
        let b = random_distribution(&mut rng, 2, 3);
        let d2 = kantorovich_d2(&a, &b).unwrap();
        prop_assert!(d2 >= tv_distance(&a.barycenter(), &b.barycenter()).unwrap());
        prop_assert_eq!(d2, kr_dual_d2(&a, &b));
    }

    #[test]
    fn v1_is_concave_under_mixing(seed in any::<u64>(), t in 0i64..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = ratio(t, 8);
        for game in [Builtin::Zamir, Builtin::Market { m: 2 }] {
            let fam = game.build();
            let a = random_distribution(&mut rng, 2, 3);
            let b = random_distribution(&mut rng, 2, 3);
            let mixed = v1(&fam, &a.mix(&t, &b).unwrap()).unwrap();
            let chord = &t * v1(&fam, &a).unwrap() + (int(1) - &t) * v1(&fam, &b).unwrap();
            prop_assert!(mixed >= chord);
        }
    }

    #[test]
    fn invariant_function_is_nonnegative_and_concave(a in 0i64..=64, b in 0i64..=64) {
        for game in [Builtin::Dk { alpha: int(0) }, Builtin::Market { m: 2 }] {
            let fam = game.build();
            let regions = certificate(&fam).regions();
            let h = |x: i64| invariant_h(&fam, &regions, &Belief::binary(ratio(x, 64)).unwrap()).unwrap();
            let (ha, hb) = (h(a), h(b));
            prop_assert!(ha >= int(0));
            if (a + b) % 2 == 0 {
                prop_assert!(h((a + b) / 2) * int(2) >= ha + hb);
            }
        }
    }
}

#[test]
fn v1_below_distance_to_every_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for game in piecewise_builtins() {
        let fam = game.build();
        let lip = fam.lipschitz_seminorm();
        let regions = certificate(&fam).regions();
        for _ in 0..100 {
            let dist = random_distribution(&mut rng, 2, 3);
            let value = v1(&fam, &dist).unwrap();
            for region in &regions {
                let expected_distance: Rational = dist
                    .atoms()
                    .iter()
                    .zip(dist.weights())
                    .map(|(p, w)| w * tv_distance_to_region(p, region).unwrap())
                    .sum();
                assert!(value <= &lip * expected_distance, "{}", game.name());
            }
        }
    }
}

#[test]
fn v1_vanishes_inside_one_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for game in piecewise_builtins() {
        let fam = game.build();
        let cert = certificate(&fam);
        for entry in &cert.entries {
            let (lo, hi) = entry.region.interval_on_segment(&cert.segment).unwrap();
            let atoms: Vec<Belief> = (0..3)
                .map(|_| {
                    let t = ratio(rand::Rng::gen_range(&mut rng, 0..=16), 16);
                    Belief::binary(&lo + (&hi - &lo) * t).unwrap()
                })
                .collect();
            let dist = BeliefDistribution::new(atoms, vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)]).unwrap();
            assert_eq!(v1(&fam, &dist).unwrap(), int(0), "{}", game.name());
        }
    }
}

#[test]
fn lipschitz_in_transport_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for game in builtins() {
        let fam = game.build();
        let lip = fam.lipschitz_seminorm();
        for _ in 0..50 {
            let a = random_distribution(&mut rng, 2, 3);
            let b = random_distribution(&mut rng, 2, 3);
            let gap = (v1(&fam, &a).unwrap() - v1(&fam, &b).unwrap()).abs();
            assert!(gap <= &lip * kantorovich_d2(&a, &b).unwrap());
        }
    }
}

#[test]
fn certificate_strategies_are_optimal_in_their_regions() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for game in piecewise_builtins() {
        let fam = game.build();
        let cert = certificate(&fam);
        for entry in &cert.entries {
            let (lo, hi) = entry.region.interval_on_segment(&cert.segment).unwrap();
            for _ in 0..20 {
                let t = ratio(rand::Rng::gen_range(&mut rng, 0..=1000), 1000);
                let p = Belief::binary(&lo + (&hi - &lo) * t).unwrap();
                let payoff = fam.expected_matrix(&p).unwrap().apply(entry.strategy.weights());
                assert!(payoff.iter().all(|v| !v.is_positive()), "{}", game.name());
            }
        }
    }
}

#[test]
fn greedy_cover_is_minimal() {
    for game in piecewise_builtins() {
        let fam = game.build();
        let cert = certificate(&fam);
        let regions = cert.regions();
        assert!(verify_cover(&regions, &cert.segment, CoverMode::Exact1d).unwrap().covered);
        if regions.len() > 1 {
            for skip in 0..regions.len() {
                let fewer: Vec<_> = regions.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect();
                let report = verify_cover(&fewer, &cert.segment, CoverMode::Exact1d).unwrap();
                assert!(!report.covered, "{} without region {skip}", game.name());
            }
        }
    }
}

#[test]
fn zamir_never_certified() {
    let z = Builtin::Zamir.build();
    for k in [4, 8, 12, 16] {
        let outcome = detect_piecewise(&z, &Segment::full(2), &dyadic(k)).unwrap();
        assert!(!matches!(outcome, PiecewiseOutcome::Certificate(_)), "min_width 2^-{k}");
    }
}

#[test]
fn revelation_estimate_is_antitone_in_samples() {
    let z = Builtin::Zamir.build();
    let market = Builtin::Market { m: 2 }.build();
    for fam in [z, market] {
        let mut prev: Option<Rational> = None;
        for n in [2, 8, 32, 64] {
            let c = estimate_small_revelation_constants(&fam, &Segment::full(2), n, 5).unwrap();
            if let Some(p) = &prev {
                assert!(c.c_a <= *p);
            }
            prev = Some(c.c_a);
        }
    }
}

#[test]
fn market_constant_piece_has_no_profitable_revelation() {
    let market = Builtin::Market { m: 2 }.build();
    let seg = Segment::new(Belief::binary(ratio(1, 2)).unwrap(), Belief::binary(int(0)).unwrap()).unwrap();
    let c = estimate_small_revelation_constants(&market, &seg, 50, 0).unwrap();
    assert!(c.c_a.is_zero());
}

#[test]
fn survival_exceeds_half_with_doob_check() {
    for n in 1..=200 {
        let law = walk_law(n).unwrap();
        assert!(law.survival > ratio(1, 2), "N = {n}");
        assert!(doob_bound_holds(&law), "N = {n}");
    }
    assert_eq!(tau_survival_probability(4).unwrap(), ratio(3, 4));
}

#[test]
fn random_beliefs_have_zero_nonrevealing_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for game in builtins() {
        let fam = game.build();
        for _ in 0..25 {
            let p = random_belief(&mut rng, 2, 97);
            assert!(game_value(&fam.expected_matrix(&p).unwrap()).unwrap().is_zero());
        }
    }
}
