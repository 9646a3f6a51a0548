// Total variation, distance to a region, level-two transport, and the
// invariant function built from a certificate.

use repgame::metric::{invariant_h, kantorovich_d2, tv_distance, tv_distance_to_region, BeliefDistribution};
use repgame::piecewise::regions_from_strategies;
use repgame::rational::{format_rational, ratio};
use repgame::{Belief, Builtin, MixedAction};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Belief::binary(ratio(1, 4))?;
    let q = Belief::uniform(2);
    println!("d1(p, q) = {}", format_rational(&tv_distance(&p, &q)?));

    let dk = Builtin::Dk { alpha: ratio(0, 1) }.build();
    let regions = regions_from_strategies(&dk, &[MixedAction::pure(0, 2), MixedAction::pure(1, 2)])?;
    println!("d1(p, left region) = {}", format_rational(&tv_distance_to_region(&p, &regions[0])?));

    let split = BeliefDistribution::even_pair(Belief::dirac(0, 2), Belief::dirac(1, 2));
    let centre = BeliefDistribution::dirac(q.clone());
    println!("d2(full split, centre) = {}", format_rational(&kantorovich_d2(&split, &centre)?));

    for k in 0..=4 {
        let b = Belief::binary(ratio(k, 4))?;
        println!("h({}) = {}", format_rational(&ratio(k, 4)), format_rational(&invariant_h(&dk, &regions, &b)?));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
