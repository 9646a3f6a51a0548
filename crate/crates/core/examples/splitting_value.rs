// One-stage value of a belief splitting.

use repgame::metric::BeliefDistribution;
use repgame::rational::{format_rational, ratio};
use repgame::recursion::v1;
use repgame::{Belief, Builtin};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let zamir = Builtin::Zamir.build();
    for (a, b) in [((1, 4), (3, 4)), ((0, 1), (1, 1)), ((1, 2), (5, 8))] {
        let split = BeliefDistribution::even_pair(Belief::binary(ratio(a.0, a.1))?, Belief::binary(ratio(b.0, b.1))?);
        println!(
            "zamir  ½δ({}) + ½δ({})  ->  {}",
            format_rational(&ratio(a.0, a.1)),
            format_rational(&ratio(b.0, b.1)),
            format_rational(&v1(&zamir, &split)?)
        );
    }

    let dk = Builtin::Dk { alpha: ratio(0, 1) }.build();
    let reveal = BeliefDistribution::new(vec![Belief::dirac(0, 2), Belief::dirac(1, 2)], vec![ratio(3, 4), ratio(1, 4)])?;
    println!("dk:alpha=0  full revelation at p1=1/4  ->  {}", format_rational(&v1(&dk, &reveal)?));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
