// Certify `u ≡ 0` along the belief segment by witness pairs and bisection.

use repgame::nonrevealing::almost_fair_check;
use repgame::rational::{format_rational, ratio};
use repgame::{Builtin, Segment};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let segment = Segment::full(2);
    for game in [Builtin::Dk { alpha: ratio(1, 2) }, Builtin::Market { m: 2 }, Builtin::Zamir] {
        let report = almost_fair_check(&game.build(), &segment, 8)?;
        println!(
            "{:<14} certified intervals: {:>2}  uncertified leaves: {:>3}  zero samples: {:>3}  epsilon: {}",
            game.name(),
            report.certified_intervals.len(),
            report.uncertified_intervals.len(),
            report.sampled_zero_points.len(),
            format_rational(&report.epsilon_bound)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
