// Where the uninformed player's optimal strategy is constant, and where it
// moves with the belief.

use repgame::nonrevealing::parametric_breakpoints;
use repgame::rational::format_rational;
use repgame::{Builtin, MixedAction, Segment};

fn show(y: &MixedAction) -> String {
    let parts: Vec<String> = y.weights().iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for game in [Builtin::Market { m: 3 }, Builtin::Zamir] {
        let report = parametric_breakpoints(&game.build(), &Segment::full(2), 8)?;
        println!("{}", game.name());
        for i in &report.intervals {
            let kind = match &i.constant_strategy {
                Some(y) => format!("constant {}", show(y)),
                None => format!("varying, e.g. {} at {}", show(&i.sample_strategy), format_rational(&i.sample_point)),
            };
            println!("  [{}, {}]  {kind}", format_rational(&i.start), format_rational(&i.end));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
