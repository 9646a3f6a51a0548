// Grid value iteration: bounded curves for piecewise games, √N growth for
// Zamir's game.

use repgame::recursion::value_curve;
use repgame::rational::ratio;
use repgame::{Belief, Builtin, Segment};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Belief::uniform(2);
    let segment = Segment::full(2);
    for game in [Builtin::Dk { alpha: ratio(0, 1) }, Builtin::Market { m: 2 }] {
        let curve = value_curve(&game.build(), &segment, &p, 20, 65)?;
        println!("{:<12} V_1={:.4} V_10={:.4} V_20={:.4}", game.name(), curve.values[1], curve.values[10], curve.values[20]);
    }
    let curve = value_curve(&Builtin::Zamir.build(), &segment, &p, 64, 129)?;
    for n in [4, 16, 64] {
        println!("zamir        V_{n}={:.4}  V_N/sqrt(N)={:.4}", curve.values[n], curve.values[n] / (n as f64).sqrt());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
