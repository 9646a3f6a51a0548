// Greedy piecewise certificates, their region cover, and the bounded-value
// constant; a smooth game yields evidence instead.

use repgame::piecewise::{detect_piecewise, theorem1_bound, verify_cover, CoverMode, PiecewiseOutcome};
use repgame::rational::{dyadic, format_rational};
use repgame::{Builtin, Segment};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let segment = Segment::full(2);
    let games = [
        Builtin::Market { m: 1 },
        Builtin::Market { m: 2 },
        Builtin::Market { m: 3 },
        Builtin::Dk { alpha: dyadic(1) },
        Builtin::Zamir,
    ];
    for game in games {
        let family = game.build();
        match detect_piecewise(&family, &segment, &dyadic(12))? {
            PiecewiseOutcome::Certificate(cert) => {
                let cover = verify_cover(&cert.regions(), &segment, CoverMode::Exact1d)?;
                println!(
                    "{:<12} Q={}  covered={}  V_N <= {}",
                    game.name(),
                    cert.q,
                    cover.covered,
                    format_rational(&theorem1_bound(&family, &cert))
                );
            }
            PiecewiseOutcome::NonPiecewise(ev) => println!(
                "{:<12} not piecewise on [{}, {}], strategy gap {:.4}",
                game.name(),
                format_rational(&ev.start),
                format_rational(&ev.end),
                ev.strategy_gap
            ),
            PiecewiseOutcome::Inconclusive { reason, .. } => println!("{:<12} inconclusive: {reason}", game.name()),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
