// Random-walk posterior martingale: exact survival, exact payoff, and a
// seeded Monte Carlo replay.

use repgame::martingale::{simulate_walk, tau_survival_probability, walk_lower_bound_exact};
use repgame::rational::{format_rational, to_f64};
use repgame::{Builtin, Segment};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in [1, 4, 9] {
        let s = tau_survival_probability(n)?;
        println!("P(tau > {n}) = {} ≈ {:.4}", format_rational(&s), to_f64(&s));
    }
    let zamir = Builtin::Zamir.build();
    let segment = Segment::full(2);
    for n in [16, 64] {
        let b = walk_lower_bound_exact(&zamir, &segment, n)?;
        println!("N={n:<3} threshold={} bound={:.4} bound/sqrt(N)={:.4}", b.threshold, b.exact_bound, b.exact_bound / (n as f64).sqrt());
    }
    let sim = simulate_walk(&zamir, &segment, 16, 20_000, 7)?;
    println!("Monte Carlo N=16: {:.4} ± {:.4}", sim.mc_estimate, sim.stderr);
    print!("{}", sim.trace.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
