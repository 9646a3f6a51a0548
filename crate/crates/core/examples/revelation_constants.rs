// Sampled slopes behind √N growth.

use repgame::piecewise::estimate_small_revelation_constants;
use repgame::rational::format_rational;
use repgame::{Builtin, Segment};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = estimate_small_revelation_constants(&Builtin::Zamir.build(), &Segment::full(2), 300, 0)?;
    println!("C_A ≈ {}  ({} pairs)", format_rational(&c.c_a), c.c_a_samples);
    println!("C   ≈ {:.4}", c.c.unwrap_or(f64::NAN));
    println!("C'  ≈ {:.4}  ({} directions)", c.c_prime.unwrap_or(f64::NAN), c.c_prime_samples);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
