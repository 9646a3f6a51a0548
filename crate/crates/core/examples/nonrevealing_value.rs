// Value and optimal strategies of the non-revealing game.

use repgame::matrix_game::{matrix_game_value, optimal_set_bounds};
use repgame::nonrevealing::u_value;
use repgame::rational::{format_rational, ratio};
use repgame::{Belief, Builtin};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let zamir = Builtin::Zamir.build();
    for k in 0..=4 {
        let p = Belief::binary(ratio(k, 4))?;
        let m = zamir.expected_matrix(&p)?;
        let sol = matrix_game_value(&m)?;
        let unique = optimal_set_bounds(&m, &sol.value)?.is_singleton();
        let y: Vec<String> = sol.col_optimal.weights().iter().map(format_rational).collect();
        println!(
            "zamir p1={}  u={}  y*=({})  unique={unique}",
            format_rational(&ratio(k, 4)),
            format_rational(&sol.value),
            y.join(", ")
        );
    }

    let market = Builtin::Market { m: 3 }.build();
    let p = Belief::binary(ratio(1, 2))?;
    println!("market:m=3 u(1/2) = {}", format_rational(&u_value(&market, &p)?));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
