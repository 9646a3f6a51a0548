// Game families as JSON, column and row augmentations, and extreme optimal
// strategies from square kernels.

use repgame::matrix_game::{game_value, snow_shapley_extremes};
use repgame::rational::{format_rational, ratio};
use repgame::{Belief, Builtin, GameFamily, MixedAction};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let zamir = Builtin::Zamir.build();
    let text = serde_json::to_string(&zamir.to_json())?;
    println!("{text}");
    let back = GameFamily::from_json(&serde_json::from_str(&text)?)?;
    assert_eq!(back, zamir);

    let y = MixedAction::new(vec![ratio(3, 8), ratio(5, 8)])?;
    let widened = zamir.pure_piecewise_transform(&[y])?;
    let x = MixedAction::new(vec![ratio(1, 3), ratio(2, 3)])?;
    let taller = zamir.add_mixed_row(&x)?;
    let p = Belief::binary(ratio(1, 3))?;
    println!(
        "values at p1=1/3: original {}, extra column {}, extra row {}",
        format_rational(&game_value(&zamir.expected_matrix(&p)?)?),
        format_rational(&game_value(&widened.expected_matrix(&p)?)?),
        format_rational(&game_value(&taller.expected_matrix(&p)?)?)
    );

    for y in snow_shapley_extremes(&zamir.expected_matrix(&Belief::uniform(2))?)? {
        let w: Vec<String> = y.weights().iter().map(format_rational).collect();
        println!("extreme optimal y = ({})", w.join(", "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
