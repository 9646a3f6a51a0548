// Driving the command-line front end in-process on a game file.

use repgame::cli;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("game.json");
    std::fs::write(
        &path,
        r#"{"states": ["0", "1"], "rows": 2, "cols": 2,
            "payoffs": {"0": [[1, 0], [0, "-1/2"]], "1": [[-1, 0], [0, "1/2"]]}}"#,
    )?;
    let game = path.to_str().ok_or("non-utf8 path")?;
    for args in [
        vec!["repgame", "nr-value", "--game", game, "--prior", "1/4"],
        vec!["repgame", "piecewise", "--game", game, "--format", "text"],
        vec!["repgame", "value-curve", "--game", game, "--prior", "1/2", "--n-max", "3", "--grid", "9"],
    ] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = cli::run(args.iter().copied(), &mut out, &mut err);
        println!("$ {}  (exit {code})", args[1..].join(" "));
        print!("{}{}", String::from_utf8(out)?, String::from_utf8(err)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
