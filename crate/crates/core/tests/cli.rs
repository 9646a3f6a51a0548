use repgame::cli::{self, BoundReport, NrValueReport, PiecewiseReport, EXIT_ANALYSIS, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK};
use repgame::martingale::WalkSummary;
use repgame::nonrevealing::AlmostFairReport;
use repgame::piecewise::{PiecewiseOutcome, RevelationConstants};
use repgame::rational::{int, ratio};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["repgame"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn round_trip<T: Serialize + DeserializeOwned>(text: &str) -> T {
    let parsed: T = serde_json::from_str(text).unwrap();
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, text);
    parsed
}

fn write_game(dir: &tempfile::TempDir, body: &str) -> String {
    let path = dir.path().join("game.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn nr_value_reports_zamir_strategy() {
    let (code, out, _) = run(&["nr-value", "--builtin", "zamir", "--prior", "1/2"]);
    assert_eq!(code, EXIT_OK);
    let report: NrValueReport = round_trip(&out);
    assert_eq!(report.value, int(0));
    assert_eq!(report.col_optimal.weights(), &[ratio(3, 8), ratio(5, 8)]);
}

#[test]
fn nr_value_market_has_pure_optimum() {
    let (code, out, _) = run(&["nr-value", "--builtin", "market:m=2", "--prior", "1/3"]);
    assert_eq!(code, EXIT_OK);
    let report: NrValueReport = round_trip(&out);
    assert_eq!(report.value, int(0));
    assert_eq!(report.col_optimal.weights()[0], int(1));
    assert!(report.col_optimal_unique);
}

#[test]
fn every_report_round_trips() {
    let (_, out, _) = run(&["almost-fair", "--builtin", "zamir", "--depth", "6"]);
    round_trip::<AlmostFairReport>(&out);
    let (_, out, _) = run(&["piecewise", "--builtin", "dk:alpha=1/2"]);
    let report: PiecewiseReport = round_trip(&out);
    let PiecewiseOutcome::Certificate(cert) = &report.outcome else { panic!() };
    assert_eq!(cert.q, 2);
    assert_eq!(report.theorem1_bound, Some(int(4)));
    let (_, out, _) = run(&["piecewise", "--builtin", "zamir"]);
    round_trip::<PiecewiseReport>(&out);
    let (_, out, _) = run(&["bound", "--builtin", "market:m=3"]);
    round_trip::<BoundReport>(&out);
    let (_, out, _) = run(&["bound", "--builtin", "zamir", "--n", "16"]);
    round_trip::<BoundReport>(&out);
    let (_, out, _) = run(&["walk", "--builtin", "zamir", "--n", "16", "--trials", "50"]);
    round_trip::<WalkSummary>(&out);
    let (_, out, _) = run(&["constants", "--builtin", "zamir", "--samples", "20"]);
    round_trip::<RevelationConstants>(&out);
}

#[test]
fn walk_report_meets_lower_bound() {
    let (code, out, _) = run(&["walk", "--builtin", "zamir", "--n", "64", "--trials", "0"]);
    assert_eq!(code, EXIT_OK);
    let summary: WalkSummary = round_trip(&out);
    assert!(summary.exact_bound >= 1.0);
    assert!(summary.survival_prob > ratio(1, 2));
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(format!("{name}.json"));
        let trace = dir.path().join(format!("{name}.csv"));
        let (code, _, _) = run(&[
            "walk",
            "--builtin",
            "zamir",
            "--n",
            "16",
            "--trials",
            "200",
            "--seed",
            "9",
            "--output",
            out.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
        bodies.push((std::fs::read(out).unwrap(), std::fs::read(trace).unwrap()));
    }
    assert_eq!(bodies[0], bodies[1]);
    let first = run(&["constants", "--builtin", "dk:alpha=1/2", "--samples", "30", "--seed", "4"]);
    let second = run(&["constants", "--builtin", "dk:alpha=1/2", "--samples", "30", "--seed", "4", "--threads", "2"]);
    assert_eq!(first, second);
}

#[test]
fn value_curve_csv_is_nondecreasing() {
    let (code, out, _) = run(&["value-curve", "--builtin", "zamir", "--prior", "1/2", "--n-max", "16", "--grid", "65"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("N,V_N,grid_size,lower_bound_flag"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 17);
    assert!(values.windows(2).all(|w| w[1] + 1e-9 >= w[0]));
}

#[test]
fn text_format_lists_pieces() {
    let (code, out, _) = run(&["piecewise", "--builtin", "market:m=3", "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("certificate: Q = 3"));
    assert!(out.contains("cover: complete"));
}

#[test]
fn game_files_are_loaded() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_game(
        &dir,
        r#"{"states": ["0", "1"], "rows": 2, "cols": 2,
            "payoffs": {"0": [[1, 0], [0, -1]], "1": [[-1, 0], [0, 1]]}}"#,
    );
    let (code, out, _) = run(&["nr-value", "--game", &game, "--prior", "0.25"]);
    assert_eq!(code, EXIT_OK);
    let report: NrValueReport = round_trip(&out);
    assert_eq!(report.value, int(0));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let (code, _, err) = run(&["nr-value", "--game", missing.to_str().unwrap(), "--prior", "1/2"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("absent.json"));
    let bad = write_game(&dir, "{\"states\": 3}");
    assert_eq!(run(&["nr-value", "--game", &bad, "--prior", "1/2"]).0, EXIT_INPUT);
    assert_eq!(run(&["nr-value", "--builtin", "zamir", "--prior", "3/2"]).0, EXIT_INPUT);
    assert_eq!(run(&["nr-value", "--builtin", "zamir", "--prior", "0.1234567890123"]).0, EXIT_INPUT);
    assert_eq!(run(&["nr-value", "--builtin", "nope", "--prior", "1/2"]).0, EXIT_INPUT);
    assert_eq!(run(&["nr-value", "--prior", "1/2"]).0, EXIT_INPUT);
    assert_eq!(run(&["value-curve", "--builtin", "zamir", "--prior", "1/3", "--grid", "9"]).0, EXIT_INPUT);
}

#[test]
fn unfair_games_are_analysis_errors() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_game(
        &dir,
        r#"{"states": ["0", "1"], "rows": 2, "cols": 2,
            "payoffs": {"0": [[1, 1], [1, 1]], "1": [[1, 1], [1, 1]]}}"#,
    );
    for cmd in ["bound", "walk", "constants"] {
        let (code, _, err) = run(&[cmd, "--game", &game]);
        assert_eq!(code, EXIT_ANALYSIS, "{cmd}");
        assert!(err.contains("not almost fair"));
    }
}

#[test]
fn strict_mode_flags_inconclusive_runs() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_game(
        &dir,
        r#"{"states": ["0", "1"], "rows": 2, "cols": 2,
            "payoffs": {"0": [[1, 1], [1, 1]], "1": [[1, 1], [1, 1]]}}"#,
    );
    assert_eq!(run(&["almost-fair", "--game", &game]).0, EXIT_OK);
    assert_eq!(run(&["almost-fair", "--game", &game, "--strict"]).0, EXIT_INCONCLUSIVE);
    assert_eq!(run(&["almost-fair", "--builtin", "market:m=2", "--strict"]).0, EXIT_OK);
}
