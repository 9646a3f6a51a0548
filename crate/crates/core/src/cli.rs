//! Command-line front end.
//!
//! Reports go to stdout (or `--output`) as pretty JSON, value curves as
//! CSV. Exit codes: 0 success, 2 input error, 3 analysis error, 4
//! inconclusive under `--strict`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Belief, Builtin, GameFamily, MixedAction, Segment};
use crate::martingale::{simulate_walk, walk_lower_bound_exact, WalkBound, WalkSummary};
use crate::matrix_game::{matrix_game_value, optimal_set_bounds};
use crate::nonrevealing::{almost_fair_check, DEFAULT_DEPTH};
use crate::piecewise::{
    detect_piecewise, estimate_small_revelation_constants, theorem1_bound, verify_cover, CoverMode, CoverReport,
    PiecewiseOutcome,
};
use crate::rational::{format_rational, parse_rational, serde_rational, Rational};
use crate::recursion::{value_curve, DEFAULT_GRID};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ANALYSIS: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "repgame", version, about = "Value growth of repeated games with one-sided incomplete information")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact value and optimal strategies of the non-revealing game.
    NrValue {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prior: String,
    },
    /// Certify that the non-revealing value vanishes along a segment.
    AlmostFair {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
    /// Detect finitely many optimal non-revealing strategies.
    Piecewise {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1/4096")]
        min_width: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Bounded-value certificate, or a random-walk lower bound otherwise.
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1/4096")]
        min_width: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Grid lower approximation of V_N for N = 0..n_max, as CSV.
    ValueCurve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prior: String,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Random-walk martingale lower bound with a Monte Carlo check.
    Walk {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the trace of trial 0 as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Sampled estimates of the revelation constants.
    Constants {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Builtin family, e.g. `zamir`, `dk:alpha=1/2`, `market:m=3`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Game family JSON file.
    #[arg(long)]
    pub game: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    #[command(flatten)]
    pub source: Source,
    /// Segment as `ONE:ZERO`, each a comma-separated belief.
    #[arg(long)]
    pub segment: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Common {
    fn family(&self) -> Result<GameFamily> {
        match (&self.source.builtin, &self.source.game) {
            (Some(spec), None) => Ok(Builtin::parse(spec)?.build()),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    reason: e.to_string(),
                })?;
                let value: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| Error::InvalidGame(e.to_string()))?;
                GameFamily::from_json(&value)
            }
            _ => Err(Error::Precondition("give exactly one of --builtin and --game".into())),
        }
    }

    fn segment(&self, states: usize) -> Result<Segment> {
        match &self.segment {
            None => Ok(Segment::full(states)),
            Some(text) => {
                let (one, zero) = text.split_once(':').ok_or_else(|| Error::ParameterOutOfRange {
                    name: "segment".into(),
                    reason: "expected ONE:ZERO".into(),
                })?;
                Segment::new(parse_belief(one, states)?, parse_belief(zero, states)?)
            }
        }
    }
}

/// A single rational `q` means `(1 − q, q)` for two states; otherwise a
/// comma-separated weight vector.
pub fn parse_belief(text: &str, states: usize) -> Result<Belief> {
    let parts: Vec<Rational> = text.split(',').map(|t| parse_rational(t.trim())).collect::<Result<_>>()?;
    let belief = if parts.len() == 1 && states == 2 {
        Belief::binary(parts.into_iter().next().expect("one part"))?
    } else {
        Belief::new(parts)?
    };
    if belief.len() != states {
        return Err(Error::DimensionMismatch {
            expected: states,
            found: belief.len(),
        });
    }
    Ok(belief)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NrValueReport {
    pub prior: Belief,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub row_optimal: MixedAction,
    pub col_optimal: MixedAction,
    #[serde(with = "serde_rational::vec")]
    pub col_optimal_min: Vec<Rational>,
    #[serde(with = "serde_rational::vec")]
    pub col_optimal_max: Vec<Rational>,
    pub col_optimal_unique: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseReport {
    pub outcome: PiecewiseOutcome,
    #[serde(with = "serde_rational::option")]
    pub theorem1_bound: Option<Rational>,
    pub cover: Option<CoverReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub almost_fair_certified: bool,
    pub almost_fair_violated: bool,
    pub piecewise: PiecewiseOutcome,
    /// `‖A‖_lip · Q` when a certificate exists.
    #[serde(with = "serde_rational::option")]
    pub upper_bound: Option<Rational>,
    /// Random-walk lower bound at the segment midpoint otherwise.
    pub walk: Option<WalkBound>,
}

enum Outcome {
    Done,
    Inconclusive,
}

fn emit(common: &Common, out: &mut dyn Write, text: &str) -> Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        }),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            reason: e.to_string(),
        }),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownBuiltin(_)
        | Error::ParameterOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidBelief(_)
        | Error::InvalidMixedAction(_)
        | Error::InvalidGame(_)
        | Error::ParseRational(_)
        | Error::DegenerateSegment
        | Error::GridTooCoarse { .. }
        | Error::Io { .. } => EXIT_INPUT,
        _ => EXIT_ANALYSIS,
    }
}

fn common_of(command: &Command) -> &Common {
    match command {
        Command::NrValue { common, .. }
        | Command::AlmostFair { common, .. }
        | Command::Piecewise { common, .. }
        | Command::Bound { common, .. }
        | Command::ValueCurve { common, .. }
        | Command::Walk { common, .. }
        | Command::Constants { common, .. } => common,
    }
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let threads = common_of(&cli.command).threads;
    let mut buffer = Vec::new();
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &mut buffer)),
            Err(e) => Err(Error::Precondition(e.to_string())),
        },
        None => dispatch(&cli.command, &mut buffer),
    };
    if out.write_all(&buffer).is_err() {
        return EXIT_ANALYSIS;
    }
    match result {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Inconclusive) => {
            if common_of(&cli.command).strict {
                let _ = writeln!(err, "inconclusive result (strict mode)");
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn require_almost_fair(report: &crate::nonrevealing::AlmostFairReport) -> Result<()> {
    match report.nonzero_points.first() {
        Some(point) => Err(Error::Precondition(format!(
            "game is not almost fair: u = {} at α = {}",
            format_rational(&point.value),
            format_rational(&point.alpha)
        ))),
        None => Ok(()),
    }
}

fn dispatch(command: &Command, out: &mut Vec<u8>) -> Result<Outcome> {
    let common = common_of(command);
    let family = common.family()?;
    let segment = common.segment(family.num_states())?;
    match command {
        Command::NrValue { prior, .. } => {
            let prior = parse_belief(prior, family.num_states())?;
            let m = family.expected_matrix(&prior)?;
            let sol = matrix_game_value(&m)?;
            let bounds = optimal_set_bounds(&m, &sol.value)?;
            let report = NrValueReport {
                col_optimal_unique: bounds.is_singleton(),
                prior,
                value: sol.value,
                row_optimal: sol.row_optimal,
                col_optimal: sol.col_optimal,
                col_optimal_min: bounds.min,
                col_optimal_max: bounds.max,
            };
            emit(common, out, &json(&report))?;
            Ok(Outcome::Done)
        }
        Command::AlmostFair { depth, .. } => {
            let report = almost_fair_check(&family, &segment, *depth)?;
            emit(common, out, &json(&report))?;
            Ok(if report.fully_certified() && !report.has_violation() {
                Outcome::Done
            } else {
                Outcome::Inconclusive
            })
        }
        Command::Piecewise { min_width, format, .. } => {
            let outcome = detect_piecewise(&family, &segment, &parse_rational(min_width)?)?;
            let (bound, cover) = match &outcome {
                PiecewiseOutcome::Certificate(cert) => {
                    let mode = if family.num_states() == 2 {
                        CoverMode::Exact1d
                    } else {
                        CoverMode::Grid { resolution: 32 }
                    };
                    (
                        Some(theorem1_bound(&family, cert)),
                        Some(verify_cover(&cert.regions(), &segment, mode)?),
                    )
                }
                _ => (None, None),
            };
            let inconclusive = matches!(outcome, PiecewiseOutcome::Inconclusive { .. });
            let report = PiecewiseReport {
                outcome,
                theorem1_bound: bound,
                cover,
            };
            let text = match format {
                Format::Json => json(&report),
                Format::Text => render_piecewise(&report),
            };
            emit(common, out, &text)?;
            Ok(if inconclusive { Outcome::Inconclusive } else { Outcome::Done })
        }
        Command::Bound { min_width, depth, n, .. } => {
            let fair = almost_fair_check(&family, &segment, *depth)?;
            require_almost_fair(&fair)?;
            let outcome = detect_piecewise(&family, &segment, &parse_rational(min_width)?)?;
            let (upper_bound, walk) = match &outcome {
                PiecewiseOutcome::Certificate(cert) => (Some(theorem1_bound(&family, cert)), None),
                _ => (None, Some(walk_lower_bound_exact(&family, &segment, *n)?)),
            };
            let inconclusive = matches!(outcome, PiecewiseOutcome::Inconclusive { .. }) || !fair.fully_certified();
            let report = BoundReport {
                almost_fair_certified: fair.fully_certified() && !fair.has_violation(),
                almost_fair_violated: fair.has_violation(),
                piecewise: outcome,
                upper_bound,
                walk,
            };
            emit(common, out, &json(&report))?;
            Ok(if inconclusive { Outcome::Inconclusive } else { Outcome::Done })
        }
        Command::ValueCurve { prior, n_max, grid, .. } => {
            let prior = parse_belief(prior, family.num_states())?;
            let curve = value_curve(&family, &segment, &prior, *n_max, *grid)?;
            emit(common, out, &curve.to_csv())?;
            Ok(Outcome::Done)
        }
        Command::Walk { n, trials, seed, trace, .. } => {
            require_almost_fair(&almost_fair_check(&family, &segment, 4)?)?;
            let bound = walk_lower_bound_exact(&family, &segment, *n)?;
            let (mc_estimate, stderr) = if *trials > 0 {
                let sim = simulate_walk(&family, &segment, *n, *trials, *seed)?;
                if let Some(path) = trace {
                    std::fs::write(path, sim.trace.to_csv()).map_err(|e| Error::Io {
                        path: path.display().to_string(),
                        reason: e.to_string(),
                    })?;
                }
                (Some(sim.mc_estimate), Some(sim.stderr))
            } else {
                (None, None)
            };
            let summary = WalkSummary {
                n: *n,
                exact_bound: bound.exact_bound,
                survival_prob: bound.survival_prob,
                mc_estimate,
                stderr,
                seed: *seed,
            };
            emit(common, out, &json(&summary))?;
            Ok(Outcome::Done)
        }
        Command::Constants { samples, seed, .. } => {
            require_almost_fair(&almost_fair_check(&family, &segment, 4)?)?;
            let constants = estimate_small_revelation_constants(&family, &segment, *samples, *seed)?;
            emit(common, out, &json(&constants))?;
            Ok(Outcome::Done)
        }
    }
}

fn render_piecewise(report: &PiecewiseReport) -> String {
    let fmt_vec = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
    let mut s = String::new();
    match &report.outcome {
        PiecewiseOutcome::Certificate(cert) => {
            s.push_str(&format!("certificate: Q = {}\n", cert.q));
            for e in &cert.entries {
                let spans: Vec<String> = e
                    .intervals
                    .iter()
                    .map(|(a, b)| format!("[{}, {}]", format_rational(a), format_rational(b)))
                    .collect();
                s.push_str(&format!("  y = ({})  on {}\n", fmt_vec(e.strategy.weights()), spans.join(" ")));
                for ineq in &e.region.inequalities {
                    let terms: Vec<String> = ineq
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, c)| format!("{}·p{k}", format_rational(c)))
                        .collect();
                    s.push_str(&format!("      {} <= 0\n", terms.join(" + ")));
                }
            }
            if let Some(b) = &report.theorem1_bound {
                s.push_str(&format!("bound: V_N <= {}\n", format_rational(b)));
            }
            if let Some(c) = &report.cover {
                s.push_str(&format!("cover: {}\n", if c.covered { "complete" } else { "gap" }));
            }
        }
        PiecewiseOutcome::NonPiecewise(ev) => {
            s.push_str(&format!(
                "not piecewise on [{}, {}]: y* = ({}) vs ({}), gap {:.6}\n",
                format_rational(&ev.start),
                format_rational(&ev.end),
                fmt_vec(ev.strategy_at_start.weights()),
                fmt_vec(ev.strategy_at_end.weights()),
                ev.strategy_gap
            ));
        }
        PiecewiseOutcome::Inconclusive { covered_up_to, reason } => {
            s.push_str(&format!("inconclusive after {}: {reason}\n", format_rational(covered_up_to)));
        }
    }
    s
}
