use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chair_escher::classify::{admissible_pairs, classify_all, classify_one_rule, equivalence_classes, one_rule_table};
use chair_escher::edge::AMPLITUDE_CAP;
use chair_escher::escher::{render, PerturbationAssignment};
use chair_escher::geometry::{check_pattern, generate_spread, oracle_relations};
use chair_escher::solver::{is_admissible_pair, solve};
use chair_escher::{Error, Prototile, RelationSystem, SolveMode, SubstitutionRule};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "chair-escher", version, about = "Escher degree of chair tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Single,
    OneRule,
    TwoRule,
}

impl From<Mode> for SolveMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Single => SolveMode::Single,
            Mode::OneRule => SolveMode::OneRule,
            Mode::TwoRule => SolveMode::TwoRule,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Alpha,
    Beta,
}

impl From<Target> for Prototile {
    fn from(t: Target) -> Self {
        match t {
            Target::Alpha => Prototile::Alpha,
            Target::Beta => Prototile::Beta,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve every two-rule equivalence class.
    Classify {
        /// Emit JSON.
        #[arg(long, conflicts_with = "table")]
        json: bool,
        /// Emit an aligned text table (default).
        #[arg(long)]
        table: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every mixed one-rule pattern.
    ClassifyOneRule {
        #[arg(long)]
        json: bool,
    },
    /// Solve one tiling.
    Solve {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Alpha pattern (the mixed pattern in one-rule mode).
        #[arg(short)]
        i: Option<u32>,
        /// Beta pattern.
        #[arg(short)]
        j: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Render an escherized spread as SVG.
    Render {
        #[arg(long, value_enum, default_value = "two-rule")]
        mode: Mode,
        #[arg(short)]
        i: Option<u32>,
        #[arg(short)]
        j: Option<u32>,
        /// Spread level.
        #[arg(short, default_value_t = 3)]
        s: u32,
        #[arg(long, value_enum, default_value = "alpha")]
        target: Target,
        /// Params file: {"classes": [{"id": 0, "samples": [[t, u], ...]}]}.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Generate random params from this seed when no file is given.
        #[arg(long)]
        seed: Option<u64>,
        /// Envelope amplitude for generated params (at most 0.3).
        #[arg(long, default_value_t = 0.3)]
        amplitude: f64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the placement and curve-reference dump.
        #[arg(long)]
        tiling: Option<PathBuf>,
    },
    /// Compare the solver's fixed point with matchings read off the spreads.
    OracleCheck {
        #[arg(short)]
        i: Option<u32>,
        #[arg(short)]
        j: Option<u32>,
        /// Check one representative of every class.
        #[arg(long, conflicts_with_all = ["i", "j"])]
        all: bool,
        #[arg(long, default_value_t = 4)]
        smax: u32,
    },
    /// Dump the placements of a spread.
    Spread {
        #[arg(short)]
        i: u32,
        #[arg(short)]
        j: Option<u32>,
        #[arg(short)]
        s: u32,
        #[arg(long, value_enum, default_value = "alpha")]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

const EXIT_IO: u8 = 1;
const EXIT_INVALID_PATTERN: u8 = 3;
const EXIT_EXCLUDED_PAIR: u8 = 4;
const EXIT_BAD_PARAMS: u8 = 5;
const EXIT_ORACLE_MISMATCH: u8 = 6;
const EXIT_RENDER: u8 = 7;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidPattern(_) => EXIT_INVALID_PATTERN,
            Error::ExcludedPair(..) => EXIT_EXCLUDED_PAIR,
            Error::Parse(_) | Error::InvalidCurve(_) | Error::MissingClass(_) | Error::SelfDualViolation(_) => {
                EXIT_BAD_PARAMS
            }
            Error::AmplitudeTooLarge(_) | Error::Inconsistent(_) => EXIT_RENDER,
            _ => EXIT_IO,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
}

fn pattern(p: Option<u32>, flag: &str) -> Result<Option<u8>, Failure> {
    p.map(check_pattern).transpose().map_err(|e| Failure { message: format!("{flag}: {e}"), ..e.into() })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn oracle_matches(i: u8, j: u8, smax: u32) -> Result<bool, Failure> {
    let rule = SubstitutionRule::pair(i, j)?;
    let mut oracle = RelationSystem::new(16);
    for target in [Prototile::Alpha, Prototile::Beta] {
        for (x, y) in oracle_relations(&rule, target, smax)? {
            oracle.add_match(x, y);
        }
    }
    let sol = solve(SolveMode::TwoRule, Some(i), Some(j))?;
    let ok = oracle.same_closure(&sol.system);
    println!(
        "({i},{j}) {} solver: {} | oracle: {}",
        if ok { "ok" } else { "MISMATCH" },
        sol.system.presentation(),
        oracle.presentation()
    );
    Ok(ok)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { json, table: _, out } => {
            let table = classify_all()?;
            let text = if json { table.to_json() + "\n" } else { table.to_table() };
            emit(&text, out.as_deref())
        }
        Command::ClassifyOneRule { json } => {
            let rows = classify_one_rule()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialise"));
            } else {
                print!("{}", one_rule_table(&rows));
            }
            Ok(())
        }
        Command::Solve { mode, i, j, json } => {
            let sol = solve(mode.into(), pattern(i, "-i")?, pattern(j, "-j")?)?;
            let report = sol.report();
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            } else {
                println!("mode: {}", report.mode);
                match (mode, report.pattern_j) {
                    (Mode::Single, _) => {}
                    (_, Some(j)) => println!("patterns: ({}, {j})", report.pattern_i),
                    (_, None) => println!("pattern: no.{}", report.pattern_i),
                }
                println!("degree: {}", report.degree);
                println!("presentation: {}", report.presentation);
                println!("iterations: {}", report.iterations);
                println!("collapse: {}", report.collapse);
            }
            Ok(())
        }
        Command::Render { mode, i, j, s, target, params, seed, amplitude, out, tiling } => {
            let sol = solve(mode.into(), pattern(i, "-i")?, pattern(j, "-j")?)?;
            let assignment = match (params, seed) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).map_err(|e| io_failure(&path, e))?;
                    PerturbationAssignment::from_json(&text)
                        .map_err(|e| Failure { code: EXIT_BAD_PARAMS, message: format!("{}: {e}", path.display()) })?
                }
                (None, Some(seed)) => {
                    if !(0.0..=AMPLITUDE_CAP).contains(&amplitude) {
                        return Err(Failure {
                            code: EXIT_BAD_PARAMS,
                            message: format!("--amplitude must lie in [0, {AMPLITUDE_CAP}]"),
                        });
                    }
                    PerturbationAssignment::random(&sol.system, seed, amplitude)
                }
                (None, None) => PerturbationAssignment::straight(sol.degree()),
            };
            let rt = render(&sol, target.into(), s, &assignment)?;
            emit(&rt.to_svg(), Some(&out))?;
            if let Some(path) = tiling {
                emit(&rt.to_tiling_text(), Some(&path))?;
            }
            Ok(())
        }
        Command::OracleCheck { i, j, all, smax } => {
            let pairs: Vec<(u8, u8)> = if all {
                equivalence_classes(&admissible_pairs()).into_iter().map(|c| c[0]).collect()
            } else {
                match (pattern(i, "-i")?, pattern(j, "-j")?) {
                    (Some(i), Some(j)) => vec![(i, j)],
                    _ => {
                        return Err(Failure { code: EXIT_IO, message: "give -i and -j, or --all".into() });
                    }
                }
            };
            let mut mismatches = 0;
            for (i, j) in pairs {
                if !is_admissible_pair(i, j) {
                    return Err(Error::ExcludedPair(i, j).into());
                }
                if !oracle_matches(i, j, smax)? {
                    mismatches += 1;
                }
            }
            if mismatches > 0 {
                return Err(Failure { code: EXIT_ORACLE_MISMATCH, message: format!("{mismatches} mismatching cases") });
            }
            Ok(())
        }
        Command::Spread { i, j, s, target, out } => {
            let rule = match pattern(j, "-j")? {
                Some(j) => SubstitutionRule::pair(check_pattern(i)?, j)?,
                None => SubstitutionRule::single(check_pattern(i)?)?,
            };
            let sp = generate_spread(&rule, target.into(), s)?;
            emit(&sp.to_text(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("chair-escher: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
