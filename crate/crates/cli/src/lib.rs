//! The `hatcycle` command line.
//!
//! Exit codes: 0 when the strategy wins (or a proof completes), 1 when it
//! loses, 2 on any error.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hatcycle_core::prover::{Conclusion, ProverBudget, DEFAULT_TABLE_CHECKS};
use hatcycle_core::structure::ell_table;
use hatcycle_core::{
    algebraic_c3, algebraic_c4, characteristic, chi2_strategy, chi3_strategy, colour_edges,
    construct_winning, defeat_count, game_value_bruteforce, min_over_assignments,
    prove_nonexistence, structure_diagnostics, verify, win_probability_fixed, CycleStrategy,
    GeneralStrategy, HatError, Verdict, VisibilityGame,
};

pub mod dot;

pub use dot::export_dot;

pub const EXIT_WINNING: i32 = 0;
pub const EXIT_LOSING: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

const DEFAULT_GENERAL_BUDGET: u128 = 100_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "hatcycle",
    version,
    about = "Three-colour hat guessing on cycles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a strategy wins; print a defeating assignment if not.
    Verify {
        /// Strategy JSON file, or `-` for stdin.
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Print a strategy as JSON.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Family::Winning)]
        family: Family,
    },
    /// Print continuation counts, edge colouring and yellow-edge counts.
    Classify {
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Print the exact number of defeating assignments.
    Count {
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Search for a winning strategy on C_n and print the certificate.
    Prove {
        #[arg(long)]
        n: usize,
        /// Table checks allowed.
        #[arg(long, env = "HATCYCLE_BUDGET")]
        budget: Option<u64>,
        /// Largest cycle length accepted.
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Minimum number of correct guesses in a general visibility game, or
    /// the game value when no strategy is given.
    General {
        #[arg(long)]
        game: String,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, env = "HATCYCLE_BUDGET")]
        budget: Option<u128>,
    },
    /// Emit the coloured layered graph in Graphviz format.
    ExportDot {
        #[arg(long)]
        strategy: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Three yellow edges when 3 divides n, two when n = 4.
    Winning,
    Chi3,
    Chi2,
    /// The explicit strategies for n = 3 and n = 4.
    Algebraic,
}

/// Keys come out sorted because `serde_json::Map` is ordered.
pub fn canonical(value: &Value) -> String {
    value.to_string()
}

pub fn strategy_json(f: &CycleStrategy) -> String {
    canonical(&serde_json::to_value(f).expect("serializable"))
}

pub fn parse_strategy(text: &str) -> Result<CycleStrategy, HatError> {
    serde_json::from_str(text).map_err(|e| HatError::Parse(e.to_string()))
}

#[derive(Debug)]
enum CliError {
    Hat(HatError),
    Io(String, std::io::Error),
}

impl From<HatError> for CliError {
    fn from(e: HatError) -> Self {
        CliError::Hat(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Hat(e) => write!(f, "{e}"),
            CliError::Io(what, e) => write!(f, "{what}: {e}"),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_source(&mut self, path: Option<&str>) -> Result<String, CliError> {
        match path {
            None | Some("-") => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| CliError::Io("stdin".into(), e))?;
                Ok(s)
            }
            Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(p.into(), e)),
        }
    }

    fn strategy(&mut self, path: Option<&str>) -> Result<CycleStrategy, CliError> {
        Ok(parse_strategy(&self.read_source(path)?)?)
    }

    fn emit(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.stdout, "{text}").map_err(|e| CliError::Io("stdout".into(), e))
    }
}

/// Runs the command line on `args` (program name first) and returns the
/// exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_ERROR
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_WINNING
            };
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, CliError> {
    match command {
        Command::Verify { strategy } => {
            let f = io.strategy(strategy.as_deref())?;
            match verify(&f) {
                Verdict::Winning => {
                    io.emit(&canonical(&json!({ "verdict": "winning" })))?;
                    Ok(EXIT_WINNING)
                }
                Verdict::Losing { witness } => {
                    io.emit(&canonical(
                        &json!({ "verdict": "losing", "witness": witness }),
                    ))?;
                    Ok(EXIT_LOSING)
                }
            }
        }
        Command::Construct { n, family } => {
            let f = match family {
                Family::Winning => construct_winning(n)?.ok_or_else(|| {
                    HatError::Domain(format!(
                        "no winning strategy exists on a cycle of length {n}"
                    ))
                })?,
                Family::Chi3 => chi3_strategy(n)?,
                Family::Chi2 => chi2_strategy(n)?,
                Family::Algebraic => match n {
                    3 => algebraic_c3(),
                    4 => algebraic_c4(),
                    _ => {
                        return Err(HatError::Domain(format!(
                            "algebraic strategies exist for n = 3, 4 only, not {n}"
                        ))
                        .into())
                    }
                },
            };
            io.emit(&strategy_json(&f))?;
            Ok(EXIT_WINNING)
        }
        Command::Classify { strategy } => {
            let f = io.strategy(strategy.as_deref())?;
            io.emit(&canonical(&classify(&f)?))?;
            Ok(EXIT_WINNING)
        }
        Command::Count { strategy } => {
            let f = io.strategy(strategy.as_deref())?;
            let count = defeat_count(&f);
            let p = win_probability_fixed(&f);
            io.emit(&canonical(&json!({
                "n": f.n(),
                "defeat_count": count.to_string(),
                "win_probability": p.to_string(),
            })))?;
            Ok(if count == 0u32.into() {
                EXIT_WINNING
            } else {
                EXIT_LOSING
            })
        }
        Command::Prove {
            n,
            budget,
            max_n,
            timeout,
        } => {
            let budget = ProverBudget {
                table_checks: budget.unwrap_or(DEFAULT_TABLE_CHECKS),
                wall_clock: timeout.map(std::time::Duration::from_secs),
                max_n,
            };
            let cert = prove_nonexistence(n, budget)?;
            io.emit(&canonical(
                &serde_json::to_value(&cert).expect("serializable"),
            ))?;
            Ok(match cert.conclusion {
                Conclusion::BudgetExceeded { .. } => EXIT_ERROR,
                _ => EXIT_WINNING,
            })
        }
        Command::General {
            game,
            strategy,
            budget,
        } => {
            let budget = budget.unwrap_or(DEFAULT_GENERAL_BUDGET);
            let g = VisibilityGame::from_json(&io.read_source(Some(&game))?)?;
            let (key, value) = match strategy {
                Some(path) => {
                    let f = GeneralStrategy::from_json(&g, &io.read_source(Some(&path))?)?;
                    ("min_correct", min_over_assignments(&g, &f, budget)?)
                }
                None => ("value", game_value_bruteforce(&g, budget)?),
            };
            io.emit(&canonical(&json!({ key: value, "winning": value > 0 })))?;
            Ok(if value > 0 { EXIT_WINNING } else { EXIT_LOSING })
        }
        Command::ExportDot { strategy } => {
            let f = io.strategy(strategy.as_deref())?;
            let c = colour_edges(&f)
                .map_err(|e| HatError::Domain(format!("strategy is not balanced: {e}")))?;
            write!(io.stdout, "{}", export_dot(&f, &c))
                .map_err(|e| CliError::Io("stdout".into(), e))?;
            Ok(EXIT_WINNING)
        }
    }
}

fn classify(f: &CycleStrategy) -> Result<Value, HatError> {
    let ell: Vec<Value> = (0..f.n())
        .map(|k| {
            let t = ell_table(f, k);
            json!(t.map(|row| row.map(|(plus, minus)| json!({ "plus": plus, "minus": minus }))))
        })
        .collect();
    let mut out = json!({ "n": f.n(), "ell": ell });
    match colour_edges(f) {
        Ok(c) => {
            let colouring: Vec<Vec<String>> = c
                .boundaries()
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|row| row.iter().map(|e| e.letter()).collect())
                        .collect()
                })
                .collect();
            let chi = characteristic(f).expect("balanced");
            let violations = structure_diagnostics(f, &c)?.len();
            out["balanced"] = json!(true);
            out["colouring"] = json!(colouring);
            out["chi"] = json!(chi);
            out["structure_violations"] = json!(violations);
        }
        Err(e) => {
            out["balanced"] = json!(false);
            out["unbalanced_edge"] = json!({ "edge": e.edge, "plus": e.plus, "minus": e.minus });
        }
    }
    Ok(out)
}
