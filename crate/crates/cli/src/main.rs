mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use toric_cover::covering::ModelKind;

use input::CliError;

#[derive(Parser)]
#[command(name = "toric-cover", version, about = "Exact toric intersection theory and covering-dimension witnesses")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generators, linear relations and minimal non-faces of the ring of a polytope.
    Ring {
        /// Polytope JSON (path, inline JSON, or `-`).
        input: Option<String>,
        /// Use a standard polytope instead, e.g. `cube:3` or `simplex:2`.
        #[arg(long)]
        standard: Option<String>,
    },
    /// Top intersection product of n divisors.
    Intersect {
        input: Option<String>,
        #[arg(long)]
        standard: Option<String>,
    },
    /// Whether a divisor (or the difference of two) is principal.
    Principal {
        input: Option<String>,
        #[arg(long)]
        standard: Option<String>,
    },
    /// Avoidance certificate for a set of touched facets.
    Avoid {
        input: Option<String>,
        #[arg(long)]
        standard: Option<String>,
    },
    /// Search for the witness a covering theorem promises.
    Verify {
        input: Option<String>,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        /// Multiplicity bound for kkm and complement (default: the measured multiplicity).
        #[arg(long)]
        k: Option<usize>,
        /// Touch slack for kkm-lebesgue, as p/q (overrides the input's `eps`).
        #[arg(long)]
        eps: Option<String>,
        /// Polytope for kkm-lebesgue when the input has none.
        #[arg(long)]
        standard: Option<String>,
    },
    /// Refine a cover into multiplicity-many colors of disjoint pieces.
    Color { input: Option<String> },
    /// Emit a structured or random cover.
    Generate {
        #[arg(long, value_enum)]
        pattern: PatternArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        /// Lattice model for `random`.
        #[arg(long, value_enum, default_value = "cube")]
        model: ModelArg,
        /// Multiplicity target for `random` (default n).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = toric_cover::polytope::DEFAULT_PERTURB_SEED)]
        seed: u64,
    },
    /// Evaluate a moment map on a point.
    Moment { input: Option<String> },
    /// Run the acceptance matrix.
    Selftest {
        #[arg(long, default_value_t = toric_cover::polytope::DEFAULT_PERTURB_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Lebesgue,
    Kkm,
    Axes,
    Complement,
    KkmLebesgue,
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternArg {
    Bricks,
    Kkm,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Cube,
    Simplex,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Cube => ModelKind::Cube,
            ModelArg::Simplex => ModelKind::Simplex,
        }
    }
}

/// JSON result, one-line summary and exit code of a successful dispatch.
pub struct Response {
    pub json: serde_json::Value,
    pub summary: String,
    pub code: u8,
}

fn dispatch(cli: &Cli) -> Result<Response, CliError> {
    use commands::*;
    match &cli.command {
        Command::Ring { input, standard } => ring(input.as_deref(), standard.as_deref()),
        Command::Intersect { input, standard } => intersect(input.as_deref(), standard.as_deref()),
        Command::Principal { input, standard } => principal(input.as_deref(), standard.as_deref()),
        Command::Avoid { input, standard } => avoid(input.as_deref(), standard.as_deref()),
        Command::Verify { input, theorem, k, eps, standard } => {
            verify(input.as_deref(), *theorem, *k, eps.as_deref(), standard.as_deref())
        }
        Command::Color { input } => color(input.as_deref()),
        Command::Generate { pattern, n, r, model, m, seed } => generate(*pattern, *n, *r, (*model).into(), *m, *seed),
        Command::Moment { input } => moment(input.as_deref()),
        Command::Selftest { seed } => selftest(*seed),
    }
}

fn main() -> ExitCode {
    // Usage errors are input errors; clap's own code 2 would read as a verdict.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(resp) => {
            let text = serde_json::to_string_pretty(&resp.json).expect("JSON values serialize");
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("writing {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => {
                    // A closed pipe (e.g. `| head`) is not an error of ours.
                    let mut out = std::io::stdout().lock();
                    if let Err(e) = writeln!(out, "{text}") {
                        if e.kind() != std::io::ErrorKind::BrokenPipe {
                            eprintln!("writing standard output: {e}");
                            return ExitCode::from(1);
                        }
                    }
                }
            }
            eprintln!("{}", resp.summary);
            ExitCode::from(resp.code)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                CliError::Input(_) => 4,
                CliError::Compute(_) => 1,
            })
        }
    }
}
