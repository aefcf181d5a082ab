//! The `localwave` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns everything
//! the process would emit; `main` only prints and exits. Keeping the binary
//! this thin lets tests drive commands in-process as well as through the
//! built executable.
//!
//! Exit codes: `0` all checks passed, `1` a mathematical check failed (the
//! report carries a witness), `2` input or usage error, `3` numeric failure.

mod commands;
mod inputs;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::Report;

#[derive(Parser, Debug)]
#[command(
    name = "localwave",
    version,
    about = "Exact wavelet packets and frame packets on F_q((t))"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Field parameters: a preset (q2 q3 q4 q5 q7 q8 q9) or a JSON file {p, c, modulus}.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Format of emitted function tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for output files; reports are also printed to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact unitarity / factorization / character-sum checks.
    Check(CheckArgs),
    /// Generate wavelet packets ω_0..ω_{n_max} and cross-check them.
    Packets(PacketsArgs),
    /// Expand a step function in the packet basis and reconstruct it.
    Decompose(DecomposeArgs),
    /// Frame bounds of a frame filter set and a randomized frame-inequality run.
    FrameBounds(FrameBoundsArgs),
    /// Describe the field configuration.
    Info,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Filter bank: JSON file or `haar`.
    #[arg(long, conflicts_with = "frame", required_unless_present = "frame")]
    pub bank: Option<String>,
    /// Frame filter set: JSON file, `haar` or `random`.
    #[arg(long)]
    pub frame: Option<String>,
    #[arg(long, value_enum, default_value_t = What::All)]
    pub what: What,
    #[command(flatten)]
    pub random: RandomFrame,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum What {
    Unitary,
    Factorization,
    EUnitary,
    CharSum,
    All,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct RandomFrame {
    /// Generators N for built-in frame filter sets.
    #[arg(long = "generators", default_value_t = 1)]
    pub n: usize,
    /// Support exponent s for `--frame random`.
    #[arg(long = "support", default_value_t = 1)]
    pub s: u32,
}

#[derive(Args, Debug)]
pub struct PacketsArgs {
    /// Filter bank: JSON file or `haar`.
    #[arg(long, default_value = "haar")]
    pub bank: String,
    /// Scaling function (StepFn JSON); defaults to the indicator of the ring of integers.
    #[arg(long)]
    pub phi: Option<PathBuf>,
    #[arg(long)]
    pub n_max: u64,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Function to expand (StepFn JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Filter bank: JSON file or `haar`.
    #[arg(long, default_value = "haar")]
    pub bank: String,
    #[arg(long)]
    pub phi: Option<PathBuf>,
    /// Level j of the packet family {ω_n : n < q^j}.
    #[arg(long)]
    pub level: u32,
    /// Number of translates per packet; defaults to the smallest sufficient bound.
    #[arg(long)]
    pub translates: Option<u64>,
}

#[derive(Args, Debug)]
pub struct FrameBoundsArgs {
    /// Frame filter set: JSON file, `haar` or `random`.
    #[arg(long, default_value = "haar")]
    pub frame: String,
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Generator files (StepFn JSON), one per generator; defaults to disjoint cells.
    #[arg(long = "gens", num_args = 1..)]
    pub gens: Vec<PathBuf>,
    /// Outer radius J of the random test functions.
    #[arg(long, default_value_t = 1)]
    pub g_outer: u32,
    /// Resolution k of the random test functions; defaults to level + s.
    #[arg(long)]
    pub g_fine: Option<u32>,
    #[command(flatten)]
    pub random: RandomFrame,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    CheckFailed = 1,
    Input = 2,
    Numeric = 3,
}

/// Everything one invocation emits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit: Exit,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    exit: Exit::Input,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    exit: Exit::Pass,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(report) => Outcome {
            exit: report.exit,
            stdout: report.stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            exit: e.exit(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
