//! `hfcode`: Ackermann codes, hyperset code solving and injectivity experiments.

mod commands;
mod input;
mod render;

use std::panic;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hfcode::code::{Dyadic, Round};
use hfcode::Error;

#[derive(Parser, Debug)]
#[command(
    name = "hfcode",
    version,
    about = "Ackermann codes and real-valued codes of hereditarily finite hypersets"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Target enclosure width, as a decimal (`1e-30`) or `2^-k`.
    #[arg(long, global = true, default_value = "1e-20")]
    eps: String,

    /// Largest working precision in bits.
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u32).range(64..=1 << 20))]
    max_precision: u32,

    /// Fractional digits in decimal output.
    #[arg(long, global = true, default_value_t = 20)]
    digits: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for commands that draw random data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for scans.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=256))]
    jobs: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    System,
    Graph,
    Braces,
    AckermannIndex,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ApproxKind {
    Set,
    Multiset,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ackermann code of a braces term such as `{{},{{}}}`.
    Encode {
        /// Braces term; read from stdin when absent.
        term: Option<String>,
    },
    /// The set with the given Ackermann code.
    Decode { code: String },
    /// Compare two sets in the Ackermann ordering.
    Compare {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = InputFormat::Braces)]
        input: InputFormat,
    },
    /// Successor of a set in the Ackermann ordering.
    Succ {
        term: String,
        #[arg(long, value_enum, default_value_t = InputFormat::Braces)]
        input: InputFormat,
    },
    /// Certified code enclosures for every unknown of a set system.
    Solve {
        /// Input file; stdin when absent or `-`.
        file: Option<String>,
        #[arg(long, value_enum, default_value_t = InputFormat::System)]
        input: InputFormat,
        /// Record the lower/upper iterates.
        #[arg(long)]
        trace: bool,
    },
    /// Certified code of a single set or of the point of a system or graph.
    Ra {
        /// Braces term, Ackermann index, or a file for system/graph input.
        term: Option<String>,
        #[arg(long, value_enum, default_value_t = InputFormat::Braces)]
        input: InputFormat,
        /// Unknown to report for system input; defaults to the first.
        #[arg(long)]
        point: Option<String>,
    },
    /// Enclosure of the code of `x = {x}`.
    Omega,
    /// Quotient a system or graph by its coarsest bisimulation.
    Minimize {
        file: Option<String>,
        #[arg(long, value_enum, default_value_t = InputFormat::System)]
        input: InputFormat,
    },
    /// Set and multiset approximating sequences, steps 0 to `steps`.
    Approx {
        file: Option<String>,
        #[arg(long, value_enum, default_value_t = InputFormat::System)]
        input: InputFormat,
        #[arg(long, short = 'j', default_value_t = 3)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = ApproxKind::Both)]
        kind: ApproxKind,
    },
    /// Codes of the first N Ackermann sets with overlap detection.
    Scan {
        #[arg(long, short = 'n', default_value_t = 4096)]
        n: u64,
        /// Write CSV instead of a text summary.
        #[arg(long)]
        csv: bool,
    },
    /// Certify R(h_i) ≠ R(h_{i+1}) and R(h_i) ≠ R(h_{i+2}) for i < N.
    Duecasi {
        #[arg(long, short = 'n', default_value_t = 1024)]
        n: u64,
    },
    /// Enclosure of R(h_{2^j}) − R(h_{2^j−1}).
    Deltagap {
        #[arg(long, short = 'j')]
        j: u32,
    },
    /// A set whose code exceeds n.
    Witness {
        #[arg(long, short = 'n')]
        n: u32,
    },
    /// Print a random set system.
    Gen {
        #[arg(long, default_value_t = 4)]
        unknowns: usize,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        /// Only emit systems without bisimilar unknowns.
        #[arg(long)]
        normal: bool,
    },
}

/// Validated global settings.
pub struct Config {
    pub eps: Dyadic,
    pub eps_text: String,
    pub max_precision: u32,
    pub digits: usize,
    pub format: Format,
    pub seed: u64,
    pub jobs: usize,
}

impl Config {
    fn from_args(a: &ConfigArgs) -> Result<Config, Failure> {
        let eps = Dyadic::parse(&a.eps, Round::Down, 64).map_err(Failure::usage)?;
        if !eps.is_positive() {
            return Err(Failure::Usage(format!(
                "--eps must be positive, got '{}'",
                a.eps
            )));
        }
        Ok(Config {
            eps,
            eps_text: a.eps.clone(),
            max_precision: a.max_precision,
            digits: a.digits,
            format: a.format,
            seed: a.seed,
            jobs: a.jobs as usize,
        })
    }
}

/// A failed command with its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
    Internal(String),
}

impl Failure {
    pub fn usage(e: impl ToString) -> Failure {
        Failure::Usage(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Budget(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Budget(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let msg = e.to_string();
        match e {
            Error::Parse { .. }
            | Error::InvalidSystem(_)
            | Error::InvalidArgument(_)
            | Error::Unreachable(_) => Failure::Usage(msg),
            Error::BitBudget { .. }
            | Error::SizeBudget(_)
            | Error::PrecisionExhausted { .. }
            | Error::PrecisionTooLow(_)
            | Error::IterationCap(_) => Failure::Budget(msg),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = Config::from_args(&cli.config)?;
    match cli.command {
        Command::Encode { term } => commands::encode(&cfg, term.as_deref()),
        Command::Decode { code } => commands::decode(&cfg, &code),
        Command::Compare { a, b, input } => commands::compare(&cfg, &a, &b, input),
        Command::Succ { term, input } => commands::succ(&cfg, &term, input),
        Command::Solve { file, input, trace } => {
            commands::solve(&cfg, file.as_deref(), input, trace)
        }
        Command::Ra { term, input, point } => {
            commands::ra(&cfg, term.as_deref(), input, point.as_deref())
        }
        Command::Omega => commands::omega(&cfg),
        Command::Minimize { file, input } => commands::minimize(&cfg, file.as_deref(), input),
        Command::Approx {
            file,
            input,
            steps,
            kind,
        } => commands::approx(&cfg, file.as_deref(), input, steps, kind),
        Command::Scan { n, csv } => commands::scan(&cfg, n, csv),
        Command::Duecasi { n } => commands::duecasi(&cfg, n),
        Command::Deltagap { j } => commands::deltagap(&cfg, j),
        Command::Witness { n } => commands::witness(&cfg, n),
        Command::Gen {
            unknowns,
            max_arity,
            normal,
        } => commands::gen(&cfg, unknowns, max_arity, normal),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = panic::catch_unwind(|| run(cli)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".to_string());
        Err(Failure::Internal(format!("internal error: {msg}")))
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
