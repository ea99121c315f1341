//! `icg`: exact energies of gcd graphs from the command line.
//!
//! Exit status: 0 success, 1 usage error, 2 resource cap, 3 verification
//! discrepancy.

mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use icg_core::{Error, Natural};

pub use output::{Format, OutputRecord, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_DISCREPANCY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "icg",
    version,
    about = "Exact energies of integral circulant (gcd) graphs"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads for enumeration and spectral scans.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Report wall-clock time (makes output non-deterministic).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Energy of one divisor set.
    Energy(EnergyArgs),
    /// Maximal energy for order p^s and all maximizers.
    Emax(EmaxArgs),
    /// Minimal energy for order p^s and all minimizers.
    Emin(OrderArgs),
    /// Rewrite a delta vector to a maximizer, row by row.
    Trace(TraceArgs),
    /// Compare an energy with the complete graph and the Koolen-Moulton bound.
    Classify(SetArgs),
    /// Check the closed-form maximum against exhaustive search.
    Verify(VerifyArgs),
    /// Adjacency eigenvalues of a gcd graph.
    Spectrum(SetArgs),
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    #[arg(long)]
    pub p: Natural,
    #[arg(long)]
    pub s: u32,
}

#[derive(Args, Debug)]
pub struct SetArgs {
    #[arg(long)]
    pub n: Natural,
    /// Comma-separated divisors of n.
    #[arg(long)]
    pub divisors: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Formula,
    Spectral,
    Both,
}

#[derive(Args, Debug)]
pub struct EnergyArgs {
    #[arg(long, requires_all = ["s", "exponents"], conflicts_with_all = ["n", "divisors"])]
    pub p: Option<Natural>,
    #[arg(long, requires = "p")]
    pub s: Option<u32>,
    /// Comma-separated exponents of p.
    #[arg(long, requires = "p")]
    pub exponents: Option<String>,
    #[arg(long, requires = "divisors")]
    pub n: Option<Natural>,
    /// Comma-separated divisors of n.
    #[arg(long, requires = "n")]
    pub divisors: Option<String>,
    /// Evaluation route; by default the formula when n is a prime power.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Args, Debug)]
pub struct EmaxArgs {
    #[command(flatten)]
    pub order: OrderArgs,
    /// Also enumerate all divisor sets (s <= 20).
    #[arg(long)]
    pub brute: bool,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub order: OrderArgs,
    /// Comma-separated delta vector summing to s - 1.
    #[arg(long)]
    pub delta: String,
    /// Replay these rules instead of the default order, e.g. `Ia:1,III:8:12,~Ib:2`.
    #[arg(long)]
    pub steps: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub pmax: u64,
    #[arg(long)]
    pub smax: u32,
}

/// Failure of a subcommand, mapped onto an exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    /// Output already rendered; the computation disagreed with itself.
    Discrepancy(Box<OutputRecord>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(Error::ResourceCap { .. }) => EXIT_CAP,
            Failure::Core(Error::Internal(_)) | Failure::Discrepancy(_) => EXIT_DISCREPANCY,
            Failure::Core(_) => EXIT_USAGE,
        }
    }
}

pub fn dispatch(command: &Command) -> Result<OutputRecord, Failure> {
    match command {
        Command::Energy(a) => commands::energy(a),
        Command::Emax(a) => commands::emax(a),
        Command::Emin(a) => commands::emin(a),
        Command::Trace(a) => commands::trace(a),
        Command::Classify(a) => commands::classify(a),
        Command::Verify(a) => commands::verify(a),
        Command::Spectrum(a) => commands::spectrum(a),
    }
}

/// Parses `args`, runs the command and writes the rendering; returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };

    let start = Instant::now();
    let result = match cli.jobs {
        None => dispatch(&cli.command),
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Failure::Usage(format!("cannot start {n} workers: {e}"))),
        },
    };
    let elapsed = start.elapsed();

    let (mut record, code) = match result {
        Ok(record) => (record, EXIT_OK),
        Err(Failure::Discrepancy(record)) => (*record, EXIT_DISCREPANCY),
        Err(f) => {
            let code = f.exit_code();
            let msg = match f {
                Failure::Usage(m) => m,
                Failure::Core(e) => e.to_string(),
                Failure::Discrepancy(_) => unreachable!(),
            };
            let _ = writeln!(err, "error: {msg}");
            return code;
        }
    };
    if cli.timing {
        record.timing = Some(elapsed);
    }
    if let Err(e) = record.render(cli.format, out) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    if code == EXIT_DISCREPANCY {
        let _ = writeln!(err, "error: verification discrepancy");
    }
    code
}
