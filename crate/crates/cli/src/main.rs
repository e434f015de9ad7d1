use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use linkern::commands::{self, CommandError, Report, WitnessMode};

/// Kernels of x + a·x^(q^s) + b·x^(q^(n+s)) over F_(q^2n): batch commands
/// with JSON-lines output.
#[derive(Parser, Debug)]
#[command(name = "linkern", version)]
struct Cli {
    /// Worker threads (0 = rayon default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Params {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    s: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kernel dimension of f_{a,b,s} and the norm bound
    Kernel {
        #[command(flatten)]
        p: Params,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Verified certificates (a, δa) with a two-dimensional kernel
    Witness {
        #[command(flatten)]
        p: Params,
        #[arg(long, conflicts_with_all = ["all", "per_class"])]
        delta: Option<String>,
        /// every δ with N(δ) ∉ {0, 1}
        #[arg(long)]
        all: bool,
        /// least δ of each norm class
        #[arg(long)]
        per_class: bool,
    },
    /// Scatteredness verdicts for x^(q^s) + δ·x^(q^(n+s))
    Classify {
        #[command(flatten)]
        p: Params,
        #[arg(long)]
        delta: Option<String>,
        /// fall back to enumeration when no rule applies
        #[arg(long)]
        exhaustive: bool,
    },
    /// Affine point count of one curve (parity follows q)
    Curve {
        #[command(flatten)]
        p: Params,
        #[arg(long)]
        beta: String,
        /// nonsquare for odd q
        #[arg(long, conflicts_with = "eps")]
        eta: Option<String>,
        /// trace-one element for even q
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i8,
    },
    /// All valid curves for (q, n, s)
    CurveSweep {
        #[command(flatten)]
        p: Params,
        /// walk every good point back to a certificate
        #[arg(long)]
        roundtrip: bool,
    },
    /// Rank-metric code of x^(q^s) + δ·x^(q^(n+s))
    Mrd {
        #[command(flatten)]
        p: Params,
        #[arg(long)]
        delta: String,
    },
    /// Distinct norms of δ̄(ξ) over the ξ-scan
    Norms {
        #[command(flatten)]
        p: Params,
    },
    /// Seeded property checks on F_(q^2n)
    Selfcheck {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
}

fn run(command: Command) -> Result<Report, CommandError> {
    match command {
        Command::Kernel { p, a, b } => commands::kernel(p.q, p.n, p.s, &a, &b),
        Command::Witness { p, delta, all, per_class } => {
            let mode = match (delta, all, per_class) {
                (Some(d), _, _) => WitnessMode::Delta(d),
                (None, true, _) => WitnessMode::All,
                (None, false, true) => WitnessMode::PerClass,
                (None, false, false) => {
                    return Err(CommandError::Invalid("one of --delta, --all, --per-class is required".into()))
                }
            };
            commands::witness(p.q, p.n, p.s, mode)
        }
        Command::Classify { p, delta, exhaustive } => {
            commands::classify(p.q, p.n, p.s, delta.as_deref(), exhaustive)
        }
        Command::Curve { p, beta, eta, eps, sign } => {
            if sign != 1 && sign != -1 {
                return Err(CommandError::Invalid(format!("sign must be 1 or -1, got {sign}")));
            }
            let aux = eta.or(eps);
            commands::curve(p.q, p.n, p.s, &beta, aux.as_deref(), sign)
        }
        Command::CurveSweep { p, roundtrip } => commands::curve_sweep(p.q, p.n, p.s, roundtrip),
        Command::Mrd { p, delta } => commands::mrd(p.q, p.n, p.s, &delta),
        Command::Norms { p } => commands::norms(p.q, p.n, p.s),
        Command::Selfcheck { q, n, seed, samples } => commands::selfcheck(q, n, seed, samples),
    }
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    Ok(f())
}

fn emit(report: &Report, out: Option<&PathBuf>) -> io::Result<()> {
    let mut w: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report.write_to(&mut w)?;
    w.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match with_threads(cli.threads, || run(cli.command)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(report) => {
            if let Err(e) = emit(&report, cli.out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
