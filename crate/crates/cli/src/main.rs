use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sqflab::report::{write_csv, write_json};
use sqflab::verify::{exit_code, q_from_exponents, run_scan, run_verify, write_scan_csv, write_scan_json, ScanKind, Suite};

#[derive(Parser)]
#[command(name = "sqflab", version, about = "Squarefree numbers in arithmetic progressions: verification suites and scans")]
struct Cli {
    /// Worker threads (default: all cores, or SQFLAB_THREADS when set).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Target absolute error for computed reals.
    #[arg(long, global = true, default_value_t = 1e-12)]
    precision: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite and emit one record per check.
    Verify {
        /// identities, expsums, asymptotics or all
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate a statistic over moduli at fixed X.
    Scan {
        /// variance, correlation, croft or hooley
        #[arg(long)]
        kind: ScanKind,
        #[arg(long)]
        x: u64,
        /// Comma-separated moduli.
        #[arg(long, value_delimiter = ',', conflicts_with = "q_exp", required_unless_present = "q_exp")]
        q: Vec<u64>,
        /// Exponent range `lo:hi:step`, giving q = round(X^e).
        #[arg(long)]
        q_exp: Option<String>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        m: i64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Output {
    fn writer(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_range(s: &str) -> Option<(f64, f64, f64)> {
    let v: Vec<f64> = s.split(':').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
    match v.as_slice() {
        [lo, hi, step] => Some((*lo, *hi, *step)),
        [lo, hi] => Some((*lo, *hi, 0.05)),
        _ => None,
    }
}

fn run(cli: Cli) -> ExitCode {
    let threads = cli.threads.or_else(|| std::env::var("SQFLAB_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return usage(e);
        }
    }
    match cli.cmd {
        Cmd::Verify { suite, seed, output } => {
            let records = match run_verify(suite, seed, cli.precision) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            let written = output.writer().and_then(|mut w| {
                match output.format {
                    Format::Csv => write_csv(&records, &mut w).map_err(io::Error::other)?,
                    Format::Json => write_json(&records, &mut w).map_err(io::Error::other)?,
                }
                w.flush()
            });
            if let Err(e) = written {
                return usage(e);
            }
            let failed = records.iter().filter(|r| r.failed()).count();
            eprintln!("suite {suite}: {} records, {failed} failed", records.len());
            for r in records.iter().filter(|r| r.failed()) {
                eprintln!("FAIL {} {} lhs={} rhs={}", r.check_id, r.params_string(), r.lhs, r.rhs);
            }
            ExitCode::from(exit_code(&records) as u8)
        }
        Cmd::Scan { kind, x, q, q_exp, m, output } => {
            let qs = match q_exp {
                Some(s) => match parse_range(&s).map(|(lo, hi, st)| q_from_exponents(x, lo, hi, st)) {
                    Some(Ok(v)) => v,
                    Some(Err(e)) => return usage(e),
                    None => return usage(format!("bad exponent range '{s}', expected lo:hi:step")),
                },
                None => q,
            };
            let scan = match run_scan(kind, x, &qs, m, cli.precision) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            for w in &scan.warnings {
                eprintln!("warning: {w}");
            }
            let written = output.writer().and_then(|mut w| {
                match output.format {
                    Format::Csv => write_scan_csv(&scan.rows, &mut w).map_err(io::Error::other)?,
                    Format::Json => write_scan_json(&scan.rows, &mut w).map_err(io::Error::other)?,
                }
                w.flush()
            });
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage(e),
            }
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
