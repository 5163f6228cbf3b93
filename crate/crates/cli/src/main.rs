use std::io::{ErrorKind, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use loopschur::involutions::{Instance, DEFAULT_CAP};
use loopschur::shapes::enumerate_border_strips;
use loopschur::tableaux::{loop_power_sum, shifted_loop_schur, ShiftParams};
use loopschur::verify::{
    check_involution, default_grid, parse_grid, run_grid, verify_classical_mn, verify_lemma,
    verify_specialization, verify_theorem1, verify_theorem2, GridOptions, InvolutionMode,
    VerificationReport, Which,
};
use loopschur::{Error, Partition, Polynomial};

/// `println!` that exits quietly when stdout is closed (e.g. piped into `head`).
macro_rules! emit {
    ($($arg:tt)*) => {
        write_line(format_args!($($arg)*))
    };
}

fn write_line(args: std::fmt::Arguments<'_>) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_fmt(args).and_then(|_| out.write_all(b"\n")) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

#[derive(Parser)]
#[command(
    name = "loopschur",
    version,
    about = "Loop Schur functions and the loop Murnaghan–Nakayama rule"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Attach wall-clock times to reports (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct Shape {
    /// Partition as comma-separated parts; empty for ∅.
    #[arg(long, default_value = "")]
    lambda: Partition,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long = "N")]
    bound: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print s_{λ,N}[n], or the shifted s^l with --l.
    Schur {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 0)]
        l: u32,
    },
    /// Print p_{k,N}[n].
    PowerSum {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long = "N")]
        bound: usize,
    },
    /// List the ways to add a border strip of size m to λ.
    BorderStrips {
        #[arg(long, default_value = "")]
        lambda: Partition,
        #[arg(long)]
        m: u32,
    },
    /// Check the finite loop Murnaghan–Nakayama identity.
    MnVerify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Check the degree bound on the shifted alternating sum.
    Thm2Verify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        l: u32,
    },
    /// Check one of the three signed-sum lemmas by exhaustive enumeration.
    LemmaVerify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        which: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Check an involution pointwise, exhaustively or on seeded samples.
    InvolutionCheck {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long)]
        which: Which,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Compare forgotten-color loop Schur functions with the classical oracle.
    SpecializeCheck {
        #[command(flatten)]
        shape: Shape,
        /// Also check the specialized identity with p_{kn}.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Run a grid of checks from a TOML config (the shipped grid by default).
    Grid {
        #[arg(long)]
        config: Option<std::path::PathBuf>,
    },
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Structured output is one object for single checks and an array for grids.
fn emit_reports(reports: &[VerificationReport], format: Format, as_list: bool) {
    match format {
        Format::Text => {
            for r in reports {
                emit!("{r}");
            }
        }
        Format::Structured => {
            let text = if !as_list {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(reports)
            };
            emit!("{}", text.expect("reports serialize"));
        }
    }
}

fn emit_polynomial(p: &Polynomial, meta: serde_json::Value, format: Format) {
    match format {
        Format::Text => emit!("{p}"),
        Format::Structured => {
            let mut v = meta;
            v["polynomial"] = serde_json::to_value(p.to_doc()).expect("documents serialize");
            emit!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
}

fn timed<F>(timings: bool, f: F) -> Result<VerificationReport, Failure>
where
    F: FnOnce() -> loopschur::Result<VerificationReport>,
{
    let start = Instant::now();
    let mut r = f()?;
    if timings {
        r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let format = cli.format;
    let timings = cli.timings;
    let reports = match cli.command {
        Command::Schur { shape, l } => {
            let p = ShiftParams::new(shape.n, l)?;
            let poly = shifted_loop_schur(&shape.lambda, p, shape.bound);
            let meta =
                json!({"lambda": shape.lambda.to_string(), "n": shape.n, "N": shape.bound, "l": l});
            emit_polynomial(&poly, meta, format);
            return Ok(true);
        }
        Command::PowerSum { k, n, bound } => {
            let poly = loop_power_sum(k, n, bound)?;
            emit_polynomial(&poly, json!({"k": k, "n": n, "N": bound}), format);
            return Ok(true);
        }
        Command::BorderStrips { lambda, m } => {
            let strips = enumerate_border_strips(&lambda, m);
            match format {
                Format::Text => {
                    for s in &strips {
                        emit!("{}\theight {}", s.sigma, s.height);
                    }
                }
                Format::Structured => {
                    let v = json!({"lambda": lambda.to_string(), "m": m, "strips": strips});
                    emit!("{}", serde_json::to_string_pretty(&v).expect("json"));
                }
            }
            return Ok(true);
        }
        Command::MnVerify { shape, k } => {
            vec![timed(timings, || {
                verify_theorem1(&shape.lambda, shape.n, k, shape.bound)
            })?]
        }
        Command::Thm2Verify { shape, k, l } => {
            vec![timed(timings, || {
                verify_theorem2(&shape.lambda, shape.n, k, shape.bound, l)
            })?]
        }
        Command::LemmaVerify {
            shape,
            k,
            l,
            which,
            cap,
        } => vec![timed(timings, || {
            verify_lemma(which, &shape.lambda, shape.n, k, shape.bound, l, cap)
        })?],
        Command::InvolutionCheck {
            shape,
            k,
            l,
            which,
            exhaustive,
            samples,
            seed,
            cap,
        } => {
            let mode = match (exhaustive, samples) {
                (_, Some(samples)) => InvolutionMode::Sampled { samples, seed },
                _ => InvolutionMode::Exhaustive { cap },
            };
            let inst = Instance::new(shape.lambda.clone(), shape.n, k, shape.bound)?;
            vec![timed(timings, || check_involution(which, &inst, l, mode))?]
        }
        Command::SpecializeCheck { shape, k } => {
            let mut out = vec![timed(timings, || {
                verify_specialization(&shape.lambda, shape.n, shape.bound)
            })?];
            if let Some(k) = k {
                out.push(timed(timings, || {
                    verify_classical_mn(&shape.lambda, shape.n, k, shape.bound)
                })?);
            }
            out
        }
        Command::Grid { config } => {
            let config = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        Failure::Usage(format!("cannot read {}: {e}", path.display()))
                    })?;
                    parse_grid(&text)?
                }
                None => default_grid(),
            };
            let reports = run_grid(&config, GridOptions { timings })?;
            emit_reports(&reports, format, true);
            if format == Format::Text {
                let passed = reports.iter().filter(|r| r.pass).count();
                emit!("{passed}/{} checks passed", reports.len());
            }
            return Ok(reports.iter().all(|r| r.pass));
        }
    };
    emit_reports(&reports, format, reports.len() > 1);
    Ok(reports.iter().all(|r| r.pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
