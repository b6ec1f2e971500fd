//! `heisenmod`: Gabor frame and Heisenberg module computations from a JSON job file.
//!
//! Exit codes: 0 success, 1 failed identity in `verify`, 2 malformed input, 3 math-domain error.

mod commands;
mod failure;
mod spec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use crate::commands::Output;
use crate::failure::Failure;
use crate::spec::JobSpec;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Adjoint subgroup, its weight and the size of the subgroup.
    Adjoint,
    /// Optimal frame bounds and the frame verdict.
    FrameBounds,
    /// Canonical dual windows.
    DualWindow,
    /// Both sides of the four-window identity (needs four windows).
    Figa,
    /// Generator test against the frame test.
    GenCheck,
    /// Frame operator through the adjoint subgroup.
    Janssen,
    /// Frame-operator eigenvalues, largest first.
    Spectrum,
    /// Full identity suite; exits 1 if any identity fails.
    Verify,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "heisenmod", version, about = "Gabor frames and Heisenberg modules over finite abelian groups")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Job file (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Overrides the seed in the job file.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the frame tolerance in the job file.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    out: Format,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("HEISENMOD_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Parse(format!("HEISENMOD_THREADS: expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Parse(format!("HEISENMOD_THREADS: {e}")))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    configure_threads()?;
    let job = JobSpec::load(&cli.spec)?.resolve(cli.seed, cli.tol)?;
    match cli.command {
        Command::Adjoint => commands::adjoint(&job),
        Command::FrameBounds => commands::frame_bounds_cmd(&job),
        Command::DualWindow => commands::dual_window_cmd(&job),
        Command::Figa => commands::figa(&job),
        Command::GenCheck => commands::gen_check(&job),
        Command::Janssen => commands::janssen(&job),
        Command::Spectrum => commands::spectrum_cmd(&job),
        Command::Verify => commands::verify(&job),
    }
}

fn render(out: &Output, format: Format) -> Result<Vec<u8>, Failure> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_vec_pretty(&out.json).map_err(|e| Failure::Math(e.to_string()))?;
            text.push(b'\n');
            Ok(text)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure::Math(e.to_string());
            w.write_record(&out.header).map_err(io)?;
            for row in &out.rows {
                w.write_record(row).map_err(io)?;
            }
            w.into_inner().map_err(|e| Failure::Math(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| Ok((render(&out, cli.out)?, out.exit)));
    match result {
        Ok((bytes, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&bytes).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("heisenmod: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
