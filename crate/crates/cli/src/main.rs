mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use commands::Report;

/// Exact experiments with facility-location mechanisms on the unit cycle.
#[derive(Parser, Debug)]
#[command(name = "cyclefl", version)]
struct Cli {
    /// Write a JSON run manifest (config echo, timing, result) to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    /// Cross-check against slow brute-force paths.
    #[arg(long, global = true, hide = true)]
    oracle: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Lottery, social cost, optimum and ratio of one mechanism on one profile.
    Eval(EvalArgs),
    /// Worst-case ratio over every grid profile, one CSV row per grid size.
    Search(SearchArgs),
    /// Exhaustive invariant checks; exits 1 when any violation is found.
    Verify(VerifyArgs),
    /// The cut-based bound on a profile, boundary parameters, or a k table.
    Phi(PhiArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    /// Comma-separated exact reports, e.g. "-1/4,0,1/4".
    #[arg(long, allow_hyphen_values = true)]
    pub profile: String,
    /// Mechanism name; join names with '+' for a mixture.
    #[arg(long, default_value = "rd+pcd")]
    pub mechanism: String,
    /// Read reports as positions in [0, Z) on a cycle of length Z.
    #[arg(long, value_name = "Z")]
    pub cycle_length: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    /// Grid sizes: a single value or an inclusive range such as 2..8.
    #[arg(long, value_parser = parse_range)]
    pub l: GridRange,
    #[arg(long, default_value = "rd+pcd")]
    pub mechanism: String,
    /// Only profiles with at most this many distinct reports.
    #[arg(long)]
    pub max_distinct: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_range)]
    pub l: GridRange,
    /// Any of sp, bounds, closed-forms, reduction.
    #[arg(long, value_delimiter = ',', default_value = "sp,bounds,closed-forms,reduction")]
    pub checks: Vec<Check>,
    /// Mechanism for the sp check.
    #[arg(long, default_value = "rd+pcd")]
    pub mechanism: String,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Sp,
    Bounds,
    ClosedForms,
    Reduction,
}

#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct PhiArgs {
    /// A segment profile (sorted, middle value 0) or any odd cycle profile.
    #[arg(long, allow_hyphen_values = true)]
    pub profile: Option<String>,
    /// Boundary parameters k,m_plus,m_minus.
    #[arg(long, value_name = "K,M1,M-1")]
    pub boundary: Option<String>,
    /// Table of the boundary maximum for k = 1..=KMAX.
    #[arg(long)]
    pub kmax: Option<u64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridRange {
    pub lo: usize,
    pub hi: usize,
}

fn parse_range(s: &str) -> Result<GridRange, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("{t:?} is not a grid size"))
    };
    let r = match s.split_once("..") {
        Some((a, b)) => GridRange {
            lo: num(a)?,
            hi: num(b.strip_prefix('=').unwrap_or(b))?,
        },
        None => {
            let v = num(s)?;
            GridRange { lo: v, hi: v }
        }
    };
    if r.lo > r.hi {
        return Err(format!("empty range {s}"));
    }
    Ok(r)
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a Command,
    oracle: bool,
    version: &'static str,
    started_unix: u64,
    elapsed_ms: u128,
    exit_code: u8,
    result: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let outcome = match &cli.command {
        Command::Eval(a) => commands::eval(a, cli.oracle),
        Command::Search(a) => commands::search(a, cli.oracle),
        Command::Verify(a) => commands::verify(a),
        Command::Phi(a) => commands::phi_cmd(a),
    };
    let (code, result) = match outcome {
        Ok(Report { clean, result }) => (u8::from(!clean), result),
        Err(e) => {
            eprintln!("error: {e:#}");
            (2, serde_json::json!({ "error": format!("{e:#}") }))
        }
    };
    if let Some(path) = &cli.manifest {
        let m = RunManifest {
            command: &cli.command,
            oracle: cli.oracle,
            version: env!("CARGO_PKG_VERSION"),
            started_unix: started,
            elapsed_ms: clock.elapsed().as_millis(),
            exit_code: code,
            result,
        };
        let written = serde_json::to_string_pretty(&m)
            .map_err(anyhow::Error::from)
            .and_then(|s| std::fs::write(path, s + "\n").map_err(Into::into));
        if let Err(e) = written {
            eprintln!("error: cannot write manifest {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
