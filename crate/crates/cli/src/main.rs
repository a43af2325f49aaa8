//! `gradop`: differential operators on graded rings, cohomology on `P^n`,
//! vanishing certificates and Fedder tests from the command line.
//!
//! Every run writes `manifest.json` into the output directory, also when the
//! input is rejected. Exit status: 0 success, 1 bad input, 2 an internal
//! consistency check failed.

mod commands;
mod output;
mod ringfile;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{Format, OutDir};

/// Hard caps on the numeric bounds.
pub const ORDER_MAX_CAP: u32 = 32;
pub const SYM_MAX_CAP: u32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input-error",
            CliError::Internal(_) => "internal-error",
        }
    }
}

#[derive(Parser, Debug, Serialize)]
#[command(name = "gradop", version, about = "Differential operators on graded rings and related computations")]
pub struct Cli {
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "gradop-out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Dimension grid of graded operator spaces.
    Ops(OpsArgs),
    /// Cohomology tables of symmetric powers on P^n.
    PnCoh(PnCohArgs),
    /// Vanishing certificates on a hypersurface.
    Vanish(VanishArgs),
    /// Jumps in the order filtration at negative degrees.
    BigProbe(BigProbeArgs),
    /// Fedder's F-purity test over a list of primes.
    Fedder(FedderArgs),
    /// Compare operator dimensions with the truncated-action bound.
    Oracle(OracleArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ops(_) => "ops",
            Command::PnCoh(_) => "pn-coh",
            Command::Vanish(_) => "vanish",
            Command::BigProbe(_) => "big-probe",
            Command::Fedder(_) => "fedder",
            Command::Oracle(_) => "oracle",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraints {
    Commutators,
    Multipliers,
}

#[derive(Args, Debug, Serialize)]
pub struct OpsArgs {
    #[arg(long)]
    pub ring: PathBuf,
    #[arg(long)]
    pub order_max: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub degree_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
    pub degree_max: i64,
    #[arg(long, value_enum, default_value_t = Constraints::Commutators)]
    pub constraints: Constraints,
    /// Rank modulo this many random 62-bit primes instead of over Q.
    #[arg(long)]
    pub multimodular: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleArg {
    Omega,
    Tangent,
    Line,
}

#[derive(Args, Debug, Serialize)]
pub struct PnCohArgs {
    /// Ambient dimensions, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ambient: Vec<u32>,
    #[arg(long, value_enum, default_value_t = BundleArg::Omega)]
    pub bundle: BundleArg,
    #[arg(long, default_value_t = 1)]
    pub sym_min: u32,
    #[arg(long, default_value_t = 1)]
    pub sym_max: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub twist_min: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub twist_max: i64,
    #[arg(long, default_value = "Q")]
    pub field: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VanishTarget {
    /// `H^0(X, Sym^m T_X)` on a surface in P^3.
    Tangent,
    /// `H^0(X, Sym^m Ω_X(e))`.
    Intrinsic,
    /// `H^i(X, Sym^m Ω_{P^n}|_X(e))`.
    Restricted,
}

#[derive(Args, Debug, Serialize)]
pub struct VanishArgs {
    #[arg(long, default_value_t = 3)]
    pub ambient: u32,
    #[arg(long)]
    pub degree: u32,
    #[arg(long, default_value_t = 1)]
    pub sym_min: u32,
    #[arg(long)]
    pub sym_max: u32,
    #[arg(long, value_enum, default_value_t = VanishTarget::Tangent)]
    pub target: VanishTarget,
    /// Twist is `m * twist_slope + twist` (intrinsic and restricted targets).
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub twist: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    pub twist_slope: i64,
    #[arg(long, default_value_t = 0)]
    pub index: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct BigProbeArgs {
    #[arg(long)]
    pub ring: PathBuf,
    #[arg(long)]
    pub e_max: u32,
    #[arg(long)]
    pub order_max: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct FedderArgs {
    #[arg(long)]
    pub poly: String,
    /// Variable names; default: identifiers in order of appearance.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct OracleArgs {
    #[arg(long)]
    pub ring: PathBuf,
    #[arg(long)]
    pub order_max: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub degree_min: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub degree_max: i64,
    /// Largest truncation degree tried (default: minimum + 3).
    #[arg(long)]
    pub cap_max: Option<u32>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: Option<&'static str>,
    config: Option<&'a Cli>,
    args: Vec<String>,
    field: Option<String>,
    status: &'static str,
    exit_code: u8,
    message: Option<String>,
    outputs: Vec<String>,
    timing_ms: u128,
}

/// State shared by the commands.
pub struct Ctx {
    pub out: OutDir,
    pub format: Format,
    pub field: Option<String>,
    pub summary: Vec<String>,
}

fn write_manifest(dir: &std::path::Path, m: &Manifest) {
    let mut out = match OutDir::new(dir) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("gradop: cannot write manifest: {e}");
            return;
        }
    };
    if let Err(e) = out.write_json("manifest.json", m) {
        eprintln!("gradop: cannot write manifest: {e}");
    }
}

/// Best-effort `--out` lookup when the arguments do not parse.
fn out_from_raw(args: &[String]) -> PathBuf {
    for (i, a) in args.iter().enumerate() {
        if let Some(v) = a.strip_prefix("--out=") {
            return PathBuf::from(v);
        }
        if a == "--out" {
            if let Some(v) = args.get(i + 1) {
                return PathBuf::from(v);
            }
        }
    }
    PathBuf::from("gradop-out")
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let start = Instant::now();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            if code == 1 {
                write_manifest(
                    &out_from_raw(&args),
                    &Manifest {
                        tool: "gradop",
                        version: env!("CARGO_PKG_VERSION"),
                        command: None,
                        config: None,
                        args: args[1..].to_vec(),
                        field: None,
                        status: "input-error",
                        exit_code: 1,
                        message: Some(e.to_string().trim_end().to_string()),
                        outputs: Vec::new(),
                        timing_ms: start.elapsed().as_millis(),
                    },
                );
            }
            return ExitCode::from(code);
        }
    };

    let mut ctx = Ctx { out: OutDir { dir: cli.out.clone(), written: Vec::new() }, format: cli.format, field: None, summary: Vec::new() };
    let result = match OutDir::new(&cli.out) {
        Ok(o) => {
            ctx.out = o;
            let mut run = || {
                std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| commands::run(&cli, &mut ctx)))
                    .unwrap_or_else(|p| {
                        let msg = p
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panic".into());
                        Err(CliError::Internal(msg))
                    })
            };
            match cli.threads {
                Some(t) => gradop::par::with_threads(t, run),
                None => run(),
            }
        }
        Err(e) => Err(e),
    };

    for line in &ctx.summary {
        println!("{line}");
    }
    let (status, exit_code, message) = match &result {
        Ok(()) => ("ok", 0, None),
        Err(e) => {
            eprintln!("gradop: {e}");
            (e.status(), e.exit_code(), Some(e.to_string()))
        }
    };
    write_manifest(
        &cli.out,
        &Manifest {
            tool: "gradop",
            version: env!("CARGO_PKG_VERSION"),
            command: Some(cli.command.name()),
            config: Some(&cli),
            args: args[1..].to_vec(),
            field: ctx.field.clone(),
            status,
            exit_code,
            message,
            outputs: ctx.out.written.clone(),
            timing_ms: start.elapsed().as_millis(),
        },
    );
    ExitCode::from(exit_code)
}
