//! Thin command-line front end; all logic lives in the library.

use clap::{Args, Parser, Subcommand};
use ncsym::cli::{self, RunConfig};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ncsym",
    version,
    about = "Symmetric functions of two noncommuting variables: expressibility checks, \
             realization pipelines, and the acceptance battery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a free polynomial is a combination of ordered products
    /// of generators up to a degree bound (exit 0 expressible, 3 infeasible,
    /// 2 parse error).
    Express(ExpressArgs),
    /// Generate a seeded symmetric instance and run the realization
    /// pipeline (exit 0 all stages pass, 4 on a stage failure).
    Pipeline(PipelineArgs),
    /// Run the acceptance battery (exit 0 iff every criterion passes).
    Suite(SuiteArgs),
}

#[derive(Args)]
struct ExpressArgs {
    /// Target polynomial, e.g. "z*w*z + w*z*w".
    #[arg(long)]
    target: String,
    /// A generator polynomial; repeat the flag for several.
    #[arg(long = "generators", required = true)]
    generators: Vec<String>,
    #[arg(long = "degree-bound")]
    degree_bound: usize,
    /// Output is always JSON; accepted for compatibility.
    #[arg(long)]
    json: bool,
    /// Also write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ToleranceArgs {
    #[arg(long = "tol.model")]
    model: Option<f64>,
    #[arg(long = "tol.split")]
    split: Option<f64>,
    #[arg(long = "tol.averaged")]
    averaged: Option<f64>,
    #[arg(long = "tol.intertwine")]
    intertwine: Option<f64>,
    #[arg(long = "tol.nu_symmetry")]
    nu_symmetry: Option<f64>,
    #[arg(long = "tol.resolvent")]
    resolvent: Option<f64>,
    #[arg(long = "tol.colligation")]
    colligation: Option<f64>,
    #[arg(long = "tol.cayley")]
    cayley: Option<f64>,
    #[arg(long = "tol.fit")]
    fit: Option<f64>,
    #[arg(long = "tol.holdout")]
    holdout: Option<f64>,
}

impl ToleranceArgs {
    fn to_map(&self) -> BTreeMap<String, f64> {
        let mut map = BTreeMap::new();
        let entries = [
            ("model", self.model),
            ("split", self.split),
            ("averaged", self.averaged),
            ("intertwine", self.intertwine),
            ("nu_symmetry", self.nu_symmetry),
            ("resolvent", self.resolvent),
            ("colligation", self.colligation),
            ("cayley", self.cayley),
            ("fit", self.fit),
            ("holdout", self.holdout),
        ];
        for (name, value) in entries {
            if let Some(v) = value {
                map.insert(name.to_string(), v);
            }
        }
        map
    }
}

#[derive(Args)]
struct PipelineArgs {
    /// Base seed; one number reproduces the whole report.
    #[arg(long, env = "NCSYM_SEED", default_value_t = 1)]
    seed: u64,
    /// Matrix levels to sample, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3])]
    levels: Vec<usize>,
    /// Half-dimension of the model space (the space has twice this).
    #[arg(long = "k-half-dim", default_value_t = 2)]
    k_half_dim: usize,
    #[command(flatten)]
    tol: ToleranceArgs,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, env = "NCSYM_SEED", default_value_t = 1)]
    seed: u64,
    /// Criterion ids to run (1-12), comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<usize>>,
    /// Rows in the per-seed end-to-end sweep table (0 disables).
    #[arg(long, default_value_t = 0)]
    sweep: usize,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(code: i32, body: String, out: Option<&PathBuf>) -> ExitCode {
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, &body) {
            eprintln!("ncsym: cannot write {}: {e}", path.display());
            return ExitCode::from(cli::EXIT_USAGE as u8);
        }
    }
    println!("{body}");
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Express(args) => {
            let (code, body) = cli::cmd_express(&args.target, &args.generators, args.degree_bound);
            emit(code, body, args.out.as_ref())
        }
        Command::Pipeline(args) => {
            let cfg = RunConfig {
                seed: args.seed,
                tolerances: args.tol.to_map(),
                levels: args.levels.clone(),
                k_half_dim: args.k_half_dim,
                ..Default::default()
            };
            let (code, body) = cli::cmd_pipeline(&cfg);
            emit(code, body, args.out.as_ref())
        }
        Command::Suite(args) => {
            let cfg = RunConfig {
                seed: args.seed,
                checks: args.checks.clone(),
                sweep: args.sweep,
                ..Default::default()
            };
            let (code, body) = cli::cmd_suite(&cfg);
            emit(code, body, args.out.as_ref())
        }
    }
}
