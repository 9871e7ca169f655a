//! Command-line front end: parses flags into a run configuration and dispatches.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use vortex_solitons::cli::{exit_code, run, Command};
use vortex_solitons::io::RunConfig;

#[derive(Parser)]
#[command(name = "vortex", about = "Traveling vortex pairs and rings into the sphere")]
struct Args {
    #[command(subcommand)]
    cmd: Sub,
    /// Key-value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    regime: Option<String>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    kappa: Option<f64>,
    #[arg(long, global = true)]
    dhat: Option<f64>,
    /// Grid spacing in both directions.
    #[arg(long, global = true)]
    h: Option<f64>,
    #[arg(long, global = true)]
    ansatz_only: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Field file read by `verify` and `reconstruct`.
    #[arg(long, global = true)]
    field: Option<PathBuf>,
    /// Extra `key=value` overrides.
    #[arg(long = "set", global = true)]
    set: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    Profile,
    Pair,
    Ring,
    Reduce,
    Verify,
    Reconstruct,
    Sweep,
}

fn config(a: &Args) -> vortex_solitons::Result<RunConfig> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut put = |k: &str, v: String| cfg.set(k, &v);
    if let Some(r) = &a.regime {
        put("regime", r.clone())?;
    }
    if let Some(v) = a.eps {
        put("eps", v.to_string())?;
    }
    if let Some(v) = a.kappa {
        put("kappa", v.to_string())?;
    }
    if let Some(v) = a.dhat {
        put("d_hat", v.to_string())?;
    }
    if let Some(v) = a.h {
        put("h1", v.to_string())?;
        put("h2", v.to_string())?;
    }
    if a.ansatz_only {
        put("ansatz_only", "true".into())?;
    }
    if let Some(p) = &a.out {
        put("output_dir", p.display().to_string())?;
    }
    if let Some(p) = &a.field {
        put("field", p.display().to_string())?;
    }
    for kv in &a.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| vortex_solitons::Error::Config(format!("--set {kv:?} is not key=value")))?;
        put(k.trim(), v.trim().to_string())?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cmd = match args.cmd {
        Sub::Profile => Command::Profile,
        Sub::Pair => Command::Pair,
        Sub::Ring => Command::Ring,
        Sub::Reduce => Command::Reduce,
        Sub::Verify => Command::Verify,
        Sub::Reconstruct => Command::Reconstruct,
        Sub::Sweep => Command::Sweep,
    };
    match config(&args).and_then(|cfg| run(cmd, &cfg)) {
        Ok(out) => {
            print!("{}", out.report.render());
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
