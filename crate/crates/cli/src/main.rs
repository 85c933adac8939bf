use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use fujita_lab::{load_config, run, Verb, EXIT_CONFIG, EXIT_FAILURE};

/// Lifespan experiments for u_t + (-Δ)^m u = |u|^p.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// simulate | sweep | kernel | decay-check | testfn-verify
    verb: Verb,
    /// Sectioned key=value config file; omitted means all defaults.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Override one key, e.g. `--set problem.epsilon=0.2`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (same as `--set output.directory=...`).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let mut overrides = cli.overrides;
    if let Some(out) = cli.out {
        overrides.push(format!("output.directory={}", out.display()));
    }
    let cfg = match load_config(cli.config.as_deref(), &overrides) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    if let Some(threads) = fujita_core::harness::thread_cap() {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("cannot size the worker pool: {e}");
            return ExitCode::from(EXIT_FAILURE as u8);
        }
    }
    ExitCode::from(run(cli.verb, &cfg) as u8)
}
