//! Command-line front end: config parsing, the five verbs, output layout and
//! the run manifest.
//!
//! Exit codes:
//!
//! | code | meaning                                                   |
//! |------|-----------------------------------------------------------|
//! | 0    | success                                                   |
//! | 1    | runtime failure (I/O, numerical error); outputs kept      |
//! | 2    | configuration error; nothing is left in the output dir    |
//! | 3    | finished but not converged or a verdict failed; outputs kept |

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::path::Path;

pub use commands::{dispatch, preflight, CommandError, RunStatus, Verb};
pub use config::{parse_config, Config, ConfigError, Document, Origin};
pub use output::{Emitter, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Reads `path`, applies the `section.key=value` overrides and validates.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<Config, ConfigError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| ConfigError {
            origin: Origin::Default,
            key: p.display().to_string(),
            message: format!("cannot read config: {e}"),
        })?,
        None => String::new(),
    };
    let mut doc = Document::parse(&text)?;
    for o in overrides {
        doc.set(o)?;
    }
    Config::from_document(doc)
}

/// Runs `verb` into `cfg.output.directory` and returns the exit code.
/// Diagnostics go to stderr.
pub fn run(verb: Verb, cfg: &Config) -> i32 {
    if let Err(e) = preflight(verb, cfg) {
        eprintln!("config error: {e}");
        return EXIT_CONFIG;
    }
    let mut em = match Emitter::create(&cfg.output.directory, cfg.output.formats) {
        Ok(em) => em,
        Err(e) => {
            eprintln!("cannot create {}: {e}", cfg.output.directory.display());
            return EXIT_FAILURE;
        }
    };
    let snapshot = cfg.snapshot();
    let config_sha = match em.write(output::CONFIG_SNAPSHOT, snapshot.as_bytes()) {
        Ok(sha) => sha,
        Err(e) => {
            eprintln!("cannot write config snapshot: {e}");
            return EXIT_FAILURE;
        }
    };
    let code = match dispatch(verb, cfg, &mut em) {
        Ok(RunStatus::Success) => EXIT_OK,
        Ok(RunStatus::NotConverged) => {
            eprintln!("{verb}: finished without convergence; see reports/");
            EXIT_NOT_CONVERGED
        }
        Err(CommandError::Config(e)) => {
            eprintln!("config error: {e}");
            em.discard();
            return EXIT_CONFIG;
        }
        Err(e) => {
            eprintln!("{verb} failed: {e}");
            EXIT_FAILURE
        }
    };
    match em.finish(verb.name(), config_sha, code) {
        Ok(_) => code,
        Err(e) => {
            eprintln!("cannot write manifest: {e}");
            EXIT_FAILURE
        }
    }
}
