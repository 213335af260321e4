mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rhop_core::Error;
use serde::Serialize;

use config::{Cli, RunConfig, PRECISION_ENV};

#[derive(Serialize)]
struct ErrorJson<'a> {
    code: &'a str,
    module: &'a str,
    message: String,
}

fn fail(code: &str, module: &str, message: String, status: u8) -> ExitCode {
    let e = ErrorJson { code, module, message };
    eprintln!("{}", serde_json::to_string(&e).unwrap_or_default());
    ExitCode::from(status)
}

/// Configuration and input problems exit with 2, numerical failures with 3.
fn status_of(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::Io(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", "cli", e.to_string().trim().to_string(), 2),
    };
    let env_precision = std::env::var(PRECISION_ENV).ok().filter(|s| !s.is_empty());
    let cfg = match RunConfig::resolve(cli.command, cli.flags, env_precision) {
        Ok(c) => c,
        Err(e) => return fail(e.code(), "cli", e.to_string(), 2),
    };
    let out = match commands::run(&cfg) {
        Ok(o) => o,
        Err(e) => return fail(e.code(), e.module(), e.to_string(), status_of(&e)),
    };
    let bytes = match out.render(cfg.command, cfg.format) {
        Ok(b) => b,
        Err(e) => return fail(e.code(), "cli", e.to_string(), 2),
    };
    let written = match &cfg.out {
        Some(path) => rhop_core::io::write_file(path, |b| {
            b.extend_from_slice(&bytes);
            Ok(())
        })
        .map(|_| println!("{}", out.summary)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes).map_err(Error::from).map(|_| eprintln!("{}", out.summary))
        }
    };
    if let Err(e) = written {
        return fail(e.code(), "cli", e.to_string(), 2);
    }
    if out.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
