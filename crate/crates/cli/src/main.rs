mod args;
mod data;
mod exact;
mod output;
mod verify;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command};
use output::to_json;

/// Pretty JSON to stdout and, if requested, to a file.
fn emit<T: serde::Serialize>(value: &T, out: Option<&std::path::Path>) -> Result<()> {
    let s = to_json(value)?;
    if let Some(path) = out {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            output::ensure_dir(dir)?;
        }
        std::fs::write(path, &s).with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{s}");
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("IBQRM_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("IBQRM_THREADS must be a positive integer, got {v:?}"))?;
        anyhow::ensure!(n > 0, "IBQRM_THREADS must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

/// Ok(true) when every check passed.
fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::VerifyAll(a) => {
            let r = verify::run(&a)?;
            emit(&r, a.out.as_deref())?;
            if let Some(f) = &r.first_failure {
                eprintln!("verification failed: {f}");
            }
            Ok(r.passed)
        }
        Command::DeriveJ(a) => {
            let r = exact::derive(&a)?;
            emit(&r, a.out.as_deref())?;
            Ok(r.passed())
        }
        Command::Juddian(a) => {
            let r = exact::juddian(&a)?;
            emit(&r, a.out.as_deref())?;
            Ok(true)
        }
        Command::Sweep(a) => summary(data::sweep(&a)?),
        Command::Surface(a) => summary(data::surface(&a)?),
        Command::Elliptic(a) => summary(data::elliptic(&a)?),
        Command::Omega(a) => summary(data::omega(&a)?),
    }
}

fn summary(s: data::Summary) -> Result<bool> {
    emit(&s, None)?;
    Ok(s.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
