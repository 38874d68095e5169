mod args;
mod commands;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use wnk_spectra::analysis::AnalysisConfig;
use wnk_spectra::spectral::SolverOptions;
use wnk_spectra::Exec;

use args::{Cli, Command, GlobalOpts};
use commands::Ctx;

pub enum Status {
    Pass,
    Fail,
}

/// A bad flag combination or value caught by the CLI itself.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    use wnk_spectra::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<E>() {
        Some(
            E::InvalidParameter(_)
            | E::SizeCap { .. }
            | E::NotApplicable(_)
            | E::Parse(_)
            | E::Validation(_)
            | E::Io { .. }
            | E::OrderMismatch { .. },
        ) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn validate(g: &GlobalOpts) -> Result<()> {
    for (name, v) in [
        ("tol", g.tol),
        ("cluster-tol", g.cluster_tol),
        ("atom-tol", g.atom_tol),
    ] {
        if v.is_nan() || v <= 0.0 || v.is_infinite() {
            return Err(UsageError(format!("{name} > 0 required, got {v}")).into());
        }
    }
    if g.jobs == Some(0) {
        return Err(UsageError("jobs >= 1 required".into()).into());
    }
    Ok(())
}

fn config(g: &GlobalOpts) -> AnalysisConfig {
    let exec = if g.jobs == Some(1) {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    AnalysisConfig {
        solver: SolverOptions {
            tol: g.tol,
            cluster_tol: g.cluster_tol,
            max_iter: None,
            cap: g.cap,
            exec,
        },
        atom_tol: g.atom_tol,
        exec,
    }
}

fn dispatch(cli: &Cli) -> Result<Status> {
    let ctx = Ctx {
        global: &cli.global,
        cfg: config(&cli.global),
    };
    match &cli.command {
        Command::Generate(o) => commands::generate(&ctx, o),
        Command::Spectrum(o) => commands::spectrum(&ctx, o),
        Command::Verify(o) => commands::verify(&ctx, o),
        Command::Esd(o) => commands::esd_cmd(&ctx, o),
        Command::Scan(o) => commands::scan(&ctx, o),
    }
}

#[cfg(feature = "parallel")]
fn run(cli: &Cli) -> Result<Status> {
    match cli.global.jobs {
        Some(j) if j > 1 => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(j).build()?;
            pool.install(|| dispatch(cli))
        }
        _ => dispatch(cli),
    }
}

#[cfg(not(feature = "parallel"))]
fn run(cli: &Cli) -> Result<Status> {
    dispatch(cli)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = validate(&cli.global).and_then(|()| run(&cli));
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(EXIT_FAIL),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
