mod args;
mod commands;
mod figures;
mod table;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use cps_core::TruncationPolicy;

use args::{Cli, Command};
use table::Table;

/// Environment variable holding the worker-thread count.
const THREADS_ENV: &str = "CPS_THREADS";

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cmd: &Command) -> Result<Table> {
    let series = TruncationPolicy::default();
    let wave = TruncationPolicy::wavefunction();
    match cmd {
        Command::Stats { state, trunc, .. } => commands::stats(&state.state()?, &trunc.policy(series)),
        Command::Sweep {
            param,
            from,
            to,
            points,
            phi,
            trunc,
            ..
        } => commands::sweep(*param, *from, *to, *points, *phi, &trunc.policy(series)),
        Command::Wavefunction {
            state,
            x_min,
            x_max,
            points,
            trunc,
            ..
        } => commands::wavefunction(
            &state.state()?,
            &commands::linspace(*x_min, *x_max, *points)?,
            &trunc.policy(wave),
        ),
        Command::Wigner {
            state,
            q_min,
            q_max,
            p_min,
            p_max,
            nq,
            np,
            wigner,
            ..
        } => commands::wigner(
            &state.state()?,
            &commands::linspace(*q_min, *q_max, *nq)?,
            &commands::linspace(*p_min, *p_max, *np)?,
            &wigner.policy(),
        ),
        Command::Gaussianity { state, trunc, .. } => commands::gaussianity(&state.state()?, &trunc.policy(series)),
        Command::FitEta {
            from,
            to,
            points,
            trunc,
            ..
        } => commands::eta(*from, *to, *points, &trunc.policy(series)),
        Command::Figure {
            id,
            reference_terms,
            points,
            ..
        } => figures::figure(*id, *reference_terms, *points),
    }
}

fn output(cmd: &Command) -> &args::OutputArgs {
    match cmd {
        Command::Stats { out, .. }
        | Command::Sweep { out, .. }
        | Command::Wavefunction { out, .. }
        | Command::Wigner { out, .. }
        | Command::Gaussianity { out, .. }
        | Command::FitEta { out, .. }
        | Command::Figure { out, .. } => out,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    let table = match run(&cli.command) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let out = output(&cli.command);
    if let Err(e) = table.write(out.format, out.output.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if table.all_converged() {
        ExitCode::SUCCESS
    } else {
        eprintln!("warning: some rows did not converge (see the `converged` column)");
        ExitCode::from(2)
    }
}
