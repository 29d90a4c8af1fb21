//! Experiment runner: one subcommand per probe, CSV on stdout or `--output`.
//!
//! Exit codes: 0 when every check holds, 1 on a failed check, 2 on a usage error.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Artifacts;
use crate::config::{Failure, Outcome, Params};

#[derive(Parser)]
#[command(name = "hypolib", version, about = "Polyharmonic Poisson transforms on the hyperbolic disk")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Parameters when no subcommand is given (the config must name one).
    #[command(flatten)]
    params: Params,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel values K_{n,λ}(re^{iθ}, 1), raw and normalized.
    Kernel(Params),
    /// Spherical function Φ(r|λ): quadrature vs closed form.
    Spherical(Params),
    /// Φ_n against its boundary law over --R.
    Asymptotics(Params),
    /// Zeros of Φ on the forbidden ray, zero-free radius elsewhere.
    Zeros(Params),
    /// Dirichlet problem error along a radial ladder.
    Dirichlet(Params),
    /// Riquier problem at infinity.
    Riquier(Params),
    /// Convergence of the normalized transform (uniform, ae, lp:P, weak:K;...).
    Convergence(Params),
    /// Maximal inequality probe over the test suite.
    Maximal(Params),
    /// Admissible approach sweeps.
    Fatou(Params),
    /// Fourier coefficients of P log P and their bounds.
    Examples(Params),
    /// Lacunary construction: circle suprema at --N.
    Borichev(Params),
    /// The full acceptance suite.
    Selftest(Params),
}

type Runner = fn(&Params) -> Outcome<Artifacts>;

fn runner(name: &str) -> Option<Runner> {
    Some(match name {
        "kernel" => commands::kernel,
        "spherical" => commands::spherical,
        "asymptotics" => commands::asymptotics,
        "zeros" => commands::zeros,
        "dirichlet" => commands::dirichlet,
        "riquier" => commands::riquier,
        "convergence" => commands::convergence,
        "maximal" => commands::maximal,
        "fatou" => commands::fatou,
        "examples" => commands::examples,
        "borichev" => commands::borichev,
        "selftest" => commands::selftest,
        _ => return None,
    })
}

impl Command {
    fn split(self) -> (&'static str, Params) {
        match self {
            Command::Kernel(p) => ("kernel", p),
            Command::Spherical(p) => ("spherical", p),
            Command::Asymptotics(p) => ("asymptotics", p),
            Command::Zeros(p) => ("zeros", p),
            Command::Dirichlet(p) => ("dirichlet", p),
            Command::Riquier(p) => ("riquier", p),
            Command::Convergence(p) => ("convergence", p),
            Command::Maximal(p) => ("maximal", p),
            Command::Fatou(p) => ("fatou", p),
            Command::Examples(p) => ("examples", p),
            Command::Borichev(p) => ("borichev", p),
            Command::Selftest(p) => ("selftest", p),
        }
    }
}

fn configure_threads() -> Outcome<()> {
    let Ok(v) = std::env::var("HYPOLIB_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("HYPOLIB_THREADS: expected a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Check(format!("thread pool: {e}")))
}

fn emit(params: &Params, out: &Artifacts) -> Outcome<()> {
    let io = |e: std::io::Error| Failure::Check(format!("writing output: {e}"));
    match &params.output {
        Some(path) => out.table.write_to(path).map_err(io)?,
        None => std::io::stdout().lock().write_all(out.table.render().as_bytes()).map_err(io)?,
    }
    if let (Some(path), Some(json)) = (&params.json, &out.json) {
        let text = serde_json::to_string_pretty(json).map_err(|e| Failure::Check(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(io)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome<()> {
    configure_threads()?;
    let (name, params) = match cli.command {
        Some(c) => {
            let (name, p) = c.split();
            (Some(name.to_string()), p)
        }
        None => (None, cli.params),
    };
    let (params, from_config) = params.merged()?;
    let name = name
        .or(from_config)
        .ok_or_else(|| Failure::Usage("no subcommand given and the config names no \"command\"".into()))?;
    let run = runner(&name).ok_or_else(|| Failure::Usage(format!("command: unknown {name:?}")))?;
    let out = run(&params)?;
    emit(&params, &out)?;
    match out.failed {
        Some(m) => Err(Failure::Check(format!("{name}: {m}"))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hypolib: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
