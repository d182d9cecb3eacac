//! `ffred`: lemma checks, witnesses, translation and evaluation over
//! `F_q(t)` from the command line.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ffred::verify::{CheckVerdict, Report};
use ffred::Error;

use config::{GlobalArgs, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::SearchSpace { .. } | Error::ExponentOverflow(_) | Error::FieldTooLarge { .. } => {
                CliError::Resource(e.to_string())
            }
            Error::Syntax { .. }
            | Error::Sort(_)
            | Error::Translate(_)
            | Error::InvalidArgument(_)
            | Error::NotPrime(_)
            | Error::ZeroDegree
            | Error::BadModulus(_)
            | Error::Unsupported(_)
            | Error::InvalidPoint(_)
            | Error::Eval(_)
            | Error::NotEnoughOrbits { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ffred", version, about = "Arithmetic, Artin-Schreier equations and definability checks over F_q(t)")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a check suite, or `all` of them
    Verify(commands::VerifyArgs),
    /// Compile an arithmetic sentence into a ring sentence
    Translate(commands::TranslateArgs),
    /// Evaluate a formula
    Eval(commands::EvalArgs),
    /// Produce explicit witnesses
    Witness(commands::WitnessArgs),
    /// Frobenius points and group law on a twisted curve
    Curve(commands::CurveArgs),
    /// A short tour of the toolkit
    Demo,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FFRED_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage(format!("FFRED_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failed(format!("thread pool: {e}")))
}

fn emit(report: &Report, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize");
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Failed(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    configure_threads()?;
    let cfg = RunConfig::load(&cli.global)?;
    match cli.command {
        Command::Verify(a) => commands::verify(&cfg, &a),
        Command::Translate(a) => commands::translate(&cfg, &a),
        Command::Eval(a) => commands::eval(&cfg, &a),
        Command::Witness(a) => commands::witness(&cfg, &a),
        Command::Curve(a) => commands::curve(&cfg, &a),
        Command::Demo => commands::demo(&cfg),
    }
    .and_then(|r| {
        emit(&r, cfg.out.as_ref())?;
        Ok(r)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(r) if r.status == CheckVerdict::Pass => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            let (code, kind, msg) = match e {
                CliError::Usage(m) => (2, "usage error", m),
                CliError::Resource(m) => (3, "resource limit", m),
                CliError::Failed(m) => (1, "error", m),
            };
            eprintln!("ffred: {kind}: {msg}");
            ExitCode::from(code)
        }
    }
}
