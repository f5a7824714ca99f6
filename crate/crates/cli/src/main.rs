//! `opspec`: analyze operator programs, run the theorem suites, compute
//! Drazin inverses.
//!
//! Exit codes: 0 success, 1 assertion or suite failure, 2 parse, binding
//! or usage error, 3 numeric ambiguity.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use drazin_core::ToleranceFrame;
use drazin_harness::{run_suite, GeneratorProfile, Status, Suite, VerificationReport};
use opspec::{analyze, drazin_matrix, Format};

#[derive(Parser)]
#[command(name = "opspec", version, about = "Spectral profiles of finitely presented operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Tol {
    /// Uniform tolerance for rank, clustering and set decisions.
    #[arg(long)]
    tol: Option<f64>,
}

impl Tol {
    fn frame(&self) -> Result<ToleranceFrame, String> {
        match self.tol {
            None => Ok(ToleranceFrame::default()),
            Some(t) => ToleranceFrame::uniform(t).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a program: bindings, assertions and queries.
    Analyze {
        file: PathBuf,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// The default.
        #[arg(long)]
        text: bool,
        #[command(flatten)]
        tol: Tol,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run theorem suites on seeded random instances.
    Verify {
        /// A suite name or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Drazin inverse and index of a square matrix.
    Drazin {
        file: PathBuf,
        #[command(flatten)]
        tol: Tol,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("opspec: {msg}");
    ExitCode::from(code)
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn run_analyze(file: &PathBuf, json: bool, tol: &Tol, out: Option<&PathBuf>) -> ExitCode {
    let src = match read(file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let tf = match tol.frame() {
        Ok(tf) => tf,
        Err(e) => return fail(2, e),
    };
    let format = if json { Format::Json } else { Format::Text };
    let report = match analyze(&src, &tf, format) {
        Ok(r) => r,
        Err(e) => return fail(e.exit_code(), format!("{}: {e}", file.display())),
    };
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &report.output) {
                return fail(2, format!("{}: {e}", p.display()));
            }
        }
        None => print!("{}", report.output),
    }
    if report.failed > 0 {
        eprintln!("opspec: {} assertion(s) failed", report.failed);
    }
    ExitCode::from(report.exit_code())
}

fn summary(r: &VerificationReport) -> String {
    let status = match r.status {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    };
    let mut s = format!(
        "{}: {status} ({} trials, {} failures, {} errors)",
        r.suite,
        r.trials,
        r.failures.len(),
        r.errors.len()
    );
    for f in r.failures.iter().take(10) {
        let id = match (f.trial, f.seed) {
            (Some(t), Some(sd)) => format!("trial {t}, seed {sd:#018x}"),
            _ => "fixture".into(),
        };
        s.push_str(&format!("\n  {id}: {}\n    {}", f.assertion, f.instance));
    }
    for e in r.errors.iter().take(10) {
        let id = e.trial.map_or("fixture".to_string(), |t| format!("trial {t}"));
        s.push_str(&format!("\n  error in {id}: {}\n    {}", e.message, e.instance));
    }
    s
}

fn run_verify(suite: &str, trials: u64, seed: u64, json: bool) -> ExitCode {
    let suites: Vec<Suite> = if suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        match suite.parse() {
            Ok(s) => vec![s],
            Err(e) => return fail(2, e),
        }
    };
    let profile = GeneratorProfile::with_seed(seed);
    let mut reports = Vec::new();
    for s in suites {
        match run_suite(s, trials, &profile) {
            Ok(r) => {
                if !json {
                    println!("{}", summary(&r));
                }
                reports.push(r);
            }
            Err(e) => return fail(2, e),
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("serializable reports"));
    }
    if reports.iter().any(|r| r.status == Status::Fail) {
        ExitCode::from(1)
    } else if reports.iter().any(|r| r.status == Status::Error) {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_drazin(file: &PathBuf, tol: &Tol) -> ExitCode {
    let src = match read(file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let tf = match tol.frame() {
        Ok(tf) => tf,
        Err(e) => return fail(2, e),
    };
    match drazin_matrix(&src, &tf) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.exit_code(), format!("{}: {e}", file.display())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::Analyze {
            file,
            json,
            text: _,
            tol,
            out,
        } => run_analyze(file, *json, tol, out.as_ref()),
        Cmd::Verify {
            suite,
            trials,
            seed,
            json,
        } => run_verify(suite, *trials, *seed, *json),
        Cmd::Drazin { file, tol } => run_drazin(file, tol),
    }
}
