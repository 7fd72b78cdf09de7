mod lattice;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use lcplab_core::analysis::{analyze, AnalysisError, AnalysisOptions};
use lcplab_core::format::{parse_document, AnyDocument, Document};
use lcplab_core::gallery::gallery;
use lcplab_core::lcp::{validate_lcp, LcpReport};
use lcplab_core::metric::{validate_algebra, ValidationReport, DEFAULT_SEED};
use lcplab_core::{Scalar, ScalarMode, TolerancePolicy};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_AMBIGUOUS: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "lcplab", version, about = "Holonomy, de Rham splittings and LCP decomposability of metric Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the algebra (and LCP block, if any) in FILE
    Validate {
        file: PathBuf,
        #[arg(long, env = "LCPLAB_TOL")]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Run the full pipeline on FILE
    Analyze {
        file: PathBuf,
        /// Rank tolerance for float mode; the eigenvalue cluster tolerance is 100x this
        #[arg(long, env = "LCPLAB_TOL")]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// List or export the built-in examples
    Examples {
        #[arg(long, conflicts_with = "export", required_unless_present = "export")]
        list: bool,
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
    /// Integer matrix and polynomial tools
    Lattice {
        #[command(subcommand)]
        command: lattice::LatticeCommand,
        #[arg(long, global = true)]
        json: bool,
    },
}

pub(crate) fn tolerance(tol: Option<f64>) -> Result<TolerancePolicy, String> {
    match tol {
        None => Ok(TolerancePolicy::default()),
        Some(t) => TolerancePolicy::with_rank_tol(t).map_err(|e| e.to_string()),
    }
}

pub(crate) fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

pub(crate) fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report is serializable"));
}

fn load(path: &Path) -> Result<AnyDocument, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_document(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct ValidateReport {
    name: Option<String>,
    mode: ScalarMode,
    validation: ValidationReport,
    lcp_report: Option<LcpReport>,
    passed: bool,
    tolerance_policy: TolerancePolicy,
}

fn validate_doc<S: Scalar>(d: &Document<S>, tol: &TolerancePolicy) -> Result<ValidateReport, String> {
    let validation = validate_algebra(&d.algebra, tol);
    let lcp_report = match (&d.lcp, validation.is_valid()) {
        (Some(data), true) => Some(validate_lcp(&d.algebra, data, tol).map_err(|e| e.to_string())?),
        _ => None,
    };
    let passed = validation.is_valid() && lcp_report.as_ref().is_none_or(|r| r.overall);
    Ok(ValidateReport {
        name: d.name.clone(),
        mode: S::MODE,
        validation,
        lcp_report,
        passed,
        tolerance_policy: *tol,
    })
}

fn cmd_validate(file: &Path, tol: Option<f64>, json: bool) -> ExitCode {
    let tol = match tolerance(tol) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let doc = match load(file) {
        Ok(d) => d,
        Err(e) => return input_error(e),
    };
    let report = match &doc {
        AnyDocument::Exact(d) => validate_doc(d, &tol),
        AnyDocument::Float(d) => validate_doc(d, &tol),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    if json {
        print_json(&report);
    } else {
        render::validation(&report.validation, report.lcp_report.as_ref(), &doc.to_file().basis);
    }
    ExitCode::from(if report.passed { EXIT_PASS } else { EXIT_DOMAIN })
}

fn cmd_analyze(file: &Path, tol: Option<f64>, seed: u64, json: bool) -> ExitCode {
    let tol = match tolerance(tol) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let doc = match load(file) {
        Ok(d) => d,
        Err(e) => return input_error(e),
    };
    match analyze(&doc, &AnalysisOptions { tol, seed }) {
        Ok(report) => {
            if json {
                print_json(&report);
            } else {
                render::analysis(&report);
            }
            ExitCode::from(if report.passed() { EXIT_PASS } else { EXIT_DOMAIN })
        }
        Err(AnalysisError::Ambiguous { message, suggestion }) => {
            eprintln!("error: {message}\nhint: {suggestion}");
            ExitCode::from(EXIT_AMBIGUOUS)
        }
        Err(AnalysisError::Input(msg)) => input_error(msg),
        Err(e @ AnalysisError::Inconsistent(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

fn cmd_examples(list: bool, export: Option<&Path>) -> ExitCode {
    let entries = gallery();
    if list {
        for e in &entries {
            println!("{:<22} dim {:>2}  {}", e.name(), e.dim(), e.description());
        }
        return ExitCode::from(EXIT_PASS);
    }
    let Some(dir) = export else {
        return input_error("pass --list or --export DIR");
    };
    if let Err(e) = fs::create_dir_all(dir) {
        return input_error(format!("{}: {e}", dir.display()));
    }
    for e in entries {
        let name = e.name().to_string();
        let doc: AnyDocument = e.into();
        let path = dir.join(format!("{name}.json"));
        let text = serde_json::to_string_pretty(&doc.to_file()).expect("file is serializable") + "\n";
        if let Err(err) = fs::write(&path, text) {
            return input_error(format!("{}: {err}", path.display()));
        }
        println!("{}", path.display());
    }
    ExitCode::from(EXIT_PASS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file, tol, json } => cmd_validate(&file, tol, json),
        Command::Analyze { file, tol, seed, json } => cmd_analyze(&file, tol, seed, json),
        Command::Examples { list, export } => cmd_examples(list, export.as_deref()),
        Command::Lattice { command, json } => lattice::run(command, json),
    }
}
