use std::process::ExitCode;

use clap::Subcommand;
use serde::Serialize;

use lcplab_core::lattice::{
    char_poly, determinant, discreteness_probe, factorize, solve_conjugacy, unit_root_profile, verify_conjugacy,
    IntegerMatrix, PolynomialZ, ProbeOutcome, DEFAULT_PROBE_TOL,
};
use lcplab_core::Matrix;

use crate::{input_error, print_json, EXIT_AMBIGUOUS, EXIT_DOMAIN, EXIT_PASS};

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    /// Characteristic polynomial of an integer matrix, e.g. '[[1,1],[1,2]]'
    Charpoly { matrix: String },
    /// Irreducibility over Z; coefficients constant term first
    Irreducible {
        #[arg(required = true, allow_negative_numbers = true)]
        coeffs: Vec<i64>,
    },
    /// Roots of a unit polynomial relative to the unit circle
    Roots {
        #[arg(required = true, allow_negative_numbers = true)]
        coeffs: Vec<i64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Solve C⁻¹·A·C = exp(t0·A0) for an integer matrix A
    Conjugacy {
        matrix: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Discreteness probe on translation vectors, each given as comma-separated floats
    Probe {
        #[arg(required = true, allow_negative_numbers = true)]
        vectors: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_PROBE_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
}

fn parse_matrix(text: &str) -> Result<IntegerMatrix, String> {
    serde_json::from_str(text).map_err(|e| format!("matrix: {e}"))
}

fn parse_poly(coeffs: &[i64]) -> Result<PolynomialZ, String> {
    PolynomialZ::from_i64(coeffs).map_err(|e| e.to_string())
}

fn rows(m: &Matrix<f64>) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

#[derive(Serialize)]
struct CharpolyReport {
    char_poly: PolynomialZ,
    determinant: String,
}

#[derive(Serialize)]
struct IrreducibleReport {
    polynomial: PolynomialZ,
    irreducible: bool,
    factors: Vec<PolynomialZ>,
}

#[derive(Serialize)]
struct ConjugacyReport {
    t0: f64,
    a0: Vec<Vec<f64>>,
    conjugator: Vec<Vec<f64>>,
    translation_parts: Vec<Vec<f64>>,
    verified: bool,
    tol: f64,
}

pub fn run(cmd: LatticeCommand, json: bool) -> ExitCode {
    match cmd {
        LatticeCommand::Charpoly { matrix } => {
            let a = match parse_matrix(&matrix) {
                Ok(a) => a,
                Err(e) => return input_error(e),
            };
            let report = CharpolyReport {
                char_poly: char_poly(&a),
                determinant: determinant(&a).to_string(),
            };
            if json {
                print_json(&report);
            } else {
                println!("{}", report.char_poly);
            }
            ExitCode::from(EXIT_PASS)
        }
        LatticeCommand::Irreducible { coeffs } => {
            let p = match parse_poly(&coeffs) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            let factors = match factorize(&p) {
                Ok(f) => f,
                Err(e) => return input_error(e),
            };
            let report = IrreducibleReport {
                irreducible: factors.len() == 1,
                polynomial: p,
                factors,
            };
            if json {
                print_json(&report);
            } else if report.irreducible {
                println!("irreducible");
            } else {
                let parts: Vec<String> = report.factors.iter().map(|f| format!("({f})")).collect();
                println!("reducible: {}", parts.join(" * "));
            }
            ExitCode::from(if report.irreducible { EXIT_PASS } else { EXIT_DOMAIN })
        }
        LatticeCommand::Roots { coeffs, tol } => {
            let profile = match parse_poly(&coeffs).and_then(|p| unit_root_profile(&p, tol).map_err(|e| e.to_string())) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            if json {
                print_json(&profile);
            } else {
                println!("on_circle {}", profile.on_circle);
                println!("real_off_circle {}", profile.real_off_circle);
                println!("other {}", profile.other);
                println!("degree_of_unit {}", profile.degree_of_unit);
                for (re, im) in &profile.roots {
                    println!("root {re:.12} {im:+.12}i  |z| = {:.12}", re.hypot(*im));
                }
            }
            ExitCode::from(EXIT_PASS)
        }
        LatticeCommand::Conjugacy { matrix, tol } => {
            let a = match parse_matrix(&matrix) {
                Ok(a) => a,
                Err(e) => return input_error(e),
            };
            let sol = match solve_conjugacy(&a) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_DOMAIN);
                }
            };
            let verified = verify_conjugacy(&a, &sol.a0, sol.t0, &sol.c, tol).unwrap_or(false);
            let report = ConjugacyReport {
                t0: sol.t0,
                a0: rows(&sol.a0),
                conjugator: rows(&sol.c),
                translation_parts: sol.translation_parts().unwrap_or_default(),
                verified,
                tol,
            };
            if json {
                print_json(&report);
            } else {
                println!("t0 {}", report.t0);
                println!("A0 {:?}", report.a0);
                println!("C {:?}", report.conjugator);
                println!("verified {} (tol {})", report.verified, report.tol);
            }
            ExitCode::from(if verified { EXIT_PASS } else { EXIT_DOMAIN })
        }
        LatticeCommand::Probe { vectors, tol, max_iter } => {
            let parsed: Result<Vec<Vec<f64>>, String> = vectors
                .iter()
                .map(|v| {
                    v.split(',')
                        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("not a number: {x:?}")))
                        .collect()
                })
                .collect();
            let parsed = match parsed {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            if parsed.iter().any(|v| v.len() != parsed[0].len()) {
                return input_error("vectors must have the same length");
            }
            let outcome = discreteness_probe(&parsed, tol, max_iter);
            if json {
                print_json(&outcome);
            } else {
                match &outcome {
                    ProbeOutcome::Discrete { rank } => println!("discrete rank {rank}"),
                    ProbeOutcome::AccumulationDetected { norm, iterations } => {
                        println!("accumulation_detected norm {norm:e} after {iterations} steps")
                    }
                    ProbeOutcome::Inconclusive { reason } => println!("inconclusive: {reason}"),
                }
            }
            ExitCode::from(match outcome {
                ProbeOutcome::Discrete { .. } => EXIT_PASS,
                ProbeOutcome::AccumulationDetected { .. } => EXIT_DOMAIN,
                ProbeOutcome::Inconclusive { .. } => EXIT_AMBIGUOUS,
            })
        }
    }
}
