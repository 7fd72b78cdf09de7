//! Python bindings. Documents and reports cross the boundary as JSON text in
//! the same format the command-line tool reads and writes.

use num_bigint::BigInt;
use pyo3::exceptions::{PyArithmeticError, PyKeyError, PyValueError};
use pyo3::prelude::*;

use lcplab_core::analysis::{self, AnalysisError, AnalysisOptions};
use lcplab_core::format::{parse_document, AnyDocument};
use lcplab_core::gallery::gallery;
use lcplab_core::lattice::{self, IntegerMatrix, PolynomialZ, ProbeOutcome, DEFAULT_PROBE_TOL};
use lcplab_core::metric::DEFAULT_SEED;
use lcplab_core::TolerancePolicy;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn options(tol: Option<f64>, seed: Option<u64>) -> PyResult<AnalysisOptions> {
    let tol = match tol {
        Some(t) => TolerancePolicy::with_rank_tol(t).map_err(value_error)?,
        None => TolerancePolicy::default(),
    };
    Ok(AnalysisOptions {
        tol,
        seed: seed.unwrap_or(DEFAULT_SEED),
    })
}

fn polynomial(coeffs: Vec<BigInt>) -> PyResult<PolynomialZ> {
    PolynomialZ::new(coeffs).map_err(value_error)
}

/// A parsed algebra file (exact or float).
#[pyclass(name = "Document", module = "lcplab", frozen)]
struct PyDocument {
    inner: AnyDocument,
}

#[pymethods]
impl PyDocument {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_document(text).map(|inner| PyDocument { inner }).map_err(value_error)
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.inner.name().map(str::to_string)
    }

    #[getter]
    fn mode(&self) -> String {
        self.inner.mode().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.to_file().dim
    }

    fn to_json(&self) -> String {
        to_json(&self.inner.to_file())
    }

    /// Full analysis report as JSON. Raises `ValueError` on input problems and
    /// `ArithmeticError` when the result depends on the tolerance or seed.
    #[pyo3(signature = (tol=None, seed=None))]
    fn analyze(&self, tol: Option<f64>, seed: Option<u64>) -> PyResult<String> {
        run_analysis(&self.inner, tol, seed)
    }

    fn __repr__(&self) -> String {
        format!("Document(name={:?}, mode={}, dim={})", self.inner.name(), self.inner.mode(), self.dim())
    }
}

fn run_analysis(doc: &AnyDocument, tol: Option<f64>, seed: Option<u64>) -> PyResult<String> {
    match analysis::analyze(doc, &options(tol, seed)?) {
        Ok(r) => Ok(to_json(&r)),
        Err(e @ AnalysisError::Input(_)) => Err(value_error(e)),
        Err(e) => Err(PyArithmeticError::new_err(e.to_string())),
    }
}

/// Analyze a JSON document and return the report as JSON.
#[pyfunction]
#[pyo3(signature = (text, tol=None, seed=None))]
fn analyze(text: &str, tol: Option<f64>, seed: Option<u64>) -> PyResult<String> {
    run_analysis(&parse_document(text).map_err(value_error)?, tol, seed)
}

#[pyfunction]
fn example_names() -> Vec<String> {
    gallery().iter().map(|e| e.name().to_string()).collect()
}

/// A built-in example as a `Document`.
#[pyfunction]
fn example(name: &str) -> PyResult<PyDocument> {
    gallery()
        .into_iter()
        .find(|e| e.name() == name)
        .map(|e| PyDocument { inner: e.into() })
        .ok_or_else(|| PyKeyError::new_err(name.to_string()))
}

/// Characteristic polynomial, constant term first.
#[pyfunction]
fn char_poly(rows: Vec<Vec<BigInt>>) -> PyResult<Vec<BigInt>> {
    let m = IntegerMatrix::try_from(rows).map_err(value_error)?;
    Ok(lattice::char_poly(&m).coeffs().to_vec())
}

#[pyfunction]
fn is_irreducible(coeffs: Vec<BigInt>) -> PyResult<bool> {
    lattice::is_irreducible_over_z(&polynomial(coeffs)?).map_err(value_error)
}

/// `(on_circle, real_off_circle, other, degree_of_unit)` for a unit polynomial.
#[pyfunction]
#[pyo3(signature = (coeffs, tol=1e-9))]
fn unit_root_profile(coeffs: Vec<BigInt>, tol: f64) -> PyResult<(usize, usize, usize, usize)> {
    let p = lattice::unit_root_profile(&polynomial(coeffs)?, tol).map_err(value_error)?;
    Ok((p.on_circle, p.real_off_circle, p.other, p.degree_of_unit))
}

/// Conjugacy data `(t0, a0, c)` with `C⁻¹·A·C = exp(t0·A0)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn solve_conjugacy(rows: Vec<Vec<BigInt>>) -> PyResult<(f64, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let m = IntegerMatrix::try_from(rows).map_err(value_error)?;
    let sol = lattice::solve_conjugacy(&m).map_err(value_error)?;
    Ok((sol.t0, sol.a0.to_rows(), sol.c.to_rows()))
}

/// `"discrete"`, `"accumulation_detected"` or `"inconclusive"`.
#[pyfunction]
#[pyo3(signature = (vectors, tol=DEFAULT_PROBE_TOL, max_iter=10_000))]
fn probe(vectors: Vec<Vec<f64>>, tol: f64, max_iter: usize) -> PyResult<&'static str> {
    if vectors.is_empty() || vectors.iter().any(|v| v.len() != vectors[0].len()) {
        return Err(PyValueError::new_err("vectors must be non-empty and of equal length"));
    }
    Ok(match lattice::discreteness_probe(&vectors, tol, max_iter) {
        ProbeOutcome::Discrete { .. } => "discrete",
        ProbeOutcome::AccumulationDetected { .. } => "accumulation_detected",
        ProbeOutcome::Inconclusive { .. } => "inconclusive",
    })
}

#[pymodule]
fn lcplab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", analysis::VERSION)?;
    m.add_class::<PyDocument>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(example_names, m)?)?;
    m.add_function(wrap_pyfunction!(example, m)?)?;
    m.add_function(wrap_pyfunction!(char_poly, m)?)?;
    m.add_function(wrap_pyfunction!(is_irreducible, m)?)?;
    m.add_function(wrap_pyfunction!(unit_root_profile, m)?)?;
    m.add_function(wrap_pyfunction!(solve_conjugacy, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    Ok(())
}
