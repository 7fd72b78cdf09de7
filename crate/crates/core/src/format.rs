//! The JSON description of an algebra with optional LCP and lattice blocks.
//!
//! Exact scalars are written as `"p/q"` strings; float scalars as JSON
//! numbers. On input both modes also accept strings, and exact mode accepts
//! integer numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Rational, Scalar, ScalarMode, Subspace, TolerancePolicy};
use crate::gallery::{AnyGalleryEntry, ExpectedVerdict, GalleryEntry};
use crate::lattice::{IntegerMatrix, LatticeData};
use crate::lcp::LcpData;
use crate::metric::MetricLieAlgebra;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

/// A scalar as written in the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarValue {
    Number(serde_json::Number),
    Text(String),
}

impl ScalarValue {
    fn parse<S: Scalar>(&self, path: &str) -> Result<S, FormatError> {
        let text = match self {
            ScalarValue::Text(t) => t.clone(),
            ScalarValue::Number(n) => {
                if S::MODE == ScalarMode::Exact && !(n.is_i64() || n.is_u64()) {
                    return Err(invalid(path, format!("exact mode needs \"p/q\" strings, got {n}")));
                }
                n.to_string()
            }
        };
        S::parse_literal(&text).map_err(|e| invalid(path, e.to_string()))
    }

    fn from_scalar<S: Scalar>(v: &S) -> Self {
        match S::MODE {
            ScalarMode::Exact => ScalarValue::Text(v.to_literal()),
            ScalarMode::Float => serde_json::Number::from_f64(v.to_f64())
                .map(ScalarValue::Number)
                .unwrap_or_else(|| ScalarValue::Text(v.to_literal())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    /// `[e_i, e_j] = Σ_k coeffs[k] e_k`.
    pub coeffs: BTreeMap<usize, ScalarValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcpBlock {
    pub flat_ideal: Vec<Vec<ScalarValue>>,
    pub lee_form: Vec<ScalarValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Vec<Vec<ScalarValue>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeBlock {
    pub integer_matrix: IntegerMatrix,
    #[serde(default)]
    pub translation_parts: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub mode: ScalarMode,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    pub metric: Vec<Vec<ScalarValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lcp: Option<LcpBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A parsed file in one scalar mode.
#[derive(Clone, Debug)]
pub struct Document<S: Scalar> {
    pub name: Option<String>,
    pub description: Option<String>,
    pub algebra: MetricLieAlgebra<S>,
    pub lcp: Option<LcpData<S>>,
    pub lattice: Option<LatticeData>,
    pub expected: Option<ExpectedVerdict>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum AnyDocument {
    Exact(Document<Rational>),
    Float(Document<f64>),
}

impl AnyDocument {
    pub fn mode(&self) -> ScalarMode {
        match self {
            AnyDocument::Exact(_) => ScalarMode::Exact,
            AnyDocument::Float(_) => ScalarMode::Float,
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            AnyDocument::Exact(d) => d.name.as_deref(),
            AnyDocument::Float(d) => d.name.as_deref(),
        }
    }

    pub fn to_file(&self) -> AlgebraFile {
        match self {
            AnyDocument::Exact(d) => d.to_file(),
            AnyDocument::Float(d) => d.to_file(),
        }
    }
}

impl<S: Scalar> From<GalleryEntry<S>> for Document<S> {
    fn from(e: GalleryEntry<S>) -> Self {
        Document {
            name: Some(e.name),
            description: Some(e.description),
            algebra: e.algebra,
            lcp: e.lcp,
            lattice: e.lattice,
            expected: Some(e.expected),
            notes: e.notes,
        }
    }
}

impl From<AnyGalleryEntry> for AnyDocument {
    fn from(e: AnyGalleryEntry) -> Self {
        match e {
            AnyGalleryEntry::Exact(e) => AnyDocument::Exact(e.into()),
            AnyGalleryEntry::Float(e) => AnyDocument::Float(e.into()),
        }
    }
}

/// Parse and check a JSON document. Syntax errors carry line and column;
/// semantic errors carry a path such as `brackets[2].coeffs.5`.
pub fn parse_document(text: &str) -> Result<AnyDocument, FormatError> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| FormatError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_document()
}

impl AlgebraFile {
    pub fn into_document(self) -> Result<AnyDocument, FormatError> {
        Ok(match self.mode {
            ScalarMode::Exact => AnyDocument::Exact(self.build()?),
            ScalarMode::Float => AnyDocument::Float(self.build()?),
        })
    }

    fn build<S: Scalar>(self) -> Result<Document<S>, FormatError> {
        let n = self.dim;
        if n == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        if self.basis.len() != n {
            return Err(invalid("basis", format!("expected {n} names, got {}", self.basis.len())));
        }
        if self.metric.len() != n {
            return Err(invalid("metric", format!("expected {n} rows, got {}", self.metric.len())));
        }
        let mut gram = Matrix::zeros(n, n);
        for (r, row) in self.metric.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!("metric[{r}]"), format!("expected {n} entries, got {}", row.len())));
            }
            for (c, v) in row.iter().enumerate() {
                gram[(r, c)] = v.parse(&format!("metric[{r}][{c}]"))?;
            }
        }

        let mut c = vec![S::zero(); n * n * n];
        let mut seen = vec![false; n * n];
        for (b, entry) in self.brackets.iter().enumerate() {
            let path = format!("brackets[{b}]");
            let (i, j) = (entry.i, entry.j);
            if i >= n || j >= n {
                return Err(invalid(path, format!("index out of range for dim {n}")));
            }
            if seen[i * n + j] {
                return Err(invalid(path, format!("bracket [e{i}, e{j}] given twice")));
            }
            seen[i * n + j] = true;
            seen[j * n + i] = true;
            for (&k, v) in &entry.coeffs {
                let cpath = format!("{path}.coeffs.{k}");
                if k >= n {
                    return Err(invalid(cpath, format!("index out of range for dim {n}")));
                }
                let v: S = v.parse(&cpath)?;
                if i == j {
                    if !v.is_zero() {
                        return Err(invalid(cpath, "[e_i, e_i] must vanish"));
                    }
                    continue;
                }
                c[(i * n + j) * n + k] = v.clone();
                c[(j * n + i) * n + k] = -v;
            }
        }
        let algebra = MetricLieAlgebra::from_parts(self.basis, c, gram).map_err(|m| invalid("algebra", m))?;

        let lcp = match self.lcp {
            None => None,
            Some(block) => {
                let vectors = |rows: &[Vec<ScalarValue>], path: &str| -> Result<Vec<Vec<S>>, FormatError> {
                    rows.iter()
                        .enumerate()
                        .map(|(r, row)| parse_vector(row, n, &format!("{path}[{r}]")))
                        .collect()
                };
                let tol = TolerancePolicy::default();
                let u = vectors(&block.flat_ideal, "lcp.flat_ideal")?;
                let u_dim = u.len();
                let flat_ideal = Subspace::from_spanning(n, u, &tol);
                if flat_ideal.dim() != u_dim {
                    return Err(invalid("lcp.flat_ideal", "vectors are linearly dependent"));
                }
                let theta = parse_vector(&block.lee_form, n, "lcp.lee_form")?;
                let mut data = LcpData::new(flat_ideal, theta);
                if let Some(h) = block.complement {
                    data = data.with_complement(Subspace::from_spanning(n, vectors(&h, "lcp.complement")?, &tol));
                }
                Some(data)
            }
        };

        let lattice = match self.lattice {
            None => None,
            Some(block) => {
                let conjugator = match block.conjugator {
                    None => None,
                    Some(rows) => {
                        let m = rows.len();
                        if rows.iter().any(|r| r.len() != m) || m != block.integer_matrix.size() {
                            return Err(invalid("lattice.conjugator", "must be square of the integer matrix size"));
                        }
                        Some(Matrix::from_rows(&rows).map_err(|e| invalid("lattice.conjugator", e.to_string()))?)
                    }
                };
                Some(LatticeData {
                    integer_matrix: block.integer_matrix,
                    t0: block.t0,
                    conjugator,
                    translation_parts: block.translation_parts,
                })
            }
        };

        Ok(Document {
            name: self.name,
            description: self.description,
            algebra,
            lcp,
            lattice,
            expected: self.expected,
            notes: self.notes,
        })
    }
}

fn parse_vector<S: Scalar>(row: &[ScalarValue], n: usize, path: &str) -> Result<Vec<S>, FormatError> {
    if row.len() != n {
        return Err(invalid(path, format!("expected {n} entries, got {}", row.len())));
    }
    row.iter()
        .enumerate()
        .map(|(k, v)| v.parse(&format!("{path}[{k}]")))
        .collect()
}

fn write_vector<S: Scalar>(v: &[S]) -> Vec<ScalarValue> {
    v.iter().map(ScalarValue::from_scalar).collect()
}

impl<S: Scalar> Document<S> {
    pub fn to_file(&self) -> AlgebraFile {
        let g = &self.algebra;
        let n = g.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: BTreeMap<usize, ScalarValue> = g
                    .bracket_basis(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (k, ScalarValue::from_scalar(v)))
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketEntry { i, j, coeffs });
                }
            }
        }
        let metric = (0..n)
            .map(|r| (0..n).map(|c| ScalarValue::from_scalar(&g.gram()[(r, c)])).collect())
            .collect();
        let lcp = self.lcp.as_ref().map(|d| LcpBlock {
            flat_ideal: d.flat_ideal.basis().iter().map(|v| write_vector(v)).collect(),
            lee_form: write_vector(&d.lee_covector),
            complement: d
                .complement
                .as_ref()
                .map(|h| h.basis().iter().map(|v| write_vector(v)).collect()),
        });
        let lattice = self.lattice.as_ref().map(|l| LatticeBlock {
            integer_matrix: l.integer_matrix.clone(),
            translation_parts: l.translation_parts.clone(),
            t0: l.t0,
            conjugator: l
                .conjugator
                .as_ref()
                .map(|c| (0..c.rows()).map(|r| (0..c.cols()).map(|k| c[(r, k)]).collect()).collect()),
        });
        AlgebraFile {
            name: self.name.clone(),
            description: self.description.clone(),
            mode: S::MODE,
            dim: n,
            basis: g.basis_names().to_vec(),
            brackets,
            metric,
            lcp,
            lattice,
            expected: self.expected.clone(),
            notes: self.notes.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{fundamental_example, strongly_irreducible_example};

    #[test]
    fn exact_round_trip_keeps_fractions() {
        let doc: Document<Rational> = fundamental_example().into();
        let text = serde_json::to_string_pretty(&doc.to_file()).unwrap();
        assert!(text.contains("\"1/1\""));
        let AnyDocument::Exact(back) = parse_document(&text).unwrap() else {
            panic!("mode changed");
        };
        assert_eq!(back.algebra, doc.algebra);
        assert_eq!(back.lcp, doc.lcp);
        assert_eq!(serde_json::to_string_pretty(&back.to_file()).unwrap(), text);
    }

    #[test]
    fn float_round_trip_is_bit_exact() {
        let doc: Document<f64> = strongly_irreducible_example().into();
        let text = serde_json::to_string(&doc.to_file()).unwrap();
        let AnyDocument::Float(back) = parse_document(&text).unwrap() else {
            panic!("mode changed");
        };
        assert_eq!(back.algebra, doc.algebra);
        assert_eq!(back.lattice, doc.lattice);
    }

    #[test]
    fn syntax_errors_have_a_location() {
        let err = parse_document("{\n  \"mode\": \"exact\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, FormatError::Json { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn semantic_errors_have_a_path() {
        let text = r#"{"mode":"exact","dim":2,"basis":["a","b"],
            "brackets":[{"i":0,"j":1,"coeffs":{"2":"1"}}],
            "metric":[["1","0"],["0","1"]]}"#;
        let err = parse_document(text).unwrap_err();
        assert_eq!(
            err,
            FormatError::Invalid {
                path: "brackets[0].coeffs.2".into(),
                message: "index out of range for dim 2".into()
            }
        );
    }

    #[test]
    fn exact_mode_rejects_decimals() {
        let text = r#"{"mode":"exact","dim":1,"basis":["a"],"metric":[[0.5]]}"#;
        assert!(matches!(parse_document(text), Err(FormatError::Invalid { .. })));
        let text = r#"{"mode":"exact","dim":1,"basis":["a"],"metric":[[2]]}"#;
        assert!(parse_document(text).is_ok());
    }

    #[test]
    fn brackets_are_antisymmetrized() {
        let text = r#"{"mode":"exact","dim":2,"basis":["a","b"],
            "brackets":[{"i":1,"j":0,"coeffs":{"0":"3/2"}}],
            "metric":[["1","0"],["0","1"]]}"#;
        let AnyDocument::Exact(d) = parse_document(text).unwrap() else {
            panic!()
        };
        assert_eq!(d.algebra.c(0, 1, 0), &Rational::from_ratio(-3, 2));
        let dup = r#"{"mode":"exact","dim":2,"basis":["a","b"],
            "brackets":[{"i":1,"j":0,"coeffs":{}},{"i":0,"j":1,"coeffs":{}}],
            "metric":[["1","0"],["0","1"]]}"#;
        assert!(parse_document(dup).is_err());
    }
}
