//! Constructors for the worked examples, with their expected verdicts.

mod builders;
mod random;

pub use builders::{almost_abelian, direct_sum, semidirect};
pub use random::{random_corpus, random_gram, random_metric_lie_algebra};

use serde::{Deserialize, Serialize};

use crate::algebra::{unit_vector, Matrix, Rational, Scalar, Subspace};
use crate::lattice::{companion, solve_conjugacy, IntegerMatrix, LatticeData, PolynomialZ};
use crate::lcp::LcpData;
use crate::metric::MetricLieAlgebra;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GalleryError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("representation is not a homomorphism on the pair ({a}, {b})")]
    NotHomomorphism { a: String, b: String },
    #[error("sl({d}) example is capped at d <= 3; pass allow_large to build it anyway")]
    TooLarge { d: usize },
}

/// Regression targets for an entry. `None` means "not pinned".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedVerdict {
    pub decomposable: bool,
    pub holonomy_dim: Option<usize>,
    /// In pipeline order: flat factor first, then by decreasing dimension.
    pub factor_dims: Option<Vec<usize>>,
    pub flat_dim: Option<usize>,
    pub principal_dim: Option<usize>,
    pub q: usize,
}

#[derive(Clone, Debug)]
pub struct GalleryEntry<S: Scalar> {
    pub name: String,
    pub description: String,
    pub algebra: MetricLieAlgebra<S>,
    pub lcp: Option<LcpData<S>>,
    pub lattice: Option<LatticeData>,
    pub expected: ExpectedVerdict,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum AnyGalleryEntry {
    Exact(GalleryEntry<Rational>),
    Float(GalleryEntry<f64>),
}

impl AnyGalleryEntry {
    pub fn name(&self) -> &str {
        match self {
            AnyGalleryEntry::Exact(e) => &e.name,
            AnyGalleryEntry::Float(e) => &e.name,
        }
    }

    pub fn description(&self) -> &str {
        match self {
            AnyGalleryEntry::Exact(e) => &e.description,
            AnyGalleryEntry::Float(e) => &e.description,
        }
    }

    pub fn expected(&self) -> &ExpectedVerdict {
        match self {
            AnyGalleryEntry::Exact(e) => &e.expected,
            AnyGalleryEntry::Float(e) => &e.expected,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyGalleryEntry::Exact(e) => e.algebra.dim(),
            AnyGalleryEntry::Float(e) => e.algebra.dim(),
        }
    }
}

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn golden_lattice() -> LatticeData {
    let a = IntegerMatrix::from_i64_rows(&[&[1, 1], &[1, 2]]).expect("square");
    let sol = solve_conjugacy(&a).expect("hyperbolic matrix");
    LatticeData {
        translation_parts: sol.translation_parts().expect("invertible"),
        t0: Some(sol.t0),
        conjugator: Some(sol.c),
        integer_matrix: a,
    }
}

fn sol3() -> MetricLieAlgebra<Rational> {
    almost_abelian(&Matrix::diagonal(&[q(1), q(-1)]), names(&["X", "Y", "T"])).expect("valid")
}

/// `ℝ² ⋊ ℝ` with `[T,X] = X`, `[T,Y] = −Y`, orthonormal; flat ideal `X`,
/// Lee form `T♭`; lattice from `A = [[1,1],[1,2]]`.
pub fn fundamental_example() -> GalleryEntry<Rational> {
    let algebra = sol3();
    let lcp = LcpData::new(Subspace::coordinate(3, &[0]), vec![q(0), q(0), q(1)]).with_complement(Subspace::coordinate(3, &[1, 2]));
    GalleryEntry {
        name: "fundamental".into(),
        description: "solvable R^2 x| R with [T,X]=X, [T,Y]=-Y; flat ideal X, Lee form dT".into(),
        algebra,
        lcp: Some(lcp),
        lattice: Some(golden_lattice()),
        expected: ExpectedVerdict {
            decomposable: false,
            holonomy_dim: Some(3),
            factor_dims: Some(vec![3]),
            flat_dim: Some(0),
            principal_dim: Some(3),
            q: 1,
        },
        notes: Vec::new(),
    }
}

/// The fundamental algebra times a flat line `S`.
pub fn product_example() -> GalleryEntry<Rational> {
    let line = MetricLieAlgebra::with_names(names(&["S"]), Matrix::identity(1));
    let algebra = direct_sum(&sol3(), &line);
    let lcp = LcpData::new(Subspace::coordinate(4, &[0]), vec![q(0), q(0), q(1), q(0)])
        .with_complement(Subspace::coordinate(4, &[1, 2, 3]));
    let mut lattice = golden_lattice();
    // generators (0,0,t0,1) and (0,0,0,√2) seen along the flat factor
    lattice.translation_parts = vec![vec![1.0], vec![2f64.sqrt()]];
    GalleryEntry {
        name: "product".into(),
        description: "fundamental algebra times a flat line S".into(),
        algebra,
        lcp: Some(lcp),
        lattice: Some(lattice),
        expected: ExpectedVerdict {
            decomposable: true,
            holonomy_dim: Some(3),
            factor_dims: Some(vec![1, 3]),
            flat_dim: Some(1),
            principal_dim: Some(3),
            q: 1,
        },
        notes: vec![
            "weakly reducible: the lattice restricted to the curved factor is the lattice of the fundamental example".into(),
            "translation parts along the flat factor are {1, sqrt 2}, which generate a dense subgroup of the line".into(),
        ],
    }
}

/// Real roots `λ > 1 > λ⁻¹` of `X² − sX + 1`.
fn reciprocal_root(s: f64) -> f64 {
    (s + (s * s - 4.0).sqrt()) / 2.0
}

/// `ℝ⁴ ⋊_{A₀} ℝ` with `A₀ = diag(ln λ, −ln λ) ⊕ rotation(μ)`, where `λ` and
/// `e^{±iμ}` are the roots of `X² − ((3+√5)/2)X + 1` and `X² − ((3−√5)/2)X + 1`.
pub fn strongly_irreducible_example() -> GalleryEntry<f64> {
    let sqrt5 = 5f64.sqrt();
    let lambda = reciprocal_root((3.0 + sqrt5) / 2.0);
    let mu = ((3.0 - sqrt5) / 4.0).acos();
    let l = lambda.ln();
    let a0 = Matrix::from_rows(&[
        vec![l, 0.0, 0.0, 0.0],
        vec![0.0, -l, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, -mu],
        vec![0.0, 0.0, mu, 0.0],
    ])
    .expect("square");
    let algebra = almost_abelian(&a0, names(&["x1", "x2", "x3", "x4", "t"])).expect("valid");
    let mut theta = vec![0.0; 5];
    theta[4] = l;
    let lcp = LcpData::new(Subspace::coordinate(5, &[0]), theta).with_complement(Subspace::coordinate(5, &[1, 2, 3, 4]));
    // the product of the two quadratics
    let p = PolynomialZ::from_i64(&[1, -3, 3, -3, 1]).expect("nonzero");
    let a = companion(&p).expect("monic");
    let sol = solve_conjugacy(&a).expect("positive and unit-circle spectrum");
    let lattice = LatticeData {
        translation_parts: sol.translation_parts().expect("invertible"),
        t0: Some(sol.t0),
        conjugator: Some(sol.c),
        integer_matrix: a,
    };
    GalleryEntry {
        name: "strongly-irreducible".into(),
        description: "almost abelian R^4 x| R with hyperbolic and elliptic blocks; float mode".into(),
        algebra,
        lcp: Some(lcp),
        lattice: Some(lattice),
        expected: ExpectedVerdict {
            decomposable: true,
            holonomy_dim: Some(3),
            factor_dims: Some(vec![2, 3]),
            flat_dim: Some(2),
            principal_dim: Some(3),
            q: 1,
        },
        notes: vec![
            "strongly irreducible: the homothety ratio is an algebraic unit of degree 4, while 3-dimensional LCP manifolds only admit units of degree at most 2".into(),
            format!("lambda = {lambda:.12}, mu = {mu:.12}"),
            "Lee form is ln(lambda) dt, the Lee form of the Weyl structure h = exp(2 ln(lambda) t) g".into(),
        ],
    }
}

/// `(ℝ^{n+1} ⊗ ℝ²) ⋊ (sl(d) ⊕ ℝb)` with `n = d²`, flat ideal `e_{n+1} ⊗ v₁`
/// and Lee form `b♭`. `sl(d)` acts on `ℝ^{d×d}` by `N ↦ −NM` and trivially
/// on the last coordinate; `b` acts by `Id ⊗ diag(1, −1)`.
pub fn sl_example(d: usize, allow_large: bool) -> Result<GalleryEntry<Rational>, GalleryError> {
    if d < 2 {
        return Err(GalleryError::Shape("d must be at least 2".into()));
    }
    if d > 3 && !allow_large {
        return Err(GalleryError::TooLarge { d });
    }
    let n = d * d;
    let u_dim = 2 * (n + 1);

    // sl(d) basis: E_ij (i ≠ j), then H_k = E_kk − E_{k+1,k+1}
    let mut sl: Vec<(String, Matrix<Rational>)> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut m = Matrix::zeros(d, d);
                m[(i, j)] = q(1);
                sl.push((format!("E{}{}", i + 1, j + 1), m));
            }
        }
    }
    for k in 0..d - 1 {
        let mut m = Matrix::zeros(d, d);
        m[(k, k)] = q(1);
        m[(k + 1, k + 1)] = q(-1);
        sl.push((format!("H{}", k + 1), m));
    }
    let sd = sl.len();
    let hd = sd + 1;
    let frob = |a: &Matrix<Rational>, b: &Matrix<Rational>| a.transpose().mul(b).trace();
    let coords = |m: &Matrix<Rational>| -> Vec<Rational> {
        // off-diagonal entries are coordinates directly; the diagonal is a
        // telescoping combination of the H_k
        let mut v = Vec::with_capacity(hd);
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    v.push(m[(i, j)].clone());
                }
            }
        }
        let mut acc = q(0);
        for k in 0..d - 1 {
            acc += m[(k, k)].clone();
            v.push(acc.clone());
        }
        v.push(q(0));
        v
    };

    let mut h_gram = Matrix::zeros(hd, hd);
    for a in 0..sd {
        for b in 0..sd {
            h_gram[(a, b)] = frob(&sl[a].1, &sl[b].1);
        }
    }
    h_gram[(sd, sd)] = q(1);
    let mut h_names: Vec<String> = sl.iter().map(|(s, _)| s.clone()).collect();
    h_names.push("b".into());
    let mut h = MetricLieAlgebra::with_names(h_names, h_gram.clone());
    for a in 0..sd {
        for b in a + 1..sd {
            let c = sl[a].1.commutator(&sl[b].1);
            h.set_bracket(a, b, &coords(&c));
        }
    }

    // ρ(M) on ℝ^{d×d} (index r*d + c) extended by 0, tensored with Id₂
    let id2 = Matrix::<Rational>::identity(2);
    let mut rep = Vec::with_capacity(hd);
    for (_, m) in &sl {
        let mut rho = Matrix::zeros(n + 1, n + 1);
        for r in 0..d {
            for c in 0..d {
                let mut e = Matrix::zeros(d, d);
                e[(r, c)] = q(1);
                let image = e.mul(m).scale(&q(-1));
                for rr in 0..d {
                    for cc in 0..d {
                        rho[(rr * d + cc, r * d + c)] = image[(rr, cc)].clone();
                    }
                }
            }
        }
        rep.push(rho.kron(&id2));
    }
    rep.push(Matrix::identity(n + 1).kron(&Matrix::diagonal(&[q(1), q(-1)])));

    let gram = Matrix::identity(u_dim).block_diag(&h_gram);
    let g = semidirect(&rep, &h, u_dim, gram)?;
    let mut basis_names: Vec<String> = Vec::with_capacity(u_dim + hd);
    for i in 0..=n {
        for j in 0..2 {
            basis_names.push(format!("e{}v{}", i + 1, j + 1));
        }
    }
    basis_names.extend(g.basis_names()[u_dim..].iter().cloned());
    let algebra = g.with_basis_names(basis_names);

    let total = u_dim + hd;
    let flat = Subspace::from_basis_unchecked(total, vec![unit_vector(total, 2 * n)]);
    let mut theta = vec![q(0); total];
    theta[total - 1] = q(1);
    let rest: Vec<usize> = (0..total).filter(|&i| i != 2 * n).collect();
    let lcp = LcpData::new(flat, theta).with_complement(Subspace::coordinate(total, &rest));
    let mut notes = vec!["inner product on sl(d) is the Frobenius form tr(M^T N)".into()];
    if d > 3 {
        notes.push(format!("d = {d} exceeds the desk-scale cap; holonomy lives in so({total})"));
    }
    // only d = 2 has been computed; larger d pins just the verdict
    let pinned = d == 2;
    Ok(GalleryEntry {
        name: format!("sl{d}"),
        description: format!("(R^{} (x) R^2) x| (sl({d}) + R b); dimension {total}", n + 1),
        algebra,
        lcp: Some(lcp),
        lattice: None,
        expected: ExpectedVerdict {
            decomposable: false,
            holonomy_dim: pinned.then_some(91),
            factor_dims: pinned.then(|| vec![total]),
            flat_dim: pinned.then_some(0),
            principal_dim: pinned.then_some(total),
            q: 1,
        },
        notes,
    })
}

/// Every built-in entry, smallest first.
pub fn gallery() -> Vec<AnyGalleryEntry> {
    vec![
        AnyGalleryEntry::Exact(fundamental_example()),
        AnyGalleryEntry::Exact(product_example()),
        AnyGalleryEntry::Float(strongly_irreducible_example()),
        AnyGalleryEntry::Exact(sl_example(2, false).expect("d = 2 is in range")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TolerancePolicy;
    use crate::lcp::{classify_structure, validate_lcp, DecomposeOptions, Verdict};
    use crate::metric::{holonomy_algebra, is_unimodular, validate_algebra};

    fn check<S: Scalar>(e: &GalleryEntry<S>) {
        let tol = TolerancePolicy::default();
        assert!(validate_algebra(&e.algebra, &tol).is_valid(), "{}", e.name);
        assert!(is_unimodular(&e.algebra, &tol), "{}", e.name);
        let data = e.lcp.as_ref().unwrap();
        let report = validate_lcp(&e.algebra, data, &tol).unwrap();
        assert!(report.overall, "{}: {:?}", e.name, report.failed());
        let c = classify_structure(&e.algebra, data, &tol, DecomposeOptions::default()).unwrap();
        let ex = &e.expected;
        assert_eq!(c.verdict == Verdict::Decomposable, ex.decomposable, "{}", e.name);
        if let Some(h) = ex.holonomy_dim {
            assert_eq!(holonomy_algebra(&e.algebra, &tol).unwrap().dim(), h, "{}", e.name);
        }
        if let Some(dims) = &ex.factor_dims {
            assert_eq!(&c.report.splitting.factor_dims(), dims, "{}", e.name);
        }
        if let Some(f) = ex.flat_dim {
            assert_eq!(c.report.splitting.flat_dim(), f, "{}", e.name);
        }
        if let Some(p) = ex.principal_dim {
            assert_eq!(c.principal.unwrap().dim, p, "{}", e.name);
        }
        assert_eq!(data.q(), ex.q);
    }

    #[test]
    fn fundamental_entry_matches_expectations() {
        check(&fundamental_example());
    }

    #[test]
    fn product_entry_matches_expectations() {
        check(&product_example());
    }

    #[test]
    fn strongly_irreducible_entry_matches_expectations() {
        let e = strongly_irreducible_example();
        check(&e);
        let lambda = reciprocal_root((3.0 + 5f64.sqrt()) / 2.0);
        // λ + λ⁻¹ = (3+√5)/2
        assert!((lambda + 1.0 / lambda - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((lambda - 2.1537).abs() < 1e-4);
    }

    #[test]
    fn sl2_entry_is_indecomposable() {
        let e = sl_example(2, false).unwrap();
        assert_eq!(e.algebra.dim(), 14);
        check(&e);
        let tol = TolerancePolicy::default();
        let b = e.algebra.ad(13);
        let mut dims: Vec<usize> = crate::algebra::symmetric_eigensplit(&b, &tol)
            .map(|s| s.iter().map(|c| c.space.dim()).collect())
            .unwrap_or_default();
        dims.sort();
        assert_eq!(dims, vec![4, 5, 5]);
    }

    #[test]
    fn large_sl_needs_flag() {
        assert_eq!(sl_example(4, false).unwrap_err(), GalleryError::TooLarge { d: 4 });
        assert!(sl_example(1, true).is_err());
    }
}
