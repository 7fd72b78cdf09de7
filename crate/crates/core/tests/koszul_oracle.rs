//! Levi-Civita coefficients against a direct evaluation of the Koszul formula
//! for left-invariant fields:
//! `2⟨∇_x y, z⟩ = ⟨[x,y],z⟩ − ⟨[y,z],x⟩ + ⟨[z,x],y⟩`.

use lcplab_core::algebra::Matrix;
use lcplab_core::gallery::{gallery, random_corpus, AnyGalleryEntry};
use lcplab_core::metric::{levi_civita, MetricLieAlgebra};
use lcplab_core::{Rational, Scalar, TolerancePolicy};

/// `Γ[i][j]` with `∇_{e_i} e_j = Σ_k Γ[i][j][k] e_k`, solved by Gaussian
/// elimination on the Gram matrix.
fn koszul(g: &MetricLieAlgebra<Rational>) -> Vec<Vec<Vec<Rational>>> {
    let n = g.dim();
    let e = |i: usize| Matrix::<Rational>::identity(n).column(i);
    let half = Rational::from_ratio(1, 2);
    let mut out = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // right-hand side b_k = ⟨∇_i e_j, e_k⟩
            let b: Vec<Rational> = (0..n)
                .map(|k| {
                    (g.inner(&g.bracket(&e(i), &e(j)), &e(k)) - g.inner(&g.bracket(&e(j), &e(k)), &e(i))
                        + g.inner(&g.bracket(&e(k), &e(i)), &e(j)))
                        * half.clone()
                })
                .collect();
            out[i][j] = gauss(g.gram(), b);
        }
    }
    out
}

fn gauss(a: &Matrix<Rational>, b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !rows[r][col].is_zero()).expect("Gram matrix is invertible");
        rows.swap(col, p);
        let pivot = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=n {
                    let v = rows[col][c].clone() * f.clone();
                    rows[r][c] = rows[r][c].clone() - v;
                }
            }
        }
    }
    rows.into_iter().map(|r| r[n].clone()).collect()
}

fn agree(g: &MetricLieAlgebra<Rational>, label: &str) {
    let conn = levi_civita(g, &TolerancePolicy::default()).unwrap();
    let oracle = koszul(g);
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            assert_eq!(conn.on_basis(i, j), &oracle[i][j][..], "{label}: nabla_{i} e_{j}");
        }
    }
}

#[test]
fn random_corpus_matches_koszul() {
    for (idx, g) in random_corpus(0x6b05, 120, 6).iter().enumerate() {
        agree(g, &format!("algebra {idx}"));
    }
}

#[test]
fn exact_gallery_matches_koszul() {
    for entry in gallery() {
        if let AnyGalleryEntry::Exact(e) = entry {
            agree(&e.algebra, &e.name);
        }
    }
}
