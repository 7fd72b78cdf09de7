use serde::Serialize;

pub const DEFAULT_PROBE_TOL: f64 = 1e-6;
const DEPENDENT: f64 = 1e-12;

/// Result of the discreteness probe. Accumulation is numerical evidence of a
/// non-discrete subgroup, not a proof.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ProbeOutcome {
    Discrete { rank: usize },
    AccumulationDetected { norm: f64, iterations: usize },
    Inconclusive { reason: String },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Generalized Euclid on the generators: repeatedly shorten a vector by an
/// integer multiple of a shorter one. A nonzero vector shorter than
/// `tol` (relative to the longest generator) signals accumulation; a stable
/// set whose size equals its real rank is reported discrete.
pub fn discreteness_probe(vectors: &[Vec<f64>], tol: f64, max_iter: usize) -> ProbeOutcome {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return ProbeOutcome::Discrete { rank: 0 };
    };
    if vectors.iter().any(|v| v.len() != dim) {
        return ProbeOutcome::Inconclusive {
            reason: "generators have different lengths".into(),
        };
    }
    let scale = vectors.iter().map(|v| dot(v, v).sqrt()).fold(0.0, f64::max);
    if scale == 0.0 {
        return ProbeOutcome::Discrete { rank: 0 };
    }
    let mut set: Vec<Vec<f64>> = vectors.to_vec();
    for iteration in 1..=max_iter {
        set.retain(|v| dot(v, v).sqrt() > DEPENDENT * scale);
        if let Some(v) = set.iter().find(|v| dot(v, v).sqrt() < tol * scale) {
            return ProbeOutcome::AccumulationDetected {
                norm: dot(v, v).sqrt(),
                iterations: iteration,
            };
        }
        let mut changed = false;
        for i in 0..set.len() {
            for j in 0..set.len() {
                if i == j {
                    continue;
                }
                let ni = dot(&set[i], &set[i]);
                let nj = dot(&set[j], &set[j]);
                if ni == 0.0 || nj < ni {
                    continue;
                }
                let m = (dot(&set[j], &set[i]) / ni).round();
                if m == 0.0 {
                    continue;
                }
                let reduced: Vec<f64> = set[j].iter().zip(&set[i]).map(|(a, b)| a - m * b).collect();
                if dot(&reduced, &reduced) < nj * (1.0 - 1e-12) {
                    set[j] = reduced;
                    changed = true;
                }
            }
        }
        if !changed {
            let rank = real_rank(&set);
            return if rank == set.len() {
                ProbeOutcome::Discrete { rank }
            } else {
                ProbeOutcome::Inconclusive {
                    reason: format!("{} reduced generators span only rank {rank}", set.len()),
                }
            };
        }
    }
    ProbeOutcome::Inconclusive {
        reason: format!("no stabilization after {max_iter} iterations"),
    }
}

fn real_rank(set: &[Vec<f64>]) -> usize {
    if set.is_empty() {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(set.len(), set[0].len(), |r, c| set[r][c]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * max).count()
}
