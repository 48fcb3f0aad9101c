//! Lanczos iteration for the lowest eigenpair of a symmetric operator.
//!
//! Supports deflation against previously converged vectors and explicit
//! restarts from the current Ritz vector when the Krylov basis is full.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::dot;

/// Memory budget for stored Krylov vectors.
const KRYLOV_BYTES: usize = 512 * 1024 * 1024;
/// Iterations between Ritz checks.
const CHECK_INTERVAL: usize = 4;

#[derive(Debug, Clone, Copy)]
pub(crate) struct LanczosParams {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub reorthogonalize: bool,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct LanczosOutcome {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    /// Lowest Ritz value at every check, in iteration order.
    pub ritz_history: Vec<f64>,
}

/// Lowest eigenpair of `apply` on the orthogonal complement of `locked`.
///
/// Returns `Ok(None)` when `locked` already spans the whole space.
pub(crate) fn lowest_pair<F>(
    apply: F,
    dim: usize,
    locked: &[Vec<f64>],
    params: &LanczosParams,
) -> Result<Option<LanczosOutcome>>
where
    F: Fn(&[f64], &mut [f64]),
{
    if locked.len() >= dim {
        return Ok(None);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    project_out(&mut start, locked);
    project_out(&mut start, locked);
    if normalize(&mut start) < 1e-10 {
        return Ok(None);
    }

    let max_basis = (KRYLOV_BYTES / (8 * dim.max(1)))
        .clamp(24, 400)
        .min(dim - locked.len())
        .max(1);

    let mut total = 0usize;
    let mut history = Vec::new();
    let mut best_residual = f64::INFINITY;
    let mut hv = vec![0.0; dim];

    loop {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();

        loop {
            let j = basis.len() - 1;
            let mut w = vec![0.0; dim];
            apply(&basis[j], &mut w);
            total += 1;

            let alpha = dot(&w, &basis[j]);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            if params.reorthogonalize {
                // Two passes of classical Gram-Schmidt.
                for _ in 0..2 {
                    project_out(&mut w, &basis);
                    project_out(&mut w, locked);
                }
            } else {
                project_out(&mut w, locked);
            }
            alphas.push(alpha);
            let beta = dot(&w, &w).sqrt();

            let scale = alphas.iter().map(|a| a.abs()).fold(1.0, f64::max);
            let invariant = beta <= 1e-13 * scale;
            let full = basis.len() >= max_basis;
            let exhausted = total >= params.max_iterations;
            let due = basis.len() % CHECK_INTERVAL == 0;

            if due || invariant || full || exhausted {
                let (ritz, y) = lowest_ritz(&alphas, &betas);
                history.push(ritz);
                let estimate = beta * y[y.len() - 1].abs();

                if estimate <= 0.5 * params.tolerance || invariant || full || exhausted {
                    let mut x = vec![0.0; dim];
                    for (coef, v) in y.iter().zip(&basis) {
                        axpy(*coef, v, &mut x);
                    }
                    project_out(&mut x, locked);
                    normalize(&mut x);

                    apply(&x, &mut hv);
                    total += 1;
                    let value = dot(&x, &hv);
                    let residual = hv
                        .iter()
                        .zip(&x)
                        .map(|(h, v)| (h - value * v).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    best_residual = best_residual.min(residual);

                    if residual <= params.tolerance {
                        return Ok(Some(LanczosOutcome {
                            value,
                            vector: x,
                            residual,
                            iterations: total,
                            ritz_history: history,
                        }));
                    }
                    if total >= params.max_iterations {
                        return Err(Error::Convergence {
                            iterations: total,
                            residual: best_residual,
                        });
                    }
                    if estimate > 0.5 * params.tolerance || invariant || full {
                        start = x;
                        break;
                    }
                }
            }

            betas.push(beta);
            w.iter_mut().for_each(|a| *a /= beta);
            basis.push(w);
        }
    }
}

/// Lowest eigenpair of the symmetric tridiagonal matrix with diagonal
/// `alphas` and off-diagonal `betas`.
fn lowest_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let n = alphas.len();
    let t = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal matrix");
    (value, eig.eigenvectors.column(idx).iter().copied().collect())
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

fn project_out(w: &mut [f64], vectors: &[Vec<f64>]) {
    for v in vectors {
        let c = dot(w, v);
        axpy(-c, v, w);
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|a| *a /= n);
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_apply(d: Vec<f64>) -> impl Fn(&[f64], &mut [f64]) {
        move |x, y| {
            for i in 0..x.len() {
                y[i] = d[i] * x[i];
            }
        }
    }

    fn params() -> LanczosParams {
        LanczosParams {
            max_iterations: 500,
            tolerance: 1e-10,
            reorthogonalize: true,
            seed: 7,
        }
    }

    #[test]
    fn finds_lowest_of_diagonal() {
        let d: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let out = lowest_pair(diag_apply(d), 50, &[], &params())
            .unwrap()
            .unwrap();
        assert!((out.value - min).abs() < 1e-10);
        assert!(out.residual <= 1e-10);
    }

    #[test]
    fn deflation_walks_up_the_spectrum() {
        let d = vec![3.0, -1.0, 2.0, -1.0, 5.0, 0.5];
        let mut locked = Vec::new();
        let mut found = Vec::new();
        for k in 0..6u64 {
            let p = LanczosParams { seed: k, ..params() };
            let out = lowest_pair(diag_apply(d.clone()), 6, &locked, &p)
                .unwrap()
                .unwrap();
            found.push(out.value);
            locked.push(out.vector);
        }
        let mut sorted = d.clone();
        sorted.sort_by(f64::total_cmp);
        for (a, b) in found.iter().zip(&sorted) {
            assert!((a - b).abs() < 1e-10, "{found:?}");
        }
        assert!(lowest_pair(diag_apply(d), 6, &locked, &params())
            .unwrap()
            .is_none());
    }

    #[test]
    fn reports_non_convergence() {
        let d: Vec<f64> = (0..400).map(|i| i as f64 / 400.0).collect();
        let p = LanczosParams {
            max_iterations: 3,
            ..params()
        };
        assert!(matches!(
            lowest_pair(diag_apply(d), 400, &[], &p),
            Err(Error::Convergence { .. })
        ));
    }
}
