//! Dense full-space operators built from Kronecker products.
//!
//! Independent of the packed-sector machinery in [`crate::hilbert`]; used as a
//! brute-force reference for small chains. The single-site basis is ordered
//! `(m = +1, 0, -1)` and site 0 is the leftmost tensor factor.

use nalgebra::DMatrix;

use crate::model::{Boundary, ModelParams};

pub fn spin_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0])
}

pub fn spin_x() -> DMatrix<f64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(3, 3, &[0.0, r, 0.0, r, 0.0, r, 0.0, r, 0.0])
}

/// `i·S_y`, which is real.
pub fn spin_y_times_i() -> DMatrix<f64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(3, 3, &[0.0, r, 0.0, -r, 0.0, r, 0.0, -r, 0.0])
}

/// `op` acting on `site` of an `length`-site chain.
pub fn site_operator(op: &DMatrix<f64>, site: usize, length: usize) -> DMatrix<f64> {
    let left = DMatrix::<f64>::identity(3usize.pow(site as u32), 3usize.pow(site as u32));
    let right_dim = 3usize.pow((length - site - 1) as u32);
    let right = DMatrix::<f64>::identity(right_dim, right_dim);
    left.kronecker(op).kronecker(&right)
}

/// `S_0·S_1` on two sites (9×9).
pub fn two_site_heisenberg() -> DMatrix<f64> {
    let sz = spin_z();
    let sx = spin_x();
    let isy = spin_y_times_i();
    // S_y ⊗ S_y = -(iS_y) ⊗ (iS_y)
    sz.kronecker(&sz) + sx.kronecker(&sx) - isy.kronecker(&isy)
}

/// Full `3^L × 3^L` Hamiltonian matrix.
pub fn hamiltonian(p: &ModelParams) -> DMatrix<f64> {
    let l = p.length;
    let dim = 3usize.pow(l as u32);
    let b = two_site_heisenberg();
    let (s, c) = p.theta.sin_cos();
    let bond = &b * c + (&b * &b) * s;

    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..l - 1 {
        let left = 3usize.pow(i as u32);
        let right = 3usize.pow((l - i - 2) as u32);
        let embedded = DMatrix::<f64>::identity(left, left)
            .kronecker(&bond)
            .kronecker(&DMatrix::<f64>::identity(right, right));
        h += embedded;
    }

    if p.boundary == Boundary::Periodic && l > 2 {
        // Bond (L-1, 0): matrix elements from the two end digits, identity elsewhere.
        let outer = 3usize.pow((l - 1) as u32);
        let middle = 3usize.pow((l - 2) as u32);
        for a in 0..dim {
            let first_a = a / outer;
            let last_a = a % 3;
            let rest = (a % outer) / 3;
            for first_b in 0..3 {
                for last_b in 0..3 {
                    let value = bond[(3 * last_a + first_a, 3 * last_b + first_b)];
                    if value != 0.0 {
                        let b_idx = first_b * outer + rest * 3 + last_b;
                        debug_assert!(rest < middle);
                        h[(a, b_idx)] += value;
                    }
                }
            }
        }
    }
    h * p.j_scale
}
