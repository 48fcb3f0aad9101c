//! Brute-force references for tests: dense full-space ground states and
//! expectation values, and the AKLT valence-bond transfer-matrix contraction.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::dense::{hamiltonian, site_operator, spin_x, spin_y_times_i, spin_z};
use crate::model::ModelParams;

/// Lowest eigenvalue and one lowest eigenvector of the dense Hamiltonian.
pub fn dense_ground_state(p: &ModelParams) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(hamiltonian(p));
    let (idx, &e0) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    (e0, eig.eigenvectors.column(idx).into_owned())
}

/// `<ψ|A|ψ>` for real `ψ`.
pub fn expectation(psi: &DVector<f64>, op: &DMatrix<f64>) -> f64 {
    psi.dot(&(op * psi))
}

/// `<S_zm S_zn>`, `<S_xm S_xn>`, `<S_ym S_yn>` of a real full-space vector.
pub fn dense_correlators(psi: &DVector<f64>, length: usize) -> [DMatrix<f64>; 3] {
    let z: Vec<_> = (0..length).map(|i| site_operator(&spin_z(), i, length)).collect();
    let x: Vec<_> = (0..length).map(|i| site_operator(&spin_x(), i, length)).collect();
    let iy: Vec<_> = (0..length)
        .map(|i| site_operator(&spin_y_times_i(), i, length))
        .collect();
    let zz = DMatrix::from_fn(length, length, |m, n| expectation(psi, &(&z[m] * &z[n])));
    let xx = DMatrix::from_fn(length, length, |m, n| expectation(psi, &(&x[m] * &x[n])));
    // S_y S_y = −(iS_y)(iS_y)
    let yy = DMatrix::from_fn(length, length, |m, n| -expectation(psi, &(&iy[m] * &iy[n])));
    [zz, xx, yy]
}

/// `<ψ|A|ψ>` for complex `ψ` and real `A`.
pub fn complex_expectation(psi: &[Complex64], op: &DMatrix<f64>) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for r in 0..op.nrows() {
        for c in 0..op.ncols() {
            let a = op[(r, c)];
            if a != 0.0 {
                total += psi[r].conj() * a * psi[c];
            }
        }
    }
    total
}

/// String correlator of the AKLT valence-bond state, averaged over the four
/// open-chain edge states.
pub fn aklt_string_order(length: usize, m: usize, n: usize) -> f64 {
    assert!(m < n && n < length);
    let a = 2f64.sqrt() / 3f64.sqrt();
    let b = 1.0 / 3f64.sqrt();
    // A⁺ = √(2/3)σ⁺, A⁰ = −√(1/3)σ_z, A⁻ = −√(2/3)σ⁻
    let mats = [
        (1.0, DMatrix::from_row_slice(2, 2, &[0.0, a, 0.0, 0.0])),
        (0.0, DMatrix::from_row_slice(2, 2, &[-b, 0.0, 0.0, b])),
        (-1.0, DMatrix::from_row_slice(2, 2, &[0.0, 0.0, -a, 0.0])),
    ];
    let transfer = |weight: &dyn Fn(f64) -> f64| {
        mats.iter().fold(DMatrix::<f64>::zeros(4, 4), |acc, (mz, mat)| {
            acc + mat.kronecker(mat) * weight(*mz)
        })
    };
    let e = transfer(&|_| 1.0);
    let ez = transfer(&|mz| mz);
    let ep = transfer(&|mz| if mz == 0.0 { 1.0 } else { -1.0 });

    let identity = DVector::from_row_slice(&[1.0, 0.0, 0.0, 1.0]);
    let contract = |ops: &[&DMatrix<f64>]| {
        let mut v = identity.transpose();
        for op in ops {
            v = v * *op;
        }
        (v * &identity)[(0, 0)]
    };
    let mut with = Vec::with_capacity(length);
    let mut without = Vec::with_capacity(length);
    for site in 0..length {
        let op = if site == m || site == n {
            &ez
        } else if site > m && site < n {
            &ep
        } else {
            &e
        };
        with.push(op);
        without.push(&e);
    }
    contract(&with) / contract(&without)
}
