//! Sector Lanczos results against dense full-space diagonalization.

use std::f64::consts::PI;

use faraday::oracle::{complex_expectation, dense_correlators, dense_ground_state};
use faraday::dense::{site_operator, spin_x, spin_y_times_i, spin_z};
use faraday::{
    correlations_with_transverse, dense_spectrum, ground_state_global, random_product_state,
    Boundary, ModelParams, SolverOptions,
};

fn thetas() -> Vec<f64> {
    (0..8).map(|i| -PI + 2.0 * PI * (i as f64 + 0.37) / 8.0).collect()
}

#[test]
fn global_ground_energy_matches_dense_minimum() {
    let opts = SolverOptions::default();
    for l in 2..=5 {
        for &theta in &thetas() {
            let p = ModelParams::new(theta, l).unwrap();
            let dense = dense_spectrum(&p).unwrap();
            let g = ground_state_global(&p, &opts).unwrap();
            assert!(
                (g.energy - dense[0]).abs() < 1e-9,
                "L={l} theta={theta}: {} vs {}",
                g.energy,
                dense[0]
            );
            let window = faraday::degeneracy_window(dense[0]);
            let expected = dense.iter().filter(|&&e| e < dense[0] + window).count();
            assert_eq!(g.degeneracy, expected, "L={l} theta={theta}");
        }
    }
}

#[test]
fn periodic_chain_matches_dense() {
    let opts = SolverOptions::default();
    for &theta in &[0.0, 0.3 * PI, -0.5 * PI] {
        let p = ModelParams::with_options(theta, 1.0, 5, Boundary::Periodic).unwrap();
        let dense = dense_spectrum(&p).unwrap();
        let g = ground_state_global(&p, &opts).unwrap();
        assert!((g.energy - dense[0]).abs() < 1e-9);
    }
}

#[test]
fn heisenberg_six_site_correlators_match_dense() {
    let p = ModelParams::new(0.0, 6).unwrap();
    let g = ground_state_global(&p, &SolverOptions::default()).unwrap();
    assert_eq!(g.degeneracy, 1);
    let (e0, psi) = dense_ground_state(&p);
    assert!((g.energy - e0).abs() < 1e-9);

    let c = correlations_with_transverse(&g.state).unwrap();
    let [zz, xx, yy] = dense_correlators(&psi, 6);
    let t = c.transverse.as_ref().unwrap();
    for m in 0..6 {
        for n in 0..6 {
            assert!((c.zz[(m, n)] - zz[(m, n)]).abs() < 1e-8);
            assert!((t.xx[(m, n)] - xx[(m, n)]).abs() < 1e-8);
            assert!((t.yy[(m, n)] - yy[(m, n)]).abs() < 1e-8);
        }
    }
    assert!((c.zz_connected[(0, 1)] + 0.5630854928607584).abs() < 1e-8);
    assert!((c.zz[(0, 0)] - 2.0 / 3.0).abs() < 1e-8);
}

#[test]
fn product_state_moments_match_dense_expectations() {
    let l = 4;
    for seed in [1u64, 2, 3] {
        let state = random_product_state(l, seed).unwrap();
        let psi = state.to_amplitudes().unwrap();
        let c = state.correlations().unwrap();
        let t = c.transverse.as_ref().unwrap();
        let z: Vec<_> = (0..l).map(|i| site_operator(&spin_z(), i, l)).collect();
        let x: Vec<_> = (0..l).map(|i| site_operator(&spin_x(), i, l)).collect();
        let iy: Vec<_> = (0..l).map(|i| site_operator(&spin_y_times_i(), i, l)).collect();
        for m in 0..l {
            assert!((complex_expectation(&psi, &z[m]).re - c.sz_mean[m]).abs() < 1e-12);
            assert!((complex_expectation(&psi, &x[m]).re - t.sx_mean[m]).abs() < 1e-12);
            // <S_y> = −i<iS_y>
            let sy = complex_expectation(&psi, &iy[m]) * num_complex::Complex64::new(0.0, -1.0);
            assert!((sy.re - t.sy_mean[m]).abs() < 1e-12);
            for n in 0..l {
                let zz = complex_expectation(&psi, &(&z[m] * &z[n])).re;
                let xx = complex_expectation(&psi, &(&x[m] * &x[n])).re;
                let yy = -complex_expectation(&psi, &(&iy[m] * &iy[n])).re;
                assert!((zz - c.zz[(m, n)]).abs() < 1e-12);
                assert!((xx - t.xx[(m, n)]).abs() < 1e-12);
                assert!((yy - t.yy[(m, n)]).abs() < 1e-12);
            }
        }
    }
}
