//! Browser bindings for three interactive views: the ε(k, α) probe map, the
//! θ scan of the phase detectors, and the witness curve W(k).
//!
//! Ground states are cached per `(θ, L)` so dragging a probe slider only
//! redoes the cheap post-processing.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::rc::Rc;

use faraday::{
    c_epsilon, correlations_with_transverse, d_epsilon, dimer_order, epsilon,
    ground_state_global, string_order, witness_value, CorrelationSet, Error, ModelParams,
    ProbeConfig, SolverOptions, StringConvention,
};
use wasm_bindgen::prelude::*;

/// Keeps a single solve well under a second in the browser.
pub const MAX_WEB_LENGTH: usize = 10;

struct Solved {
    set: CorrelationSet,
    dimer: f64,
    string: f64,
}

thread_local! {
    static CACHE: RefCell<HashMap<(u64, usize), Rc<Solved>>> = RefCell::new(HashMap::new());
}

fn solve(theta: f64, length: usize) -> Result<Rc<Solved>, Error> {
    if length > MAX_WEB_LENGTH {
        return Err(Error::SizeGuard(format!(
            "the demo solves chains up to L = {MAX_WEB_LENGTH}, got {length}"
        )));
    }
    let key = (theta.to_bits(), length);
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(hit);
    }
    let p = ModelParams::new(theta, length)?;
    let g = ground_state_global(&p, &SolverOptions::default())?;
    let (m, n) = (length / 4, length - 1 - length / 4);
    let solved = Rc::new(Solved {
        set: correlations_with_transverse(&g.state)?,
        dimer: if length >= 3 {
            dimer_order(&g.state, theta, length / 2 - 1)?
        } else {
            f64::NAN
        },
        string: string_order(&g.state, m, n, StringConvention::Interior).unwrap_or(f64::NAN),
    });
    CACHE.with(|c| c.borrow_mut().insert(key, solved.clone()));
    Ok(solved)
}

fn grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![stop],
        _ => (0..points)
            .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// ε(kpd, α), α-major: `kpd_points` values per row over `(0, π]`, rows over α ∈ `[0, 1)`.
pub fn probe_map_values(
    theta: f64,
    length: usize,
    kpd_points: usize,
    alpha_points: usize,
) -> Result<Vec<f64>, Error> {
    let s = solve(theta, length)?;
    let kpd = grid(PI / kpd_points as f64, PI, kpd_points);
    let mut out = Vec::with_capacity(kpd_points * alpha_points);
    for a in 0..alpha_points {
        let alpha = a as f64 / alpha_points as f64;
        for &k in &kpd {
            out.push(epsilon(&s.set, &ProbeConfig::new(k, alpha))?.epsilon);
        }
    }
    Ok(out)
}

/// Rows of `[θ, C_ε, D_ε, dimer order, string order]` across `[θ_min, θ_max]`.
pub fn phase_scan_values(
    length: usize,
    theta_min: f64,
    theta_max: f64,
    points: usize,
) -> Result<Vec<f64>, Error> {
    let mut out = Vec::with_capacity(points * 5);
    for theta in grid(theta_min, theta_max, points) {
        let s = solve(theta, length)?;
        out.extend([
            theta,
            c_epsilon(&s.set, 1.0)?,
            d_epsilon(&s.set, 1.0)?,
            s.dimer,
            s.string,
        ]);
    }
    Ok(out)
}

/// Pairs `[kpd, W]` over `(0, π/2]` at shift `alpha`.
pub fn witness_curve_values(
    theta: f64,
    length: usize,
    alpha: f64,
    points: usize,
) -> Result<Vec<f64>, Error> {
    let s = solve(theta, length)?;
    let mut out = Vec::with_capacity(points * 2);
    for k in grid(FRAC_PI_2 / points as f64, FRAC_PI_2, points) {
        let r = witness_value(&s.set, &ProbeConfig::new(k, alpha), 1.0)?;
        out.extend([k, r.w_value]);
    }
    Ok(out)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn probe_map(
    theta: f64,
    length: usize,
    kpd_points: usize,
    alpha_points: usize,
) -> Result<Vec<f64>, JsError> {
    probe_map_values(theta, length, kpd_points, alpha_points).map_err(js)
}

#[wasm_bindgen]
pub fn phase_scan(
    length: usize,
    theta_min: f64,
    theta_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    phase_scan_values(length, theta_min, theta_max, points).map_err(js)
}

#[wasm_bindgen]
pub fn witness_curve(
    theta: f64,
    length: usize,
    alpha: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    witness_curve_values(theta, length, alpha, points).map_err(js)
}
