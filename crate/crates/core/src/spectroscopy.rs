//! Light signals from spin correlations: probe coefficients, the mean effective
//! angular momentum, the variance signal ε(k, α) and the phase detectors.
//!
//! A probe at dimensionless wavevector `kpd = k·d` and shift `alpha = a/d`
//! couples to site `n` at position `z_n = site_origin + n` with weight
//! `c_n = 2cos²[kpd·(z_n − alpha)]`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::observables::{structure_factor, CorrelationSet};

/// Tolerance on `|<S_z>|` for the zero-magnetization closed forms.
pub const MAGNETIZATION_TOL: f64 = 1e-8;

/// Points in the numeric α-average over one modulation period.
pub const ALPHA_GRID_POINTS: usize = 64;

/// Which collective operator normalization produced a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `J = (1/√L) Σ c_n S_n`, used for the light signals.
    Spectroscopy,
    /// `J = Σ c_n S_n`, used for the witness.
    Collective,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub kpd: f64,
    pub alpha: f64,
    pub kappa: f64,
    /// Gaussian Wannier width `σ/d`; 0 is the delta-function limit.
    pub wannier_width: f64,
    /// `(ΔX_in)²`; 1/2 for a coherent input.
    pub input_variance: f64,
    /// Position of site 0 in units of `d`.
    pub site_origin: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            kpd: FRAC_PI_2,
            alpha: 0.0,
            kappa: 1.0,
            wannier_width: 0.0,
            input_variance: 0.5,
            site_origin: 1.0,
        }
    }
}

impl ProbeConfig {
    pub fn new(kpd: f64, alpha: f64) -> Self {
        Self {
            kpd,
            alpha,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.kpd,
            self.alpha,
            self.kappa,
            self.wannier_width,
            self.input_variance,
            self.site_origin,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::Domain("probe parameters must be finite".into()));
        }
        if self.kpd < 0.0 {
            return Err(Error::Domain(format!("kpd = {} must be >= 0", self.kpd)));
        }
        if self.kappa <= 0.0 {
            return Err(Error::Domain(format!("kappa = {} must be > 0", self.kappa)));
        }
        if self.wannier_width < 0.0 {
            return Err(Error::Domain(format!(
                "wannier width = {} must be >= 0",
                self.wannier_width
            )));
        }
        if self.input_variance <= 0.0 {
            return Err(Error::Domain(format!(
                "input variance = {} must be > 0",
                self.input_variance
            )));
        }
        Ok(())
    }

    fn validate_modulated(&self) -> Result<()> {
        self.validate()?;
        if self.kpd <= 0.0 {
            return Err(Error::Domain(format!(
                "modulated signals need kpd > 0, got {}",
                self.kpd
            )));
        }
        Ok(())
    }

    /// `exp(−(kpd·σ)²)`, the contrast of the modulation after Wannier smearing.
    pub fn contrast(&self) -> f64 {
        (-(self.kpd * self.wannier_width).powi(2)).exp()
    }

    fn position(&self, n: usize) -> f64 {
        self.site_origin + n as f64
    }
}

/// One evaluated point of the variance signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPoint {
    pub kpd: f64,
    pub alpha: f64,
    /// `(ΔJ_z^eff)²`
    pub epsilon: f64,
    /// `<J_z^eff>`
    pub mean_jz: f64,
    pub x_out_mean: f64,
    pub x_out_variance: f64,
    pub normalization: Normalization,
}

/// Probe weights `c_n` for a chain of `length` sites.
pub fn probe_coefficients(p: &ProbeConfig, length: usize) -> Result<Vec<f64>> {
    p.validate()?;
    let contrast = p.contrast();
    Ok((0..length)
        .map(|n| {
            let phase = p.kpd * (p.position(n) - p.alpha);
            if p.wannier_width == 0.0 {
                2.0 * phase.cos().powi(2)
            } else {
                1.0 + contrast * (2.0 * phase).cos()
            }
        })
        .collect())
}

/// `<J_z^eff> = (1/√L) Σ_n c_n <S_zn>`.
pub fn mean_effective_jz(sz_mean: &[f64], c: &[f64]) -> Result<f64> {
    if sz_mean.len() != c.len() {
        return Err(Error::Dimension(format!(
            "{} magnetizations but {} coefficients",
            sz_mean.len(),
            c.len()
        )));
    }
    if c.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = sz_mean.iter().zip(c).map(|(s, w)| s * w).sum();
    Ok(total / (c.len() as f64).sqrt())
}

fn quadratic_form(g: &DMatrix<f64>, c: &[f64]) -> f64 {
    let mut total = 0.0;
    for m in 0..c.len() {
        let mut row = 0.0;
        for n in 0..c.len() {
            row += g[(m, n)] * c[n];
        }
        total += c[m] * row;
    }
    total
}

/// Variance signal `ε = (1/L) cᵀ G_z c` with the homodyne output moments.
pub fn epsilon(c_set: &CorrelationSet, p: &ProbeConfig) -> Result<SignalPoint> {
    p.validate_modulated()?;
    let l = c_set.length;
    let c = probe_coefficients(p, l)?;
    let eps = quadratic_form(&c_set.zz_connected, &c) / l as f64;
    let mean_jz = mean_effective_jz(&c_set.sz_mean, &c)?;
    Ok(SignalPoint {
        kpd: p.kpd,
        alpha: p.alpha,
        epsilon: eps,
        mean_jz,
        x_out_mean: -p.kappa * mean_jz,
        x_out_variance: p.input_variance + p.kappa * p.kappa * eps,
        normalization: Normalization::Spectroscopy,
    })
}

/// ε as the explicit double sum `(4/L) Σ_mn cos²[k(z_m−α)] cos²[k(z_n−α)] G_z(m, n)`
/// in the delta-function limit.
pub fn epsilon_direct(c_set: &CorrelationSet, p: &ProbeConfig) -> Result<f64> {
    p.validate_modulated()?;
    let l = c_set.length;
    let mut total = 0.0;
    for m in 0..l {
        let cm = (p.kpd * (p.position(m) - p.alpha)).cos().powi(2);
        for n in 0..l {
            let cn = (p.kpd * (p.position(n) - p.alpha)).cos().powi(2);
            total += cm * cn * c_set.zz_connected[(m, n)];
        }
    }
    Ok(4.0 * total / l as f64)
}

/// α-averaged signal `S(2·kpd)/2` in the delta-function limit.
pub fn epsilon_alpha_averaged(c_set: &CorrelationSet, kpd: f64) -> Result<f64> {
    if !(kpd.is_finite() && kpd > 0.0) {
        return Err(Error::Domain(format!("kpd = {kpd} must be > 0")));
    }
    c_set.require_zero_magnetization(MAGNETIZATION_TOL)?;
    Ok(0.5 * structure_factor(c_set, 2.0 * kpd))
}

/// Mean of ε over `points` uniformly spaced shifts spanning one period `π/kpd`.
pub fn epsilon_alpha_grid_average(
    c_set: &CorrelationSet,
    p: &ProbeConfig,
    points: usize,
) -> Result<f64> {
    p.validate_modulated()?;
    if points == 0 {
        return Err(Error::Domain("alpha grid needs at least one point".into()));
    }
    let period = PI / p.kpd;
    let mut total = 0.0;
    for i in 0..points {
        let probe = ProbeConfig {
            alpha: p.alpha + period * i as f64 / points as f64,
            ..*p
        };
        total += epsilon(c_set, &probe)?.epsilon;
    }
    Ok(total / points as f64)
}

/// `ε(kpd, α₁) − ε(kpd, α₂)`.
pub fn delta_epsilon(c_set: &CorrelationSet, p: &ProbeConfig, alpha1: f64, alpha2: f64) -> Result<f64> {
    let e1 = epsilon(c_set, &ProbeConfig { alpha: alpha1, ..*p })?.epsilon;
    let e2 = epsilon(c_set, &ProbeConfig { alpha: alpha2, ..*p })?.epsilon;
    Ok(e1 - e2)
}

/// Difference signal from the reduced cosine kernel
/// `(1/2L) Σ_mn {cos[2k(z_m+z_n−2α₁)] − cos[2k(z_m+z_n−2α₂)]} G_z(m, n)`,
/// scaled by the squared smearing contrast.
///
/// Valid only when every row of `G_z` sums to zero.
pub fn delta_epsilon_kernel(
    c_set: &CorrelationSet,
    p: &ProbeConfig,
    alpha1: f64,
    alpha2: f64,
) -> Result<f64> {
    p.validate_modulated()?;
    c_set.require_zero_magnetization(MAGNETIZATION_TOL)?;
    let l = c_set.length;
    let k2 = 2.0 * p.kpd;
    let mut total = 0.0;
    for m in 0..l {
        for n in 0..l {
            let s = p.position(m) + p.position(n);
            let kernel = (k2 * (s - 2.0 * alpha1)).cos() - (k2 * (s - 2.0 * alpha2)).cos();
            total += kernel * c_set.zz_connected[(m, n)];
        }
    }
    Ok(p.contrast().powi(2) * total / (2.0 * l as f64))
}

fn closed_form<F: Fn(f64) -> f64>(c_set: &CorrelationSet, site_origin: f64, kernel: F) -> Result<f64> {
    c_set.require_zero_magnetization(MAGNETIZATION_TOL)?;
    let l = c_set.length;
    let mut total = 0.0;
    for m in 0..l {
        for n in 0..l {
            let s = 2.0 * site_origin + (m + n) as f64;
            total += kernel(s) * c_set.zz_connected[(m, n)];
        }
    }
    Ok(total / l as f64)
}

/// Period-3 detector `C_ε = (1/L) Σ_mn cos[(2π/3)(z_m+z_n) + π/3] G_z(m, n)`,
/// equal to `Δε(π/3; 5/4, 1/2)`.
pub fn c_epsilon(c_set: &CorrelationSet, site_origin: f64) -> Result<f64> {
    closed_form(c_set, site_origin, |s| (2.0 * FRAC_PI_3 * s + FRAC_PI_3).cos())
}

/// Dimer detector `D_ε = −(1/L) Σ_mn sin[(π/2)(z_m+z_n)] G_z(m, n)`,
/// equal to `Δε(π/4; 3/2, 1/2)`.
pub fn d_epsilon(c_set: &CorrelationSet, site_origin: f64) -> Result<f64> {
    closed_form(c_set, site_origin, |s| -(FRAC_PI_2 * s).sin())
}

/// Probe and shifts whose difference signal equals [`c_epsilon`].
pub fn c_epsilon_setting() -> (f64, f64, f64) {
    (FRAC_PI_3, 1.25, 0.5)
}

/// Probe and shifts whose difference signal equals [`d_epsilon`].
pub fn d_epsilon_setting() -> (f64, f64, f64) {
    (FRAC_PI_4, 1.5, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{SectorBasis, StateVector};
    use crate::observables::correlations;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn singlet_set() -> CorrelationSet {
        let b = Arc::new(SectorBasis::new(2, 0).unwrap());
        let r = 1.0 / 3f64.sqrt();
        let mut amps = vec![0.0; 3];
        amps[b.index_of(b.encode(&[1, -1]).unwrap()).unwrap()] = r;
        amps[b.index_of(b.encode(&[0, 0]).unwrap()).unwrap()] = -r;
        amps[b.index_of(b.encode(&[-1, 1]).unwrap()).unwrap()] = r;
        correlations(&StateVector::new(b, amps).unwrap()).unwrap()
    }

    fn zero_origin(kpd: f64, alpha: f64) -> ProbeConfig {
        ProbeConfig {
            site_origin: 0.0,
            ..ProbeConfig::new(kpd, alpha)
        }
    }

    /// Symmetric matrix with zero row sums, plus zero magnetization.
    fn random_set(l: usize, seed: u64) -> CorrelationSet {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut g = DMatrix::<f64>::zeros(l, l);
        for m in 0..l {
            for n in m + 1..l {
                let v = next();
                g[(m, n)] = v;
                g[(n, m)] = v;
            }
        }
        for m in 0..l {
            let row: f64 = (0..l).filter(|&n| n != m).map(|n| g[(m, n)]).sum();
            g[(m, m)] = -row;
        }
        CorrelationSet::from_moments(vec![0.0; l], g, None).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let c = probe_coefficients(&zero_origin(0.0, 0.0), 5).unwrap();
        assert!(c.iter().all(|&x| (x - 2.0).abs() < 1e-15));
        let c = probe_coefficients(&zero_origin(FRAC_PI_2, 0.0), 6).unwrap();
        for (n, x) in c.iter().enumerate() {
            let expected = if n % 2 == 0 { 2.0 } else { 0.0 };
            assert!((x - expected).abs() < 1e-15);
        }
        let c = probe_coefficients(&zero_origin(FRAC_PI_3, 0.5), 3).unwrap();
        assert!((c[1] - 1.5).abs() < 1e-15);
        let bad = ProbeConfig {
            wannier_width: -0.1,
            ..ProbeConfig::default()
        };
        assert!(matches!(probe_coefficients(&bad, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn gaussian_smearing_reduces_to_delta_limit() {
        let mut p = ProbeConfig::new(0.7, 0.3);
        let delta = probe_coefficients(&p, 7).unwrap();
        p.wannier_width = 1e-300;
        let smeared = probe_coefficients(&p, 7).unwrap();
        for (a, b) in delta.iter().zip(&smeared) {
            assert!((a - b).abs() < 1e-14);
        }
        p.wannier_width = 10.0;
        let flat = probe_coefficients(&p, 7).unwrap();
        assert!(flat.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn mean_jz_examples() {
        assert_eq!(mean_effective_jz(&[0.0; 4], &[2.0; 4]).unwrap(), 0.0);
        assert!((mean_effective_jz(&[1.0; 4], &[2.0; 4]).unwrap() - 4.0).abs() < 1e-15);
        assert!(mean_effective_jz(&[1.0; 3], &[2.0; 4]).is_err());
    }

    #[test]
    fn singlet_signals() {
        let set = singlet_set();
        let point = epsilon(&set, &zero_origin(FRAC_PI_2, 0.0)).unwrap();
        assert!((point.epsilon - 4.0 / 3.0).abs() < 1e-14);
        assert!((point.x_out_variance - (0.5 + 4.0 / 3.0)).abs() < 1e-14);
        assert_eq!(point.mean_jz, 0.0);
        let avg = epsilon_alpha_averaged(&set, FRAC_PI_4).unwrap();
        assert!((avg - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn modulated_signals_need_positive_kpd() {
        let set = singlet_set();
        assert!(epsilon(&set, &ProbeConfig::new(0.0, 0.0)).is_err());
        assert!(epsilon_alpha_averaged(&set, 0.0).is_err());
    }

    #[test]
    fn magnetized_input_is_rejected() {
        let set = CorrelationSet::from_moments(
            vec![0.0, 0.5],
            DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 0.5]),
            None,
        )
        .unwrap();
        assert!(matches!(
            c_epsilon(&set, 1.0),
            Err(Error::Magnetization { site: 1, .. })
        ));
        assert!(epsilon_alpha_averaged(&set, 1.0).is_err());
    }

    #[test]
    fn detector_kernels_vanish_on_even_pairs() {
        // Only m + n odd survives in D_ε.
        let l = 6;
        for m in 0..l {
            for n in 0..l {
                let mut g = DMatrix::<f64>::zeros(l, l);
                g[(m, n)] = 1.0;
                let set = CorrelationSet::from_moments(vec![0.0; l], g, None).unwrap();
                let d = d_epsilon(&set, 1.0).unwrap();
                if (m + n) % 2 == 0 {
                    assert!(d.abs() < 1e-15);
                } else {
                    assert!((d.abs() - 1.0 / l as f64).abs() < 1e-15);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn two_paths_agree(seed in any::<u64>(), kpd in 0.05f64..3.1, alpha in -2.0f64..2.0,
                           origin in prop_oneof![Just(0.0), Just(1.0)]) {
            let set = random_set(7, seed);
            let p = ProbeConfig { site_origin: origin, ..ProbeConfig::new(kpd, alpha) };
            let direct = epsilon_direct(&set, &p).unwrap();
            let quad = epsilon(&set, &p).unwrap().epsilon;
            prop_assert!((direct - quad).abs() < 1e-12);

            let shifted = ProbeConfig { alpha: alpha + PI / kpd, ..p };
            prop_assert!((epsilon(&set, &shifted).unwrap().epsilon - quad).abs() < 1e-11);

            let a2 = alpha * 0.3 + 0.2;
            let diff = delta_epsilon(&set, &p, alpha, a2).unwrap();
            let kern = delta_epsilon_kernel(&set, &p, alpha, a2).unwrap();
            prop_assert!((diff - kern).abs() < 1e-10);

            let grid = epsilon_alpha_grid_average(&set, &p, ALPHA_GRID_POINTS).unwrap();
            let exact = epsilon_alpha_averaged(&set, kpd).unwrap();
            prop_assert!((grid - exact).abs() < 1e-10);
        }

        #[test]
        fn detectors_match_difference_signals(seed in any::<u64>(), origin in -2i32..3) {
            let set = random_set(8, seed);
            let origin = origin as f64;
            let (k, a1, a2) = c_epsilon_setting();
            let p = ProbeConfig { site_origin: origin, ..ProbeConfig::new(k, 0.0) };
            let c = c_epsilon(&set, origin).unwrap();
            prop_assert!((c - delta_epsilon(&set, &p, a1, a2).unwrap()).abs() < 1e-10);

            let (k, a1, a2) = d_epsilon_setting();
            let p = ProbeConfig { site_origin: origin, ..ProbeConfig::new(k, 0.0) };
            let d = d_epsilon(&set, origin).unwrap();
            prop_assert!((d - delta_epsilon(&set, &p, a1, a2).unwrap()).abs() < 1e-10);
        }
    }
}
