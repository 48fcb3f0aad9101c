//! Collective-spin entanglement witness `W = V − s·Σ c_i²`.
//!
//! `V = Σ_α (ΔJ_α)²` with `J_α = Σ_i c_i S_αi` (no `1/√L`). Every product
//! state, and by concavity of the variance every separable state, has `W ≥ 0`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::observables::{CorrelationSet, TransverseMoments};
use crate::spectroscopy::{probe_coefficients, Normalization, ProbeConfig};

use nalgebra::DMatrix;

/// `w_value` below this certifies entanglement.
pub const DETECTION_THRESHOLD: f64 = -1e-10;

/// Largest chain for which full product-state vectors are materialized.
pub const PRODUCT_STATE_MAX_LENGTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub kpd: f64,
    pub alpha: f64,
    pub v_value: f64,
    pub bound: f64,
    pub w_value: f64,
    pub detected: bool,
    pub normalization: Normalization,
}

fn quadratic_form(g: &DMatrix<f64>, c: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..c.len() {
        for j in 0..c.len() {
            total += c[i] * c[j] * g[(i, j)];
        }
    }
    total
}

/// `V = Σ_α Σ_ij c_i c_j (<S_αi S_αj> − <S_αi><S_αj>)`.
pub fn collective_variance(c_set: &CorrelationSet, c: &[f64]) -> Result<f64> {
    if c.len() != c_set.length {
        return Err(Error::Dimension(format!(
            "{} coefficients for {} sites",
            c.len(),
            c_set.length
        )));
    }
    let xx = c_set.xx_connected()?;
    let yy = c_set.yy_connected()?;
    Ok(quadratic_form(&c_set.zz_connected, c) + quadratic_form(&xx, c) + quadratic_form(&yy, c))
}

fn validate_spin(spin: f64) -> Result<()> {
    let twice = 2.0 * spin;
    if !(spin > 0.0 && twice.is_finite() && (twice - twice.round()).abs() < 1e-12) {
        return Err(Error::Domain(format!(
            "spin = {spin} must be a positive multiple of 1/2"
        )));
    }
    Ok(())
}

/// Witness for the probe weights of `p`. `kpd = 0` (uniform weights) is allowed.
pub fn witness_value(c_set: &CorrelationSet, p: &ProbeConfig, spin: f64) -> Result<WitnessReport> {
    validate_spin(spin)?;
    let c = probe_coefficients(p, c_set.length)?;
    let v_value = collective_variance(c_set, &c)?;
    let bound = spin * c.iter().map(|x| x * x).sum::<f64>();
    let w_value = v_value - bound;
    Ok(WitnessReport {
        kpd: p.kpd,
        alpha: p.alpha,
        v_value,
        bound,
        w_value,
        detected: w_value < DETECTION_THRESHOLD,
        normalization: Normalization::Collective,
    })
}

/// One report per `kpd` in grid order, sharing every other field of `template`.
pub fn witness_scan(
    c_set: &CorrelationSet,
    template: &ProbeConfig,
    kpd_grid: &[f64],
    spin: f64,
) -> Result<Vec<WitnessReport>> {
    if kpd_grid.is_empty() {
        return Err(Error::Domain("kpd grid is empty".into()));
    }
    kpd_grid
        .iter()
        .map(|&kpd| witness_value(c_set, &ProbeConfig { kpd, ..*template }, spin))
        .collect()
}

/// Single-site spin-1 moments of a normalized spinor `(a₊, a₀, a₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteMoments {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub sx2: f64,
    pub sy2: f64,
    pub sz2: f64,
}

impl SiteMoments {
    pub fn of(spinor: &[Complex64; 3]) -> Self {
        let [ap, a0, am] = *spinor;
        let sz = ap.norm_sqr() - am.norm_sqr();
        let sz2 = ap.norm_sqr() + am.norm_sqr();
        // <S⁺> = <S_x> + i<S_y>
        let raise = (ap.conj() * a0 + a0.conj() * am) * std::f64::consts::SQRT_2;
        // <(S⁺)²> = 2 a₊* a₋
        let raise2 = (ap.conj() * am * 2.0).re;
        Self {
            sx: raise.re,
            sy: raise.im,
            sz,
            sx2: 0.5 * (raise2 + 2.0 - sz2),
            sy2: 0.5 * (-raise2 + 2.0 - sz2),
            sz2,
        }
    }
}

/// Tensor product of single-site spin-1 states, basis order `(m = +1, 0, −1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    sites: Vec<[Complex64; 3]>,
}

impl ProductState {
    /// Normalizes every spinor.
    pub fn new(sites: Vec<[Complex64; 3]>) -> Result<Self> {
        let sites = sites
            .into_iter()
            .map(|s| {
                let n = s.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                if n == 0.0 || !n.is_finite() {
                    Err(Error::Normalization(n))
                } else {
                    Ok(s.map(|a| a / n))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { sites })
    }

    /// `|+1, +1, …, +1⟩`.
    pub fn polarized(length: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            sites: vec![[one, zero, zero]; length],
        }
    }

    pub fn length(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[[Complex64; 3]] {
        &self.sites
    }

    pub fn site_moments(&self) -> Vec<SiteMoments> {
        self.sites.iter().map(SiteMoments::of).collect()
    }

    /// Exact moments: distinct sites factorize, the diagonal holds `<S_α²>`.
    pub fn correlations(&self) -> Result<CorrelationSet> {
        let moments = self.site_moments();
        let l = moments.len();
        let pair = |f: fn(&SiteMoments) -> f64, f2: fn(&SiteMoments) -> f64| {
            DMatrix::from_fn(l, l, |m, n| {
                if m == n {
                    f2(&moments[m])
                } else {
                    f(&moments[m]) * f(&moments[n])
                }
            })
        };
        let transverse = TransverseMoments {
            sx_mean: moments.iter().map(|s| s.sx).collect(),
            sy_mean: moments.iter().map(|s| s.sy).collect(),
            xx: pair(|s| s.sx, |s| s.sx2),
            yy: pair(|s| s.sy, |s| s.sy2),
        };
        CorrelationSet::from_moments(
            moments.iter().map(|s| s.sz).collect(),
            pair(|s| s.sz, |s| s.sz2),
            Some(transverse),
        )
    }

    /// Full `3^L` amplitude vector, site 0 the most significant factor.
    pub fn to_amplitudes(&self) -> Result<Vec<Complex64>> {
        if self.length() > PRODUCT_STATE_MAX_LENGTH {
            return Err(Error::SizeGuard(format!(
                "full product vector needs L <= {PRODUCT_STATE_MAX_LENGTH}, got {}",
                self.length()
            )));
        }
        let mut out = vec![Complex64::new(1.0, 0.0)];
        for site in &self.sites {
            out = out
                .iter()
                .flat_map(|&a| site.iter().map(move |&b| a * b))
                .collect();
        }
        Ok(out)
    }
}

/// Product of independent Haar-random spin-1 states, deterministic in `seed`.
pub fn random_product_state(length: usize, seed: u64) -> Result<ProductState> {
    if length == 0 || length > PRODUCT_STATE_MAX_LENGTH {
        return Err(Error::SizeGuard(format!(
            "product states need 1 <= L <= {PRODUCT_STATE_MAX_LENGTH}, got {length}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
    let sites = (0..length)
        .map(|_| std::array::from_fn(|_| Complex64::new(gauss(), gauss())))
        .collect();
    ProductState::new(sites)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{SectorBasis, StateVector};
    use crate::observables::correlations_with_transverse;
    use std::sync::Arc;

    fn singlet_set() -> CorrelationSet {
        let b = Arc::new(SectorBasis::new(2, 0).unwrap());
        let r = 1.0 / 3f64.sqrt();
        let mut amps = vec![0.0; 3];
        amps[b.index_of(b.encode(&[1, -1]).unwrap()).unwrap()] = r;
        amps[b.index_of(b.encode(&[0, 0]).unwrap()).unwrap()] = -r;
        amps[b.index_of(b.encode(&[-1, 1]).unwrap()).unwrap()] = r;
        correlations_with_transverse(&StateVector::new(b, amps).unwrap()).unwrap()
    }

    fn settings() -> Vec<ProbeConfig> {
        [(0.0, 0.0), (0.3, 0.0), (0.7, 0.25), (1.1, 0.5), (1.5, 0.1), (2.0, 0.9), (2.6, 0.3), (3.0, 0.0)]
            .iter()
            .map(|&(k, a)| ProbeConfig::new(k, a))
            .collect()
    }

    #[test]
    fn singlet_violates_the_bound() {
        let set = singlet_set();
        assert!(collective_variance(&set, &[2.0, 2.0]).unwrap().abs() < 1e-14);
        let r = witness_value(&set, &ProbeConfig::new(0.0, 0.0), 1.0).unwrap();
        assert!((r.w_value + 8.0).abs() < 1e-13);
        assert!(r.detected);
        assert_eq!(r.normalization, Normalization::Collective);
    }

    #[test]
    fn polarized_state_saturates() {
        let sector = Arc::new(SectorBasis::new(5, 5).unwrap());
        let v = StateVector::from_configuration(sector, &[1; 5]).unwrap();
        let from_sector = correlations_with_transverse(&v).unwrap();
        let from_product = ProductState::polarized(5).correlations().unwrap();
        for set in [&from_sector, &from_product] {
            for p in settings() {
                let r = witness_value(set, &p, 1.0).unwrap();
                assert!(r.w_value.abs() < 1e-12, "{r:?}");
                assert!(!r.detected);
            }
        }
    }

    #[test]
    fn missing_transverse_is_reported() {
        let sector = Arc::new(SectorBasis::new(3, 0).unwrap());
        let v = StateVector::from_configuration(sector, &[1, 0, -1]).unwrap();
        let set = crate::observables::correlations(&v).unwrap();
        assert!(matches!(
            collective_variance(&set, &[1.0; 3]),
            Err(Error::IncompleteInput)
        ));
    }

    #[test]
    fn single_site_identities() {
        for seed in 0..50 {
            for s in random_product_state(4, seed).unwrap().site_moments() {
                assert!((s.sx2 + s.sy2 + s.sz2 - 2.0).abs() < 1e-14);
                assert!(s.sx * s.sx + s.sy * s.sy + s.sz * s.sz <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn product_states_respect_the_bound() {
        for seed in 0..40 {
            let set = random_product_state(6, seed).unwrap().correlations().unwrap();
            for p in settings() {
                assert!(witness_value(&set, &p, 1.0).unwrap().w_value >= -1e-9);
            }
        }
    }

    #[test]
    fn mixing_does_not_lower_variance() {
        for seed in 0..20 {
            let a = random_product_state(5, 2 * seed).unwrap().correlations().unwrap();
            let b = random_product_state(5, 2 * seed + 1).unwrap().correlations().unwrap();
            for p in settings() {
                let c = probe_coefficients(&p, 5).unwrap();
                let (va, vb) = (
                    collective_variance(&a, &c).unwrap(),
                    collective_variance(&b, &c).unwrap(),
                );
                for w in [0.2, 0.5, 0.9] {
                    let mix = a.mix(&b, w).unwrap();
                    let vm = collective_variance(&mix, &c).unwrap();
                    assert!(vm >= w * va + (1.0 - w) * vb - 1e-9);
                }
            }
        }
    }

    #[test]
    fn product_state_is_deterministic_and_normalized() {
        let a = random_product_state(6, 11).unwrap();
        assert_eq!(a, random_product_state(6, 11).unwrap());
        assert_ne!(a, random_product_state(6, 12).unwrap());
        let norm: f64 = a.to_amplitudes().unwrap().iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(matches!(random_product_state(11, 0), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn scan_preserves_order() {
        let set = singlet_set();
        let grid = [0.1, 0.9, 0.4];
        let fwd = witness_scan(&set, &ProbeConfig::default(), &grid, 1.0).unwrap();
        let rev_grid: Vec<f64> = grid.iter().rev().copied().collect();
        let mut rev = witness_scan(&set, &ProbeConfig::default(), &rev_grid, 1.0).unwrap();
        rev.reverse();
        assert_eq!(fwd, rev);
        assert!(witness_scan(&set, &ProbeConfig::default(), &[], 1.0).is_err());
    }

    #[test]
    fn spin_half_bound_scales() {
        let set = singlet_set();
        let p = ProbeConfig::new(0.0, 0.0);
        let r = witness_value(&set, &p, 0.5).unwrap();
        assert!((r.bound - 4.0).abs() < 1e-14);
        assert!(witness_value(&set, &p, 0.3).is_err());
    }
}
