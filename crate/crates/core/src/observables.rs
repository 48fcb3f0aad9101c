//! Magnetizations, two-point correlators, structure factor, string and dimer order.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{
    bond_matrix, lower_amplitude, raise_amplitude, replace_pair, trit_to_m, BondTable,
    StateVector, MAX_LENGTH,
};

/// First and second moments of the transverse spin components.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseMoments {
    pub sx_mean: Vec<f64>,
    pub sy_mean: Vec<f64>,
    /// `<S_xm S_xn>`
    pub xx: DMatrix<f64>,
    /// `<S_ym S_yn>`
    pub yy: DMatrix<f64>,
}

/// Site-resolved one- and two-point spin moments of a state.
///
/// Raw moments combine affinely under classical mixing; connected parts are
/// derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSet {
    pub length: usize,
    pub sz_mean: Vec<f64>,
    /// `<S_zm S_zn>`
    pub zz: DMatrix<f64>,
    /// `G_z(m, n) = <S_zm S_zn> - <S_zm><S_zn>`
    pub zz_connected: DMatrix<f64>,
    pub transverse: Option<TransverseMoments>,
}

impl CorrelationSet {
    pub fn from_moments(
        sz_mean: Vec<f64>,
        zz: DMatrix<f64>,
        transverse: Option<TransverseMoments>,
    ) -> Result<Self> {
        let length = sz_mean.len();
        if zz.nrows() != length || zz.ncols() != length {
            return Err(Error::Dimension(format!(
                "zz is {}x{}, expected {length}x{length}",
                zz.nrows(),
                zz.ncols()
            )));
        }
        if let Some(t) = &transverse {
            let ok = t.sx_mean.len() == length
                && t.sy_mean.len() == length
                && t.xx.shape() == (length, length)
                && t.yy.shape() == (length, length);
            if !ok {
                return Err(Error::Dimension("transverse moments have the wrong shape".into()));
            }
        }
        let zz_connected = connected(&zz, &sz_mean);
        Ok(Self {
            length,
            sz_mean,
            zz,
            zz_connected,
            transverse,
        })
    }

    /// `<S_xm S_xn> - <S_xm><S_xn>`
    pub fn xx_connected(&self) -> Result<DMatrix<f64>> {
        let t = self.transverse.as_ref().ok_or(Error::IncompleteInput)?;
        Ok(connected(&t.xx, &t.sx_mean))
    }

    /// `<S_ym S_yn> - <S_ym><S_yn>`
    pub fn yy_connected(&self) -> Result<DMatrix<f64>> {
        let t = self.transverse.as_ref().ok_or(Error::IncompleteInput)?;
        Ok(connected(&t.yy, &t.sy_mean))
    }

    /// Moments of the classical mixture `p·self + (1-p)·other`.
    pub fn mix(&self, other: &CorrelationSet, p: f64) -> Result<CorrelationSet> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("mixing weight {p} outside [0, 1]")));
        }
        if self.length != other.length {
            return Err(Error::Dimension("mixing sets of different length".into()));
        }
        let q = 1.0 - p;
        let lerp = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| p * x + q * y).collect()
        };
        let transverse = match (&self.transverse, &other.transverse) {
            (Some(a), Some(b)) => Some(TransverseMoments {
                sx_mean: lerp(&a.sx_mean, &b.sx_mean),
                sy_mean: lerp(&a.sy_mean, &b.sy_mean),
                xx: &a.xx * p + &b.xx * q,
                yy: &a.yy * p + &b.yy * q,
            }),
            _ => None,
        };
        CorrelationSet::from_moments(
            lerp(&self.sz_mean, &other.sz_mean),
            &self.zz * p + &other.zz * q,
            transverse,
        )
    }

    /// Errors when any `|<S_zm>|` exceeds `tol`.
    pub fn require_zero_magnetization(&self, tol: f64) -> Result<()> {
        let worst = self
            .sz_mean
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
        match worst {
            Some((site, &value)) if value.abs() > tol => Err(Error::Magnetization {
                site,
                value: value.abs(),
            }),
            _ => Ok(()),
        }
    }
}

fn connected(second: &DMatrix<f64>, mean: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(second.nrows(), second.ncols(), |m, n| {
        second[(m, n)] - mean[m] * mean[n]
    })
}

/// Longitudinal moments `<S_zm>` and `<S_zm S_zn>`.
pub fn correlations(state: &StateVector) -> Result<CorrelationSet> {
    state.ensure_normalized()?;
    let (sz_mean, zz) = longitudinal(state);
    CorrelationSet::from_moments(sz_mean, zz, None)
}

/// Longitudinal and transverse moments.
///
/// Within a fixed-`S_z` sector `<S_x>` = `<S_y>` = 0 and
/// `<S_xm S_xn>` = `<S_ym S_yn>` = `<S⁺_m S⁻_n + S⁻_m S⁺_n>/4` off the
/// diagonal; on the diagonal both equal `(2 - <S_zm²>)/2`.
pub fn correlations_with_transverse(state: &StateVector) -> Result<CorrelationSet> {
    state.ensure_normalized()?;
    let (sz_mean, zz) = longitudinal(state);
    let basis = state.basis();
    let l = basis.length();
    let x = state.amplitudes();

    let mut flip = DMatrix::<f64>::zeros(l, l);
    let mut trits = [0u32; MAX_LENGTH];
    for (k, &code) in basis.states().iter().enumerate() {
        let amp = x[k];
        if amp == 0.0 {
            continue;
        }
        basis.unpack(code, &mut trits[..l]);
        for m in 0..l {
            let mm = trit_to_m(trits[m]);
            if mm == 1 {
                continue;
            }
            for n in 0..l {
                if n == m {
                    continue;
                }
                let mn = trit_to_m(trits[n]);
                if mn == -1 {
                    continue;
                }
                // <k'| S⁺_m S⁻_n |k> with k' = k raised at m, lowered at n
                let coef = raise_amplitude(mm) * lower_amplitude(mn);
                let target = code + basis.weight(m) - basis.weight(n);
                flip[(m, n)] += x[basis.rank(target)] * amp * coef;
            }
        }
    }

    let xx = DMatrix::from_fn(l, l, |m, n| {
        if m == n {
            0.5 * (2.0 - zz[(m, m)])
        } else {
            0.25 * (flip[(m, n)] + flip[(n, m)])
        }
    });
    let transverse = TransverseMoments {
        sx_mean: vec![0.0; l],
        sy_mean: vec![0.0; l],
        yy: xx.clone(),
        xx,
    };
    CorrelationSet::from_moments(sz_mean, zz, Some(transverse))
}

fn longitudinal(state: &StateVector) -> (Vec<f64>, DMatrix<f64>) {
    let basis = state.basis();
    let l = basis.length();
    let mut sz_mean = vec![0.0; l];
    let mut zz = DMatrix::<f64>::zeros(l, l);
    let mut ms = [0.0f64; MAX_LENGTH];
    let mut trits = [0u32; MAX_LENGTH];
    for (&code, &a) in basis.states().iter().zip(state.amplitudes()) {
        let w = a * a;
        if w == 0.0 {
            continue;
        }
        basis.unpack(code, &mut trits[..l]);
        for site in 0..l {
            ms[site] = trit_to_m(trits[site]) as f64;
            sz_mean[site] += w * ms[site];
        }
        for m in 0..l {
            if ms[m] == 0.0 {
                continue;
            }
            for n in m..l {
                zz[(m, n)] += w * ms[m] * ms[n];
            }
        }
    }
    for m in 0..l {
        for n in 0..m {
            zz[(m, n)] = zz[(n, m)];
        }
    }
    (sz_mean, zz)
}

/// `S(q) = (1/L) Σ_mn cos[q(m-n)] <S_zm S_zn>`.
///
/// The sine part cancels because `zz` is symmetric.
pub fn structure_factor(c: &CorrelationSet, q: f64) -> f64 {
    let l = c.length;
    let mut total = 0.0;
    for m in 0..l {
        for n in 0..l {
            total += (q * (m as f64 - n as f64)).cos() * c.zz[(m, n)];
        }
    }
    total / l as f64
}

/// Range of the `exp(iπ S_z)` string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StringConvention {
    /// Sites strictly between the endpoints, `l = m+1 … n-1`.
    #[default]
    Interior,
    /// Sites `l = m-1 … n-1`, the range as printed in the original definition.
    PaperLiteral,
}

/// String correlator `<S_zm Π_l exp(iπ S_zl) S_zn>`.
///
/// `exp(iπ S_z)` is diagonal with eigenvalue `+1` on `m = 0` and `-1` on `m = ±1`.
pub fn string_order(
    state: &StateVector,
    m: usize,
    n: usize,
    convention: StringConvention,
) -> Result<f64> {
    let basis = state.basis();
    let l = basis.length();
    if !(m < n && n < l) {
        return Err(Error::Range(format!(
            "string endpoints need 0 <= m < n <= L-1, got m = {m}, n = {n}, L = {l}"
        )));
    }
    let range = match convention {
        StringConvention::Interior => {
            if n - m < 2 {
                return Err(Error::Range(format!(
                    "interior string needs n - m >= 2, got {}",
                    n - m
                )));
            }
            (m + 1)..n
        }
        StringConvention::PaperLiteral => {
            if m == 0 {
                return Err(Error::Range(
                    "literal string range starts at m-1 and needs m >= 1".into(),
                ));
            }
            (m - 1)..n
        }
    };

    let mut total = 0.0;
    for (&code, &a) in basis.states().iter().zip(state.amplitudes()) {
        let w = a * a;
        if w == 0.0 {
            continue;
        }
        let sm = trit_to_m(basis.trit(code, m));
        let sn = trit_to_m(basis.trit(code, n));
        if sm == 0 || sn == 0 {
            continue;
        }
        let odd = range
            .clone()
            .filter(|&site| trit_to_m(basis.trit(code, site)) != 0)
            .count();
        let sign = if odd % 2 == 0 { 1.0 } else { -1.0 };
        total += w * sign * (sm * sn) as f64;
    }
    Ok(total)
}

/// `<H_i>` for the bond operator `cos θ S_i·S_{i+1} + sin θ (S_i·S_{i+1})²`.
pub fn bond_energy(state: &StateVector, theta: f64, i: usize) -> Result<f64> {
    let basis = state.basis();
    let l = basis.length();
    if i + 1 >= l {
        return Err(Error::Range(format!("bond {i} does not exist for L = {l}")));
    }
    let table = BondTable::new(&bond_matrix(theta));
    let x = state.amplitudes();
    let mut total = 0.0;
    for (k, &code) in basis.states().iter().enumerate() {
        if x[k] == 0.0 {
            continue;
        }
        let (ti, tj) = (basis.trit(code, i), basis.trit(code, i + 1));
        let pair = 3 * ti + tj;
        for &(to, value) in table.column(pair) {
            let other = if to == pair {
                x[k]
            } else {
                x[basis.rank(replace_pair(basis, code, (i, i + 1), (ti, tj), to))]
            };
            total += x[k] * value * other;
        }
    }
    Ok(total)
}

/// Dimer order `D = |<H_i> - <H_{i+1}>|`.
pub fn dimer_order(state: &StateVector, theta: f64, i: usize) -> Result<f64> {
    let l = state.basis().length();
    if l < 3 || i > l - 3 {
        return Err(Error::Range(format!(
            "dimer order needs bonds i and i+1 inside the chain, got i = {i}, L = {l}"
        )));
    }
    Ok((bond_energy(state, theta, i)? - bond_energy(state, theta, i + 1)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::SectorBasis;
    use std::sync::Arc;

    fn product(config: &[i8]) -> StateVector {
        let s: i32 = config.iter().map(|&m| m as i32).sum();
        let b = Arc::new(SectorBasis::new(config.len(), s).unwrap());
        StateVector::from_configuration(b, config).unwrap()
    }

    pub(crate) fn singlet() -> StateVector {
        let b = Arc::new(SectorBasis::new(2, 0).unwrap());
        let r = 1.0 / 3f64.sqrt();
        let mut amps = vec![0.0; 3];
        amps[b.index_of(b.encode(&[1, -1]).unwrap()).unwrap()] = r;
        amps[b.index_of(b.encode(&[0, 0]).unwrap()).unwrap()] = -r;
        amps[b.index_of(b.encode(&[-1, 1]).unwrap()).unwrap()] = r;
        StateVector::new(b, amps).unwrap()
    }

    #[test]
    fn all_zero_product_state() {
        let c = correlations_with_transverse(&product(&[0; 5])).unwrap();
        assert!(c.sz_mean.iter().all(|&x| x == 0.0));
        assert!(c.zz.iter().all(|&x| x == 0.0));
        assert!(c.zz_connected.iter().all(|&x| x == 0.0));
        let t = c.transverse.as_ref().unwrap();
        for m in 0..5 {
            for n in 0..5 {
                let expected = if m == n { 1.0 } else { 0.0 };
                assert_eq!(t.xx[(m, n)], expected);
                assert_eq!(t.yy[(m, n)], expected);
            }
        }
        assert_eq!(structure_factor(&c, 1.3), 0.0);
    }

    #[test]
    fn singlet_is_isotropic() {
        let c = correlations_with_transverse(&singlet()).unwrap();
        let t = c.transverse.as_ref().unwrap();
        assert!((c.zz[(0, 1)] + 2.0 / 3.0).abs() < 1e-14);
        assert!((t.xx[(0, 1)] + 2.0 / 3.0).abs() < 1e-14);
        assert!((t.yy[(0, 1)] + 2.0 / 3.0).abs() < 1e-14);
        assert!((c.zz[(0, 0)] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn polarized_structure_factor() {
        let c = correlations(&product(&[1; 6])).unwrap();
        assert!((structure_factor(&c, 0.0) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let b = Arc::new(SectorBasis::new(3, 0).unwrap());
        let v = StateVector::new(b, vec![1.0; 7]).unwrap();
        assert!(matches!(correlations(&v), Err(Error::Normalization(_))));
    }

    #[test]
    fn string_order_product_and_ranges() {
        let v = product(&[0; 8]);
        assert_eq!(
            string_order(&v, 2, 6, StringConvention::Interior).unwrap(),
            0.0
        );
        assert!(string_order(&v, 2, 3, StringConvention::Interior).is_err());
        assert!(string_order(&v, 0, 5, StringConvention::PaperLiteral).is_err());
        assert!(string_order(&v, 3, 9, StringConvention::Interior).is_err());
        // Néel-like product: S_z endpoints ±1, interior all ±1.
        let v = product(&[1, -1, 1, -1, 1, -1]);
        // m=1 (-1), n=4 (+1), interior sites 2,3 -> two odd sites -> sign +1
        assert_eq!(
            string_order(&v, 1, 4, StringConvention::Interior).unwrap(),
            -1.0
        );
        // literal range 0..=3 -> four odd sites -> +1
        assert_eq!(
            string_order(&v, 1, 4, StringConvention::PaperLiteral).unwrap(),
            -1.0
        );
    }

    #[test]
    fn dimer_order_on_product_states() {
        let v = product(&[1; 6]);
        for i in 0..=3 {
            assert!(dimer_order(&v, 0.4, i).unwrap().abs() < 1e-14);
        }
        assert!(dimer_order(&v, 0.4, 4).is_err());
        // Polarized bond energy is cos θ + sin θ.
        let e = bond_energy(&v, 0.4, 2).unwrap();
        assert!((e - (0.4f64.cos() + 0.4f64.sin())).abs() < 1e-14);
    }

    #[test]
    fn singlet_bond_energy() {
        let e = bond_energy(&singlet(), 0.0, 0).unwrap();
        assert!((e + 2.0).abs() < 1e-14);
    }

    #[test]
    fn mixing_is_affine_in_raw_moments() {
        let a = correlations_with_transverse(&product(&[1, 1, 1])).unwrap();
        let b = correlations_with_transverse(&product(&[-1, -1, -1])).unwrap();
        let mix = a.mix(&b, 0.5).unwrap();
        assert!(mix.sz_mean.iter().all(|x| x.abs() < 1e-15));
        // The mixture of the two polarized states has <S_z0 S_z1> = 1 but zero means.
        assert!((mix.zz_connected[(0, 1)] - 1.0).abs() < 1e-15);
        assert!(a.mix(&b, 1.5).is_err());
    }
}
