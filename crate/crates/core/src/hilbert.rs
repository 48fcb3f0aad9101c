//! Fixed-magnetization bases of the spin-1 chain and the matrix-free Hamiltonian.
//!
//! A configuration is packed into a base-3 integer, one trit per site with
//! site 0 as the most significant trit. Trit `t` encodes the local
//! magnetization `m = t - 1`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Hard cap on the chain length.
pub const MAX_LENGTH: usize = 16;

/// Local magnetization of trit `t`.
#[inline]
pub fn trit_to_m(t: u32) -> i32 {
    t as i32 - 1
}

const fn pow3(n: usize) -> u32 {
    let mut p = 1u32;
    let mut i = 0;
    while i < n {
        p *= 3;
        i += 1;
    }
    p
}

/// All configurations of a chain with a fixed total `S_z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    length: usize,
    sz_total: i32,
    states: Vec<u32>,
    // Ranking tables: the index of a code is
    // `left_start[code / right_base] + right_rank[code % right_base]`.
    right_base: u32,
    left_start: Vec<u32>,
    right_rank: Vec<u32>,
    site_weights: Vec<u32>,
}

impl SectorBasis {
    pub fn new(length: usize, sz_total: i32) -> Result<Self> {
        if !(2..=MAX_LENGTH).contains(&length) {
            return Err(Error::Domain(format!(
                "length must lie in [2, {MAX_LENGTH}], got {length}"
            )));
        }
        if sz_total.unsigned_abs() as usize > length {
            return Err(Error::EmptySector { length, sz_total });
        }

        // Trit sum of every valid configuration.
        let target = (sz_total + length as i32) as u32;
        let mut states = Vec::new();
        enumerate(length, target, 0, 0, &mut states);

        let right_sites = length - length / 2;
        let left_sites = length / 2;
        let right_base = pow3(right_sites);

        let mut right_rank = vec![0u32; right_base as usize];
        let mut seen = vec![0u32; 2 * right_sites + 1];
        for code in 0..right_base {
            let s = trit_sum(code, right_sites) as usize;
            right_rank[code as usize] = seen[s];
            seen[s] += 1;
        }

        let mut left_start = vec![u32::MAX; pow3(left_sites) as usize];
        for (idx, &code) in states.iter().enumerate() {
            let left = (code / right_base) as usize;
            if left_start[left] == u32::MAX {
                left_start[left] = idx as u32;
            }
        }

        let site_weights = (0..length).map(|site| pow3(length - 1 - site)).collect();

        Ok(Self {
            length,
            sz_total,
            states,
            right_base,
            left_start,
            right_rank,
            site_weights,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn sz_total(&self) -> i32 {
        self.sz_total
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Configuration codes in ascending order.
    pub fn states(&self) -> &[u32] {
        &self.states
    }

    /// Position of `code` in the basis, if it belongs to the sector.
    pub fn index_of(&self, code: u32) -> Option<usize> {
        if code >= pow3(self.length) {
            return None;
        }
        let digits_sum: u32 = trit_sum(code, self.length);
        if digits_sum as i32 != self.sz_total + self.length as i32 {
            return None;
        }
        Some(self.rank(code))
    }

    #[inline]
    pub(crate) fn rank(&self, code: u32) -> usize {
        let left = (code / self.right_base) as usize;
        let right = (code % self.right_base) as usize;
        (self.left_start[left] + self.right_rank[right]) as usize
    }

    /// Weight `3^(L-1-site)` of a site's trit in the packed code.
    #[inline]
    pub(crate) fn weight(&self, site: usize) -> u32 {
        self.site_weights[site]
    }

    /// Trit of `site` in `code`.
    #[inline]
    pub fn trit(&self, code: u32, site: usize) -> u32 {
        (code / self.site_weights[site]) % 3
    }

    /// Unpacks `code` into per-site trits.
    #[inline]
    pub(crate) fn unpack(&self, mut code: u32, out: &mut [u32]) {
        for site in (0..self.length).rev() {
            out[site] = code % 3;
            code /= 3;
        }
    }

    /// Packs local magnetizations `m ∈ {-1, 0, 1}` into a code.
    pub fn encode(&self, config: &[i8]) -> Result<u32> {
        if config.len() != self.length {
            return Err(Error::Dimension(format!(
                "configuration has {} sites, basis has {}",
                config.len(),
                self.length
            )));
        }
        let mut code = 0u32;
        for &m in config {
            if !(-1..=1).contains(&m) {
                return Err(Error::Domain(format!("local magnetization {m} is not spin-1")));
            }
            code = code * 3 + (m + 1) as u32;
        }
        Ok(code)
    }

    /// Local magnetizations of the `index`-th basis state.
    pub fn configuration(&self, index: usize) -> Vec<i8> {
        let code = self.states[index];
        (0..self.length)
            .map(|site| trit_to_m(self.trit(code, site)) as i8)
            .collect()
    }

    fn same_sector(&self, other: &SectorBasis) -> bool {
        self.length == other.length && self.sz_total == other.sz_total
    }
}

fn trit_sum(mut code: u32, sites: usize) -> u32 {
    let mut s = 0;
    for _ in 0..sites {
        s += code % 3;
        code /= 3;
    }
    s
}

// Depth-first enumeration, ascending trits at each site, so codes come out sorted.
fn enumerate(length: usize, target: u32, site: usize, prefix: u32, out: &mut Vec<u32>) {
    if site == length {
        if target == 0 {
            out.push(prefix);
        }
        return;
    }
    let remaining = (length - site - 1) as u32;
    for t in 0..3u32 {
        if t > target {
            break;
        }
        if target - t <= 2 * remaining {
            enumerate(length, target - t, site + 1, prefix * 3 + t, out);
        }
    }
}

/// Builds the sector basis with fixed total magnetization.
pub fn build_sector_basis(length: usize, sz_total: i32) -> Result<SectorBasis> {
    SectorBasis::new(length, sz_total)
}

/// Real amplitudes over a sector basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<SectorBasis>,
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn new(basis: Arc<SectorBasis>, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for a basis of dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn zeros(basis: Arc<SectorBasis>) -> Self {
        let n = basis.dim();
        Self {
            basis,
            amplitudes: vec![0.0; n],
        }
    }

    /// The product state with the given local magnetizations.
    pub fn from_configuration(basis: Arc<SectorBasis>, config: &[i8]) -> Result<Self> {
        let code = basis.encode(config)?;
        let index = basis.index_of(code).ok_or_else(|| {
            Error::Dimension(format!(
                "configuration {config:?} is outside sector sz_total = {}",
                basis.sz_total()
            ))
        })?;
        let mut state = Self::zeros(basis);
        state.amplitudes[index] = 1.0;
        Ok(state)
    }

    /// Normalized vector with uniform random entries, deterministic in `seed`.
    pub fn random(basis: Arc<SectorBasis>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amplitudes = (0..basis.dim())
            .map(|_| rng.random::<f64>() - 0.5)
            .collect();
        let mut v = Self { basis, amplitudes };
        v.normalize();
        v
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [f64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        dot(&self.amplitudes, &self.amplitudes).sqrt()
    }

    /// Scales to unit norm; returns the norm before scaling.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        }
        n
    }

    pub fn dot(&self, other: &StateVector) -> Result<f64> {
        self.check_same_sector(other.basis())?;
        Ok(dot(&self.amplitudes, &other.amplitudes))
    }

    pub(crate) fn check_same_sector(&self, basis: &SectorBasis) -> Result<()> {
        if !self.basis.same_sector(basis) || self.amplitudes.len() != basis.dim() {
            return Err(Error::Dimension(format!(
                "state lives in (L = {}, sz = {}), expected (L = {}, sz = {})",
                self.basis.length(),
                self.basis.sz_total(),
                basis.length(),
                basis.sz_total()
            )));
        }
        Ok(())
    }

    pub(crate) fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization(n));
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Single-site ladder amplitude `<m+1| S⁺ |m>` for spin 1.
#[inline]
pub(crate) fn raise_amplitude(m: i32) -> f64 {
    ((2 - m * (m + 1)) as f64).sqrt()
}

/// Single-site ladder amplitude `<m-1| S⁻ |m>` for spin 1.
#[inline]
pub(crate) fn lower_amplitude(m: i32) -> f64 {
    ((2 - m * (m - 1)) as f64).sqrt()
}

/// Matrix of `S_i·S_j` on the two-site basis `3·t_i + t_j`.
pub fn heisenberg_bond() -> [[f64; 9]; 9] {
    let mut b = [[0.0; 9]; 9];
    for ti in 0..3u32 {
        for tj in 0..3u32 {
            let (mi, mj) = (trit_to_m(ti), trit_to_m(tj));
            let col = (3 * ti + tj) as usize;
            b[col][col] += (mi * mj) as f64;
            // S⁺_i S⁻_j / 2
            if mi < 1 && mj > -1 {
                let row = (3 * (ti + 1) + (tj - 1)) as usize;
                b[row][col] += 0.5 * raise_amplitude(mi) * lower_amplitude(mj);
            }
            // S⁻_i S⁺_j / 2
            if mi > -1 && mj < 1 {
                let row = (3 * (ti - 1) + (tj + 1)) as usize;
                b[row][col] += 0.5 * lower_amplitude(mi) * raise_amplitude(mj);
            }
        }
    }
    b
}

/// Matrix of `cos θ S·S + sin θ (S·S)²` on the two-site basis.
pub fn bond_matrix(theta: f64) -> [[f64; 9]; 9] {
    let b = heisenberg_bond();
    let (s, c) = theta.sin_cos();
    let mut h = [[0.0; 9]; 9];
    for r in 0..9 {
        for col in 0..9 {
            let sq: f64 = (0..9).map(|k| b[r][k] * b[k][col]).sum();
            h[r][col] = c * b[r][col] + s * sq;
        }
    }
    h
}

/// Nonzero entries of a bond matrix, grouped by the column (input pair).
#[derive(Debug, Clone)]
pub(crate) struct BondTable {
    entries: [Vec<(u32, f64)>; 9],
}

impl BondTable {
    pub(crate) fn new(matrix: &[[f64; 9]; 9]) -> Self {
        let entries = std::array::from_fn(|col| {
            (0..9)
                .filter(|&row| matrix[row][col].abs() > 1e-14)
                .map(|row| (row as u32, matrix[row][col]))
                .collect()
        });
        Self { entries }
    }

    #[inline]
    pub(crate) fn column(&self, pair: u32) -> &[(u32, f64)] {
        &self.entries[pair as usize]
    }
}

/// Code reached by replacing the trits of sites `(i, j)` with the pair `to`.
#[inline]
pub(crate) fn replace_pair(
    basis: &SectorBasis,
    code: u32,
    (i, j): (usize, usize),
    (ti, tj): (u32, u32),
    to: u32,
) -> u32 {
    let (ni, nj) = (to / 3, to % 3);
    let delta = (ni as i64 - ti as i64) * basis.weight(i) as i64
        + (nj as i64 - tj as i64) * basis.weight(j) as i64;
    (code as i64 + delta) as u32
}

/// Matrix-free `H·v` for the bilinear-biquadratic chain.
///
/// Each output amplitude gathers contributions bond by bond from the
/// precomputed 9×9 bond matrix, so the result is deterministic.
pub fn apply_hamiltonian(p: &ModelParams, v: &StateVector) -> Result<StateVector> {
    let basis = v.basis();
    if basis.length() != p.length {
        return Err(Error::Dimension(format!(
            "model has {} sites, state has {}",
            p.length,
            basis.length()
        )));
    }
    let op = HamiltonianOperator::new(p, basis.clone());
    let mut out = vec![0.0; basis.dim()];
    op.apply(v.amplitudes(), &mut out);
    StateVector::new(basis.clone(), out)
}

/// The Hamiltonian restricted to one sector, reusable across many products.
#[derive(Debug, Clone)]
pub(crate) struct HamiltonianOperator {
    basis: Arc<SectorBasis>,
    bonds: Vec<(usize, usize)>,
    table: BondTable,
    j_scale: f64,
}

impl HamiltonianOperator {
    pub(crate) fn new(p: &ModelParams, basis: Arc<SectorBasis>) -> Self {
        Self {
            basis,
            bonds: p.bonds(),
            table: BondTable::new(&bond_matrix(p.theta)),
            j_scale: p.j_scale,
        }
    }

    pub(crate) fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub(crate) fn apply(&self, x: &[f64], y: &mut [f64]) {
        let basis = &*self.basis;
        let mut trits = [0u32; MAX_LENGTH];
        for (k, &code) in basis.states().iter().enumerate() {
            basis.unpack(code, &mut trits[..basis.length()]);
            let mut acc = 0.0;
            for &(i, j) in &self.bonds {
                let (ti, tj) = (trits[i], trits[j]);
                let pair = 3 * ti + tj;
                for &(to, value) in self.table.column(pair) {
                    let amp = if to == pair {
                        x[k]
                    } else {
                        x[basis.rank(replace_pair(basis, code, (i, j), (ti, tj), to))]
                    };
                    acc += value * amp;
                }
            }
            y[k] = self.j_scale * acc;
        }
    }
}

/// `(Σ_n S_zn)·v`, diagonal in every sector.
pub fn total_sz_apply(v: &StateVector) -> StateVector {
    let s = v.basis().sz_total() as f64;
    let amplitudes = v.amplitudes().iter().map(|a| s * a).collect();
    StateVector {
        basis: v.basis().clone(),
        amplitudes,
    }
}
