//! Ground states per magnetization sector and across the whole chain.

use std::sync::Arc;

use crate::dense;
use crate::error::{Error, Result};
use crate::hilbert::{HamiltonianOperator, SectorBasis, StateVector};
use crate::lanczos::{lowest_pair, LanczosParams};
use crate::model::ModelParams;

/// Largest chain accepted by [`dense_spectrum`].
pub const DENSE_MAX_LENGTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Lowest eigenpairs requested per sector; the first excitation above
    /// the ground multiplet is always sought on top of these.
    pub n_eigenvalues: usize,
    pub reorthogonalize: bool,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: 1e-10,
            n_eigenvalues: 2,
            reorthogonalize: true,
            seed: 0x5eed,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.n_eigenvalues == 0 {
            return Err(Error::Domain("n_eigenvalues must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Domain("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Eigenvalues closer than this to the minimum count as degenerate.
pub fn degeneracy_window(e0: f64) -> f64 {
    1e-8 * e0.abs().max(1.0)
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub energy: f64,
    pub state: StateVector,
    pub residual: f64,
    pub iterations: usize,
    pub ritz_history: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct GroundStateReport {
    pub energy: f64,
    pub state: StateVector,
    /// `sz_total` of the returned state.
    pub sector: i32,
    pub degeneracy: usize,
    pub residual: f64,
    /// Largest `|sz_total|` reached by the degenerate ground multiplet.
    pub multiplet_extent: i32,
    /// Ground state in sector `+multiplet_extent`, when that differs from `sector`.
    pub extreme_state: Option<StateVector>,
    /// Lowest eigenvalues found in the returned sector, ascending.
    pub sector_spectrum: Vec<f64>,
    /// Distance from the ground energy to the first level above the degeneracy window.
    pub gap: Option<f64>,
}

impl GroundStateReport {
    /// State that maximizes the net magnetization within the ground multiplet.
    pub fn polarized_member(&self) -> &StateVector {
        self.extreme_state.as_ref().unwrap_or(&self.state)
    }
}

/// When deflation in a sector may stop, beyond the requested pair count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Stop as soon as enough pairs are known.
    Count,
    /// Continue until a pair above this energy has been found.
    Above(f64),
    /// Continue until a pair leaves the degeneracy window of the first one.
    AboveGroundWindow,
}

/// Lowest eigenpairs of one sector, found by successive deflation.
///
/// Stops once at least `min_count` pairs are known and `stop` is satisfied.
/// Fewer pairs come back only when the sector is exhausted.
pub fn sector_eigenpairs(
    p: &ModelParams,
    basis: Arc<SectorBasis>,
    opts: &SolverOptions,
    min_count: usize,
    stop: StopRule,
) -> Result<Vec<Eigenpair>> {
    p.validate()?;
    opts.validate()?;
    if basis.length() != p.length {
        return Err(Error::Dimension(format!(
            "model has {} sites, basis has {}",
            p.length,
            basis.length()
        )));
    }
    let op = HamiltonianOperator::new(p, basis.clone());
    let dim = basis.dim();
    let mut locked: Vec<Vec<f64>> = Vec::new();
    let mut pairs: Vec<Eigenpair> = Vec::new();

    loop {
        let enough = pairs.len() >= min_count;
        let threshold = match stop {
            StopRule::Count => None,
            StopRule::Above(t) => Some(t),
            StopRule::AboveGroundWindow => pairs
                .first()
                .map(|g| g.energy + degeneracy_window(g.energy)),
        };
        let above = match (threshold, pairs.last()) {
            (None, _) => stop == StopRule::Count,
            (Some(t), Some(last)) => last.energy > t,
            (Some(_), None) => false,
        };
        if enough && above {
            break;
        }
        let params = LanczosParams {
            max_iterations: opts.max_iterations,
            tolerance: opts.tolerance,
            reorthogonalize: opts.reorthogonalize,
            seed: opts
                .seed
                .wrapping_add(pairs.len() as u64)
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                ^ (basis.sz_total() as i64 as u64),
        };
        let found = lowest_pair(|x, y| op.apply(x, y), dim, &locked, &params)?;
        let Some(out) = found else { break };
        locked.push(out.vector.clone());
        pairs.push(Eigenpair {
            energy: out.value,
            state: StateVector::new(op.basis().clone(), out.vector)?,
            residual: out.residual,
            iterations: out.iterations,
            ritz_history: out.ritz_history,
        });
    }
    // Deflation yields ascending values up to solver accuracy.
    pairs.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(pairs)
}

/// Lowest eigenpair of the sector `sz_total`, with its in-sector degeneracy and gap.
pub fn ground_state_sector(
    p: &ModelParams,
    sz_total: i32,
    opts: &SolverOptions,
) -> Result<GroundStateReport> {
    let basis = Arc::new(SectorBasis::new(p.length, sz_total)?);
    let pairs = sector_eigenpairs(
        p,
        basis,
        opts,
        opts.n_eigenvalues,
        StopRule::AboveGroundWindow,
    )?;
    Ok(report_from_sector(sz_total, pairs))
}

fn report_from_sector(sz_total: i32, mut pairs: Vec<Eigenpair>) -> GroundStateReport {
    let e0 = pairs[0].energy;
    let threshold = e0 + degeneracy_window(e0);
    let degeneracy = pairs.iter().filter(|x| x.energy <= threshold).count();
    let gap = pairs
        .iter()
        .find(|x| x.energy > threshold)
        .map(|x| x.energy - e0);
    let sector_spectrum = pairs.iter().map(|x| x.energy).collect();
    let ground = pairs.swap_remove(0);
    GroundStateReport {
        energy: ground.energy,
        residual: ground.residual,
        state: ground.state,
        sector: sz_total,
        degeneracy,
        multiplet_extent: sz_total.abs(),
        extreme_state: None,
        sector_spectrum,
        gap,
    }
}

/// Global ground state.
///
/// The Hamiltonian is SU(2) invariant, so every multiplet has a member in
/// the `sz_total = 0` sector and the lowest energy of sector `m` cannot
/// decrease with `|m|`. Sectors `m = 1, 2, …` are scanned only while they
/// still reach the ground energy; each contributes twice (`±m`). The
/// returned state is the `sz_total = 0` member.
pub fn ground_state_global(p: &ModelParams, opts: &SolverOptions) -> Result<GroundStateReport> {
    let mut report = ground_state_sector(p, 0, opts)?;
    let e0 = report.energy;
    let threshold = e0 + degeneracy_window(e0);

    for m in 1..=p.length as i32 {
        let basis = Arc::new(SectorBasis::new(p.length, m)?);
        let pairs = sector_eigenpairs(p, basis, opts, 1, StopRule::Above(threshold))?;
        let in_window: Vec<&Eigenpair> = pairs.iter().filter(|x| x.energy <= threshold).collect();
        if in_window.is_empty() {
            break;
        }
        report.degeneracy += 2 * in_window.len();
        report.multiplet_extent = m;
        report.extreme_state = Some(in_window[0].state.clone());
    }
    Ok(report)
}

/// All `3^L` eigenvalues in ascending order, from a dense Kronecker-product
/// Hamiltonian.
pub fn dense_spectrum(p: &ModelParams) -> Result<Vec<f64>> {
    p.validate()?;
    if p.length > DENSE_MAX_LENGTH {
        return Err(Error::SizeGuard(format!(
            "dense diagonalization needs L <= {DENSE_MAX_LENGTH}, got {}",
            p.length
        )));
    }
    let h = dense::hamiltonian(p);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}
