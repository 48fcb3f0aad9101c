//! Exact diagonalization of the spin-1 bilinear-biquadratic chain and the
//! light signals of quantum polarization spectroscopy.
//!
//! ```
//! use faraday::{correlations, ground_state_global, ModelParams, SolverOptions};
//!
//! let p = ModelParams::new(0.0, 6).unwrap();
//! let g = ground_state_global(&p, &SolverOptions::default()).unwrap();
//! assert!((g.energy + 7.370274969424612).abs() < 1e-9);
//! let c = correlations(&g.state).unwrap();
//! assert!(c.zz_connected[(0, 1)] < 0.0);
//! ```

pub mod dense;
pub mod error;
pub mod hilbert;
mod lanczos;
pub mod model;
pub mod observables;
pub mod solver;
pub mod spectroscopy;
pub mod witness;

#[cfg(feature = "testing")]
pub mod oracle;

pub use error::{Error, Result};
pub use hilbert::{
    apply_hamiltonian, bond_matrix, build_sector_basis, total_sz_apply, SectorBasis, StateVector,
    MAX_LENGTH,
};
pub use model::{
    aklt_theta, classify_phase, hubbard_to_spin, is_transition_point, Boundary, HubbardParams,
    ModelParams, PhaseLabel,
};
pub use observables::{
    bond_energy, correlations, correlations_with_transverse, dimer_order, string_order,
    structure_factor, CorrelationSet, StringConvention, TransverseMoments,
};
pub use solver::{
    degeneracy_window, dense_spectrum, ground_state_global, ground_state_sector,
    sector_eigenpairs, Eigenpair, GroundStateReport, SolverOptions, StopRule,
};
pub use spectroscopy::{
    c_epsilon, d_epsilon, delta_epsilon, delta_epsilon_kernel, epsilon, epsilon_alpha_averaged,
    epsilon_alpha_grid_average, epsilon_direct, mean_effective_jz, probe_coefficients,
    Normalization, ProbeConfig, SignalPoint,
};
pub use witness::{
    collective_variance, random_product_state, witness_scan, witness_value, ProductState,
    WitnessReport,
};
