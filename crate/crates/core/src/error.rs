use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("sector sz_total = {sz_total} is empty for a chain of length {length}")]
    EmptySector { length: usize, sz_total: i32 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("Lanczos did not converge after {iterations} iterations (best residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("state is not normalized (norm = {0})")]
    Normalization(f64),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("nonzero magnetization: |<S_z>| = {value:e} at site {site}")]
    Magnetization { site: usize, value: f64 },

    #[error("correlation set lacks transverse (x, y) correlators")]
    IncompleteInput,

    #[error("size guard: {0}")]
    SizeGuard(String),
}

pub type Result<T> = std::result::Result<T, Error>;
