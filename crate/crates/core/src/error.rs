use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum PtError {
    #[error("matrix is not Hermitian: max deviation {0:.3e}")]
    NotHermitian(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e} below -{limit:.3e}")]
    NotPositive { eigenvalue: f64, limit: f64 },
    #[error("bad state length {len}: {reason}")]
    BadLength { len: usize, reason: &'static str },
    #[error("site index {site} out of range for {n_spins} spins")]
    BadSite { site: usize, n_spins: usize },
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("dense construction refused: N = {n_spins} exceeds cap {cap}")]
    CapExceeded { n_spins: usize, cap: usize },
    #[error("Q is numerically singular: min eigenvalue {0:.3e}")]
    SingularQ(f64),
    #[error("state is not PT-normalized: <psi|eta|psi> = {0:.6e}")]
    NotPTNormalized(f64),
    #[error("eigenlevel index {k} out of range (dim {dim})")]
    BadIndex { k: usize, dim: usize },
    #[error("no bracket: target {target} not crossed on the search interval for N = {n_spins}")]
    NoBracket { target: f64, n_spins: usize },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PtError>;
