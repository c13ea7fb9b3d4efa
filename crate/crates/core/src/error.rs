use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The truncation window is too small for the requested Hamiltonian.
    #[error("truncation M = {truncation} is too small for sideband order k = {k} (need M >= {required})")]
    Truncation {
        truncation: usize,
        k: usize,
        required: usize,
    },

    /// Population that a raising map would push past the top Fock level.
    #[error("truncation leakage: population {population:.3e} in the top {levels} Fock level(s)")]
    TruncationLeakage { population: f64, levels: usize },

    #[error("truncation did not converge below {tolerance:.1e} (top-level population {population:.3e} at M = {truncation})")]
    TruncationNotConverged {
        truncation: usize,
        population: f64,
        tolerance: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no pulse duration reaches objective floor {floor} for eta = {eta} (best {best:.6} at omega*t = {omega_t1:.4})")]
    NoSolution {
        eta: f64,
        best: f64,
        omega_t1: f64,
        floor: f64,
    },

    /// At eta = 1 the |1> carrier frequency vanishes and c34 can never reach 1.
    #[error("degenerate Lamb-Dicke parameter eta = {eta}: Omega_(1,0) vanishes")]
    DegenerateEta { eta: f64 },

    #[error("operator is not unitary (max |U^dag U - I| = {defect:.3e})")]
    NonUnitary { defect: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
