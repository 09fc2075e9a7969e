use thiserror::Error;

/// Errors raised by the verification kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("site {site} is not part of the graph ({n_sites} sites)")]
    UnknownSite { site: usize, n_sites: usize },

    #[error("invalid F-function: {0}")]
    InvalidFFunction(String),

    #[error("embedding error: {0}")]
    Embedding(String),

    #[error("algebra error: {0}")]
    Algebra(String),

    #[error("schedule error: {0}")]
    Schedule(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("capacity exceeded: {qubits} qubits requested, cap is {cap}")]
    Capacity { qubits: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integration did not converge: {0}")]
    Integration(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("bound form not applicable: {0}")]
    Form(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("gap closes at s = {s}: gap {gap:.6e} below floor {floor:.6e}")]
    GapClosing { s: f64, gap: f64, floor: f64 },

    #[error("linear algebra failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
