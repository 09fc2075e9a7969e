//! Dense-matrix size limit.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_QUBITS: usize = 12;

/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "QLL_MAX_QUBITS";

pub fn max_qubits() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

/// Rejects Hilbert spaces larger than `2^max_qubits`.
pub fn check_dim(dim: usize) -> Result<()> {
    let cap = max_qubits();
    let qubits = (dim as f64).log2().ceil() as usize;
    if qubits > cap {
        return Err(Error::Capacity { qubits, cap });
    }
    Ok(())
}
