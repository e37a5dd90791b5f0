//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// Largest Hilbert space dimension accepted by default.
pub const DEFAULT_MAX_DIM: usize = 16;

/// Eigenvalues closer than this to 0 or 1 are snapped onto the endpoint.
pub const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Hermiticity check on raw entries.
    pub herm: f64,
    /// Eigenvalue slack outside [0, 1] and general spectral identities.
    pub eig: f64,
    /// Reconstruction `V diag(λ) V†` against the input.
    pub recon: f64,
    /// Orthonormality of eigenvectors.
    pub ortho: f64,
    /// Trace of a state.
    pub trace: f64,
    /// Spectrum membership tests such as "1/2 is an eigenvalue".
    pub member: f64,
    pub max_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            eig: 1e-9,
            recon: 1e-9,
            ortho: 1e-10,
            trace: 1e-10,
            member: 1e-8,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl Tolerances {
    pub fn with_eig(mut self, eig: f64) -> Self {
        self.eig = eig;
        self
    }
}
