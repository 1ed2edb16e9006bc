//! Hermitian embedding of N non-interacting PT-symmetric spin-1/2 systems.
//!
//! The crate builds the embedding operators (P, Q, η, H_PT, A, B, H_T),
//! simulates non-Hermitian dynamics by unitary evolution plus ancilla
//! post-selection, extracts the emergent q-body interaction coefficients,
//! and carries the central-spin / orthogonality-catastrophe analytics with an
//! O(N) evaluator for very large baths.
//!
//! ```
//! use ptembed::embedding::ModelParams;
//! use ptembed::{central_spin, dynamics};
//!
//! // two PT spins at alpha = 0.9, anisotropy axis along z
//! let params = ModelParams::from_alpha(2, 0.9, 0.0, 0.0).unwrap();
//!
//! // post-selected unitary evolution reproduces e^{-i H_PT t} exactly
//! let psi0 = dynamics::up_z_initial_state(&params).unwrap();
//! let records = dynamics::run_trajectory(&params, &psi0, &[0.0, 1.0, 3.0]).unwrap();
//! assert!(records.iter().all(|r| r.oracle_distance < 1e-9));
//!
//! // the two O(N) and dense overlap evaluators agree
//! let dense = central_spin::overlap_dense(&params).unwrap();
//! let binom = central_spin::overlap_binomial(&params);
//! assert!((dense.modulus_sq - binom.modulus_sq).abs() < 1e-10);
//! ```

pub mod central_spin;
pub mod cli;
pub mod dynamics;
pub mod embedding;
mod error;
pub mod linalg;
pub mod tol;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{PtError, Result};

/// Artifact version string used in CSV metadata and reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
