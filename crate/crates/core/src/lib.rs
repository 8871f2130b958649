//! Collective neutrino oscillations on qubits: Hamiltonians, exact and
//! Trotterized evolution, and circuits for one-qubit-per-neutrino, Dicke
//! register and antidiagonal-subspace encodings.

pub mod circuit;
pub mod encoders;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod observables;
pub mod physics;
pub mod scenario;
pub mod state;

pub use error::{Error, Result};
