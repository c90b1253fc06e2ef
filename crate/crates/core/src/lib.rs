//! Simulation of N trapped two-level ions coupled to one truncated
//! vibrational mode.
//!
//! Conditional displacements of the shared mode, played in a four-pulse
//! commutator loop, compose into nonlinear collective-spin unitaries that
//! are independent of the vibrational state. On top of that primitive the
//! crate builds one-axis-twisting cat states, the quantum kicked top with
//! its classical counterpart, binary measurement records through a readout
//! ion, and the Ising / controlled-phase two-qubit gates.
//!
//! Layout:
//! - [`linalg`]: dense complex kernels (matrix exponential, tensor
//!   products, phase-invariant distance).
//! - [`spin`]: collective and single-ion operators, rotations, coherent
//!   states, Husimi sampling, seeded z measurements.
//! - [`boson`]: truncated Fock mode, quadratures, displacements, leakage.
//! - [`pulse`]: conditional-displacement pulses, sequence composition, the
//!   commutator loop, vibrational factorization.
//! - [`protocols`]: cat states, kicked-top Floquet dynamics, readout
//!   records, two-qubit gates.
//! - [`classical`]: the classical kicked-top map and Lyapunov exponents.

pub mod boson;
pub mod classical;
pub mod error;
pub mod linalg;
pub mod protocols;
pub mod pulse;
pub mod spin;

pub use error::{Error, Result};
pub use linalg::{
    distance_up_to_global_phase, matrix_exponential, tensor_product, ComplexMatrix, StateVector,
};

pub use num_complex::Complex64;
