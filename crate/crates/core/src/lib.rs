//! Anticoherence measures for pure spin-j states.
//!
//! A spin-j state is stored by its coefficients in the standard `|j, m>`
//! basis, ordered by ascending `m`. Through the Majorana correspondence the
//! state is also a symmetric state of `2j` spin-1/2 particles; its common
//! `t`-particle reduced density matrix `rho_t` is maximally mixed exactly
//! when the state is anticoherent to order `t`, and pure exactly when the
//! state is coherent. Every measure in [`measures`] is a function of the
//! spectrum of `rho_t` normalised to `[0, 1]`.
//!
//! Modules:
//!
//! - [`spin`]: states, spin operators, rotations, moments, total variance.
//! - [`majorana`]: conversion between states and Bloch-sphere point sets.
//! - [`reductions`]: `rho_t`, its spectrum and purity by three routes.
//! - [`measures`]: the variance, purity, Hilbert-Schmidt, trace and Bures
//!   measures.
//! - [`catalog`]: named states and the Coulomb (Thomson) states.
//! - [`search`]: numerical search for anticoherent states with degenerate
//!   Majorana points.

#![forbid(unsafe_code)]

pub mod bfgs;
pub mod catalog;
mod error;
pub mod linalg;
pub mod majorana;
pub mod measures;
pub mod reductions;
pub mod search;
pub mod spin;
pub mod thomson;

pub use error::{Error, Result};



pub use majorana::{points_to_state, state_to_points, BlochPoint, PointConfiguration};
pub use measures::{measure_profile, MeasureKind, MeasureProfile};
pub use reductions::{reduced_density, spectrum, ReducedDensity};
pub use spin::{Direction, SpinOperators, SpinQuantumNumber, SpinState};

pub use num_complex::Complex64;
