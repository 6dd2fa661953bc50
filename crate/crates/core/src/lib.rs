//! Simulation core for cavity-mediated two-qubit logic between four-level
//! atoms sharing one dispersively detuned cavity mode.
//!
//! The crate is `no_std` (with `alloc`). Everything here is pure computation:
//!
//! - [`hilbert`]: composite space of N four-level atoms and a truncated Fock
//!   mode, basis ordering, states and dense operators.
//! - [`model`]: physical parameters, pulses, and all Hamiltonians (dispersive
//!   coupling, effective exchange, external drives, non-Hermitian decay).
//! - [`dynamics`]: fixed-step RK4 propagation plus closed-form oracles.
//! - [`protocol`]: the five-step C-Sign gate and its CNOT, Toffoli and Bell
//!   compositions.
//! - [`fidelity`]: damped three-amplitude gate-fidelity model.
//! - [`circuits`]: nearest-neighbour routing cost and exact circuit identities.
//!
//! Units: ħ = 1, rates in units of the atom-cavity coupling Ωc, time in 1/Ωc.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod circuits;
pub mod dynamics;
mod error;
pub mod fidelity;
pub mod gates;
pub mod hilbert;
pub mod model;
pub mod protocol;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
