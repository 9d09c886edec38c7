//! Simulation core for a capacitively coupled pair of quantum-dot molecules:
//! an optically active, vertically stacked double dot that emits
//! polarization-entangled photons, and a gate-defined triple dot serving as a
//! long-lived memory qubit.
//!
//! The crate is organized around four computational layers:
//!
//! - [`hubbard`] — tight-binding/Coulomb model of both molecules and the
//!   derived qubit-level coupling constants (exchange energies, mixing
//!   angles, the dipole-dipole ZZ coupling).
//! - [`register`] — explicit state-vector execution of the heralded
//!   entanglement-transfer protocol over the composite
//!   spin-qubit ⊗ photon ⊗ memory-qubit system, with full phase bookkeeping.
//! - [`interference`] — spatio-temporal two-photon interference and the
//!   resulting entanglement fidelity under detector timing jitter.
//! - [`noise`] + [`electrostatics`] — quasi-static error models with echo
//!   mitigation, and geometry-to-coupling estimation including a 1-D
//!   self-consistent band-profile solver.
//!
//! Internal unit conventions are fixed in [`units`]: energies in μeV,
//! lengths in nm, times in ps.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature is
//! enabled by default. All types are immutable values after construction and
//! all operations are pure, so concurrent read access is safe without
//! synchronization.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` guards are deliberate: they reject NaN where `x <= 0.0` would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod electrostatics;
pub(crate) mod fmath;
pub mod hubbard;
pub mod interference;
pub mod noise;
pub mod register;
pub mod units;

pub use num_complex::Complex64;
