//! Stabilizer Rényi entropy of one- and two-qubit reduced states as a probe
//! of quantum criticality in spin chains.
//!
//! The crate provides two independent pipelines that meet at the same
//! observable:
//!
//! * an exact-diagonalization path (matrix-free spin Hamiltonians, Lanczos
//!   ground states, partial-trace reduced density matrices) for the
//!   transverse ANNNI chain and small compass chains, and
//! * a free-fermion path (momentum-space BdG blocks, real-space correlation
//!   matrices, Majorana covariance, Wick reconstruction of the pair RDM) for
//!   the transverse-field Ising chain and the one-dimensional quantum
//!   compass model at large sizes.
//!
//! On top of both sits a sweep/criticality layer: parameter sweeps of the
//! (purity-corrected) stabilizer Rényi entropy, central-difference
//! derivatives, sub-grid extremum refinement, and finite-size-scaling fits
//! of pseudo-critical points.

pub mod criticality;
pub mod eigensolver;
pub mod error;
pub mod freefermion;
pub mod hamiltonian;
pub mod magic;
pub mod pauli;
pub mod rdm;
pub mod stabilizers;

mod smalleig;

pub use error::{Error, Result};
