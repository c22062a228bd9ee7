//! Exact and semiclassical spectra of the two-mode Bose-Hubbard model.
//!
//! The many-particle side diagonalizes the tridiagonal number-basis
//! Hamiltonian. The semiclassical side works with the mean-field pendulum
//! Hamiltonian in the reduced momentum `p/hbar in [-(N+1), N+1]` and
//! quantizes its actions, including tunneling through the self-trapping
//! barrier.

pub mod action;
pub mod error;
pub mod meanfield;
pub mod params;
pub mod poly;
pub mod quadrature;
pub mod quantize;
pub mod quantum;
pub mod reference;
pub mod special;
pub mod wavefun;

pub use error::{Error, Result};
pub use params::ModelParams;
