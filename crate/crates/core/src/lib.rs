//! Multiport-network channel model for cascades of reconfigurable
//! intelligent surfaces (RIS).
//!
//! The crate is `no_std` (it needs `alloc`) and contains the pure numerical
//! pieces: dense complex matrices, the partitioned impedance matrix of the
//! transmitter / RIS / receiver network, the structured inverse of block
//! lower-bidiagonal matrices, the impedance and scattering-domain channel
//! expressions, the line-of-sight link sampler and the closed-form phase
//! optimizers together with their gain scaling laws.
//!
//! IO, parallel Monte Carlo and the command-line front end live in the
//! `multiris` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bidiagonal;
mod error;
pub mod los;
pub mod matrix;
pub mod montecarlo;
pub mod network;
pub mod optimize;
pub mod phase;
pub mod scattering;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, Lu, Tolerance, C64};
