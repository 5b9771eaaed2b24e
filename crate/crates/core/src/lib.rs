//! Simulation toolkit for quantum Fourier transforms, Fourier sampling and the
//! abelian hidden subgroup problem, with exact verification of the associated
//! error bounds.

pub mod circuits;
pub mod constants;
pub mod dft;
pub mod error;
pub mod hsp;
pub mod qft_modn;
pub mod qft_pow2;
pub mod sampling;
pub mod statevector;
pub mod verify;

pub use error::{Error, Result};
