//! Preparation, tomography, decoherence and quantumness measures for
//! two-qubit Bell-diagonal states.

pub mod circuit;
pub mod cli;
pub mod error;
pub mod measures;
pub mod noise;
pub mod qmath;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
