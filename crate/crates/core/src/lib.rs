//! Pseudospectral simulator and estimate lab for the one-dimensional quantum Zakharov system.

pub mod cli;
pub mod conservation;
pub mod error;
pub mod estimates;
pub mod limits;
pub mod spectral;
pub mod system;

pub use error::{QzError, Result};
