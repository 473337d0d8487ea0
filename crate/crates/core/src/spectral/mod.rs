//! Periodic Fourier infrastructure.

pub mod field;
pub mod grid;
pub mod norms;
pub mod symbols;

pub use field::FourierField;
pub use grid::{make_grid, SpectralGrid};
pub use norms::{bourgain_norm, sobolev_norm, Phase, SpaceTimeSamples};
pub use symbols::{apply_symbol, phi_eps, sqrt_phi_eps, DispersionSymbols, SymbolKind};
