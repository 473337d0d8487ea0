//! Conserved quantities and local balance laws.

pub mod densities;
pub mod invariants;
pub mod residual;

pub use densities::{momentum_densities, Densities};
pub use invariants::{conservation_report, hamiltonian, mass, momentum, ConservationReport, HamiltonianTerms};
pub use residual::{hydrodynamic_residual, local_conservation_residual, ResidualReport};
