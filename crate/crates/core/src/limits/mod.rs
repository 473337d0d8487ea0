//! Limit equations and singular-limit experiments.

pub mod adiabatic;
pub mod experiment;
pub mod nls;

pub use adiabatic::adiabatic_density;
pub use experiment::{limit_experiment, LimitExperimentConfig, LimitRow};
pub use nls::{solve_nls_family, NlsVariant};
