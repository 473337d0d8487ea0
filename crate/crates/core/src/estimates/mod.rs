//! Numerical checks of the multilinear estimates: resonance algebra,
//! modulation integrals, kernel suprema, stationary-point geometry and the
//! well-posedness region.

pub mod config;
pub mod eta;
pub mod fit;
pub mod geometry;
pub mod kernels;
pub mod quadrature;
pub mod region;
pub mod resonance;
pub mod tau_integral;

pub use config::{EstimateConfig, Kernel};
pub use eta::{around_xi_integral, eta_integral_bound, AroundXi, EtaBound};
pub use fit::loglog_slope;
pub use geometry::{phase_profile, stationary_points, Branch, ModulationCase, ResonanceGeometry};
pub use kernels::{epsilon_trend, kernel_sup_scan, EpsilonTrend, KernelSample, ScanGrid, ScanResult};
pub use region::{region_boundary, region_membership, RegionVerdict};
pub use resonance::{check_resonance_identity, resonance_cubic, resonance_direct};
pub use tau_integral::{weighted_tau_integral, TauIntegral};
