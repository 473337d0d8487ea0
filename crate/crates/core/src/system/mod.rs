//! Quantum Zakharov dynamics in split form.

pub mod checkpoint;
pub mod config;
pub mod initial;
pub mod linear;
pub mod nonlinear;
pub mod picard;
pub mod simulate;
pub mod state;
pub mod strang;

pub use config::{Integrator, SimConfig};
pub use initial::{initial_state, DensityProfile, EnvelopeProfile};
pub use linear::{free_evolve, LinearPropagator};
pub use nonlinear::{nonlinear_flow, nonlinear_rhs};
pub use picard::{picard_iterate, PicardReport};
pub use simulate::{simulate, simulate_partial, Trajectory};
pub use state::{split_state, unsplit_state, PrimalState, SplitState};
pub use strang::{step_strang, StrangStepper};
