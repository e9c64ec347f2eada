//! Time integration: explicit, implicit and spatially partitioned
//! modified-equation schemes with upwind dissipation.

pub mod config;
pub mod convergence;
pub mod linear;
pub mod overset;
pub mod periodic;

pub use config::{DissipationMode, SchemeCase, SchemeConfig, TimeMode};
pub use convergence::{run_convergence, simulate_standing_mode, ConvergenceRecord, RunRecord};
pub use linear::{solve_implicit, LinearSolver};
pub use overset::{advance_spie, apply_constraints, first_step, FieldState, FirstStepTerms, OversetStepper};
pub use periodic::PeriodicStepper;
