//! Matrix stability of the overset schemes: stage matrices, compression to
//! the active unknowns, the companion eigenvalue problem and parameter sweeps.

mod compress;
mod spectrum;
mod stages;
mod sweep;
mod verify;

pub use compress::{compress, ThreeLevelUpdate};
pub use spectrum::{companion, quadratic_residual, quadratic_spectrum, spectrum, SpectrumReport, C64, RESIDUAL_LIMIT, TOL_A};
pub use stages::{assemble_stages, assemble_stages_with_dt, StageMatrices};
pub use sweep::{cell_spectrum, run_sweep, scheme_tag, GammaCount, SpotCheck, SweepOptions, SweepResult, SweepSummary};
pub use verify::{compare, verify_compression, DEFAULT_SEED};
