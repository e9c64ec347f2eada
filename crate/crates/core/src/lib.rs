//! Modified-equation time stepping for the second-order wave equation and
//! the tools to analyse its stability: Fourier symbols, GKS probes and
//! matrix stability on one-dimensional overset grids.

pub mod cli;
pub mod error;
pub mod grid;
pub mod matstab;
pub mod operators;
pub mod stepping;
pub mod symbols;

pub use error::{Error, Result};
pub use operators::Order;
