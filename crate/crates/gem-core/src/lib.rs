//! Gradient echo memory: Maxwell-Bloch solver, analytic oracle and analysis tools.

pub mod analysis;
pub mod cascade;
pub mod compare;
pub mod config;
pub mod error;
pub mod experiment;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod solver;

pub use error::{GemError, Result};
pub use scalar::{Scalar, C};

pub type Medium = model::MediumParams<f64>;
pub type Pulse = model::PulseSpec<f64>;
pub type Grid = model::GridSpec<f64>;
pub type Solver = solver::MbSolver<f64>;
pub type History = solver::SpaceTimeField<f64>;
