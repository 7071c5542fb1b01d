//! Domain types shared by the solver, the closed-form oracle and the analysis layer.

mod grid;
mod line;
mod medium;
mod protocol;
mod pulse;
mod scale;

pub use grid::GridSpec;
pub use line::{DetuningClasses, IntrinsicLineModel, LineShape};
pub use medium::{MediumParams, Orientation, StarkSign};
pub use protocol::{CascadeStage, FlipDirection, Protocol};
pub use pulse::{PulseShape, PulseSpec, SampledEnvelope};
pub use scale::{nondimensionalize, redimensionalize, ScaledSystem};
