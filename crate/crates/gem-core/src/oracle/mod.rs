//! Closed-form input-output solution used as an independent check on the solver.

mod echo;
mod gamma;
mod kernel;
mod kspace;
mod transfer;

pub use echo::{cascade_map, echo_frequency, echo_phase, output_map, CascadePrediction, OutputPrediction};
pub use gamma::{complex_gamma, gamma_phase_ratio};
pub use kernel::{polarization_at, polarization_kernel};
pub use kspace::{broadening_ratio, flip_time_field, KSpaceField};
pub use transfer::{offset_frequency_grid, spectral_transfer, transfer_at, TransferEvaluation};
