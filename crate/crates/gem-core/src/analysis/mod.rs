//! Metrics extracted from simulation histories.

mod balance;
mod chirp;
mod fidelity;
mod metrics;
mod report;
mod spectrum;
mod sweep;

pub use balance::{energy_balance, EnergyBalance};
pub use chirp::{chirp_estimate, unwrap_phase, ChirpFit, ChirpOptions};
pub use fidelity::{complex_overlap, envelope_fidelity, envelope_match, EnvelopeFidelity};
pub use metrics::{centroid, efficiency, intensity_integral, peak_time, EnergySplit};
pub use report::{RunReport, REPORT_COLUMNS};
pub use spectrum::{half_max_width, spatial_spectrum, time_spectrum, Spectrum};
pub use sweep::{is_monotone, sweep, SweepRow};
