use crate::analysis::balance::energy_balance;
use crate::analysis::chirp::{chirp_estimate, ChirpOptions};
use crate::analysis::fidelity::envelope_fidelity;
use crate::analysis::metrics::{efficiency, peak_time};
use crate::analysis::spectrum::{half_max_width, time_spectrum};
use crate::error::Result;
use crate::scalar::{Scalar, C};
use crate::solver::SpaceTimeField;

/// Summary metrics of one run. Metrics that are undefined for the run (for
/// example the chirp of a run without an echo) are `NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub input_energy: f64,
    pub transmitted_energy: f64,
    pub echo_energy: f64,
    pub efficiency: f64,
    pub transmission: f64,
    pub echo_peak_time: f64,
    pub envelope_fidelity: f64,
    pub fidelity_lag: f64,
    /// Instantaneous angular frequency of the echo at its peak.
    pub chirp_estimate: f64,
    pub energy_residual: f64,
    /// Echo peak time minus input peak time.
    pub storage_time: f64,
    /// Storage time in units of the input intensity FWHM.
    pub tbp_duration: f64,
    /// Storage time times the input's spectral intensity FWHM in cycles.
    pub tbp_bandwidth: f64,
    pub n_z: usize,
    pub n_steps: usize,
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
}

pub const REPORT_COLUMNS: [&str; 19] = [
    "input_energy",
    "transmitted_energy",
    "echo_energy",
    "efficiency",
    "transmission",
    "echo_peak_time",
    "envelope_fidelity",
    "fidelity_lag",
    "chirp_estimate",
    "energy_residual",
    "storage_time",
    "tbp_duration",
    "tbp_bandwidth",
    "n_z",
    "n_steps",
    "dt",
    "t_start",
    "t_end",
    "flip_time",
];

impl RunReport {
    pub fn csv_header() -> String {
        REPORT_COLUMNS.join(",")
    }

    /// Values in [`REPORT_COLUMNS`] order; floats use shortest round-trip formatting.
    pub fn csv_fields(&self, flip_time: f64) -> Vec<String> {
        let f = |x: f64| format!("{x:?}");
        vec![
            f(self.input_energy),
            f(self.transmitted_energy),
            f(self.echo_energy),
            f(self.efficiency),
            f(self.transmission),
            f(self.echo_peak_time),
            f(self.envelope_fidelity),
            f(self.fidelity_lag),
            f(self.chirp_estimate),
            f(self.energy_residual),
            f(self.storage_time),
            f(self.tbp_duration),
            f(self.tbp_bandwidth),
            self.n_z.to_string(),
            self.n_steps.to_string(),
            f(self.dt),
            f(self.t_start),
            f(self.t_end),
            f(flip_time),
        ]
    }

    /// Builds the report for a single-memory run; the echo is everything at
    /// `z0` after the first flip.
    pub fn from_history<F: Scalar>(history: &SpaceTimeField<F>) -> Result<RunReport> {
        let flip = history.first_flip().unwrap_or_else(F::infinity);
        let split = efficiency(history, flip)?;
        let times = &history.times;
        let zero = C::new(F::zero(), F::zero());
        let echo: Vec<C<F>> = times
            .iter()
            .zip(&history.output)
            .map(|(&t, &e)| if t > flip { e } else { zero })
            .collect();
        let lossy = |x: Option<F>| x.map_or(f64::NAN, |v| v.to_f64_lossy());
        let echo_peak = peak_time(times, &history.output, flip);
        let (fid, lag) = match envelope_fidelity(times, &echo, &history.input) {
            Ok(f) if split.echo_energy > F::zero() => (f.value.to_f64_lossy(), f.lag.to_f64_lossy()),
            _ => (f64::NAN, f64::NAN),
        };
        let chirp = lossy(chirp_estimate(times, &echo, ChirpOptions::default()).ok().map(|c| c.frequency));
        let residual = lossy(energy_balance(history).ok().map(|b| b.max_residual));
        let input_peak = peak_time(times, &history.input, F::neg_infinity());
        let storage = match (echo_peak, input_peak) {
            (Some(e), Some(i)) => (e - i).to_f64_lossy(),
            _ => f64::NAN,
        };
        let intensity: Vec<F> = history.input.iter().map(|v| v.norm_sqr()).collect();
        let duration = lossy(half_max_width(times, &intensity));
        let n_fft = (4 * times.len()).next_power_of_two();
        let bandwidth = lossy(
            time_spectrum(times, &history.input, n_fft)
                .ok()
                .and_then(|s| s.intensity_fwhm())
                .map(|w| w / (F::lit(2.0) * F::PI())),
        );
        let n = times.len();
        Ok(RunReport {
            input_energy: split.input_energy.to_f64_lossy(),
            transmitted_energy: split.transmitted_energy.to_f64_lossy(),
            echo_energy: split.echo_energy.to_f64_lossy(),
            efficiency: split.efficiency.to_f64_lossy(),
            transmission: split.transmission.to_f64_lossy(),
            echo_peak_time: lossy(echo_peak),
            envelope_fidelity: fid,
            fidelity_lag: lag,
            chirp_estimate: chirp,
            energy_residual: residual,
            storage_time: storage,
            tbp_duration: storage / duration,
            tbp_bandwidth: storage * bandwidth,
            n_z: history.z_nodes.len(),
            n_steps: n.saturating_sub(1),
            dt: history.dt.to_f64_lossy(),
            t_start: times[0].to_f64_lossy(),
            t_end: times[n - 1].to_f64_lossy(),
        })
    }
}
