//! Side-by-side comparison of solver histories with the closed-form oracle.

use crate::analysis::{envelope_fidelity, spatial_spectrum, time_spectrum, Spectrum};
use crate::error::{GemError, Result};
use crate::model::{GridSpec, MediumParams, Protocol, PulseSpec};
use crate::oracle::{flip_time_field, output_map, transfer_at};
use crate::scalar::C;
use crate::solver::{MbSolver, SolverOptions, SpaceTimeField};

/// Cosine similarity of two non-negative profiles.
pub fn profile_correlation(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na > 0.0 && nb > 0.0 {
        dot / (na * nb)
    } else {
        f64::NAN
    }
}

/// Solver echo against the time-mirror map (passthrough when `β = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct EchoComparison {
    pub times: Vec<f64>,
    pub solver: Vec<C<f64>>,
    /// Oracle prediction in the solver's phase frame.
    pub oracle: Vec<C<f64>>,
    /// RMS of `|E_solver| - |E_oracle|` over the compared window, relative to the oracle peak.
    pub rms: f64,
    pub correlation: f64,
    pub fidelity: f64,
}

pub fn compare_echo(history: &SpaceTimeField<f64>, pulse: &PulseSpec<f64>, beta: f64) -> Result<EchoComparison> {
    let (times, solver, oracle) = if beta == 0.0 {
        (history.times.clone(), history.output.clone(), pulse.sample(&history.times))
    } else {
        let flip = history
            .first_flip()
            .ok_or_else(|| GemError::UndefinedMetric("echo comparison needs a flip".into()))?;
        let idx: Vec<usize> = (0..history.times.len()).filter(|&k| history.times[k] > flip).collect();
        let times: Vec<f64> = idx.iter().map(|&k| history.times[k]).collect();
        let solver: Vec<C<f64>> = idx.iter().map(|&k| history.output[k]).collect();
        let pred = output_map(|t| pulse.value_at(t), beta, flip, &times)?;
        let oracle = pred.solver_frame(|t| pulse.value_at(t), flip);
        (times, solver, oracle)
    };
    let peak = oracle.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(peak > 0.0) || times.len() < 2 {
        return Err(GemError::UndefinedMetric("oracle prediction is silent on the compared window".into()));
    }
    let ss: f64 = solver.iter().zip(&oracle).map(|(s, o)| (s.norm() - o.norm()).powi(2)).sum();
    let rms = (ss / times.len() as f64).sqrt() / peak;
    let a: Vec<f64> = solver.iter().map(|v| v.norm()).collect();
    let b: Vec<f64> = oracle.iter().map(|v| v.norm()).collect();
    let correlation = profile_correlation(&a, &b);
    let fidelity = if beta == 0.0 {
        f64::NAN
    } else {
        let input = pulse.sample(&history.times);
        let echo: Vec<C<f64>> = history
            .times
            .iter()
            .zip(&history.output)
            .map(|(&t, &e)| if t > times[0] - 0.5 * history.dt { e } else { C::new(0.0, 0.0) })
            .collect();
        envelope_fidelity(&history.times, &echo, &input)?.value
    };
    Ok(EchoComparison { times, solver, oracle, rms, correlation, fidelity })
}

/// Exit-face transfer of a storage-only run against the closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferComparison {
    pub omega: Vec<f64>,
    pub solver: Vec<C<f64>>,
    pub oracle: Vec<C<f64>>,
    /// Frequencies used for the in-band metrics.
    pub in_band: Vec<bool>,
    /// Largest in-band `|ln|T_solver| - ln|T_oracle||`, relative to `max(|ln|T_oracle||, 1)`.
    pub log_error: f64,
    /// Mean in-band `ln|T_solver|`.
    pub mean_log_magnitude: f64,
}

/// Runs the storage stage without a flip and compares `E_out(ω) / E_in(ω)`
/// with the closed-form transfer at the exit face. The in-band region is
/// `|ω| <= band_fraction · η z0` where the input spectrum exceeds
/// `spectral_floor` of its peak.
pub fn compare_transfer(
    medium: &MediumParams<f64>,
    pulse: &PulseSpec<f64>,
    grid: &GridSpec<f64>,
    options: SolverOptions,
    band_fraction: f64,
    spectral_floor: f64,
) -> Result<TransferComparison> {
    let solver = MbSolver::with_options(medium.clone(), pulse.clone(), Protocol::storage_only(), grid.clone(), options)?;
    let h = solver.run()?;
    let n_fft = (2 * h.times.len()).next_power_of_two();
    let fin: Spectrum<f64> = time_spectrum(&h.times, &h.input, n_fft)?;
    let fout = time_spectrum(&h.times, &h.output, n_fft)?;
    let beta = medium.optical_depth();
    let band = medium.half_bandwidth();
    let peak = fin.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut omega = Vec::new();
    let mut ts = Vec::new();
    let mut to = Vec::new();
    let mut in_band = Vec::new();
    for ((&w, a), b) in fin.freq.iter().zip(&fin.values).zip(&fout.values) {
        if a.norm() < 1e-8 * peak {
            continue;
        }
        let oracle = match transfer_at(w, medium.z_half, beta, medium.eta, medium.z_half) {
            Ok(t) => t,
            Err(GemError::SingularGrid(_)) => continue,
            Err(e) => return Err(e),
        };
        omega.push(w);
        ts.push(*b / *a);
        to.push(oracle);
        in_band.push(w.abs() <= band_fraction * band && a.norm() >= spectral_floor * peak);
    }
    let mut log_error: f64 = 0.0;
    let mut sum = 0.0;
    let mut count = 0usize;
    for ((s, o), &inb) in ts.iter().zip(&to).zip(&in_band) {
        if !inb {
            continue;
        }
        let (ls, lo) = (s.norm().ln(), o.norm().ln());
        let scale = lo.abs().max(1.0);
        log_error = log_error.max((ls - lo).abs() / scale);
        sum += ls;
        count += 1;
    }
    if count == 0 {
        return Err(GemError::UndefinedMetric("no in-band frequencies above the spectral floor".into()));
    }
    Ok(TransferComparison { omega, solver: ts, oracle: to, in_band, log_error, mean_log_magnitude: sum / count as f64 })
}

/// Spatial spectrum of the stored field at the flip against the asymptotic closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct KSpaceComparison {
    pub k: Vec<f64>,
    pub solver: Vec<C<f64>>,
    pub oracle: Vec<C<f64>>,
    pub correlation: f64,
    pub valid: bool,
    pub warning: Option<String>,
}

pub fn compare_kspace(
    history: &SpaceTimeField<f64>,
    medium: &MediumParams<f64>,
    pulse: &PulseSpec<f64>,
    threshold: f64,
) -> Result<KSpaceComparison> {
    let snap = history
        .flip_snapshots
        .first()
        .ok_or_else(|| GemError::UndefinedMetric("no snapshot at a flip".into()))?;
    let n_fft = (8 * history.z_nodes.len()).next_power_of_two();
    let spectrum = spatial_spectrum(&history.z_nodes, &snap.field, n_fft)?;
    let k_max = medium.eta * (snap.t - history.times[0]);
    let keep: Vec<usize> = (0..spectrum.freq.len()).filter(|&i| spectrum.freq[i].abs() <= k_max && spectrum.freq[i] != 0.0).collect();
    let k: Vec<f64> = keep.iter().map(|&i| spectrum.freq[i]).collect();
    let solver: Vec<C<f64>> = keep.iter().map(|&i| spectrum.values[i]).collect();
    let field = flip_time_field(pulse, medium, snap.t, &k, threshold)?;
    let a: Vec<f64> = solver.iter().map(|v| v.norm()).collect();
    let b: Vec<f64> = field.values.iter().map(|v| v.norm()).collect();
    Ok(KSpaceComparison {
        correlation: profile_correlation(&a, &b),
        valid: field.is_valid(),
        warning: field.warning(),
        k,
        solver,
        oracle: field.values,
    })
}
