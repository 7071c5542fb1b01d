//! Praseodymium experiment scenario: two Stark orientations, a 30 kHz
//! Lorentzian antihole and a weak optical depth, on a microsecond clock.
//!
//! Times are in µs, frequencies in rad/µs and lengths in units of the half
//! sample length.

use crate::analysis::RunReport;
use crate::error::{GemError, Result};
use crate::model::{GridSpec, IntrinsicLineModel, MediumParams, Orientation, Protocol, PulseSpec, StarkSign};
use crate::solver::{MbSolver, SpaceTimeField};

/// Optical depth quoted for the sample.
pub const REPORTED_DEPTH: f64 = 0.006;
/// Effective depth reproducing 49% transmission (fitted).
pub const FITTED_DEPTH: f64 = 0.11353;
pub const INTRINSIC_KHZ: f64 = 30.0;
pub const BROADENING_RATIO: f64 = 200.0;
pub const FLIP_TIME: f64 = 3.7;
/// Gaussian intensity FWHM in µs (fitted).
pub const FITTED_DURATION: f64 = 0.25;
/// Pulse centre in µs (fitted).
pub const FITTED_CENTER: f64 = 2.4;

/// Angular FWHM in rad/µs of a line `khz` wide.
pub fn khz_to_angular(khz: f64) -> f64 {
    2.0 * std::f64::consts::PI * khz * 1e-3
}

/// Optional changes to the experiment defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentOverrides {
    pub optical_depth: Option<f64>,
    pub depth_factor: Option<f64>,
    pub single_orientation: bool,
    pub intrinsic_khz: Option<f64>,
    pub broadening_ratio: Option<f64>,
    /// Applied half-bandwidth `η z0` in rad/µs.
    pub half_bandwidth: Option<f64>,
    pub pulse_duration: Option<f64>,
    pub pulse_center: Option<f64>,
    pub flip_time: Option<f64>,
    pub gamma: Option<f64>,
    pub line_classes: Option<usize>,
    pub n_z: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentScenario {
    pub medium: MediumParams<f64>,
    pub pulse: PulseSpec<f64>,
    pub protocol: Protocol<f64>,
    pub grid: GridSpec<f64>,
    pub reported_depth: f64,
    pub intrinsic_khz: f64,
    /// `2 η z0 / intrinsic FWHM`; infinite for a delta line.
    pub broadening_ratio: f64,
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(GemError::invalid(name, "must be finite and > 0"))
    }
}

/// Fills every parameter from the defaults above and `o`.
///
/// The applied half-bandwidth stays at its default when only the intrinsic
/// width changes; setting the ratio together with the width fixes it from
/// both; setting all three must be consistent.
pub fn build_experiment(o: &ExperimentOverrides) -> Result<ExperimentScenario> {
    let intrinsic_khz = o.intrinsic_khz.unwrap_or(INTRINSIC_KHZ);
    if !(intrinsic_khz >= 0.0 && intrinsic_khz.is_finite()) {
        return Err(GemError::invalid("experiment.intrinsic_khz", "must be finite and >= 0"));
    }
    let width = khz_to_angular(intrinsic_khz);
    let default_band = BROADENING_RATIO * khz_to_angular(INTRINSIC_KHZ) / 2.0;
    let half_bandwidth = match (o.half_bandwidth, o.broadening_ratio) {
        (Some(hb), Some(r)) => {
            positive("experiment.half_bandwidth", hb)?;
            positive("experiment.broadening_ratio", r)?;
            if o.intrinsic_khz.is_some() && ((2.0 * hb / width) - r).abs() > 1e-6 * r {
                return Err(GemError::Contradictory(format!(
                    "experiment.broadening_ratio = {r} disagrees with half_bandwidth {hb} and intrinsic width {intrinsic_khz} kHz"
                )));
            }
            hb
        }
        (Some(hb), None) => positive("experiment.half_bandwidth", hb)?,
        (None, Some(r)) => {
            positive("experiment.broadening_ratio", r)?;
            if width == 0.0 {
                return Err(GemError::invalid("experiment.broadening_ratio", "undefined for a delta intrinsic line"));
            }
            r * width / 2.0
        }
        (None, None) => default_band,
    };
    let depth = o.optical_depth.unwrap_or(FITTED_DEPTH) * o.depth_factor.unwrap_or(1.0);
    if !(depth >= 0.0 && depth.is_finite()) {
        return Err(GemError::invalid("experiment.optical_depth", "must be finite and >= 0"));
    }
    let gamma = o.gamma.unwrap_or(0.0);
    let line = if intrinsic_khz == 0.0 {
        IntrinsicLineModel::delta()
    } else {
        IntrinsicLineModel::lorentzian(width, o.line_classes.unwrap_or(41))
    };
    let orientations = if o.single_orientation {
        vec![Orientation { sign: StarkSign::Positive, weight: 1.0 }]
    } else {
        vec![
            Orientation { sign: StarkSign::Positive, weight: 0.5 },
            Orientation { sign: StarkSign::Negative, weight: 0.5 },
        ]
    };
    let g = 1.0;
    let medium = MediumParams {
        g,
        density: depth * half_bandwidth / g,
        gamma,
        eta: half_bandwidth,
        z_half: 1.0,
        line,
        orientations,
    };
    medium.validate()?;
    let duration = positive("experiment.pulse_duration", o.pulse_duration.unwrap_or(FITTED_DURATION))?;
    let center = o.pulse_center.unwrap_or(FITTED_CENTER);
    let flip = o.flip_time.unwrap_or(FLIP_TIME);
    if !(center < flip) {
        return Err(GemError::invalid("experiment.pulse_center", "pulse must precede the flip"));
    }
    let pulse = PulseSpec::gaussian(duration, center);
    let t_end = o.t_end.unwrap_or(2.0 * flip - center + 4.0 * duration + 1.0);
    let grid = GridSpec {
        n_z: o.n_z.unwrap_or(401),
        dt: o.dt.unwrap_or(0.005),
        t_start: 0.0,
        t_end,
        store_stride: 20,
    };
    let protocol = Protocol::single_flip(flip);
    protocol.validate(&grid)?;
    Ok(ExperimentScenario {
        broadening_ratio: if width > 0.0 { 2.0 * half_bandwidth / width } else { f64::INFINITY },
        medium,
        pulse,
        protocol,
        grid,
        reported_depth: REPORTED_DEPTH,
        intrinsic_khz,
    })
}

/// Detected intensities `|E(z0, t)|²`, normalized to the reference peak.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub times: Vec<f64>,
    /// Medium bypassed (`g = 0`).
    pub reference: Vec<f64>,
    /// Transmitted part before the flip, echo after.
    pub signal: Vec<f64>,
    pub flip_time: f64,
    pub report: RunReport,
    pub history: SpaceTimeField<f64>,
}

pub fn run_experiment(scenario: &ExperimentScenario) -> Result<ExperimentRun> {
    let solver = MbSolver::new(
        scenario.medium.clone(),
        scenario.pulse.clone(),
        scenario.protocol.clone(),
        scenario.grid.clone(),
    )?;
    let mut bypass = scenario.medium.clone();
    bypass.g = 0.0;
    let reference = MbSolver::new(bypass, scenario.pulse.clone(), scenario.protocol.clone(), scenario.grid.clone())?;
    let (full, refh) = rayon::join(|| solver.run(), || reference.run());
    let (full, refh) = (full?, refh?);
    let report = RunReport::from_history(&full)?;
    let ref_int: Vec<f64> = refh.output.iter().map(|e| e.norm_sqr()).collect();
    let peak = ref_int.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(GemError::UndefinedMetric("reference pulse is silent".into()));
    }
    Ok(ExperimentRun {
        times: full.times.clone(),
        reference: ref_int.iter().map(|v| v / peak).collect(),
        signal: full.output.iter().map(|e| e.norm_sqr() / peak).collect(),
        flip_time: scenario.protocol.flip_times[0],
        report,
        history: full,
    })
}
