//! Two memories in series: the first memory's exit field drives the second.

use crate::analysis::{chirp_estimate, complex_overlap, envelope_match, ChirpOptions, RunReport};
use crate::error::{GemError, Result};
use crate::model::{GridSpec, MediumParams, Protocol, PulseSpec, SampledEnvelope};
use crate::scalar::C;
use crate::solver::{MbSolver, SolverOptions, SpaceTimeField};

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeRun {
    pub stage1: SpaceTimeField<f64>,
    pub stage2: SpaceTimeField<f64>,
    pub report1: RunReport,
    /// Second stage measured against its own input (the first stage's output).
    pub report2: RunReport,
    /// Echo frequency at the peak after one memory.
    pub single_chirp: f64,
    /// Echo frequency at the peak after both memories.
    pub residual_chirp: f64,
    /// Forward-time envelope match of the final echo against the original input.
    pub end_to_end_fidelity: f64,
    pub end_to_end_delay: f64,
    /// `|overlap|` of the final echo with the input delayed by `end_to_end_delay`.
    pub phase_overlap: f64,
    /// Final echo energy over the original input energy.
    pub end_to_end_efficiency: f64,
}

fn echo_only(h: &SpaceTimeField<f64>, after: f64) -> Vec<C<f64>> {
    h.times.iter().zip(&h.output).map(|(&t, &e)| if t > after { e } else { C::new(0.0, 0.0) }).collect()
}

pub fn run_cascade(
    medium: &MediumParams<f64>,
    pulse: &PulseSpec<f64>,
    protocol: &Protocol<f64>,
    grid: &GridSpec<f64>,
    options: SolverOptions,
) -> Result<CascadeRun> {
    let stage = protocol
        .cascade
        .clone()
        .ok_or_else(|| GemError::invalid("cascade.enabled", "protocol has no second stage"))?;
    let flip1 = protocol
        .first_flip()
        .ok_or_else(|| GemError::invalid("protocol.flips", "cascade needs a first-stage flip"))?;
    let first = Protocol { cascade: None, ..protocol.clone() };
    let h1 = MbSolver::with_options(medium.clone(), pulse.clone(), first, grid.clone(), options)?.run()?;
    let env = SampledEnvelope::new(h1.times.clone(), h1.output.clone())?;
    let pulse2 = PulseSpec::sampled(env, pulse.duration);
    let grid2 = GridSpec { t_end: stage.t_end, ..grid.clone() };
    let second = Protocol { flip_times: vec![stage.flip_time], direction: stage.direction, cascade: None };
    let h2 = MbSolver::with_options(medium.clone(), pulse2, second, grid2, options)?.run()?;

    let report1 = RunReport::from_history(&h1)?;
    let report2 = RunReport::from_history(&h2)?;
    let opts = ChirpOptions::default();
    let single_chirp = chirp_estimate(&h1.times, &echo_only(&h1, flip1), opts)?.frequency;
    let final_echo = echo_only(&h2, stage.flip_time);
    let residual_chirp = chirp_estimate(&h2.times, &final_echo, opts)?.frequency;
    let input = pulse.sample(&h2.times);
    let m = envelope_match(&h2.times, &final_echo, &input)?;
    let delay = 2.0 * (stage.flip_time - flip1);
    let shifted: Vec<C<f64>> = h2.times.iter().map(|&t| pulse.value_at(t - delay)).collect();
    let overlap = complex_overlap(&final_echo, &shifted)?.norm();
    let e_in = crate::analysis::intensity_integral(&h2.times, &input, h2.times[0], f64::INFINITY);
    let e_out = crate::analysis::intensity_integral(&h2.times, &final_echo, h2.times[0], f64::INFINITY);
    Ok(CascadeRun {
        report1,
        report2,
        single_chirp,
        residual_chirp,
        end_to_end_fidelity: m.value,
        end_to_end_delay: m.lag,
        phase_overlap: overlap,
        end_to_end_efficiency: e_out / e_in,
        stage1: h1,
        stage2: h2,
    })
}
