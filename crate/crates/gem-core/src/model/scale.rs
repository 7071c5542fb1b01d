use crate::error::{GemError, Result};
use crate::model::grid::GridSpec;
use crate::model::medium::MediumParams;
use crate::model::protocol::{CascadeStage, Protocol};
use crate::model::pulse::{PulseShape, PulseSpec, SampledEnvelope};
use crate::scalar::Scalar;

/// A medium/pulse pair rescaled to `t_pulse = 1`, `z0 = 1`.
///
/// Rates are multiplied by `time_scale`, lengths divided by `length_scale`;
/// the optical depth and the broadening-to-bandwidth ratio are unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSystem<F> {
    pub medium: MediumParams<F>,
    pub pulse: PulseSpec<F>,
    pub time_scale: F,
    pub length_scale: F,
}

fn rescale_medium<F: Scalar>(m: &MediumParams<F>, t: F, l: F) -> MediumParams<F> {
    let mut line = m.line.clone();
    line.width = line.width * t;
    MediumParams {
        g: m.g * t,
        density: m.density * l,
        gamma: m.gamma * t,
        eta: m.eta * t * l,
        z_half: m.z_half / l,
        line,
        orientations: m.orientations.clone(),
    }
}

fn rescale_pulse<F: Scalar>(p: &PulseSpec<F>, t: F) -> Result<PulseSpec<F>> {
    let shape = match &p.shape {
        PulseShape::Sampled(env) => PulseShape::Sampled(SampledEnvelope::new(
            env.times().iter().map(|&x| x / t).collect(),
            env.values().to_vec(),
        )?),
        other => other.clone(),
    };
    Ok(PulseSpec {
        shape,
        duration: p.duration / t,
        amplitude: p.amplitude,
        center: p.center / t,
        carrier_offset: p.carrier_offset * t,
    })
}

pub fn nondimensionalize<F: Scalar>(params: &MediumParams<F>, pulse: &PulseSpec<F>) -> Result<ScaledSystem<F>> {
    if !(pulse.duration > F::zero() && pulse.duration.is_finite()) {
        return Err(GemError::invalid("pulse.duration", "cannot rescale with a zero duration"));
    }
    if !(params.z_half > F::zero() && params.z_half.is_finite()) {
        return Err(GemError::invalid("z_half", "cannot rescale with a zero half-length"));
    }
    let (t, l) = (pulse.duration, params.z_half);
    Ok(ScaledSystem {
        medium: rescale_medium(params, t, l),
        pulse: rescale_pulse(pulse, t)?,
        time_scale: t,
        length_scale: l,
    })
}

pub fn redimensionalize<F: Scalar>(scaled: &ScaledSystem<F>) -> Result<(MediumParams<F>, PulseSpec<F>)> {
    let (t, l) = (scaled.time_scale, scaled.length_scale);
    let inv_t = F::one() / t;
    Ok((
        rescale_medium(&scaled.medium, inv_t, F::one() / l),
        rescale_pulse(&scaled.pulse, inv_t)?,
    ))
}

impl<F: Scalar> ScaledSystem<F> {
    pub fn scale_grid(&self, grid: &GridSpec<F>) -> GridSpec<F> {
        let t = self.time_scale;
        GridSpec { dt: grid.dt / t, t_start: grid.t_start / t, t_end: grid.t_end / t, ..grid.clone() }
    }

    pub fn scale_protocol(&self, protocol: &Protocol<F>) -> Protocol<F> {
        let t = self.time_scale;
        Protocol {
            flip_times: protocol.flip_times.iter().map(|&f| f / t).collect(),
            direction: protocol.direction,
            cascade: protocol.cascade.as_ref().map(|c| CascadeStage {
                flip_time: c.flip_time / t,
                direction: c.direction,
                t_end: c.t_end / t,
            }),
        }
    }

    /// Scaled time back to physical time.
    pub fn physical_time(&self, t: F) -> F {
        t * self.time_scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::IntrinsicLineModel;

    fn rel(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn scales_to_unit_pulse_and_length() {
        // eta z0 = 2 / t_pulse with t_pulse = 10 us and z0 = 4 mm
        let t_pulse = 10e-6;
        let z0 = 4e-3;
        let eta = 2.0 / (t_pulse * z0);
        let m = MediumParams::with_optical_depth(3.3, 1.0e3, eta, z0).unwrap();
        let p = PulseSpec::gaussian(t_pulse, -4.0 * t_pulse);
        let s = nondimensionalize(&m, &p).unwrap();
        assert!(rel(s.medium.eta * s.medium.z_half, 2.0) < 1e-12);
        assert!(rel(s.pulse.duration, 1.0) < 1e-12);
        assert!(rel(s.medium.z_half, 1.0) < 1e-12);
        assert!(rel(s.medium.optical_depth(), m.optical_depth()) < 1e-12);
        assert!(rel(s.pulse.center, -4.0) < 1e-12);
    }

    #[test]
    fn round_trip_is_identity() {
        let mut m = MediumParams::with_optical_depth(0.4, 2.5, 7.0, 0.3).unwrap();
        m.gamma = 0.01;
        m.line = IntrinsicLineModel::lorentzian(0.2, 11);
        let mut p = PulseSpec::gaussian(0.7, -3.0);
        p.carrier_offset = 0.9;
        let s = nondimensionalize(&m, &p).unwrap();
        let (m2, p2) = redimensionalize(&s).unwrap();
        for (a, b) in [
            (m2.g, m.g),
            (m2.density, m.density),
            (m2.gamma, m.gamma),
            (m2.eta, m.eta),
            (m2.z_half, m.z_half),
            (m2.line.width, m.line.width),
            (p2.duration, p.duration),
            (p2.center, p.center),
            (p2.carrier_offset, p.carrier_offset),
        ] {
            assert!(rel(a, b) < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn fig1_optical_depth_is_unit_free() {
        // gN = 3.3 eta in any unit system
        for (g, eta) in [(1.0, 1.0), (3.0e6, 2.0e4), (0.02, 500.0)] {
            let m = MediumParams::<f64>::ideal(g, 3.3 * eta / g, 0.0, eta, 1.0).unwrap();
            assert!(rel(m.optical_depth(), 3.3) < 1e-12);
        }
    }

    #[test]
    fn zero_scales_are_rejected() {
        let m = MediumParams::with_optical_depth(1.0_f64, 1.0, 1.0, 1.0).unwrap();
        let mut p = PulseSpec::gaussian(1.0, 0.0);
        p.duration = 0.0;
        assert!(nondimensionalize(&m, &p).is_err());
        let mut m0 = m.clone();
        m0.z_half = 0.0;
        assert!(nondimensionalize(&m0, &PulseSpec::gaussian(1.0, 0.0)).is_err());
    }
}
