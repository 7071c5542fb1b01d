use crate::error::{GemError, Result};
use crate::scalar::{cis, Scalar, C};

/// Input envelope sampled on an arbitrary, strictly increasing time base.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledEnvelope<F> {
    times: Vec<F>,
    values: Vec<C<F>>,
}

impl<F: Scalar> SampledEnvelope<F> {
    pub fn new(times: Vec<F>, values: Vec<C<F>>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(GemError::invalid("pulse.samples", "times and values differ in length"));
        }
        if times.len() < 2 {
            return Err(GemError::invalid("pulse.samples", "need at least two samples"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(GemError::invalid("pulse.samples", "time base must be strictly increasing"));
        }
        Ok(SampledEnvelope { times, values })
    }

    pub fn times(&self) -> &[F] {
        &self.times
    }

    pub fn values(&self) -> &[C<F>] {
        &self.values
    }

    /// Local cubic Lagrange interpolation; zero outside the sampled span.
    pub fn at(&self, t: F) -> C<F> {
        let n = self.times.len();
        if t < self.times[0] || t > self.times[n - 1] {
            return C::new(F::zero(), F::zero());
        }
        let idx = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return self.values[i],
            Err(i) => i,
        };
        if n < 4 {
            let (t0, t1) = (self.times[idx - 1], self.times[idx]);
            let u = (t - t0) / (t1 - t0);
            return self.values[idx - 1] * (F::one() - u) + self.values[idx] * u;
        }
        let start = idx.saturating_sub(2).min(n - 4);
        let mut acc = C::new(F::zero(), F::zero());
        for a in start..start + 4 {
            let mut l = F::one();
            for b in start..start + 4 {
                if a != b {
                    l = l * (t - self.times[b]) / (self.times[a] - self.times[b]);
                }
            }
            acc += self.values[a] * l;
        }
        acc
    }

    fn energy(&self) -> F {
        let half = F::lit(0.5);
        self.times
            .windows(2)
            .zip(self.values.windows(2))
            .fold(F::zero(), |acc, (t, v)| acc + half * (t[1] - t[0]) * (v[0].norm_sqr() + v[1].norm_sqr()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PulseShape<F> {
    /// Gaussian whose intensity envelope has FWHM equal to the pulse duration.
    Gaussian,
    /// Flat top of length equal to the pulse duration.
    Square,
    Sampled(SampledEnvelope<F>),
}

/// Input field `f_in(t)` entering the sample at `z = -z0`.
///
/// The carrier offset `Δ` multiplies the envelope by `exp(-iΔ(t - center))`,
/// which is resonant with atoms at detuning `Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec<F> {
    pub shape: PulseShape<F>,
    pub duration: F,
    pub amplitude: C<F>,
    pub center: F,
    pub carrier_offset: F,
}

impl<F: Scalar> PulseSpec<F> {
    pub fn gaussian(duration: F, center: F) -> Self {
        PulseSpec {
            shape: PulseShape::Gaussian,
            duration,
            amplitude: C::new(F::one(), F::zero()),
            center,
            carrier_offset: F::zero(),
        }
    }

    pub fn square(duration: F, center: F) -> Self {
        PulseSpec { shape: PulseShape::Square, ..Self::gaussian(duration, center) }
    }

    /// Sampled envelope; `duration` is only used as the characteristic time scale.
    pub fn sampled(envelope: SampledEnvelope<F>, duration: F) -> Self {
        PulseSpec { shape: PulseShape::Sampled(envelope), ..Self::gaussian(duration, F::zero()) }
    }

    pub fn with_amplitude(mut self, amplitude: C<F>) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > F::zero() && self.duration.is_finite()) {
            return Err(GemError::invalid("pulse.duration", "duration must be finite and > 0"));
        }
        if !(self.amplitude.re.is_finite() && self.amplitude.im.is_finite()) {
            return Err(GemError::invalid("pulse.amplitude", "amplitude must be finite"));
        }
        if !self.center.is_finite() || !self.carrier_offset.is_finite() {
            return Err(GemError::invalid("pulse.center", "center and carrier offset must be finite"));
        }
        Ok(())
    }

    /// Envelope without the amplitude and carrier factors.
    fn shape_at(&self, t: F) -> C<F> {
        let u = t - self.center;
        match &self.shape {
            PulseShape::Gaussian => {
                let x = u / self.duration;
                C::new((-F::lit(2.0) * F::LN_2() * x * x).exp(), F::zero())
            }
            PulseShape::Square => {
                let half = F::lit(0.5) * self.duration;
                let a = u.abs();
                let v = if a < half {
                    F::one()
                } else if a == half {
                    F::lit(0.5)
                } else {
                    F::zero()
                };
                C::new(v, F::zero())
            }
            PulseShape::Sampled(env) => env.at(t),
        }
    }

    /// `f_in(t)`.
    pub fn value_at(&self, t: F) -> C<F> {
        let carrier = cis(-self.carrier_offset * (t - self.center));
        self.amplitude * self.shape_at(t) * carrier
    }

    /// `f_in` on a time grid.
    pub fn sample(&self, times: &[F]) -> Vec<C<F>> {
        times.iter().map(|&t| self.value_at(t)).collect()
    }

    /// Closed-form `∫|f_in|² dt` (trapezoid for sampled envelopes).
    pub fn energy(&self) -> F {
        let a2 = self.amplitude.norm_sqr();
        match &self.shape {
            PulseShape::Gaussian => a2 * self.duration * (F::PI() / (F::lit(4.0) * F::LN_2())).sqrt(),
            PulseShape::Square => a2 * self.duration,
            PulseShape::Sampled(env) => a2 * env.energy(),
        }
    }

    /// Angular FWHM of the intensity spectrum of a Gaussian pulse, `4 ln2 / T`.
    pub fn gaussian_spectral_fwhm(&self) -> Option<F> {
        match self.shape {
            PulseShape::Gaussian => Some(F::lit(4.0) * F::LN_2() / self.duration),
            _ => None,
        }
    }

    /// Same pulse with amplitude multiplied by `c`.
    pub fn scaled(&self, c: C<F>) -> Self {
        PulseSpec { amplitude: self.amplitude * c, ..self.clone() }
    }
}
