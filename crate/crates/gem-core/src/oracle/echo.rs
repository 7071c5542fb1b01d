use crate::error::{GemError, Result};
use crate::model::FlipDirection;
use crate::oracle::gamma::gamma_phase_ratio;
use crate::scalar::{cis, Scalar, C};

/// Predicted echo `f_out(t) = f_in(-t) |t|^{2iβ} Γ(iβ)/Γ(-iβ)`, times measured from the flip.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputPrediction<F> {
    pub times: Vec<F>,
    pub values: Vec<C<F>>,
    /// Unit-modulus factor `|t|^{2iβ} Γ(iβ)/Γ(-iβ)` as printed.
    pub phase_factor: Vec<C<F>>,
    /// Samples at `t = flip` where the logarithmic phase is undefined; their value is zero.
    pub skipped: Vec<usize>,
}

impl<F: Scalar> OutputPrediction<F> {
    /// Echo in the solver's phase frame, where atomic coherences evolve as
    /// `e^{-iδt}`: the phase factor is the complex conjugate of the printed one.
    pub fn solver_frame(&self, input: impl Fn(F) -> C<F>, flip_time: F) -> Vec<C<F>> {
        self.times
            .iter()
            .zip(&self.phase_factor)
            .map(|(&t, p)| input(F::lit(2.0) * flip_time - t) * p.conj())
            .collect()
    }
}

/// Chirp phase `2β ln|τ|` of the echo map.
pub fn echo_phase<F: Scalar>(beta: F, tau: F) -> F {
    F::lit(2.0) * beta * tau.abs().ln()
}

/// Instantaneous frequency of the echo phase, `2β / τ`.
pub fn echo_frequency<F: Scalar>(beta: F, tau: F) -> F {
    F::lit(2.0) * beta / tau
}

/// Evaluates the echo map on absolute `times` for a flip at `flip_time`.
pub fn output_map<F: Scalar>(
    input: impl Fn(F) -> C<F>,
    beta: F,
    flip_time: F,
    times: &[F],
) -> Result<OutputPrediction<F>> {
    if !(beta > F::zero()) {
        return Err(GemError::invalid("beta", "echo map needs beta > 0"));
    }
    let ratio = gamma_phase_ratio(beta)?;
    let mut skipped = Vec::new();
    let mut values = Vec::with_capacity(times.len());
    let mut phase_factor = Vec::with_capacity(times.len());
    for (idx, &t) in times.iter().enumerate() {
        let tau = t - flip_time;
        if tau == F::zero() {
            skipped.push(idx);
            values.push(C::new(F::zero(), F::zero()));
            phase_factor.push(C::new(F::one(), F::zero()));
            continue;
        }
        let p = cis(echo_phase(beta, tau)) * ratio;
        values.push(input(flip_time - tau) * p);
        phase_factor.push(p);
    }
    Ok(OutputPrediction { times: times.to_vec(), values, phase_factor, skipped })
}

/// Two memories in series: the second receives the first one's echo and
/// flips at `second_flip`. With `FlipDirection::Forward` the second stage
/// applies the same phase law as the first; `Reversed` applies its conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadePrediction<F> {
    pub times: Vec<F>,
    pub values: Vec<C<F>>,
    /// Phase of the composed factor (output divided by the forward-shifted input).
    pub residual_phase: Vec<F>,
    /// Time shift `2 (second_flip - first_flip)` restoring forward order.
    pub delay: F,
}

pub fn cascade_map<F: Scalar>(
    input: impl Fn(F) -> C<F>,
    beta_first: F,
    beta_second: F,
    first_flip: F,
    second_flip: F,
    second_direction: FlipDirection,
    times: &[F],
) -> Result<CascadePrediction<F>> {
    if !(beta_first > F::zero() && beta_second > F::zero()) {
        return Err(GemError::invalid("beta", "cascade needs both depths > 0"));
    }
    let r1 = gamma_phase_ratio(beta_first)?;
    let r2 = gamma_phase_ratio(beta_second)?;
    let two = F::lit(2.0);
    let mut values = Vec::with_capacity(times.len());
    let mut residual_phase = Vec::with_capacity(times.len());
    for &t in times {
        // first-stage time mirrored onto t by the second stage
        let t1 = two * second_flip - t;
        let tau1 = t1 - first_flip;
        let tau2 = t - second_flip;
        let p1 = cis(echo_phase(beta_first, tau1)) * r1;
        let p2 = match second_direction {
            FlipDirection::Forward => cis(echo_phase(beta_second, tau2)) * r2,
            FlipDirection::Reversed => (cis(echo_phase(beta_second, tau2)) * r2).conj(),
        };
        let factor = p1 * p2;
        values.push(input(two * first_flip - t1) * factor);
        residual_phase.push(factor.arg());
    }
    Ok(CascadePrediction {
        times: times.to_vec(),
        values,
        residual_phase,
        delay: two * (second_flip - first_flip),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(center: f64) -> impl Fn(f64) -> C<f64> {
        move |t: f64| C::new((-2.0 * std::f64::consts::LN_2 * (t - center).powi(2)).exp(), 0.0)
    }

    #[test]
    fn envelope_is_time_mirror() {
        let times: Vec<f64> = (-400..=400).map(|k| k as f64 * 0.02).collect();
        let pred = output_map(gauss(-4.0), 3.3, 0.0, &times).unwrap();
        assert_eq!(pred.skipped, vec![400]);
        let f = gauss(-4.0);
        for (k, &t) in times.iter().enumerate() {
            if t != 0.0 {
                assert!((pred.values[k].norm() - f(-t).norm()).abs() < 1e-14);
                assert!((pred.phase_factor[k].norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phase_derivative_is_two_beta_over_t() {
        let beta = 3.3;
        for t in [0.5_f64, 4.0, 40.0] {
            let h = 1e-5 * t;
            let numeric = (echo_phase(beta, t + h) - echo_phase(beta, t - h)) / (2.0 * h);
            assert!((numeric - echo_frequency(beta, t)).abs() < 1e-8 * echo_frequency(beta, t));
        }
    }

    #[test]
    fn rejects_nonpositive_depth() {
        assert!(output_map(gauss(0.0), 0.0, 0.0, &[1.0]).is_err());
    }

    #[test]
    fn cascade_restores_forward_envelope() {
        let (t0, flip2) = (40.0, 80.0);
        let times: Vec<f64> = (0..2000).map(|k| 110.0 + k as f64 * 0.01).collect();
        let f = gauss(-t0);
        let c = cascade_map(gauss(-t0), 3.3, 3.3, 0.0, flip2, FlipDirection::Forward, &times).unwrap();
        assert_eq!(c.delay, 160.0);
        for (k, &t) in times.iter().enumerate() {
            assert!((c.values[k].norm() - f(t - c.delay).norm()).abs() < 1e-13);
        }
    }

    #[test]
    fn same_direction_cascade_cancels_frequency_shift() {
        let beta = 3.3;
        let (t0, flip2) = (40.0_f64, 80.0);
        let echo = 3.0 * t0;
        let single = echo_frequency(beta, t0);
        let times: Vec<f64> = (0..=100).map(|k| echo - 0.5 + k as f64 * 0.01).collect();
        let h = 1e-4;
        for dir in [FlipDirection::Forward, FlipDirection::Reversed] {
            let mut worst: f64 = 0.0;
            for &t in &times {
                let c = cascade_map(gauss(-t0), beta, beta, 0.0, flip2, dir, &[t - h, t + h]).unwrap();
                let mut d = c.residual_phase[1] - c.residual_phase[0];
                d -= (d / (2.0 * std::f64::consts::PI)).round() * 2.0 * std::f64::consts::PI;
                worst = worst.max((d / (2.0 * h)).abs() / single);
            }
            match dir {
                FlipDirection::Forward => assert!(worst < 0.05, "residual {worst}"),
                FlipDirection::Reversed => assert!(worst > 1.9, "opposite flip doubles the shift: {worst}"),
            }
        }
    }

    #[test]
    fn same_direction_residual_phase_is_stationary_at_centre() {
        // phase 2β ln|τ1 τ2| is extremal where τ1 = τ2, i.e. constant to first order
        let beta = 3.3;
        let c = cascade_map(gauss(-4.0), beta, beta, 0.0, 8.0, FlipDirection::Forward, &[12.0 - 1e-4, 12.0, 12.0 + 1e-4])
            .unwrap();
        let slope = (c.residual_phase[2] - c.residual_phase[0]) / 2e-4;
        assert!(slope.abs() < 1e-6);
    }
}
