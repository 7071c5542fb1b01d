use rustfft::FftPlanner;

use crate::analysis::metrics::centroid;
use crate::error::{GemError, Result};
use crate::scalar::{Scalar, C};

/// Peak of the normalized cross-correlation between an echo envelope and the
/// time-mirrored input envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFidelity<F> {
    /// In `[0, 1]`; 1 means the echo is an exact shifted mirror of the input.
    pub value: F,
    /// Shift between the echo and the input centroid at the best match. For a
    /// mirror about `t_flip` of an input centred at `t_c` this is `2 (t_flip - t_c)`.
    pub lag: F,
}

fn norm<F: Scalar>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |acc, &x| acc + x * x).sqrt()
}

/// Full linear cross-correlation `c[L] = Σ a[n] b[n - L]` for `L` in `-(len b - 1)..len a`.
fn correlate<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    let n = (a.len() + b.len()).next_power_of_two();
    let zero = C::new(F::zero(), F::zero());
    let mut fa = vec![zero; n];
    let mut fb = vec![zero; n];
    for (d, &x) in fa.iter_mut().zip(a) {
        *d = C::new(x, F::zero());
    }
    for (d, &x) in fb.iter_mut().zip(b) {
        *d = C::new(x, F::zero());
    }
    let mut planner = FftPlanner::<F>::new();
    planner.plan_fft_forward(n).process(&mut fa);
    planner.plan_fft_forward(n).process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y.conj();
    }
    planner.plan_fft_inverse(n).process(&mut fa);
    let scale = F::one() / F::from_count(n);
    let neg = b.len() - 1;
    (0..a.len() + neg)
        .map(|m| {
            let idx = if m < neg { n - neg + m } else { m - neg };
            fa[idx].re * scale
        })
        .collect()
}

/// Best normalized correlation of `e` against shifted copies of `m`, with the
/// shift (in samples, sub-sample refined) of `e` relative to `m`.
fn best_alignment<F: Scalar>(e: &[F], m: &[F]) -> Result<(F, F)> {
    let (ne, nm) = (norm(e), norm(m));
    if !(ne > F::zero() && nm > F::zero()) {
        return Err(GemError::UndefinedMetric("fidelity of an all-zero series".into()));
    }
    let c = correlate(e, m);
    let (best, peak) = c
        .iter()
        .enumerate()
        .fold((0, F::neg_infinity()), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    let mut shift = F::from_count(best) - F::from_count(m.len() - 1);
    if best > 0 && best + 1 < c.len() {
        let (ym, y0, yp) = (c[best - 1], c[best], c[best + 1]);
        let denom = ym - F::lit(2.0) * y0 + yp;
        if denom < F::zero() {
            shift += F::lit(0.5) * (ym - yp) / denom;
        }
    }
    Ok(((peak / (ne * nm)).max(F::zero()).min(F::one()), shift))
}

fn check_lengths<F>(times: &[F], a: usize, b: usize) -> Result<()> {
    if times.len() != a || times.len() != b || times.len() < 2 {
        return Err(GemError::invalid("fidelity", "series must share one time grid of length >= 2"));
    }
    Ok(())
}

/// Envelope fidelity of `echo` against `input`, both sampled on the uniform grid `times`.
pub fn envelope_fidelity<F: Scalar>(times: &[F], echo: &[C<F>], input: &[C<F>]) -> Result<EnvelopeFidelity<F>> {
    check_lengths(times, echo.len(), input.len())?;
    let e: Vec<F> = echo.iter().map(|v| v.norm()).collect();
    let m: Vec<F> = input.iter().rev().map(|v| v.norm()).collect();
    let (value, shift) = best_alignment(&e, &m)?;
    let dt = times[1] - times[0];
    let tc = centroid(times, input).expect("nonzero input has a centroid");
    let n = times.len() - 1;
    let lag = times[0] + times[n] + shift * dt - F::lit(2.0) * tc;
    Ok(EnvelopeFidelity { value, lag })
}

/// Same correlation without the mirror: how well `output` reproduces `input`
/// in forward time order. `lag` is the delay of `output`.
pub fn envelope_match<F: Scalar>(times: &[F], output: &[C<F>], input: &[C<F>]) -> Result<EnvelopeFidelity<F>> {
    check_lengths(times, output.len(), input.len())?;
    let e: Vec<F> = output.iter().map(|v| v.norm()).collect();
    let m: Vec<F> = input.iter().map(|v| v.norm()).collect();
    let (value, shift) = best_alignment(&e, &m)?;
    Ok(EnvelopeFidelity { value, lag: shift * (times[1] - times[0]) })
}

/// Normalized complex overlap `Σ a b̄ / (‖a‖ ‖b‖)`; its modulus is at most 1.
pub fn complex_overlap<F: Scalar>(a: &[C<F>], b: &[C<F>]) -> Result<C<F>> {
    if a.len() != b.len() {
        return Err(GemError::invalid("overlap", "series differ in length"));
    }
    let na = a.iter().fold(F::zero(), |acc, v| acc + v.norm_sqr()).sqrt();
    let nb = b.iter().fold(F::zero(), |acc, v| acc + v.norm_sqr()).sqrt();
    if !(na > F::zero() && nb > F::zero()) {
        return Err(GemError::UndefinedMetric("overlap of an all-zero series".into()));
    }
    let s = a.iter().zip(b).fold(C::new(F::zero(), F::zero()), |acc, (x, y)| acc + *x * y.conj());
    Ok(s / (na * nb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(t: &[f64], c: f64, w: f64) -> Vec<C<f64>> {
        t.iter().map(|x| C::new((-((x - c) / w).powi(2)).exp(), 0.0)).collect()
    }

    #[test]
    fn perfect_mirror_has_unit_fidelity_at_twice_the_offset() {
        let t: Vec<f64> = (0..1601).map(|k| -8.0 + 0.01 * k as f64).collect();
        let t0 = 3.0;
        // asymmetric input: a mirror differs from a shift
        let input: Vec<C<f64>> = gauss(&t, -t0, 0.5).iter().zip(gauss(&t, -t0 + 0.6, 0.3)).map(|(a, b)| a + b * 0.5).collect();
        let echo: Vec<C<f64>> = t.iter().map(|&x| {
            let k = ((-x + 8.0) / 0.01).round() as usize;
            input[k.min(1600)]
        }).collect();
        let f = envelope_fidelity(&t, &echo, &input).unwrap();
        assert!((f.value - 1.0).abs() < 1e-9, "{}", f.value);
        let tc = crate::analysis::metrics::centroid(&t, &input).unwrap();
        assert!(tc > -t0);
        assert!((f.lag + 2.0 * tc).abs() < 0.02, "{}", f.lag);
    }

    #[test]
    fn shifted_copy_without_mirror_scores_lower() {
        let t: Vec<f64> = (0..801).map(|k| -4.0 + 0.01 * k as f64).collect();
        let input: Vec<C<f64>> = gauss(&t, -2.0, 0.5).iter().zip(gauss(&t, -1.0, 0.2)).map(|(a, b)| a + b).collect();
        let shifted: Vec<C<f64>> = gauss(&t, 2.0, 0.5).iter().zip(gauss(&t, 3.0, 0.2)).map(|(a, b)| a + b).collect();
        let f = envelope_fidelity(&t, &shifted, &input).unwrap();
        assert!(f.value < 0.95 && f.value > 0.0);
    }

    #[test]
    fn forward_match_recovers_delay() {
        let t: Vec<f64> = (0..801).map(|k| -4.0 + 0.01 * k as f64).collect();
        let input = gauss(&t, -2.0, 0.4);
        let out = gauss(&t, 1.5, 0.4);
        let f = envelope_match(&t, &out, &input).unwrap();
        assert!((f.value - 1.0).abs() < 1e-9);
        assert!((f.lag - 3.5).abs() < 1e-3, "{}", f.lag);
    }

    #[test]
    fn zero_series_errors() {
        let t = vec![0.0, 1.0, 2.0];
        let z = vec![C::new(0.0, 0.0); 3];
        let o = vec![C::new(1.0, 0.0); 3];
        assert!(matches!(envelope_fidelity(&t, &z, &o), Err(GemError::UndefinedMetric(_))));
        assert!(complex_overlap(&z, &o).is_err());
    }

    #[test]
    fn overlap_detects_conjugate_phase() {
        let a: Vec<C<f64>> = (0..64).map(|k| C::from_polar(1.0, 0.1 * (k as f64).powi(2) / 64.0)).collect();
        let b: Vec<C<f64>> = a.iter().map(|v| v.conj()).collect();
        assert!((complex_overlap(&a, &a).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(complex_overlap(&a, &b).unwrap().norm() < 0.9);
    }
}
