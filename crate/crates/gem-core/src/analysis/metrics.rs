use crate::error::{GemError, Result};
use crate::scalar::{Scalar, C};
use crate::solver::SpaceTimeField;

/// Energies at the exit face split at the flip, normalized by the input energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit<F> {
    pub input_energy: F,
    pub transmitted_energy: F,
    pub echo_energy: F,
    pub transmission: F,
    pub efficiency: F,
}

/// Trapezoid rule for `∫ |v|² dt` over `[a, b]`, with the intensity linearly
/// interpolated inside partially covered intervals.
pub fn intensity_integral<F: Scalar>(times: &[F], values: &[C<F>], a: F, b: F) -> F {
    let mut total = F::zero();
    let half = F::lit(0.5);
    for k in 1..times.len() {
        let (t0, t1) = (times[k - 1], times[k]);
        let lo = t0.max(a);
        let hi = t1.min(b);
        if !(hi > lo) {
            continue;
        }
        let (y0, y1) = (values[k - 1].norm_sqr(), values[k].norm_sqr());
        let lerp = |t: F| y0 + (y1 - y0) * (t - t0) / (t1 - t0);
        total += half * (hi - lo) * (lerp(lo) + lerp(hi));
    }
    total
}

/// Transmission and echo efficiency at `z0`. Everything leaving before
/// `flip_time` counts as transmitted, everything after as echo.
pub fn efficiency<F: Scalar>(history: &SpaceTimeField<F>, flip_time: F) -> Result<EnergySplit<F>> {
    let times = &history.times;
    if times.len() < 2 {
        return Err(GemError::UndefinedMetric("history has fewer than two samples".into()));
    }
    let (first, last) = (times[0], times[times.len() - 1]);
    let input_energy = intensity_integral(times, &history.input, first, last);
    if !(input_energy > F::zero()) {
        return Err(GemError::UndefinedMetric("input energy is zero".into()));
    }
    let transmitted_energy = intensity_integral(times, &history.output, first, flip_time);
    let echo_energy = intensity_integral(times, &history.output, flip_time, last);
    Ok(EnergySplit {
        input_energy,
        transmitted_energy,
        echo_energy,
        transmission: transmitted_energy / input_energy,
        efficiency: echo_energy / input_energy,
    })
}

/// Time of the largest `|v|²` sample after `after`, refined by a parabola through its neighbours.
pub fn peak_time<F: Scalar>(times: &[F], values: &[C<F>], after: F) -> Option<F> {
    let mut best: Option<usize> = None;
    for (k, (&t, v)) in times.iter().zip(values).enumerate() {
        if t > after && best.map_or(true, |b| v.norm_sqr() > values[b].norm_sqr()) {
            best = Some(k);
        }
    }
    let k = best?;
    if values[k].norm_sqr() == F::zero() {
        return None;
    }
    if k == 0 || k + 1 == times.len() {
        return Some(times[k]);
    }
    let (ym, y0, yp) = (values[k - 1].norm_sqr(), values[k].norm_sqr(), values[k + 1].norm_sqr());
    let denom = ym - F::lit(2.0) * y0 + yp;
    if denom >= F::zero() {
        return Some(times[k]);
    }
    let shift = F::lit(0.5) * (ym - yp) / denom;
    Some(times[k] + shift * (times[k + 1] - times[k]))
}

/// Intensity-weighted mean time of `|v|²`.
pub fn centroid<F: Scalar>(times: &[F], values: &[C<F>]) -> Option<F> {
    let (mut m0, mut m1) = (F::zero(), F::zero());
    for (&t, v) in times.iter().zip(values) {
        m0 += v.norm_sqr();
        m1 += t * v.norm_sqr();
    }
    (m0 > F::zero()).then(|| m1 / m0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn history(input: Vec<C<f64>>, output: Vec<C<f64>>, dt: f64) -> SpaceTimeField<f64> {
        let n = input.len();
        SpaceTimeField {
            times: (0..n).map(|k| k as f64 * dt).collect(),
            input,
            output,
            excitation: vec![0.0; n],
            z_nodes: vec![-1.0, 1.0],
            z_cells: vec![0.0],
            snapshots: Vec::new(),
            flip_snapshots: Vec::new(),
            flip_times: Vec::new(),
            dt,
            g: 0.0,
            density: 1.0,
            gamma: 0.0,
        }
    }

    #[test]
    fn passthrough_is_fully_transmitted() {
        let v: Vec<C<f64>> = (0..101).map(|k| C::new((-((k as f64 - 30.0) / 5.0).powi(2)).exp(), 0.0)).collect();
        let h = history(v.clone(), v, 0.1);
        let s = efficiency(&h, 9.0).unwrap();
        assert!((s.transmission - 1.0).abs() < 1e-9);
        assert!(s.efficiency < 1e-9);
    }

    #[test]
    fn split_inside_an_interval_is_additive() {
        let v: Vec<C<f64>> = (0..11).map(|k| C::new(k as f64, 0.0)).collect();
        let h = history(v.clone(), v, 1.0);
        let s = efficiency(&h, 4.37).unwrap();
        assert!((s.transmission + s.efficiency - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_input_is_undefined() {
        let z = vec![C::new(0.0, 0.0); 5];
        assert!(matches!(efficiency(&history(z.clone(), z, 1.0), 2.0), Err(GemError::UndefinedMetric(_))));
    }

    #[test]
    fn parabolic_peak_refinement() {
        let t: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let v: Vec<C<f64>> = t.iter().map(|x| C::new((-(x - 2.33f64).powi(2)).exp().sqrt(), 0.0)).collect();
        let p = peak_time(&t, &v, 0.0).unwrap();
        assert!((p - 2.33).abs() < 2e-3, "{p}");
        assert!(peak_time(&t, &v, 10.0).is_none());
    }
}
