use crate::error::{GemError, Result};
use crate::scalar::{i_unit, Scalar, C};

/// Weights `(a, b)` of `∫_0^h e^{x(h-τ)} [E_0 (1 - τ/h) + E_1 τ/h] dτ = a E_0 + b E_1`.
fn interval_weights<F: Scalar>(x: C<F>, h: F) -> (C<F>, C<F>) {
    let big_x = x * h;
    if big_x.norm() < F::lit(1e-3) {
        let x2 = big_x * big_x;
        let a = (C::new(F::lit(0.5), F::zero()) + big_x / F::lit(3.0) + x2 / F::lit(8.0)) * h;
        let b = (C::new(F::lit(0.5), F::zero()) + big_x / F::lit(6.0) + x2 / F::lit(24.0)) * h;
        return (a, b);
    }
    let e = big_x.exp();
    let one = C::new(F::one(), F::zero());
    let a = ((big_x - one) * e + one) / (big_x * big_x) * h;
    let full = (e - one) / big_x * h;
    (a, full - a)
}

/// Polarization driven by a field history at fixed position:
/// `α(t) = i g ∫_{t_start}^{t} e^{-(γ + iδ)(t - t')} E(t') dt'`.
///
/// The history stands in for the field since `t → -∞`; the field is taken
/// piecewise linear between samples and integrated exactly against the exponential.
/// Returns `α` at every history time.
pub fn polarization_kernel<F: Scalar>(times: &[F], field: &[C<F>], detuning: F, gamma: F, g: F) -> Result<Vec<C<F>>> {
    if times.len() != field.len() || times.is_empty() {
        return Err(GemError::invalid("history", "times and field must be non-empty and of equal length"));
    }
    let x = -C::new(gamma, detuning);
    let ig = i_unit::<F>() * g;
    let mut alpha = Vec::with_capacity(times.len());
    let mut acc = C::new(F::zero(), F::zero());
    alpha.push(acc);
    for n in 0..times.len() - 1 {
        let h = times[n + 1] - times[n];
        let (a, b) = interval_weights(x, h);
        acc = acc * (x * h).exp() + ig * (a * field[n] + b * field[n + 1]);
        alpha.push(acc);
    }
    Ok(alpha)
}

/// Kernel value at a single time inside the history.
pub fn polarization_at<F: Scalar>(times: &[F], field: &[C<F>], detuning: F, gamma: F, g: F, t: F) -> Result<C<F>> {
    let last = *times.last().ok_or_else(|| GemError::invalid("history", "empty history"))?;
    if t > last {
        return Err(GemError::HistoryTooShort { requested: t.to_f64_lossy(), available: last.to_f64_lossy() });
    }
    let end = times.partition_point(|&x| x <= t);
    if end == 0 {
        return Ok(C::new(F::zero(), F::zero()));
    }
    let mut ts = times[..end].to_vec();
    let mut es = field[..end].to_vec();
    if ts[end - 1] < t {
        // linear interpolation onto the query time
        let u = (t - ts[end - 1]) / (times[end] - ts[end - 1]);
        ts.push(t);
        es.push(field[end - 1] * (F::one() - u) + field[end] * u);
    }
    Ok(*polarization_kernel(&ts, &es, detuning, gamma, g)?.last().unwrap())
}
