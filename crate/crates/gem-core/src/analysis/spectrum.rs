use rustfft::FftPlanner;

use crate::error::{GemError, Result};
use crate::scalar::{cis, Scalar, C};

/// Sampled spectrum in ascending frequency order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<F> {
    pub freq: Vec<F>,
    pub values: Vec<C<F>>,
}

impl<F: Scalar> Spectrum<F> {
    /// Linear interpolation of the spectrum at `w`; zero outside the sampled band.
    pub fn at(&self, w: F) -> C<F> {
        let n = self.freq.len();
        if n < 2 || w < self.freq[0] || w > self.freq[n - 1] {
            return C::new(F::zero(), F::zero());
        }
        let step = self.freq[1] - self.freq[0];
        let x = (w - self.freq[0]) / step;
        let k = x.floor().to_usize().unwrap_or(0).min(n - 2);
        let frac = x - F::from_count(k);
        self.values[k] * (F::one() - frac) + self.values[k + 1] * frac
    }

    /// Full width at half maximum of `|S|²`, measured between the outermost crossings.
    pub fn intensity_fwhm(&self) -> Option<F> {
        half_max_width(&self.freq, &self.values.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>())
    }
}

/// Width of the region where `y >= max/2`, with linear interpolation at the edges.
pub fn half_max_width<F: Scalar>(x: &[F], y: &[F]) -> Option<F> {
    let peak = y.iter().copied().fold(F::zero(), F::max);
    if !(peak > F::zero()) || x.len() < 2 {
        return None;
    }
    let half = peak * F::lit(0.5);
    let first = y.iter().position(|&v| v >= half)?;
    let last = y.iter().rposition(|&v| v >= half)?;
    let cross = |i: usize, j: usize| -> F {
        let (yi, yj) = (y[i], y[j]);
        if yi == yj {
            x[i]
        } else {
            x[i] + (x[j] - x[i]) * (half - yi) / (yj - yi)
        }
    };
    let lo = if first == 0 { x[0] } else { cross(first - 1, first) };
    let hi = if last + 1 == x.len() { x[last] } else { cross(last, last + 1) };
    Some(hi - lo)
}

fn uniform_step<F: Scalar>(x: &[F]) -> Result<F> {
    if x.len() < 2 {
        return Err(GemError::UndefinedMetric("spectrum needs at least two samples".into()));
    }
    let step = x[1] - x[0];
    let tol = step.abs() * F::lit(1e-6);
    if !(step > F::zero()) || x.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > tol) {
        return Err(GemError::UndefinedMetric("samples must be uniformly spaced".into()));
    }
    Ok(step)
}

/// `S(k) = h Σ v_n e^{±i k x_n}` on the FFT grid, zero padded to `n_fft`.
fn transform<F: Scalar>(x: &[F], values: &[C<F>], n_fft: usize, positive_kernel: bool) -> Result<Spectrum<F>> {
    if x.len() != values.len() {
        return Err(GemError::invalid("spectrum", "axis and values differ in length"));
    }
    let h = uniform_step(x)?;
    let n = n_fft.max(values.len());
    let mut buf = vec![C::new(F::zero(), F::zero()); n];
    buf[..values.len()].copy_from_slice(values);
    let mut planner = FftPlanner::<F>::new();
    let fft = if positive_kernel { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    fft.process(&mut buf);
    let two_pi = F::lit(2.0) * F::PI();
    let dk = two_pi / (F::from_count(n) * h);
    let half = n / 2;
    let sign = if positive_kernel { F::one() } else { -F::one() };
    let mut freq = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    // ascending order: bins n/2.. are the negative frequencies
    for idx in (half..n).chain(0..half) {
        let k = if idx >= half && idx != 0 {
            F::from_count(idx) - F::from_count(n)
        } else {
            F::from_count(idx)
        };
        let kk = k * dk;
        freq.push(kk);
        out.push(buf[idx] * cis(sign * kk * x[0]) * h);
    }
    if n % 2 == 1 {
        // odd n: bin n/2 is positive and belongs at the end
        let k = freq.remove(0);
        let v = out.remove(0);
        let kk = k + F::from_count(n) * dk;
        freq.push(kk);
        out.push(v * cis(sign * (kk - k) * x[0]));
    }
    Ok(Spectrum { freq, values: out })
}

/// Time spectrum `F̃(ω) = ∫ f(t) e^{-iωt} dt`, the partner of the synthesis
/// `f(t) = (1/2π) ∫ F̃(ω) e^{iωt} dω`.
pub fn time_spectrum<F: Scalar>(times: &[F], values: &[C<F>], n_fft: usize) -> Result<Spectrum<F>> {
    transform(times, values, n_fft, false)
}

/// Spatial spectrum `E(k) = ∫ E(z) e^{ikz} dz`.
pub fn spatial_spectrum<F: Scalar>(z: &[F], values: &[C<F>], n_fft: usize) -> Result<Spectrum<F>> {
    transform(z, values, n_fft, true)
}
