use crate::error::{GemError, Result};
use crate::scalar::{Scalar, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpOptions<F> {
    /// Phase jumps larger than this are treated as branch cuts and unwrapped.
    pub jump_threshold: F,
    /// Peak `|v|²` below this is too weak to fit.
    pub min_peak_intensity: F,
}

impl<F: Scalar> Default for ChirpOptions<F> {
    fn default() -> Self {
        ChirpOptions { jump_threshold: F::PI(), min_peak_intensity: F::lit(1e-12) }
    }
}

/// Quadratic fit `φ(t) ≈ φ0 + ν (t - t_p) + ½ κ (t - t_p)²` of the unwrapped
/// phase over the FWHM window of `|v|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpFit<F> {
    pub peak_time: F,
    /// Instantaneous angular frequency at the peak.
    pub frequency: F,
    /// Rate of change of the instantaneous frequency.
    pub sweep_rate: F,
    pub window: (F, F),
    pub n_points: usize,
}

/// Nearest-branch continuation of `arg v`.
pub fn unwrap_phase<F: Scalar>(values: &[C<F>], jump_threshold: F) -> Vec<F> {
    let two_pi = F::lit(2.0) * F::PI();
    let mut out = Vec::with_capacity(values.len());
    let mut offset = F::zero();
    let mut prev: Option<F> = None;
    for v in values {
        let raw = v.arg();
        if let Some(p) = prev {
            let d = raw + offset - p;
            if d.abs() > jump_threshold {
                offset -= (d / two_pi).round() * two_pi;
            }
        }
        let u = raw + offset;
        out.push(u);
        prev = Some(u);
    }
    out
}

fn solve3<F: Scalar>(mut a: [[F; 3]; 3], mut b: [F; 3]) -> Option<[F; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col] == F::zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = [F::zero(); 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Fits the instantaneous frequency of `values` at its intensity peak.
pub fn chirp_estimate<F: Scalar>(times: &[F], values: &[C<F>], options: ChirpOptions<F>) -> Result<ChirpFit<F>> {
    if times.len() != values.len() {
        return Err(GemError::invalid("chirp", "times and values differ in length"));
    }
    let (peak_idx, peak) = values
        .iter()
        .enumerate()
        .fold((0, F::zero()), |(bi, bv), (i, v)| if v.norm_sqr() > bv { (i, v.norm_sqr()) } else { (bi, bv) });
    if !(peak > options.min_peak_intensity) {
        return Err(GemError::UndefinedMetric("signal too weak for a phase fit".into()));
    }
    let half = peak * F::lit(0.5);
    let mut lo = peak_idx;
    while lo > 0 && values[lo - 1].norm_sqr() >= half {
        lo -= 1;
    }
    let mut hi = peak_idx;
    while hi + 1 < values.len() && values[hi + 1].norm_sqr() >= half {
        hi += 1;
    }
    if hi - lo + 1 < 3 {
        return Err(GemError::UndefinedMetric("fewer than three samples above half maximum".into()));
    }
    let phase = unwrap_phase(&values[lo..=hi], options.jump_threshold);
    let tp = times[peak_idx];
    let scale = (times[hi] - times[lo]).max(F::epsilon());
    let mut ata = [[F::zero(); 3]; 3];
    let mut atb = [F::zero(); 3];
    for (k, &p) in phase.iter().enumerate() {
        let x = (times[lo + k] - tp) / scale;
        let row = [F::one(), x, x * x];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * p;
        }
    }
    let c = solve3(ata, atb).ok_or_else(|| GemError::UndefinedMetric("degenerate phase fit".into()))?;
    Ok(ChirpFit {
        peak_time: tp,
        frequency: c[1] / scale,
        sweep_rate: F::lit(2.0) * c[2] / (scale * scale),
        window: (times[lo], times[hi]),
        n_points: hi - lo + 1,
    })
}
