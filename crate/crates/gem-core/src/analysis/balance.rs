use crate::error::{GemError, Result};
use crate::scalar::Scalar;
use crate::solver::SpaceTimeField;

/// Photon-number bookkeeping
///
/// `r(t) = dW/dt + (g/N)(|E(z0)|² - |E(-z0)|²) + 2γW`, with `W = ∫ Σ w u |α|² dz`,
/// normalized by the peak input flux `(g/N) max|E(-z0)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBalance<F> {
    pub times: Vec<F>,
    pub residual: Vec<F>,
    pub max_residual: F,
    pub peak_flux: F,
}

/// Evaluates the balance at every recorded step whose difference stencil does
/// not straddle a flip. `dW/dt` uses the fourth-order central difference.
pub fn energy_balance<F: Scalar>(history: &SpaceTimeField<F>) -> Result<EnergyBalance<F>> {
    if !(history.density > F::zero()) {
        return Err(GemError::UndefinedMetric("energy balance needs density > 0".into()));
    }
    let n = history.times.len();
    let peak_in = history.input.iter().fold(F::zero(), |m, e| m.max(e.norm_sqr()));
    let coupling = history.g / history.density;
    let peak_flux = coupling * peak_in;
    if history.g == F::zero() {
        return Ok(EnergyBalance {
            times: history.times.clone(),
            residual: vec![F::zero(); n],
            max_residual: F::zero(),
            peak_flux,
        });
    }
    if !(peak_in > F::zero()) {
        return Err(GemError::UndefinedMetric("energy balance needs a nonzero input".into()));
    }
    let w = &history.excitation;
    let t = &history.times;
    let two = F::lit(2.0);
    let eight = F::lit(8.0);
    let twelve_dt = F::lit(12.0) * history.dt;
    let mut times = Vec::new();
    let mut residual = Vec::new();
    let mut max_residual = F::zero();
    for k in 2..n.saturating_sub(2) {
        let (lo, hi) = (t[k - 2], t[k + 2]);
        if history.flip_times.iter().any(|&f| f > lo && f < hi) {
            continue;
        }
        let dwdt = (w[k - 2] - eight * w[k - 1] + eight * w[k + 1] - w[k + 2]) / twelve_dt;
        let flux = coupling * (history.output[k].norm_sqr() - history.input[k].norm_sqr());
        let r = (dwdt + flux + two * history.gamma * w[k]) / peak_flux;
        max_residual = max_residual.max(r.abs());
        times.push(t[k]);
        residual.push(r);
    }
    Ok(EnergyBalance { times, residual, max_residual, peak_flux })
}
