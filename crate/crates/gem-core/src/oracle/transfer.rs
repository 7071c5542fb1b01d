use crate::error::{GemError, Result};
use crate::model::MediumParams;
use crate::scalar::{cis, Scalar, C};

/// Spectral transfer of the storage stage evaluated on a frequency grid.
///
/// Frequencies follow the synthesis convention `f(t) = (1/2π) ∫ F̃(ω) e^{iωt} dω`;
/// atoms at `z'` absorb the component `ω = -η z'`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferEvaluation<F> {
    pub omega: Vec<F>,
    pub transfer: Vec<C<F>>,
    pub magnitude: Vec<F>,
    pub phase: Vec<F>,
    /// `F̃_in(ω) T(z, ω)`.
    pub field: Vec<C<F>>,
}

fn heaviside<F: Scalar>(x: F) -> F {
    if x > F::zero() {
        F::one()
    } else {
        F::zero()
    }
}

/// `T(z, ω) = exp[-πβ (H(ω + ηz) - H(ω - ηz0)) + iβ ln|(ω + ηz)/(ω - ηz0)|]`.
pub fn transfer_at<F: Scalar>(omega: F, z: F, beta: F, eta: F, z_half: F) -> Result<C<F>> {
    let lower = omega + eta * z;
    let upper = omega - eta * z_half;
    if lower == F::zero() || upper == F::zero() {
        return Err(GemError::SingularGrid(omega.to_f64_lossy()));
    }
    let attenuation = -F::PI() * beta * (heaviside(lower) - heaviside(upper));
    let phase = beta * (lower / upper).abs().ln();
    Ok(cis(phase) * attenuation.exp())
}

/// Evaluates the transfer of `input_spectrum` (sampled on `omega`) to position `z`.
pub fn spectral_transfer<F: Scalar>(
    omega: &[F],
    input_spectrum: &[C<F>],
    z: F,
    medium: &MediumParams<F>,
) -> Result<TransferEvaluation<F>> {
    if omega.len() != input_spectrum.len() {
        return Err(GemError::invalid("spectrum", "frequency grid and spectrum differ in length"));
    }
    let beta = medium.optical_depth();
    let transfer = omega
        .iter()
        .map(|&w| transfer_at(w, z, beta, medium.eta, medium.z_half))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransferEvaluation {
        omega: omega.to_vec(),
        magnitude: transfer.iter().map(|t| t.norm()).collect(),
        phase: transfer.iter().map(|t| t.arg()).collect(),
        field: transfer.iter().zip(input_spectrum).map(|(t, f)| *t * *f).collect(),
        transfer,
    })
}

/// `n` frequencies spaced by `step`, offset by half a sample from zero.
pub fn offset_frequency_grid<F: Scalar>(n: usize, step: F) -> Vec<F> {
    let mid = F::from_count(n) / F::lit(2.0);
    (0..n).map(|k| (F::from_count(k) - mid + F::lit(0.5)) * step).collect()
}
