use crate::error::Result;
use crate::model::{MediumParams, PulseSpec};
use crate::oracle::gamma::complex_gamma;
use crate::scalar::{cis, Scalar, C};

/// Result of the asymptotic flip-time field, with its validity flag.
#[derive(Debug, Clone, PartialEq)]
pub struct KSpaceField<F> {
    pub k: Vec<F>,
    pub values: Vec<C<F>>,
    /// Applied half-bandwidth in cycles per pulse duration, `η z0 t_pulse / 2π`.
    pub broadening_ratio: F,
    pub validity_threshold: F,
    /// Indices with `k = 0`, where the expression is singular (set to zero).
    pub skipped: Vec<usize>,
}

impl<F: Scalar> KSpaceField<F> {
    /// The derivation assumes memory bandwidth ≫ pulse bandwidth.
    pub fn is_valid(&self) -> bool {
        self.broadening_ratio >= self.validity_threshold
    }

    pub fn warning(&self) -> Option<String> {
        (!self.is_valid()).then(|| {
            format!(
                "broadening ratio {} below validity threshold {}; flip-time field is outside its asymptotic regime",
                self.broadening_ratio, self.validity_threshold
            )
        })
    }
}

/// Applied half-bandwidth in cycles per pulse duration.
pub fn broadening_ratio<F: Scalar>(medium: &MediumParams<F>, pulse: &PulseSpec<F>) -> F {
    medium.half_bandwidth() * pulse.duration / (F::lit(2.0) * F::PI())
}

/// Spatial spectrum of the stored field at the flip instant:
///
/// `E(k,0) = -f_in(-k/η) sgn(k) β |k/η|^{-2-iβ} Γ(iβ) (|k/η| cosh(πβ/2) + (k/η) sinh(πβ/2))`,
/// with the pulse time axis measured from the flip.
pub fn flip_time_field<F: Scalar>(
    pulse: &PulseSpec<F>,
    medium: &MediumParams<F>,
    flip_time: F,
    k: &[F],
    validity_threshold: F,
) -> Result<KSpaceField<F>> {
    let beta = medium.optical_depth();
    let eta = medium.eta;
    let gamma_ib = complex_gamma(C::new(F::zero(), beta))?;
    let half = F::PI() * beta / F::lit(2.0);
    let (ch, sh) = (half.cosh(), half.sinh());
    let mut skipped = Vec::new();
    let values = k
        .iter()
        .enumerate()
        .map(|(idx, &kk)| {
            if kk == F::zero() {
                skipped.push(idx);
                return C::new(F::zero(), F::zero());
            }
            let x = kk / eta;
            let ax = x.abs();
            let f = pulse.value_at(flip_time - x);
            let power = cis(-beta * ax.ln()) / (ax * ax);
            let bracket = ax * ch + x * sh;
            -f * kk.signum() * beta * power * gamma_ib * bracket
        })
        .collect();
    Ok(KSpaceField {
        k: k.to_vec(),
        values,
        broadening_ratio: broadening_ratio(medium, pulse),
        validity_threshold,
        skipped,
    })
}
