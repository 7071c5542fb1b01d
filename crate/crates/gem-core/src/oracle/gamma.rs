//! Complex gamma function: Lanczos series on the right half-plane, reflection on the left.

use crate::error::{GemError, Result};
use crate::scalar::{Scalar, C};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole<F: Scalar>(s: C<F>) -> bool {
    s.im == F::zero() && s.re <= F::zero() && s.re == s.re.round()
}

/// `ln Γ(s)` for `Re s >= 1/2` (principal branch of the Lanczos form).
fn ln_gamma_right<F: Scalar>(s: C<F>) -> C<F> {
    let z = s - F::one();
    let mut x = C::new(F::lit(LANCZOS[0]), F::zero());
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += C::new(F::lit(c), F::zero()) / (z + F::from_count(k));
    }
    let t = z + F::lit(LANCZOS_G + 0.5);
    let half_ln_2pi = F::lit(0.5) * (F::lit(2.0) * F::PI()).ln();
    (z + F::lit(0.5)) * t.ln() - t + x.ln() + half_ln_2pi
}

/// `Γ(s)` for complex `s`; nonpositive integers are poles.
pub fn complex_gamma<F: Scalar>(s: C<F>) -> Result<C<F>> {
    if is_pole(s) {
        return Err(GemError::GammaPole { re: s.re.to_f64_lossy(), im: s.im.to_f64_lossy() });
    }
    if s.re >= F::lit(0.5) {
        return Ok(ln_gamma_right(s).exp());
    }
    // Γ(s) Γ(1 - s) = π / sin(π s)
    let pi = F::PI();
    let sin = (s * pi).sin();
    let rest = ln_gamma_right(C::new(F::one(), F::zero()) - s);
    Ok(C::new(pi, F::zero()) / (sin * rest.exp()))
}

/// `Γ(iβ) / Γ(-iβ)`, the unit-modulus constant of the echo map.
pub fn gamma_phase_ratio<F: Scalar>(beta: F) -> Result<C<F>> {
    let a = complex_gamma(C::new(F::zero(), beta))?;
    let b = complex_gamma(C::new(F::zero(), -beta))?;
    Ok(a / b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C<f64>, b: C<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn real_values() {
        assert!(rel(complex_gamma(C::new(1.0, 0.0)).unwrap(), C::new(1.0, 0.0)) < 1e-14);
        assert!(rel(complex_gamma(C::new(5.0, 0.0)).unwrap(), C::new(24.0, 0.0)) < 1e-13);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!(rel(complex_gamma(C::new(0.5, 0.0)).unwrap(), C::new(sqrt_pi, 0.0)) < 1e-14);
        assert!(rel(complex_gamma(C::new(-0.5, 0.0)).unwrap(), C::new(-2.0 * sqrt_pi, 0.0)) < 1e-14);
    }

    #[test]
    fn gamma_of_i() {
        // Γ(i) = -0.15494982830181068512 - 0.49801566811835604271 i
        let v = complex_gamma(C::new(0.0, 1.0)).unwrap();
        assert!(rel(v, C::new(-0.154_949_828_301_810_685_12, -0.498_015_668_118_356_042_71)) < 1e-13);
    }

    #[test]
    fn poles_are_rejected() {
        for re in [0.0, -1.0, -7.0] {
            assert!(matches!(complex_gamma(C::new(re, 0.0)), Err(GemError::GammaPole { .. })));
        }
        assert!(complex_gamma(C::new(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn f32_is_usable() {
        let v = complex_gamma(C::new(0.0_f32, 3.3)).unwrap();
        let m2 = v.norm_sqr() as f64;
        let exact = std::f64::consts::PI / (3.3 * (std::f64::consts::PI * 3.3).sinh());
        assert!((m2 - exact).abs() / exact < 1e-4);
    }
}
