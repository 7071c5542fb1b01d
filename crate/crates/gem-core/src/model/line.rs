use crate::error::{GemError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineShape {
    Delta,
    Lorentzian,
    Gaussian,
}

/// Static (non-reversible) broadening of the prepared absorption line.
///
/// The line is represented by `n_classes` frozen detuning classes spread
/// over `[-truncation * width, truncation * width]`; `width` is the FWHM.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicLineModel<F> {
    pub shape: LineShape,
    pub width: F,
    pub n_classes: usize,
    pub truncation: F,
}

/// Discrete detuning classes with their population weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DetuningClasses<F> {
    pub offsets: Vec<F>,
    pub weights: Vec<F>,
}

impl<F: Scalar> DetuningClasses<F> {
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn max_abs_offset(&self) -> F {
        self.offsets.iter().fold(F::zero(), |m, d| m.max(d.abs()))
    }

    /// Weighted second moment of the offsets.
    pub fn second_moment(&self) -> F {
        self.offsets.iter().zip(&self.weights).fold(F::zero(), |acc, (d, w)| acc + *w * *d * *d)
    }
}

impl<F: Scalar> IntrinsicLineModel<F> {
    pub fn delta() -> Self {
        IntrinsicLineModel {
            shape: LineShape::Delta,
            width: F::zero(),
            n_classes: 1,
            truncation: F::lit(10.0),
        }
    }

    pub fn lorentzian(width: F, n_classes: usize) -> Self {
        IntrinsicLineModel { shape: LineShape::Lorentzian, width, n_classes, truncation: F::lit(10.0) }
    }

    pub fn gaussian(width: F, n_classes: usize) -> Self {
        IntrinsicLineModel { shape: LineShape::Gaussian, width, n_classes, truncation: F::lit(4.0) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_classes == 0 {
            return Err(GemError::invalid("line.classes", "need at least one class"));
        }
        if self.n_classes == 1 && self.shape != LineShape::Delta {
            return Err(GemError::invalid("line.classes", "a single class only represents a delta line"));
        }
        if self.n_classes > 1 {
            if self.shape == LineShape::Delta {
                return Err(GemError::invalid("line.classes", "a delta line has exactly one class"));
            }
            if !(self.width > F::zero() && self.width.is_finite()) {
                return Err(GemError::invalid("line.width", "width must be > 0 with more than one class"));
            }
            if !(self.truncation > F::zero() && self.truncation.is_finite()) {
                return Err(GemError::invalid("line.truncation", "truncation must be > 0"));
            }
        }
        Ok(())
    }

    /// Splits the support into `n_classes` equal bins; each class sits at its
    /// bin centre and carries the line's probability mass over the bin.
    pub fn discretize(&self) -> Result<DetuningClasses<F>> {
        self.validate()?;
        if self.shape == LineShape::Delta {
            return Ok(DetuningClasses { offsets: vec![F::zero()], weights: vec![F::one()] });
        }
        let m = self.n_classes;
        let half = (self.truncation * self.width).to_f64_lossy();
        let width = self.width.to_f64_lossy();
        let bin = 2.0 * half / m as f64;
        let cdf = |x: f64| -> f64 {
            match self.shape {
                LineShape::Lorentzian => (2.0 * x / width).atan() / std::f64::consts::PI,
                LineShape::Gaussian => {
                    let sigma = width / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
                    0.5 * libm::erf(x / (sigma * std::f64::consts::SQRT_2))
                }
                LineShape::Delta => unreachable!(),
            }
        };
        let mut offsets = Vec::with_capacity(m);
        let mut raw = Vec::with_capacity(m);
        for k in 0..m {
            let lo = -half + bin * k as f64;
            let hi = lo + bin;
            offsets.push(-half + bin * (k as f64 + 0.5));
            raw.push(cdf(hi) - cdf(lo));
        }
        // exact antisymmetry of offsets and symmetry of weights
        for k in 0..m / 2 {
            let c = -offsets[m - 1 - k];
            offsets[k] = c;
            let w = 0.5 * (raw[k] + raw[m - 1 - k]);
            raw[k] = w;
            raw[m - 1 - k] = w;
        }
        if m % 2 == 1 {
            offsets[m / 2] = 0.0;
        }
        let total: f64 = raw.iter().sum();
        Ok(DetuningClasses {
            offsets: offsets.into_iter().map(F::lit).collect(),
            weights: raw.into_iter().map(|w| F::lit(w / total)).collect(),
        })
    }
}
