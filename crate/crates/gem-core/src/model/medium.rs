use crate::error::{GemError, Result};
use crate::model::line::IntrinsicLineModel;
use crate::scalar::Scalar;

/// Sign of the Stark coefficient of a site orientation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StarkSign {
    Positive,
    Negative,
}

impl StarkSign {
    pub fn factor<F: Scalar>(self) -> F {
        match self {
            StarkSign::Positive => F::one(),
            StarkSign::Negative => -F::one(),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            StarkSign::Positive => StarkSign::Negative,
            StarkSign::Negative => StarkSign::Positive,
        }
    }
}

/// One family of dopant sites sharing a Stark orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orientation<F> {
    pub sign: StarkSign,
    pub weight: F,
}

/// Ensemble constants of the two-level medium.
///
/// `eta` is the detuning gradient, so an atom at `z` sits at detuning `eta * z`
/// (times the orientation sign). The sample spans `[-z_half, z_half]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumParams<F> {
    pub g: F,
    pub density: F,
    pub gamma: F,
    pub eta: F,
    pub z_half: F,
    pub line: IntrinsicLineModel<F>,
    pub orientations: Vec<Orientation<F>>,
}

impl<F: Scalar> MediumParams<F> {
    /// Single orientation, delta intrinsic line.
    pub fn ideal(g: F, density: F, gamma: F, eta: F, z_half: F) -> Result<Self> {
        let m = MediumParams {
            g,
            density,
            gamma,
            eta,
            z_half,
            line: IntrinsicLineModel::delta(),
            orientations: vec![Orientation { sign: StarkSign::Positive, weight: F::one() }],
        };
        m.validate()?;
        Ok(m)
    }

    /// Medium with the given optical depth `beta = g N / eta`, choosing `N` from `g`.
    pub fn with_optical_depth(beta: F, g: F, eta: F, z_half: F) -> Result<Self> {
        if !(g > F::zero()) {
            return Err(GemError::invalid("medium.g", "optical depth needs g > 0"));
        }
        Self::ideal(g, beta * eta / g, F::zero(), eta, z_half)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: F| x.is_finite();
        if !(finite(self.eta) && self.eta > F::zero()) {
            return Err(GemError::invalid("medium.eta", "gradient must be finite and > 0"));
        }
        if !(finite(self.z_half) && self.z_half > F::zero()) {
            return Err(GemError::invalid("medium.z_half", "half-length must be finite and > 0"));
        }
        if !(finite(self.g) && self.g >= F::zero()) {
            return Err(GemError::invalid("medium.g", "coupling must be finite and >= 0"));
        }
        if !(finite(self.density) && self.density >= F::zero()) {
            return Err(GemError::invalid("medium.density", "density must be finite and >= 0"));
        }
        if !(finite(self.gamma) && self.gamma >= F::zero()) {
            return Err(GemError::invalid("medium.gamma", "decay rate must be finite and >= 0"));
        }
        if self.orientations.is_empty() || self.orientations.len() > 2 {
            return Err(GemError::invalid("orientations.weights", "one or two orientation families"));
        }
        let mut total = F::zero();
        for o in &self.orientations {
            if !(o.weight >= F::zero()) {
                return Err(GemError::invalid("orientations.weights", "weights must be >= 0"));
            }
            total += o.weight;
        }
        if (total - F::one()).abs() > F::lit(1e-9) {
            return Err(GemError::invalid("orientations.weights", format!("weights sum to {total}, not 1")));
        }
        self.line.validate()
    }

    /// Optical depth `beta = g N / eta`.
    pub fn optical_depth(&self) -> F {
        self.g * self.density / self.eta
    }

    /// Largest controlled detuning `eta * z0` (half the applied bandwidth).
    pub fn half_bandwidth(&self) -> F {
        self.eta * self.z_half
    }
}
