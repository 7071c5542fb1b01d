use crate::error::{GemError, Result};
use crate::model::grid::GridSpec;
use crate::scalar::Scalar;

/// Initial polarity of the controlled gradient term in `dα/dt = -(γ + i s η z) α + i g E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlipDirection {
    /// Starts with `s = +1` (`-iηz`) and flips to `+iηz`.
    Forward,
    /// Starts with `s = -1` (`+iηz`) and flips to `-iηz`.
    Reversed,
}

impl FlipDirection {
    pub fn initial_sign<F: Scalar>(self) -> F {
        match self {
            FlipDirection::Forward => F::one(),
            FlipDirection::Reversed => -F::one(),
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            FlipDirection::Forward => FlipDirection::Reversed,
            FlipDirection::Reversed => FlipDirection::Forward,
        }
    }
}

/// Second memory fed with the first memory's output at `z0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeStage<F> {
    pub flip_time: F,
    pub direction: FlipDirection,
    pub t_end: F,
}

/// Timeline of gradient sign reversals.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol<F> {
    pub flip_times: Vec<F>,
    pub direction: FlipDirection,
    pub cascade: Option<CascadeStage<F>>,
}

impl<F: Scalar> Protocol<F> {
    pub fn single_flip(at: F) -> Self {
        Protocol { flip_times: vec![at], direction: FlipDirection::Forward, cascade: None }
    }

    /// No flip: the medium only absorbs and transmits.
    pub fn storage_only() -> Self {
        Protocol { flip_times: Vec::new(), direction: FlipDirection::Forward, cascade: None }
    }

    pub fn validate(&self, grid: &GridSpec<F>) -> Result<()> {
        if self.flip_times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(GemError::invalid("protocol.flips", "flip times must be strictly increasing"));
        }
        if self
            .flip_times
            .iter()
            .any(|&t| !(t > grid.t_start && t < grid.t_end))
        {
            return Err(GemError::invalid("protocol.flips", "flip times must lie inside (t_start, t_end)"));
        }
        if let Some(c) = &self.cascade {
            if !(c.t_end > c.flip_time && c.flip_time > grid.t_start) {
                return Err(GemError::invalid("cascade.flip_time", "second stage flip must lie inside its window"));
            }
        }
        Ok(())
    }

    pub fn first_flip(&self) -> Option<F> {
        self.flip_times.first().copied()
    }

    /// Sign `s` in effect just after time `t` (flips at exactly `t` already applied).
    pub fn sign_at(&self, t: F) -> F {
        let n = self.flip_times.iter().filter(|&&f| f <= t).count();
        let s0: F = self.direction.initial_sign();
        if n % 2 == 0 {
            s0
        } else {
            -s0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec<f64> {
        GridSpec { n_z: 3, dt: 0.1, t_start: -1.0, t_end: 1.0, store_stride: 1 }
    }

    #[test]
    fn sign_follows_flips() {
        let p = Protocol { flip_times: vec![0.0, 0.5], direction: FlipDirection::Forward, cascade: None };
        assert_eq!(p.sign_at(-0.1), 1.0);
        assert_eq!(p.sign_at(0.0), -1.0);
        assert_eq!(p.sign_at(0.7), 1.0);
    }

    #[test]
    fn flips_must_be_inside_and_increasing() {
        assert!(Protocol::single_flip(0.0).validate(&grid()).is_ok());
        assert!(Protocol::single_flip(1.0).validate(&grid()).is_err());
        let p = Protocol { flip_times: vec![0.2, 0.1], direction: FlipDirection::Forward, cascade: None };
        assert!(p.validate(&grid()).is_err());
    }
}
