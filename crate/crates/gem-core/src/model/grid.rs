use crate::error::{GemError, Result};
use crate::scalar::Scalar;

/// Discretization of the space-time window.
///
/// `n_z` field nodes span `[-z0, z0]`; atoms live at the `n_z - 1` cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec<F> {
    pub n_z: usize,
    pub dt: F,
    pub t_start: F,
    pub t_end: F,
    pub store_stride: usize,
}

impl<F: Scalar> GridSpec<F> {
    pub fn validate(&self) -> Result<()> {
        if self.n_z < 2 {
            return Err(GemError::invalid("grid.n_z", "need at least two spatial nodes"));
        }
        if !(self.dt > F::zero() && self.dt.is_finite()) {
            return Err(GemError::invalid("grid.dt", "time step must be finite and > 0"));
        }
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_start < self.t_end) {
            return Err(GemError::invalid("grid.t_end", "window must satisfy t_start < t_end"));
        }
        if self.store_stride == 0 {
            return Err(GemError::invalid("grid.store_stride", "stride must be >= 1"));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.dt).round().to_usize().unwrap_or(0).max(1)
    }

    pub fn time(&self, n: usize) -> F {
        self.t_start + self.dt * F::from_count(n)
    }

    /// Sample times `t_0 .. t_{n_steps}` inclusive.
    pub fn times(&self) -> Vec<F> {
        (0..=self.n_steps()).map(|n| self.time(n)).collect()
    }

    pub fn dz(&self, z_half: F) -> F {
        F::lit(2.0) * z_half / F::from_count(self.n_z - 1)
    }

    pub fn z_nodes(&self, z_half: F) -> Vec<F> {
        let dz = self.dz(z_half);
        (0..self.n_z).map(|j| -z_half + dz * F::from_count(j)).collect()
    }

    pub fn z_cells(&self, z_half: F) -> Vec<F> {
        let dz = self.dz(z_half);
        (0..self.n_z - 1).map(|j| -z_half + dz * (F::from_count(j) + F::lit(0.5))).collect()
    }

    /// Same window with `dt / 2` and twice the spatial resolution.
    pub fn refined(&self) -> Self {
        GridSpec {
            n_z: 2 * (self.n_z - 1) + 1,
            dt: self.dt / F::lit(2.0),
            store_stride: self.store_stride * 2,
            ..self.clone()
        }
    }
}
