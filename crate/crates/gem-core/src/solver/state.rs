use crate::scalar::{Scalar, C};

/// Instantaneous solver state.
///
/// `alpha` is stored family-major: family `f` (class `m`, orientation `o`)
/// occupies `alpha[f * n_cells .. (f + 1) * n_cells]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState<F> {
    pub t: F,
    /// Sign `s` of the controlled gradient term.
    pub sign: F,
    pub flips_applied: usize,
    pub n_cells: usize,
    pub alpha: Vec<C<F>>,
    pub field: Vec<C<F>>,
}

impl<F: Scalar> SolverState<F> {
    pub fn family(&self, f: usize) -> &[C<F>] {
        &self.alpha[f * self.n_cells..(f + 1) * self.n_cells]
    }

    pub fn alpha_norm(&self) -> F {
        self.alpha.iter().fold(F::zero(), |acc, a| acc + a.norm_sqr()).sqrt()
    }
}
