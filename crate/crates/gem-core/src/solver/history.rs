use crate::scalar::{Scalar, C};

/// Field on the nodes and source-summed polarization `Σ w_m u_o α_{m,o}` on the cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<F> {
    pub t: F,
    pub field: Vec<C<F>>,
    pub polarization: Vec<C<F>>,
}

/// Recorded history of a run.
///
/// Boundary series and the stored excitation `W(t) = ∫ Σ w u |α|² dz` are kept at
/// every time step; space-time snapshots every `store_stride` steps plus one
/// snapshot at each flip instant.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField<F> {
    pub times: Vec<F>,
    pub input: Vec<C<F>>,
    pub output: Vec<C<F>>,
    pub excitation: Vec<F>,
    pub z_nodes: Vec<F>,
    pub z_cells: Vec<F>,
    pub snapshots: Vec<Snapshot<F>>,
    pub flip_snapshots: Vec<Snapshot<F>>,
    pub flip_times: Vec<F>,
    pub dt: F,
    pub g: F,
    pub density: F,
    pub gamma: F,
}

impl<F: Scalar> SpaceTimeField<F> {
    pub fn first_flip(&self) -> Option<F> {
        self.flip_times.first().copied()
    }

    /// Stored snapshot closest to `t`.
    pub fn snapshot_near(&self, t: F) -> Option<&Snapshot<F>> {
        self.snapshots
            .iter()
            .min_by(|a, b| (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap())
    }

    /// Time and intensity of the largest `|E(z0, t)|²` sample.
    pub fn peak_output(&self) -> (F, F) {
        self.times
            .iter()
            .zip(&self.output)
            .fold((F::zero(), F::zero()), |(bt, bv), (&t, e)| {
                let v = e.norm_sqr();
                if v > bv {
                    (t, v)
                } else {
                    (bt, bv)
                }
            })
    }
}
