//! Method-of-lines integrator for the linearized Maxwell-Bloch equations
//!
//! ```text
//! ∂α/∂t = -(γ + i(s σ η z + δ)) α + i g E
//! ∂E/∂z = i N Σ w u α
//! ```
//!
//! in the frame moving at the speed of light. The polarization is advanced with
//! classical RK4; the field has no time derivative in this frame and is
//! re-integrated along `z` from the boundary value `E(-z0, t) = f_in(t)` at
//! every stage. Atoms sit at cell centres and are driven by the mean of the
//! two bounding field nodes, which makes the discrete photon-number balance
//! exact in space.

mod history;
mod state;

pub use history::{Snapshot, SpaceTimeField};
pub use state::SolverState;

use crate::error::{GemError, Result};
use crate::model::{DetuningClasses, GridSpec, MediumParams, Protocol, PulseSpec};
use crate::scalar::{i_unit, Scalar, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Upper bound for `dt * max|detuning|`.
    pub stability_limit: f64,
    /// Run even when the stability bound is violated.
    pub allow_unstable: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { stability_limit: 0.5, allow_unstable: false }
    }
}

/// One polarization family: a (detuning class, orientation) pair.
#[derive(Debug, Clone)]
struct Family<F> {
    coupling: F,
    offset: F,
    controlled: Vec<F>,
}

#[derive(Debug, Clone)]
struct Workspace<F> {
    k: [Vec<C<F>>; 4],
    stage: Vec<C<F>>,
    source: Vec<C<F>>,
    field: Vec<C<F>>,
}

#[derive(Debug, Clone)]
pub struct MbSolver<F> {
    medium: MediumParams<F>,
    pulse: PulseSpec<F>,
    protocol: Protocol<F>,
    grid: GridSpec<F>,
    options: SolverOptions,
    classes: DetuningClasses<F>,
    families: Vec<Family<F>>,
    dz: F,
    n_cells: usize,
}

impl<F: Scalar> MbSolver<F> {
    pub fn new(medium: MediumParams<F>, pulse: PulseSpec<F>, protocol: Protocol<F>, grid: GridSpec<F>) -> Result<Self> {
        Self::with_options(medium, pulse, protocol, grid, SolverOptions::default())
    }

    pub fn with_options(
        medium: MediumParams<F>,
        pulse: PulseSpec<F>,
        protocol: Protocol<F>,
        grid: GridSpec<F>,
        options: SolverOptions,
    ) -> Result<Self> {
        medium.validate()?;
        pulse.validate()?;
        grid.validate()?;
        protocol.validate(&grid)?;
        let classes = medium.line.discretize()?;
        let cells = grid.z_cells(medium.z_half);
        let mut families = Vec::with_capacity(classes.len() * medium.orientations.len());
        for o in &medium.orientations {
            let sigma: F = o.sign.factor();
            for (&offset, &w) in classes.offsets.iter().zip(&classes.weights) {
                families.push(Family {
                    coupling: w * o.weight,
                    offset,
                    controlled: cells.iter().map(|&z| sigma * medium.eta * z).collect(),
                });
            }
        }
        let solver = MbSolver {
            dz: grid.dz(medium.z_half),
            n_cells: cells.len(),
            medium,
            pulse,
            protocol,
            grid,
            options,
            classes,
            families,
        };
        let product = solver.stability_product().to_f64_lossy();
        if product > options.stability_limit && !options.allow_unstable {
            return Err(GemError::Unstable { product, limit: options.stability_limit });
        }
        Ok(solver)
    }

    /// `dt * max|detuning|` for the configured grid.
    pub fn stability_product(&self) -> F {
        self.grid.dt * (self.medium.half_bandwidth() + self.classes.max_abs_offset())
    }

    pub fn medium(&self) -> &MediumParams<F> {
        &self.medium
    }

    pub fn options(&self) -> SolverOptions {
        self.options
    }

    pub fn pulse(&self) -> &PulseSpec<F> {
        &self.pulse
    }

    pub fn protocol(&self) -> &Protocol<F> {
        &self.protocol
    }

    pub fn grid(&self) -> &GridSpec<F> {
        &self.grid
    }

    pub fn classes(&self) -> &DetuningClasses<F> {
        &self.classes
    }

    pub fn n_families(&self) -> usize {
        self.families.len()
    }

    /// Quiescent state at `t_start`: all polarization zero.
    pub fn initial_state(&self) -> SolverState<F> {
        let t = self.grid.t_start;
        let mut state = SolverState {
            t,
            sign: self.protocol.direction.initial_sign(),
            flips_applied: 0,
            n_cells: self.n_cells,
            alpha: vec![C::new(F::zero(), F::zero()); self.n_cells * self.families.len()],
            field: vec![C::new(F::zero(), F::zero()); self.n_cells + 1],
        };
        let mut source = vec![C::new(F::zero(), F::zero()); self.n_cells];
        self.solve_field(t, &state.alpha, &mut state.field, &mut source);
        state
    }

    fn workspace(&self) -> Workspace<F> {
        let n = self.n_cells * self.families.len();
        let zero = C::new(F::zero(), F::zero());
        Workspace {
            k: [vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]],
            stage: vec![zero; n],
            source: vec![zero; self.n_cells],
            field: vec![zero; self.n_cells + 1],
        }
    }

    /// Integrates `∂E/∂z = i N Σ w u α` from `E(-z0) = f_in(t)`.
    fn solve_field(&self, t: F, alpha: &[C<F>], field: &mut [C<F>], source: &mut [C<F>]) {
        let n = self.n_cells;
        source.iter_mut().for_each(|s| *s = C::new(F::zero(), F::zero()));
        for (f, fam) in self.families.iter().enumerate() {
            let a = &alpha[f * n..(f + 1) * n];
            for (s, &x) in source.iter_mut().zip(a) {
                *s += x * fam.coupling;
            }
        }
        let step = i_unit::<F>() * (self.medium.density * self.dz);
        field[0] = self.pulse.value_at(t);
        for j in 0..n {
            field[j + 1] = field[j] + step * source[j];
        }
    }

    fn rhs(&self, t: F, sign: F, alpha: &[C<F>], out: &mut [C<F>], field: &mut [C<F>], source: &mut [C<F>]) {
        self.solve_field(t, alpha, field, source);
        let n = self.n_cells;
        let half = F::lit(0.5);
        let gamma = self.medium.gamma;
        let ig = i_unit::<F>() * self.medium.g;
        for (f, fam) in self.families.iter().enumerate() {
            let a = &alpha[f * n..(f + 1) * n];
            let o = &mut out[f * n..(f + 1) * n];
            for j in 0..n {
                let det = sign * fam.controlled[j] + fam.offset;
                let drive = (field[j] + field[j + 1]) * half;
                o[j] = -a[j] * C::new(gamma, det) + ig * drive;
            }
        }
    }

    fn rk4(&self, state: &mut SolverState<F>, h: F, ws: &mut Workspace<F>) {
        let t = state.t;
        let s = state.sign;
        let half = F::lit(0.5) * h;
        let Workspace { k, stage, source, field } = ws;
        let [k1, k2, k3, k4] = k;
        self.rhs(t, s, &state.alpha, k1, field, source);
        for ((st, a), d) in stage.iter_mut().zip(&state.alpha).zip(k1.iter()) {
            *st = *a + *d * half;
        }
        self.rhs(t + half, s, stage, k2, field, source);
        for ((st, a), d) in stage.iter_mut().zip(&state.alpha).zip(k2.iter()) {
            *st = *a + *d * half;
        }
        self.rhs(t + half, s, stage, k3, field, source);
        for ((st, a), d) in stage.iter_mut().zip(&state.alpha).zip(k3.iter()) {
            *st = *a + *d * h;
        }
        self.rhs(t + h, s, stage, k4, field, source);
        let w = h / F::lit(6.0);
        let two = F::lit(2.0);
        for (j, a) in state.alpha.iter_mut().enumerate() {
            *a += (k1[j] + (k2[j] + k3[j]) * two + k4[j]) * w;
        }
        state.t = t + h;
    }

    /// Reverses the controlled gradient term. Static class offsets are untouched.
    pub fn flip_sign(&self, state: &mut SolverState<F>) {
        state.sign = -state.sign;
        state.flips_applied += 1;
    }

    /// Advances `state` to `t_next`, splitting the step at any flip event.
    /// `on_flip` sees the state at each flip instant, before the sign change.
    fn advance_to(
        &self,
        state: &mut SolverState<F>,
        t_next: F,
        ws: &mut Workspace<F>,
        mut on_flip: impl FnMut(&SolverState<F>, &mut Workspace<F>),
    ) {
        let tiny = self.grid.dt * F::lit(1e-9);
        while let Some(&f) = self.protocol.flip_times.get(state.flips_applied) {
            if f > t_next - tiny {
                break;
            }
            if f - state.t > tiny {
                self.rk4(state, f - state.t, ws);
            }
            state.t = f;
            on_flip(state, ws);
            self.flip_sign(state);
        }
        let h = t_next - state.t;
        if h > tiny {
            self.rk4(state, h, ws);
        }
        state.t = t_next;
    }

    /// One time step of length `dt`; the field in `state` is refreshed at the new time.
    pub fn step(&self, state: &mut SolverState<F>, dt: F) -> Result<()> {
        let mut ws = self.workspace();
        self.advance_to(state, state.t + dt, &mut ws, |_, _| {});
        self.solve_field(state.t, &state.alpha, &mut state.field, &mut ws.source);
        self.check_finite(state)
    }

    fn check_finite(&self, state: &SolverState<F>) -> Result<()> {
        if state.field.iter().all(|e| e.re.is_finite() && e.im.is_finite()) {
            return Ok(());
        }
        let bad = state
            .alpha
            .iter()
            .position(|a| !(a.re.is_finite() && a.im.is_finite()))
            .map(|k| k % self.n_cells)
            .unwrap_or(0);
        Err(GemError::NonFinite { t: state.t.to_f64_lossy(), z_index: bad })
    }

    fn excitation(&self, alpha: &[C<F>]) -> F {
        let n = self.n_cells;
        let mut total = F::zero();
        for (f, fam) in self.families.iter().enumerate() {
            let s = alpha[f * n..(f + 1) * n].iter().fold(F::zero(), |acc, a| acc + a.norm_sqr());
            total += s * fam.coupling;
        }
        total * self.dz
    }

    fn snapshot(&self, state: &SolverState<F>, ws: &mut Workspace<F>) -> Snapshot<F> {
        self.solve_field(state.t, &state.alpha, &mut ws.field, &mut ws.source);
        Snapshot { t: state.t, field: ws.field.clone(), polarization: ws.source.clone() }
    }

    /// Integrates over the whole window and records the history.
    pub fn run(&self) -> Result<SpaceTimeField<F>> {
        let n_steps = self.grid.n_steps();
        let stride = self.grid.store_stride;
        let mut ws = self.workspace();
        let mut state = self.initial_state();
        let mut out = SpaceTimeField {
            times: Vec::with_capacity(n_steps + 1),
            input: Vec::with_capacity(n_steps + 1),
            output: Vec::with_capacity(n_steps + 1),
            excitation: Vec::with_capacity(n_steps + 1),
            z_nodes: self.grid.z_nodes(self.medium.z_half),
            z_cells: self.grid.z_cells(self.medium.z_half),
            snapshots: Vec::with_capacity(n_steps / stride + 2),
            flip_snapshots: Vec::new(),
            flip_times: self.protocol.flip_times.clone(),
            dt: self.grid.dt,
            g: self.medium.g,
            density: self.medium.density,
            gamma: self.medium.gamma,
        };
        let passive = self.medium.g > F::zero() && self.medium.density > F::zero();
        let coupling = if passive { self.medium.g / self.medium.density } else { F::zero() };
        let mut delivered = F::zero();
        for n in 0..=n_steps {
            if n > 0 {
                let mut flips = Vec::new();
                self.advance_to(&mut state, self.grid.time(n), &mut ws, |s, ws| flips.push(self.snapshot(s, ws)));
                out.flip_snapshots.extend(flips);
            }
            self.solve_field(state.t, &state.alpha, &mut state.field, &mut ws.source);
            self.check_finite(&state)?;
            let w = self.excitation(&state.alpha);
            if let Some(prev) = out.input.last() {
                delivered += F::lit(0.5) * self.grid.dt * coupling * (prev.norm_sqr() + state.field[0].norm_sqr());
            }
            if passive && w > F::lit(2.0) * delivered && w > F::min_positive_value() {
                return Err(GemError::Diverged { t: state.t.to_f64_lossy() });
            }
            out.times.push(state.t);
            out.input.push(state.field[0]);
            out.output.push(state.field[self.n_cells]);
            out.excitation.push(w);
            if n % stride == 0 {
                out.snapshots.push(Snapshot { t: state.t, field: state.field.clone(), polarization: ws.source.clone() });
            }
        }
        Ok(out)
    }
}
