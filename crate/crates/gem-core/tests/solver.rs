use gem_core::config::load;
use gem_core::solver::MbSolver;
use gem_core::GemError;

fn solver(sets: &[&str]) -> gem_core::Result<gem_core::Solver> {
    let sets: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    let b = load(Some("fig1_ideal"), None, &sets)?.build()?;
    MbSolver::with_options(b.medium, b.pulse, b.protocol, b.grid, b.solver)
}

#[test]
fn coarse_time_step_is_rejected_up_front() {
    let e = solver(&["grid.dt=0.3"]).unwrap_err();
    assert!(matches!(e, GemError::Unstable { .. }));
    assert!(e.is_config_error());
}

#[test]
fn forced_unstable_run_reports_divergence() {
    let s = solver(&["grid.dt=0.3", "solver.allow_unstable=true"]).unwrap();
    let e = s.run().unwrap_err();
    assert!(matches!(e, GemError::Diverged { .. } | GemError::NonFinite { .. }), "{e}");
    assert!(!e.is_config_error());
}

#[test]
fn history_records_every_step_and_flip() {
    let s = solver(&["grid.n_z=51", "grid.dt=0.02"]).unwrap();
    let h = s.run().unwrap();
    assert_eq!(h.times.len(), s.grid().n_steps() + 1);
    assert_eq!(h.flip_snapshots.len(), 1);
    assert_eq!(h.flip_snapshots[0].t, 0.0);
    assert_eq!(h.z_nodes.len(), 51);
    assert_eq!(h.z_cells.len(), 50);
    assert!(h.excitation.iter().all(|w| *w >= 0.0));
}

#[test]
fn stepping_by_hand_matches_run() {
    let s = solver(&["grid.n_z=51", "grid.dt=0.02", "protocol.flips=none"]).unwrap();
    let h = s.run().unwrap();
    let mut st = s.initial_state();
    for _ in 0..s.grid().n_steps() {
        s.step(&mut st, s.grid().dt).unwrap();
    }
    let last = *h.output.last().unwrap();
    assert!((st.field[50] - last).norm() <= 1e-12 * (1.0 + last.norm()), "{} vs {last}", st.field[50]);
}
