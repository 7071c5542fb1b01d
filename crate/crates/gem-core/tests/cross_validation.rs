use approx::assert_relative_eq;
use gem_core::analysis::{chirp_estimate, ChirpOptions, RunReport};
use gem_core::compare::{compare_echo, compare_kspace, compare_transfer};
use gem_core::config::{load, BuiltScenario};
use gem_core::oracle::echo_frequency;
use gem_core::solver::MbSolver;
use gem_core::History;

fn scenario(name: &str, sets: &[&str]) -> BuiltScenario {
    let sets: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    load(Some(name), None, &sets).unwrap().build().unwrap()
}

fn run(b: &BuiltScenario) -> History {
    MbSolver::with_options(b.medium.clone(), b.pulse.clone(), b.protocol.clone(), b.grid.clone(), b.solver)
        .unwrap()
        .run()
        .unwrap()
}

#[test]
fn echo_matches_closed_form_at_moderate_depth() {
    let b = scenario("fig1_ideal", &["medium.optical_depth=1.5"]);
    let c = compare_echo(&run(&b), &b.pulse, 1.5).unwrap();
    assert!(c.rms < 0.02, "{}", c.rms);
    assert!(c.correlation > 0.999, "{}", c.correlation);
}

#[test]
fn zero_depth_is_passthrough_for_solver_and_oracle() {
    let b = scenario("fig1_ideal", &["medium.optical_depth=0"]);
    let h = run(&b);
    let c = compare_echo(&h, &b.pulse, 0.0).unwrap();
    assert!(c.rms < 1e-12);
    let r = RunReport::from_history(&h).unwrap();
    assert_relative_eq!(r.transmission, 1.0, max_relative = 1e-9);
    assert!(r.efficiency.abs() < 1e-12);
}

#[test]
fn transfer_magnitude_follows_exponential_law() {
    let b = scenario("fig1_ideal", &["medium.optical_depth=0.5"]);
    let c = compare_transfer(&b.medium, &b.pulse, &b.grid, b.solver, 0.5, 1e-2).unwrap();
    assert!(c.log_error < 0.05, "{}", c.log_error);
    assert_relative_eq!(c.mean_log_magnitude, -std::f64::consts::PI * 0.5, max_relative = 0.05);
}

#[test]
fn flip_time_field_flags_narrow_broadening() {
    let b = scenario("fig1_ideal", &[]);
    let k = compare_kspace(&run(&b), &b.medium, &b.pulse, b.oracle.kspace_threshold).unwrap();
    assert!(!k.valid);
    assert!(k.warning.is_some());
}

#[test]
fn chirp_tracks_inverse_storage_time() {
    let mut last = None;
    for (t0, sets) in [(4.0, vec!["pulse.center=-4"]), (6.0, vec!["pulse.center=-6", "grid.t_start=-10", "grid.t_end=14"])] {
        let b = scenario("fig2_short_storage", &sets);
        let h = run(&b);
        let echo: Vec<_> = h
            .times
            .iter()
            .zip(&h.output)
            .map(|(&t, &e)| if t > 0.0 { e } else { gem_core::C::new(0.0, 0.0) })
            .collect();
        let f = chirp_estimate(&h.times, &echo, ChirpOptions::default()).unwrap().frequency;
        let predicted = echo_frequency(b.medium.optical_depth(), t0);
        assert!((f.abs() - predicted).abs() / predicted < 0.1, "t0 {t0}: {f} vs {predicted}");
        if let Some(prev) = last {
            assert_relative_eq!(prev / f, t0 / 4.0, max_relative = 0.05);
        }
        last = Some(f);
    }
}
