use gem_core::analysis::{is_monotone, sweep, RunReport};
use gem_core::config::{load, BuiltScenario};
use gem_core::experiment::run_experiment;
use gem_core::model::{Orientation, StarkSign};
use gem_core::solver::MbSolver;
use gem_core::History;
use proptest::prelude::*;

fn scenario(name: &str, sets: &[String]) -> BuiltScenario {
    load(Some(name), None, sets).unwrap().build().unwrap()
}

fn run(b: &BuiltScenario) -> History {
    MbSolver::with_options(b.medium.clone(), b.pulse.clone(), b.protocol.clone(), b.grid.clone(), b.solver)
        .unwrap()
        .run()
        .unwrap()
}

fn experiment_efficiency(sets: &[String]) -> f64 {
    let b = scenario("fig4_experiment", sets);
    run_experiment(b.experiment.as_ref().unwrap()).unwrap().report.efficiency
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn recovered_and_transmitted_energy_never_exceed_input(
        beta in 0.0_f64..4.0,
        ratio in 2.0_f64..4.0,
        gamma in 0.0_f64..0.5,
    ) {
        let sets = vec![
            format!("medium.optical_depth={beta}"),
            format!("medium.broadening={ratio}"),
            format!("medium.gamma={gamma}"),
            "grid.n_z=201".to_string(),
            "grid.dt=0.01".to_string(),
        ];
        let r = RunReport::from_history(&run(&scenario("fig1_ideal", &sets))).unwrap();
        prop_assert!(r.efficiency + r.transmission <= 1.0 + 1e-6, "{} + {}", r.efficiency, r.transmission);
        prop_assert!(r.efficiency >= 0.0 && r.transmission >= 0.0);
    }

    #[test]
    fn output_scales_with_input_amplitude(re in -3.0_f64..3.0, im in -3.0_f64..3.0) {
        prop_assume!(re.hypot(im) > 1e-3);
        let sets = vec!["grid.n_z=101".to_string(), "grid.dt=0.02".to_string()];
        let base = scenario("fig1_ideal", &sets);
        let mut scaled = base.clone();
        let a = gem_core::C::new(re, im);
        scaled.pulse = base.pulse.scaled(a);
        let (h0, h1) = (run(&base), run(&scaled));
        let peak = h1.output.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = h0.output.iter().zip(&h1.output).map(|(x, y)| (x * a - y).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10 * peak);
    }
}

#[test]
fn swapping_orientation_labels_preserves_output_magnitude() {
    let mut b = scenario("fig4_experiment", &["experiment.line_classes=11".to_string(), "experiment.n_z=201".to_string()]);
    let mut medium = b.medium.clone();
    medium.orientations = vec![
        Orientation { sign: StarkSign::Positive, weight: 0.7 },
        Orientation { sign: StarkSign::Negative, weight: 0.3 },
    ];
    b.medium = medium.clone();
    let h = run(&b);
    b.medium.orientations = medium
        .orientations
        .iter()
        .map(|o| Orientation { sign: o.sign.flipped(), weight: o.weight })
        .collect();
    let hs = run(&b);
    let peak = h.output.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let err = h.output.iter().zip(&hs.output).map(|(x, y)| (x.norm() - y.norm()).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-10 * peak, "{err}");
}

#[test]
fn narrow_line_single_orientation_matches_ideal_medium() {
    let common = [
        "experiment.single_orientation=true".to_string(),
        "experiment.n_z=201".to_string(),
        "experiment.dt=0.01".to_string(),
    ];
    let ideal = experiment_efficiency(&[common.to_vec(), vec!["experiment.intrinsic_khz=0".into()]].concat());
    let narrow = experiment_efficiency(&[common.to_vec(), vec!["experiment.intrinsic_khz=0.01".into()]].concat());
    assert!((ideal - narrow).abs() / ideal < 1e-3, "{ideal} vs {narrow}");
}

#[test]
fn efficiency_rises_with_optical_depth_on_experiment_base() {
    let rows = sweep(&[0.5, 1.0, 1.5, 2.0], |f| {
        Ok(experiment_efficiency(&[format!("experiment.depth_factor={f}")]))
    });
    assert!(is_monotone(&rows, |e| *e, true), "{rows:?}");
}

#[test]
fn single_orientation_efficiency_rises_with_optical_depth() {
    let rows = sweep(&[0.5, 1.0, 2.0, 3.0, 4.0], |f| {
        Ok(experiment_efficiency(&[
            format!("experiment.depth_factor={f}"),
            "experiment.single_orientation=true".to_string(),
        ]))
    });
    assert!(is_monotone(&rows, |e| *e, true), "{rows:?}");
}

#[test]
fn opposite_orientation_reabsorbs_echo_at_high_depth() {
    let at = |f: f64| experiment_efficiency(&[format!("experiment.depth_factor={f}")]);
    assert!(at(3.0) < at(2.0));
}

#[test]
fn efficiency_falls_with_intrinsic_width() {
    let rows = sweep(&[0.0, 30.0, 60.0], |w| {
        Ok(experiment_efficiency(&[format!("experiment.intrinsic_khz={w}")]))
    });
    assert!(is_monotone(&rows, |e| *e, false), "{rows:?}");
}
