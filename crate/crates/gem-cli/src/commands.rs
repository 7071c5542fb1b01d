use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use gem_core::analysis::{sweep as run_sweep, time_spectrum, RunReport, REPORT_COLUMNS};
use gem_core::cascade::run_cascade;
use gem_core::compare::{compare_echo, compare_kspace, compare_transfer};
use gem_core::config::{load, BuiltScenario, ScenarioConfig};
use gem_core::experiment::{run_experiment, ExperimentRun};
use gem_core::model::LineShape;
use gem_core::solver::{MbSolver, SpaceTimeField};
use gem_core::GemError;

use crate::output::{boundary_csv, csv, num, write_atomic, zt_csv};
use crate::{Common, Failure};

const EMIT_KINDS: [&str; 5] = ["boundary", "field_zt", "alpha_zt", "spectra", "config"];

/// Energy-balance residual above which a lossless run is flagged.
const BALANCE_WARNING: f64 = 1e-3;

type Outcome = Result<Vec<String>, Failure>;

fn emit_set(common: &Common) -> Result<BTreeSet<String>, Failure> {
    let raw = common.emit.clone().unwrap_or_else(|| "boundary,config".to_string());
    let mut set = BTreeSet::new();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if !EMIT_KINDS.contains(&item) {
            return Err(Failure::Config(format!("--emit: unknown output `{item}` (choose from {})", EMIT_KINDS.join(", "))));
        }
        set.insert(item.to_string());
    }
    Ok(set)
}

fn load_config(common: &Common, extra: &[String]) -> Result<ScenarioConfig, Failure> {
    let text = match &common.config {
        Some(p) => Some(
            std::fs::read_to_string(p).map_err(|e| Failure::Config(format!("cannot read {}: {e}", p.display())))?,
        ),
        None => None,
    };
    let source = common.config.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    if common.scenario.is_none() && text.is_none() {
        return Err(Failure::Config("give --scenario <name> and/or --config <path>".into()));
    }
    let mut sets = common.sets.clone();
    sets.extend_from_slice(extra);
    Ok(load(common.scenario.as_deref(), text.as_deref().map(|t| (source.as_str(), t)), &sets)?)
}

struct SingleRun {
    history: SpaceTimeField<f64>,
    report: RunReport,
    experiment: Option<ExperimentRun>,
}

fn run_single(b: &BuiltScenario) -> Result<SingleRun, GemError> {
    if let Some(e) = &b.experiment {
        let run = run_experiment(e)?;
        return Ok(SingleRun { history: run.history.clone(), report: run.report.clone(), experiment: Some(run) });
    }
    let solver = MbSolver::with_options(b.medium.clone(), b.pulse.clone(), b.protocol.clone(), b.grid.clone(), b.solver)?;
    let history = solver.run()?;
    let report = RunReport::from_history(&history)?;
    Ok(SingleRun { history, report, experiment: None })
}

fn flip_of(b: &BuiltScenario) -> f64 {
    b.protocol.first_flip().unwrap_or(f64::INFINITY)
}

fn report_csv(report: &RunReport, flip: f64) -> String {
    csv(&REPORT_COLUMNS, [report.csv_fields(flip)])
}

fn write_common(
    out: &Path,
    emit: &BTreeSet<String>,
    cfg: &ScenarioConfig,
    run: &SingleRun,
) -> Result<(), Failure> {
    let h = &run.history;
    if emit.contains("boundary") {
        write_atomic(out, "boundary.csv", &boundary_csv(&h.times, &h.input, &h.output))?;
        if let Some(e) = &run.experiment {
            let text = csv(
                &["t", "reference", "signal"],
                e.times.iter().zip(&e.reference).zip(&e.signal).map(|((t, r), s)| vec![num(*t), num(*r), num(*s)]),
            );
            write_atomic(out, "traces.csv", &text)?;
        }
    }
    if emit.contains("field_zt") {
        let rows = h.snapshots.iter().map(|s| (s.t, h.z_nodes.as_slice(), s.field.as_slice()));
        write_atomic(out, "field_zt.csv", &zt_csv(rows))?;
    }
    if emit.contains("alpha_zt") {
        let rows = h.snapshots.iter().map(|s| (s.t, h.z_cells.as_slice(), s.polarization.as_slice()));
        write_atomic(out, "alpha_zt.csv", &zt_csv(rows))?;
    }
    if emit.contains("spectra") {
        let n = (2 * h.times.len()).next_power_of_two();
        let fin = time_spectrum(&h.times, &h.input, n)?;
        let fout = time_spectrum(&h.times, &h.output, n)?;
        let text = csv(
            &["omega", "re_in", "im_in", "re_out", "im_out"],
            fin.freq.iter().zip(&fin.values).zip(&fout.values).map(|((w, a), b)| {
                vec![num(*w), num(a.re), num(a.im), num(b.re), num(b.im)]
            }),
        );
        write_atomic(out, "spectra.csv", &text)?;
    }
    if emit.contains("config") {
        write_atomic(out, "resolved_config", &cfg.to_config_text()?)?;
    }
    Ok(())
}

fn balance_warnings(b: &BuiltScenario, report: &RunReport) -> Vec<String> {
    let mut w = Vec::new();
    if b.medium.gamma == 0.0 && report.energy_residual > BALANCE_WARNING {
        w.push(format!(
            "photon-number balance residual {:.3e} exceeds {BALANCE_WARNING:e}; refine grid.dt or grid.n_z",
            report.energy_residual
        ));
    }
    w
}

pub fn simulate(common: &Common) -> Outcome {
    let emit = emit_set(common)?;
    let cfg = load_config(common, &[])?;
    let b = cfg.build()?;
    let mut warnings = Vec::new();
    if b.protocol.cascade.is_some() {
        warnings.push("second memory ignored by simulate; use the cascade command".to_string());
    }
    let start = Instant::now();
    let run = run_single(&b)?;
    write_atomic(&common.out, "report.csv", &report_csv(&run.report, flip_of(&b)))?;
    write_common(&common.out, &emit, &cfg, &run)?;
    eprintln!(
        "simulate {}: transmission {:.4}, efficiency {:.4} ({:.2} s)",
        cfg.name,
        run.report.transmission,
        run.report.efficiency,
        start.elapsed().as_secs_f64()
    );
    warnings.extend(balance_warnings(&b, &run.report));
    Ok(warnings)
}

pub fn compare(common: &Common) -> Outcome {
    let emit = emit_set(common)?;
    let cfg = load_config(common, &[])?;
    let b = cfg.build()?;
    let mut warnings = Vec::new();
    if b.medium.orientations.len() != 1 || b.medium.line.shape != LineShape::Delta || b.medium.gamma != 0.0 {
        warnings.push("closed form assumes one orientation, a delta line and no decay; comparison is indicative".into());
    }
    let start = Instant::now();
    let run = run_single(&b)?;
    write_atomic(&common.out, "report.csv", &report_csv(&run.report, flip_of(&b)))?;
    write_common(&common.out, &emit, &cfg, &run)?;
    let beta = b.medium.optical_depth();
    let mut summary: Vec<(&str, f64)> = vec![("optical_depth", beta)];

    if beta == 0.0 || run.history.first_flip().is_some() {
        let e = compare_echo(&run.history, &b.pulse, beta)?;
        let text = csv(
            &["t", "re_solver", "im_solver", "re_oracle", "im_oracle", "abs_solver", "abs_oracle"],
            e.times.iter().zip(&e.solver).zip(&e.oracle).map(|((t, s), o)| {
                vec![num(*t), num(s.re), num(s.im), num(o.re), num(o.im), num(s.norm()), num(o.norm())]
            }),
        );
        write_atomic(&common.out, "compare_echo.csv", &text)?;
        summary.extend([("echo_rms", e.rms), ("echo_correlation", e.correlation), ("echo_fidelity", e.fidelity)]);
    }

    let t = compare_transfer(&b.medium, &b.pulse, &b.grid, b.solver, 0.5, 1e-2)?;
    let text = csv(
        &["omega", "abs_solver", "abs_oracle", "arg_solver", "arg_oracle", "in_band"],
        t.omega.iter().zip(&t.solver).zip(&t.oracle).zip(&t.in_band).map(|(((w, s), o), ib)| {
            vec![num(*w), num(s.norm()), num(o.norm()), num(s.arg()), num(o.arg()), (*ib as u8).to_string()]
        }),
    );
    write_atomic(&common.out, "compare_transfer.csv", &text)?;
    summary.extend([
        ("transfer_log_error", t.log_error),
        ("transfer_mean_log_magnitude", t.mean_log_magnitude),
        ("transfer_expected_log_magnitude", -std::f64::consts::PI * beta),
    ]);

    if beta > 0.0 && !run.history.flip_snapshots.is_empty() {
        let k = compare_kspace(&run.history, &b.medium, &b.pulse, b.oracle.kspace_threshold)?;
        let text = csv(
            &["k", "abs_solver", "abs_oracle"],
            k.k.iter().zip(&k.solver).zip(&k.oracle).map(|((kk, s), o)| vec![num(*kk), num(s.norm()), num(o.norm())]),
        );
        write_atomic(&common.out, "compare_kspace.csv", &text)?;
        summary.extend([
            ("kspace_correlation", k.correlation),
            ("kspace_valid", if k.valid { 1.0 } else { 0.0 }),
        ]);
        if let Some(w) = k.warning {
            warnings.push(w);
        }
    }
    let text = csv(&["metric", "value"], summary.iter().map(|(m, v)| vec![m.to_string(), num(*v)]));
    write_atomic(&common.out, "compare_summary.csv", &text)?;
    eprintln!("compare {}: done ({:.2} s)", cfg.name, start.elapsed().as_secs_f64());
    Ok(warnings)
}

pub fn sweep(common: &Common, axis: &str) -> Outcome {
    let (key, values) = axis
        .split_once('=')
        .ok_or_else(|| Failure::Config(format!("--axis: expected key=v1,v2,..., found `{axis}`")))?;
    let key = key.trim().to_string();
    let values: Vec<(usize, String)> = values
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(String::from)
        .enumerate()
        .collect();
    // the base scenario must resolve on its own
    load_config(common, &[])?;
    let start = Instant::now();
    let out = common.out.clone();
    let rows = run_sweep(&values, |(i, v)| {
        let result = load_config(common, &[format!("{key}={v}")])
            .map_err(|f| match f {
                Failure::Config(m) => GemError::Config { location: format!("{key}={v}"), reason: m },
                Failure::Numerical(m) => GemError::UndefinedMetric(m),
            })
            .and_then(|cfg| {
                let b = cfg.build()?;
                let run = run_single(&b)?;
                Ok((run.report, flip_of(&b)))
            });
        let row_text = match &result {
            Ok((r, flip)) => report_csv(r, *flip),
            Err(e) => csv(&["error"], [vec![e.to_string()]]),
        };
        write_atomic(&out.join("rows"), &format!("row_{i:04}.csv"), &row_text).map_err(|e| GemError::UndefinedMetric(e.to_string()))?;
        result
    });
    let mut header: Vec<&str> = vec!["index", "key", "value", "status", "message"];
    header.extend(REPORT_COLUMNS);
    let mut warnings = Vec::new();
    let body = rows.iter().map(|row| {
        let (i, v) = &row.value;
        let mut fields = vec![i.to_string(), key.clone(), v.clone()];
        match &row.outcome {
            Ok((r, flip)) => {
                fields.extend(["ok".to_string(), String::new()]);
                fields.extend(r.csv_fields(*flip));
            }
            Err(m) => {
                warnings.push(format!("sweep row {i} ({key}={v}) failed: {m}"));
                fields.extend(["error".to_string(), m.clone()]);
                fields.extend(std::iter::repeat(String::new()).take(REPORT_COLUMNS.len()));
            }
        }
        fields
    });
    let text = csv(&header, body.collect::<Vec<_>>());
    write_atomic(&common.out, "sweep.csv", &text)?;
    eprintln!("sweep {key}: {} rows ({:.2} s)", rows.len(), start.elapsed().as_secs_f64());
    Ok(warnings)
}

pub fn cascade(common: &Common) -> Outcome {
    let emit = emit_set(common)?;
    let cfg = load_config(common, &[])?;
    let b = cfg.build()?;
    if b.protocol.cascade.is_none() {
        return simulate(common);
    }
    let start = Instant::now();
    let c = run_cascade(&b.medium, &b.pulse, &b.protocol, &b.grid, b.solver)?;
    let stage = b.protocol.cascade.as_ref().map(|s| s.flip_time).unwrap_or(f64::NAN);
    let mut header = vec!["stage"];
    header.extend(REPORT_COLUMNS);
    let rows = vec![
        std::iter::once("1".to_string()).chain(c.report1.csv_fields(flip_of(&b))).collect(),
        std::iter::once("2".to_string()).chain(c.report2.csv_fields(stage)).collect(),
    ];
    write_atomic(&common.out, "report.csv", &csv(&header, rows))?;
    let summary = [
        ("single_chirp", c.single_chirp),
        ("residual_chirp", c.residual_chirp),
        ("chirp_ratio", (c.residual_chirp / c.single_chirp).abs()),
        ("end_to_end_fidelity", c.end_to_end_fidelity),
        ("end_to_end_delay", c.end_to_end_delay),
        ("phase_overlap", c.phase_overlap),
        ("end_to_end_efficiency", c.end_to_end_efficiency),
    ];
    write_atomic(
        &common.out,
        "cascade_summary.csv",
        &csv(&["metric", "value"], summary.iter().map(|(m, v)| vec![m.to_string(), num(*v)])),
    )?;
    if emit.contains("boundary") {
        write_atomic(&common.out, "stage1_boundary.csv", &boundary_csv(&c.stage1.times, &c.stage1.input, &c.stage1.output))?;
        write_atomic(&common.out, "stage2_boundary.csv", &boundary_csv(&c.stage2.times, &c.stage2.input, &c.stage2.output))?;
    }
    if emit.contains("config") {
        write_atomic(&common.out, "resolved_config", &cfg.to_config_text()?)?;
    }
    eprintln!(
        "cascade {}: residual chirp {:.3}% of single stage, fidelity {:.5} ({:.2} s)",
        cfg.name,
        100.0 * (c.residual_chirp / c.single_chirp).abs(),
        c.end_to_end_fidelity,
        start.elapsed().as_secs_f64()
    );
    Ok(Vec::new())
}
