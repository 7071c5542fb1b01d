//! Scenario configuration: flat `key = value` text with dotted keys.
//!
//! A scenario is resolved from layers applied in order (named preset, config
//! file, command-line assignments); a later layer replaces earlier values. Keys
//! with alternative spellings (`medium.density` / `medium.optical_depth`,
//! `medium.eta` / `medium.broadening`, `line.width` / `line.width_cyclic`,
//! `experiment.half_bandwidth` / `experiment.broadening_ratio`) replace each
//! other across layers and may not both appear in one layer. The grammar and
//! key list are documented in `docs/config.md`.

mod parse;
mod presets;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use parse::{ConfigLayer, Entry};
pub use presets::{preset, PRESET_NAMES};

use crate::error::{GemError, Result};
use crate::experiment::{build_experiment, ExperimentOverrides, ExperimentScenario};
use crate::model::{
    CascadeStage, FlipDirection, GridSpec, IntrinsicLineModel, LineShape, MediumParams, Orientation, Protocol,
    PulseShape, PulseSpec, StarkSign,
};
use crate::scalar::C;
use crate::solver::SolverOptions;

const ALTERNATIVES: [(&str, &str); 4] = [
    ("medium.density", "medium.optical_depth"),
    ("medium.eta", "medium.broadening"),
    ("line.width", "line.width_cyclic"),
    ("experiment.half_bandwidth", "experiment.broadening_ratio"),
];

/// How `medium.broadening` maps to the applied half-bandwidth `η z0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BroadeningConvention {
    /// `η z0 = 2π R / T`: half-width in cycles per pulse duration.
    CyclicHalfWidth,
    /// `η z0 = R / T`.
    AngularHalfWidth,
    /// `2 η z0 = R / T`.
    AngularFullWidth,
}

impl BroadeningConvention {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "cyclic_half_width" => Some(Self::CyclicHalfWidth),
            "angular_half_width" => Some(Self::AngularHalfWidth),
            "angular_full_width" => Some(Self::AngularFullWidth),
            _ => None,
        }
    }

    /// Applied half-bandwidth for ratio `r` and pulse duration `t`.
    pub fn half_bandwidth(self, r: f64, t: f64) -> f64 {
        match self {
            Self::CyclicHalfWidth => 2.0 * std::f64::consts::PI * r / t,
            Self::AngularHalfWidth => r / t,
            Self::AngularFullWidth => r / (2.0 * t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardModel {
    pub medium: MediumParams<f64>,
    pub pulse: PulseSpec<f64>,
    pub grid: GridSpec<f64>,
    pub protocol: Protocol<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    Standard(StandardModel),
    Experiment(ExperimentOverrides),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Minimum broadening ratio for the flip-time field to be trusted.
    pub kspace_threshold: f64,
}

/// Fully resolved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub model: ModelConfig,
    pub solver: SolverOptions,
    pub oracle: OracleConfig,
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltScenario {
    pub name: String,
    pub medium: MediumParams<f64>,
    pub pulse: PulseSpec<f64>,
    pub grid: GridSpec<f64>,
    pub protocol: Protocol<f64>,
    pub solver: SolverOptions,
    pub oracle: OracleConfig,
    pub experiment: Option<ExperimentScenario>,
}

struct Reader {
    map: BTreeMap<String, Entry>,
}

fn bad(e: &Entry, reason: impl Into<String>) -> GemError {
    GemError::Config { location: e.location(), reason: reason.into() }
}

fn missing(key: &str) -> GemError {
    GemError::Config { location: format!("`{key}`"), reason: "required key is not set (use a preset or set it)".into() }
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.map.remove(key)
    }

    fn f64_opt(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => match e.value.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => Err(bad(&e, format!("expected a finite number, found `{}`", e.value))),
            },
        }
    }

    fn f64_req(&mut self, key: &str) -> Result<f64> {
        self.f64_opt(key)?.ok_or_else(|| missing(key))
    }

    fn usize_opt(&mut self, key: &str) -> Result<Option<usize>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<usize>()
                .map(Some)
                .map_err(|_| bad(&e, format!("expected a non-negative integer, found `{}`", e.value))),
        }
    }

    fn usize_req(&mut self, key: &str) -> Result<usize> {
        self.usize_opt(key)?.ok_or_else(|| missing(key))
    }

    fn bool_opt(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => match e.value.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                other => Err(bad(&e, format!("expected true or false, found `{other}`"))),
            },
        }
    }

    fn choice<T>(&mut self, key: &str, default: Option<T>, parse: impl Fn(&str) -> Option<T>, allowed: &str) -> Result<T> {
        match self.take(key) {
            None => default.ok_or_else(|| missing(key)),
            Some(e) => parse(&e.value).ok_or_else(|| bad(&e, format!("expected one of {allowed}, found `{}`", e.value))),
        }
    }

    fn f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) if e.value == "none" => Ok(Some(Vec::new())),
            Some(e) => e
                .value
                .split(',')
                .map(|s| match s.trim().parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(bad(&e, format!("expected a comma-separated list of numbers, found `{}`", e.value))),
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }

    fn finish(self) -> Result<()> {
        match self.map.into_values().next() {
            None => Ok(()),
            Some(e) => Err(bad(&e, "unknown key for this scenario kind")),
        }
    }
}

/// Merges layers in order; see the module documentation for the replacement rules.
pub fn merge_layers(layers: &[ConfigLayer]) -> Result<BTreeMap<String, Entry>> {
    let mut map: BTreeMap<String, Entry> = BTreeMap::new();
    for layer in layers {
        for (a, b) in ALTERNATIVES {
            if let (Some(x), Some(_)) = (layer.get(a), layer.get(b)) {
                return Err(GemError::Contradictory(format!("{} and `{b}` are alternatives; set only one", x.location())));
            }
        }
        for e in &layer.entries {
            for (a, b) in ALTERNATIVES {
                if e.key == a {
                    map.remove(b);
                } else if e.key == b {
                    map.remove(a);
                }
            }
            map.insert(e.key.clone(), e.clone());
        }
    }
    Ok(map)
}

fn parse_sign(s: &str) -> Option<StarkSign> {
    match s {
        "positive" => Some(StarkSign::Positive),
        "negative" => Some(StarkSign::Negative),
        _ => None,
    }
}

fn parse_direction(s: &str) -> Option<FlipDirection> {
    match s {
        "forward" => Some(FlipDirection::Forward),
        "reversed" => Some(FlipDirection::Reversed),
        _ => None,
    }
}

fn read_standard(r: &mut Reader) -> Result<StandardModel> {
    let pulse_shape = r.choice(
        "pulse.shape",
        None,
        |s| match s {
            "gaussian" => Some(PulseShape::Gaussian),
            "square" => Some(PulseShape::Square),
            _ => None,
        },
        "gaussian, square",
    )?;
    let duration = r.f64_req("pulse.duration")?;
    let center = r.f64_req("pulse.center")?;
    let magnitude = r.f64_opt("pulse.amplitude")?.unwrap_or(1.0);
    let phase = r.f64_opt("pulse.phase")?.unwrap_or(0.0);
    let carrier = r.f64_opt("pulse.carrier")?.unwrap_or(0.0);
    let pulse = PulseSpec {
        shape: pulse_shape,
        duration,
        amplitude: C::from_polar(magnitude, phase),
        center,
        carrier_offset: carrier,
    };
    pulse.validate()?;

    let g = r.f64_req("medium.g")?;
    let gamma = r.f64_req("medium.gamma")?;
    let z_half = r.f64_req("medium.z_half")?;
    let convention = r.choice(
        "medium.broadening_convention",
        Some(BroadeningConvention::CyclicHalfWidth),
        BroadeningConvention::parse,
        "cyclic_half_width, angular_half_width, angular_full_width",
    )?;
    let eta = match (r.f64_opt("medium.eta")?, r.f64_opt("medium.broadening")?) {
        (Some(eta), None) => eta,
        (None, Some(ratio)) => convention.half_bandwidth(ratio, duration) / z_half,
        (None, None) => return Err(missing("medium.eta")),
        (Some(_), Some(_)) => unreachable!("alternatives are exclusive after merging"),
    };
    let density = match (r.f64_opt("medium.density")?, r.f64_opt("medium.optical_depth")?) {
        (Some(n), None) => n,
        (None, Some(beta)) => {
            if !(g > 0.0) {
                return Err(GemError::invalid("medium.optical_depth", "needs medium.g > 0"));
            }
            beta * eta / g
        }
        (None, None) => return Err(missing("medium.density")),
        (Some(_), Some(_)) => unreachable!("alternatives are exclusive after merging"),
    };

    let shape = r.choice(
        "line.shape",
        Some(LineShape::Delta),
        |s| match s {
            "delta" => Some(LineShape::Delta),
            "lorentzian" => Some(LineShape::Lorentzian),
            "gaussian" => Some(LineShape::Gaussian),
            _ => None,
        },
        "delta, lorentzian, gaussian",
    )?;
    let line = if shape == LineShape::Delta {
        for k in ["line.width", "line.width_cyclic", "line.classes", "line.truncation"] {
            if let Some(e) = r.take(k) {
                return Err(bad(&e, "not used by a delta line"));
            }
        }
        IntrinsicLineModel::delta()
    } else {
        let width = match (r.f64_opt("line.width")?, r.f64_opt("line.width_cyclic")?) {
            (Some(w), None) => w,
            (None, Some(w)) => 2.0 * std::f64::consts::PI * w,
            (None, None) => return Err(missing("line.width")),
            (Some(_), Some(_)) => unreachable!("alternatives are exclusive after merging"),
        };
        let classes = r.usize_req("line.classes")?;
        let mut line = if shape == LineShape::Lorentzian {
            IntrinsicLineModel::lorentzian(width, classes)
        } else {
            IntrinsicLineModel::gaussian(width, classes)
        };
        if let Some(t) = r.f64_opt("line.truncation")? {
            line.truncation = t;
        }
        line
    };

    let count = r.usize_opt("orientations.count")?.unwrap_or(1);
    if !(1..=2).contains(&count) {
        return Err(GemError::invalid("orientations.count", "one or two orientation families"));
    }
    let weights = r.f64_list("orientations.weights")?.unwrap_or_else(|| vec![1.0 / count as f64; count]);
    let signs = match r.take("orientations.signs") {
        None => [StarkSign::Positive, StarkSign::Negative][..count].to_vec(),
        Some(e) => e
            .value
            .split(',')
            .map(|s| parse_sign(s.trim()).ok_or_else(|| bad(&e, "expected a list of positive/negative")))
            .collect::<Result<Vec<_>>>()?,
    };
    if weights.len() != count || signs.len() != count {
        return Err(GemError::invalid("orientations.weights", "weights and signs need one entry per orientation"));
    }
    let orientations = signs.into_iter().zip(weights).map(|(sign, weight)| Orientation { sign, weight }).collect();
    let medium = MediumParams { g, density, gamma, eta, z_half, line, orientations };
    medium.validate()?;

    let grid = GridSpec {
        n_z: r.usize_req("grid.n_z")?,
        dt: r.f64_req("grid.dt")?,
        t_start: r.f64_req("grid.t_start")?,
        t_end: r.f64_req("grid.t_end")?,
        store_stride: r.usize_opt("grid.store_stride")?.unwrap_or(1),
    };
    grid.validate()?;

    let flip_times = r.f64_list("protocol.flips")?.unwrap_or_default();
    let direction = r.choice("protocol.direction", Some(FlipDirection::Forward), parse_direction, "forward, reversed")?;
    let cascade = if r.bool_opt("cascade.enabled")?.unwrap_or(false) {
        let flip_time = r.f64_req("cascade.flip_time")?;
        let t_end = r.f64_req("cascade.t_end")?;
        let same = r.choice(
            "cascade.second_flip",
            Some(true),
            |s| match s {
                "same" => Some(true),
                "reversed" => Some(false),
                _ => None,
            },
            "same, reversed",
        )?;
        Some(CascadeStage { flip_time, direction: if same { direction } else { direction.opposite() }, t_end })
    } else {
        for k in ["cascade.flip_time", "cascade.t_end", "cascade.second_flip"] {
            r.take(k);
        }
        None
    };
    let protocol = Protocol { flip_times, direction, cascade };
    protocol.validate(&grid)?;
    Ok(StandardModel { medium, pulse, grid, protocol })
}

fn read_experiment(r: &mut Reader) -> Result<ExperimentOverrides> {
    let o = ExperimentOverrides {
        optical_depth: r.f64_opt("experiment.optical_depth")?,
        depth_factor: r.f64_opt("experiment.depth_factor")?,
        single_orientation: r.bool_opt("experiment.single_orientation")?.unwrap_or(false),
        intrinsic_khz: r.f64_opt("experiment.intrinsic_khz")?,
        broadening_ratio: r.f64_opt("experiment.broadening_ratio")?,
        half_bandwidth: r.f64_opt("experiment.half_bandwidth")?,
        pulse_duration: r.f64_opt("experiment.pulse_duration")?,
        pulse_center: r.f64_opt("experiment.pulse_center")?,
        flip_time: r.f64_opt("experiment.flip_time")?,
        gamma: r.f64_opt("experiment.gamma")?,
        line_classes: r.usize_opt("experiment.line_classes")?,
        n_z: r.usize_opt("experiment.n_z")?,
        dt: r.f64_opt("experiment.dt")?,
        t_end: r.f64_opt("experiment.t_end")?,
    };
    build_experiment(&o)?;
    Ok(o)
}

/// Resolves merged layers into a scenario, rejecting unknown keys.
pub fn resolve(layers: &[ConfigLayer]) -> Result<ScenarioConfig> {
    let mut r = Reader { map: merge_layers(layers)? };
    let name = r.take("scenario.name").map(|e| e.value).unwrap_or_else(|| "custom".to_string());
    let experiment = r.choice(
        "scenario.kind",
        Some(false),
        |s| match s {
            "standard" => Some(false),
            "experiment" => Some(true),
            _ => None,
        },
        "standard, experiment",
    )?;
    let model = if experiment {
        ModelConfig::Experiment(read_experiment(&mut r)?)
    } else {
        ModelConfig::Standard(read_standard(&mut r)?)
    };
    let defaults = SolverOptions::default();
    let solver = SolverOptions {
        stability_limit: r.f64_opt("solver.stability_limit")?.unwrap_or(defaults.stability_limit),
        allow_unstable: r.bool_opt("solver.allow_unstable")?.unwrap_or(defaults.allow_unstable),
    };
    let oracle = OracleConfig { kspace_threshold: r.f64_opt("oracle.kspace_threshold")?.unwrap_or(4.0) };
    r.finish()?;
    Ok(ScenarioConfig { name, model, solver, oracle })
}

/// Resolves a scenario from an optional preset, an optional config text and `--set` assignments.
pub fn load(preset_name: Option<&str>, file: Option<(&str, &str)>, sets: &[String]) -> Result<ScenarioConfig> {
    let mut layers = Vec::new();
    if let Some(name) = preset_name {
        let text = preset(name).ok_or_else(|| GemError::Config {
            location: "--scenario".into(),
            reason: format!("unknown preset `{name}` (available: {})", PRESET_NAMES.join(", ")),
        })?;
        let mut layer = ConfigLayer::parse(name, text)?;
        if layer.get("scenario.name").is_none() {
            layer.entries.push(Entry { key: "scenario.name".into(), value: name.into(), source: name.into(), line: 0 });
        }
        layers.push(layer);
    }
    if let Some((source, text)) = file {
        layers.push(ConfigLayer::parse(source, text)?);
    }
    if !sets.is_empty() {
        layers.push(ConfigLayer::from_assignments("--set", sets)?);
    }
    resolve(&layers)
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

impl ScenarioConfig {
    pub fn build(&self) -> Result<BuiltScenario> {
        match &self.model {
            ModelConfig::Standard(m) => Ok(BuiltScenario {
                name: self.name.clone(),
                medium: m.medium.clone(),
                pulse: m.pulse.clone(),
                grid: m.grid.clone(),
                protocol: m.protocol.clone(),
                solver: self.solver,
                oracle: self.oracle,
                experiment: None,
            }),
            ModelConfig::Experiment(o) => {
                let e = build_experiment(o)?;
                Ok(BuiltScenario {
                    name: self.name.clone(),
                    medium: e.medium.clone(),
                    pulse: e.pulse.clone(),
                    grid: e.grid.clone(),
                    protocol: e.protocol.clone(),
                    solver: self.solver,
                    oracle: self.oracle,
                    experiment: Some(e),
                })
            }
        }
    }

    /// Canonical text that resolves to this same scenario.
    pub fn to_config_text(&self) -> Result<String> {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("scenario.name", self.name.clone());
        match &self.model {
            ModelConfig::Standard(m) => {
                kv("scenario.kind", "standard".into());
                let md = &m.medium;
                kv("medium.g", num(md.g));
                kv("medium.density", num(md.density));
                kv("medium.gamma", num(md.gamma));
                kv("medium.eta", num(md.eta));
                kv("medium.z_half", num(md.z_half));
                let shape = match md.line.shape {
                    LineShape::Delta => "delta",
                    LineShape::Lorentzian => "lorentzian",
                    LineShape::Gaussian => "gaussian",
                };
                kv("line.shape", shape.into());
                if md.line.shape != LineShape::Delta {
                    kv("line.width", num(md.line.width));
                    kv("line.classes", md.line.n_classes.to_string());
                    kv("line.truncation", num(md.line.truncation));
                }
                kv("orientations.count", md.orientations.len().to_string());
                let join = |f: &dyn Fn(&Orientation<f64>) -> String| md.orientations.iter().map(f).collect::<Vec<_>>().join(", ");
                kv("orientations.weights", join(&|o| num(o.weight)));
                kv(
                    "orientations.signs",
                    join(&|o| match o.sign {
                        StarkSign::Positive => "positive".into(),
                        StarkSign::Negative => "negative".into(),
                    }),
                );
                let p = &m.pulse;
                let shape = match p.shape {
                    PulseShape::Gaussian => "gaussian",
                    PulseShape::Square => "square",
                    PulseShape::Sampled(_) => {
                        return Err(GemError::invalid("pulse.shape", "sampled pulses cannot be written as config"))
                    }
                };
                kv("pulse.shape", shape.into());
                kv("pulse.duration", num(p.duration));
                kv("pulse.center", num(p.center));
                kv("pulse.amplitude", num(p.amplitude.norm()));
                kv("pulse.phase", num(p.amplitude.arg()));
                kv("pulse.carrier", num(p.carrier_offset));
                let g = &m.grid;
                kv("grid.n_z", g.n_z.to_string());
                kv("grid.dt", num(g.dt));
                kv("grid.t_start", num(g.t_start));
                kv("grid.t_end", num(g.t_end));
                kv("grid.store_stride", g.store_stride.to_string());
                let pr = &m.protocol;
                let flips = if pr.flip_times.is_empty() {
                    "none".to_string()
                } else {
                    pr.flip_times.iter().map(|&t| num(t)).collect::<Vec<_>>().join(", ")
                };
                kv("protocol.flips", flips);
                kv(
                    "protocol.direction",
                    match pr.direction {
                        FlipDirection::Forward => "forward".into(),
                        FlipDirection::Reversed => "reversed".into(),
                    },
                );
                kv("cascade.enabled", pr.cascade.is_some().to_string());
                if let Some(c) = &pr.cascade {
                    kv("cascade.flip_time", num(c.flip_time));
                    kv("cascade.t_end", num(c.t_end));
                    kv("cascade.second_flip", if c.direction == pr.direction { "same".into() } else { "reversed".into() });
                }
            }
            ModelConfig::Experiment(o) => {
                kv("scenario.kind", "experiment".into());
                let e = build_experiment(o)?;
                let depth = o.optical_depth.unwrap_or(crate::experiment::FITTED_DEPTH) * o.depth_factor.unwrap_or(1.0);
                kv("experiment.optical_depth", num(depth));
                kv("experiment.single_orientation", o.single_orientation.to_string());
                kv("experiment.intrinsic_khz", num(e.intrinsic_khz));
                kv("experiment.half_bandwidth", num(e.medium.half_bandwidth()));
                kv("experiment.gamma", num(e.medium.gamma));
                if e.medium.line.shape != LineShape::Delta {
                    kv("experiment.line_classes", e.medium.line.n_classes.to_string());
                }
                kv("experiment.pulse_duration", num(e.pulse.duration));
                kv("experiment.pulse_center", num(e.pulse.center));
                kv("experiment.flip_time", num(e.protocol.flip_times[0]));
                kv("experiment.n_z", e.grid.n_z.to_string());
                kv("experiment.dt", num(e.grid.dt));
                kv("experiment.t_end", num(e.grid.t_end));
            }
        }
        kv("solver.stability_limit", num(self.solver.stability_limit));
        kv("solver.allow_unstable", self.solver.allow_unstable.to_string());
        kv("oracle.kspace_threshold", num(self.oracle.kspace_threshold));
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn every_preset_resolves_and_round_trips() {
        for name in PRESET_NAMES {
            let c = load(Some(name), None, &[]).unwrap();
            let text = c.to_config_text().unwrap();
            let again = load(None, Some(("resolved", &text)), &[]).unwrap();
            assert_eq!(again.build().unwrap(), c.build().unwrap(), "{name}");
            assert_eq!(again.to_config_text().unwrap(), text);
        }
    }

    #[test]
    fn shortcut_keys_expand() {
        let c = load(Some("fig1_ideal"), None, &[]).unwrap().build().unwrap();
        assert!((c.medium.half_bandwidth() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((c.medium.optical_depth() - 3.3).abs() < 1e-12);
    }

    #[test]
    fn later_layer_replaces_alternative() {
        let c = load(Some("fig1_ideal"), None, &sets(&["medium.density=2"])).unwrap().build().unwrap();
        assert_eq!(c.medium.density, 2.0);
        let e = load(Some("fig1_ideal"), None, &sets(&["medium.density=2", "medium.optical_depth=1"])).unwrap_err();
        assert!(matches!(e, GemError::Contradictory(_)));
    }

    #[test]
    fn errors_name_the_key() {
        let e = load(Some("fig1_ideal"), None, &sets(&["grid.n_z=ten"])).unwrap_err();
        assert!(e.to_string().contains("grid.n_z"), "{e}");
        let e = load(Some("fig1_ideal"), None, &sets(&["medium.colour=red"])).unwrap_err();
        assert!(e.to_string().contains("medium.colour"), "{e}");
        let e = load(None, Some(("f", "scenario.kind = standard\n")), &[]).unwrap_err();
        assert!(e.to_string().contains("pulse.shape"), "{e}");
        assert!(load(Some("nope"), None, &[]).is_err());
        let e = load(Some("fig4_experiment"), None, &sets(&["medium.g=1"])).unwrap_err();
        assert!(e.to_string().contains("medium.g"));
    }

    #[test]
    fn broadening_conventions() {
        let t = 2.0;
        assert_eq!(BroadeningConvention::AngularHalfWidth.half_bandwidth(2.0, t), 1.0);
        assert_eq!(BroadeningConvention::AngularFullWidth.half_bandwidth(2.0, t), 0.5);
        let c = load(Some("fig1_ideal"), None, &sets(&["medium.broadening_convention=angular_half_width"])).unwrap();
        assert_eq!(c.build().unwrap().medium.eta, 2.0);
    }

    #[test]
    fn experiment_band_overrides() {
        let c = load(Some("fig4_experiment"), None, &sets(&["experiment.intrinsic_khz=60"])).unwrap().build().unwrap();
        let base = load(Some("fig4_experiment"), None, &[]).unwrap().build().unwrap();
        assert_eq!(c.medium.eta, base.medium.eta);
        let c = load(Some("fig4_experiment"), None, &sets(&["experiment.broadening_ratio=100"])).unwrap().build().unwrap();
        assert!((c.medium.eta - base.medium.eta / 2.0).abs() < 1e-12);
    }

    #[test]
    fn disabled_cascade_ignores_stage_keys() {
        let off = load(Some("cascade_demo"), None, &sets(&["cascade.enabled=false"])).unwrap();
        assert!(off.build().unwrap().protocol.cascade.is_none());
        assert!(!off.to_config_text().unwrap().contains("cascade.t_end"));
        let c = load(Some("cascade_demo"), None, &sets(&["cascade.second_flip=reversed"])).unwrap().build().unwrap();
        assert_eq!(c.protocol.cascade.unwrap().direction, FlipDirection::Reversed);
    }
}
