/// Names of the bundled scenario presets.
pub const PRESET_NAMES: [&str; 6] = [
    "fig1_ideal",
    "fig2_short_storage",
    "fig2_long_storage",
    "fig4_experiment",
    "fig4_improved",
    "cascade_demo",
];

/// Text of a bundled preset, as shipped in `scenarios/<name>.conf`.
pub fn preset(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1_ideal" => include_str!("../../../../scenarios/fig1_ideal.conf"),
        "fig2_short_storage" => include_str!("../../../../scenarios/fig2_short_storage.conf"),
        "fig2_long_storage" => include_str!("../../../../scenarios/fig2_long_storage.conf"),
        "fig4_experiment" => include_str!("../../../../scenarios/fig4_experiment.conf"),
        "fig4_improved" => include_str!("../../../../scenarios/fig4_improved.conf"),
        "cascade_demo" => include_str!("../../../../scenarios/cascade_demo.conf"),
        _ => return None,
    })
}
