//! Scenario presets shipped with the binary.

const PRESETS: &[(&str, &str)] = &[
    ("pinem", include_str!("../presets/pinem.toml")),
    ("phase_accel", include_str!("../presets/phase_accel.toml")),
    ("phase_decel", include_str!("../presets/phase_decel.toml")),
    ("phase_strong", include_str!("../presets/phase_strong.toml")),
    ("gamma_scan", include_str!("../presets/gamma_scan.toml")),
    (
        "gamma_scan_strong",
        include_str!("../presets/gamma_scan_strong.toml"),
    ),
    (
        "gamma_scan_half",
        include_str!("../presets/gamma_scan_half.toml"),
    ),
    (
        "gamma_scan_half_strong",
        include_str!("../presets/gamma_scan_half_strong.toml"),
    ),
    ("fel_detuning", include_str!("../presets/fel_detuning.toml")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// First comment line of a preset.
pub fn summary(name: &str) -> Option<&'static str> {
    text(name)?.lines().next()?.strip_prefix('#').map(str::trim)
}
