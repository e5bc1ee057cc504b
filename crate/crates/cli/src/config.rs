//! Strict TOML run configuration in SI units and its mapping onto a scenario.

use serde::{Deserialize, Serialize};
use toml::Table;

use ewave_core::analytic::Kinematics;
use ewave_core::params::{BeamState, FieldDrive, Harmonic};
use ewave_core::scenarios::{
    GammaPolicy, Numerics, ScenarioKind, ScenarioSpec, SourceSpec, Sweep, SweepAxis, Tolerances,
};
use ewave_core::solver::{DriftMode, Envelope, RunSettings};
use ewave_core::units::PhysicalConstants;

use crate::presets;
use crate::quantity::{Angle, Field, Length, Quantity, Time};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("unknown preset `{0}` (see `ewave list-presets`)")]
    UnknownPreset(String),
    #[error("[{section}] {message}")]
    Invalid {
        section: &'static str,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn invalid(section: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        section,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioSection,
    pub beam: BeamSection,
    pub drive: DriveSection,
    pub source: SourceSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fel: Option<FelSection>,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Pinem,
    PhaseAccel,
    GammaScan,
    FelDetuning,
}

impl From<Kind> for ScenarioKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Pinem => ScenarioKind::Pinem,
            Kind::PhaseAccel => ScenarioKind::PhaseAcceleration,
            Kind::GammaScan => ScenarioKind::GammaScan,
            Kind::FelDetuning => ScenarioKind::FelDetuning,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub name: String,
    pub kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    /// Free-space wavelength.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength: Option<Quantity<Length>>,
    /// `beta0 lambda`, the synchronous period.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_lambda: Option<Quantity<Length>>,
    pub interaction_length: Quantity<Length>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upsilon: Option<f64>,
    /// Amplitude of the synchronous field component.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Quantity<Field>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_bar: Option<Quantity<Angle>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi0: Option<Quantity<Angle>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_start: Option<Quantity<Length>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    FixedWaist,
    Waist,
    FixedDrift,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<Policy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_z0: Option<Quantity<Length>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_length: Option<Quantity<Length>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepSection {
    Gamma {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        values: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        to: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
    },
    ThetaBar {
        from: Quantity<Angle>,
        to: Quantity<Angle>,
        count: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FelSection {
    pub epsilons: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Sharp,
    RaisedCosine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftKind {
    Analytic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KinematicsKind {
    Exact,
    Linearized,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<Quantity<Time>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<EnvelopeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<Quantity<Length>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kinematics: Option<KinematicsKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sideband_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_rms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_rms_strong: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    Spectra,
    Snapshots,
    ScanTable,
    Params,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emit: Option<Vec<Emit>>,
}

impl OutputSection {
    pub fn wants(&self, e: Emit) -> bool {
        self.emit.as_ref().is_none_or(|v| v.contains(&e))
    }
}

/// Recursively overlays `top` on `base`.
fn merge(base: &mut Table, top: Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(t)) => merge(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

impl RunConfig {
    /// Parses a configuration. A top-level `preset = "name"` key loads that
    /// preset first and applies the remaining keys on top of it.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let mut table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        if let Some(v) = table.remove("preset") {
            let name = v
                .as_str()
                .ok_or_else(|| invalid("preset", "`preset` must be a string"))?;
            let mut base: Table = presets::text(name)
                .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))?
                .parse()
                .map_err(|e: toml::de::Error| ConfigError::Parse(format!("preset {name}: {e}")))?;
            merge(&mut base, table);
            table = base;
            let merged = toml::to_string(&table).map_err(|e| ConfigError::Parse(e.to_string()))?;
            return Self::parse_strict(&merged);
        }
        Self::parse_strict(text)
    }

    fn parse_strict(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.to_spec()?;
        Ok(cfg)
    }

    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        let text =
            presets::text(name).ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))?;
        Self::from_toml(text)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn beam(&self) -> Result<BeamState<f64>, ConfigError> {
        let b = match (self.beam.beta, self.beam.gamma) {
            (Some(beta), None) => BeamState::from_beta(beta),
            (None, Some(gamma)) => BeamState::from_gamma(gamma),
            _ => return Err(invalid("beam", "set exactly one of `beta`, `gamma`")),
        };
        b.map_err(|e| invalid("beam", e.to_string()))
    }

    pub fn drive(&self, beam: &BeamState<f64>) -> Result<FieldDrive<f64>, ConfigError> {
        let k = PhysicalConstants::<f64>::codata2018();
        let d = &self.drive;
        let lambda_si = match (d.wavelength, d.beta_lambda) {
            (Some(l), None) => l.value(),
            (None, Some(bl)) => bl.value() / beam.beta0,
            _ => {
                return Err(invalid(
                    "drive",
                    "set exactly one of `wavelength`, `beta_lambda`",
                ))
            }
        };
        if !(lambda_si > 0.0) {
            return Err(invalid("drive", "`wavelength` must be positive"));
        }
        let l_i = d.interaction_length.value();
        if !(l_i > 0.0) {
            return Err(invalid("drive", "`interaction_length` must be positive"));
        }
        let lambda = k.length_from_si(lambda_si);
        let l_i = k.length_from_si(l_i);
        let theta = d.theta_bar.map_or(0.0, |q| q.value());
        let phi0 = d.phi0.map_or(0.0, |q| q.value());
        let mut drive = match (d.upsilon, d.field) {
            (Some(u), None) => FieldDrive::from_coupling(beam, lambda, l_i, u, theta, phi0),
            (None, Some(f)) => {
                let omega = std::f64::consts::TAU / lambda;
                let q_z = omega / beam.v0 - theta / l_i;
                FieldDrive::new(
                    omega,
                    phi0,
                    l_i,
                    vec![Harmonic {
                        amplitude: k.field_from_si(f.value()),
                        q_z,
                    }],
                    beam,
                )
            }
            _ => return Err(invalid("drive", "set exactly one of `upsilon`, `field`")),
        }
        .map_err(|e| invalid("drive", e.to_string()))?;
        if let Some(z) = d.window_start {
            drive.window_start = k.length_from_si(z.value());
        }
        Ok(drive)
    }

    pub fn source_spec(&self) -> Result<SourceSpec<f64>, ConfigError> {
        let k = PhysicalConstants::<f64>::codata2018();
        let s = &self.source;
        let len = |q: Option<Quantity<Length>>| q.map(|q| k.length_from_si(q.value()));
        match s.gamma {
            Some(gamma) => {
                if !(gamma > 0.0) || !gamma.is_finite() {
                    return Err(invalid("source", "`gamma` must be positive"));
                }
                let policy = match s.policy.unwrap_or(Policy::FixedWaist) {
                    Policy::FixedWaist => {
                        if s.drift_length.is_some() {
                            return Err(invalid(
                                "source",
                                "`drift_length` is derived under policy fixed_waist",
                            ));
                        }
                        GammaPolicy::FixedWaist {
                            sigma_z0: len(s.sigma_z0).ok_or_else(|| {
                                invalid("source", "policy fixed_waist needs `sigma_z0`")
                            })?,
                        }
                    }
                    Policy::Waist => {
                        if s.sigma_z0.is_some() || s.drift_length.is_some() {
                            return Err(invalid(
                                "source",
                                "policy waist takes neither `sigma_z0` nor `drift_length`",
                            ));
                        }
                        GammaPolicy::Waist
                    }
                    Policy::FixedDrift => {
                        if s.sigma_z0.is_some() {
                            return Err(invalid(
                                "source",
                                "`sigma_z0` is derived under policy fixed_drift",
                            ));
                        }
                        GammaPolicy::FixedDrift {
                            l_d: len(s.drift_length).ok_or_else(|| {
                                invalid("source", "policy fixed_drift needs `drift_length`")
                            })?,
                        }
                    }
                };
                Ok(SourceSpec::Gamma { gamma, policy })
            }
            None => {
                if s.policy.is_some() {
                    return Err(invalid("source", "`policy` needs `gamma`"));
                }
                Ok(SourceSpec::Explicit {
                    sigma_z0: len(s.sigma_z0)
                        .ok_or_else(|| invalid("source", "set `gamma` or `sigma_z0`"))?,
                    l_d: len(s.drift_length).unwrap_or(0.0),
                })
            }
        }
    }

    pub fn sweep(&self) -> Result<Option<Sweep<f64>>, ConfigError> {
        let sweep = match &self.sweep {
            None => return Ok(None),
            Some(SweepSection::Gamma {
                values: Some(v),
                from: None,
                to: None,
                count: None,
            }) => Sweep::new(SweepAxis::Gamma, v.clone()),
            Some(SweepSection::Gamma {
                values: None,
                from: Some(a),
                to: Some(b),
                count: Some(n),
            }) => Sweep::linspace(SweepAxis::Gamma, *a, *b, *n),
            Some(SweepSection::Gamma { .. }) => {
                return Err(invalid(
                    "sweep",
                    "give either `values` or all of `from`, `to`, `count`",
                ))
            }
            Some(SweepSection::ThetaBar { from, to, count }) => {
                Sweep::linspace(SweepAxis::ThetaBar, from.value(), to.value(), *count)
            }
        };
        sweep.map(Some).map_err(|e| invalid("sweep", e.to_string()))
    }

    pub fn numerics(&self) -> Result<Numerics<f64>, ConfigError> {
        let k = PhysicalConstants::<f64>::codata2018();
        let n = &self.numerics;
        let mut run = RunSettings::<f64>::default();
        if let Some(s) = n.samples {
            run.samples = s;
        }
        run.dt = n.dt.map(|q| k.time_from_si(q.value()));
        run.envelope = match (n.envelope.unwrap_or(EnvelopeKind::Sharp), n.edge) {
            (EnvelopeKind::Sharp, None) => Envelope::Sharp,
            (EnvelopeKind::Sharp, Some(_)) => {
                return Err(invalid(
                    "numerics",
                    "`edge` needs envelope = \"raised_cosine\"",
                ))
            }
            (EnvelopeKind::RaisedCosine, Some(e)) => Envelope::RaisedCosine {
                edge: k.length_from_si(e.value()),
            },
            (EnvelopeKind::RaisedCosine, None) => {
                return Err(invalid("numerics", "raised_cosine needs `edge`"))
            }
        };
        run.drift = match n.drift.unwrap_or(DriftKind::Analytic) {
            DriftKind::Analytic => DriftMode::Analytic,
            DriftKind::Numeric => DriftMode::Numeric,
        };
        run.frames = n.frames.unwrap_or(0);
        if let Some(m) = n.margin {
            if !(m >= 0.0) {
                return Err(invalid("numerics", "`margin` must be non-negative"));
            }
            run.margin = m;
        }
        let kinematics = match n.kinematics.unwrap_or(KinematicsKind::Exact) {
            KinematicsKind::Exact => Kinematics::Exact,
            KinematicsKind::Linearized => Kinematics::Linearized,
        };
        let mut tolerances = Tolerances::default();
        for (v, slot) in [
            (n.sideband_tolerance, &mut tolerances.sideband),
            (n.shift_tolerance, &mut tolerances.shift),
            (n.scan_rms, &mut tolerances.scan_rms),
            (n.scan_rms_strong, &mut tolerances.scan_rms_strong),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(invalid("numerics", "tolerances must be positive"));
                }
                *slot = v;
            }
        }
        Ok(Numerics {
            run,
            kinematics,
            tolerances,
        })
    }

    /// Resolves the configuration into a validated scenario.
    pub fn to_spec(&self) -> Result<ScenarioSpec<f64>, ConfigError> {
        let beam = self.beam()?;
        let drive = self.drive(&beam)?;
        let epsilons = match (&self.fel, self.scenario.kind) {
            (Some(f), Kind::FelDetuning) => f.epsilons.clone(),
            (None, Kind::FelDetuning) => {
                return Err(invalid("fel", "fel_detuning needs `epsilons`"))
            }
            (Some(_), _) => return Err(invalid("fel", "only fel_detuning takes a [fel] section")),
            (None, _) => Vec::new(),
        };
        let spec = ScenarioSpec {
            name: self.scenario.name.clone(),
            kind: self.scenario.kind.into(),
            source: self.source_spec()?,
            sweep: self.sweep()?,
            epsilons,
            numerics: self.numerics()?,
            beam,
            drive,
        };
        spec.validate()
            .map_err(|e| invalid("scenario", e.to_string()))?;
        Ok(spec)
    }
}
