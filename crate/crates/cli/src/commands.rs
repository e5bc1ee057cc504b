//! Subcommand implementations shared by the binary and the tests.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use toml::{Table, Value};

use ewave_core::analytic::{dp2, resolution_bound};
use ewave_core::params::{
    critical_drift_length, cutoff_wavelength, interaction_params, minimum_gamma, BeamState,
    FieldDrive, SourceWavepacket,
};
use ewave_core::scenarios::{
    drive_for_epsilon, realize_source, run_fel_detuning, run_gamma_scan, run_phase_acceleration,
    run_pinem, Comparison, ScenarioKind, ScenarioSpec, SourceSpec, SweepAxis,
};
use ewave_core::units::PhysicalConstants;

use crate::config::{ConfigError, Emit, RunConfig};
use crate::output::{fel_table, scan_table, spectrum_table, write_snapshots, Axis, Writer};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    Io = 1,
    Config = 2,
    Regime = 3,
    Numerical = 4,
}

pub fn exit_code(err: &anyhow::Error) -> ExitCode {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return ExitCode::Config;
        }
        if let Some(e) = cause.downcast_ref::<ewave_core::Error>() {
            return match e {
                ewave_core::Error::Domain(_) => ExitCode::Config,
                ewave_core::Error::Regime(_) => ExitCode::Regime,
                _ => ExitCode::Numerical,
            };
        }
    }
    ExitCode::Io
}

fn num(v: f64) -> Value {
    Value::Float(v)
}

fn k() -> PhysicalConstants<f64> {
    PhysicalConstants::codata2018()
}

fn beam_table(beam: &BeamState<f64>) -> Table {
    let mut t = Table::new();
    t.insert("beta0".into(), num(beam.beta0));
    t.insert("gamma0".into(), num(beam.gamma0));
    t.insert("p0_kg_m_per_s".into(), num(k().momentum_to_si(beam.p0)));
    t.insert("effective_mass_over_m".into(), num(beam.m_star));
    t
}

fn drive_table(beam: &BeamState<f64>, drive: &FieldDrive<f64>) -> Table {
    let k = k();
    let mut t = Table::new();
    t.insert("wavelength_m".into(), num(k.length_to_si(drive.lambda)));
    t.insert(
        "beta_lambda_m".into(),
        num(k.length_to_si(drive.lambda * beam.beta0)),
    );
    t.insert("photon_energy_ev".into(), num(k.energy_to_ev(drive.omega)));
    t.insert(
        "interaction_length_m".into(),
        num(k.length_to_si(drive.l_i)),
    );
    t.insert("field_v_per_m".into(), num(k.field_to_si(drive.e0)));
    t.insert("phi0_rad".into(), num(drive.phi0));
    t
}

fn source_table(src: &SourceWavepacket<f64>) -> Table {
    let k = k();
    let mut t = Table::new();
    t.insert("sigma_z0_m".into(), num(k.length_to_si(src.sigma_z0)));
    t.insert(
        "sigma_p0_kg_m_per_s".into(),
        num(k.momentum_to_si(src.sigma_p0)),
    );
    t.insert("drift_length_m".into(), num(k.length_to_si(src.l_d)));
    t.insert("drift_time_s".into(), num(k.time_to_si(src.t_d)));
    t.insert("rayleigh_time_s".into(), num(k.time_to_si(src.t_r)));
    t.insert(
        "sigma_z_at_interaction_m".into(),
        num(k.length_to_si(src.sigma_z_td)),
    );
    t
}

/// Derived parameters of a configuration as a TOML table.
pub fn derive_report(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.to_spec()?;
    let (beam, drive) = (&spec.beam, &spec.drive);
    let k = k();
    let src = spec.source()?;
    let p = interaction_params(beam, drive, &src)?;
    let mut out = Table::new();
    out.insert("scenario".into(), Value::String(spec.name.clone()));
    out.insert("beam".into(), Value::Table(beam_table(beam)));
    out.insert("drive".into(), Value::Table(drive_table(beam, drive)));
    out.insert("source".into(), Value::Table(source_table(&src)));
    let mut ip = Table::new();
    ip.insert("upsilon".into(), num(p.upsilon));
    ip.insert("theta_bar".into(), num(p.theta_bar));
    ip.insert("delta".into(), num(p.delta_small));
    ip.insert("epsilon".into(), num(p.epsilon));
    ip.insert("theta_e".into(), num(p.theta_e));
    ip.insert("theta_a".into(), num(p.theta_a));
    ip.insert("p_rec0_kg_m_per_s".into(), num(k.momentum_to_si(p.p_rec0)));
    ip.insert("p_rec_e_over_p_rec0".into(), num(p.p_rec_e / p.p_rec0));
    ip.insert("p_rec_a_over_p_rec0".into(), num(p.p_rec_a / p.p_rec0));
    ip.insert("gamma".into(), num(p.gamma));
    ip.insert("reduction".into(), num(p.reduction()));
    ip.insert("denominator".into(), num(p.denominator()));
    ip.insert("p_rec0_over_sigma_p0".into(), num(p.p_rec0 / src.sigma_p0));
    let rb = resolution_bound(&p, &src);
    ip.insert("shift_over_sigma_p0".into(), num(rb.ratio));
    ip.insert("shift_over_sigma_p0_bound".into(), num(rb.bound));
    out.insert("interaction".into(), Value::Table(ip));
    let mut lim = Table::new();
    lim.insert(
        "critical_drift_length_m".into(),
        num(k.length_to_si(critical_drift_length(beam, drive.lambda))),
    );
    if src.l_d > 0.0 {
        lim.insert(
            "cutoff_wavelength_m".into(),
            num(k.length_to_si(cutoff_wavelength(beam, src.l_d))),
        );
        lim.insert(
            "gamma_min".into(),
            num(minimum_gamma(beam, drive.omega, src.l_d)),
        );
    }
    out.insert("limits".into(), Value::Table(lim));
    if let Some(sw) = &spec.sweep {
        match sw.axis {
            SweepAxis::Gamma => {
                let rows = sw
                    .values
                    .iter()
                    .map(|&g| gamma_row(&spec, g))
                    .collect::<Result<Vec<_>>>()?;
                out.insert("gamma_table".into(), Value::Array(rows));
            }
            SweepAxis::ThetaBar => {
                let rows = spec
                    .epsilons
                    .iter()
                    .map(|&e| {
                        let d = drive_for_epsilon(beam, drive, e)?;
                        let mut t = Table::new();
                        t.insert("epsilon".into(), num(e));
                        t.insert("interaction_length_m".into(), num(k.length_to_si(d.l_i)));
                        Ok(Value::Table(t))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.insert("epsilon_table".into(), Value::Array(rows));
            }
        }
    }
    Ok(out)
}

fn gamma_row(spec: &ScenarioSpec<f64>, g: f64) -> Result<Value> {
    let k = k();
    let mut t = Table::new();
    t.insert("gamma".into(), num(g));
    match realize_source(&spec.source.with_gamma(g)?, &spec.beam, &spec.drive) {
        Ok(s) => {
            t.insert("feasible".into(), Value::Boolean(true));
            t.insert("sigma_z0_m".into(), num(k.length_to_si(s.sigma_z0)));
            t.insert("drift_length_m".into(), num(k.length_to_si(s.l_d)));
        }
        Err(ewave_core::Error::Regime(_)) => {
            t.insert("feasible".into(), Value::Boolean(false));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Value::Table(t))
}

/// Summary of a finished run.
#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: Option<PathBuf>,
    pub summary: Table,
    /// Agreement check result; files are written either way.
    pub check: std::result::Result<(), ewave_core::Error>,
}

fn spectrum_half_width(cmp: &Comparison<f64>) -> f64 {
    12.0 * cmp.source.sigma_p0 + (2.0 * cmp.params.upsilon.abs() + 6.0) * cmp.params.p_rec0
}

fn write_comparison(
    w: &mut Writer,
    cfg: &RunConfig,
    cmp: &Comparison<f64>,
    axis: Axis,
) -> Result<()> {
    let hw = spectrum_half_width(cmp);
    let grid = &cmp.analytic.grid;
    if cfg.output.wants(Emit::Spectra) {
        w.write(
            "spectrum_numeric",
            "spectra/numeric.csv",
            &spectrum_table(grid, &cmp.numeric_density, axis, hw),
        )?;
        w.write(
            "spectrum_rho0",
            "spectra/rho0.csv",
            &spectrum_table(grid, &cmp.analytic.rho0, axis, hw),
        )?;
        w.write(
            "spectrum_rho1",
            "spectra/rho1.csv",
            &spectrum_table(grid, &cmp.analytic.rho1, axis, hw),
        )?;
        w.write(
            "spectrum_rho2",
            "spectra/rho2.csv",
            &spectrum_table(grid, &cmp.analytic.rho2, axis, hw),
        )?;
        let pi = cmp.analytic.phase_independent();
        w.write(
            "spectrum_rho0_rho2",
            "spectra/rho0_rho2.csv",
            &spectrum_table(grid, &pi, axis, hw),
        )?;
        w.write(
            "spectrum_analytic",
            "spectra/analytic.csv",
            &spectrum_table(grid, &cmp.analytic.total, axis, hw),
        )?;
    }
    if cfg.output.wants(Emit::Snapshots) && !cmp.numeric.snapshots.is_empty() {
        write_snapshots(w, &cmp.numeric, axis, hw)?;
    }
    Ok(())
}

fn comparison_summary(cmp: &Comparison<f64>, axis: Axis) -> Table {
    let mut s = Table::new();
    s.insert("dp_numeric".into(), num(axis.momentum(cmp.dp_numeric)));
    s.insert("dp_analytic".into(), num(axis.momentum(cmp.dp_analytic)));
    s.insert("dp_point".into(), num(axis.momentum(cmp.dp_point)));
    s.insert("l1_numeric_vs_analytic".into(), num(cmp.l1));
    s.insert("norm_drift".into(), num(cmp.numeric.norm_drift));
    s.insert("steps".into(), Value::Integer(cmp.numeric.steps as i64));
    s.insert(
        "snapshots".into(),
        Value::Integer(cmp.numeric.snapshots.len() as i64),
    );
    s.insert("gamma".into(), num(cmp.params.gamma));
    s.insert("upsilon".into(), num(cmp.params.upsilon));
    s.insert(
        "warnings".into(),
        Value::Array(
            cmp.warnings
                .iter()
                .map(|w| Value::String(w.clone()))
                .collect(),
        ),
    );
    s
}

fn p_rec0(spec: &ScenarioSpec<f64>) -> f64 {
    spec.drive.omega / spec.beam.v0
}

/// Executes the scenario of `cfg`, writing results below `out` when given.
pub fn run(cfg: &RunConfig, out: Option<&Path>, si: bool) -> Result<RunOutcome> {
    let spec = cfg.to_spec()?;
    let axis = Axis {
        p_rec0: p_rec0(&spec),
        si,
    };
    let mut writer = out
        .map(Writer::new)
        .transpose()
        .context("creating output directory")?;
    let ctx = || format!("scenario `{}`", spec.name);
    let (mut summary, check) = match spec.kind {
        ScenarioKind::Pinem => {
            let o = run_pinem(&spec).with_context(ctx)?;
            let mut s = comparison_summary(&o.comparison, axis);
            s.insert("sideband_minus1".into(), num(o.sidebands_numeric[0]));
            s.insert("sideband_plus1".into(), num(o.sidebands_numeric[1]));
            s.insert("sideband_model".into(), num(o.sideband_model));
            if let Some(w) = writer.as_mut() {
                write_comparison(w, cfg, &o.comparison, axis)?;
                if cfg.output.wants(Emit::Spectra) {
                    let hw = spectrum_half_width(&o.comparison);
                    let t = spectrum_table(&o.comparison.analytic.grid, &o.pinem.density, axis, hw);
                    w.write("spectrum_three_line", "spectra/three_line.csv", &t)?;
                }
            }
            (s, o.comparison.check())
        }
        ScenarioKind::PhaseAcceleration => {
            let c = run_phase_acceleration(&spec).with_context(ctx)?;
            let s = comparison_summary(&c, axis);
            if let Some(w) = writer.as_mut() {
                write_comparison(w, cfg, &c, axis)?;
            }
            (s, c.check())
        }
        ScenarioKind::GammaScan => {
            let o = run_gamma_scan(&spec).with_context(ctx)?;
            let mut s = Table::new();
            s.insert("upsilon".into(), num(o.upsilon));
            s.insert("rms".into(), num(o.rms));
            s.insert("rows".into(), Value::Integer(o.rows.len() as i64));
            s.insert(
                "infeasible_rows".into(),
                Value::Integer(o.rows.iter().filter(|r| r.infeasible).count() as i64),
            );
            if let Some(w) = writer.as_mut() {
                if cfg.output.wants(Emit::ScanTable) {
                    w.write("scan_table", "scan.csv", &scan_table(&o.rows, axis))?;
                }
            }
            (s, o.check())
        }
        ScenarioKind::FelDetuning => {
            let rows = run_fel_detuning(&spec).with_context(ctx)?;
            let mut s = Table::new();
            s.insert("rows".into(), Value::Integer(rows.len() as i64));
            if let Some(w) = writer.as_mut() {
                if cfg.output.wants(Emit::ScanTable) {
                    w.write("fel_table", "fel.csv", &fel_table(&rows, axis))?;
                }
            }
            (s, Ok(()))
        }
    };
    summary.insert("passed_checks".into(), Value::Boolean(check.is_ok()));
    let manifest = match writer {
        Some(mut w) => {
            if cfg.output.wants(Emit::Params) {
                let report = derive_report(cfg)?;
                w.write("params", "params.toml", &toml::to_string(&report)?)?;
            }
            Some(w.finish(cfg, axis, &summary)?)
        }
        None => None,
    };
    Ok(RunOutcome {
        manifest,
        summary,
        check,
    })
}

/// Like [`run`], restricted to scenarios with a sweep.
pub fn scan(cfg: &RunConfig, out: Option<&Path>, si: bool) -> Result<RunOutcome> {
    if cfg.sweep.is_none() {
        bail!(ConfigError::Invalid {
            section: "sweep",
            message: "`scan` needs a [sweep] section".into()
        });
    }
    run(cfg, out, si)
}

/// Checks that a Gamma-based source is realizable for the base configuration.
pub fn source_feasible(spec: &ScenarioSpec<f64>) -> bool {
    match spec.source {
        SourceSpec::Gamma { .. } => realize_source(&spec.source, &spec.beam, &spec.drive).is_ok(),
        SourceSpec::Explicit { .. } => true,
    }
}

/// Second-order shift of the base configuration, in output units.
pub fn base_dp2(spec: &ScenarioSpec<f64>, axis: Axis) -> Result<f64> {
    let p = spec.params()?;
    Ok(axis.momentum(dp2(&p, &spec.beam)?))
}
