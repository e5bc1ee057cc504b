//! Named experiments combining the analytic model and the solver, with
//! model-versus-numeric comparison tables.

use rayon::prelude::*;

use crate::analytic::{
    dp2, fel_gain_small_recoil, pinem_spectrum, spectrum, Flagged, Kinematics, MomentumGrid,
    SpectrumResult,
};
use crate::error::{Error, Result};
use crate::params::{
    interaction_params, minimum_size, BeamState, FieldDrive, InteractionParams, SourceWavepacket,
};
use crate::solver::{observables, run_interaction, EvolutionReport, MomentumDensity, RunSettings};
use crate::Real;

/// How a requested `Gamma` is turned into a source wavepacket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaPolicy<T> {
    /// Drift from a waist of fixed size; `Gamma` below the waist value is infeasible.
    FixedWaist { sigma_z0: T },
    /// Waist at the interaction, `sigma_z0 = Gamma / k_r`.
    Waist,
    /// Fixed drift length, waist chosen on the short-drift branch;
    /// `Gamma` below the minimum for this drift is infeasible.
    FixedDrift { l_d: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SourceSpec<T> {
    Explicit { sigma_z0: T, l_d: T },
    Gamma { gamma: T, policy: GammaPolicy<T> },
}

impl<T: Real> SourceSpec<T> {
    pub fn with_gamma(&self, gamma: T) -> Result<Self> {
        match *self {
            SourceSpec::Gamma { policy, .. } => Ok(SourceSpec::Gamma { gamma, policy }),
            SourceSpec::Explicit { .. } => {
                Err(Error::domain("a Gamma sweep needs a Gamma-based source"))
            }
        }
    }
}

/// Builds the source for `spec`. Returns a regime error when the requested
/// `Gamma` is not reachable under its policy.
pub fn realize_source<T: Real>(
    spec: &SourceSpec<T>,
    beam: &BeamState<T>,
    drive: &FieldDrive<T>,
) -> Result<SourceWavepacket<T>> {
    match *spec {
        SourceSpec::Explicit { sigma_z0, l_d } => SourceWavepacket::new(sigma_z0, l_d, beam),
        SourceSpec::Gamma { gamma, policy } => {
            if !(gamma > T::zero()) || !gamma.is_finite() {
                return Err(Error::domain(format!("Gamma = {gamma} must be positive")));
            }
            match policy {
                GammaPolicy::FixedWaist { sigma_z0 } => {
                    SourceWavepacket::drifted_to_gamma(gamma, sigma_z0, drive.omega, beam)
                }
                GammaPolicy::Waist => SourceWavepacket::waist_at_gamma(gamma, drive.omega, beam),
                GammaPolicy::FixedDrift { l_d } => {
                    let t_d = l_d / beam.v0;
                    let target = gamma * beam.v0 / drive.omega;
                    let smin = minimum_size(t_d, beam);
                    if target < smin * (T::one() - T::lit(1e-12)) {
                        let gmin = smin * drive.omega / beam.v0;
                        return Err(Error::Regime(format!(
                            "Gamma = {gamma} is below the minimum {gmin} reachable after this drift"
                        )));
                    }
                    // sigma_z0^2 solves a^2 - S a + b = 0 with S = target^2
                    let s = target * target;
                    let b = (smin * smin * T::lit(0.5)).powi(2);
                    let a = (s + (s * s - T::lit(4.0) * b).max(T::zero()).sqrt()) * T::lit(0.5);
                    SourceWavepacket::from_drift_time(a.sqrt(), t_d, beam)
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Gamma,
    ThetaBar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep<T> {
    pub axis: SweepAxis,
    pub values: Vec<T>,
}

impl<T: Real> Sweep<T> {
    pub fn new(axis: SweepAxis, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sweep has no values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("sweep values must be finite"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("sweep values must be sorted"));
        }
        Ok(Self { axis, values })
    }

    /// `count` evenly spaced values from `from` to `to` inclusive.
    pub fn linspace(axis: SweepAxis, from: T, to: T, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::domain("a linear sweep needs at least two points"));
        }
        let step = (to - from) / T::count(count - 1);
        Self::new(
            axis,
            (0..count).map(|i| from + step * T::count(i)).collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Pinem,
    PhaseAcceleration,
    GammaScan,
    FelDetuning,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Pinem => "pinem",
            ScenarioKind::PhaseAcceleration => "phase_accel",
            ScenarioKind::GammaScan => "gamma_scan",
            ScenarioKind::FelDetuning => "fel_detuning",
        }
    }
}

/// Documented agreement limits between solver and model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Relative sideband weight difference in the PINEM limit.
    pub sideband: T,
    /// Relative difference of the phase-dependent shift.
    pub shift: T,
    /// RMS of the Gamma-scan ratio against `exp(-Gamma^2/2)` for `Upsilon <= 1`.
    pub scan_rms: T,
    /// Same, for `Upsilon > 1`.
    pub scan_rms_strong: T,
    /// Checks only apply up to this coupling.
    pub first_order_upsilon: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            sideband: T::lit(0.2),
            shift: T::lit(0.05),
            scan_rms: T::lit(0.05),
            scan_rms_strong: T::lit(0.10),
            first_order_upsilon: T::lit(0.5),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Numerics<T> {
    pub run: RunSettings<T>,
    pub kinematics: Kinematics,
    pub tolerances: Tolerances<T>,
}

impl<T: Real> Default for Numerics<T> {
    fn default() -> Self {
        Self {
            run: RunSettings::default(),
            kinematics: Kinematics::Exact,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec<T> {
    pub name: String,
    pub kind: ScenarioKind,
    pub beam: BeamState<T>,
    pub drive: FieldDrive<T>,
    pub source: SourceSpec<T>,
    pub sweep: Option<Sweep<T>>,
    /// Recoil parameters of the detuning scenario; each sets the interaction length.
    pub epsilons: Vec<T>,
    pub numerics: Numerics<T>,
}

impl<T: Real> ScenarioSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::domain("scenario name is empty"));
        }
        match self.kind {
            ScenarioKind::GammaScan => {
                let ok = matches!(&self.sweep, Some(s) if s.axis == SweepAxis::Gamma);
                if !ok {
                    return Err(Error::domain("gamma_scan needs a Gamma sweep"));
                }
                self.source.with_gamma(T::one())?;
            }
            ScenarioKind::FelDetuning => {
                let ok = matches!(&self.sweep, Some(s) if s.axis == SweepAxis::ThetaBar);
                if !ok {
                    return Err(Error::domain("fel_detuning needs a theta_bar sweep"));
                }
                if self.epsilons.is_empty()
                    || self
                        .epsilons
                        .iter()
                        .any(|e| !(*e > T::zero()) || !e.is_finite())
                {
                    return Err(Error::domain(
                        "fel_detuning needs positive recoil parameters",
                    ));
                }
            }
            ScenarioKind::Pinem | ScenarioKind::PhaseAcceleration => {
                if self.sweep.is_some() {
                    return Err(Error::domain(format!(
                        "{} takes no sweep",
                        self.kind.name()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> Result<SourceWavepacket<T>> {
        realize_source(&self.source, &self.beam, &self.drive)
    }

    pub fn params(&self) -> Result<InteractionParams<T>> {
        interaction_params(&self.beam, &self.drive, &self.source()?)
    }
}

/// Analytic spectrum and solver run on a common momentum axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison<T> {
    pub params: InteractionParams<T>,
    pub source: SourceWavepacket<T>,
    pub analytic: SpectrumResult<T>,
    pub numeric: EvolutionReport<T>,
    pub numeric_density: Vec<T>,
    /// L1 distance between the numeric spectrum and `rho0 + rho1 + rho2`.
    pub l1: T,
    pub dp_numeric: T,
    /// `dp1 + dp2`.
    pub dp_analytic: T,
    pub dp_point: T,
    pub warnings: Vec<String>,
    /// Failed agreement checks.
    pub diagnostics: Vec<String>,
}

impl<T> Comparison<T> {
    pub fn check(&self) -> Result<()> {
        check(&self.diagnostics)
    }
}

fn check(diagnostics: &[String]) -> Result<()> {
    if diagnostics.is_empty() {
        Ok(())
    } else {
        Err(Error::Invariant(diagnostics.join("; ")))
    }
}

fn compare<T: Real>(spec: &ScenarioSpec<T>, src: SourceWavepacket<T>) -> Result<Comparison<T>> {
    let params = interaction_params(&spec.beam, &spec.drive, &src)?;
    let numeric = run_interaction(&spec.beam, &spec.drive, &src, &params, &spec.numerics.run)?;
    let fin: MomentumDensity<T> = numeric.final_spectrum();
    let analytic = spectrum(
        &fin.grid,
        &params,
        &src,
        &spec.beam,
        &spec.drive,
        spec.numerics.kinematics,
    )?;
    let l1 = fin.grid.l1_distance(&fin.density, &analytic.total);
    Ok(Comparison {
        params,
        source: src,
        dp_numeric: numeric.dp_numeric,
        dp_analytic: analytic.dp1 + analytic.dp2,
        dp_point: analytic.dp_point,
        warnings: analytic.warnings.clone(),
        analytic,
        numeric_density: fin.density,
        numeric,
        l1,
        diagnostics: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PinemOutput<T> {
    pub comparison: Comparison<T>,
    /// Three-line model on the numeric axis.
    pub pinem: Flagged<T>,
    /// Numeric weights of the `-1` and `+1` sidebands.
    pub sidebands_numeric: [T; 2],
    /// Model weight `Upsilon^2` of each first sideband.
    pub sideband_model: T,
}

/// Short-interaction limit: three-line model, first-order spectrum and solver.
pub fn run_pinem<T: Real>(spec: &ScenarioSpec<T>) -> Result<PinemOutput<T>> {
    spec.validate()?;
    let mut cmp = compare(spec, spec.source()?)?;
    let grid: &MomentumGrid<T> = &cmp.numeric.momentum_grid;
    let pinem = pinem_spectrum(grid, &cmp.params, &cmp.source)?;
    cmp.warnings.extend(pinem.warnings.iter().cloned());
    let obs = observables(&cmp.numeric)?;
    let weight = |o: i32| {
        obs.sideband_weights
            .iter()
            .find(|(k, _)| *k == o)
            .map(|(_, w)| *w)
            .unwrap_or(T::zero())
    };
    let sidebands_numeric = [weight(-1), weight(1)];
    let y2 = cmp.params.upsilon * cmp.params.upsilon;
    let tol = spec.numerics.tolerances;
    if cmp.params.upsilon <= tol.first_order_upsilon && cmp.params.p_rec0 > cmp.source.sigma_p0 {
        for (o, w) in [(-1, sidebands_numeric[0]), (1, sidebands_numeric[1])] {
            if (w - y2).abs() > tol.sideband * y2 {
                cmp.diagnostics.push(format!(
                    "sideband {o} weight {w} differs from {y2} by more than {}",
                    tol.sideband
                ));
            }
        }
    }
    Ok(PinemOutput {
        comparison: cmp,
        pinem,
        sidebands_numeric,
        sideband_model: y2,
    })
}

/// Phase-defined acceleration of a wavepacket shorter than the wavelength.
pub fn run_phase_acceleration<T: Real>(spec: &ScenarioSpec<T>) -> Result<Comparison<T>> {
    spec.validate()?;
    let mut cmp = compare(spec, spec.source()?)?;
    if cmp.params.gamma > T::lit(2.0) {
        cmp.warnings.push(format!(
            "Gamma = {} suppresses the phase-dependent shift",
            cmp.params.gamma
        ));
    }
    let tol = spec.numerics.tolerances;
    if cmp.params.upsilon <= tol.first_order_upsilon {
        let err = (cmp.dp_numeric - cmp.dp_analytic).abs();
        let scale = tol.shift * cmp.dp_analytic.abs() + T::lit(1e-3) * cmp.dp_point.abs();
        if err > scale {
            cmp.diagnostics.push(format!(
                "numeric shift {} differs from the model {} by {err}",
                cmp.dp_numeric, cmp.dp_analytic
            ));
        }
    }
    Ok(cmp)
}

/// One row of a Gamma scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow<T> {
    pub sweep_value: T,
    pub dp_numeric: T,
    pub dp_analytic: T,
    pub dp_point: T,
    /// `dp_numeric / dp_point`.
    pub ratio: T,
    /// `exp(-Gamma^2/2)`.
    pub model_ratio: T,
    /// The requested `Gamma` was not reachable; numeric fields are NaN.
    pub infeasible: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOutput<T> {
    pub rows: Vec<ScanRow<T>>,
    pub upsilon: T,
    /// RMS of `ratio - model_ratio` over the feasible rows.
    pub rms: T,
    pub diagnostics: Vec<String>,
}

impl<T> ScanOutput<T> {
    pub fn check(&self) -> Result<()> {
        check(&self.diagnostics)
    }
}

fn scan_row<T: Real>(spec: &ScenarioSpec<T>, gamma: T) -> Result<ScanRow<T>> {
    let model_ratio = (-gamma * gamma * T::lit(0.5)).exp();
    let src = match realize_source(&spec.source.with_gamma(gamma)?, &spec.beam, &spec.drive) {
        Ok(s) => s,
        Err(Error::Regime(_)) => {
            let nan = T::nan();
            return Ok(ScanRow {
                sweep_value: gamma,
                dp_numeric: nan,
                dp_analytic: nan,
                dp_point: nan,
                ratio: nan,
                model_ratio,
                infeasible: true,
            });
        }
        Err(e) => return Err(e),
    };
    let params = interaction_params(&spec.beam, &spec.drive, &src)?;
    let report = run_interaction(&spec.beam, &spec.drive, &src, &params, &spec.numerics.run)?;
    let dp_point = crate::analytic::dp_point(&params, &spec.drive, &spec.beam);
    let dp_analytic =
        crate::analytic::dp1(&params, &spec.drive, &spec.beam) + dp2(&params, &spec.beam)?;
    Ok(ScanRow {
        sweep_value: gamma,
        dp_numeric: report.dp_numeric,
        dp_analytic,
        dp_point,
        ratio: report.dp_numeric / dp_point,
        model_ratio,
        infeasible: false,
    })
}

/// RMS of `ratio - exp(-Gamma^2/2)` over feasible rows.
pub fn gaussian_rms<T: Real>(rows: &[ScanRow<T>]) -> T {
    let feasible: Vec<_> = rows.iter().filter(|r| !r.infeasible).collect();
    if feasible.is_empty() {
        return T::nan();
    }
    let s = feasible
        .iter()
        .fold(T::zero(), |a, r| a + (r.ratio - r.model_ratio).powi(2));
    (s / T::count(feasible.len())).sqrt()
}

/// Ratio of the numeric shift to the point-particle shift across `Gamma`.
/// Rows run in parallel and are merged in sweep order.
pub fn run_gamma_scan<T: Real>(spec: &ScenarioSpec<T>) -> Result<ScanOutput<T>> {
    spec.validate()?;
    let values = &spec.sweep.as_ref().expect("validated sweep").values;
    let rows = values
        .par_iter()
        .map(|&g| scan_row(spec, g))
        .collect::<Result<Vec<_>>>()?;
    let rms = gaussian_rms(&rows);
    let upsilon = spec.drive.upsilon();
    let tol = spec.numerics.tolerances;
    let limit = if upsilon > T::one() {
        tol.scan_rms_strong
    } else {
        tol.scan_rms
    };
    let mut diagnostics = Vec::new();
    if !(rms <= limit) {
        diagnostics.push(format!("scan RMS {rms} exceeds {limit}"));
    }
    Ok(ScanOutput {
        rows,
        upsilon,
        rms,
        diagnostics,
    })
}

/// One point of the detuning curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FelRow<T> {
    pub epsilon: T,
    pub theta_bar: T,
    pub dp2: T,
    /// Small-recoil gain-curve approximation of `dp2`.
    pub gain: T,
}

/// Drive with the interaction length chosen so that the recoil parameter is `epsilon`.
pub fn drive_for_epsilon<T: Real>(
    beam: &BeamState<T>,
    drive: &FieldDrive<T>,
    epsilon: T,
) -> Result<FieldDrive<T>> {
    let k_r = drive.omega / beam.v0;
    let delta = drive.omega / (T::lit(2.0) * beam.m_star * beam.v0 * beam.v0);
    let l_i = epsilon / (delta * k_r);
    let theta = (k_r - drive.sync().q_z) * drive.l_i;
    FieldDrive::from_coupling(beam, drive.lambda, l_i, drive.upsilon(), theta, drive.phi0)
}

/// Phase-independent transfer against detuning for each recoil parameter.
pub fn run_fel_detuning<T: Real>(spec: &ScenarioSpec<T>) -> Result<Vec<FelRow<T>>> {
    spec.validate()?;
    let thetas = &spec.sweep.as_ref().expect("validated sweep").values;
    let mut rows = Vec::with_capacity(thetas.len() * spec.epsilons.len());
    for &eps in &spec.epsilons {
        let drive = drive_for_epsilon(&spec.beam, &spec.drive, eps)?;
        let src = realize_source(&spec.source, &spec.beam, &drive)?;
        let base = interaction_params(&spec.beam, &drive, &src)?;
        for &th in thetas {
            let p = base.with_theta_bar(th);
            rows.push(FelRow {
                epsilon: p.epsilon,
                theta_bar: th,
                dp2: dp2(&p, &spec.beam)?,
                gain: fel_gain_small_recoil(&p),
            });
        }
    }
    Ok(rows)
}
