mod common;

use approx::assert_relative_eq;
use common::standard;
use ewave_core::params::minimum_gamma;
use ewave_core::scenarios::*;
use ewave_core::Error;
use std::f64::consts::{E, PI, SQRT_2};

fn spec(kind: ScenarioKind, upsilon: f64, phi0: f64, source: SourceSpec<f64>) -> ScenarioSpec<f64> {
    let (beam, drive) = standard(upsilon, 0.0, phi0);
    ScenarioSpec {
        name: kind.name().to_string(),
        kind,
        beam,
        drive,
        source,
        sweep: None,
        epsilons: vec![],
        numerics: Numerics::default(),
    }
}

fn drifted(gamma: f64) -> SourceSpec<f64> {
    let (beam, drive) = standard(0.1, 0.0, 0.0);
    let kr = drive.omega / beam.v0;
    SourceSpec::Gamma {
        gamma,
        policy: GammaPolicy::FixedWaist { sigma_z0: 0.1 / kr },
    }
}

fn pinem_source() -> SourceSpec<f64> {
    SourceSpec::Gamma {
        gamma: 3.0,
        policy: GammaPolicy::Waist,
    }
}

#[test]
fn pinem_has_three_lines_and_no_shift() {
    let out = run_pinem(&spec(ScenarioKind::Pinem, 0.2, 0.0, pinem_source())).unwrap();
    out.comparison.check().unwrap();
    let pr = out.comparison.params.p_rec0;
    assert!(out.comparison.dp_numeric.abs() < 0.01 * pr);
    for w in out.sidebands_numeric {
        assert!((w - 0.04).abs() < 0.2 * 0.04);
    }
    assert_relative_eq!(out.sideband_model, 0.04, epsilon = 1e-12);
}

#[test]
fn pinem_without_field_is_a_single_gaussian() {
    let out = run_pinem(&spec(ScenarioKind::Pinem, 0.0, 0.0, pinem_source())).unwrap();
    assert!(out.comparison.l1 < 1e-9);
    assert!(out.comparison.dp_numeric.abs() < 1e-12 * out.comparison.params.p_rec0);
    assert_relative_eq!(
        out.sidebands_numeric[0],
        out.sidebands_numeric[1],
        max_relative = 1e-9
    );
}

#[test]
fn phase_defined_packet_gains_two_upsilon_over_e() {
    let cmp = run_phase_acceleration(&spec(
        ScenarioKind::PhaseAcceleration,
        0.2,
        0.0,
        drifted(SQRT_2),
    ))
    .unwrap();
    cmp.check().unwrap();
    let pr = cmp.params.p_rec0;
    assert_relative_eq!(cmp.dp_numeric, 2.0 * 0.2 / E * pr, max_relative = 0.01);
}

#[test]
fn opposite_phase_mirrors_the_spectrum() {
    let acc = run_phase_acceleration(&spec(
        ScenarioKind::PhaseAcceleration,
        0.2,
        0.0,
        drifted(0.6),
    ))
    .unwrap();
    let dec = run_phase_acceleration(&spec(
        ScenarioKind::PhaseAcceleration,
        0.2,
        PI,
        drifted(0.6),
    ))
    .unwrap();
    let n = acc.numeric_density.len();
    let mirrored: Vec<f64> = (0..n)
        .map(|j| {
            if j == 0 {
                0.0
            } else {
                dec.numeric_density[n - j]
            }
        })
        .collect();
    let grid = &acc.numeric.momentum_grid;
    assert!(grid.l1_distance(&acc.numeric_density, &mirrored) < 0.01);
}

#[test]
fn strong_field_packet_accelerates_almost_as_a_point_particle() {
    let cmp = run_phase_acceleration(&spec(
        ScenarioKind::PhaseAcceleration,
        1.5,
        0.0,
        drifted(0.6),
    ))
    .unwrap();
    let expected = cmp.dp_point.abs() * (-0.18f64).exp();
    assert!((cmp.dp_numeric.abs() - expected).abs() < 0.3 * expected);
    assert!(!cmp.warnings.is_empty());
}

fn scan(upsilon: f64, source: SourceSpec<f64>, values: Vec<f64>) -> ScenarioSpec<f64> {
    let mut s = spec(ScenarioKind::GammaScan, upsilon, 0.0, source);
    s.sweep = Some(Sweep::new(SweepAxis::Gamma, values).unwrap());
    s
}

#[test]
fn gamma_scan_follows_gaussian_reduction() {
    let out = run_gamma_scan(&scan(0.8, drifted(1.0), vec![0.2, 1.0, SQRT_2, 2.2, 3.0])).unwrap();
    out.check().unwrap();
    assert!(out.rms < 0.01);
    assert!(out.rows[0].ratio >= 0.95);
    assert!((out.rows[2].ratio - 1.0 / E).abs() < 0.02);
    assert!(out.rows[4].ratio <= 0.02);
    assert_relative_eq!(out.upsilon, 0.8, max_relative = 1e-12);
}

#[test]
fn infeasible_gamma_is_marked_not_dropped() {
    let out = run_gamma_scan(&scan(0.8, drifted(1.0), vec![0.05, 0.5])).unwrap();
    assert_eq!(out.rows.len(), 2);
    assert!(out.rows[0].infeasible && out.rows[0].ratio.is_nan());
    assert!(!out.rows[1].infeasible);
    assert_relative_eq!(
        out.rms,
        (out.rows[1].ratio - out.rows[1].model_ratio).abs(),
        epsilon = 1e-15
    );
}

#[test]
fn gamma_realizations_give_the_same_curve() {
    let values = vec![0.4, 1.0, 1.8];
    let a = run_gamma_scan(&scan(0.8, drifted(1.0), values.clone())).unwrap();
    let b = run_gamma_scan(&scan(
        0.8,
        SourceSpec::Gamma {
            gamma: 1.0,
            policy: GammaPolicy::Waist,
        },
        values,
    ))
    .unwrap();
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert!((x.ratio - y.ratio).abs() < 0.01, "{x:?} {y:?}");
    }
}

#[test]
fn scans_are_deterministic() {
    let s = scan(0.8, drifted(1.0), vec![0.6, 1.2, 2.4]);
    let a = run_gamma_scan(&s).unwrap();
    let b = run_gamma_scan(&s).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fixed_drift_policy_hits_target_or_reports_regime() {
    let (beam, drive) = standard(0.8, 0.0, 0.0);
    let l_d = 1.0e12;
    let gmin = minimum_gamma(&beam, drive.omega, l_d);
    let ok = SourceSpec::Gamma {
        gamma: 1.3 * gmin,
        policy: GammaPolicy::FixedDrift { l_d },
    };
    let src = realize_source(&ok, &beam, &drive).unwrap();
    assert_relative_eq!(
        src.sigma_z_td * drive.omega / beam.v0,
        1.3 * gmin,
        max_relative = 1e-10
    );
    assert!(src.t_d <= src.t_r * (1.0 + 1e-12));
    let bad = SourceSpec::Gamma {
        gamma: 0.9 * gmin,
        policy: GammaPolicy::FixedDrift { l_d },
    };
    assert!(matches!(
        realize_source(&bad, &beam, &drive),
        Err(Error::Regime(_))
    ));
}

fn fel(epsilons: Vec<f64>) -> ScenarioSpec<f64> {
    let mut s = spec(ScenarioKind::FelDetuning, 0.5, 0.0, drifted(1.0));
    s.sweep = Some(Sweep::linspace(SweepAxis::ThetaBar, -3.0 * PI, 3.0 * PI, 241).unwrap());
    s.epsilons = epsilons;
    s
}

#[test]
fn detuning_curve_vanishes_at_synchronism() {
    let rows = run_fel_detuning(&fel(vec![0.01, 40.0])).unwrap();
    for r in rows.iter().filter(|r| r.theta_bar.abs() < 1e-12) {
        assert!(r.dp2.abs() < 1e-12 * r.epsilon.max(1.0));
    }
}

#[test]
fn small_recoil_detuning_matches_gain_curve() {
    let rows = run_fel_detuning(&fel(vec![0.01])).unwrap();
    assert_relative_eq!(rows[0].epsilon, 0.01, max_relative = 1e-9);
    let peak = rows.iter().fold(0.0f64, |a, r| a.max(r.dp2.abs()));
    let worst = rows
        .iter()
        .fold(0.0f64, |a, r| a.max((r.dp2 - r.gain).abs()));
    assert!(worst < 0.02 * peak);
}

#[test]
fn large_recoil_detuning_has_separated_lines() {
    let mut s = fel(vec![40.0]);
    s.sweep = Some(Sweep::linspace(SweepAxis::ThetaBar, -40.0, 40.0, 8001).unwrap());
    let rows = run_fel_detuning(&s).unwrap();
    let max = rows.iter().max_by(|a, b| a.dp2.total_cmp(&b.dp2)).unwrap();
    let min = rows.iter().min_by(|a, b| a.dp2.total_cmp(&b.dp2)).unwrap();
    let (beam, drive) = standard(0.5, 0.0, 0.0);
    let y2pr = 0.25 * drive.omega / beam.v0;
    assert!((max.theta_bar - 20.0).abs() < 0.05 && (min.theta_bar + 20.0).abs() < 0.05);
    assert_relative_eq!(max.dp2, y2pr, max_relative = 0.01);
    assert_relative_eq!(min.dp2, -y2pr, max_relative = 0.01);
}

#[test]
fn scan_spec_without_sweep_is_rejected() {
    let s = spec(ScenarioKind::GammaScan, 0.8, 0.0, drifted(1.0));
    assert!(matches!(run_gamma_scan(&s), Err(Error::Domain(_))));
    assert!(Sweep::new(SweepAxis::Gamma, vec![1.0, 0.5]).is_err());
    assert!(Sweep::new(SweepAxis::Gamma, vec![f64::NAN]).is_err());
}
