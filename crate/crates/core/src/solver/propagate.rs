use num_complex::Complex;

use super::fourier::Fourier;
use super::state::{momentum_density_with, MomentumDensity, WavefunctionState};
use super::window::FieldWindow;
use crate::analytic::MomentumGrid;
use crate::error::{Error, Result};
use crate::params::BeamState;
use crate::scalar::sinc;
use crate::Real;

/// Largest phase advance per step allowed for either factor.
pub const MAX_PHASE_STEP: f64 = 0.1;
/// Allowed drift of the norm over a run.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// `int_a^b sin(alpha + nu t) dt`.
fn sin_integral<T: Real>(alpha: T, nu: T, a: T, b: T) -> T {
    let len = b - a;
    let mid = (a + b) * T::lit(0.5);
    len * (alpha + nu * mid).sin() * sinc(nu * len * T::lit(0.5))
}

/// Symmetric split-step propagator for a fixed grid, field and step.
pub struct Propagator<T: Real> {
    fourier: Fourier<T>,
    half_kinetic: Vec<Complex<T>>,
    positions: Vec<T>,
    field: FieldWindow<T>,
    v0: T,
    dt: T,
}

impl<T: Real> Propagator<T> {
    pub fn new(
        state: &WavefunctionState<T>,
        field: &FieldWindow<T>,
        beam: &BeamState<T>,
        dt: T,
    ) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::domain("time step must be positive"));
        }
        let grid = &state.grid;
        let rel = beam.v0 - grid.frame_velocity;
        let inv2m = T::lit(0.5) / beam.m_star;
        let energy = |k: T| rel * k + inv2m * k * k;
        let limit = T::lit(MAX_PHASE_STEP);
        let kinetic = energy(grid.k_cover).abs().max(energy(-grid.k_cover).abs()) * dt;
        if kinetic > limit {
            return Err(Error::PhaseAdvance {
                kind: "kinetic",
                advance: kinetic.to_f64_lossy(),
                limit: MAX_PHASE_STEP,
            });
        }
        let potential = field.max_potential(beam.v0) * dt;
        if potential > limit {
            return Err(Error::PhaseAdvance {
                kind: "potential",
                advance: potential.to_f64_lossy(),
                limit: MAX_PHASE_STEP,
            });
        }
        let half = dt * T::lit(0.5);
        let half_kinetic = grid
            .wavenumbers()
            .iter()
            .map(|&k| Complex::from_polar(T::one(), -energy(k) * half))
            .collect();
        Ok(Self {
            fourier: Fourier::new(grid.n),
            half_kinetic,
            positions: grid.positions(),
            field: field.clone(),
            v0: beam.v0,
            dt,
        })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    fn kinetic_half(&mut self, psi: &mut [Complex<T>]) {
        self.fourier.forward(psi);
        for (c, f) in psi.iter_mut().zip(&self.half_kinetic) {
            *c = *c * *f;
        }
        self.fourier.inverse(psi);
    }

    /// `-int V dt'` over `[t, t + dt]` at comoving position `xi`, integrated
    /// exactly along `z = xi + u t'`.
    fn phase(&self, xi: T, t: T, u: T) -> T {
        let d = &self.field.drive;
        let scale = self.v0 / d.omega;
        let dt = self.dt;
        let mut acc = -self.field.bias * dt;
        let (za, zb) = (self.field.start(), self.field.end());
        let half = T::lit(0.5);
        let quarter = T::lit(0.25);
        for piece in self.field.pieces() {
            let (lo, hi) = if u == T::zero() {
                if xi < piece.z_lo || xi > piece.z_hi {
                    continue;
                }
                (t, t + dt)
            } else {
                let (p, q) = ((piece.z_lo - xi) / u, (piece.z_hi - xi) / u);
                (p.min(q).max(t), p.max(q).min(t + dt))
            };
            if hi <= lo {
                continue;
            }
            for h in &d.harmonics {
                // sin(alpha + nu t') with alpha, nu from q (xi + u t') - w t' - phi0
                let alpha = h.q_z * xi - d.phi0;
                let nu = h.q_z * u - d.omega;
                let amp = h.amplitude * scale;
                let s = match piece.ramp {
                    None => sin_integral(alpha, nu, lo, hi),
                    Some(edge) => {
                        let anchor = if piece.z_lo == za { za } else { zb };
                        let kappa = T::PI() * u / edge;
                        let beta = T::PI() * (xi - anchor) / edge;
                        half * sin_integral(alpha, nu, lo, hi)
                            - quarter * sin_integral(alpha + beta, nu + kappa, lo, hi)
                            - quarter * sin_integral(alpha - beta, nu - kappa, lo, hi)
                    }
                };
                acc = acc + amp * s;
            }
        }
        acc
    }

    /// One kinetic-half, potential, kinetic-half step.
    pub fn step(&mut self, state: &mut WavefunctionState<T>) -> Result<()> {
        let mut psi = std::mem::take(&mut state.amplitudes);
        self.kinetic_half(&mut psi);
        let u = state.grid.frame_velocity;
        let t = state.t;
        for (c, &xi) in psi.iter_mut().zip(&self.positions) {
            let ph = self.phase(xi, t, u);
            if ph != T::zero() {
                *c = *c * Complex::from_polar(T::one(), ph);
            }
        }
        self.kinetic_half(&mut psi);
        state.amplitudes = psi;
        state.t = t + self.dt;
        state.frame_origin = u * state.t;
        state.check_boundary()
    }

    pub(crate) fn momentum_density(&mut self, state: &WavefunctionState<T>) -> MomentumDensity<T> {
        momentum_density_with(state, &mut self.fourier)
    }
}

/// Single split-operator step (plans the transforms on every call).
pub fn step<T: Real>(
    state: &mut WavefunctionState<T>,
    dt: T,
    field: &FieldWindow<T>,
    beam: &BeamState<T>,
) -> Result<()> {
    Propagator::new(state, field, beam, dt)?.step(state)
}

/// One recorded frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot<T> {
    pub t: T,
    pub frame_origin: T,
    pub momentum: Vec<T>,
    pub spatial: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionReport<T> {
    pub snapshots: Vec<Snapshot<T>>,
    /// Axis shared by every momentum snapshot.
    pub momentum_grid: MomentumGrid<T>,
    /// Comoving positions of the spatial snapshots: `(xi_min, dxi)`.
    pub spatial_axis: (T, T),
    pub dp_numeric: T,
    pub sigma_p_final: T,
    pub norm_drift: T,
    pub p_rec0: T,
    pub steps: usize,
    pub dt: T,
}

impl<T: Real> EvolutionReport<T> {
    pub fn final_spectrum(&self) -> MomentumDensity<T> {
        let last = self.snapshots.last().expect("report has a final snapshot");
        MomentumDensity {
            grid: self.momentum_grid.clone(),
            density: last.momentum.clone(),
        }
    }
}

/// Number of equal steps covering `span` with steps no longer than `dt`.
pub fn step_count<T: Real>(span: T, dt: T) -> usize {
    let r = (span / dt).to_f64_lossy();
    (r - 1e-9).ceil().max(1.0) as usize
}

/// Propagates `state` to `t_final` with equal steps no longer than `dt`,
/// recording a snapshot every `snapshot_every` steps and at the end.
pub fn evolve<T: Real>(
    state: &mut WavefunctionState<T>,
    field: &FieldWindow<T>,
    beam: &BeamState<T>,
    t_final: T,
    dt: T,
    snapshot_every: usize,
    p_rec0: T,
) -> Result<EvolutionReport<T>> {
    if !(t_final > state.t) {
        return Err(Error::domain("t_final must lie after the current time"));
    }
    let steps = step_count(t_final - state.t, dt);
    let t_start = state.t;
    let dt = (t_final - t_start) / T::count(steps);
    let mut prop = Propagator::new(state, field, beam, dt)?;
    state.check_boundary()?;
    let norm0 = state.compute_norm();
    let mut snapshots = Vec::new();
    let mut record = |prop: &mut Propagator<T>, s: &WavefunctionState<T>| {
        let md = prop.momentum_density(s);
        snapshots.push(Snapshot {
            t: s.t,
            frame_origin: s.frame_origin,
            momentum: md.density,
            spatial: s.spatial_density(),
        });
    };
    if snapshot_every > 0 {
        record(&mut prop, state);
    }
    for i in 1..=steps {
        prop.step(state)?;
        if i == steps {
            // land exactly on t_final
            state.t = t_final;
            state.frame_origin = state.grid.frame_velocity * t_final;
        }
        if i == steps || (snapshot_every > 0 && i % snapshot_every == 0) {
            record(&mut prop, state);
        }
    }
    let norm = state.compute_norm();
    let norm_drift = ((norm - norm0) / norm0).abs();
    state.norm = norm;
    let tol = T::lit(NORM_TOLERANCE).max(T::epsilon() * T::lit(1e3));
    if norm_drift > tol {
        return Err(Error::Invariant(format!(
            "norm drift {norm_drift} exceeds {tol}"
        )));
    }
    let fin = prop.momentum_density(state);
    Ok(EvolutionReport {
        snapshots,
        momentum_grid: fin.grid.clone(),
        spatial_axis: (state.grid.z_min, state.grid.dz),
        dp_numeric: fin.mean_offset(),
        sigma_p_final: fin.std_dev(),
        norm_drift,
        p_rec0,
        steps,
        dt,
    })
}

/// Summary observables of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Observables<T> {
    pub dp: T,
    pub sigma_p: T,
    /// `(order, weight)` for sideband orders `-3..=3`.
    pub sideband_weights: Vec<(i32, T)>,
}

pub fn observables<T: Real>(report: &EvolutionReport<T>) -> Result<Observables<T>> {
    if report.snapshots.is_empty() {
        return Err(Error::domain("report has no snapshots"));
    }
    let spec = report.final_spectrum();
    let pr = report.p_rec0;
    let sideband_weights = (-3..=3)
        .map(|o| {
            (
                o,
                spec.window_weight(T::lit(o as f64) * pr, pr * T::lit(0.5)),
            )
        })
        .collect();
    Ok(Observables {
        dp: spec.mean_offset(),
        sigma_p: spec.std_dev(),
        sideband_weights,
    })
}
