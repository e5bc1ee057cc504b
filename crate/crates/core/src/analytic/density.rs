//! Momentum density distributions after the interaction.

use num_complex::Complex;

use super::grid::MomentumGrid;
use super::transfer::{centre_phase, dp1, dp2, dp_point};
use crate::error::{Error, Result};
use crate::params::{BeamState, FieldDrive, InteractionParams, SourceWavepacket};
use crate::scalar::sinc;
use crate::Real;

/// Photon-exchange kinematics used by [`rho1_general`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Kinematics {
    /// Recoil and detuning of every transition follow from energy
    /// conservation with the quadratic dispersion, evaluated per momentum pair.
    #[default]
    Exact,
    /// Constant recoils `p_rec^{e,a}` and detunings `theta_{e,a}` from [`InteractionParams`].
    Linearized,
}

/// Mass entering the chirp phase `phi` of the small-recoil form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChirpMass {
    /// `phi = 2 w t_D (p' - p0) / (m v0)`.
    #[default]
    Rest,
    /// `phi = 2 w t_D (p' - p0) / (m* v0)`.
    Effective,
}

/// Evaluation form of [`rho1_simplified`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Rho1Form {
    /// Closed form of the cross term at zero recoil, keeping both shifted
    /// Gaussians and the exact drift chirp `w t_D (p' - p0) / (m* v0)`.
    #[default]
    Closed,
    /// The first-order-in-recoil expansion with the bracket
    /// `[1 - (p' - p0) p' / sigma_p0^2]` and pointwise `exp(-Gamma^2/2)`.
    Expanded(ChirpMass),
}

/// Drifted Gaussian momentum amplitude `c0(p' - p0)`.
#[derive(Clone, Copy, Debug)]
struct Amplitude<T> {
    norm: T,
    a: Complex<T>,
}

impl<T: Real> Amplitude<T> {
    fn new(src: &SourceWavepacket<T>) -> Self {
        let s2 = src.sigma_p0 * src.sigma_p0;
        let norm = (T::TAU() * s2).powf(T::lit(-0.25));
        let tau = src.t_d / src.t_r;
        Self {
            norm,
            a: Complex::new(T::one(), tau) / (T::lit(4.0) * s2),
        }
    }

    fn at(&self, x: T) -> Complex<T> {
        (-self.a * (x * x)).exp() * self.norm
    }
}

fn gaussian<T: Real>(x: T, sigma: T) -> T {
    (-(x * x) / (T::lit(2.0) * sigma * sigma)).exp() / (T::TAU().sqrt() * sigma)
}

fn require_source<T: Real>(grid: &MomentumGrid<T>, src: &SourceWavepacket<T>) -> Result<()> {
    if !(src.sigma_p0 > T::zero()) || !src.sigma_p0.is_finite() {
        return Err(Error::domain(
            "density arrays need a finite momentum spread",
        ));
    }
    grid.require_coverage(T::lit(8.0) * src.sigma_p0, "8 sigma_p0")
}

/// Initial Gaussian density.
pub fn rho0<T: Real>(grid: &MomentumGrid<T>, src: &SourceWavepacket<T>) -> Result<Vec<T>> {
    require_source(grid, src)?;
    Ok(grid
        .offsets()
        .iter()
        .map(|&x| gaussian(x, src.sigma_p0))
        .collect())
}

/// Phase-dependent first-order density `2 Re{c1* c0} / D` assembled from the
/// drifted amplitude and the emission and absorption amplitudes.
pub fn rho1_general<T: Real>(
    grid: &MomentumGrid<T>,
    params: &InteractionParams<T>,
    src: &SourceWavepacket<T>,
    beam: &BeamState<T>,
    drive: &FieldDrive<T>,
    kinematics: Kinematics,
) -> Result<Vec<T>> {
    require_source(grid, src)?;
    let c0 = Amplitude::new(src);
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let y = params.upsilon;
    let k_r = params.p_rec0;
    let q = k_r - params.theta_bar / drive.l_i;
    let omega = k_r * beam.v0;
    let m = beam.m_star;
    let p0 = beam.p0;
    let d = params.denominator();

    // amplitude of a transition with recoil `kappa`, source offset `xs`, pair midpoint `mid`
    let transition = |kappa: T, xs: T, mid: T, sign: T, jac: T| {
        let theta = (kappa - q) * drive.l_i;
        let phase = centre_phase(drive, theta);
        let mag = y * jac * (T::one() + mid / p0) * sinc(theta * half);
        Complex::from_polar(mag, -sign * phase) * c0.at(xs) * sign
    };

    let out = grid
        .offsets()
        .iter()
        .map(|&x| {
            let (abs, emi) = match kinematics {
                Kinematics::Exact => {
                    let v = beam.velocity_at(x);
                    let disc = v * v - two * omega / m;
                    let abs = if disc >= T::zero() && v > T::zero() {
                        let ka = two * omega / (v + disc.sqrt());
                        let xs = x - ka;
                        transition(
                            ka,
                            xs,
                            x - ka * half,
                            T::one(),
                            beam.v0 / beam.velocity_at(xs),
                        )
                    } else {
                        Complex::new(T::zero(), T::zero())
                    };
                    let ke = two * omega / (v + (v * v + two * omega / m).sqrt());
                    let xs = x + ke;
                    let emi = transition(
                        ke,
                        xs,
                        x + ke * half,
                        -T::one(),
                        beam.v0 / beam.velocity_at(xs),
                    );
                    (abs, emi)
                }
                Kinematics::Linearized => {
                    let (ka, ke) = (params.p_rec_a, params.p_rec_e);
                    let abs = linear_term(
                        y,
                        params.theta_a,
                        params.sinc_a(),
                        ka,
                        x,
                        p0,
                        drive,
                        &c0,
                        T::one(),
                    );
                    let emi = linear_term(
                        y,
                        params.theta_e,
                        params.sinc_e(),
                        ke,
                        x,
                        p0,
                        drive,
                        &c0,
                        -T::one(),
                    );
                    (abs, emi)
                }
            };
            two * ((abs + emi).conj() * c0.at(x)).re / d
        })
        .collect();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn linear_term<T: Real>(
    y: T,
    theta: T,
    s: T,
    kappa: T,
    x: T,
    p0: T,
    drive: &FieldDrive<T>,
    c0: &Amplitude<T>,
    sign: T,
) -> Complex<T> {
    let half = T::lit(0.5);
    let xs = x - sign * kappa;
    let mid = x - sign * kappa * half;
    let mag = y * (T::one() + mid / p0) * s;
    Complex::from_polar(mag, -sign * centre_phase(drive, theta)) * c0.at(xs) * sign
}

/// Phase-dependent density at negligible recoil parameter.
pub fn rho1_simplified<T: Real>(
    grid: &MomentumGrid<T>,
    params: &InteractionParams<T>,
    src: &SourceWavepacket<T>,
    beam: &BeamState<T>,
    drive: &FieldDrive<T>,
    form: Rho1Form,
) -> Result<Vec<T>> {
    require_source(grid, src)?;
    if params.epsilon >= T::lit(0.1) {
        return Err(Error::Regime(format!(
            "epsilon = {} is not small",
            params.epsilon
        )));
    }
    let sigma = src.sigma_p0;
    let pr = params.p_rec0;
    let y = params.upsilon;
    let s = params.sinc0();
    let big_phi = centre_phase(drive, params.theta_bar);
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let p0 = beam.p0;
    let out = match form {
        Rho1Form::Closed => {
            let d0 = T::one() + two * y * y * s * s;
            let pref = two * y * s / d0 * (-(pr * pr) / (T::lit(8.0) * sigma * sigma)).exp()
                / (T::TAU().sqrt() * sigma);
            let gc = src.t_d * pr * pr / (two * beam.m_star);
            grid.offsets()
                .iter()
                .map(|&x| {
                    let chirp = src.t_d * pr * x / beam.m_star;
                    let (lo, hi) = (x - pr * half, x + pr * half);
                    let g = |u: T| (-(u * u) / (two * sigma * sigma)).exp();
                    let a = (T::one() + lo / p0) * g(lo) * (big_phi + gc - chirp).cos();
                    let e = (T::one() + hi / p0) * g(hi) * (big_phi - gc - chirp).cos();
                    pref * (a - e)
                })
                .collect()
        }
        Rho1Form::Expanded(mass) => {
            let m = match mass {
                ChirpMass::Rest => T::one(),
                ChirpMass::Effective => beam.m_star,
            };
            let omega = pr * beam.v0;
            let pref = two * (pr / p0) * y * s * params.reduction();
            grid.offsets()
                .iter()
                .map(|&x| {
                    let chirp = two * omega * src.t_d * x / (m * beam.v0);
                    let bracket = T::one() - x * (p0 + x) / (sigma * sigma);
                    pref * gaussian(x, sigma) * (big_phi + chirp).cos() * bracket
                })
                .collect()
        }
    };
    Ok(out)
}

/// Phase-independent second-order density (emission and absorption sidebands
/// with their norm subtraction).
pub fn rho2<T: Real>(
    grid: &MomentumGrid<T>,
    params: &InteractionParams<T>,
    src: &SourceWavepacket<T>,
) -> Result<Vec<T>> {
    require_source(grid, src)?;
    let y2 = params.upsilon * params.upsilon;
    let (se2, sa2) = (params.sinc_e().powi(2), params.sinc_a().powi(2));
    let (pe, pa) = (params.p_rec_e, params.p_rec_a);
    let p0 = grid.p0;
    let half = T::lit(0.5);
    let sigma = src.sigma_p0;
    let keep_e = (T::one() - pe * half / p0).powi(2);
    let keep_a = (T::one() + pa * half / p0).powi(2);
    Ok(grid
        .offsets()
        .iter()
        .map(|&x| {
            let r0 = gaussian(x, sigma);
            let em =
                (T::one() + (x + pe * half) / p0).powi(2) * gaussian(x + pe, sigma) - keep_e * r0;
            let ab =
                (T::one() + (x - pa * half) / p0).powi(2) * gaussian(x - pa, sigma) - keep_a * r0;
            y2 * (se2 * em + sa2 * ab)
        })
        .collect())
}

/// A density with any regime warnings raised while computing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Flagged<T> {
    pub density: Vec<T>,
    pub warnings: Vec<String>,
}

/// Symmetric three-line spectrum of the short-interaction limit.
pub fn pinem_spectrum<T: Real>(
    grid: &MomentumGrid<T>,
    params: &InteractionParams<T>,
    src: &SourceWavepacket<T>,
) -> Result<Flagged<T>> {
    require_source(grid, src)?;
    let mut warnings = Vec::new();
    if params.epsilon >= T::lit(0.1) * T::PI() {
        warnings.push(format!(
            "epsilon = {} is not small against pi",
            params.epsilon
        ));
    }
    if params.p_rec0 <= src.sigma_p0 {
        warnings.push(format!(
            "recoil {} does not exceed the momentum spread {}: sidebands overlap",
            params.p_rec0, src.sigma_p0
        ));
    }
    let y2 = params.upsilon * params.upsilon;
    let pr = params.p_rec0;
    let sigma = src.sigma_p0;
    let density = grid
        .offsets()
        .iter()
        .map(|&x| {
            (T::one() - T::lit(2.0) * y2) * gaussian(x, sigma)
                + y2 * (gaussian(x + pr, sigma) + gaussian(x - pr, sigma))
        })
        .collect();
    Ok(Flagged { density, warnings })
}

/// Full first-order perturbation spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult<T> {
    pub grid: MomentumGrid<T>,
    pub rho0: Vec<T>,
    pub rho1: Vec<T>,
    pub rho2: Vec<T>,
    pub total: Vec<T>,
    pub dp1: T,
    pub dp2: T,
    pub dp_point: T,
    pub normalization_denominator: T,
    pub warnings: Vec<String>,
}

impl<T: Real> SpectrumResult<T> {
    /// `rho0 + rho2`, the phase-independent part.
    pub fn phase_independent(&self) -> Vec<T> {
        self.rho0
            .iter()
            .zip(&self.rho2)
            .map(|(a, b)| *a + *b)
            .collect()
    }
}

pub fn spectrum<T: Real>(
    grid: &MomentumGrid<T>,
    params: &InteractionParams<T>,
    src: &SourceWavepacket<T>,
    beam: &BeamState<T>,
    drive: &FieldDrive<T>,
    kinematics: Kinematics,
) -> Result<SpectrumResult<T>> {
    let r0 = rho0(grid, src)?;
    let r1 = rho1_general(grid, params, src, beam, drive, kinematics)?;
    let r2 = rho2(grid, params, src)?;
    let total: Vec<T> = r0
        .iter()
        .zip(&r1)
        .zip(&r2)
        .map(|((a, b), c)| *a + *b + *c)
        .collect();
    let mut warnings = Vec::new();
    if params.upsilon > T::one() {
        warnings.push(format!(
            "Upsilon = {} is outside the perturbative regime",
            params.upsilon
        ));
    }
    if let Some(&m) = total
        .iter()
        .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
    {
        let peak = total.iter().fold(T::zero(), |a, &v| a.max(v));
        if m < -T::lit(1e-12) * peak {
            warnings.push(format!(
                "first-order density is negative (min {m}): Upsilon too large"
            ));
        }
    }
    Ok(SpectrumResult {
        grid: grid.clone(),
        rho0: r0,
        rho1: r1,
        rho2: r2,
        total,
        dp1: dp1(params, drive, beam),
        dp2: dp2(params, beam)?,
        dp_point: dp_point(params, drive, beam),
        normalization_denominator: params.denominator(),
        warnings,
    })
}
