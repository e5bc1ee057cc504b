//! Beam kinematics, drive field, source wavepacket and the derived
//! dimensionless interaction numbers. All values are in natural units
//! (see [`crate::units`]).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::sinc;
use crate::Real;

/// Compton wavelength `h / m_e c` in natural units.
pub fn compton_wavelength<T: Real>() -> T {
    T::TAU()
}

/// Relativistic electron kinematics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamState<T> {
    pub gamma0: T,
    pub beta0: T,
    pub v0: T,
    pub p0: T,
    /// Longitudinal effective mass `gamma0^3 m_e`.
    pub m_star: T,
    /// `lambda_c / gamma0^3`.
    pub lambda_c_star: T,
}

impl<T: Real> BeamState<T> {
    pub fn from_gamma(gamma0: T) -> Result<Self> {
        if !(gamma0 >= T::one()) || !gamma0.is_finite() {
            return Err(Error::domain(format!("gamma0 = {gamma0} must be >= 1")));
        }
        // sqrt((g-1)(g+1))/g avoids cancellation near g = 1
        let beta0 = ((gamma0 - T::one()) * (gamma0 + T::one())).sqrt() / gamma0;
        let g3 = gamma0 * gamma0 * gamma0;
        Ok(Self {
            gamma0,
            beta0,
            v0: beta0,
            p0: gamma0 * beta0,
            m_star: g3,
            lambda_c_star: compton_wavelength::<T>() / g3,
        })
    }

    pub fn from_beta(beta0: T) -> Result<Self> {
        if !(beta0 >= T::zero() && beta0 < T::one()) {
            return Err(Error::domain(format!("beta0 = {beta0} must lie in [0, 1)")));
        }
        Self::from_gamma(T::one() / ((T::one() - beta0) * (T::one() + beta0)).sqrt())
    }

    /// Longitudinal velocity at momentum offset `dp` from `p0`, to the
    /// order of the quadratic dispersion.
    pub fn velocity_at(&self, dp: T) -> T {
        self.v0 + dp / self.m_star
    }

    /// Kinetic energy relative to the carrier, `v0 dp + dp^2 / 2 m*`.
    pub fn dispersion(&self, dp: T) -> T {
        dp * (self.v0 + dp / (T::lit(2.0) * self.m_star))
    }
}

/// Free function form of [`BeamState::from_gamma`].
pub fn beam_from_gamma<T: Real>(gamma0: T) -> Result<BeamState<T>> {
    BeamState::from_gamma(gamma0)
}

/// One spatial harmonic of the drive, `E_m e^{i q_zm z}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Harmonic<T> {
    /// `e E_m` in natural units.
    pub amplitude: T,
    pub q_z: T,
}

/// The radiation wave acting on the electron over `[window_start, window_start + l_i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDrive<T> {
    /// `e E_0` of the synchronous harmonic.
    pub e0: T,
    pub omega: T,
    pub lambda: T,
    pub phi0: T,
    pub harmonics: Vec<Harmonic<T>>,
    /// Index into `harmonics` of the one closest to `omega / v0`.
    pub synchronous: usize,
    pub l_i: T,
    pub window_start: T,
}

impl<T: Real> FieldDrive<T> {
    pub fn new(
        omega: T,
        phi0: T,
        l_i: T,
        harmonics: Vec<Harmonic<T>>,
        beam: &BeamState<T>,
    ) -> Result<Self> {
        if !(omega > T::zero()) {
            return Err(Error::domain("omega must be positive"));
        }
        if !(l_i > T::zero()) {
            return Err(Error::domain("interaction length must be positive"));
        }
        if harmonics.is_empty() {
            return Err(Error::domain("drive needs at least one harmonic"));
        }
        let target = omega / beam.v0;
        let synchronous = harmonics
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let da = (target - a.1.q_z).abs();
                let db = (target - b.1.q_z).abs();
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        Ok(Self {
            e0: harmonics[synchronous].amplitude,
            omega,
            lambda: T::TAU() / omega,
            phi0,
            harmonics,
            synchronous,
            l_i,
            window_start: T::zero(),
        })
    }

    /// Single-harmonic drive specified by the coupling `upsilon` and detuning `theta_bar`.
    pub fn from_coupling(
        beam: &BeamState<T>,
        wavelength: T,
        l_i: T,
        upsilon: T,
        theta_bar: T,
        phi0: T,
    ) -> Result<Self> {
        if !(wavelength > T::zero()) {
            return Err(Error::domain("wavelength must be positive"));
        }
        let omega = T::TAU() / wavelength;
        let q_z = omega / beam.v0 - theta_bar / l_i;
        let amplitude = T::lit(2.0) * omega * upsilon / l_i;
        Self::new(omega, phi0, l_i, vec![Harmonic { amplitude, q_z }], beam)
    }

    pub fn sync(&self) -> &Harmonic<T> {
        &self.harmonics[self.synchronous]
    }

    pub fn with_phi0(&self, phi0: T) -> Self {
        Self {
            phi0,
            ..self.clone()
        }
    }

    /// Rescales every harmonic so that the synchronous one has coupling `upsilon`.
    pub fn with_upsilon(&self, upsilon: T) -> Self {
        let target = T::lit(2.0) * self.omega * upsilon / self.l_i;
        let scale = if self.e0 == T::zero() {
            T::zero()
        } else {
            target / self.e0
        };
        let mut out = self.clone();
        for h in &mut out.harmonics {
            h.amplitude = if self.e0 == T::zero() {
                T::zero()
            } else {
                h.amplitude * scale
            };
        }
        out.harmonics[out.synchronous].amplitude = target;
        out.e0 = target;
        out
    }

    pub fn upsilon(&self) -> T {
        self.e0 * self.l_i / (T::lit(2.0) * self.omega)
    }
}

/// Gaussian source wavepacket and its free-drift history.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceWavepacket<T> {
    pub sigma_z0: T,
    pub sigma_p0: T,
    pub l_d: T,
    pub t_d: T,
    /// Longitudinal Rayleigh time.
    pub t_r: T,
    pub sigma_z_td: T,
    /// Complex momentum variance after the drift.
    pub sigma_p2_td: Complex<T>,
}

impl<T: Real> SourceWavepacket<T> {
    pub fn new(sigma_z0: T, l_d: T, beam: &BeamState<T>) -> Result<Self> {
        if !(l_d >= T::zero()) {
            return Err(Error::domain("drift length must be non-negative"));
        }
        let t_d = if l_d == T::zero() {
            T::zero()
        } else {
            l_d / beam.v0
        };
        Self::from_drift_time(sigma_z0, t_d, beam)
    }

    pub fn from_drift_time(sigma_z0: T, t_d: T, beam: &BeamState<T>) -> Result<Self> {
        if !(sigma_z0 > T::zero()) {
            return Err(Error::domain("sigma_z0 must be positive"));
        }
        if !(t_d >= T::zero()) {
            return Err(Error::domain("drift time must be non-negative"));
        }
        let sigma_p0 = T::lit(0.5) / sigma_z0;
        let t_r = rayleigh_time(sigma_z0, beam);
        let tau = t_d / t_r;
        Ok(Self {
            sigma_z0,
            sigma_p0,
            l_d: t_d * beam.v0,
            t_d,
            t_r,
            sigma_z_td: wavepacket_size_at(sigma_z0, t_d, beam)?,
            sigma_p2_td: Complex::new(sigma_p0 * sigma_p0, T::zero()) / Complex::new(T::one(), tau),
        })
    }

    /// Realizes `Gamma = (omega / v0) sigma_z(t_D)` by drifting from a waist of
    /// fixed size `sigma_z0`.
    pub fn drifted_to_gamma(gamma: T, sigma_z0: T, omega: T, beam: &BeamState<T>) -> Result<Self> {
        let target = gamma * beam.v0 / omega;
        let ratio = target / sigma_z0;
        if ratio < T::one() - T::lit(1e-12) {
            let gmin = omega * sigma_z0 / beam.v0;
            return Err(Error::Regime(format!(
                "Gamma = {gamma} is below the waist value {gmin} for sigma_z0 = {sigma_z0}"
            )));
        }
        let r2 = (ratio * ratio - T::one()).max(T::zero());
        let t_d = rayleigh_time(sigma_z0, beam) * r2.sqrt();
        Self::from_drift_time(sigma_z0, t_d, beam)
    }

    /// Realizes `Gamma` with a waist at the interaction (`t_D = 0`).
    pub fn waist_at_gamma(gamma: T, omega: T, beam: &BeamState<T>) -> Result<Self> {
        Self::from_drift_time(gamma * beam.v0 / omega, T::zero(), beam)
    }

    /// Complex spatial width `sigma_z0 sqrt(1 + i t / t_R)` after a total drift `t`.
    pub fn complex_width_sq(&self, t: T) -> Complex<T> {
        Complex::new(
            self.sigma_z0 * self.sigma_z0,
            self.sigma_z0 * self.sigma_z0 * t / self.t_r,
        )
    }
}

/// `4 pi sigma_z0^2 / (lambda_c* c)`.
pub fn rayleigh_time<T: Real>(sigma_z0: T, beam: &BeamState<T>) -> T {
    T::lit(4.0) * T::PI() * sigma_z0 * sigma_z0 / beam.lambda_c_star
}

/// Free-drift size `sqrt(sigma_z0^2 + (lambda_c* c t / 4 pi sigma_z0)^2)`.
pub fn wavepacket_size_at<T: Real>(sigma_z0: T, t: T, beam: &BeamState<T>) -> Result<T> {
    if !(sigma_z0 > T::zero()) {
        return Err(Error::domain("sigma_z0 must be positive"));
    }
    if !(t >= T::zero()) {
        return Err(Error::domain("time must be non-negative"));
    }
    let b = beam.lambda_c_star * t / (T::lit(4.0) * T::PI() * sigma_z0);
    Ok(sigma_z0.hypot(b))
}

/// Smallest `sigma_z(t)` reachable by any waist, `sqrt(lambda_c* c t / 2 pi)`.
pub fn minimum_size<T: Real>(t: T, beam: &BeamState<T>) -> T {
    (beam.lambda_c_star * t / T::TAU()).sqrt()
}

/// Smallest achievable `Gamma` after an effective drift `l_d`.
pub fn minimum_gamma<T: Real>(beam: &BeamState<T>, omega: T, l_d: T) -> T {
    omega / beam.v0 * minimum_size(l_d / beam.v0, beam)
}

/// Drift length beyond which `Gamma_min > sqrt(2)`, `beta^3 gamma^3 lambda^2 / (pi lambda_c)`.
pub fn critical_drift_length<T: Real>(beam: &BeamState<T>, lambda: T) -> T {
    let bg = beam.beta0 * beam.gamma0;
    bg * bg * bg * lambda * lambda / (T::PI() * compton_wavelength::<T>())
}

/// Short-wavelength limit for a drift `l_d`, `(pi lambda_c l_d / beta^3 gamma^3)^(1/2)`:
/// the wavelength whose critical drift length equals `l_d`.
pub fn cutoff_wavelength<T: Real>(beam: &BeamState<T>, l_d: T) -> T {
    let bg = beam.beta0 * beam.gamma0;
    (T::PI() * compton_wavelength::<T>() * l_d / (bg * bg * bg)).sqrt()
}

/// Dimensionless interaction numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionParams<T> {
    pub upsilon: T,
    pub theta_bar: T,
    pub delta_small: T,
    pub epsilon: T,
    pub theta_e: T,
    pub theta_a: T,
    pub p_rec_e: T,
    pub p_rec_a: T,
    pub p_rec0: T,
    pub gamma: T,
}

impl<T: Real> InteractionParams<T> {
    pub fn with_theta_bar(&self, theta_bar: T) -> Self {
        let half = self.epsilon * T::lit(0.5);
        Self {
            theta_bar,
            theta_e: theta_bar + half,
            theta_a: theta_bar - half,
            ..*self
        }
    }

    pub fn with_upsilon(&self, upsilon: T) -> Self {
        Self { upsilon, ..*self }
    }

    pub fn sinc_e(&self) -> T {
        sinc(self.theta_e * T::lit(0.5))
    }

    pub fn sinc_a(&self) -> T {
        sinc(self.theta_a * T::lit(0.5))
    }

    pub fn sinc0(&self) -> T {
        sinc(self.theta_bar * T::lit(0.5))
    }

    /// Normalization `1 + Y^2 [sinc^2(theta_e/2) + sinc^2(theta_a/2)]`.
    pub fn denominator(&self) -> T {
        let (se, sa) = (self.sinc_e(), self.sinc_a());
        T::one() + self.upsilon * self.upsilon * (se * se + sa * sa)
    }

    /// Suppression factor `exp(-Gamma^2 / 2)`.
    pub fn reduction(&self) -> T {
        (-self.gamma * self.gamma * T::lit(0.5)).exp()
    }
}

pub fn interaction_params<T: Real>(
    beam: &BeamState<T>,
    drive: &FieldDrive<T>,
    src: &SourceWavepacket<T>,
) -> Result<InteractionParams<T>> {
    if !(drive.l_i > T::zero()) {
        return Err(Error::domain("interaction length must be positive"));
    }
    if beam.v0 == T::zero() {
        return Err(Error::domain(
            "electron at rest has no synchronous interaction",
        ));
    }
    let k_r = drive.omega / beam.v0;
    let two = T::lit(2.0);
    let delta = drive.omega / (two * beam.m_star * beam.v0 * beam.v0);
    let epsilon = delta * k_r * drive.l_i;
    let theta_bar = (k_r - drive.sync().q_z) * drive.l_i;
    Ok(InteractionParams {
        upsilon: drive.e0 * drive.l_i / (two * drive.omega),
        theta_bar,
        delta_small: delta,
        epsilon,
        theta_e: theta_bar + epsilon / two,
        theta_a: theta_bar - epsilon / two,
        p_rec_e: k_r * (T::one() + delta),
        p_rec_a: k_r * (T::one() - delta),
        p_rec0: k_r,
        gamma: k_r * src.sigma_z_td,
    })
}

/// The wavelength form of `Gamma`, `2 pi sigma_z(t_D) / (beta0 lambda)`.
pub fn gamma_from_wavelength<T: Real>(
    beam: &BeamState<T>,
    drive: &FieldDrive<T>,
    src: &SourceWavepacket<T>,
) -> T {
    T::TAU() * src.sigma_z_td / (beam.beta0 * drive.lambda)
}

/// Spontaneous emission rate per mode and incident photon flux.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QedLink<T> {
    pub gamma_sp: T,
    pub nu_q: T,
}

impl<T: Real> QedLink<T> {
    pub fn new(gamma_sp: T, nu_q: T) -> Result<Self> {
        if !(gamma_sp >= T::zero() && nu_q >= T::zero()) {
            return Err(Error::domain("gamma_sp and nu_q must be non-negative"));
        }
        Ok(Self { gamma_sp, nu_q })
    }
}

/// `Y^2 = (L_I / v0) Gamma_sp nu_q`.
pub fn qed_coupling<T: Real>(link: &QedLink<T>, beam: &BeamState<T>, l_i: T) -> T {
    l_i / beam.v0 * link.gamma_sp * link.nu_q
}

/// Inverse of [`qed_coupling`]: the `Gamma_sp` giving coupling `upsilon` at flux `nu_q`.
pub fn spontaneous_rate_from_coupling<T: Real>(
    upsilon: T,
    nu_q: T,
    beam: &BeamState<T>,
    l_i: T,
) -> Result<T> {
    if nu_q == T::zero() {
        return Err(Error::domain(
            "nu_q = 0: spontaneous rate not determined by the coupling",
        ));
    }
    Ok(upsilon * upsilon * beam.v0 / (l_i * nu_q))
}
