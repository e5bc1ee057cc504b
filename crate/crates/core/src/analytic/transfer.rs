//! Momentum transfers and the FEL / QED limiting forms.

use crate::error::{Error, Result};
use crate::params::{BeamState, FieldDrive, InteractionParams, QedLink, SourceWavepacket};
use crate::scalar::{sinc, sinc_prime};
use crate::Real;

/// Phase of the drive seen by the wavepacket centre, `phi0 + theta/2` shifted
/// by the window start.
pub(crate) fn centre_phase<T: Real>(drive: &FieldDrive<T>, theta: T) -> T {
    drive.phi0 + theta * T::lit(0.5) + theta * drive.window_start / drive.l_i
}

/// Classical point-particle momentum transfer. Positive values accelerate.
pub fn dp_point<T: Real>(
    params: &InteractionParams<T>,
    drive: &FieldDrive<T>,
    beam: &BeamState<T>,
) -> T {
    drive.e0 * drive.l_i / beam.v0 * params.sinc0() * centre_phase(drive, params.theta_bar).cos()
}

/// First-order (phase-dependent) transfer `dp_point exp(-Gamma^2/2)`.
pub fn dp1<T: Real>(
    params: &InteractionParams<T>,
    drive: &FieldDrive<T>,
    beam: &BeamState<T>,
) -> T {
    dp_point(params, drive, beam) * params.reduction()
}

/// Second-order transfer `Y^2 (hbar w / v0) [sinc^2(theta_a/2) - sinc^2(theta_e/2)]`.
pub fn dp2<T: Real>(params: &InteractionParams<T>, beam: &BeamState<T>) -> Result<T> {
    if !(params.p_rec0 < T::lit(0.1) * beam.p0) {
        return Err(Error::Regime(format!(
            "recoil {} is not small against p0 = {}",
            params.p_rec0, beam.p0
        )));
    }
    let (se, sa) = (params.sinc_e(), params.sinc_a());
    Ok(params.upsilon * params.upsilon * params.p_rec0 * (sa * sa - se * se))
}

/// Small-recoil expansion of [`dp2`] to first order in `epsilon`:
/// `-(hbar w / v0) Y^2 epsilon d/dtheta sinc^2(theta/2)`.
pub fn fel_gain_small_recoil<T: Real>(params: &InteractionParams<T>) -> T {
    let h = params.theta_bar * T::lit(0.5);
    let dsinc2 = sinc(h) * sinc_prime(h);
    -params.p_rec0 * params.upsilon * params.upsilon * params.epsilon * dsinc2
}

/// Photon emission rate into the mode, split into its parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StimulatedRate<T> {
    pub total: T,
    pub spontaneous: T,
    pub stimulated: T,
}

/// Photon number growth rate of the mode for an electron of momentum `p0`.
pub fn stimulated_rate<T: Real>(
    params: &InteractionParams<T>,
    link: &QedLink<T>,
    _beam: &BeamState<T>,
) -> StimulatedRate<T> {
    // gamma_e v_e is the interacting electron's gamma v, equal to gamma0 v0
    let pref = link.gamma_sp;
    let (se2, sa2) = (params.sinc_e().powi(2), params.sinc_a().powi(2));
    let spontaneous = pref * se2;
    let stimulated = pref * link.nu_q * (se2 - sa2);
    StimulatedRate {
        total: spontaneous + stimulated,
        spontaneous,
        stimulated,
    }
}

/// Momentum change implied by the stimulated photon rate through energy conservation.
pub fn dp_from_rate<T: Real>(
    rate: &StimulatedRate<T>,
    params: &InteractionParams<T>,
    beam: &BeamState<T>,
    l_i: T,
) -> T {
    -(l_i / beam.v0) * params.p_rec0 * rate.stimulated
}

/// Momentum resolution figures of the phase-dependent shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolutionBound<T> {
    /// `|dp_point| / sigma_p0` at synchronism, `8 pi Y sigma_z0 / (lambda beta)`.
    pub ratio: T,
    /// Upper bound `8 pi Y Gamma`.
    pub bound: T,
}

impl<T: Real> ResolutionBound<T> {
    /// True when a shift of `dp_over_sigma` (in units of `sigma_p0`) exceeds the bound.
    pub fn exceeds(&self, dp_over_sigma: T) -> bool {
        dp_over_sigma.abs() > self.bound
    }
}

pub fn resolution_bound<T: Real>(
    params: &InteractionParams<T>,
    src: &SourceWavepacket<T>,
) -> ResolutionBound<T> {
    let y = params.upsilon.abs();
    ResolutionBound {
        ratio: T::lit(2.0) * y * params.p_rec0 / src.sigma_p0,
        bound: T::lit(8.0) * T::PI() * y * params.gamma,
    }
}
