#![allow(dead_code)]

use ewave_core::params::{
    interaction_params, BeamState, FieldDrive, InteractionParams, SourceWavepacket,
};
use ewave_core::units::PhysicalConstants;

pub struct Setup {
    pub beam: BeamState<f64>,
    pub drive: FieldDrive<f64>,
    pub src: SourceWavepacket<f64>,
    pub params: InteractionParams<f64>,
}

/// gamma0 = 1.4, beta0 lambda = 2 um, L_I = 8 um.
pub fn standard(upsilon: f64, theta: f64, phi0: f64) -> (BeamState<f64>, FieldDrive<f64>) {
    let k = PhysicalConstants::<f64>::codata2018();
    let beam = BeamState::from_gamma(1.4).unwrap();
    let lambda = k.length_from_si(2e-6 / beam.beta0);
    let l_i = k.length_from_si(8e-6);
    let drive = FieldDrive::from_coupling(&beam, lambda, l_i, upsilon, theta, phi0).unwrap();
    (beam, drive)
}

/// Source of waist `sz0` (in units of 1/k_r) drifted to `gamma`.
pub fn with_gamma(beam: BeamState<f64>, drive: FieldDrive<f64>, gamma: f64, sz0: f64) -> Setup {
    let kr = drive.omega / beam.v0;
    let src = SourceWavepacket::drifted_to_gamma(gamma, sz0 / kr, drive.omega, &beam).unwrap();
    let params = interaction_params(&beam, &drive, &src).unwrap();
    Setup {
        beam,
        drive,
        src,
        params,
    }
}

pub fn waist(beam: BeamState<f64>, drive: FieldDrive<f64>, gamma: f64) -> Setup {
    let src = SourceWavepacket::waist_at_gamma(gamma, drive.omega, &beam).unwrap();
    let params = interaction_params(&beam, &drive, &src).unwrap();
    Setup {
        beam,
        drive,
        src,
        params,
    }
}
