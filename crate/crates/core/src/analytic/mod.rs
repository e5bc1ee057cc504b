//! First-order perturbation theory of the stimulated interaction.

mod density;
mod ensemble;
mod grid;
mod transfer;

pub use density::{
    pinem_spectrum, rho0, rho1_general, rho1_simplified, rho2, spectrum, ChirpMass, Flagged,
    Kinematics, Rho1Form, SpectrumResult,
};
pub use ensemble::{count_peaks, ensemble_average, peak_indices, EnsembleSpec, Kernel};
pub use grid::{MomentumGrid, DEFAULT_POINTS};
pub use transfer::{
    dp1, dp2, dp_from_rate, dp_point, fel_gain_small_recoil, resolution_bound, stimulated_rate,
    ResolutionBound, StimulatedRate,
};
