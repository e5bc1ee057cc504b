//! Split-operator integration of the longitudinal modified Schrodinger
//! equation in a frame comoving with the electron.

mod fourier;
mod grid;
mod propagate;
mod run;
mod state;
mod window;

pub use grid::{SpatialGrid, DEFAULT_SAMPLES};
pub use propagate::{
    evolve, observables, step, step_count, EvolutionReport, Observables, Propagator, Snapshot,
    MAX_PHASE_STEP, NORM_TOLERANCE,
};
pub use run::{default_dt, interaction_interval, run_interaction, run_on_grid, RunSettings};
pub use state::{
    boundary_tolerance, gaussian_at, init_gaussian, momentum_density, DriftMode, MomentumDensity,
    WavefunctionState,
};
pub use window::{Envelope, FieldWindow, Piece};
