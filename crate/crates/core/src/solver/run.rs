use super::grid::{SpatialGrid, DEFAULT_SAMPLES};
use super::propagate::{evolve, step_count, EvolutionReport};
use super::state::{init_gaussian, DriftMode};
use super::window::{Envelope, FieldWindow};
use crate::error::{Error, Result};
use crate::params::{BeamState, FieldDrive, InteractionParams, SourceWavepacket};
use crate::Real;

/// Discretization and output settings for one solver run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSettings<T> {
    pub samples: usize,
    /// Time step; `None` picks [`default_dt`].
    pub dt: Option<T>,
    pub envelope: Envelope<T>,
    pub drift: DriftMode,
    /// Number of intermediate frames to record (the final frame is always kept).
    pub frames: usize,
    /// Distance, in `sigma_z(t_D)`, between the packet centre and the window
    /// when the field is switched on or off.
    pub margin: T,
}

impl<T: Real> Default for RunSettings<T> {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            dt: None,
            envelope: Envelope::Sharp,
            drift: DriftMode::Analytic,
            frames: 0,
            margin: T::lit(8.0),
        }
    }
}

/// Step that keeps both phase advances at half the allowed limit and resolves
/// the transit with at least 64 steps.
pub fn default_dt<T: Real>(
    grid: &SpatialGrid<T>,
    field: &FieldWindow<T>,
    beam: &BeamState<T>,
) -> T {
    let target = T::lit(0.05);
    let transit = field.drive.l_i / beam.v0;
    let mut dt = transit / T::lit(64.0);
    let v = field.max_potential(beam.v0);
    if v > T::zero() {
        dt = dt.min(target / v);
    }
    let rel = (beam.v0 - grid.frame_velocity).abs();
    let kin = rel * grid.k_cover + grid.k_cover * grid.k_cover / (T::lit(2.0) * beam.m_star);
    if kin > T::zero() {
        dt = dt.min(target / kin);
    }
    dt
}

/// Field-on interval `(t_start, t_final)` for a packet of length `sigma` at `z = v0 t`.
pub fn interaction_interval<T: Real>(
    drive: &FieldDrive<T>,
    beam: &BeamState<T>,
    sigma: T,
    margin: T,
) -> (T, T) {
    let t0 = (drive.window_start - margin * sigma) / beam.v0;
    let t1 = (drive.window_start + drive.l_i + margin * sigma) / beam.v0;
    (t0, t1)
}

/// Prepares the drifted Gaussian, brings it to the window edge by exact free
/// drift and integrates through the interaction.
pub fn run_interaction<T: Real>(
    beam: &BeamState<T>,
    drive: &FieldDrive<T>,
    src: &SourceWavepacket<T>,
    params: &InteractionParams<T>,
    settings: &RunSettings<T>,
) -> Result<EvolutionReport<T>> {
    let grid = SpatialGrid::design(settings.samples, src, params, drive, beam)?;
    let field = FieldWindow::with_envelope(drive.clone(), settings.envelope);
    run_on_grid(&grid, &field, beam, src, params, settings)
}

pub fn run_on_grid<T: Real>(
    grid: &SpatialGrid<T>,
    field: &FieldWindow<T>,
    beam: &BeamState<T>,
    src: &SourceWavepacket<T>,
    params: &InteractionParams<T>,
    settings: &RunSettings<T>,
) -> Result<EvolutionReport<T>> {
    if !(settings.margin >= T::zero()) {
        return Err(Error::domain("margin must be non-negative"));
    }
    let mut state = init_gaussian(src, beam, grid, settings.drift)?;
    state.check_boundary()?;
    let (t0, t1) = interaction_interval(&field.drive, beam, src.sigma_z_td, settings.margin);
    state.free_drift(t0, beam);
    state.check_boundary()?;
    let dt = settings.dt.unwrap_or_else(|| default_dt(grid, field, beam));
    let every = step_count(t1 - t0, dt)
        .checked_div(settings.frames)
        .map_or(0, |k| k.max(1));
    evolve(&mut state, field, beam, t1, dt, every, params.p_rec0)
}
