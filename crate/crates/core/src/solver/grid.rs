use crate::error::{Error, Result};
use crate::params::{BeamState, FieldDrive, InteractionParams, SourceWavepacket};
use crate::Real;

pub const DEFAULT_SAMPLES: usize = 1 << 14;

/// Uniform comoving grid `xi = z - frame_origin`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialGrid<T> {
    pub n: usize,
    pub z_min: T,
    pub z_max: T,
    pub dz: T,
    pub frame_velocity: T,
    /// Half-width of the momentum band the state is expected to populate.
    pub k_cover: T,
}

impl<T: Real> SpatialGrid<T> {
    /// Centred grid of `n` points over `span`.
    pub fn new(n: usize, span: T, frame_velocity: T) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::domain(format!(
                "grid size {n} must be a power of two >= 4"
            )));
        }
        if !(span > T::zero()) {
            return Err(Error::domain("grid span must be positive"));
        }
        let dz = span / T::count(n);
        let z_min = -span * T::lit(0.5);
        let grid = Self {
            n,
            z_min,
            z_max: z_min + span,
            dz,
            frame_velocity,
            k_cover: T::zero(),
        };
        Ok(Self {
            k_cover: grid.k_max(),
            ..grid
        })
    }

    /// Default grid for a run: span `max(24 sigma_z(t_D), 64 pi sigma_z0)`, then
    /// checks that the momentum band and the wavepacket are resolved.
    pub fn design(
        n: usize,
        src: &SourceWavepacket<T>,
        params: &InteractionParams<T>,
        drive: &FieldDrive<T>,
        beam: &BeamState<T>,
    ) -> Result<Self> {
        let span = (T::lit(24.0) * src.sigma_z_td).max(T::lit(64.0) * T::PI() * src.sigma_z0);
        let mut grid = Self::new(n, span, beam.v0)?;
        let mut cover = T::lit(12.0) * src.sigma_p0;
        for h in &drive.harmonics {
            let y = (h.amplitude * drive.l_i / (T::lit(2.0) * drive.omega)).abs();
            cover = cover.max((T::lit(2.0) * y + T::lit(8.0)) * h.q_z.abs());
        }
        cover = cover.max(T::lit(8.0) * params.p_rec0);
        grid.k_cover = cover;
        grid.check_resolves(src)?;
        if grid.k_max() < cover {
            return Err(Error::Coverage(format!(
                "momentum band {} exceeds the grid Nyquist limit {}; increase n",
                cover,
                grid.k_max()
            )));
        }
        Ok(grid)
    }

    pub fn span(&self) -> T {
        self.z_max - self.z_min
    }

    pub fn dk(&self) -> T {
        T::TAU() / (T::count(self.n) * self.dz)
    }

    pub fn k_max(&self) -> T {
        T::PI() / self.dz
    }

    pub fn position(&self, j: usize) -> T {
        self.z_min + T::count(j) * self.dz
    }

    pub fn positions(&self) -> Vec<T> {
        (0..self.n).map(|j| self.position(j)).collect()
    }

    /// Wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<T> {
        let dk = self.dk();
        let n = self.n;
        (0..n)
            .map(|j| {
                if j < n / 2 {
                    T::count(j) * dk
                } else {
                    -(T::count(n - j) * dk)
                }
            })
            .collect()
    }

    /// Errors unless the drifted wavepacket is resolved and far from the edges.
    pub fn check_resolves(&self, src: &SourceWavepacket<T>) -> Result<()> {
        let per_sigma = src.sigma_z_td / self.dz;
        if per_sigma < T::lit(32.0) {
            return Err(Error::Coverage(format!(
                "only {per_sigma:.1} samples per sigma_z(t_D); need 32"
            )));
        }
        if src.sigma_z_td > self.span() / T::lit(8.0) {
            return Err(Error::Coverage(
                "sigma_z(t_D) exceeds 1/8 of the grid span".into(),
            ));
        }
        Ok(())
    }
}
