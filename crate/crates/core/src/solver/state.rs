use num_complex::Complex;

use super::fourier::Fourier;
use super::grid::SpatialGrid;
use crate::analytic::MomentumGrid;
use crate::error::{Error, Result};
use crate::params::{BeamState, SourceWavepacket};
use crate::Real;

/// How the pre-interaction drift is applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DriftMode {
    /// Evaluate the drifted Gaussian in closed form.
    #[default]
    Analytic,
    /// Start at the waist and propagate freely for `t_D`.
    Numeric,
}

/// Slowly varying envelope on a comoving grid (carrier `exp(i p0 z)` removed).
#[derive(Clone, Debug, PartialEq)]
pub struct WavefunctionState<T> {
    pub grid: SpatialGrid<T>,
    pub amplitudes: Vec<Complex<T>>,
    pub t: T,
    /// Lab position of `xi = 0`.
    pub frame_origin: T,
    pub norm: T,
    pub p0: T,
}

/// Momentum density over the dual grid, normalized to unit integral.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumDensity<T> {
    pub grid: MomentumGrid<T>,
    pub density: Vec<T>,
}

impl<T: Real> MomentumDensity<T> {
    pub fn mean_offset(&self) -> T {
        self.grid.first_moment(&self.density)
    }

    pub fn std_dev(&self) -> T {
        let m = self.mean_offset();
        (self.grid.second_moment(&self.density) - m * m)
            .max(T::zero())
            .sqrt()
    }

    /// Probability within `+- half_width` of offset `centre`.
    pub fn window_weight(&self, centre: T, half_width: T) -> T {
        let masked: Vec<T> = self
            .grid
            .offsets()
            .iter()
            .zip(&self.density)
            .map(|(&x, &r)| {
                if (x - centre).abs() <= half_width {
                    r
                } else {
                    T::zero()
                }
            })
            .collect();
        self.grid.integrate(&masked)
    }
}

/// Drifted Gaussian with total free evolution time `t_total` since the waist,
/// centred at `xi = 0`.
pub fn gaussian_at<T: Real>(
    src: &SourceWavepacket<T>,
    grid: &SpatialGrid<T>,
    t_total: T,
) -> Vec<Complex<T>> {
    let w2 = src.complex_width_sq(t_total);
    let w = w2.sqrt();
    let pref = Complex::new(
        T::TAU().powf(T::lit(-0.25)) * src.sigma_z0.sqrt(),
        T::zero(),
    ) / w;
    let a = Complex::new(T::lit(0.25), T::zero()) / w2;
    grid.positions()
        .iter()
        .map(|&x| pref * (-a * (x * x)).exp())
        .collect()
}

/// State at `t = 0` (centre at lab `z = 0`) after drifting `t_D` from the waist.
pub fn init_gaussian<T: Real>(
    src: &SourceWavepacket<T>,
    beam: &BeamState<T>,
    grid: &SpatialGrid<T>,
    mode: DriftMode,
) -> Result<WavefunctionState<T>> {
    grid.check_resolves(src)?;
    let amplitudes = match mode {
        DriftMode::Analytic => gaussian_at(src, grid, src.t_d),
        DriftMode::Numeric => {
            let mut psi = gaussian_at(src, grid, T::zero());
            let mut f = Fourier::new(grid.n);
            f.forward(&mut psi);
            let ks = grid.wavenumbers();
            for (c, &k) in psi.iter_mut().zip(&ks) {
                *c = *c
                    * Complex::from_polar(T::one(), -k * k / (T::lit(2.0) * beam.m_star) * src.t_d);
            }
            f.inverse(&mut psi);
            psi
        }
    };
    let mut state = WavefunctionState {
        grid: *grid,
        amplitudes,
        t: T::zero(),
        frame_origin: T::zero(),
        norm: T::zero(),
        p0: beam.p0,
    };
    state.norm = state.compute_norm();
    Ok(state)
}

impl<T: Real> WavefunctionState<T> {
    pub fn compute_norm(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |a, c| a + c.norm_sqr())
            * self.grid.dz
    }

    pub fn spatial_density(&self) -> Vec<T> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Mean and standard deviation of `|psi|^2` in comoving coordinates.
    pub fn spatial_moments(&self) -> (T, T) {
        let xs = self.grid.positions();
        let (mut m0, mut m1, mut m2) = (T::zero(), T::zero(), T::zero());
        for (c, &x) in self.amplitudes.iter().zip(&xs) {
            let r = c.norm_sqr();
            m0 = m0 + r;
            m1 = m1 + r * x;
            m2 = m2 + r * x * x;
        }
        let mean = m1 / m0;
        (mean, (m2 / m0 - mean * mean).max(T::zero()).sqrt())
    }

    /// Exact free evolution for a (possibly negative) time `dt`.
    pub fn free_drift(&mut self, dt: T, beam: &BeamState<T>) {
        let mut f = Fourier::new(self.grid.n);
        f.forward(&mut self.amplitudes);
        let rel = beam.v0 - self.grid.frame_velocity;
        let half = T::lit(0.5) / beam.m_star;
        for (c, k) in self.amplitudes.iter_mut().zip(self.grid.wavenumbers()) {
            *c = *c * Complex::from_polar(T::one(), -(rel * k + half * k * k) * dt);
        }
        f.inverse(&mut self.amplitudes);
        self.t = self.t + dt;
        self.frame_origin = self.grid.frame_velocity * self.t;
    }

    /// `|psi|` at the grid edges relative to its peak.
    pub fn edge_ratio(&self) -> T {
        let n = self.amplitudes.len();
        let band = (n / 128).max(1);
        let peak = self
            .amplitudes
            .iter()
            .fold(T::zero(), |a, c| a.max(c.norm()));
        let edge = self.amplitudes[..band]
            .iter()
            .chain(&self.amplitudes[n - band..])
            .fold(T::zero(), |a, c| a.max(c.norm()));
        edge / peak
    }

    pub fn check_boundary(&self) -> Result<()> {
        let r = self.edge_ratio();
        if !(r < boundary_tolerance::<T>()) {
            return Err(Error::BoundaryLeak {
                t: self.t.to_f64_lossy(),
                ratio: r.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// L2 distance to another state on the same grid.
    pub fn l2_distance(&self, other: &Self) -> T {
        let s = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |a, (x, y)| a + (*x - *y).norm_sqr());
        (s * self.grid.dz).sqrt()
    }
}

pub(crate) fn momentum_density_with<T: Real>(
    state: &WavefunctionState<T>,
    f: &mut Fourier<T>,
) -> MomentumDensity<T> {
    let n = state.grid.n;
    let mut c = state.amplitudes.clone();
    f.forward(&mut c);
    let dk = state.grid.dk();
    // |c(k)|^2 with c(k) = dz / sqrt(2 pi) sum psi exp(-i k xi)
    let scale = state.grid.dz * state.grid.dz / T::TAU() / state.norm;
    let mut density = vec![T::zero(); n];
    for (j, v) in c.iter().enumerate() {
        density[(j + n / 2) % n] = v.norm_sqr() * scale;
    }
    let grid = MomentumGrid::from_start(state.p0, -(T::count(n / 2) * dk), dk, n)
        .expect("valid dual grid");
    MomentumDensity { grid, density }
}

/// Momentum density `|c(p')|^2 / norm` on the dual grid, ascending in `p' - p0`.
pub fn momentum_density<T: Real>(state: &WavefunctionState<T>) -> MomentumDensity<T> {
    momentum_density_with(state, &mut Fourier::new(state.grid.n))
}

/// Largest edge-to-peak amplitude ratio accepted: `1e-8`, or a rounding floor
/// for low precision types.
pub fn boundary_tolerance<T: Real>() -> T {
    T::lit(1e-8).max(T::epsilon() * T::lit(64.0))
}
