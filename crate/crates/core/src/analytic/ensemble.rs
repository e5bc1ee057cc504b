//! Classical averaging over a thermal spread of centre momenta.

use super::grid::MomentumGrid;
use crate::error::{Error, Result};
use crate::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Kernel {
    #[default]
    Gaussian,
    /// Flat distribution with the same standard deviation.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleSpec<T> {
    pub sigma_p_th: T,
    pub distribution: Kernel,
}

impl<T: Real> EnsembleSpec<T> {
    pub fn new(sigma_p_th: T, distribution: Kernel) -> Result<Self> {
        if !(sigma_p_th >= T::zero()) {
            return Err(Error::domain("thermal spread must be non-negative"));
        }
        Ok(Self {
            sigma_p_th,
            distribution,
        })
    }

    /// Quadrature nodes (centre shifts) and normalized weights.
    pub fn nodes(&self) -> Vec<(T, T)> {
        if self.sigma_p_th == T::zero() {
            return vec![(T::zero(), T::one())];
        }
        let s = self.sigma_p_th;
        let (reach, steps) = match self.distribution {
            Kernel::Gaussian => (T::lit(10.0) * s, 80usize),
            Kernel::Uniform => (T::lit(3.0).sqrt() * s, 64usize),
        };
        let h = reach / T::count(steps);
        let mut nodes: Vec<(T, T)> = (0..=2 * steps)
            .map(|i| {
                let shift = -reach + T::count(i) * h;
                let edge = i == 0 || i == 2 * steps;
                let w = match self.distribution {
                    Kernel::Gaussian => (-(shift * shift) / (T::lit(2.0) * s * s)).exp(),
                    Kernel::Uniform => T::one(),
                };
                (shift, if edge { w * T::lit(0.5) } else { w })
            })
            .collect();
        let total = nodes.iter().fold(T::zero(), |a, n| a + n.1);
        for n in &mut nodes {
            n.1 = n.1 / total;
        }
        nodes
    }
}

/// Averages `family(shift)`, the single-electron density for centre momentum
/// `p0 + shift` on `grid`, over the thermal distribution.
pub fn ensemble_average<T, F>(
    family: F,
    ens: &EnsembleSpec<T>,
    grid: &MomentumGrid<T>,
) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(T) -> Result<Vec<T>>,
{
    let mut out = vec![T::zero(); grid.len()];
    for (shift, w) in ens.nodes() {
        let rho = family(shift)?;
        if rho.len() != grid.len() {
            return Err(Error::domain("family density does not match the grid"));
        }
        for (o, r) in out.iter_mut().zip(&rho) {
            *o = *o + w * *r;
        }
    }
    let peak = out.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let edge = out[0].abs().max(out[out.len() - 1].abs());
    if edge > T::lit(1e-10) * peak {
        return Err(Error::Coverage(format!(
            "ensemble tails reach the grid edge (edge/peak = {})",
            edge / peak
        )));
    }
    Ok(out)
}

/// Number of local maxima higher than `floor` times the global maximum.
pub fn count_peaks<T: Real>(density: &[T], floor: T) -> usize {
    peak_indices(density, floor).len()
}

pub fn peak_indices<T: Real>(density: &[T], floor: T) -> Vec<usize> {
    let peak = density.iter().fold(T::zero(), |a, &v| a.max(v));
    let cut = floor * peak;
    (1..density.len().saturating_sub(1))
        .filter(|&i| {
            density[i] > cut && density[i] > density[i - 1] && density[i] >= density[i + 1]
        })
        .collect()
}
