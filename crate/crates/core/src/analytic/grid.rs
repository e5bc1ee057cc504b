use crate::error::{Error, Result};
use crate::params::{InteractionParams, SourceWavepacket};
use crate::Real;

/// Uniform momentum grid stored as offsets `p' - p0` so that spacing stays
/// exact even when `dp` is many orders below `p0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumGrid<T> {
    pub p0: T,
    pub dp: T,
    offsets: Vec<T>,
}

pub const DEFAULT_POINTS: usize = 1 << 14;

impl<T: Real> MomentumGrid<T> {
    /// `n` points from `first` with spacing `dp`.
    pub fn from_start(p0: T, first: T, dp: T, n: usize) -> Result<Self> {
        if n < 2 || !(dp > T::zero()) {
            return Err(Error::domain("momentum grid needs n >= 2 and dp > 0"));
        }
        let offsets = (0..n).map(|i| first + T::count(i) * dp).collect();
        Ok(Self { p0, dp, offsets })
    }

    /// Symmetric grid of `n` points spanning `p0 +- half_width`.
    pub fn centered(p0: T, half_width: T, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("momentum grid needs n >= 2"));
        }
        let dp = T::lit(2.0) * half_width / T::count(n - 1);
        Self::from_start(p0, -half_width, dp, n)
    }

    /// Default grid: `2^14` points over `+-max(10 sigma_p0, 6 p_rec0)`.
    pub fn for_source(
        p0: T,
        src: &SourceWavepacket<T>,
        params: &InteractionParams<T>,
    ) -> Result<Self> {
        let hw = (T::lit(10.0) * src.sigma_p0).max(T::lit(6.0) * params.p_rec0);
        Self::centered(p0, hw, DEFAULT_POINTS)
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// `p' - p0` for every sample.
    pub fn offsets(&self) -> &[T] {
        &self.offsets
    }

    /// Absolute momenta `p'`.
    pub fn samples(&self) -> Vec<T> {
        self.offsets.iter().map(|&x| self.p0 + x).collect()
    }

    pub fn min_offset(&self) -> T {
        self.offsets[0]
    }

    pub fn max_offset(&self) -> T {
        self.offsets[self.offsets.len() - 1]
    }

    /// Errors unless the grid spans `p0 +- half_width`.
    pub fn require_coverage(&self, half_width: T, what: &str) -> Result<()> {
        if self.min_offset() > -half_width || self.max_offset() < half_width {
            return Err(Error::Coverage(format!(
                "momentum grid [{}, {}] around p0 does not cover +-{} needed for {what}",
                self.min_offset(),
                self.max_offset(),
                half_width
            )));
        }
        Ok(())
    }

    /// `int f dp'` by the trapezoidal rule.
    pub fn integrate(&self, f: &[T]) -> T {
        crate::scalar::trapezoid(f, self.dp)
    }

    /// `int (p' - p0) f dp'`.
    pub fn first_moment(&self, f: &[T]) -> T {
        crate::scalar::trapezoid_weighted(f, self.dp, |i| self.offsets[i])
    }

    /// `int (p' - p0)^2 f dp'`.
    pub fn second_moment(&self, f: &[T]) -> T {
        crate::scalar::trapezoid_weighted(f, self.dp, |i| self.offsets[i] * self.offsets[i])
    }

    /// `int |f - g| dp'`.
    pub fn l1_distance(&self, f: &[T], g: &[T]) -> T {
        let d: Vec<T> = f.iter().zip(g).map(|(a, b)| (*a - *b).abs()).collect();
        self.integrate(&d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_is_uniform_far_below_p0() {
        let g = MomentumGrid::centered(0.98_f64, 6e-5, 1 << 14).unwrap();
        let s = g.offsets();
        for w in s.windows(2) {
            assert!(((w[1] - w[0]) / g.dp - 1.0).abs() < 1e-11);
        }
        assert!((s[0] + 6e-5).abs() < 1e-20);
        assert!((s[s.len() - 1] - 6e-5).abs() < 1e-18);
        assert!(g.require_coverage(5e-5, "test").is_ok());
        assert!(g.require_coverage(7e-5, "test").is_err());
    }
}
