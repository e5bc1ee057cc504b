use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::Real;

/// Forward / inverse transform pair; the inverse is normalized.
#[derive(Clone)]
pub(crate) struct Fourier<T: Real> {
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    scratch: Vec<Complex<T>>,
    scale: T,
}

impl<T: Real> Fourier<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            fwd,
            inv,
            scratch: vec![Complex::new(T::zero(), T::zero()); len],
            scale: T::one() / T::count(n),
        }
    }

    pub fn forward(&mut self, data: &mut [Complex<T>]) {
        self.fwd.process_with_scratch(data, &mut self.scratch);
    }

    pub fn inverse(&mut self, data: &mut [Complex<T>]) {
        self.inv.process_with_scratch(data, &mut self.scratch);
        for v in data.iter_mut() {
            *v = *v * self.scale;
        }
    }
}
