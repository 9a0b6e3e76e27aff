use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Kernel truncation in standard deviations.
const TRUNCATION_SIGMAS: f64 = 5.0;

/// Standard deviation of a Gaussian with the given FWHM.
pub fn gaussian_sigma<T: Real>(fwhm: T) -> T {
    fwhm / (T::lit(8.0) * T::LN_2()).sqrt()
}

/// Truncated, sampled Gaussian kernel for a uniform grid.
#[derive(Clone, Debug)]
pub struct GaussianKernel<T> {
    /// One-sided weights, `weights[k]` for offset `k` steps.
    weights: Vec<T>,
    full_norm: T,
}

impl<T: Real> GaussianKernel<T> {
    /// Kernel of width `fwhm` on a grid of spacing `step` (same units);
    /// `None` for a zero width.
    pub fn new(step: T, fwhm: T) -> Option<Self> {
        if !(fwhm > T::zero()) {
            return None;
        }
        let sigma = gaussian_sigma(fwhm);
        let half_width = (T::lit(TRUNCATION_SIGMAS) * sigma / step).ceil().to_usize().unwrap_or(0);
        let weights: Vec<T> = (0..=half_width)
            .map(|k| {
                let x = T::from_usize_lossy(k) * step / sigma;
                (-(x * x) / T::lit(2.0)).exp()
            })
            .collect();
        let full_norm = weights[1..].iter().fold(weights[0], |a, &w| a + w + w);
        Some(GaussianKernel { weights, full_norm })
    }

    pub fn half_width(&self) -> usize {
        self.weights.len() - 1
    }

    /// Convolves `values`, which occupy indices `offset..offset + values.len()`
    /// of a grid with `full_len` points.
    ///
    /// Each source sample is spread with the kernel renormalized over the
    /// points it can reach on the full grid, so a full-grid convolution
    /// conserves `Σ values` exactly. Output points farther than
    /// [`half_width`](Self::half_width) from an interior segment boundary
    /// equal the full-grid result.
    pub fn apply_segment(&self, values: &[T], offset: usize, full_len: usize) -> Vec<T> {
        let hw = self.half_width();
        let n = values.len();
        let mut acc = vec![T::zero(); n];
        for (i, &v) in values.iter().enumerate() {
            if v == T::zero() {
                continue;
            }
            let scale = v / self.source_norm(offset + i, full_len);
            let lo = i.saturating_sub(hw);
            let hi = (i + hw).min(n - 1);
            for (j, slot) in acc.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *slot = *slot + scale * self.weights[i.abs_diff(j)];
            }
        }
        acc
    }

    pub fn apply(&self, values: &[T]) -> Vec<T> {
        self.apply_segment(values, 0, values.len())
    }

    /// Kernel sum over the points of a `full_len` grid reachable from index `gi`.
    fn source_norm(&self, gi: usize, full_len: usize) -> T {
        let hw = self.half_width();
        let (glo, ghi) = (gi.saturating_sub(hw), (gi + hw).min(full_len - 1));
        if gi - glo == hw && ghi - gi == hw {
            self.full_norm
        } else {
            (glo..=ghi).fold(T::zero(), |a, j| a + self.weights[gi.abs_diff(j)])
        }
    }
}

/// [`GaussianKernel::apply_segment`] by FFT, planned once for segments of
/// one length. Agrees with the direct sum to rounding.
#[derive(Clone)]
pub struct SegmentConvolver<T: Real> {
    kernel: GaussianKernel<T>,
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    /// Transform of the circularly placed kernel, divided by the FFT size.
    transfer: Vec<Complex<T>>,
}

impl<T: Real> SegmentConvolver<T> {
    pub fn new(kernel: GaussianKernel<T>, len: usize) -> Self {
        let hw = kernel.half_width();
        // Padding by one half width keeps the wrapped tail off the output.
        let size = (len + hw + 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let mut transfer = vec![Complex::new(T::zero(), T::zero()); size];
        transfer[0].re = kernel.weights[0];
        for (d, &w) in kernel.weights.iter().enumerate().skip(1) {
            transfer[d].re = w;
            transfer[size - d].re = w;
        }
        forward.process(&mut transfer);
        let scale = T::one() / T::from_usize_lossy(size);
        transfer.iter_mut().for_each(|c| *c = *c * scale);
        SegmentConvolver { kernel, len, forward, inverse, transfer }
    }

    pub fn kernel(&self) -> &GaussianKernel<T> {
        &self.kernel
    }

    /// Same contract as [`GaussianKernel::apply_segment`]; `values` must
    /// have the planned length.
    pub fn apply(&self, values: &[T], offset: usize, full_len: usize) -> Vec<T> {
        assert_eq!(values.len(), self.len, "segment length differs from the plan");
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.transfer.len()];
        for (i, (slot, &v)) in buf.iter_mut().zip(values).enumerate() {
            slot.re = v / self.kernel.source_norm(offset + i, full_len);
        }
        self.forward.process(&mut buf);
        buf.iter_mut().zip(&self.transfer).for_each(|(b, &t)| *b = *b * t);
        self.inverse.process(&mut buf);
        buf[..self.len].iter().map(|c| c.re).collect()
    }
}

/// Convolves `spec` with a unit-area Gaussian of width `fwhm` (MHz).
///
/// Direct summation on the spectrum's own grid with the kernel truncated at
/// ±5σ; the discrete integral is conserved (see [`GaussianKernel`]).
pub fn convolve_gaussian<T: Real>(spec: &Spectrum<T>, fwhm: T) -> Result<Spectrum<T>> {
    if !(fwhm >= T::zero()) || !fwhm.is_finite() {
        return Err(Error::input(format!("convolution FWHM must be ≥ 0, got {fwhm}")));
    }
    let grid = spec.grid;
    if fwhm > grid.span() / T::lit(2.0) {
        return Err(Error::input(format!(
            "convolution FWHM {fwhm} MHz exceeds half the grid span {} MHz",
            grid.span()
        )));
    }
    let mut out = spec.clone();
    out.meta.convolution_fwhm = (spec.meta.convolution_fwhm.powi(2) + fwhm.powi(2)).sqrt();
    if let Some(kernel) = GaussianKernel::new(grid.step(), fwhm) {
        out.values = kernel.apply(&spec.values);
    }
    Ok(out)
}
