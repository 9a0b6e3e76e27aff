use crate::error::{Error, Result};
use crate::pumping::PumpConfig;
use crate::scalar::Real;

/// Which form of the lineshape generated a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineModel {
    /// Bare-basis expression with the complex denominators.
    Exact,
    /// Dressed-atom sum of two Lorentzians per driven pair.
    Dressed,
}

/// Uniform grid of probe detunings in MHz, measured from the `D₅/₂` line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid<T = f64> {
    start: T,
    step: T,
    len: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(start: T, step: T, len: usize) -> Result<Self> {
        if !(step > T::zero()) || !step.is_finite() {
            return Err(Error::input(format!("grid step must be positive, got {step}")));
        }
        if !start.is_finite() {
            return Err(Error::input("grid start must be finite"));
        }
        if len < 2 {
            return Err(Error::input("grid needs at least two points"));
        }
        Ok(Grid { start, step, len })
    }

    /// Grid covering `[min, max]` with spacing `step`; `max` is included when
    /// it falls on the lattice.
    pub fn from_range(min: T, max: T, step: T) -> Result<Self> {
        if !(step > T::zero()) {
            return Err(Error::input(format!("grid step must be positive, got {step}")));
        }
        if !(min < max) {
            return Err(Error::input(format!("grid min {min} must be below max {max}")));
        }
        let n = ((max - min) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0) + 1;
        Grid::new(min, step, n)
    }

    /// ±250 MHz around the `D₅/₂` line at 0.1 MHz spacing.
    pub fn default_probe() -> Self {
        Grid::from_range(T::lit(-250.0), T::lit(250.0), T::lit(0.1)).expect("valid default grid")
    }

    #[inline]
    pub fn start(&self) -> T {
        self.start
    }

    #[inline]
    pub fn step(&self) -> T {
        self.step
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn point(&self, i: usize) -> T {
        self.start + self.step * T::from_usize_lossy(i)
    }

    pub fn end(&self) -> T {
        self.point(self.len - 1)
    }

    pub fn span(&self) -> T {
        self.end() - self.start
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len).map(move |i| self.point(i))
    }

    /// Index of the grid point nearest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: T) -> usize {
        let raw = ((x - self.start) / self.step).round();
        if raw <= T::zero() {
            0
        } else {
            raw.to_usize().unwrap_or(usize::MAX).min(self.len - 1)
        }
    }

    /// Index range `[lo, hi)` of points inside `[min, max]`.
    pub fn index_range(&self, min: T, max: T) -> std::ops::Range<usize> {
        let lo = ((min - self.start) / self.step).ceil();
        let hi = ((max - self.start) / self.step).floor();
        let clamp = |v: T| {
            if v <= T::zero() {
                0
            } else {
                v.to_usize().unwrap_or(usize::MAX).min(self.len)
            }
        };
        let lo = clamp(lo);
        let hi = if hi < T::zero() { 0 } else { clamp(hi + T::one()) };
        lo..hi.max(lo)
    }

    /// Sub-grid of the points `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.end > self.len {
            return Err(Error::input("grid slice out of bounds"));
        }
        Grid::new(self.point(range.start), self.step, range.len())
    }
}

/// Provenance of a spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumMeta<T = f64> {
    pub pump: Option<PumpConfig<T>>,
    pub model: Option<LineModel>,
    /// FWHM of the Gaussian instrument profile applied so far, MHz.
    pub convolution_fwhm: T,
    /// Set when the dressed form was requested where the dressed basis is
    /// undefined (zero generalized Rabi frequency) and the bare limit was used.
    pub degenerate: bool,
}

impl<T: Real> Default for SpectrumMeta<T> {
    fn default() -> Self {
        SpectrumMeta { pump: None, model: None, convolution_fwhm: T::zero(), degenerate: false }
    }
}

/// Probe-signal values on a uniform detuning grid.
///
/// Values are a density per MHz of probe detuning.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T = f64> {
    pub grid: Grid<T>,
    pub values: Vec<T>,
    pub meta: SpectrumMeta<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::input(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Spectrum { grid, values, meta: SpectrumMeta::default() })
    }

    /// Evaluates `f` at each grid point.
    pub fn from_fn(grid: Grid<T>, f: impl Fn(T) -> T) -> Self {
        let values = grid.points().map(f).collect();
        Spectrum { grid, values, meta: SpectrumMeta::default() }
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }

    /// `Σ vᵢ · step`, the discrete integral preserved by convolution.
    pub fn integral(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v) * self.grid.step()
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |a, &v| a.max(v))
    }

    pub fn scaled(&self, c: T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = *v * c);
        out
    }

    /// Restriction to the points within `[min, max]`.
    pub fn window(&self, min: T, max: T) -> Result<Self> {
        let range = self.grid.index_range(min, max);
        if range.len() < 2 {
            return Err(Error::input(format!("window [{min}, {max}] holds fewer than two grid points")));
        }
        Ok(Spectrum {
            grid: self.grid.slice(range.clone())?,
            values: self.values[range].to_vec(),
            meta: self.meta.clone(),
        })
    }

    /// Checks the documented invariants: finite, non-negative values.
    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.grid.len() {
            return Err(Error::input("value count does not match grid"));
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("non-finite value at index {i}")));
        }
        Ok(())
    }
}
