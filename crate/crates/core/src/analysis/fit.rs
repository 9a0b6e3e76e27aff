//! Fitting model spectra to a measured trace.

use crate::error::{Error, Result};
use crate::lineshape::{convolve_gaussian, lineshape, Components, LineModel, Spectrum};
use crate::pumping::{AtomParams, PumpConfig};
use crate::scalar::Real;

use super::minimize::nelder_mead;

/// Which parameters the fit may vary. Fixed ones keep their nominal or
/// starting values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeParams {
    pub s: bool,
    pub fwhm: bool,
    pub amplitude_scale: bool,
}

impl FreeParams {
    pub const ALL: FreeParams = FreeParams { s: true, fwhm: true, amplitude_scale: true };
}

impl Default for FreeParams {
    fn default() -> Self {
        Self::ALL
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions<T = f64> {
    pub model: LineModel,
    /// Starting (or, when not free, fixed) instrument FWHM, MHz.
    pub fwhm: T,
    /// Allowed `s` range as multiples of the nominal value.
    pub s_bounds: (T, T),
    /// Allowed instrument FWHM range, MHz.
    pub fwhm_bounds: (T, T),
    pub max_iter: usize,
}

impl<T: Real> Default for FitOptions<T> {
    fn default() -> Self {
        FitOptions {
            model: LineModel::Exact,
            fwhm: T::lit(4.5),
            s_bounds: (T::lit(0.5), T::lit(2.0)),
            fwhm_bounds: (T::lit(3.0), T::lit(12.0)),
            max_iter: 2000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult<T = f64> {
    pub fitted_s: T,
    pub fitted_fwhm: T,
    pub amplitude_scale: T,
    /// `‖y − model‖ / ‖y‖`.
    pub residual_norm: T,
    /// `|fitted_s − s_nominal| / s_nominal`.
    pub s_adjustment_fraction: T,
    pub iterations: usize,
}

/// Convolved model for `pump` on the measured grid, scaled by `scale`.
pub fn model_spectrum<T: Real>(
    measured: &Spectrum<T>,
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
    model: LineModel,
    fwhm: T,
    scale: T,
) -> Result<Spectrum<T>> {
    let raw = lineshape(&measured.grid, pump, params, None, model, Components::All)?;
    Ok(convolve_gaussian(&raw, fwhm)?.scaled(scale))
}

struct Objective<'a, T> {
    measured: &'a Spectrum<T>,
    nominal: &'a PumpConfig<T>,
    params: &'a AtomParams<T>,
    free: FreeParams,
    options: &'a FitOptions<T>,
    y_norm2: T,
}

impl<T: Real> Objective<'_, T> {
    /// `(s, fwhm)` from the search coordinates, clamped into bounds, plus the
    /// squared distance by which the raw point lay outside.
    fn unpack(&self, x: &[T]) -> (T, T, T) {
        let mut k = 0;
        let mut excess = T::zero();
        let mut take = |free: bool, nominal: T, lo: T, hi: T| {
            if !free {
                return nominal;
            }
            let v = x[k];
            k += 1;
            let c = v.max(lo).min(hi);
            excess = excess + (v - c) * (v - c);
            c
        };
        let (slo, shi) = self.options.s_bounds;
        let u = take(self.free.s, T::one(), slo, shi);
        let (flo, fhi) = self.options.fwhm_bounds;
        let fwhm = take(self.free.fwhm, self.options.fwhm, flo, fhi);
        (u * self.nominal.s, fwhm, excess)
    }

    /// Relative squared residual with the amplitude profiled out, and that amplitude.
    fn evaluate(&self, s: T, fwhm: T) -> Result<(T, T)> {
        let pump = PumpConfig { s, ..*self.nominal };
        let m = model_spectrum(self.measured, &pump, self.params, self.options.model, fwhm, T::one())?;
        let y = &self.measured.values;
        let (mm, my) = m
            .values
            .iter()
            .zip(y)
            .fold((T::zero(), T::zero()), |(a, b), (&mv, &yv)| (a + mv * mv, b + mv * yv));
        let scale = if !self.free.amplitude_scale {
            T::one()
        } else if mm > T::zero() {
            my / mm
        } else {
            T::zero()
        };
        let r2 = m.values.iter().zip(y).fold(T::zero(), |a, (&mv, &yv)| {
            let r = yv - scale * mv;
            a + r * r
        });
        Ok((r2 / self.y_norm2, scale))
    }

    fn cost(&self, x: &[T]) -> T {
        let (s, fwhm, excess) = self.unpack(x);
        match self.evaluate(s, fwhm) {
            Ok((c, _)) => c * (T::one() + T::lit(1e3) * excess) + excess,
            Err(_) => T::infinity(),
        }
    }
}

/// Least-squares fit of the convolved model to `measured` over the free
/// parameters.
///
/// `s` is searched relative to `pump_nominal.s` and clamped to
/// `options.s_bounds`, the width to `options.fwhm_bounds`; the amplitude is
/// solved in closed form at every step. The simplex search is deterministic
/// and invariant to rescaling the data.
pub fn fit_spectrum<T: Real>(
    measured: &Spectrum<T>,
    pump_nominal: &PumpConfig<T>,
    params: &AtomParams<T>,
    free: FreeParams,
    options: &FitOptions<T>,
) -> Result<FitResult<T>> {
    measured.validate()?;
    pump_nominal.validate()?;
    params.validate()?;
    if !(pump_nominal.s > T::zero()) {
        return Err(Error::input("fit needs a positive nominal intensity"));
    }
    let (flo, fhi) = options.fwhm_bounds;
    if !(flo <= options.fwhm && options.fwhm <= fhi) {
        return Err(Error::input(format!(
            "starting FWHM {} MHz lies outside [{flo}, {fhi}] MHz",
            options.fwhm
        )));
    }
    let y_norm2 = measured.values.iter().fold(T::zero(), |a, &v| a + v * v);
    if !(y_norm2 > T::zero()) {
        return Err(Error::input("measured spectrum is identically zero"));
    }
    let objective = Objective { measured, nominal: pump_nominal, params, free, options, y_norm2 };

    let mut x0 = Vec::new();
    let mut steps = Vec::new();
    if free.s {
        x0.push(T::one());
        steps.push(T::lit(0.05));
    }
    if free.fwhm {
        x0.push(options.fwhm);
        steps.push(T::lit(0.5));
    }

    let (x, iterations) = if x0.is_empty() {
        (x0, 0)
    } else {
        // The cost is flat to rounding within ~√ε of the optimum; stop once
        // the values tie to a few ulps or the vertices to 1e-9.
        let (ftol, xtol) = (T::epsilon() * T::lit(4.0), T::lit(1e-9));
        let out = nelder_mead(&x0, &steps, ftol, xtol, options.max_iter, |x| objective.cost(x))
            .map_err(|e| match e {
                Error::Numerical { message, best, residual } => {
                    let (s, fwhm, _) = objective.unpack(&best.iter().map(|&v| T::lit(v)).collect::<Vec<_>>());
                    Error::Numerical {
                        message,
                        best: vec![s.to_f64_lossy(), fwhm.to_f64_lossy()],
                        residual: residual.sqrt(),
                    }
                }
                other => other,
            })?;
        (out.point, out.iterations)
    };
    let (s, fwhm, _) = objective.unpack(&x);
    let (rel2, scale) = objective.evaluate(s, fwhm)?;
    Ok(FitResult {
        fitted_s: s,
        fitted_fwhm: fwhm,
        amplitude_scale: scale,
        residual_norm: rel2.sqrt(),
        s_adjustment_fraction: (s - pump_nominal.s).abs() / pump_nominal.s,
        iterations,
    })
}
