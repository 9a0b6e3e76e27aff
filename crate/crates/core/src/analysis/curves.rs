//! Predicted splittings and model-generated observable curves.

use crate::angular::HalfInt;
use crate::error::{Error, Result};
use crate::lineshape::{convolve_gaussian, lineshape, Components, Grid, LineModel, Spectrum};
use crate::pumping::{pi_coupling_strength, rabi_from_intensity, AtomParams, Polarization, PumpConfig};
use crate::scalar::{angular_to_mhz, Real};

use super::doublet::{extract_doublet, PeakReport};

/// Rabi frequency (rad/s) that sets the doublet splitting at zero detuning:
/// `Ω₀` for σ⁺ and `Ω_e = ½[Ω_ℓ(0) + Ω_ℓ(1)]` for π pumping.
pub fn effective_rabi<T: Real>(pump: &PumpConfig<T>, params: &AtomParams<T>) -> Result<T> {
    let omega0 = rabi_from_intensity(pump.s, params)?;
    Ok(match pump.polarization {
        Polarization::CircularPlus => omega0,
        Polarization::Linear => {
            let c0 = pi_coupling_strength::<T>(HalfInt::int(0))?;
            let c1 = pi_coupling_strength::<T>(HalfInt::int(1))?;
            (c0.sqrt() + c1.sqrt()) / T::lit(2.0) * omega0
        }
    })
}

/// Generalized Rabi frequency `√(Ω² + δ²)` in MHz, with `Ω` from [`effective_rabi`].
pub fn predict_splitting<T: Real>(pump: &PumpConfig<T>, params: &AtomParams<T>) -> Result<T> {
    pump.validate()?;
    let omega = effective_rabi(pump, params)?;
    Ok(angular_to_mhz((omega * omega + pump.delta * pump.delta).sqrt()))
}

/// How curve points are synthesized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveOptions<T = f64> {
    pub grid: Grid<T>,
    /// Instrument FWHM applied to each model spectrum, MHz.
    pub fwhm: T,
    pub model: LineModel,
}

/// Dressed-state spectra on the default probe grid with a 4.5 MHz
/// instrument width. The dressed components are the Lorentzians whose
/// separation and areas the predictions refer to; bare-basis spectra carry
/// dispersive admixtures that shift fitted centers at small `Ω/γ`.
impl<T: Real> Default for CurveOptions<T> {
    fn default() -> Self {
        CurveOptions { grid: Grid::default_probe(), fwhm: T::lit(4.5), model: LineModel::Dressed }
    }
}

impl<T: Real> CurveOptions<T> {
    /// Convolved model spectrum for `pump`.
    pub fn synthesize(&self, pump: &PumpConfig<T>, params: &AtomParams<T>) -> Result<Spectrum<T>> {
        let raw = lineshape(&self.grid, pump, params, None, self.model, Components::All)?;
        convolve_gaussian(&raw, self.fwhm)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingPoint<T = f64> {
    pub s: T,
    pub sqrt_s: T,
    /// [`predict_splitting`], MHz.
    pub predicted: T,
    pub report: PeakReport<T>,
}

impl<T: Real> SplittingPoint<T> {
    /// Extracted splitting, `None` for a merged doublet.
    pub fn extracted(&self) -> Option<T> {
        self.report.splitting()
    }
}

/// Predicted and extracted `D₅/₂` splittings for each intensity in `s_values`,
/// other settings taken from `template`.
pub fn splitting_curve<T: Real>(
    s_values: &[T],
    template: &PumpConfig<T>,
    params: &AtomParams<T>,
    options: &CurveOptions<T>,
) -> Result<Vec<SplittingPoint<T>>> {
    s_values
        .iter()
        .map(|&s| {
            let pump = PumpConfig { s, ..*template };
            let spec = options.synthesize(&pump, params)?;
            Ok(SplittingPoint {
                s,
                sqrt_s: s.sqrt(),
                predicted: predict_splitting(&pump, params)?,
                report: extract_doublet(&spec, HalfInt::half(5), params)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AreaRatioPoint<T = f64> {
    pub pump: PumpConfig<T>,
    /// `tan²θ = (Ω − δ)/(Ω + δ)`.
    pub tan2: T,
    pub report: PeakReport<T>,
}

impl<T: Real> AreaRatioPoint<T> {
    /// Weak-over-strong ratio the area law predicts: `tan²θ`, or its
    /// reciprocal for a negative detuning.
    pub fn expected(&self) -> T {
        self.tan2.min(self.tan2.recip())
    }

    pub fn extracted(&self) -> Option<T> {
        self.report.doublet().map(|d| d.area_ratio)
    }
}

/// `tan²θ` of the σ⁺-driven stretched pair.
pub fn mixing_tan2<T: Real>(pump: &PumpConfig<T>, params: &AtomParams<T>) -> Result<T> {
    let omega0 = rabi_from_intensity(pump.s, params)?;
    let omega = (omega0 * omega0 + pump.delta * pump.delta).sqrt();
    if !(omega > T::zero()) {
        return Err(Error::input("mixing angle undefined without drive or detuning"));
    }
    Ok((omega - pump.delta) / (omega + pump.delta))
}

/// Extracted `D₅/₂` area ratio against `tan²θ` for each σ⁺ configuration.
pub fn area_ratio_curve<T: Real>(
    configs: &[PumpConfig<T>],
    params: &AtomParams<T>,
    options: &CurveOptions<T>,
) -> Result<Vec<AreaRatioPoint<T>>> {
    configs
        .iter()
        .map(|pump| {
            if pump.polarization != Polarization::CircularPlus {
                return Err(Error::input("area-ratio curve requires σ⁺ pumping"));
            }
            let tan2 = mixing_tan2(pump, params)?;
            let spec = options.synthesize(pump, params)?;
            Ok(AreaRatioPoint { pump: *pump, tan2, report: extract_doublet(&spec, HalfInt::half(5), params)? })
        })
        .collect()
}
