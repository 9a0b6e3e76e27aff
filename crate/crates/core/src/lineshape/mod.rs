//! Autler-Townes probe spectra.
//!
//! A spectrum is a weighted sum of *terms*, one per Rydberg component `J`
//! and (for π pumping) per ground sublevel `|m|`. Each term is a driven pair
//! with its own Rabi frequency whose response is evaluated either in the bare
//! basis ([`LineModel::Exact`]) or as two dressed-state Lorentzians
//! ([`LineModel::Dressed`]). Term amplitudes are normalized so that the
//! σ⁺-pumped `D₅/₂` component integrates to one over the probe detuning in MHz.
//!
//! User-facing detunings are MHz; everything inside the terms is rad/s.

mod convolve;
mod kernel;
mod spectrum;

pub use convolve::{convolve_gaussian, gaussian_sigma, GaussianKernel, SegmentConvolver};
pub use kernel::{bare_response, ComplexDenominators, DressedParams};
pub use spectrum::{Grid, LineModel, Spectrum, SpectrumMeta};

use crate::angular::{weight_circular, weight_linear, HalfInt, RYDBERG_J};
use crate::error::{Error, Result};
use crate::pumping::{
    pi_coupling_strength, rabi_from_intensity, steady_state_populations, AtomParams, Polarization,
    PumpConfig, SublevelPopulations,
};
use crate::scalar::{mhz_to_angular, Real};

/// Coarsest probe-grid spacing accepted, MHz.
pub const MAX_GRID_STEP_MHZ: f64 = 0.2;

/// Which Rydberg fine-structure components to include.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Components {
    All,
    Only(HalfInt),
}

impl Components {
    pub fn includes(self, j: HalfInt) -> bool {
        match self {
            Components::All => true,
            Components::Only(k) => k == j,
        }
    }
}

/// Line-center offset of component `J` on the probe axis, MHz.
pub fn line_offset_mhz<T: Real>(j: HalfInt, params: &AtomParams<T>) -> T {
    if j == HalfInt::half(5) {
        T::zero()
    } else {
        T::lit(f64::from(params.fs_order.sign())) * params.fs_separation
    }
}

/// One driven pair contributing to the probe signal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term<T> {
    pub j: HalfInt,
    /// `|m|` of the π-pumped ground sublevel; `None` for σ⁺ pumping.
    pub m_abs: Option<u8>,
    /// Integrated area of this term in the per-MHz normalization.
    pub area: T,
    /// Rabi frequency driving the pair, rad/s.
    pub drive: T,
    offset_mhz: T,
    dressed: Option<DressedParams<T>>,
}

impl<T: Real> Term<T> {
    pub fn offset_mhz(&self) -> T {
        self.offset_mhz
    }

    pub fn dressed(&self) -> Option<&DressedParams<T>> {
        self.dressed.as_ref()
    }
}

/// Precomputed terms of a spectrum, evaluable at arbitrary probe detunings.
#[derive(Clone, Debug)]
pub struct Evaluator<T> {
    model: LineModel,
    delta: T,
    params: AtomParams<T>,
    terms: Vec<Term<T>>,
    degenerate: bool,
}

impl<T: Real> Evaluator<T> {
    /// Builds the terms for `pump`. For a linear pump the populations are
    /// computed when `pops` is `None`.
    pub fn new(
        pump: &PumpConfig<T>,
        params: &AtomParams<T>,
        pops: Option<&SublevelPopulations<T>>,
        model: LineModel,
    ) -> Result<Self> {
        pump.validate()?;
        params.validate()?;
        let omega0 = rabi_from_intensity(pump.s, params)?;
        let norm = weight_circular::<T>(HalfInt::half(5))?;
        let mut terms = Vec::new();

        match pump.polarization {
            Polarization::CircularPlus => {
                for j in RYDBERG_J {
                    let w = weight_circular::<T>(j)? / norm;
                    terms.push(Term {
                        j,
                        m_abs: None,
                        area: w,
                        drive: omega0,
                        offset_mhz: line_offset_mhz(j, params),
                        dressed: None,
                    });
                }
            }
            Polarization::Linear => {
                let owned;
                let pops = match pops {
                    Some(p) => p,
                    None => {
                        owned = steady_state_populations(pump, params)?;
                        &owned
                    }
                };
                // (γ²(1+s) + δ²)/(Ω₀²/4) · Ω_ℓ(m)² reduces to 4c_m(γ²(1+s) + δ²),
                // with c_m the squared π coupling; this keeps s = 0 finite.
                let g2 = params.gamma() * params.gamma();
                let d2 = pump.delta * pump.delta;
                let saturation = (g2 * (T::one() + pump.s) + d2)
                    / (g2 * (T::one() + pump.s / T::lit(2.0)) + d2);
                for j in RYDBERG_J {
                    for m in 0..=3i32 {
                        let hm = HalfInt::int(m);
                        let c = pi_coupling_strength::<T>(hm)?;
                        let pop = if m == 0 { pops.ground(0) } else { pops.ground(m) + pops.ground(-m) };
                        let w = weight_linear::<T>(j, hm)? / norm;
                        terms.push(Term {
                            j,
                            m_abs: Some(m as u8),
                            area: w * T::lit(4.0) * c * saturation * pop,
                            drive: c.sqrt() * omega0,
                            offset_mhz: line_offset_mhz(j, params),
                            dressed: None,
                        });
                    }
                }
            }
        }

        let mut degenerate = false;
        if model == LineModel::Dressed {
            for t in &mut terms {
                t.dressed = DressedParams::new(t.drive, pump.delta, params);
                degenerate |= t.dressed.is_none();
            }
        }
        Ok(Evaluator { model, delta: pump.delta, params: *params, terms, degenerate })
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    /// True when the dressed form was requested but at least one term has
    /// zero generalized Rabi frequency and fell back to the bare limit.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Signal density (per MHz) of one term at probe detuning `probe_mhz`.
    pub fn term_value(&self, term: &Term<T>, probe_mhz: T) -> T {
        let delta_prime = mhz_to_angular(probe_mhz - term.offset_mhz);
        let response = match (self.model, term.dressed) {
            (LineModel::Dressed, Some(d)) => d.response(delta_prime),
            _ => bare_response(delta_prime, self.delta, term.drive, &self.params),
        };
        // area/π per rad/s, times dω/dν to get a density per MHz.
        term.area * T::FRAC_1_PI() * response * mhz_to_angular(T::one())
    }

    /// Sum over the terms accepted by `filter`.
    pub fn value_filtered(&self, probe_mhz: T, filter: impl Fn(&Term<T>) -> bool) -> T {
        self.terms
            .iter()
            .filter(|t| filter(t))
            .fold(T::zero(), |acc, t| acc + self.term_value(t, probe_mhz))
    }

    pub fn value(&self, probe_mhz: T) -> T {
        self.value_filtered(probe_mhz, |_| true)
    }

    /// Analytic integral of the selected components.
    pub fn area(&self, components: Components) -> T {
        self.terms
            .iter()
            .filter(|t| components.includes(t.j))
            .fold(T::zero(), |acc, t| acc + t.area)
    }

    /// Samples the selected terms on `grid`.
    pub fn sample(
        &self,
        grid: &Grid<T>,
        pump: &PumpConfig<T>,
        filter: impl Fn(&Term<T>) -> bool,
    ) -> Spectrum<T> {
        let mut spec = Spectrum::from_fn(*grid, |x| self.value_filtered(x, &filter));
        spec.meta = SpectrumMeta {
            pump: Some(*pump),
            model: Some(self.model),
            convolution_fwhm: T::zero(),
            degenerate: self.degenerate,
        };
        spec
    }
}

fn check_grid<T: Real>(grid: &Grid<T>) -> Result<()> {
    if grid.step() > T::lit(MAX_GRID_STEP_MHZ) * (T::one() + T::lit(1e-9)) {
        return Err(Error::input(format!(
            "probe grid step {} MHz is coarser than {MAX_GRID_STEP_MHZ} MHz",
            grid.step()
        )));
    }
    Ok(())
}

fn require(pump: &PumpConfig<impl Real>, polarization: Polarization) -> Result<()> {
    if pump.polarization != polarization {
        return Err(Error::input(format!(
            "pump polarization {:?} where {:?} is required",
            pump.polarization, polarization
        )));
    }
    Ok(())
}

/// General entry point: any polarization, model and component selection.
pub fn lineshape<T: Real>(
    grid: &Grid<T>,
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
    pops: Option<&SublevelPopulations<T>>,
    model: LineModel,
    components: Components,
) -> Result<Spectrum<T>> {
    check_grid(grid)?;
    let eval = Evaluator::new(pump, params, pops, model)?;
    Ok(eval.sample(grid, pump, |t| components.includes(t.j)))
}

/// σ⁺-pump spectrum from the bare-basis expression.
pub fn lineshape_circular<T: Real>(
    grid: &Grid<T>,
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
) -> Result<Spectrum<T>> {
    require(pump, Polarization::CircularPlus)?;
    lineshape(grid, pump, params, None, LineModel::Exact, Components::All)
}

/// σ⁺-pump spectrum in the dressed-atom form. When Ω = 0 the bare limit is
/// used and `meta.degenerate` is set.
pub fn lineshape_circular_dressed<T: Real>(
    grid: &Grid<T>,
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
) -> Result<Spectrum<T>> {
    require(pump, Polarization::CircularPlus)?;
    lineshape(grid, pump, params, None, LineModel::Dressed, Components::All)
}

/// π-pump spectrum from the bare-basis expression with sublevel populations `pops`.
pub fn lineshape_linear<T: Real>(
    grid: &Grid<T>,
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
    pops: &SublevelPopulations<T>,
) -> Result<Spectrum<T>> {
    require(pump, Polarization::Linear)?;
    lineshape(grid, pump, params, Some(pops), LineModel::Exact, Components::All)
}

/// π-pump spectrum with per-sublevel dressed states built from `Ω_ℓ(m)`.
pub fn lineshape_linear_dressed<T: Real>(
    grid: &Grid<T>,
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
    pops: &SublevelPopulations<T>,
) -> Result<Spectrum<T>> {
    require(pump, Polarization::Linear)?;
    lineshape(grid, pump, params, Some(pops), LineModel::Dressed, Components::All)
}

/// The contribution of ground sublevels `±m_abs` to a π-pump spectrum.
pub fn lineshape_linear_sublevel<T: Real>(
    grid: &Grid<T>,
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
    pops: &SublevelPopulations<T>,
    model: LineModel,
    m_abs: u8,
) -> Result<Spectrum<T>> {
    require(pump, Polarization::Linear)?;
    check_grid(grid)?;
    if m_abs > 3 {
        return Err(Error::domain(format!("|m| must be at most 3, got {m_abs}")));
    }
    let eval = Evaluator::new(pump, params, Some(pops), model)?;
    Ok(eval.sample(grid, pump, |t| t.m_abs == Some(m_abs)))
}
