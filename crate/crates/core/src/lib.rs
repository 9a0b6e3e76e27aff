//! Autler-Townes spectra of a cold-atom ladder system with Zeeman structure:
//! exact angular-momentum weights, optical pumping, probe lineshapes, and the
//! extraction and fitting of doublet observables.
//!
//! The modules are generic over the scalar type; the aliases below fix it to `f64`.

pub mod analysis;
pub mod angular;
pub mod error;
pub mod lineshape;
pub mod pumping;
pub mod scalar;

pub use error::{Error, Result};

/// `f64` instantiations of the generic types.
pub type AtomParams = pumping::AtomParams<f64>;
pub type PumpConfig = pumping::PumpConfig<f64>;
pub type SublevelPopulations = pumping::SublevelPopulations<f64>;
pub type Grid = lineshape::Grid<f64>;
pub type Spectrum = lineshape::Spectrum<f64>;
pub type SpectrumMeta = lineshape::SpectrumMeta<f64>;
pub type DressedParams = lineshape::DressedParams<f64>;
pub type DoubletReport = analysis::DoubletReport<f64>;
pub type PeakReport = analysis::PeakReport<f64>;
pub type FitResult = analysis::FitResult<f64>;
pub type FitOptions = analysis::FitOptions<f64>;
pub type CurveOptions = analysis::CurveOptions<f64>;

pub use angular::HalfInt;
pub use lineshape::{Components, LineModel};
pub use pumping::{FineStructureOrder, Polarization};
