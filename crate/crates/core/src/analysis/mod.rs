//! Observables extracted from spectra: doublet splittings and component
//! areas, their predicted values, and model fits to measured traces.

mod curves;
mod doublet;
mod fit;
pub mod minimize;

pub use curves::{
    area_ratio_curve, effective_rabi, mixing_tan2, predict_splitting, splitting_curve, AreaRatioPoint,
    CurveOptions, SplittingPoint,
};
pub use doublet::{component_window, extract_doublet, DoubletReport, Lorentzian, PeakReport, TwoLorentzian, MERGE_FACTOR};
pub use fit::{fit_spectrum, model_spectrum, FitOptions, FitResult, FreeParams};
