//! Run configuration: TOML with `atom`, `pump`, `grid` and `output` sections.
//! Every key is optional and defaults to the experimental values.

use std::path::{Path, PathBuf};

use autler_townes::scalar::mhz_to_angular;
use autler_townes::{AtomParams, FineStructureOrder, Grid, LineModel, Polarization, PumpConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PolarizationArg {
    Circular,
    Linear,
}

impl PolarizationArg {
    pub fn as_str(self) -> &'static str {
        match self {
            PolarizationArg::Circular => "circular",
            PolarizationArg::Linear => "linear",
        }
    }
}

impl From<PolarizationArg> for Polarization {
    fn from(p: PolarizationArg) -> Self {
        match p {
            PolarizationArg::Circular => Polarization::CircularPlus,
            PolarizationArg::Linear => Polarization::Linear,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Exact,
    Dressed,
}

impl ModelArg {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelArg::Exact => "exact",
            ModelArg::Dressed => "dressed",
        }
    }
}

impl From<ModelArg> for LineModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Exact => LineModel::Exact,
            ModelArg::Dressed => LineModel::Dressed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomSection {
    /// Intermediate-state decay rate γ₂/2π, MHz.
    pub gamma2_mhz: f64,
    /// Rydberg-state decay rate γ₃, s⁻¹.
    pub gamma3_per_s: f64,
    /// Saturation intensity, mW/cm².
    pub i_sat_mw_cm2: f64,
    pub fs_separation_mhz: f64,
    /// +1 when J = 3/2 lies above J = 5/2, −1 when below.
    pub fs_sign: i32,
}

impl Default for AtomSection {
    fn default() -> Self {
        AtomSection {
            gamma2_mhz: 5.98,
            gamma3_per_s: 16e3,
            i_sat_mw_cm2: 1.64,
            fs_separation_mhz: 140.0,
            fs_sign: -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpSection {
    pub polarization: PolarizationArg,
    /// Intensity in units of the saturation intensity.
    pub s: f64,
    /// Pump detuning δ/2π, MHz.
    pub delta_mhz: f64,
}

impl Default for PumpSection {
    fn default() -> Self {
        PumpSection { polarization: PolarizationArg::Circular, s: 260.0, delta_mhz: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub min_mhz: f64,
    pub max_mhz: f64,
    pub step_mhz: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { min_mhz: -250.0, max_mhz: 250.0, step_mhz: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Gaussian instrument width applied to simulated spectra, MHz.
    pub convolution_fwhm_mhz: f64,
    pub model: ModelArg,
    pub path: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { convolution_fwhm_mhz: 4.5, model: ModelArg::Exact, path: PathBuf::from("spectrum.dat") }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub atom: AtomSection,
    pub pump: PumpSection,
    pub grid: GridSection,
    pub output: OutputSection,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be a positive number, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let span = e.span().map(|s| s.start);
            let line = span.map_or(0, |at| text[..at].matches('\n').count() + 1);
            CliError::Parse { path: "config".into(), line, reason: e.message().to_string() }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Parse { line, reason, .. } => {
                CliError::Parse { path: path.display().to_string(), line, reason }
            }
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every field, naming the first invalid one.
    pub fn validate(&self) -> Result<()> {
        let a = &self.atom;
        positive("atom.gamma2_mhz", a.gamma2_mhz)?;
        positive("atom.gamma3_per_s", a.gamma3_per_s)?;
        positive("atom.i_sat_mw_cm2", a.i_sat_mw_cm2)?;
        positive("atom.fs_separation_mhz", a.fs_separation_mhz)?;
        if FineStructureOrder::from_sign(a.fs_sign).is_none() {
            return Err(CliError::config("atom.fs_sign", format!("must be +1 or -1, got {}", a.fs_sign)));
        }
        if !(self.pump.s >= 0.0 && self.pump.s.is_finite()) {
            return Err(CliError::config("pump.s", format!("must be finite and >= 0, got {}", self.pump.s)));
        }
        finite("pump.delta_mhz", self.pump.delta_mhz)?;
        let g = &self.grid;
        finite("grid.min_mhz", g.min_mhz)?;
        finite("grid.max_mhz", g.max_mhz)?;
        positive("grid.step_mhz", g.step_mhz)?;
        if g.min_mhz >= g.max_mhz {
            return Err(CliError::config(
                "grid.min_mhz",
                format!("must be below grid.max_mhz ({} >= {})", g.min_mhz, g.max_mhz),
            ));
        }
        let fwhm = self.output.convolution_fwhm_mhz;
        if !(fwhm >= 0.0 && fwhm.is_finite()) {
            return Err(CliError::config("output.convolution_fwhm_mhz", format!("must be >= 0, got {fwhm}")));
        }
        self.params().validate().map_err(|e| CliError::config("atom", e.to_string()))?;
        Ok(())
    }

    pub fn params(&self) -> AtomParams {
        let a = &self.atom;
        AtomParams {
            gamma2: mhz_to_angular(a.gamma2_mhz),
            gamma3: a.gamma3_per_s,
            i_sat: a.i_sat_mw_cm2,
            fs_separation: a.fs_separation_mhz,
            fs_order: FineStructureOrder::from_sign(a.fs_sign).unwrap_or(FineStructureOrder::J32Below),
            ..AtomParams::default()
        }
    }

    pub fn pump(&self) -> PumpConfig {
        PumpConfig { polarization: self.pump.polarization.into(), s: self.pump.s, delta: 0.0 }
            .with_delta_mhz(self.pump.delta_mhz)
    }

    pub fn grid(&self) -> Result<Grid> {
        let g = &self.grid;
        Grid::from_range(g.min_mhz, g.max_mhz, g.step_mhz).map_err(|e| CliError::config("grid", e.to_string()))
    }

    pub fn model(&self) -> LineModel {
        self.output.model.into()
    }

    /// `section.key: value` pairs echoed into output headers.
    pub fn header(&self) -> Vec<(String, String)> {
        let a = &self.atom;
        let p = &self.pump;
        let g = &self.grid;
        let o = &self.output;
        vec![
            ("atom.gamma2_mhz".into(), a.gamma2_mhz.to_string()),
            ("atom.gamma3_per_s".into(), a.gamma3_per_s.to_string()),
            ("atom.i_sat_mw_cm2".into(), a.i_sat_mw_cm2.to_string()),
            ("atom.fs_separation_mhz".into(), a.fs_separation_mhz.to_string()),
            ("atom.fs_sign".into(), a.fs_sign.to_string()),
            ("pump.polarization".into(), p.polarization.as_str().into()),
            ("pump.s".into(), p.s.to_string()),
            ("pump.delta_mhz".into(), p.delta_mhz.to_string()),
            ("grid.min_mhz".into(), g.min_mhz.to_string()),
            ("grid.max_mhz".into(), g.max_mhz.to_string()),
            ("grid.step_mhz".into(), g.step_mhz.to_string()),
            ("output.convolution_fwhm_mhz".into(), o.convolution_fwhm_mhz.to_string()),
            ("output.model".into(), o.model.as_str().into()),
        ]
    }
}
