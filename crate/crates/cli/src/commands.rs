//! Subcommand implementations. Each returns its output instead of printing,
//! so the binary only handles dispatch and error reporting.

use std::path::{Path, PathBuf};

use autler_townes::analysis::{
    area_ratio_curve, fit_spectrum, model_spectrum, splitting_curve, CurveOptions, FitOptions, FitResult, FreeParams,
};
use autler_townes::lineshape::{
    convolve_gaussian, lineshape_circular, lineshape_circular_dressed, lineshape_linear, lineshape_linear_dressed,
};
use autler_townes::pumping::{circular_steady_state, steady_state_populations};
use autler_townes::{LineModel, Polarization, PumpConfig, Spectrum};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::spectrum_file::{format_value, read_spectrum, save_spectrum};

/// Largest intensity adjustment a fit may make before a warning is issued.
pub const S_ADJUSTMENT_BOUND: f64 = 0.10;

/// Convolved model spectrum for `cfg`.
pub fn simulate(cfg: &RunConfig) -> Result<Spectrum> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let pump = cfg.pump();
    let params = cfg.params();
    let raw = match (pump.polarization, cfg.model()) {
        (Polarization::CircularPlus, LineModel::Exact) => lineshape_circular(&grid, &pump, &params)?,
        (Polarization::CircularPlus, LineModel::Dressed) => lineshape_circular_dressed(&grid, &pump, &params)?,
        (Polarization::Linear, model) => {
            let pops = steady_state_populations(&pump, &params)?;
            match model {
                LineModel::Exact => lineshape_linear(&grid, &pump, &params, &pops)?,
                LineModel::Dressed => lineshape_linear_dressed(&grid, &pump, &params, &pops)?,
            }
        }
    };
    Ok(convolve_gaussian(&raw, cfg.output.convolution_fwhm_mhz)?)
}

/// Simulates and writes the spectrum to `cfg.output.path`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<PathBuf> {
    let spec = simulate(cfg)?;
    let mut header = cfg.header();
    header.push(("meta.degenerate".into(), spec.meta.degenerate.to_string()));
    save_spectrum(&cfg.output.path, &spec, &header)?;
    Ok(cfg.output.path.clone())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub result: FitResult,
    pub nominal_s: f64,
    /// Where the fitted model spectrum was written.
    pub model_path: PathBuf,
}

impl FitReport {
    pub fn exceeds_bound(&self) -> bool {
        self.result.s_adjustment_fraction > S_ADJUSTMENT_BOUND
    }

    pub fn warning(&self) -> Option<String> {
        self.exceeds_bound().then(|| {
            format!(
                "warning: intensity adjusted by {:.1}% from the nominal s = {} (bound {:.0}%)",
                100.0 * self.result.s_adjustment_fraction,
                self.nominal_s,
                100.0 * S_ADJUSTMENT_BOUND
            )
        })
    }

    pub fn render(&self) -> String {
        let r = &self.result;
        format!(
            "fitted_s: {}\nfitted_fwhm_mhz: {}\namplitude_scale: {}\nresidual_norm: {}\n\
             s_adjustment_fraction: {}\niterations: {}\nmodel_file: {}\n",
            format_value(r.fitted_s),
            format_value(r.fitted_fwhm),
            format_value(r.amplitude_scale),
            format_value(r.residual_norm),
            format_value(r.s_adjustment_fraction),
            r.iterations,
            self.model_path.display()
        )
    }
}

/// `<dir>/<stem>.fit.dat` next to the measured file.
pub fn fit_output_path(measured: &Path) -> PathBuf {
    let stem = measured.file_stem().map_or_else(|| "spectrum".into(), |s| s.to_string_lossy().into_owned());
    measured.with_file_name(format!("{stem}.fit.dat"))
}

/// Fits the configured model to the spectrum in `measured`, with the
/// configuration's intensity as the nominal value and its instrument width
/// as the starting width. Writes the fitted model next to the input.
pub fn cmd_fit(measured: &Path, cfg: &RunConfig, free: FreeParams) -> Result<FitReport> {
    cfg.validate()?;
    let file = read_spectrum(measured)?;
    let params = cfg.params();
    let nominal = cfg.pump();
    if !(nominal.s > 0.0) {
        return Err(CliError::config("pump.s", "fit needs a positive nominal intensity"));
    }
    let options = FitOptions { model: cfg.model(), fwhm: cfg.output.convolution_fwhm_mhz, ..FitOptions::default() };
    let (lo, hi) = options.fwhm_bounds;
    if !(lo..=hi).contains(&options.fwhm) {
        return Err(CliError::config(
            "output.convolution_fwhm_mhz",
            format!("starting width for a fit must lie in [{lo}, {hi}] MHz, got {}", options.fwhm),
        ));
    }
    let result = fit_spectrum(&file.spectrum, &nominal, &params, free, &options)?;
    let fitted_pump = PumpConfig { s: result.fitted_s, ..nominal };
    let model = model_spectrum(
        &file.spectrum,
        &fitted_pump,
        &params,
        options.model,
        result.fitted_fwhm,
        result.amplitude_scale,
    )?;
    let mut header = cfg.header();
    header.push(("fit.source".into(), measured.display().to_string()));
    header.push(("fit.s".into(), result.fitted_s.to_string()));
    header.push(("fit.fwhm_mhz".into(), result.fitted_fwhm.to_string()));
    header.push(("fit.amplitude_scale".into(), result.amplitude_scale.to_string()));
    header.push(("fit.residual_norm".into(), result.residual_norm.to_string()));
    let model_path = fit_output_path(measured);
    save_spectrum(&model_path, &model, &header)?;
    Ok(FitReport { result, nominal_s: nominal.s, model_path })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// Splitting against √s at zero pump detuning.
    Fig3,
    /// Area ratio of the two D5/2 components against tan²θ.
    Fig5,
    /// Splitting against √s at 30 MHz pump detuning.
    Fig6,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        }
    }
}

/// Intensities sampled by the splitting figures; zero first.
pub const FIGURE_S: [f64; 14] = [0.0, 0.4, 1.0, 2.0, 4.4, 10.0, 20.0, 36.0, 60.0, 110.0, 160.0, 210.0, 260.0, 290.0];
/// Pump detunings (MHz) and intensities of the area-ratio figure.
pub const AREA_DELTAS: [f64; 3] = [10.0, 20.0, 30.0];
pub const AREA_S: [f64; 4] = [4.5, 36.0, 110.0, 290.0];

/// One plot-ready table: `x`, theory and extracted columns.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub file_name: String,
    pub comments: Vec<(String, String)>,
    pub columns: [&'static str; 3],
    /// Extracted values are NaN where the doublet is unresolved.
    pub rows: Vec<[f64; 3]>,
}

impl FigureTable {
    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        for (k, v) in self.comments.iter().chain(cfg.header().iter()) {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&format!("# columns: {}\n", self.columns.join(" ")));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

fn curve_options(cfg: &RunConfig) -> Result<CurveOptions> {
    Ok(CurveOptions { grid: cfg.grid()?, fwhm: cfg.output.convolution_fwhm_mhz, model: LineModel::Dressed })
}

fn splitting_tables(which: Figure, delta_mhz: f64, cfg: &RunConfig) -> Result<Vec<FigureTable>> {
    let params = cfg.params();
    let options = curve_options(cfg)?;
    [Polarization::CircularPlus, Polarization::Linear]
        .into_iter()
        .map(|polarization| {
            let template = PumpConfig { polarization, s: 0.0, delta: 0.0 }.with_delta_mhz(delta_mhz);
            let curve = splitting_curve(&FIGURE_S, &template, &params, &options)?;
            let label = match polarization {
                Polarization::CircularPlus => "circular",
                Polarization::Linear => "linear",
            };
            Ok(FigureTable {
                file_name: format!("{}_{label}.dat", which.name()),
                comments: vec![
                    ("figure".into(), which.name().into()),
                    ("curve.polarization".into(), label.into()),
                    ("curve.delta_mhz".into(), delta_mhz.to_string()),
                    ("curve.model".into(), "dressed".into()),
                ],
                columns: ["sqrt_s", "theory_mhz", "extracted_mhz"],
                rows: curve
                    .iter()
                    .map(|pt| [pt.sqrt_s, pt.predicted, pt.extracted().unwrap_or(f64::NAN)])
                    .collect(),
            })
        })
        .collect()
}

fn area_table(cfg: &RunConfig) -> Result<Vec<FigureTable>> {
    let params = cfg.params();
    let configs: Vec<PumpConfig> = AREA_DELTAS
        .iter()
        .flat_map(|&d| AREA_S.map(|s| PumpConfig::circular(s, 0.0).with_delta_mhz(d)))
        .collect();
    let curve = area_ratio_curve(&configs, &params, &curve_options(cfg)?)?;
    let mut rows: Vec<[f64; 3]> =
        curve.iter().map(|pt| [pt.tan2, pt.tan2, pt.extracted().unwrap_or(f64::NAN)]).collect();
    rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
    Ok(vec![FigureTable {
        file_name: "fig5.dat".into(),
        comments: vec![
            ("figure".into(), "fig5".into()),
            ("curve.polarization".into(), "circular".into()),
            ("curve.model".into(), "dressed".into()),
        ],
        columns: ["tan2_theta", "theory", "extracted"],
        rows,
    }])
}

/// Data behind one figure. Curves are synthesized from dressed-state spectra
/// with the configured atom, grid and instrument width.
pub fn figure_tables(which: Figure, cfg: &RunConfig) -> Result<Vec<FigureTable>> {
    cfg.validate()?;
    match which {
        Figure::Fig3 => splitting_tables(which, 0.0, cfg),
        Figure::Fig6 => splitting_tables(which, 30.0, cfg),
        Figure::Fig5 => area_table(cfg),
    }
}

/// Writes the tables of `which` into `out_dir`.
pub fn cmd_figures(which: Figure, cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let tables = figure_tables(which, cfg)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    tables
        .iter()
        .map(|t| {
            let path = out_dir.join(&t.file_name);
            std::fs::write(&path, t.render(cfg)).map_err(|e| CliError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

/// Sublevel population table. For σ⁺ pumping the stretched-state result is
/// shown with a note.
pub fn cmd_populations(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let pump = cfg.pump();
    let params = cfg.params();
    let mut out = String::new();
    let pops = match pump.polarization {
        Polarization::Linear => steady_state_populations(&pump, &params)?,
        Polarization::CircularPlus => {
            out.push_str("# note: circular pumping; showing the stretched m = 3 <-> m' = 4 steady state\n");
            circular_steady_state(&pump, &params)?
        }
    };
    out.push_str(&format!(
        "# polarization: {}\n# s: {}\n# delta_mhz: {}\n# columns: m ground excited\n",
        cfg.pump.polarization.as_str(),
        cfg.pump.s,
        cfg.pump.delta_mhz
    ));
    for m in -4i32..=4 {
        let ground = if m.abs() <= 3 { pops.ground(m) } else { 0.0 };
        out.push_str(&format!("{m} {} {}\n", format_value(ground), format_value(pops.excited(m))));
    }
    out.push_str(&format!("# sum_ground: {}\n", format_value(pops.ground_total())));
    out.push_str(&format!("# sum_excited: {}\n", format_value(pops.excited_total())));
    out.push_str(&format!("# sum: {}\n", format_value(pops.total())));
    Ok(out)
}
