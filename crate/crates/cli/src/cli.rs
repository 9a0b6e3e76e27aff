//! Argument parsing and dispatch for the `autler-townes` binary.

use std::io::Write;
use std::path::PathBuf;

use autler_townes::analysis::FreeParams;
use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_figures, cmd_fit, cmd_populations, cmd_simulate, Figure};
use crate::config::{ModelArg, PolarizationArg, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "autler-townes", version, about = "Simulate and fit Autler-Townes probe spectra")]
pub struct Cli {
    /// TOML configuration file; flags given on the command line override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

/// Per-field overrides of the configuration (frequencies in MHz).
#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long, global = true, value_enum)]
    pub polarization: Option<PolarizationArg>,
    /// Pump intensity in units of the saturation intensity.
    #[arg(long, global = true)]
    pub s: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta_mhz: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid_max: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid_step: Option<f64>,
    /// Gaussian instrument FWHM.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub fwhm: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelArg>,
    #[arg(long, global = true)]
    pub gamma2_mhz: Option<f64>,
    /// Rydberg decay rate, s⁻¹.
    #[arg(long, global = true)]
    pub gamma3: Option<f64>,
    /// Saturation intensity, mW/cm².
    #[arg(long, global = true)]
    pub i_sat: Option<f64>,
    #[arg(long, global = true)]
    pub fs_separation: Option<f64>,
    /// +1 puts J = 3/2 above J = 5/2, -1 below.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub fs_sign: Option<i32>,
    /// Output spectrum path.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        fn set<T: Clone>(slot: &mut T, v: &Option<T>) {
            if let Some(v) = v {
                *slot = v.clone();
            }
        }
        set(&mut cfg.pump.polarization, &self.polarization);
        set(&mut cfg.pump.s, &self.s);
        set(&mut cfg.pump.delta_mhz, &self.delta_mhz);
        set(&mut cfg.grid.min_mhz, &self.grid_min);
        set(&mut cfg.grid.max_mhz, &self.grid_max);
        set(&mut cfg.grid.step_mhz, &self.grid_step);
        set(&mut cfg.output.convolution_fwhm_mhz, &self.fwhm);
        set(&mut cfg.output.model, &self.model);
        set(&mut cfg.output.path, &self.output);
        set(&mut cfg.atom.gamma2_mhz, &self.gamma2_mhz);
        set(&mut cfg.atom.gamma3_per_s, &self.gamma3);
        set(&mut cfg.atom.i_sat_mw_cm2, &self.i_sat);
        set(&mut cfg.atom.fs_separation_mhz, &self.fs_separation);
        set(&mut cfg.atom.fs_sign, &self.fs_sign);
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a convolved model spectrum.
    Simulate,
    /// Fit the model to a measured spectrum file.
    Fit {
        measured: PathBuf,
        /// Keep the intensity at its nominal value.
        #[arg(long)]
        fix_s: bool,
        /// Keep the instrument width at its configured value.
        #[arg(long)]
        fix_fwhm: bool,
        /// Keep the amplitude scale at one.
        #[arg(long)]
        fix_scale: bool,
    },
    /// Write the data behind a figure (curves use dressed-state spectra).
    Figures {
        #[arg(value_enum)]
        which: Figure,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print steady-state sublevel populations.
    Populations,
}

impl Cli {
    pub fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        self.overrides.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs one invocation, writing normal output to `out` and warnings to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = cli.run_config()?;
    let io = |e: std::io::Error| CliError::io("<stdout>", e);
    match &cli.command {
        Command::Simulate => {
            let path = cmd_simulate(&cfg)?;
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
        }
        Command::Fit { measured, fix_s, fix_fwhm, fix_scale } => {
            let free = FreeParams { s: !fix_s, fwhm: !fix_fwhm, amplitude_scale: !fix_scale };
            let report = cmd_fit(measured, &cfg, free)?;
            write!(out, "{}", report.render()).map_err(io)?;
            if let Some(w) = report.warning() {
                writeln!(err, "{w}").map_err(io)?;
            }
        }
        Command::Figures { which, out_dir } => {
            for path in cmd_figures(*which, &cfg, out_dir)? {
                writeln!(out, "wrote {}", path.display()).map_err(io)?;
            }
        }
        Command::Populations => write!(out, "{}", cmd_populations(&cfg)?).map_err(io)?,
    }
    Ok(())
}

/// Parses `args`, mapping usage errors to [`CliError::Usage`]. Help and
/// version requests are returned as `Ok(Err(text))`.
pub fn parse<I, T>(args: I) -> Result<std::result::Result<Cli, String>>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    match Cli::try_parse_from(args) {
        Ok(cli) => Ok(Ok(cli)),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => Ok(Err(e.to_string())),
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            Err(CliError::Usage(first.trim_start_matches("error: ").to_string()))
        }
    }
}
