//! Plain-text spectrum files: `# key: value` header lines followed by two
//! whitespace-separated columns, probe detuning (MHz) and signal.

use std::path::Path;

use autler_townes::{Grid, Spectrum};

use crate::error::{CliError, Result};

pub const FORMAT_TAG: &str = "autler-townes spectrum";
/// Significant digits written for every float in the body.
pub const SIGNIFICANT_DIGITS: usize = 12;

const START_KEY: &str = "grid.start";
const STEP_KEY: &str = "grid.step";
const LEN_KEY: &str = "grid.len";
const FWHM_KEY: &str = "meta.convolution_fwhm_mhz";

/// Scientific notation with [`SIGNIFICANT_DIGITS`] digits; `-0` prints as `0`.
pub fn format_value(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
}

/// A parsed spectrum file.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumFile {
    /// Header pairs in file order, including the grid keys.
    pub header: Vec<(String, String)>,
    pub spectrum: Spectrum,
}

impl SpectrumFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Serializes `spec` with `header` echoed above the data. The exact grid is
/// recorded in the header so that reading restores it bit for bit.
pub fn write_spectrum(spec: &Spectrum, header: &[(String, String)]) -> String {
    let mut out = format!("# {FORMAT_TAG}\n");
    for (k, v) in header {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str(&format!("# {START_KEY}: {}\n", spec.grid.start()));
    out.push_str(&format!("# {STEP_KEY}: {}\n", spec.grid.step()));
    out.push_str(&format!("# {LEN_KEY}: {}\n", spec.grid.len()));
    out.push_str(&format!("# {FWHM_KEY}: {}\n", spec.meta.convolution_fwhm));
    out.push_str("# columns: probe_detuning_mhz signal\n");
    for (x, y) in spec.points() {
        out.push_str(&format_value(x));
        out.push(' ');
        out.push_str(&format_value(y));
        out.push('\n');
    }
    out
}

pub fn save_spectrum(path: &Path, spec: &Spectrum, header: &[(String, String)]) -> Result<()> {
    std::fs::write(path, write_spectrum(spec, header)).map_err(|e| CliError::io(path, e))
}

pub fn read_spectrum(path: &Path) -> Result<SpectrumFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spectrum(&text, &path.display().to_string())
}

/// Parses a spectrum file; `label` names the source in error messages.
///
/// Without grid header keys the grid is inferred from the first and last
/// rows. Either way every row must sit on the grid; the first row that does
/// not is reported.
pub fn parse_spectrum(text: &str, label: &str) -> Result<SpectrumFile> {
    let err = |line: usize, reason: String| CliError::Parse { path: label.to_string(), line, reason };
    let mut header = Vec::new();
    let mut header_lines = Vec::new();
    let mut rows: Vec<(usize, f64, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once(':') {
                header.push((k.trim().to_string(), v.trim().to_string()));
                header_lines.push(line_no);
            }
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(err(line_no, format!("expected two numeric columns, found {}", cols.len())));
        }
        let num = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| err(line_no, format!("not a number: {s:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(err(line_no, format!("non-finite value {s:?}")))
            }
        };
        rows.push((line_no, num(cols[0])?, num(cols[1])?));
    }
    if rows.len() < 2 {
        return Err(err(text.lines().count(), format!("need at least two data rows, found {}", rows.len())));
    }

    let lookup = |key: &str| header.iter().zip(&header_lines).find(|((k, _), _)| k == key).map(|((_, v), &l)| (v, l));
    let header_num = |key: &str| -> Result<Option<f64>> {
        match lookup(key) {
            None => Ok(None),
            Some((v, l)) => v.parse().map(Some).map_err(|_| err(l, format!("{key}: not a number: {v:?}"))),
        }
    };

    let grid = match (header_num(START_KEY)?, header_num(STEP_KEY)?, lookup(LEN_KEY)) {
        (Some(start), Some(step), Some((len, l))) => {
            let len: usize = len.parse().map_err(|_| err(l, format!("{LEN_KEY}: not a count: {len:?}")))?;
            if len != rows.len() {
                return Err(err(l, format!("header declares {len} rows, file has {}", rows.len())));
            }
            Grid::new(start, step, len).map_err(|e| err(l, e.to_string()))?
        }
        _ => {
            let (first, last) = (rows[0], rows[rows.len() - 1]);
            let step = (last.1 - first.1) / (rows.len() - 1) as f64;
            if !(step > 0.0) {
                return Err(err(rows[1].0, "probe detuning must increase down the file".into()));
            }
            Grid::new(first.1, step, rows.len()).map_err(|e| err(first.0, e.to_string()))?
        }
    };
    for (i, &(line_no, x, _)) in rows.iter().enumerate() {
        let expected = grid.point(i);
        if (x - expected).abs() > 1e-6 * grid.step() + 1e-11 * x.abs() {
            return Err(err(
                line_no,
                format!("non-uniform grid: row {} at {x} MHz, expected {expected} MHz", i + 1),
            ));
        }
    }

    let mut spectrum = Spectrum::new(grid, rows.iter().map(|r| r.2).collect())?;
    if let Some(fwhm) = header_num(FWHM_KEY)? {
        spectrum.meta.convolution_fwhm = fwhm;
    }
    Ok(SpectrumFile { header, spectrum })
}
