//! Two-Lorentzian decomposition of one fine-structure line.

use std::ops::Range;

use crate::angular::{HalfInt, RYDBERG_J};
use crate::error::{Error, Result};
use crate::lineshape::{line_offset_mhz, GaussianKernel, Grid, SegmentConvolver, Spectrum};
use crate::pumping::AtomParams;
use crate::scalar::Real;

use super::minimize::{levenberg_marquardt, Linearization};

/// Fitted separation below this multiple of the line width is reported as a
/// merged doublet. The width is the broader line's Lorentzian FWHM or the
/// instrument FWHM, whichever is larger.
pub const MERGE_FACTOR: f64 = 1.2;

const MAX_LM_ITER: usize = 5000;
/// Narrowest fitted half width, as a fraction of the grid step. Narrower
/// lines differ only in area once sampled and convolved.
const MIN_HWHM_STEPS: f64 = 0.25;

/// `height · hwhm² / (hwhm² + (x − center)²)`, frequencies in MHz.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lorentzian<T = f64> {
    pub center: T,
    pub height: T,
    pub hwhm: T,
}

impl<T: Real> Lorentzian<T> {
    pub fn value(&self, x: T) -> T {
        let w2 = self.hwhm * self.hwhm;
        let u = x - self.center;
        self.height * w2 / (w2 + u * u)
    }

    /// `π · height · hwhm`.
    pub fn area(&self) -> T {
        T::PI() * self.height * self.hwhm
    }
}

/// Sum of two Lorentzians, optionally seen through a Gaussian instrument profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLorentzian<T = f64> {
    pub lines: [Lorentzian<T>; 2],
}

impl<T: Real> TwoLorentzian<T> {
    /// Samples the model on `grid` and convolves it with a Gaussian of width
    /// `instrument_fwhm` (MHz), recording the width in the spectrum metadata.
    pub fn sample(&self, grid: Grid<T>, instrument_fwhm: T) -> Result<Spectrum<T>> {
        let raw = Spectrum::from_fn(grid, |x| self.lines[0].value(x) + self.lines[1].value(x));
        crate::lineshape::convolve_gaussian(&raw, instrument_fwhm)
    }
}

/// A resolved doublet, lines ordered by increasing frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubletReport<T = f64> {
    pub peak_positions: [T; 2],
    pub splitting: T,
    pub amplitudes: [T; 2],
    pub areas: [T; 2],
    /// Lorentzian half widths before instrument broadening, MHz.
    pub widths: [T; 2],
    /// Height of the weaker-area line over that of the stronger.
    pub amplitude_ratio: T,
    /// Weaker area over stronger area, in `(0, 1]`.
    pub area_ratio: T,
    /// Root-sum-square fit residual over that of the data.
    pub residual_norm: T,
}

impl<T: Real> DoubletReport<T> {
    fn from_lines(mut lines: [Lorentzian<T>; 2], residual_norm: T) -> Self {
        if lines[1].center < lines[0].center {
            lines.swap(0, 1);
        }
        let areas = [lines[0].area(), lines[1].area()];
        let (weak, strong) = if areas[0] <= areas[1] { (0, 1) } else { (1, 0) };
        DoubletReport {
            peak_positions: [lines[0].center, lines[1].center],
            splitting: (lines[1].center - lines[0].center).abs(),
            amplitudes: [lines[0].height, lines[1].height],
            areas,
            widths: [lines[0].hwhm, lines[1].hwhm],
            amplitude_ratio: lines[weak].height / lines[strong].height,
            area_ratio: areas[weak] / areas[strong],
            residual_norm,
        }
    }

    pub fn lines(&self) -> [Lorentzian<T>; 2] {
        [0, 1].map(|k| Lorentzian {
            center: self.peak_positions[k],
            height: self.amplitudes[k],
            hwhm: self.widths[k],
        })
    }
}

/// Outcome of [`extract_doublet`].
#[derive(Clone, Debug, PartialEq)]
pub enum PeakReport<T = f64> {
    Doublet(DoubletReport<T>),
    /// Only one resolvable peak; the single-Lorentzian fit is reported.
    Merged { peak: Lorentzian<T>, residual_norm: T },
}

impl<T: Real> PeakReport<T> {
    pub fn doublet(&self) -> Option<&DoubletReport<T>> {
        match self {
            PeakReport::Doublet(d) => Some(d),
            PeakReport::Merged { .. } => None,
        }
    }

    pub fn is_merged(&self) -> bool {
        matches!(self, PeakReport::Merged { .. })
    }

    pub fn splitting(&self) -> Option<T> {
        self.doublet().map(|d| d.splitting)
    }
}

/// Least-squares model of `n` Lorentzians on a window of a spectrum,
/// convolved exactly as the full-grid convolution would.
struct WindowFit<'a, T: Real> {
    spec: &'a Spectrum<T>,
    window: Range<usize>,
    segment: Range<usize>,
    convolver: Option<SegmentConvolver<T>>,
    /// Target values on the window; the spectrum, or what a fixed line leaves of it.
    target: Vec<T>,
}

impl<'a, T: Real> WindowFit<'a, T> {
    fn new(spec: &'a Spectrum<T>, window: Range<usize>) -> Self {
        let kernel = GaussianKernel::new(spec.grid.step(), spec.meta.convolution_fwhm);
        let hw = kernel.as_ref().map_or(0, |k| k.half_width());
        let segment = window.start.saturating_sub(hw)..(window.end + hw).min(spec.grid.len());
        let convolver = kernel.map(|k| SegmentConvolver::new(k, segment.len()));
        let target = spec.values[window.clone()].to_vec();
        WindowFit { spec, window, segment, convolver, target }
    }

    /// The same fit against the data minus the model of `fixed`.
    fn without(&self, fixed: &Lorentzian<T>) -> Self {
        let residuals = self.linearize(&params_of(std::slice::from_ref(fixed))).residuals;
        WindowFit {
            spec: self.spec,
            window: self.window.clone(),
            segment: self.segment.clone(),
            convolver: self.convolver.clone(),
            target: residuals.iter().map(|&r| -r).collect(),
        }
    }

    fn data(&self) -> &[T] {
        &self.target
    }

    fn x(&self, i: usize) -> T {
        self.spec.grid.point(self.window.start + i)
    }

    fn blur(&self, column: Vec<T>) -> Vec<T> {
        let lo = self.window.start - self.segment.start;
        let out = match &self.convolver {
            Some(c) => c.apply(&column, self.segment.start, self.spec.grid.len()),
            None => column,
        };
        out[lo..lo + self.window.len()].to_vec()
    }

    /// Parameters are `[center, ln height, ln hwhm]` per line.
    fn linearize(&self, p: &[T]) -> Linearization<T> {
        let m = self.segment.len();
        let n_lines = p.len() / 3;
        let mut model = vec![T::zero(); m];
        let mut raw_jac = vec![vec![T::zero(); m]; p.len()];
        let two = T::lit(2.0);
        for k in 0..n_lines {
            let (c, h, w) = (p[3 * k], p[3 * k + 1].exp(), p[3 * k + 2].exp());
            let w2 = w * w;
            for (i, slot) in model.iter_mut().enumerate() {
                let u = self.spec.grid.point(self.segment.start + i) - c;
                let d = w2 + u * u;
                let l = h * w2 / d;
                *slot = *slot + l;
                raw_jac[3 * k][i] = two * l * u / d;
                raw_jac[3 * k + 1][i] = l;
                raw_jac[3 * k + 2][i] = two * l * u * u / d;
            }
        }
        let model = self.blur(model);
        let residuals = model.iter().zip(self.data()).map(|(&m, &y)| m - y).collect();
        let jacobian = raw_jac.into_iter().map(|col| self.blur(col)).collect();
        Linearization { residuals, jacobian }
    }

    fn fit(&self, lines: &[Lorentzian<T>]) -> Result<(Vec<Lorentzian<T>>, T)> {
        let p0 = params_of(lines);
        let min_ln_w = (self.spec.grid.step() * T::lit(MIN_HWHM_STEPS)).ln();
        let inf = T::infinity();
        let centers = (self.x(0), self.x(self.window.len() - 1));
        let bounds: Vec<(T, T)> =
            lines.iter().flat_map(|_| [centers, (-inf, inf), (min_ln_w, inf)]).collect();
        let p0: Vec<T> = p0.iter().zip(&bounds).map(|(&v, &(lo, _))| v.max(lo)).collect();
        let out = levenberg_marquardt(&p0, &bounds, MAX_LM_ITER, |p| self.linearize(p))?;
        let fitted: Vec<Lorentzian<T>> = out
            .params
            .chunks(3)
            .map(|c| Lorentzian { center: c[0], height: c[1].exp(), hwhm: c[2].exp() })
            .collect();
        if fitted.iter().any(|l| !(l.center.is_finite() && l.height.is_finite() && l.hwhm.is_finite())) {
            return Err(Error::Numerical {
                message: "line fit produced non-finite parameters".into(),
                best: out.params.iter().map(|v| v.to_f64_lossy()).collect(),
                residual: out.cost.sqrt().to_f64_lossy(),
            });
        }
        let norm = self.data().iter().fold(T::zero(), |a, &y| a + y * y).sqrt();
        let rel = if norm > T::zero() { out.cost.sqrt() / norm } else { out.cost.sqrt() };
        Ok((fitted, rel))
    }

    /// Starting guess for a line peaking at window index `i`: the half width
    /// is read off the data and the instrument width removed.
    fn seed(&self, i: usize, height: T) -> Lorentzian<T> {
        let data = self.data();
        let half = height / T::lit(2.0);
        let left = (0..i).rev().find(|&k| data[k] < half).map(|k| i - k);
        let right = (i + 1..data.len()).find(|&k| data[k] < half).map(|k| k - i);
        let steps = match (left, right) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => data.len() / 4,
        };
        let step = self.spec.grid.step();
        let observed = step * T::from_usize_lossy(steps.max(1));
        let blur = self.spec.meta.convolution_fwhm / T::lit(2.0);
        let hwhm = (observed - blur).max(observed / T::lit(4.0)).max(step);
        Lorentzian { center: self.x(i), height: (height * observed / hwhm).max(T::min_positive_value()), hwhm }
    }
}

fn params_of<T: Real>(lines: &[Lorentzian<T>]) -> Vec<T> {
    lines.iter().flat_map(|l| [l.center, l.height.ln(), l.hwhm.ln()]).collect()
}

/// Local maxima of `v` as `(index, value)`, highest first. Plateaus count once.
fn local_maxima<T: Real>(v: &[T]) -> Vec<(usize, T)> {
    let n = v.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && v[j + 1] == v[i] {
            j += 1;
        }
        let rises = i == 0 || v[i - 1] < v[i];
        let falls = j + 1 == n || v[j + 1] < v[i];
        if rises && falls && i > 0 && j + 1 < n {
            out.push(((i + j) / 2, v[i]));
        }
        i = j + 1;
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
    out
}

/// The two highest maxima; among equal heights the pair with the greatest
/// separation wins.
fn pick_pair<T: Real>(maxima: &[(usize, T)]) -> Option<((usize, T), (usize, T))> {
    if maxima.len() < 2 {
        return None;
    }
    let tied = |a: T, b: T| (a - b).abs() <= T::lit(1e-9) * a.abs().max(b.abs());
    let top = maxima[0].1;
    let top_group: Vec<_> = maxima.iter().copied().filter(|m| tied(m.1, top)).collect();
    if top_group.len() >= 2 {
        let lo = *top_group.iter().min_by_key(|m| m.0).unwrap();
        let hi = *top_group.iter().max_by_key(|m| m.0).unwrap();
        return Some((lo, hi));
    }
    let first = maxima[0];
    let next = maxima[1].1;
    let second = maxima[1..]
        .iter()
        .copied()
        .filter(|m| tied(m.1, next))
        .max_by_key(|m| m.0.abs_diff(first.0))
        .unwrap();
    Some((first, second))
}

/// Window of component `j`: its line center ± half the fine-structure separation.
pub fn component_window<T: Real>(grid: &Grid<T>, j: HalfInt, params: &AtomParams<T>) -> Result<Range<usize>> {
    if !RYDBERG_J.contains(&j) {
        return Err(Error::domain(format!("no Rydberg component with J = {j}")));
    }
    let center = line_offset_mhz(j, params);
    let half = params.fs_separation / T::lit(2.0);
    let range = grid.index_range(center - half, center + half);
    if range.len() < 8 {
        return Err(Error::input(format!(
            "the grid holds only {} points inside the J = {j} window",
            range.len()
        )));
    }
    Ok(range)
}

/// Fits the line of component `j` with two Lorentzians convolved by the
/// spectrum's recorded instrument width.
///
/// The fit is seeded from the two highest local maxima in the window. With a
/// single maximum the second line is seeded at the largest residual of a
/// one-line fit. The result is [`PeakReport::Merged`] when the fitted lines
/// are closer than [`MERGE_FACTOR`] times the width (see there).
pub fn extract_doublet<T: Real>(spec: &Spectrum<T>, j: HalfInt, params: &AtomParams<T>) -> Result<PeakReport<T>> {
    spec.validate()?;
    let window = component_window(&spec.grid, j, params)?;
    let fit = WindowFit::new(spec, window);
    let data = fit.data();
    let maxima = local_maxima(data);

    let strongest = maxima.first().copied().unwrap_or_else(|| {
        let (i, v) = data
            .iter()
            .copied()
            .enumerate()
            .fold((0, T::neg_infinity()), |a, (i, v)| if v > a.1 { (i, v) } else { a });
        (i, v)
    });
    if !(strongest.1 > T::zero()) {
        return Err(Error::input(format!("no positive signal in the J = {j} window")));
    }

    let mut single: Option<(Lorentzian<T>, T)> = None;
    let seeds = match pick_pair(&maxima) {
        Some((a, b)) => [fit.seed(a.0, a.1), fit.seed(b.0, b.1)],
        None => {
            let (lines, rel) = fit.fit(&[fit.seed(strongest.0, strongest.1)])?;
            single = Some((lines[0], rel));
            let residual = fit.linearize(&params_of(&lines)).residuals;
            let (i, r) = residual
                .iter()
                .enumerate()
                .fold((0, T::zero()), |a, (i, &r)| if -r > a.1 { (i, -r) } else { a });
            if !(r > T::zero()) {
                return Ok(PeakReport::Merged { peak: lines[0], residual_norm: rel });
            }
            [lines[0], fit.seed(i, r)]
        }
    };

    // Staged start: the stronger line alone, then the weaker one against
    // what the first leaves, so a poor first seed cannot push the second
    // line out of the window.
    let seeds = match single {
        Some(_) => seeds,
        None => {
            let strong = fit.fit(&seeds[..1]).map_or(seeds[0], |(l, _)| l[0]);
            let weak = fit.without(&strong).fit(&seeds[1..]).map_or(seeds[1], |(l, _)| l[0]);
            [strong, weak]
        }
    };
    let doublet = fit.fit(&seeds).ok().and_then(|(lines, rel)| {
        let (lo, hi) = (fit.x(0), fit.x(data.len() - 1));
        let broader = (lines[0].hwhm.max(lines[1].hwhm) * T::lit(2.0)).max(spec.meta.convolution_fwhm);
        let separation = (lines[1].center - lines[0].center).abs();
        // A line pinned to the window edge or with no area is not a peak.
        let inside = lines.iter().all(|l| l.center > lo && l.center < hi && l.area() > T::zero());
        (inside && separation >= T::lit(MERGE_FACTOR) * broader)
            .then(|| DoubletReport::from_lines([lines[0], lines[1]], rel))
    });
    if let Some(d) = doublet {
        return Ok(PeakReport::Doublet(d));
    }
    let (peak, residual_norm) = match single {
        Some(s) => s,
        None => {
            let (lines, rel) = fit.fit(&[fit.seed(strongest.0, strongest.1)])?;
            (lines[0], rel)
        }
    };
    Ok(PeakReport::Merged { peak, residual_norm })
}
