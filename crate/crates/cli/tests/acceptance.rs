//! Acceptance suite. Runs every criterion in order (so the runtime limits
//! are measured without contention), prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use autler_townes::analysis::{
    area_ratio_curve, effective_rabi, fit_spectrum, model_spectrum, splitting_curve, CurveOptions, FitOptions,
    FreeParams,
};
use autler_townes::angular::{clebsch_gordan, six_j, triangle, weight_circular, weight_circular_exact, SignedSqrt};
use autler_townes::lineshape::{lineshape, lineshape_circular, lineshape_circular_dressed, DressedParams, Evaluator};
use autler_townes::pumping::{rabi_from_intensity, steady_state_populations, sublevel_rabi};
use autler_townes::scalar::angular_to_mhz;
use autler_townes::{AtomParams, Components, Grid, HalfInt, LineModel, PumpConfig, Spectrum};
use autler_townes_cli::commands::{cmd_fit, cmd_simulate};
use autler_townes_cli::config::{PolarizationArg, RunConfig};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const J52: HalfInt = HalfInt::half(5);
const J32: HalfInt = HalfInt::half(3);

/// Result of one criterion: verdict, a one-line summary and extra report lines.
struct Verdict {
    pass: bool,
    summary: String,
    report: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Verdict { pass, summary: summary.into(), report: Vec::new() }
    }

    fn with_report(mut self, report: Vec<String>) -> Self {
        self.report = report;
        self
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    check: fn() -> Verdict,
}

fn params() -> AtomParams {
    AtomParams::default()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn weight_ratio() -> Verdict {
    let exact = weight_circular_exact(J52).unwrap() / weight_circular_exact(J32).unwrap();
    let float = weight_circular::<f64>(J52).unwrap() / weight_circular::<f64>(J32).unwrap();
    let rel = (float / 16.5 - 1.0).abs();
    Verdict::new(exact == q(33, 2) && rel < 1e-6, format!("exact ratio {exact}, f64 {float} (rel err {rel:.1e})"))
}

fn sublevel_rabi_table() -> Verdict {
    let omega0 = rabi_from_intensity(36.0, &params()).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for m in 0..=3i64 {
        let hm = HalfInt::int(m as i32);
        let cg = clebsch_gordan(HalfInt::int(3), hm, HalfInt::int(1), HalfInt::ZERO, HalfInt::int(4), hm).unwrap();
        let want = q(16 - m * m, 28);
        let ratio = sublevel_rabi(hm, omega0).unwrap() / omega0;
        let float_ok = (ratio - ((16 - m * m) as f64 / 28.0).sqrt()).abs() < 1e-15;
        ok &= cg.sign() == std::cmp::Ordering::Greater && cg.sq() == want && float_ok;
        parts.push(format!("m={m}: {cg}"));
    }
    Verdict::new(ok, parts.join(", "))
}

fn effective_linear_splitting() -> Verdict {
    let p = params();
    let s = 36.0;
    let ratio = effective_rabi(&PumpConfig::linear(s, 0.0), &p).unwrap() / rabi_from_intensity(s, &p).unwrap();
    let closed = ((16.0f64 / 28.0).sqrt() + (15.0f64 / 28.0).sqrt()) / 2.0;
    let rounded = (ratio * 100.0).round() / 100.0;
    Verdict::new(
        (ratio - closed).abs() < 1e-15 && rounded == 0.74,
        format!("Ω_e/Ω₀ = {ratio:.6}, rounds to {rounded:.2}"),
    )
}

fn linear_component_ratio() -> Verdict {
    let p = params();
    // Wide enough that the Lorentzian tails beyond the grid are negligible.
    let grid = Grid::from_range(-3000.0, 3000.0, 0.2).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    let mut report = Vec::new();
    for s in [4.4, 36.0, 260.0] {
        let pump = PumpConfig::linear(s, 0.0);
        let pops = steady_state_populations(&pump, &p).unwrap();
        let area = |j| lineshape(&grid, &pump, &p, Some(&pops), LineModel::Exact, Components::Only(j)).unwrap().integral();
        let ratio = area(J52) / area(J32);
        let within = (ratio / 21.0 - 1.0).abs() <= 0.10;
        ok &= within;
        parts.push(format!("s={s}: {ratio:.3}"));
        report.push(format!(
            "s={s}: D5/2:D3/2 = {ratio:.4} ({:+.1}% from 21); ground ρ0..ρ3 = {:.4} {:.4} {:.4} {:.5}, excited total {:.4}",
            100.0 * (ratio / 21.0 - 1.0),
            pops.ground(0),
            pops.ground(1),
            pops.ground(2),
            pops.ground(3),
            pops.excited_total()
        ));
    }
    Verdict::new(ok, parts.join(", ")).with_report(report)
}

fn dressed_bare_equivalence() -> Verdict {
    let p = params();
    let gamma_mhz = angular_to_mhz(p.gamma());
    let grid = Grid::default_probe();
    let ratios = [5.0, 10.0, 20.0, 50.0];
    let errors: Vec<f64> = ratios
        .iter()
        .map(|r| {
            let omega_mhz = r * gamma_mhz;
            let pump = PumpConfig::circular(2.0 * (omega_mhz / angular_to_mhz(p.gamma2)).powi(2), 0.0);
            let bare = lineshape_circular(&grid, &pump, &p).unwrap();
            let dressed = lineshape_circular_dressed(&grid, &pump, &p).unwrap();
            let peak = bare.max_value();
            bare.values.iter().zip(&dressed.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / peak
        })
        .collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let small = ratios.iter().zip(&errors).filter(|(r, _)| **r >= 20.0).all(|(_, e)| *e < 0.01);
    let list: Vec<String> = ratios.iter().zip(&errors).map(|(r, e)| format!("Ω/γ={r}: {:.2}%", 100.0 * e)).collect();
    Verdict::new(monotone && small, list.join(", ")).with_report(vec![format!(
        "monotone decrease: {}; below 1% for Ω ≥ 20γ: {} (deviation falls as γ/Ω)",
        if monotone { "yes" } else { "no" },
        if small { "yes" } else { "no" }
    )])
}

/// Adaptive Simpson on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

/// `∫ f dx` over the real line via `x = w·tan u`, split at the images of `breaks`.
fn integrate_line(f: &dyn Fn(f64) -> f64, w: f64, breaks: &[f64]) -> f64 {
    let edge = std::f64::consts::FRAC_PI_2 * (1.0 - 1e-12);
    let mut us: Vec<f64> = breaks.iter().map(|x| (x / w).atan()).collect();
    us.extend([-edge, edge]);
    us.sort_by(f64::total_cmp);
    let g = |u: f64| {
        let c = u.cos();
        f(w * u.tan()) * w / (c * c)
    };
    us.windows(2).map(|p| simpson(&g, p[0], p[1], 1e-9)).sum()
}

fn normalization() -> Verdict {
    let p = params();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for _ in 0..10 {
        let (s, delta_mhz) = (rng.gen_range(0.1..300.0), rng.gen_range(-50.0..50.0));
        let pump = PumpConfig::circular(s, 0.0).with_delta_mhz(delta_mhz);
        let eval = Evaluator::new(&pump, &p, None, LineModel::Exact).unwrap();
        let d = DressedParams::new(rabi_from_intensity(s, &p).unwrap(), pump.delta, &p).unwrap();
        let (c1, c2) = d.centers();
        let f = |x: f64| eval.value_filtered(x, |t| t.j == J52);
        let integral = integrate_line(&f, 10.0, &[angular_to_mhz(c1), angular_to_mhz(c2)]);
        worst = worst.max((integral - 1.0).abs());
        parts.push(format!("({s:.1}, {delta_mhz:.1})→{integral:.6}"));
    }
    Verdict::new(worst <= 1e-3, format!("max |∫−1| = {worst:.1e} over 10 (s, δ) pairs"))
        .with_report(vec![parts.join(" ")])
}

fn area_ratio_law() -> Verdict {
    let p = params();
    let configs: Vec<PumpConfig> = [10.0, 30.0]
        .iter()
        .flat_map(|&d| [4.5, 110.0, 290.0].map(|s| PumpConfig::circular(s, 0.0).with_delta_mhz(d)))
        .collect();
    let at = |fwhm: f64| {
        let opts = CurveOptions { fwhm, ..CurveOptions::default() };
        area_ratio_curve(&configs, &p, &opts).unwrap()
    };
    let (narrow, wide) = (at(4.5), at(10.0));
    let mut ok = true;
    let mut worst_law: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    let mut report = Vec::new();
    for (a, b) in narrow.iter().zip(&wide) {
        let (ra, rb) = (a.extracted(), b.extracted());
        let (Some(ra), Some(rb)) = (ra, rb) else {
            ok = false;
            report.push(format!("s={} δ={}: doublet not resolved", a.pump.s, angular_to_mhz(a.pump.delta)));
            continue;
        };
        let law = (ra / a.expected() - 1.0).abs().max((rb / b.expected() - 1.0).abs());
        let inv = (rb / ra - 1.0).abs();
        ok &= law <= 0.05 && inv <= 0.02;
        worst_law = worst_law.max(law);
        worst_inv = worst_inv.max(inv);
        report.push(format!(
            "s={} δ={:.0}: tan²θ {:.5}, extracted {:.5} (4.5 MHz) {:.5} (10 MHz)",
            a.pump.s,
            angular_to_mhz(a.pump.delta),
            a.expected(),
            ra,
            rb
        ));
    }
    Verdict::new(ok, format!("max law dev {:.2}%, max fwhm 4.5→10 change {:.2}%", 100.0 * worst_law, 100.0 * worst_inv))
        .with_report(report)
}

fn splitting_curves() -> Verdict {
    let p = params();
    let opts = CurveOptions::default();
    let mut s_values = vec![0.0];
    s_values.extend(log_grid(0.4, 290.0, 24));
    let mut ok = true;
    let (mut checked, mut worst) = (0, 0.0f64);
    let mut report = Vec::new();
    for template in [
        PumpConfig::circular(0.0, 0.0),
        PumpConfig::linear(0.0, 0.0),
        PumpConfig::circular(0.0, 0.0).with_delta_mhz(30.0),
        PumpConfig::linear(0.0, 0.0).with_delta_mhz(30.0),
    ] {
        for pt in splitting_curve(&s_values, &template, &p, &opts).unwrap() {
            if pt.predicted <= 4.0 * opts.fwhm {
                continue;
            }
            checked += 1;
            let tol = (0.02 * pt.predicted).max(0.5);
            match pt.extracted() {
                Some(x) => {
                    worst = worst.max((x - pt.predicted).abs() / tol);
                    if (x - pt.predicted).abs() > tol {
                        ok = false;
                        report.push(format!("{:?} s={:.2}: {x:.3} vs {:.3}", template.polarization, pt.s, pt.predicted));
                    }
                }
                None => {
                    ok = false;
                    report.push(format!(
                        "{:?} s={:.2} δ={:.0}: predicted {:.2} MHz, no doublet extracted",
                        template.polarization,
                        pt.s,
                        angular_to_mhz(template.delta),
                        pt.predicted
                    ));
                }
            }
        }
    }
    Verdict::new(ok, format!("{checked} resolved points, worst |err|/tol = {worst:.3}")).with_report(report)
}

fn population_ranges() -> Verdict {
    let p = params();
    let quoted = [(0.2, 0.38), (0.12, 0.24), (0.036, 0.06), (0.0012, 0.0044)];
    let mut lo = [f64::INFINITY; 4];
    let mut hi = [0.0f64; 4];
    let (mut sum_err, mut sym_err) = (0.0f64, 0.0f64);
    for delta in [0.0, 30.0] {
        for s in log_grid(0.4, 290.0, 80) {
            let pops = steady_state_populations(&PumpConfig::linear(s, 0.0).with_delta_mhz(delta), &p).unwrap();
            sum_err = sum_err.max((pops.total() - 1.0).abs());
            for m in 0..4 {
                let g = pops.ground(m as i32);
                lo[m] = lo[m].min(g);
                hi[m] = hi[m].max(g);
                sym_err = sym_err.max((g - pops.ground(-(m as i32))).abs());
                sym_err = sym_err.max((pops.excited(m as i32) - pops.excited(-(m as i32))).abs());
            }
        }
    }
    let mut ok = sum_err <= 1e-10 && sym_err <= 1e-10;
    let mut report = Vec::new();
    for m in 0..4 {
        let (a, b) = quoted[m];
        let overlap = lo[m] <= b * 1.25 && hi[m] >= a * 0.75;
        ok &= overlap;
        report.push(format!(
            "ρ{m}: computed [{:.5}, {:.5}] vs quoted [{a}, {b}]: overlap {}; endpoint deviations {:+.1}% / {:+.1}%",
            lo[m],
            hi[m],
            if overlap { "yes" } else { "no" },
            100.0 * (lo[m] / a - 1.0),
            100.0 * (hi[m] / b - 1.0)
        ));
    }
    Verdict::new(ok, format!("sum err {sum_err:.1e}, symmetry err {sym_err:.1e}")).with_report(report)
}

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn coupled(j1: HalfInt, j2: HalfInt) -> Vec<HalfInt> {
    ((j1 - j2).abs().twice()..=(j1 + j2).twice()).step_by(2).map(h).collect()
}

fn kronecker(equal: bool) -> SignedSqrt {
    if equal {
        SignedSqrt::one()
    } else {
        SignedSqrt::zero()
    }
}

fn pick<T: Copy>(items: &[T], rng: &mut ChaCha8Rng) -> T {
    items[rng.gen_range(0..items.len())]
}

fn wigner_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let sum = |t: &[SignedSqrt]| SignedSqrt::sum_commensurate(t).expect("commensurate");
    let mut failures = 0;
    for _ in 0..200 {
        let (j1, j2) = (h(rng.gen_range(0..=12)), h(rng.gen_range(0..=12)));
        let js = coupled(j1, j2);

        // Rows: Σ_{m1} ⟨j1 m1 j2 m−m1|J M⟩⟨j1 m1 j2 m−m1|J' M⟩ = δ_JJ'.
        let (j, jp) = (pick(&js, &mut rng), pick(&js, &mut rng));
        let m = pick(&j.min(jp).projections().collect::<Vec<_>>(), &mut rng);
        let row: Vec<SignedSqrt> = j1
            .projections()
            .filter(|&m1| (m - m1).abs() <= j2)
            .map(|m1| {
                &clebsch_gordan(j1, m1, j2, m - m1, j, m).unwrap() * &clebsch_gordan(j1, m1, j2, m - m1, jp, m).unwrap()
            })
            .collect();
        failures += usize::from(sum(&row) != kronecker(j == jp));

        // Columns: Σ_J ⟨j1 m1 j2 m2|J M⟩⟨j1 n1 j2 n2|J M⟩ = δ.
        let pairs: Vec<(HalfInt, HalfInt)> =
            j1.projections().flat_map(|a| j2.projections().map(move |b| (a, b))).collect();
        let (m1, m2) = pick(&pairs, &mut rng);
        let same: Vec<_> = pairs.iter().copied().filter(|&(a, b)| a + b == m1 + m2).collect();
        let (n1, n2) = if rng.gen_bool(0.5) { (m1, m2) } else { pick(&same, &mut rng) };
        let col: Vec<SignedSqrt> = js
            .iter()
            .filter(|&&jj| (m1 + m2).abs() <= jj)
            .map(|&jj| {
                &clebsch_gordan(j1, m1, j2, m2, jj, m1 + m2).unwrap()
                    * &clebsch_gordan(j1, n1, j2, n2, jj, m1 + m2).unwrap()
            })
            .collect();
        failures += usize::from(sum(&col) != kronecker((m1, m2) == (n1, n2)));

        // 6-j: Σ_x (2x+1)(2j3+1) {j1 j2 x; j4 j5 j3}{j1 j2 x; j4 j5 j3'} = δ.
        let (j4, j5, thirds) = loop {
            let (j4, j5) = (h(rng.gen_range(0..=12)), h(rng.gen_range(0..=12)));
            let thirds: Vec<HalfInt> = coupled(j1, j5).into_iter().filter(|&x| triangle(j4, j2, x)).collect();
            if !thirds.is_empty() {
                break (j4, j5, thirds);
            }
        };
        let (j3, j3p) = (pick(&thirds, &mut rng), pick(&thirds, &mut rng));
        let six: Vec<SignedSqrt> = js
            .iter()
            .filter(|&&x| triangle(j4, j5, x))
            .map(|&x| {
                let weight = SignedSqrt::from(i64::from((x.twice() + 1) * (j3.twice() + 1)));
                &(&weight * &six_j(j1, j2, x, j4, j5, j3).unwrap()) * &six_j(j1, j2, x, j4, j5, j3p).unwrap()
            })
            .collect();
        failures += usize::from(sum(&six) != kronecker(j3 == j3p));
    }
    Verdict::new(failures == 0, format!("200 cases × 3 identities, {failures} failures"))
}

fn synthesized(s: f64, fwhm: f64) -> Spectrum {
    let grid = Grid::default_probe();
    let template = Spectrum::new(grid, vec![0.0; grid.len()]).unwrap();
    model_spectrum(&template, &PumpConfig::circular(s, 0.0), &params(), LineModel::Exact, fwhm, 1.0).unwrap()
}

fn fit_round_trip() -> Verdict {
    let p = params();
    let clean = synthesized(36.0, 4.5);
    let mut noisy = clean.clone();
    let peak = clean.max_value();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    noisy.values.iter_mut().for_each(|v| *v += 0.01 * peak * rng.sample::<f64, _>(StandardNormal));
    let nominal = PumpConfig::circular(40.0, 0.0);
    let opts = FitOptions { fwhm: 6.0, ..FitOptions::default() };
    let fit = fit_spectrum(&noisy, &nominal, &p, FreeParams::ALL, &opts).unwrap();
    let self_fit = fit_spectrum(&clean, &nominal, &p, FreeParams::ALL, &opts).unwrap();
    let (ds, dw) = (fit.fitted_s / 36.0 - 1.0, fit.fitted_fwhm / 4.5 - 1.0);
    Verdict::new(
        ds.abs() <= 0.02 && dw.abs() <= 0.05 && self_fit.residual_norm < 1e-8,
        format!(
            "noisy: s {:.4} ({:+.2}%), fwhm {:.4} ({:+.2}%); noiseless residual {:.1e}",
            fit.fitted_s,
            100.0 * ds,
            fit.fitted_fwhm,
            100.0 * dw,
            self_fit.residual_norm
        ),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let read = |p: &Path| std::fs::read(p).unwrap();
    let mut cfg = RunConfig::default();
    cfg.pump.polarization = PolarizationArg::Linear;
    cfg.pump.s = 36.0;
    cfg.pump.delta_mhz = 30.0;
    cfg.output.path = dir.path().join("run.dat");
    let first = read(&cmd_simulate(&cfg).unwrap());
    let second = read(&cmd_simulate(&cfg).unwrap());

    let mut nominal = cfg.clone();
    nominal.pump.s = 40.0;
    let fit_a = cmd_fit(&cfg.output.path, &nominal, FreeParams::ALL).unwrap();
    let model_a = read(&fit_a.model_path);
    let fit_b = cmd_fit(&cfg.output.path, &nominal, FreeParams::ALL).unwrap();
    let model_b = read(&fit_b.model_path);
    let sim_same = first == second;
    let fit_same = model_a == model_b && fit_a.render() == fit_b.render();
    Verdict::new(
        sim_same && fit_same,
        format!("simulate identical: {sim_same} ({} bytes); fit identical: {fit_same}", first.len()),
    )
}

fn main() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "weight ratio 16.5", budget: secs(1), check: weight_ratio },
        Criterion { id: 2, name: "sublevel Rabi table", budget: None, check: sublevel_rabi_table },
        Criterion { id: 3, name: "effective linear splitting 0.74", budget: None, check: effective_linear_splitting },
        Criterion { id: 4, name: "linear D5/2:D3/2 ratio 21", budget: None, check: linear_component_ratio },
        Criterion { id: 5, name: "dressed/bare equivalence", budget: secs(10), check: dressed_bare_equivalence },
        Criterion { id: 6, name: "D5/2 normalization", budget: None, check: normalization },
        Criterion { id: 7, name: "area-ratio law", budget: None, check: area_ratio_law },
        Criterion { id: 8, name: "splitting curves", budget: secs(30), check: splitting_curves },
        Criterion { id: 9, name: "population ranges", budget: None, check: population_ranges },
        Criterion { id: 10, name: "Wigner algebra properties", budget: secs(5), check: wigner_properties },
        Criterion { id: 11, name: "fit round trip", budget: None, check: fit_round_trip },
        Criterion { id: 12, name: "determinism", budget: None, check: determinism },
    ];

    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Verdict::new(false, format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let in_time = c.budget.map_or(true, |b| elapsed <= b);
        let pass = verdict.pass && in_time;
        let timing = match c.budget {
            Some(b) => format!("{:.2}s of {}s", elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        println!(
            "criterion {:>2} {} {}: {} [{timing}]",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            verdict.summary
        );
        for line in &verdict.report {
            println!("    {line}");
        }
        if !pass {
            failed.push(c.id);
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
