mod common;

use autler_townes::angular::HalfInt;
use autler_townes::lineshape::{
    convolve_gaussian, lineshape, lineshape_circular, lineshape_circular_dressed, lineshape_linear,
    lineshape_linear_dressed, lineshape_linear_sublevel, Components, DressedParams, Evaluator, Grid,
    LineModel, Spectrum,
};
use autler_townes::pumping::{rabi_from_intensity, steady_state_populations, AtomParams, PumpConfig};
use autler_townes::scalar::{angular_to_mhz, mhz_to_angular};
use proptest::prelude::*;

const J52: HalfInt = HalfInt::half(5);
const J32: HalfInt = HalfInt::half(3);

fn params() -> AtomParams {
    AtomParams::default()
}

/// Intensity ratio giving a stretched-transition Rabi frequency of `mhz`.
fn s_for_rabi_mhz(mhz: f64) -> f64 {
    2.0 * (mhz / 5.98).powi(2)
}

fn local_maxima(spec: &Spectrum) -> Vec<(f64, f64)> {
    let v = &spec.values;
    (1..v.len() - 1)
        .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1])
        .map(|i| (spec.grid.point(i), v[i]))
        .collect()
}

fn rel_linf(a: &Spectrum, b: &Spectrum) -> f64 {
    let peak = a.max_value();
    a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / peak
}

#[test]
fn resonant_pump_gives_symmetric_doublet() {
    let pump = PumpConfig::circular(s_for_rabi_mhz(40.0), 0.0);
    let spec = lineshape_circular(&Grid::default_probe(), &pump, &params()).unwrap();
    let d52 = spec.window(-70.0, 70.0).unwrap();
    let mut peaks = local_maxima(&d52);
    peaks.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let (mut a, mut b) = (peaks[0], peaks[1]);
    if a.0 > b.0 {
        std::mem::swap(&mut a, &mut b);
    }
    // Bare-form maxima sit at ±√(Ω²/4 − a²/2) with a = (γ₂+γ₃)/2, just inside
    // the dressed centers ±Ω/2.
    let p = params();
    let a_mhz = angular_to_mhz((p.gamma2 + p.gamma3) / 2.0);
    let x_peak = (400.0 - a_mhz * a_mhz / 2.0).sqrt();
    assert!(x_peak < 20.0 && x_peak > 19.8);
    assert!((a.0 + x_peak).abs() <= 0.051 && (b.0 - x_peak).abs() <= 0.051, "{a:?} {b:?}");
    assert!((a.1 - b.1).abs() / a.1 < 1e-6);
    // Same structure on the D3/2 line, 140 MHz below.
    let d32 = spec.window(-210.0, -70.0).unwrap();
    let peaks32 = local_maxima(&d32);
    assert!(peaks32.iter().any(|p| (p.0 + 160.0).abs() <= 0.1));
    assert!(peaks32.iter().any(|p| (p.0 + 120.0).abs() <= 0.1));
}

#[test]
fn component_height_ratio_is_weight_ratio() {
    let p = params();
    for s in [0.01, 0.4, 36.0] {
        let eval = Evaluator::new(&PumpConfig::circular(s, 0.0), &p, None, LineModel::Exact).unwrap();
        let h52 = eval.value_filtered(0.0, |t| t.j == J52);
        let h32 = eval.value_filtered(-140.0, |t| t.j == J32);
        assert!((h52 / h32 - 16.5).abs() < 1e-9, "s = {s}: {}", h52 / h32);
    }
}

#[test]
fn circular_d52_component_is_normalized() {
    let p = params();
    for (s, delta_mhz) in [(1.0, 0.0), (36.0, 30.0), (260.0, -20.0), (4.5, 10.0)] {
        let pump = PumpConfig::circular(s, 0.0).with_delta_mhz(delta_mhz);
        let eval = Evaluator::new(&pump, &p, None, LineModel::Exact).unwrap();
        let dressed = DressedParams::new(rabi_from_intensity(s, &p).unwrap(), pump.delta, &p).unwrap();
        let (c1, c2) = dressed.centers();
        let breaks = [angular_to_mhz(c1), angular_to_mhz(c2)];
        let f = |x: f64| eval.value_filtered(x, |t| t.j == J52);
        let integral = common::integrate(&f, -2000.0, 2000.0, &breaks, 1e-9);
        assert!((integral - 1.0).abs() < 1e-3, "s={s} δ={delta_mhz}: {integral}");
    }
}

#[test]
fn dressed_form_structure_off_resonance() {
    let p = params();
    let pump = PumpConfig::circular(s_for_rabi_mhz(40.0), 0.0).with_delta_mhz(30.0);
    let eval = Evaluator::new(&pump, &p, None, LineModel::Dressed).unwrap();
    let d = eval.terms()[1].dressed().copied().unwrap();
    assert!((angular_to_mhz(d.omega_gen) - 50.0).abs() < 1e-9);
    let (c1, c2) = d.centers();
    assert!((angular_to_mhz(c1) + 40.0).abs() < 1e-9);
    assert!((angular_to_mhz(c2) - 10.0).abs() < 1e-9);
    let h1 = eval.value_filtered(-40.0, |t| t.j == J52);
    let h2 = eval.value_filtered(10.0, |t| t.j == J52);
    assert!(((h2 / h1) * 16.0 - 1.0).abs() < 1e-2, "height ratio {}", h2 / h1);
}

#[test]
fn dressed_and_bare_converge_with_rabi_frequency() {
    let p = params();
    let gamma_mhz = angular_to_mhz(p.gamma());
    let grid = Grid::default_probe();
    let mut errors = Vec::new();
    for ratio in [5.0, 10.0, 20.0, 50.0] {
        let omega_mhz = ratio * gamma_mhz;
        let pump = PumpConfig::circular(s_for_rabi_mhz(omega_mhz), 0.0);
        let exact = lineshape_circular(&grid, &pump, &p).unwrap();
        let dressed = lineshape_circular_dressed(&grid, &pump, &p).unwrap();
        errors.push(rel_linf(&exact, &dressed));
    }
    println!("dressed vs bare L∞ errors: {errors:?}");
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
    // The deviation is first order in γ/Ω.
    for (err, ratio) in errors.iter().zip([5.0, 10.0, 20.0, 50.0]) {
        assert!(*err < 1.0 / ratio, "Ω/γ = {ratio}: {err}");
    }
}

#[test]
fn linear_dressed_agrees_with_bare_for_strong_drive() {
    let p = params();
    let grid = Grid::default_probe();
    // Weakest sublevel coupling is √(7/28)Ω₀; pick Ω₀ so it is 20γ.
    let omega0_mhz = 20.0 * angular_to_mhz(p.gamma()) / (7.0f64 / 28.0).sqrt();
    let pump = PumpConfig::linear(s_for_rabi_mhz(omega0_mhz), 0.0);
    let pops = steady_state_populations(&pump, &p).unwrap();
    let exact = lineshape_linear(&grid, &pump, &p, &pops).unwrap();
    let dressed = lineshape_linear_dressed(&grid, &pump, &p, &pops).unwrap();
    let err = rel_linf(&exact, &dressed);
    assert!(err < 1.0 / 20.0, "{err}");
}

#[test]
fn linear_sublevel_terms_ordering() {
    let p = params();
    let grid = Grid::default_probe();
    let pump = PumpConfig::linear(36.0, 0.0);
    let pops = steady_state_populations(&pump, &p).unwrap();
    let total = lineshape_linear(&grid, &pump, &p, &pops).unwrap();
    let parts: Vec<f64> = (0..=3)
        .map(|m| lineshape_linear_sublevel(&grid, &pump, &p, &pops, LineModel::Exact, m).unwrap().integral())
        .collect();
    let sum: f64 = parts.iter().sum();
    assert!((sum - total.integral()).abs() / sum < 1e-12);
    assert!(parts[0] > parts[1] / 2.0, "m=0 exceeds each of ±1: {parts:?}");
    assert!(parts[1] > parts[2] && parts[2] > parts[3]);
    assert!(parts[3] / sum < 0.02);
}

#[test]
fn linear_pump_zero_intensity_is_finite() {
    let p = params();
    let grid = Grid::from_range(-20.0, 20.0, 0.1).unwrap();
    let pump = PumpConfig::linear(0.0, 0.0);
    let pops = steady_state_populations(&pump, &p).unwrap();
    let spec = lineshape_linear(&grid, &pump, &p, &pops).unwrap();
    assert!(spec.values.iter().all(|v| v.is_finite() && *v >= 0.0));
}

#[test]
fn linear_dressed_centers_and_symmetry() {
    let p = params();
    let pump = PumpConfig::linear(100.0, 0.0).with_delta_mhz(15.0);
    let eval = Evaluator::new(&pump, &p, None, LineModel::Dressed).unwrap();
    for t in eval.terms() {
        let d = t.dressed().unwrap();
        let (c1, c2) = d.centers();
        assert!((c1 + (pump.delta + d.omega_gen) / 2.0).abs() < 1e-6);
        assert!((c2 + (pump.delta - d.omega_gen) / 2.0).abs() < 1e-6);
    }
    let grid = Grid::from_range(-100.0, 100.0, 0.1).unwrap();
    let resonant = PumpConfig::linear(100.0, 0.0);
    let pops = steady_state_populations(&resonant, &p).unwrap();
    let spec = lineshape(&grid, &resonant, &p, Some(&pops), LineModel::Dressed, Components::Only(J52)).unwrap();
    let n = spec.values.len();
    for i in 0..n / 2 {
        let (a, b) = (spec.values[i], spec.values[n - 1 - i]);
        assert!((a - b).abs() <= 1e-9 * spec.max_value());
    }
}

#[test]
fn dressed_degenerate_limit_is_flagged() {
    let grid = Grid::from_range(-5.0, 5.0, 0.1).unwrap();
    let spec = lineshape_circular_dressed(&grid, &PumpConfig::circular(0.0, 0.0), &params()).unwrap();
    assert!(spec.meta.degenerate);
    let spec = lineshape_circular_dressed(&grid, &PumpConfig::circular(1.0, 0.0), &params()).unwrap();
    assert!(!spec.meta.degenerate);
}

#[test]
fn rejects_coarse_grid_and_wrong_polarization() {
    let p = params();
    let coarse = Grid::from_range(-10.0, 10.0, 0.5).unwrap();
    assert!(lineshape_circular(&coarse, &PumpConfig::circular(1.0, 0.0), &p).is_err());
    let grid = Grid::default_probe();
    assert!(lineshape_circular(&grid, &PumpConfig::linear(1.0, 0.0), &p).is_err());
}

#[test]
fn narrow_line_convolves_to_instrument_width() {
    // Voigt limit: a 0.1 MHz Lorentzian under a 4.5 MHz Gaussian.
    let grid = Grid::from_range(-60.0, 60.0, 0.01).unwrap();
    let hwhm = 0.05;
    let spec = Spectrum::from_fn(grid, |x| hwhm / std::f64::consts::PI / (hwhm * hwhm + x * x));
    let out = convolve_gaussian(&spec, 4.5).unwrap();
    let xs: Vec<f64> = grid.points().collect();
    let w = common::fwhm(&xs, &out.values);
    assert!((w - 4.5).abs() / 4.5 < 0.02, "{w}");
    assert!((out.integral() - spec.integral()).abs() / spec.integral() < 1e-6);
}

#[test]
fn single_precision_spectrum_tracks_double() {
    let p64 = AtomParams::<f64>::default();
    let p32 = AtomParams::<f32>::default();
    let g64 = Grid::from_range(-80.0, 80.0, 0.1).unwrap();
    let g32 = Grid::from_range(-80.0f32, 80.0, 0.1).unwrap();
    let a = lineshape_circular(&g64, &PumpConfig::circular(36.0, 0.0), &p64).unwrap();
    let b = lineshape_circular(&g32, &PumpConfig::circular(36.0f32, 0.0), &p32).unwrap();
    let peak = a.max_value();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - f64::from(*y)).abs() < 1e-4 * peak);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn spectra_are_non_negative(s in 0.0f64..300.0, delta_mhz in -50.0f64..50.0, linear in any::<bool>()) {
        let p = params();
        let grid = Grid::from_range(-250.0, 250.0, 0.2).unwrap();
        let pump = if linear { PumpConfig::linear(s, 0.0) } else { PumpConfig::circular(s, 0.0) }
            .with_delta_mhz(delta_mhz);
        for model in [LineModel::Exact, LineModel::Dressed] {
            let spec = lineshape(&grid, &pump, &p, None, model, Components::All).unwrap();
            prop_assert!(spec.values.iter().all(|v| v.is_finite() && *v >= 0.0));
        }
    }

    #[test]
    fn circular_reflection_symmetry(s in 0.5f64..300.0, delta_mhz in -50.0f64..50.0, x in -200.0f64..200.0) {
        let p = params();
        let plus = Evaluator::new(&PumpConfig::circular(s, 0.0).with_delta_mhz(delta_mhz), &p, None, LineModel::Exact).unwrap();
        let minus = Evaluator::new(&PumpConfig::circular(s, 0.0).with_delta_mhz(-delta_mhz), &p, None, LineModel::Exact).unwrap();
        let a = plus.value_filtered(x, |t| t.j == J52);
        let b = minus.value_filtered(-x, |t| t.j == J52);
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-12));
    }

    #[test]
    fn convolution_preserves_integral(fwhm in 0.0f64..10.0, center in -240.0f64..240.0) {
        let grid = Grid::default_probe();
        let spec = Spectrum::from_fn(grid, |x: f64| 1.0 / (1.0 + (x - center).powi(2)));
        let out = convolve_gaussian(&spec, fwhm).unwrap();
        prop_assert!((out.integral() - spec.integral()).abs() <= 1e-9 * spec.integral());
    }
}

#[test]
fn frequency_helpers_are_consistent() {
    let p = params();
    assert!((angular_to_mhz(p.gamma2) - 5.98).abs() < 1e-12);
    assert!((mhz_to_angular(140.0) / p.gamma2 - 140.0 / 5.98).abs() < 1e-12);
}
