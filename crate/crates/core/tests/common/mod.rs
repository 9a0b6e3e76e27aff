//! Test-only numerical oracles, independent of the library's code paths.
#![allow(dead_code)]

/// Adaptive Simpson quadrature of `f` over `[a, b]`, split at `breaks`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.windows(2).map(|w| simpson(f, w[0], w[1], tol / pts.len() as f64)).sum()
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || (delta.abs() <= 15.0 * tol && (b - a) < 1.0) {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Full width at half maximum of sampled data by linear interpolation
/// around the global maximum.
pub fn fwhm(xs: &[f64], ys: &[f64]) -> f64 {
    let (imax, &ymax) = ys
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let half = ymax / 2.0;
    let mut i = imax;
    while ys[i] > half {
        i -= 1;
    }
    let left = xs[i] + (half - ys[i]) / (ys[i + 1] - ys[i]) * (xs[i + 1] - xs[i]);
    let mut k = imax;
    while ys[k] > half {
        k += 1;
    }
    let right = xs[k - 1] + (half - ys[k - 1]) / (ys[k] - ys[k - 1]) * (xs[k] - xs[k - 1]);
    right - left
}
