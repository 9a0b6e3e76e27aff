//! Small dense minimizers: Levenberg–Marquardt for least squares with an
//! analytic Jacobian, and Nelder–Mead simplex descent.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Residuals and Jacobian columns (`jac[k][i] = ∂rᵢ/∂pₖ`) at one point.
pub struct Linearization<T> {
    pub residuals: Vec<T>,
    pub jacobian: Vec<Vec<T>>,
}

#[derive(Clone, Debug)]
pub struct LmOutcome<T> {
    pub params: Vec<T>,
    /// `Σ rᵢ²` at `params`.
    pub cost: T,
    pub iterations: usize,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Solves `a x = b` for symmetric positive definite `a` by Cholesky.
fn cholesky_solve<T: Real>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = b.len();
    let mut l = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum = sum - l[i][k] * l[j][k];
            }
            if i == j {
                if !(sum > T::zero()) {
                    return None;
                }
                l[i][i] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum = sum - l[i][k] * y[k];
        }
        y[i] = sum / l[i][i];
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum = sum - l[k][i] * x[k];
        }
        x[i] = sum / l[i][i];
    }
    Some(x)
}

/// Levenberg–Marquardt with Marquardt's diagonal scaling.
///
/// Trial points are projected into the box `bounds` (per-parameter
/// `(lower, upper)`). Stops when a step no longer changes the parameters or
/// cost at working precision, or when no damping produces a decrease (a
/// stationary point). Fails only on non-finite residuals or when `max_iter`
/// is exhausted.
pub fn levenberg_marquardt<T: Real>(
    p0: &[T],
    bounds: &[(T, T)],
    max_iter: usize,
    mut linearize: impl FnMut(&[T]) -> Linearization<T>,
) -> Result<LmOutcome<T>> {
    let n = p0.len();
    let mut p = p0.to_vec();
    let mut lin = linearize(&p);
    let mut cost = dot(&lin.residuals, &lin.residuals);
    if !cost.is_finite() {
        return Err(Error::Numerical {
            message: "non-finite residuals at the starting point".into(),
            best: p.iter().map(|v| v.to_f64_lossy()).collect(),
            residual: f64::NAN,
        });
    }
    let mut lambda = T::lit(1e-3);
    let eps = T::epsilon();
    for iter in 0..max_iter {
        let mut jtj = vec![vec![T::zero(); n]; n];
        let mut grad = vec![T::zero(); n];
        for a in 0..n {
            grad[a] = dot(&lin.jacobian[a], &lin.residuals);
            for b in 0..=a {
                let v = dot(&lin.jacobian[a], &lin.jacobian[b]);
                jtj[a][b] = v;
                jtj[b][a] = v;
            }
        }
        // Parameters held at a bound by the gradient drop out of the step.
        let active: Vec<bool> = (0..n)
            .map(|k| {
                let (lo, hi) = bounds[k];
                (p[k] <= lo && grad[k] > T::zero()) || (p[k] >= hi && grad[k] < T::zero())
            })
            .collect();
        for k in (0..n).filter(|&k| active[k]) {
            grad[k] = T::zero();
            for b in 0..n {
                jtj[k][b] = T::zero();
                jtj[b][k] = T::zero();
            }
            jtj[k][k] = T::one();
        }
        let diag: Vec<T> = (0..n).map(|k| jtj[k][k].max(T::min_positive_value())).collect();

        let mut improved = false;
        while lambda < T::lit(1e16) {
            let mut damped = jtj.clone();
            for k in 0..n {
                damped[k][k] = damped[k][k] + lambda * diag[k];
            }
            let neg: Vec<T> = grad.iter().map(|&g| -g).collect();
            let Some(step) = cholesky_solve(&damped, &neg) else {
                lambda = lambda * T::lit(10.0);
                continue;
            };
            let trial: Vec<T> = p
                .iter()
                .zip(&step)
                .zip(bounds)
                .map(|((&a, &b), &(lo, hi))| (a + b).max(lo).min(hi))
                .collect();
            let trial_lin = linearize(&trial);
            let trial_cost = dot(&trial_lin.residuals, &trial_lin.residuals);
            if trial_cost.is_finite() && trial_cost <= cost {
                let tiny_step = trial
                    .iter()
                    .zip(&p)
                    .all(|(&t, &v)| (t - v).abs() <= T::lit(4.0) * eps * (v.abs() + T::one()));
                let tiny_gain = cost - trial_cost <= eps * cost;
                p = trial;
                lin = trial_lin;
                cost = trial_cost;
                lambda = (lambda / T::lit(10.0)).max(T::lit(1e-12));
                if tiny_step || tiny_gain {
                    return Ok(LmOutcome { params: p, cost, iterations: iter + 1 });
                }
                improved = true;
                break;
            }
            lambda = lambda * T::lit(10.0);
        }
        if !improved {
            return Ok(LmOutcome { params: p, cost, iterations: iter + 1 });
        }
    }
    Err(Error::Numerical {
        message: format!("least-squares fit did not converge in {max_iter} iterations"),
        best: p.iter().map(|v| v.to_f64_lossy()).collect(),
        residual: cost.sqrt().to_f64_lossy(),
    })
}

#[derive(Clone, Debug)]
pub struct SimplexOutcome<T> {
    pub point: Vec<T>,
    pub value: T,
    pub iterations: usize,
}

/// Nelder–Mead descent from `x0` with initial edge lengths `steps`.
///
/// Converges when the simplex values agree to `ftol` (relative) or its
/// vertices agree to `xtol` (relative to `|x| + 1`). Fully deterministic.
pub fn nelder_mead<T: Real>(
    x0: &[T],
    steps: &[T],
    ftol: T,
    xtol: T,
    max_iter: usize,
    mut f: impl FnMut(&[T]) -> T,
) -> Result<SimplexOutcome<T>> {
    let n = x0.len();
    let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] = x[k] + steps[k];
        let v = f(&x);
        simplex.push((x, v));
    }
    let order = |s: &mut Vec<(Vec<T>, T)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Greater));
    };
    let combine = |a: &[T], b: &[T], t: T| -> Vec<T> {
        a.iter().zip(b).map(|(&x, &y)| x + t * (y - x)).collect()
    };

    for iter in 0..max_iter {
        order(&mut simplex);
        let (best, worst) = (simplex[0].1, simplex[n].1);
        let f_spread = (worst - best).abs() <= ftol * best.abs() + T::min_positive_value();
        let x_spread = simplex[1..].iter().all(|(x, _)| {
            x.iter()
                .zip(&simplex[0].0)
                .all(|(&a, &b)| (a - b).abs() <= xtol * (b.abs() + T::one()))
        });
        if f_spread || x_spread {
            let (point, value) = simplex.swap_remove(0);
            return Ok(SimplexOutcome { point, value, iterations: iter });
        }

        let mut centroid = vec![T::zero(); n];
        for (x, _) in &simplex[..n] {
            for (c, &v) in centroid.iter_mut().zip(x) {
                *c = *c + v;
            }
        }
        let inv = T::one() / T::from_usize_lossy(n);
        centroid.iter_mut().for_each(|c| *c = *c * inv);

        let xr = combine(&centroid, &simplex[n].0, -alpha);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = combine(&centroid, &simplex[n].0, -gamma);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let xc = combine(&centroid, &xr, rho);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = combine(&centroid, &simplex[n].0, rho);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&x_best, &vertex.0, sigma);
            let v = f(&x);
            *vertex = (x, v);
        }
    }
    order(&mut simplex);
    Err(Error::Numerical {
        message: format!("simplex search did not converge in {max_iter} iterations"),
        best: simplex[0].0.iter().map(|v| v.to_f64_lossy()).collect(),
        residual: simplex[0].1.to_f64_lossy(),
    })
}
