//! Clebsch-Gordan coefficients and 6-j symbols from the Racah closed forms,
//! evaluated in exact rational arithmetic.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::SignedSqrt;
use super::halfint::HalfInt;
use crate::error::{Error, Result};

/// Largest angular momentum accepted by [`clebsch_gordan`] and [`six_j`].
pub const J_MAX: HalfInt = HalfInt::int(20);

const FACTORIAL_LEN: usize = 4 * (J_MAX.twice() as usize / 2) + 2;

static FACTORIALS: LazyLock<Vec<BigInt>> = LazyLock::new(|| {
    let mut out = Vec::with_capacity(FACTORIAL_LEN);
    out.push(BigInt::one());
    for n in 1..FACTORIAL_LEN {
        let next = &out[n - 1] * BigInt::from(n);
        out.push(next);
    }
    out
});

/// `n!` for a non-negative integer given as twice its value.
fn fact(twice_n: i32) -> &'static BigInt {
    debug_assert!(twice_n >= 0 && twice_n % 2 == 0, "factorial of {twice_n}/2");
    &FACTORIALS[(twice_n / 2) as usize]
}

fn check_range(j: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::input(format!("negative angular momentum {j}")));
    }
    if j > J_MAX {
        return Err(Error::domain(format!("angular momentum {j} above supported maximum {J_MAX}")));
    }
    Ok(())
}

/// `|a - b| ≤ c ≤ a + b` with `a + b + c` integer.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    (a + b + c) % 2 == 0 && c >= (a - b).abs() && c <= a + b
}

/// Triangle coefficient `(a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!`.
fn delta(a: HalfInt, b: HalfInt, c: HalfInt) -> BigRational {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    let num = fact(a + b - c) * fact(a - b + c) * fact(-a + b + c);
    BigRational::new(num, fact(a + b + c + 2).clone())
}

fn phase(k: i32) -> BigInt {
    if k % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Clebsch-Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩` (Condon-Shortley phase).
///
/// Exactly zero when `M ≠ m1 + m2` or `(j1, j2, J)` violates the triangle rule.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<SignedSqrt> {
    for (jj, mm) in [(j1, m1), (j2, m2), (j, m)] {
        check_range(jj)?;
        jj.check_projection(mm)?;
    }
    if m != m1 + m2 || !triangle(j1, j2, j) {
        return Ok(SignedSqrt::zero());
    }
    let (tj1, tm1, tj2, tm2, tj, tm) =
        (j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice());

    let radicand = BigRational::from_integer(BigInt::from(tj + 1))
        * delta(j1, j2, j)
        * BigRational::from_integer(
            fact(tj1 + tm1)
                * fact(tj1 - tm1)
                * fact(tj2 + tm2)
                * fact(tj2 - tm2)
                * fact(tj + tm)
                * fact(tj - tm),
        );

    // Summation index k in twice-units.
    let k_min = 0.max(tj2 - tj - tm1).max(tj1 - tj + tm2);
    let k_max = (tj1 + tj2 - tj).min(tj1 - tm1).min(tj2 + tm2);
    let mut sum = BigRational::zero();
    for k in (k_min..=k_max).step_by(2) {
        let den = fact(k)
            * fact(tj1 + tj2 - tj - k)
            * fact(tj1 - tm1 - k)
            * fact(tj2 + tm2 - k)
            * fact(tj - tj2 + tm1 + k)
            * fact(tj - tj1 - tm2 + k);
        sum += BigRational::new(phase(k / 2), den);
    }
    Ok(SignedSqrt::new(sum, radicand))
}

/// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}` by the Racah formula.
///
/// Exactly zero when any of the triads `(j1 j2 j3)`, `(j1 j5 j6)`,
/// `(j4 j2 j6)`, `(j4 j5 j3)` violates the triangle rule.
pub fn six_j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Result<SignedSqrt> {
    for jj in [j1, j2, j3, j4, j5, j6] {
        check_range(jj)?;
    }
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if !triads.iter().all(|&(a, b, c)| triangle(a, b, c)) {
        return Ok(SignedSqrt::zero());
    }
    let radicand = triads
        .iter()
        .fold(BigRational::one(), |acc, &(a, b, c)| acc * delta(a, b, c));

    let a = triads.map(|(x, y, z)| (x + y + z).twice());
    let b = [
        (j1 + j2 + j4 + j5).twice(),
        (j2 + j3 + j5 + j6).twice(),
        (j3 + j1 + j6 + j4).twice(),
    ];
    let t_min = *a.iter().max().unwrap();
    let t_max = *b.iter().min().unwrap();
    let mut sum = BigRational::zero();
    for t in (t_min..=t_max).step_by(2) {
        let den = a.iter().map(|&ai| fact(t - ai)).product::<BigInt>()
            * b.iter().map(|&bi| fact(bi - t)).product::<BigInt>();
        sum += BigRational::new(phase(t / 2) * fact(t + 2), den);
    }
    Ok(SignedSqrt::new(sum, radicand))
}
