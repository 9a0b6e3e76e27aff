use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Real;

/// Exact value of the form `s·√r` with sign `s ∈ {-1, 0, 1}` and rational `r ≥ 0`.
///
/// Stored as the single rational `s·r`, which keeps products exact and makes
/// squaring free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignedSqrt(BigRational);

impl SignedSqrt {
    pub fn zero() -> Self {
        SignedSqrt(BigRational::zero())
    }

    pub fn one() -> Self {
        SignedSqrt(BigRational::one())
    }

    /// `coeff · √radicand`.
    pub fn new(coeff: BigRational, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        let sign = match coeff.cmp(&BigRational::zero()) {
            Ordering::Less => -BigRational::one(),
            Ordering::Equal => return Self::zero(),
            Ordering::Greater => BigRational::one(),
        };
        SignedSqrt(sign * &coeff * &coeff * radicand)
    }

    /// Builds directly from the signed square `s·r`.
    pub fn from_signed_sq(signed_sq: BigRational) -> Self {
        SignedSqrt(signed_sq)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        self.0.cmp(&BigRational::zero())
    }

    /// The exact square of the value.
    pub fn sq(&self) -> BigRational {
        self.0.abs()
    }

    pub fn signed_sq(&self) -> &BigRational {
        &self.0
    }

    /// Exact sum of terms that are all rational multiples of one square root.
    ///
    /// Returns `None` when two nonzero terms are incommensurate (their
    /// squares differ by a non-square rational factor), since the sum is
    /// then not of the form `s·√r`.
    pub fn sum_commensurate<'a>(terms: impl IntoIterator<Item = &'a SignedSqrt>) -> Option<SignedSqrt> {
        let mut base: Option<BigRational> = None;
        let mut coeff = BigRational::zero();
        for t in terms {
            if t.is_zero() {
                continue;
            }
            let r0 = base.get_or_insert_with(|| t.sq()).clone();
            let q = rational_sqrt(&(t.sq() / r0))?;
            coeff = if t.0.is_negative() { coeff - q } else { coeff + q };
        }
        Some(match base {
            Some(r0) => SignedSqrt::new(coeff, r0),
            None => SignedSqrt::zero(),
        })
    }

    pub fn to_f64(&self) -> f64 {
        let mag = rational_to_f64(&self.sq()).sqrt();
        match self.sign() {
            Ordering::Less => -mag,
            Ordering::Equal => 0.0,
            Ordering::Greater => mag,
        }
    }

    pub fn to_real<T: Real>(&self) -> T {
        T::lit(self.to_f64())
    }
}

impl Mul for &SignedSqrt {
    type Output = SignedSqrt;
    fn mul(self, rhs: &SignedSqrt) -> SignedSqrt {
        SignedSqrt(&self.0 * &rhs.0)
    }
}

impl Mul for SignedSqrt {
    type Output = SignedSqrt;
    fn mul(self, rhs: SignedSqrt) -> SignedSqrt {
        &self * &rhs
    }
}

impl From<i64> for SignedSqrt {
    fn from(n: i64) -> Self {
        SignedSqrt::new(BigRational::from_integer(n.into()), BigRational::one())
    }
}

impl fmt::Display for SignedSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            Ordering::Equal => write!(f, "0"),
            Ordering::Less => write!(f, "-√({})", self.sq()),
            Ordering::Greater => write!(f, "√({})", self.sq()),
        }
    }
}

/// `√r` when `r ≥ 0` is the square of a rational.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let root = |n: &BigInt| {
        let k = n.sqrt();
        (&k * &k == *n).then_some(k)
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

/// Converts an exact rational to the nearest `f64`, also for numerators and
/// denominators too large for `f64` individually.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Scale both parts down to ~60 significant bits before dividing.
    let shift = |n: &BigInt| n.bits().saturating_sub(60);
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (shift(n), shift(d));
    let nf = (n >> sn).to_f64().unwrap_or(f64::NAN);
    let df = (d >> sd).to_f64().unwrap_or(f64::NAN);
    nf / df * 2f64.powi(sn as i32 - sd as i32)
}
