use std::fmt;

use crate::error::{Error, Result};

/// An integer or half-integer quantum number, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    /// `twice / 2`.
    #[inline]
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    /// The integer `n`.
    #[inline]
    pub const fn int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    /// The half-odd value `numer / 2`; `HalfInt::half(5)` is 5/2.
    #[inline]
    pub const fn half(numer: i32) -> Self {
        HalfInt(numer)
    }

    #[inline]
    pub const fn twice(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    #[inline]
    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// All projections `-self, -self + 1, ..., self`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> + Clone {
        (-self.0..=self.0).step_by(2).map(HalfInt)
    }

    /// Checks that `self` is a valid magnitude and `m` a valid projection of it.
    pub fn check_projection(self, m: HalfInt) -> Result<()> {
        if self.0 < 0 {
            return Err(Error::input(format!("negative angular momentum {self}")));
        }
        if m.0.abs() > self.0 {
            return Err(Error::input(format!("projection {m} exceeds magnitude {self}")));
        }
        if (self.0 - m.0) % 2 != 0 {
            return Err(Error::input(format!("projection {m} has wrong parity for {self}")));
        }
        Ok(())
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i32> for HalfInt {
    fn from(n: i32) -> Self {
        HalfInt::int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
