//! Line-strength weights of the 44D fine-structure components for the
//! σ⁺-pumped and π-pumped excitation paths.
//!
//! Both weights share the recoupling prefactor
//! `18 {2 1 1; 3/2 1/2 J}² (2J+1)` and a sum over the Rydberg hyperfine
//! levels `F` of `⟨4 m; 1 q | F m+q⟩² {J 1 3/2; 4 5/2 F}²`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::exact::rational_to_f64;
use super::halfint::HalfInt;
use super::wigner::{clebsch_gordan, six_j, triangle};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orbital angular momentum of the Rydberg D state.
const L_RYDBERG: HalfInt = HalfInt::int(2);
/// Orbital angular momentum of the intermediate P state.
const L_INTERMEDIATE: HalfInt = HalfInt::int(1);
/// Total electronic angular momentum of the intermediate 5P₃/₂ state.
const J_INTERMEDIATE: HalfInt = HalfInt::half(3);
const ELECTRON_SPIN: HalfInt = HalfInt::half(1);
/// ⁸⁵Rb nuclear spin.
const NUCLEAR_SPIN: HalfInt = HalfInt::half(5);
/// Hyperfine level of the intermediate state driven by the pump.
const F_INTERMEDIATE: HalfInt = HalfInt::int(4);
/// Rank of the dipole operator.
const DIPOLE: HalfInt = HalfInt::int(1);

/// The Rydberg fine-structure components reached by the probe.
pub const RYDBERG_J: [HalfInt; 2] = [HalfInt::half(3), HalfInt::half(5)];

fn check_j(j: HalfInt) -> Result<()> {
    if RYDBERG_J.contains(&j) {
        Ok(())
    } else {
        Err(Error::domain(format!("Rydberg J must be 3/2 or 5/2, got {j}")))
    }
}

fn prefactor(j: HalfInt) -> Result<BigRational> {
    let s = six_j(L_RYDBERG, L_INTERMEDIATE, DIPOLE, J_INTERMEDIATE, ELECTRON_SPIN, j)?;
    // 2J + 1 is `twice + 1`.
    Ok(BigRational::from_integer(BigInt::from(18 * (j.twice() + 1))) * s.sq())
}

/// Σ_F Σ_q ⟨4 m; 1 q | F m+q⟩² {J 1 3/2; 4 5/2 F}², over the `F` allowed by
/// both the coupling `4 ⊗ 1` and the 6-j triads.
fn hyperfine_sum(j: HalfInt, m: HalfInt, qs: &[i32]) -> Result<BigRational> {
    let f_lo = (F_INTERMEDIATE - DIPOLE).abs().twice();
    let f_hi = (F_INTERMEDIATE + DIPOLE).twice();
    let mut sum = BigRational::zero();
    for tf in (f_lo..=f_hi).step_by(2) {
        let f = HalfInt::from_twice(tf);
        if !triangle(j, NUCLEAR_SPIN, f) {
            continue;
        }
        let recouple = six_j(j, DIPOLE, J_INTERMEDIATE, F_INTERMEDIATE, NUCLEAR_SPIN, f)?.sq();
        let mut strength = BigRational::zero();
        for &q in qs {
            let q = HalfInt::int(q);
            let mf = m + q;
            if mf.abs() > f {
                continue;
            }
            strength += clebsch_gordan(F_INTERMEDIATE, m, DIPOLE, q, f, mf)?.sq();
        }
        sum += strength * recouple;
    }
    Ok(sum)
}

/// Exact weight of component `J` for σ⁺ pumping, where the probe starts from
/// the stretched state `F′=4, m=4` with σ∓ components.
pub fn weight_circular_exact(j: HalfInt) -> Result<BigRational> {
    check_j(j)?;
    Ok(prefactor(j)? * hyperfine_sum(j, HalfInt::int(4), &[-1, 1])?)
}

/// Exact weight of component `J` for π pumping and π probing from the
/// intermediate sublevel `m`.
pub fn weight_linear_exact(j: HalfInt, m: HalfInt) -> Result<BigRational> {
    check_j(j)?;
    if !m.is_integer() || m.abs() > HalfInt::int(3) {
        return Err(Error::domain(format!("sublevel m must be an integer with |m| ≤ 3, got {m}")));
    }
    Ok(prefactor(j)? * hyperfine_sum(j, m, &[0])?)
}

pub fn weight_circular<T: Real>(j: HalfInt) -> Result<T> {
    weight_circular_exact(j).map(|w| T::lit(rational_to_f64(&w)))
}

pub fn weight_linear<T: Real>(j: HalfInt, m: HalfInt) -> Result<T> {
    weight_linear_exact(j, m).map(|w| T::lit(rational_to_f64(&w)))
}
