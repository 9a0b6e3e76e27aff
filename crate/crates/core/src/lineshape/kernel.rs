//! Pointwise response of one driven pair, in the bare and dressed bases.
//!
//! All quantities here are angular frequencies (rad/s); responses are
//! densities per rad/s whose integral over the probe detuning is π.

use num_complex::Complex;

use crate::pumping::AtomParams;
use crate::scalar::Real;

/// `μ₂₃ = (γ₂+γ₃)/2 + iδ′` and `μ₁₃ = γ₃/2 + i(δ + δ′)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexDenominators<T> {
    pub mu23: Complex<T>,
    pub mu13: Complex<T>,
}

impl<T: Real> ComplexDenominators<T> {
    pub fn new(delta_prime: T, delta: T, params: &AtomParams<T>) -> Self {
        let two = T::lit(2.0);
        ComplexDenominators {
            mu23: Complex::new((params.gamma2 + params.gamma3) / two, delta_prime),
            mu13: Complex::new(params.gamma3 / two, delta + delta_prime),
        }
    }

    /// `Re[μ₂₃ / (μ₂₃μ₁₃ + Ω²/4)]` for a pair driven at Rabi frequency `omega`.
    pub fn response(&self, omega: T) -> T {
        let denom = self.mu23 * self.mu13 + Complex::new(omega * omega / T::lit(4.0), T::zero());
        (self.mu23 / denom).re
    }
}

/// Bare-basis response of a pair driven at Rabi frequency `omega`, detuning `delta`.
#[inline]
pub fn bare_response<T: Real>(delta_prime: T, delta: T, omega: T, params: &AtomParams<T>) -> T {
    ComplexDenominators::new(delta_prime, delta, params).response(omega)
}

/// Dressed-state parameters of one driven transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedParams<T = f64> {
    /// Generalized Rabi frequency `Ω = √(Ω²_drive + δ²)`.
    pub omega_gen: T,
    /// Mixing angle with `cos²θ = ½(1 + δ/Ω)`.
    pub theta: T,
    pub gamma1: T,
    pub gamma2_d: T,
    /// Pump detuning the parameters were built for.
    pub delta: T,
}

impl<T: Real> DressedParams<T> {
    /// `None` when the generalized Rabi frequency vanishes and θ is undefined.
    pub fn new(omega_drive: T, delta: T, params: &AtomParams<T>) -> Option<Self> {
        let omega_gen = (omega_drive * omega_drive + delta * delta).sqrt();
        if !(omega_gen > T::zero()) {
            return None;
        }
        let half = T::lit(0.5);
        let cos2 = (half * (T::one() + delta / omega_gen)).max(T::zero()).min(T::one());
        let theta = cos2.sqrt().acos();
        let sin2 = T::one() - cos2;
        let narrow = params.gamma3 * half;
        let broad = (params.gamma2 + params.gamma3) * half;
        Some(DressedParams {
            omega_gen,
            theta,
            gamma1: narrow * cos2 + broad * sin2,
            gamma2_d: narrow * sin2 + broad * cos2,
            delta,
        })
    }

    pub fn cos2(&self) -> T {
        let c = self.theta.cos();
        c * c
    }

    pub fn sin2(&self) -> T {
        let s = self.theta.sin();
        s * s
    }

    /// Probe detunings `-(δ+Ω)/2` and `-(δ-Ω)/2` of the `cos²θ` and `sin²θ`
    /// components.
    pub fn centers(&self) -> (T, T) {
        let half = T::lit(0.5);
        (-(self.delta + self.omega_gen) * half, -(self.delta - self.omega_gen) * half)
    }

    /// Area of the `sin²θ` component over the `cos²θ` component, `tan²θ`.
    pub fn tan2(&self) -> T {
        let t = self.theta.tan();
        t * t
    }

    /// Peak-height ratio of the `sin²θ` component to the `cos²θ` component.
    pub fn amplitude_ratio(&self) -> T {
        (self.sin2() / self.gamma2_d) / (self.cos2() / self.gamma1)
    }

    /// Two-Lorentzian response.
    pub fn response(&self, delta_prime: T) -> T {
        let (c1, c2) = self.centers();
        let lor = |gamma: T, x: T| gamma / (gamma * gamma + x * x);
        self.cos2() * lor(self.gamma1, delta_prime - c1) + self.sin2() * lor(self.gamma2_d, delta_prime - c2)
    }
}
