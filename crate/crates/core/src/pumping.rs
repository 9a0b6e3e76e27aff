//! Steady-state Zeeman populations of the ground `F=3` and intermediate
//! `F′=4` manifolds under the pump field.
//!
//! Under π pumping each ground sublevel `m` is coupled to exactly one excited
//! sublevel `m′ = m`, so the stationary state follows from population rate
//! equations: every driven pair exchanges population at the two-level rate
//! `R_m = γ₂ (Ω_ℓ(m)²/4) / (δ² + γ²)` and each excited sublevel decays at γ₂
//! into the ground sublevels `m′-1, m′, m′+1` with Clebsch-Gordan branching.
//! The transition is treated as closed and the Rydberg level plays no role.

use crate::angular::{clebsch_gordan, HalfInt};
use crate::error::{Error, Result};
use crate::scalar::{mhz_to_angular, Real};

/// Which Rydberg fine-structure component lies at higher probe frequency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FineStructureOrder {
    /// `D₃/₂` lies above `D₅/₂`.
    J32Above,
    /// `D₃/₂` lies below `D₅/₂`.
    J32Below,
}

impl FineStructureOrder {
    /// `+1` when `D₃/₂` is above `D₅/₂`, `-1` otherwise.
    pub fn sign(self) -> i32 {
        match self {
            FineStructureOrder::J32Above => 1,
            FineStructureOrder::J32Below => -1,
        }
    }

    pub fn from_sign(sign: i32) -> Option<Self> {
        match sign {
            1 => Some(FineStructureOrder::J32Above),
            -1 => Some(FineStructureOrder::J32Below),
            _ => None,
        }
    }
}

/// Fixed physical constants of the 5S₁/₂ – 5P₃/₂ – 44D ladder of ⁸⁵Rb.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomParams<T = f64> {
    /// Decay rate of the intermediate level, rad/s.
    pub gamma2: T,
    /// Decay rate of the Rydberg levels, s⁻¹.
    pub gamma3: T,
    /// Saturation intensity of the pump transition, mW/cm².
    pub i_sat: T,
    /// Fine-structure separation of 44D₃/₂ and 44D₅/₂, MHz.
    pub fs_separation: T,
    pub fs_order: FineStructureOrder,
    pub f_ground: HalfInt,
    pub f_excited: HalfInt,
}

impl<T: Real> Default for AtomParams<T> {
    fn default() -> Self {
        AtomParams {
            gamma2: mhz_to_angular(T::lit(5.98)),
            gamma3: T::lit(16e3),
            i_sat: T::lit(1.64),
            fs_separation: T::lit(140.0),
            fs_order: FineStructureOrder::J32Below,
            f_ground: HalfInt::int(3),
            f_excited: HalfInt::int(4),
        }
    }
}

impl<T: Real> AtomParams<T> {
    /// `γ = γ₂/2`.
    pub fn gamma(&self) -> T {
        self.gamma2 / T::lit(2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma2 > T::zero()) || !self.gamma2.is_finite() {
            return Err(Error::input("gamma2 must be positive"));
        }
        if !(self.gamma3 >= T::zero()) || !self.gamma3.is_finite() {
            return Err(Error::input("gamma3 must be non-negative"));
        }
        if !(self.fs_separation > T::zero()) {
            return Err(Error::input("fs_separation must be positive"));
        }
        if !(self.i_sat > T::zero()) {
            return Err(Error::input("i_sat must be positive"));
        }
        if self.f_ground != HalfInt::int(3) || self.f_excited != HalfInt::int(4) {
            return Err(Error::domain("only the F=3 → F′=4 pump transition is modelled"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarization {
    CircularPlus,
    Linear,
}

/// Pump polarization, intensity and detuning.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PumpConfig<T = f64> {
    pub polarization: Polarization,
    /// Intensity in units of the saturation intensity.
    pub s: T,
    /// Pump detuning `ω_pump − ω₂₁`, rad/s.
    pub delta: T,
}

impl<T: Real> PumpConfig<T> {
    pub fn circular(s: T, delta: T) -> Self {
        PumpConfig { polarization: Polarization::CircularPlus, s, delta }
    }

    pub fn linear(s: T, delta: T) -> Self {
        PumpConfig { polarization: Polarization::Linear, s, delta }
    }

    /// Same configuration with the detuning given in MHz.
    pub fn with_delta_mhz(mut self, delta_mhz: T) -> Self {
        self.delta = mhz_to_angular(delta_mhz);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s >= T::zero()) || !self.s.is_finite() {
            return Err(Error::input(format!("intensity ratio s must be finite and ≥ 0, got {}", self.s)));
        }
        if !self.delta.is_finite() {
            return Err(Error::input("pump detuning must be finite"));
        }
        Ok(())
    }
}

/// Stationary populations of the ground `F=3` and excited `F′=4` sublevels.
#[derive(Clone, Debug, PartialEq)]
pub struct SublevelPopulations<T = f64> {
    /// Index `m + 3`, `m ∈ -3..=3`.
    ground: [T; 7],
    /// Index `m′ + 4`, `m′ ∈ -4..=4`.
    excited: [T; 9],
}

impl<T: Real> SublevelPopulations<T> {
    fn zeros() -> Self {
        SublevelPopulations { ground: [T::zero(); 7], excited: [T::zero(); 9] }
    }

    /// Unpolarized ground state.
    pub fn unpolarized() -> Self {
        let mut p = Self::zeros();
        p.ground = [T::one() / T::lit(7.0); 7];
        p
    }

    /// Population of ground sublevel `m`; zero outside `-3..=3`.
    pub fn ground(&self, m: i32) -> T {
        if m.abs() <= 3 {
            self.ground[(m + 3) as usize]
        } else {
            T::zero()
        }
    }

    /// Population of excited sublevel `m′`; zero outside `-4..=4`.
    pub fn excited(&self, m: i32) -> T {
        if m.abs() <= 4 {
            self.excited[(m + 4) as usize]
        } else {
            T::zero()
        }
    }

    pub fn ground_total(&self) -> T {
        self.ground.iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn excited_total(&self) -> T {
        self.excited.iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn total(&self) -> T {
        self.ground_total() + self.excited_total()
    }
}

/// Stretched-transition Rabi frequency `Ω₀ = γ₂ √(s/2)`.
pub fn rabi_from_intensity<T: Real>(s: T, params: &AtomParams<T>) -> Result<T> {
    if !(s >= T::zero()) {
        return Err(Error::input(format!("intensity ratio s must be ≥ 0, got {s}")));
    }
    Ok(params.gamma2 * (s / T::lit(2.0)).sqrt())
}

/// Squared `⟨3 m; 1 0 | 4 m⟩`, the relative π coupling strength of sublevel `m`.
pub fn pi_coupling_strength<T: Real>(m: HalfInt) -> Result<T> {
    if !m.is_integer() || m.abs() > HalfInt::int(3) {
        return Err(Error::domain(format!("ground sublevel must satisfy |m| ≤ 3, got {m}")));
    }
    let c = clebsch_gordan(HalfInt::int(3), m, HalfInt::int(1), HalfInt::ZERO, HalfInt::int(4), m)?;
    Ok(T::lit(crate::angular::rational_to_f64(&c.sq())))
}

/// π-pump Rabi frequency of ground sublevel `m`, `Ω_ℓ(m) = ⟨3 m; 1 0 | 4 m⟩ Ω₀`.
pub fn sublevel_rabi<T: Real>(m: HalfInt, omega0: T) -> Result<T> {
    Ok(pi_coupling_strength::<T>(m)?.sqrt() * omega0)
}

/// Excited fraction of a closed two-level pair in steady state,
/// `(Ω²/4) / (δ² + γ² + Ω²/2)` with `γ = γ₂/2`.
pub fn two_level_excited_fraction<T: Real>(omega: T, delta: T, gamma2: T) -> T {
    let gamma = gamma2 / T::lit(2.0);
    let quarter = omega * omega / T::lit(4.0);
    if quarter == T::zero() {
        return T::zero();
    }
    quarter / (delta * delta + gamma * gamma + quarter * T::lit(2.0))
}

/// σ⁺ pumping: everything ends up in the stretched pair `m=3 ↔ m′=4`.
pub fn circular_steady_state<T: Real>(
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
) -> Result<SublevelPopulations<T>> {
    pump.validate()?;
    let omega0 = rabi_from_intensity(pump.s, params)?;
    let upper = two_level_excited_fraction(omega0, pump.delta, params.gamma2);
    let mut p = SublevelPopulations::zeros();
    p.ground[6] = T::one() - upper;
    p.excited[8] = upper;
    Ok(p)
}

const N_GROUND: usize = 7;
const N_STATES: usize = 7 + 9;

/// Stationary populations under a π pump.
///
/// At `s = 0` the rate matrix is degenerate and the unpolarized ground state
/// is returned.
pub fn steady_state_populations<T: Real>(
    pump: &PumpConfig<T>,
    params: &AtomParams<T>,
) -> Result<SublevelPopulations<T>> {
    pump.validate()?;
    params.validate()?;
    if pump.polarization != Polarization::Linear {
        return Err(Error::input("steady_state_populations requires a linear (π) pump"));
    }
    if pump.s == T::zero() {
        return Ok(SublevelPopulations::unpolarized());
    }

    let g = |m: i32| (m + 3) as usize;
    let e = |m: i32| N_GROUND + (m + 4) as usize;
    let gamma2 = params.gamma2;
    let gamma = params.gamma();
    let omega0 = rabi_from_intensity(pump.s, params)?;
    let detuning_term = pump.delta * pump.delta + gamma * gamma;

    // rate[i][j]: d ρ_i / dt contribution from ρ_j.
    let mut rate = [[T::zero(); N_STATES]; N_STATES];
    for m in -3..=3 {
        let omega = sublevel_rabi(HalfInt::int(m), omega0)?;
        let r = gamma2 * omega * omega / T::lit(4.0) / detuning_term;
        let (gi, ei) = (g(m), e(m));
        rate[gi][gi] = rate[gi][gi] - r;
        rate[ei][gi] = rate[ei][gi] + r;
        rate[ei][ei] = rate[ei][ei] - r;
        rate[gi][ei] = rate[gi][ei] + r;
    }
    for mp in -4..=4 {
        let ei = e(mp);
        rate[ei][ei] = rate[ei][ei] - gamma2;
        for q in -1..=1 {
            let m = mp - q;
            if m.abs() > 3 {
                continue;
            }
            let branch = clebsch_gordan(
                HalfInt::int(3),
                HalfInt::int(m),
                HalfInt::int(1),
                HalfInt::int(q),
                HalfInt::int(4),
                HalfInt::int(mp),
            )?;
            let b = T::lit(crate::angular::rational_to_f64(&branch.sq()));
            rate[g(m)][ei] = rate[g(m)][ei] + gamma2 * b;
        }
    }

    // Replace the first balance equation by the normalization Σρ = 1.
    let mut rhs = [T::zero(); N_STATES];
    rate[0] = [T::one(); N_STATES];
    rhs[0] = T::one();
    let x = solve_dense(rate, rhs)?;

    let mut p = SublevelPopulations::zeros();
    p.ground.copy_from_slice(&x[..N_GROUND]);
    p.excited.copy_from_slice(&x[N_GROUND..]);
    // Mirror symmetry is exact in the equations; enforce it against rounding.
    for m in 1..=3 {
        let avg = (p.ground[g(m)] + p.ground[g(-m)]) / T::lit(2.0);
        p.ground[g(m)] = avg;
        p.ground[g(-m)] = avg;
    }
    for m in 1..=4 {
        let (hi, lo) = (e(m) - N_GROUND, e(-m) - N_GROUND);
        let avg = (p.excited[hi] + p.excited[lo]) / T::lit(2.0);
        p.excited[hi] = avg;
        p.excited[lo] = avg;
    }
    for v in p.ground.iter_mut().chain(p.excited.iter_mut()) {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    Ok(p)
}

/// Gaussian elimination with partial pivoting.
fn solve_dense<T: Real>(
    mut a: [[T; N_STATES]; N_STATES],
    mut b: [T; N_STATES],
) -> Result<[T; N_STATES]> {
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    let tiny = scale * T::epsilon() * T::lit(N_STATES as f64);
    for col in 0..N_STATES {
        let pivot = (col..N_STATES)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if !(a[pivot][col].abs() > tiny) {
            return Err(Error::numerical(format!(
                "singular rate matrix: pivot {} at column {col} (scale {})",
                a[pivot][col], scale
            )));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N_STATES {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..N_STATES {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [T::zero(); N_STATES];
    for row in (0..N_STATES).rev() {
        let mut acc = b[row];
        for k in row + 1..N_STATES {
            acc = acc - a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}
