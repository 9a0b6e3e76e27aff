//! Exact angular-momentum algebra.

mod exact;
mod halfint;
mod weights;
mod wigner;

pub use exact::{rational_to_f64, SignedSqrt};
pub use halfint::HalfInt;
pub use weights::{
    weight_circular, weight_circular_exact, weight_linear, weight_linear_exact, RYDBERG_J,
};
pub use wigner::{clebsch_gordan, six_j, triangle, J_MAX};
