//! Shifted Schur measures and their relatives: Schur Q-functions, pfaffian
//! correlation kernels, shifted Plancherel statistics, Tracy-Widom numerics and
//! Hall-Littlewood moments. Exact formulas come paired with brute-force oracles.

pub mod airy;
pub mod ascent;
pub mod bessel;
pub mod correlation;
pub mod error;
pub mod hall_littlewood;
pub mod limit;
pub mod partition;
pub mod pfaffian;
pub mod plancherel;
pub mod principal;
pub mod sampling;
pub mod scalar;
pub mod schur_q;
pub mod series;
pub mod tracy_widom;

pub use error::{Error, Result};
pub use scalar::{rat, Mode, Rational, Scalar};
