//! Special-function kernel in binary64 with exact rational side tables.

mod bernoulli;
mod gamma;
mod theta;
mod zeta;

use thiserror::Error;

pub use bernoulli::{
    bernoulli_f64, bernoulli_number, bernoulli_polynomial, bernoulli_polynomial_q, eulerian_number,
    eulerian_row,
};
pub use gamma::{gamma, gamma_real, gamma_residue, ln_gamma, ln_sin};
pub use theta::{theta3, theta4};
pub use zeta::{
    hurwitz_zeta, hurwitz_zeta_em, hurwitz_zeta_ln, hurwitz_zeta_neg_int, riemann_zeta, riemann_zeta_ln,
    riemann_zeta_neg_int, riemann_zeta_real,
};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("pole at s = {0}")]
    PoleAt(i64),
    #[error("domain error: {0}")]
    Domain(String),
}
