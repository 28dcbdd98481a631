//! Small-time heat-trace expansions from spectral data.
//!
//! A spectrum (λₙ, Mₙ) defines h(t) = Σ Mₙe^{−tλₙ} and ζ_P(s) = Σ Mₙλₙ^{−s}.
//! The expansion of h as t ↓ 0 comes from the poles of Γ(s)ζ_P(s); every
//! result can be checked against direct summation.

pub mod catalog;
pub mod cli;
pub mod continuation;
pub mod dirichlet;
pub mod expansion;
pub mod number;
pub mod par;
pub mod specfun;
pub mod spectrum;
pub mod tauberian;
