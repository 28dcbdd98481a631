//! Riemann and Hurwitz zeta functions.
//!
//! Hurwitz: Euler–Maclaurin with twelve Bernoulli corrections,
//!   ζ_H(s,α) = Σ_{k<N}(k+α)^{−s} + a^{1−s}/(s−1) + a^{−s}/2
//!              + Σ_{j=1}^{12} B_{2j}/(2j)! (s)_{2j−1} a^{−s−2j+1},  a = N+α,
//! where N is the smallest head making a ≥ max(15, |s|).
//! Riemann: Euler–Maclaurin for Re s ≥ 1/2, functional equation otherwise,
//! evaluated in log form so the sin/Γ pair never overflows.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use super::bernoulli::{bernoulli_f64, bernoulli_number, bernoulli_polynomial_q};
use super::gamma::{ln_gamma, ln_sin};
use super::SpecFunError;
use crate::number::{q_from_f64, q_int, q_to_f64, Q};

const EM_ORDER: usize = 12;

fn em_coeffs() -> &'static [f64; EM_ORDER] {
    static C: std::sync::OnceLock<[f64; EM_ORDER]> = std::sync::OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; EM_ORDER];
        let mut fact = 1.0;
        for (j, slot) in c.iter_mut().enumerate() {
            let m = 2 * (j + 1);
            fact *= ((m - 1) * m) as f64;
            *slot = bernoulli_f64(m) / fact;
        }
        c
    })
}

fn is_one(s: C64) -> bool {
    s.re == 1.0 && s.im == 0.0
}

fn nonpositive_integer(s: C64) -> Option<u32> {
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() && s.re > -100_000.0 {
        Some((-s.re) as u32)
    } else {
        None
    }
}

/// ζ(−n) = −B_{n+1}/(n+1) with B₁ = +1/2.
pub fn riemann_zeta_neg_int(n: u32) -> Q {
    -bernoulli_number(n as usize + 1) / q_int(n as i64 + 1)
}

/// ζ_H(−n, α) = −B_{n+1}(α)/(n+1).
pub fn hurwitz_zeta_neg_int(n: u32, alpha: &Q) -> Q {
    -bernoulli_polynomial_q(n as usize + 1, alpha) / q_int(n as i64 + 1)
}

/// Euler–Maclaurin tail starting at the real point a.
fn em_tail(s: C64, a: f64) -> C64 {
    let ln_a = a.ln();
    let a_ms = (-s * ln_a).exp();
    let mut acc = a_ms * a / (s - 1.0) + 0.5 * a_ms;
    // rising factorial (s)_{2j-1} times a^{-s-2j+1}
    let mut rising = s;
    let mut pow = a_ms / a;
    let inv_a2 = 1.0 / (a * a);
    for (j, c) in em_coeffs().iter().enumerate() {
        if j > 0 {
            let k = (2 * j - 1) as f64;
            rising *= (s + k) * (s + k + 1.0);
            pow *= inv_a2;
        }
        acc += *c * rising * pow;
    }
    acc
}

/// Hurwitz zeta by Euler–Maclaurin alone (no reductions).
pub fn hurwitz_zeta_em(s: C64, alpha: f64) -> C64 {
    let target = 15f64.max(s.norm());
    let head = if alpha >= target { 0 } else { (target - alpha).ceil() as usize };
    let mut acc = C64::zero();
    for k in (0..head).rev() {
        acc += (-s * (k as f64 + alpha).ln()).exp();
    }
    acc + em_tail(s, head as f64 + alpha)
}

/// ζ(s) for s ≠ 1.
pub fn riemann_zeta(s: C64) -> Result<C64, SpecFunError> {
    if is_one(s) {
        return Err(SpecFunError::PoleAt(1));
    }
    if let Some(n) = nonpositive_integer(s) {
        return Ok(C64::new(q_to_f64(&riemann_zeta_neg_int(n)), 0.0));
    }
    let v = if s.re >= 0.5 {
        hurwitz_zeta_em(s, 1.0)
    } else {
        let one = C64::new(1.0, 0.0);
        let log_factor = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_sin(0.5 * PI * s) + ln_gamma(one - s);
        log_factor.exp() * hurwitz_zeta_em(one - s, 1.0)
    };
    Ok(if s.im == 0.0 { C64::new(v.re, 0.0) } else { v })
}

pub fn riemann_zeta_real(x: f64) -> Result<f64, SpecFunError> {
    riemann_zeta(C64::new(x, 0.0)).map(|z| z.re)
}

/// Half-integer or integer α in [1/2, limit) returns the multiple 2α.
fn small_half_integer(alpha: f64, limit: f64) -> Option<i64> {
    let two = 2.0 * alpha;
    (two == two.round() && two >= 1.0 && alpha < limit).then_some(two as i64)
}

/// ζ_H(s, α) for s ≠ 1, α > 0.
///
/// Nonpositive integer s uses the Bernoulli-polynomial identity exactly.
/// For Re s < 1/2, small α ∈ ½ℤ reduces to ζ through ζ_H(s,½) = (2^s−1)ζ(s) and
/// ζ_H(s,α+1) = ζ_H(s,α) − α^{−s}, which stays accurate where direct
/// Euler–Maclaurin would cancel (Re s ≪ 0).
pub fn hurwitz_zeta(s: C64, alpha: f64) -> Result<C64, SpecFunError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(SpecFunError::Domain(format!("hurwitz alpha must be positive, got {alpha}")));
    }
    if is_one(s) {
        return Err(SpecFunError::PoleAt(1));
    }
    if let Some(n) = nonpositive_integer(s) {
        let aq = q_from_f64(alpha).ok_or_else(|| SpecFunError::Domain("alpha".into()))?;
        return Ok(C64::new(q_to_f64(&hurwitz_zeta_neg_int(n, &aq)), 0.0));
    }
    let limit = 15f64.max(s.norm());
    let reducible = if s.re < 0.5 { small_half_integer(alpha, limit) } else { None };
    let v = if let Some(two_alpha) = reducible {
        let (mut base, mut start) = if two_alpha % 2 == 0 {
            (riemann_zeta(s)?, 1.0)
        } else {
            let two_s = (s * 2f64.ln()).exp();
            (riemann_zeta(s)? * (two_s - 1.0), 0.5)
        };
        while start < alpha {
            base -= (-s * f64::ln(start)).exp();
            start += 1.0;
        }
        base
    } else {
        hurwitz_zeta_em(s, alpha)
    };
    Ok(if s.im == 0.0 { C64::new(v.re, 0.0) } else { v })
}

/// log ζ(s), finite where ζ(s) itself overflows (Re s ≪ 0, large |Im s|).
pub fn riemann_zeta_ln(s: C64) -> Result<C64, SpecFunError> {
    if is_one(s) {
        return Err(SpecFunError::PoleAt(1));
    }
    if let Some(n) = nonpositive_integer(s) {
        return Ok(C64::new(q_to_f64(&riemann_zeta_neg_int(n)), 0.0).ln());
    }
    if s.re >= 0.5 {
        return Ok(hurwitz_zeta_em(s, 1.0).ln());
    }
    let one = C64::new(1.0, 0.0);
    let log_factor = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_sin(0.5 * PI * s) + ln_gamma(one - s);
    Ok(log_factor + hurwitz_zeta_em(one - s, 1.0).ln())
}

/// log ζ_H(s, α), using the log-form reduction to ζ where `hurwitz_zeta`
/// would reduce, so magnitudes beyond binary64 range stay representable.
pub fn hurwitz_zeta_ln(s: C64, alpha: f64) -> Result<C64, SpecFunError> {
    let limit = 15f64.max(s.norm());
    let reducible = if s.re < 0.5 { small_half_integer(alpha, limit) } else { None };
    let Some(two_alpha) = reducible else {
        if let Some(n) = nonpositive_integer(s) {
            let aq = q_from_f64(alpha).ok_or_else(|| SpecFunError::Domain("alpha".into()))?;
            return Ok(C64::new(q_to_f64(&hurwitz_zeta_neg_int(n, &aq)), 0.0).ln());
        }
        return Ok(hurwitz_zeta(s, alpha)?.ln());
    };
    if nonpositive_integer(s).is_some() {
        return Ok(hurwitz_zeta(s, alpha)?.ln());
    }
    let lz = riemann_zeta_ln(s)?;
    let (mut factor, mut start) = if two_alpha % 2 == 0 {
        (C64::new(1.0, 0.0), 1.0)
    } else {
        ((s * 2f64.ln()).exp() - 1.0, 0.5)
    };
    while start < alpha {
        factor -= (-s * f64::ln(start) - lz).exp();
        start += 1.0;
    }
    Ok(lz + factor.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::q_frac;

    #[test]
    fn basel_and_negative_integers() {
        let z2 = riemann_zeta(C64::new(2.0, 0.0)).unwrap().re;
        assert!((z2 - PI * PI / 6.0).abs() < 1e-14);
        assert_eq!(riemann_zeta_neg_int(1), q_frac(-1, 12));
        assert_eq!(riemann_zeta_neg_int(0), q_frac(-1, 2));
        assert_eq!(riemann_zeta(C64::new(1.0, 0.0)), Err(SpecFunError::PoleAt(1)));
    }

    #[test]
    fn hurwitz_special_values() {
        assert_eq!(hurwitz_zeta_neg_int(0, &q_frac(1, 2)), q_int(0));
        assert_eq!(hurwitz_zeta_neg_int(1, &q_frac(3, 2)), q_frac(-11, 24));
    }

    #[test]
    fn log_forms_agree() {
        for &(re, im, a) in &[(-3.5, 2.0, 1.5), (-20.5, 40.0, 0.5), (2.5, 1.0, 3.0), (-7.0, 11.0, 2.0)] {
            let s = C64::new(re, im);
            let direct = hurwitz_zeta(s, a).unwrap().ln();
            let logged = hurwitz_zeta_ln(s, a).unwrap();
            assert!((direct.re - logged.re).abs() < 1e-11, "{s}");
            assert!(((direct - logged).im / (2.0 * PI)).fract().abs() < 1e-9 || ((direct - logged).im / (2.0 * PI)).fract().abs() > 1.0 - 1e-9);
        }
        // magnitude beyond binary64
        let big = hurwitz_zeta_ln(C64::new(-180.0, 900.0), 1.5).unwrap();
        assert!(big.re > 709.0 && big.re.is_finite());
    }

    #[test]
    fn reduction_agrees_with_euler_maclaurin() {
        for &(re, im, a) in &[(2.7, 0.0, 1.0), (0.3, 4.0, 0.5), (-2.5, 1.0, 2.5), (3.0, -7.0, 4.0)] {
            let s = C64::new(re, im);
            let x = hurwitz_zeta(s, a).unwrap();
            let y = hurwitz_zeta_em(s, a);
            assert!((x - y).norm() <= 1e-11 * y.norm(), "{s} {a}: {x} vs {y}");
        }
    }
}
