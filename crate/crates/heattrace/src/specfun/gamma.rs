//! Complex Gamma via Stirling's series after upward recurrence, with the
//! reflection formula in the left half-plane. Logarithmic forms keep
//! |Γ(x+iy)| representable far up the imaginary axis.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use super::bernoulli::bernoulli_f64;
use super::SpecFunError;
use crate::number::{q_int, Q};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_TERMS: usize = 12;
const SHIFT_TO: f64 = 16.0;

fn stirling_coeffs() -> &'static [f64; STIRLING_TERMS] {
    static C: std::sync::OnceLock<[f64; STIRLING_TERMS]> = std::sync::OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; STIRLING_TERMS];
        for (k, slot) in c.iter_mut().enumerate() {
            let m = 2 * (k + 1);
            *slot = bernoulli_f64(m) / ((m * (m - 1)) as f64);
        }
        c
    })
}

/// log sin(z) on some branch, stable for large |Im z|.
pub fn ln_sin(z: C64) -> C64 {
    if z.im.abs() < 1.0 {
        return z.sin().ln();
    }
    if z.im > 0.0 {
        // sin z = (i/2) e^{-iz} (1 - e^{2iz})
        let i = C64::i();
        -i * z + (i / 2.0).ln() + (C64::new(1.0, 0.0) - (2.0 * i * z).exp()).ln()
    } else {
        ln_sin(z.conj()).conj()
    }
}

/// log Γ(z) on some branch (the real part is log|Γ(z)|).
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        return C64::new(PI.ln(), 0.0) - ln_sin(PI * z) - ln_gamma(C64::new(1.0, 0.0) - z);
    }
    let mut w = z;
    let mut prod = C64::new(1.0, 0.0);
    let mut log_shift = C64::zero();
    while w.re < SHIFT_TO || w.norm() < SHIFT_TO {
        prod *= w;
        if prod.norm() > 1e250 {
            log_shift += prod.ln();
            prod = C64::new(1.0, 0.0);
        }
        w += 1.0;
    }
    log_shift += prod.ln();
    let wi = w.inv();
    let wi2 = wi * wi;
    let mut series = C64::zero();
    let mut pow = wi;
    for c in stirling_coeffs() {
        series += *c * pow;
        pow *= wi2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - log_shift
}

fn nonpositive_integer(s: C64) -> Option<i64> {
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        Some(s.re as i64)
    } else {
        None
    }
}

/// Γ(s); relative error about 1e-14 for |s| ≤ 50.
pub fn gamma(s: C64) -> Result<C64, SpecFunError> {
    if let Some(n) = nonpositive_integer(s) {
        return Err(SpecFunError::PoleAt(n));
    }
    if s.im == 0.0 && s.re == s.re.round() && s.re <= 171.0 {
        let mut f = 1.0;
        for k in 2..(s.re as i64) {
            f *= k as f64;
        }
        return Ok(C64::new(f, 0.0));
    }
    let v = ln_gamma(s).exp();
    Ok(if s.im == 0.0 { C64::new(v.re, 0.0) } else { v })
}

pub fn gamma_real(x: f64) -> Result<f64, SpecFunError> {
    gamma(C64::new(x, 0.0)).map(|z| z.re)
}

/// Res_{s=−n} Γ(s) = (−1)ⁿ/n!.
pub fn gamma_residue(n: u32) -> Q {
    let mut f = q_int(1);
    for k in 2..=n as i64 {
        f *= q_int(k);
    }
    let r = q_int(1) / f;
    if n % 2 == 1 {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::q_frac;

    #[test]
    fn half_and_integers() {
        let g = gamma(C64::new(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
        assert_eq!(gamma(C64::new(3.0, 0.0)).unwrap().re, 2.0);
        assert_eq!(gamma(C64::new(-1.0, 0.0)), Err(SpecFunError::PoleAt(-1)));
    }

    #[test]
    fn residues() {
        assert_eq!(gamma_residue(0), q_int(1));
        assert_eq!(gamma_residue(1), q_int(-1));
        assert_eq!(gamma_residue(4), q_frac(1, 24));
    }

    #[test]
    fn vertical_decay_in_log_form() {
        // |Γ(iy)|² = π/(y sinh πy)
        let y: f64 = 700.0;
        let lg = ln_gamma(C64::new(0.0, y)).re;
        let expected = 0.5 * (PI.ln() - y.ln() - (PI * y - 2f64.ln()));
        assert!((lg - expected).abs() < 1e-10);
    }
}
