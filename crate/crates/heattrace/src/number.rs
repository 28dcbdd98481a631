//! Exact rational scalars used for spectrum coefficients and analytically
//! rational expansion data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn q_to_f64(q: &Q) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fallback for ratios of huge integers.
    let (n, d) = (q.numer(), q.denom());
    let shift = (n.bits().max(d.bits()) as i64 - 900).max(0);
    let n2: BigInt = n >> shift as usize;
    let d2: BigInt = d >> shift as usize;
    n2.to_f64().unwrap_or(f64::NAN) / d2.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational from a finite binary64 value.
pub fn q_from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Parses `p/q`, integers and decimals (with optional exponent) exactly.
pub fn parse_q(raw: &str) -> Option<Q> {
    let s = raw.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((a, b)) = s.split_once('/') {
        let num = parse_q(a)?;
        let den = parse_q(b)?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Q::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = q_int(10);
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Evaluates Σ c_i x^i exactly.
pub fn poly_eval_q(coeffs: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn poly_eval_f64(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Degree after stripping trailing zeros; `None` for the zero polynomial.
pub fn poly_degree(coeffs: &[Q]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

pub fn trim_poly(mut coeffs: Vec<Q>) -> Vec<Q> {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

/// Coefficients of p(x + h) given those of p(x).
pub fn poly_shift(coeffs: &[Q], h: &Q) -> Vec<Q> {
    let n = coeffs.len();
    let mut out = vec![Q::zero(); n];
    for (i, c) in coeffs.iter().enumerate() {
        // c (x+h)^i = c Σ_k binom(i,k) h^{i-k} x^k
        let mut binom = BigInt::one();
        for k in 0..=i {
            if k > 0 {
                binom = binom * BigInt::from(i - k + 1) / BigInt::from(k);
            }
            let hp = num_traits::pow(h.clone(), i - k);
            out[k] += c * Q::from_integer(binom.clone()) * hp;
        }
    }
    out
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Upper bound on the modulus of every real root (Cauchy bound).
pub fn cauchy_root_bound(coeffs: &[Q]) -> f64 {
    let Some(d) = poly_degree(coeffs) else {
        return 0.0;
    };
    let lead = q_to_f64(&coeffs[d]).abs();
    let m = coeffs[..d]
        .iter()
        .map(|c| q_to_f64(c).abs())
        .fold(0.0, f64::max);
    1.0 + m / lead
}

pub fn is_integer(q: &Q) -> bool {
    q.denom().is_one()
}

pub fn q_abs(q: &Q) -> Q {
    q.abs()
}
