//! Spectrum specifications: eigenvalues λₙ, multiplicities Mₙ and the
//! counting function N(λ) = Σ_{λₙ ≤ λ} Mₙ.
//!
//! Every kind is post-composed with λ ↦ scale·(λ + shift). Polynomial
//! coefficients are listed in ascending order (a₀, a₁, …).

mod expr;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::Value;
use thiserror::Error;

pub use expr::Expr;

use crate::number::{
    cauchy_root_bound, format_q, parse_q, poly_degree, poly_eval_f64, poly_eval_q, q_int, q_to_f64, trim_poly, Q,
};

/// Prefix length checked numerically during validation.
pub const VALIDATION_PREFIX: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("eigenvalue at index {index} is not positive ({value})")]
    NonPositiveEigenvalue { index: u64, value: f64 },
    #[error("eigenvalues are not strictly increasing at index {index}")]
    NonIncreasingEigenvalues { index: u64 },
    #[error("eigenvalue polynomial has the root {root} inside the index set")]
    RootInIndexSet { root: i64 },
    #[error("multiplicity at index {index} is not positive ({value})")]
    NonPositiveMultiplicity { index: u64, value: f64 },
    #[error("malformed spec: {0}")]
    MalformedSpec(String),
}

/// Closed-form continuation of an explicit list: element n (0-based, n ≥
/// number of pairs) has λ = lambda(n + offset) and M = mult(n + offset).
#[derive(Debug, Clone, PartialEq)]
pub struct Tail {
    pub lambda: Expr,
    pub mult: Expr,
    pub offset: i64,
    pub lambda_src: String,
    pub mult_src: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumKind {
    /// λₙ = A(n), Mₙ = B(n) for n ≥ n_start.
    Polynomial { a_coeffs: Vec<Q>, b_coeffs: Vec<Q>, n_start: u64 },
    /// λₙ = q^{−r n}, Mₙ = p(n)·μⁿ for n ≥ n_start.
    Exponential { q: Q, p_coeffs: Vec<Q>, power_r: Q, mult_base: Q, n_start: u64 },
    Explicit { pairs: Vec<(f64, f64)>, tail: Option<Tail> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec {
    pub kind: SpectrumKind,
    pub scale: Q,
    pub shift: Q,
    /// Modes (λ, M) outside the main sequence, typically kernel modes with
    /// λ ≤ 0. They enter the heat trace and counting function but are
    /// carried as a truncation head by the expansion.
    pub kernel: Vec<(f64, f64)>,
    cache: Cache,
}

#[derive(Debug, Clone, PartialEq)]
struct Cache {
    scale: f64,
    shift: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    q_inv_r: f64,
    ln_q_inv_r: f64,
    mult_base: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingPoint {
    pub lambda: f64,
    pub count: f64,
}

impl SpectrumSpec {
    /// Validated constructor.
    pub fn new(kind: SpectrumKind, scale: Q, shift: Q, kernel: Vec<(f64, f64)>) -> Result<Self, SpectrumError> {
        let cache = Cache::build(&kind, &scale, &shift);
        let spec = SpectrumSpec { kind, scale, shift, kernel, cache };
        spec.validate()?;
        Ok(spec)
    }

    pub fn polynomial(a: Vec<Q>, b: Vec<Q>, n_start: u64) -> Result<Self, SpectrumError> {
        Self::new(SpectrumKind::Polynomial { a_coeffs: a, b_coeffs: b, n_start }, Q::one(), Q::zero(), vec![])
    }

    pub fn exponential(q: Q, p: Vec<Q>, power_r: Q) -> Result<Self, SpectrumError> {
        Self::new(
            SpectrumKind::Exponential { q, p_coeffs: p, power_r, mult_base: Q::one(), n_start: 0 },
            Q::one(),
            Q::zero(),
            vec![],
        )
    }

    pub fn with_scale(&self, scale: Q) -> Result<Self, SpectrumError> {
        Self::new(self.kind.clone(), scale, self.shift.clone(), self.kernel.clone())
    }

    pub fn with_shift(&self, shift: Q) -> Result<Self, SpectrumError> {
        Self::new(self.kind.clone(), self.scale.clone(), shift, self.kernel.clone())
    }

    pub fn with_kernel(&self, kernel: Vec<(f64, f64)>) -> Result<Self, SpectrumError> {
        Self::new(self.kind.clone(), self.scale.clone(), self.shift.clone(), kernel)
    }

    /// Same spectrum with the first `count` indices of the main sequence
    /// dropped (kernel modes are dropped as well).
    pub fn shifted(&self, count: u64) -> Result<Self, SpectrumError> {
        let kind = match &self.kind {
            SpectrumKind::Polynomial { a_coeffs, b_coeffs, n_start } => SpectrumKind::Polynomial {
                a_coeffs: a_coeffs.clone(),
                b_coeffs: b_coeffs.clone(),
                n_start: n_start + count,
            },
            SpectrumKind::Exponential { q, p_coeffs, power_r, mult_base, n_start } => SpectrumKind::Exponential {
                q: q.clone(),
                p_coeffs: p_coeffs.clone(),
                power_r: power_r.clone(),
                mult_base: mult_base.clone(),
                n_start: n_start + count,
            },
            SpectrumKind::Explicit { pairs, tail } => {
                let drop = (count as usize).min(pairs.len());
                SpectrumKind::Explicit {
                    pairs: pairs[drop..].to_vec(),
                    tail: tail.as_ref().map(|t| Tail { offset: t.offset + count as i64, ..t.clone() }),
                }
            }
        };
        Self::new(kind, self.scale.clone(), self.shift.clone(), vec![])
    }

    pub fn first_index(&self) -> u64 {
        match &self.kind {
            SpectrumKind::Polynomial { n_start, .. } | SpectrumKind::Exponential { n_start, .. } => *n_start,
            SpectrumKind::Explicit { .. } => 0,
        }
    }

    /// One past the last index, for finite explicit lists.
    pub fn end_index(&self) -> Option<u64> {
        match &self.kind {
            SpectrumKind::Explicit { pairs, tail: None } => Some(pairs.len() as u64),
            _ => None,
        }
    }

    fn base_eigenvalue(&self, n: u64) -> f64 {
        match &self.kind {
            SpectrumKind::Polynomial { .. } => poly_eval_f64(&self.cache.a, n as f64),
            SpectrumKind::Exponential { .. } => self.cache.q_inv_r.powf(n as f64),
            SpectrumKind::Explicit { pairs, tail } => match pairs.get(n as usize) {
                Some(p) => p.0,
                None => tail.as_ref().map_or(f64::NAN, |t| t.lambda.eval((n as i64 + t.offset) as f64)),
            },
        }
    }

    /// λₙ for an absolute index n ≥ first_index().
    pub fn eigenvalue(&self, n: u64) -> f64 {
        self.cache.scale * (self.base_eigenvalue(n) + self.cache.shift)
    }

    /// log λₙ, finite even when λₙ overflows binary64.
    pub fn ln_eigenvalue(&self, n: u64) -> f64 {
        let base_ln = match &self.kind {
            SpectrumKind::Exponential { .. } => n as f64 * self.cache.ln_q_inv_r,
            SpectrumKind::Explicit { pairs, tail: Some(t) } if n as usize >= pairs.len() => {
                t.lambda.ln_eval((n as i64 + t.offset) as f64)
            }
            _ => return self.eigenvalue(n).ln(),
        };
        if self.cache.shift == 0.0 {
            base_ln + self.cache.scale.ln()
        } else {
            self.eigenvalue(n).ln()
        }
    }

    /// Exact λₙ for the rational kinds.
    pub fn eigenvalue_exact(&self, n: u64) -> Option<Q> {
        let base = match &self.kind {
            SpectrumKind::Polynomial { a_coeffs, .. } => poly_eval_q(a_coeffs, &q_int(n as i64)),
            SpectrumKind::Exponential { q, power_r, .. } if power_r.is_integer() => {
                let k = power_r.to_integer() * num_bigint::BigInt::from(n);
                let k: usize = k.try_into().ok()?;
                num_traits::pow(q.recip(), k)
            }
            _ => return None,
        };
        Some(&self.scale * (base + &self.shift))
    }

    /// Mₙ for an absolute index n ≥ first_index().
    pub fn multiplicity(&self, n: u64) -> f64 {
        match &self.kind {
            SpectrumKind::Polynomial { .. } => poly_eval_f64(&self.cache.b, n as f64),
            SpectrumKind::Exponential { .. } => {
                poly_eval_f64(&self.cache.b, n as f64) * self.cache.mult_base.powf(n as f64)
            }
            SpectrumKind::Explicit { pairs, tail } => match pairs.get(n as usize) {
                Some(p) => p.1,
                None => tail.as_ref().map_or(f64::NAN, |t| t.mult.eval((n as i64 + t.offset) as f64)),
            },
        }
    }

    /// Polynomial kind: coefficients of λ(n) = scale·(A(n) + shift).
    pub fn lambda_polynomial(&self) -> Option<Vec<Q>> {
        let SpectrumKind::Polynomial { a_coeffs, .. } = &self.kind else { return None };
        let mut c = a_coeffs.clone();
        if c.is_empty() {
            c.push(Q::zero());
        }
        c[0] += &self.shift;
        Some(trim_poly(c.into_iter().map(|x| x * &self.scale).collect()))
    }

    /// N(λ) = Σ_{λₙ ≤ λ} Mₙ including kernel modes.
    pub fn counting_function(&self, lambda: f64) -> CountingPoint {
        let mut count: f64 = self.kernel.iter().filter(|m| m.0 <= lambda).map(|m| m.1).sum();
        let ln_lambda = lambda.ln();
        let mut n = self.first_index();
        loop {
            if self.end_index().is_some_and(|e| n >= e) {
                break;
            }
            let lam = self.eigenvalue(n);
            let within = if lam.is_finite() { lam <= lambda } else { self.ln_eigenvalue(n) <= ln_lambda };
            if !within {
                break;
            }
            count += self.multiplicity(n);
            n += 1;
        }
        CountingPoint { lambda, count }
    }

    fn validate(&self) -> Result<(), SpectrumError> {
        match &self.kind {
            SpectrumKind::Polynomial { b_coeffs, n_start, .. } => {
                let lam = self.lambda_polynomial().unwrap_or_default();
                let Some(deg) = poly_degree(&lam) else {
                    return Err(SpectrumError::MalformedSpec("eigenvalue polynomial is zero".into()));
                };
                if deg == 0 || !lam[deg].is_positive() {
                    return Err(SpectrumError::MalformedSpec(
                        "eigenvalue polynomial must have positive degree and positive leading coefficient".into(),
                    ));
                }
                if poly_degree(b_coeffs).is_none() {
                    return Err(SpectrumError::MalformedSpec("multiplicity polynomial is zero".into()));
                }
                let bound = cauchy_root_bound(&lam).ceil() as i64;
                for r in *n_start as i64..=bound.max(*n_start as i64) {
                    if poly_eval_q(&lam, &q_int(r)).is_zero() {
                        return Err(SpectrumError::RootInIndexSet { root: r });
                    }
                }
            }
            SpectrumKind::Exponential { q, p_coeffs, power_r, mult_base, .. } => {
                if !(q.is_positive() && q < &Q::one()) {
                    return Err(SpectrumError::MalformedSpec(format!("q must lie in (0,1), got {}", format_q(q))));
                }
                if !power_r.is_positive() {
                    return Err(SpectrumError::MalformedSpec("power_r must be positive".into()));
                }
                if mult_base < &Q::one() {
                    return Err(SpectrumError::MalformedSpec("mult_base must be at least 1".into()));
                }
                if poly_degree(p_coeffs).is_none() {
                    return Err(SpectrumError::MalformedSpec("multiplicity polynomial is zero".into()));
                }
            }
            SpectrumKind::Explicit { pairs, tail } => {
                if pairs.is_empty() && tail.is_none() {
                    return Err(SpectrumError::MalformedSpec("explicit spectrum is empty".into()));
                }
            }
        }
        if !self.scale.is_positive() {
            return Err(SpectrumError::MalformedSpec("scale must be positive".into()));
        }
        for &(lam, m) in &self.kernel {
            if !(lam.is_finite() && m > 0.0) {
                return Err(SpectrumError::MalformedSpec(format!("bad kernel mode ({lam}, {m})")));
            }
        }
        let start = self.first_index();
        let end = self.end_index().unwrap_or(u64::MAX).min(start + VALIDATION_PREFIX);
        let mut prev: Option<f64> = None;
        for n in start..end {
            let lam = self.eigenvalue(n);
            if lam.is_nan() {
                return Err(SpectrumError::MalformedSpec(format!("eigenvalue at index {n} is undefined")));
            }
            if lam.is_infinite() {
                break;
            }
            if lam <= 0.0 {
                return Err(SpectrumError::NonPositiveEigenvalue { index: n, value: lam });
            }
            if prev.is_some_and(|p| lam <= p) {
                return Err(SpectrumError::NonIncreasingEigenvalues { index: n });
            }
            let m = self.multiplicity(n);
            if !(m > 0.0) {
                return Err(SpectrumError::NonPositiveMultiplicity { index: n, value: m });
            }
            prev = Some(lam);
        }
        Ok(())
    }

    /// Parses the JSON spec format (see the crate README for the schema).
    pub fn from_json(v: &Value) -> Result<Self, SpectrumError> {
        let obj = v.as_object().ok_or_else(|| malformed("spec must be a JSON object"))?;
        let kind_name = obj.get("kind").and_then(Value::as_str).ok_or_else(|| malformed("missing field 'kind'"))?;
        let scale = opt_number(obj.get("scale"), "scale")?.unwrap_or_else(Q::one);
        let shift = opt_number(obj.get("shift"), "shift")?.unwrap_or_else(Q::zero);
        let kernel = match obj.get("kernel") {
            None => vec![],
            Some(k) => pair_list(k, "kernel")?,
        };
        let n_start = match obj.get("n_start") {
            None => 0,
            Some(x) => x.as_u64().ok_or_else(|| malformed("field 'n_start' must be a nonnegative integer"))?,
        };
        let kind = match kind_name.to_ascii_lowercase().as_str() {
            "polynomial" => SpectrumKind::Polynomial {
                a_coeffs: number_list(obj.get("a_coeffs"), "a_coeffs")?,
                b_coeffs: number_list(obj.get("b_coeffs"), "b_coeffs")?,
                n_start,
            },
            "exponential" => SpectrumKind::Exponential {
                q: number(obj.get("q").ok_or_else(|| malformed("missing field 'q'"))?, "q")?,
                p_coeffs: number_list(obj.get("p_coeffs"), "p_coeffs")?,
                power_r: opt_number(obj.get("power_r"), "power_r")?.unwrap_or_else(Q::one),
                mult_base: opt_number(obj.get("mult_base"), "mult_base")?.unwrap_or_else(Q::one),
                n_start,
            },
            "explicit" => {
                let pairs = match obj.get("pairs") {
                    None => vec![],
                    Some(p) => pair_list(p, "pairs")?,
                };
                let tail = match obj.get("tail") {
                    None | Some(Value::Null) => None,
                    Some(t) => Some(parse_tail(t)?),
                };
                SpectrumKind::Explicit { pairs, tail }
            }
            other => return Err(malformed(&format!("unknown kind '{other}'"))),
        };
        Self::new(kind, scale, shift, kernel)
    }

    pub fn to_json(&self) -> Value {
        let nums = |v: &[Q]| Value::Array(v.iter().map(|q| Value::String(format_q(q))).collect());
        let pairs = |v: &[(f64, f64)]| {
            Value::Array(v.iter().map(|p| serde_json::json!([p.0, p.1])).collect())
        };
        let mut obj = serde_json::Map::new();
        match &self.kind {
            SpectrumKind::Polynomial { a_coeffs, b_coeffs, n_start } => {
                obj.insert("kind".into(), "polynomial".into());
                obj.insert("a_coeffs".into(), nums(a_coeffs));
                obj.insert("b_coeffs".into(), nums(b_coeffs));
                obj.insert("n_start".into(), (*n_start).into());
            }
            SpectrumKind::Exponential { q, p_coeffs, power_r, mult_base, n_start } => {
                obj.insert("kind".into(), "exponential".into());
                obj.insert("q".into(), format_q(q).into());
                obj.insert("p_coeffs".into(), nums(p_coeffs));
                obj.insert("power_r".into(), format_q(power_r).into());
                obj.insert("mult_base".into(), format_q(mult_base).into());
                obj.insert("n_start".into(), (*n_start).into());
            }
            SpectrumKind::Explicit { pairs: p, tail } => {
                obj.insert("kind".into(), "explicit".into());
                obj.insert("pairs".into(), pairs(p));
                if let Some(t) = tail {
                    obj.insert(
                        "tail".into(),
                        serde_json::json!({"lambda": t.lambda_src, "mult": t.mult_src, "offset": t.offset}),
                    );
                }
            }
        }
        obj.insert("scale".into(), format_q(&self.scale).into());
        obj.insert("shift".into(), format_q(&self.shift).into());
        if !self.kernel.is_empty() {
            obj.insert("kernel".into(), pairs(&self.kernel));
        }
        Value::Object(obj)
    }
}

impl fmt::Display for SpectrumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl Cache {
    fn build(kind: &SpectrumKind, scale: &Q, shift: &Q) -> Cache {
        let to_f = |v: &[Q]| v.iter().map(q_to_f64).collect::<Vec<_>>();
        let mut c = Cache {
            scale: q_to_f64(scale),
            shift: q_to_f64(shift),
            a: vec![],
            b: vec![],
            q_inv_r: 0.0,
            ln_q_inv_r: 0.0,
            mult_base: 1.0,
        };
        match kind {
            SpectrumKind::Polynomial { a_coeffs, b_coeffs, .. } => {
                c.a = to_f(a_coeffs);
                c.b = to_f(b_coeffs);
            }
            SpectrumKind::Exponential { q, p_coeffs, power_r, mult_base, .. } => {
                c.b = to_f(p_coeffs);
                let r = q_to_f64(power_r);
                let qf = q_to_f64(q);
                c.ln_q_inv_r = -r * qf.ln();
                c.q_inv_r = if power_r.is_integer() { (1.0 / qf).powi(r as i32) } else { c.ln_q_inv_r.exp() };
                if q.numer().is_one() && power_r.is_integer() {
                    // 1/q is an integer: keep powers exact.
                    c.q_inv_r = q_to_f64(&num_traits::pow(q.recip(), r as usize));
                }
                c.mult_base = q_to_f64(mult_base);
            }
            SpectrumKind::Explicit { .. } => {}
        }
        c
    }
}

fn malformed(msg: &str) -> SpectrumError {
    SpectrumError::MalformedSpec(msg.to_string())
}

fn number(v: &Value, field: &str) -> Result<Q, SpectrumError> {
    let parsed = match v {
        Value::Number(n) => parse_q(&n.to_string()),
        Value::String(s) => parse_q(s),
        _ => None,
    };
    parsed.ok_or_else(|| malformed(&format!("field '{field}' must be a number or \"p/q\" string")))
}

fn opt_number(v: Option<&Value>, field: &str) -> Result<Option<Q>, SpectrumError> {
    v.map(|x| number(x, field)).transpose()
}

fn number_list(v: Option<&Value>, field: &str) -> Result<Vec<Q>, SpectrumError> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| malformed(&format!("field '{field}' must be an array of numbers")))?;
    arr.iter().map(|x| number(x, field)).collect()
}

fn pair_list(v: &Value, field: &str) -> Result<Vec<(f64, f64)>, SpectrumError> {
    let arr = v.as_array().ok_or_else(|| malformed(&format!("field '{field}' must be an array of pairs")))?;
    arr.iter()
        .map(|p| {
            let pair = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| malformed(&format!("field '{field}' entries must be [lambda, M]")))?;
            Ok((q_to_f64(&number(&pair[0], field)?), q_to_f64(&number(&pair[1], field)?)))
        })
        .collect()
}

fn parse_tail(v: &Value) -> Result<Tail, SpectrumError> {
    let obj = v.as_object().ok_or_else(|| malformed("field 'tail' must be an object"))?;
    let lambda_src = obj.get("lambda").and_then(Value::as_str).ok_or_else(|| malformed("tail needs a 'lambda' expression"))?;
    let mult_src = obj.get("mult").map(|m| match m {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    });
    let mult_src = mult_src.unwrap_or_else(|| "1".into());
    let offset = obj.get("offset").and_then(Value::as_i64).unwrap_or(0);
    Tail::new(lambda_src, &mult_src, offset)
}

impl Tail {
    pub fn new(lambda_src: &str, mult_src: &str, offset: i64) -> Result<Tail, SpectrumError> {
        Ok(Tail {
            lambda: Expr::parse(lambda_src).map_err(|e| malformed(&format!("tail lambda: {e}")))?,
            mult: Expr::parse(mult_src).map_err(|e| malformed(&format!("tail mult: {e}")))?,
            offset,
            lambda_src: lambda_src.to_string(),
            mult_src: mult_src.to_string(),
        })
    }
}
