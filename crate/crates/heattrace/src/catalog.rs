//! Named spectra with known behaviour. Names take optional parameters
//! after a colon: `sphere_absD:3`, `sphere_Dpow:2,2`, `q_exponential:0.5,1`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::number::{parse_q, poly_mul, q_frac, q_int, Q};
use crate::specfun::theta3;
use crate::spectrum::{SpectrumError, SpectrumKind, SpectrumSpec, Tail};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry '{0}'")]
    UnknownName(String),
    #[error("bad parameters for '{name}': {reason}")]
    BadParams { name: String, reason: String },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedClass {
    Exact,
    AlmostExact,
    AsymptoticOnly,
    Divergent,
    NoContinuation,
}

impl ExpectedClass {
    pub fn name(&self) -> &'static str {
        match self {
            ExpectedClass::Exact => "Exact",
            ExpectedClass::AlmostExact => "AlmostExact",
            ExpectedClass::AsymptoticOnly => "AsymptoticOnly",
            ExpectedClass::Divergent => "Divergent",
            ExpectedClass::NoContinuation => "NoContinuation",
        }
    }
}

/// Heat traces with a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// 1/sinh(t/2)
    InvSinhHalf,
    /// coth(t/2)
    CothHalf,
    /// Σ_{n≥0} e^{−tn²} = ½(θ₃(e^{−t}) + 1)
    HalfTheta,
}

impl ClosedForm {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ClosedForm::InvSinhHalf => 1.0 / (t / 2.0).sinh(),
            ClosedForm::CothHalf => 1.0 / (t / 2.0).tanh(),
            ClosedForm::HalfTheta => 0.5 * (theta3((-t).exp()).unwrap_or(f64::NAN) + 1.0),
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            ClosedForm::InvSinhHalf => "1/sinh(t/2)",
            ClosedForm::CothHalf => "coth(t/2)",
            ClosedForm::HalfTheta => "(theta3(0; e^-t) + 1)/2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub classification: Option<ExpectedClass>,
    /// Exactness radius; infinite for the exponential family.
    pub t: Option<f64>,
    pub closed_form: Option<ClosedForm>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub spec: SpectrumSpec,
    pub expected: Expected,
}

/// (template, description) for `catalog list`.
pub const ENTRIES: [(&str, &str); 9] = [
    ("sphere_absD:d", "|D| on the round sphere S^d: λ = n + d/2, M = 2^(⌊d/2⌋+1)·C(n+d−1, d−1)"),
    ("sphere_Dpow:d,2k", "D^(2k) on S^d: λ = (n + d/2)^(2k), same multiplicities"),
    ("circle_trivial_spin", "|D| on S¹, trivial spin structure: λ = n ≥ 1 with M = 2, plus one zero mode"),
    ("circle_nontrivial_spin", "|D| on S¹, nontrivial spin structure: λ = n + 1/2, M = 2"),
    ("theta_operator", "λ = n², M = 1 for n ≥ 1, plus one zero mode"),
    ("q_exponential:q,p0,p1,...", "λ = q^(−n), M = p(n)"),
    ("pow2_pow2", "λ = 2^n, M = 2^n"),
    ("lacunary_gauss", "λ = e^(n²), M = 1 for n ≥ 1"),
    ("subexp_n23", "λ = e^(n^(2/3)), M = 1"),
];

fn bad(name: &str, reason: impl Into<String>) -> CatalogError {
    CatalogError::BadParams { name: name.into(), reason: reason.into() }
}

fn parse_uint(name: &str, raw: &str) -> Result<u64, CatalogError> {
    raw.trim().parse::<u64>().map_err(|_| bad(name, format!("'{raw}' is not a non-negative integer")))
}

fn no_params(name: &str, params: &[&str]) -> Result<(), CatalogError> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(bad(name, "takes no parameters"))
    }
}

/// C(n+d−1, d−1) as a polynomial in n.
fn binomial_poly(d: u64) -> Vec<Q> {
    let mut p = vec![q_int(1)];
    let mut fact = q_int(1);
    for j in 1..d {
        p = poly_mul(&p, &[q_int(j as i64), q_int(1)]);
        fact *= q_int(j as i64);
    }
    p.into_iter().map(|c| c / &fact).collect()
}

fn sphere_mult(d: u64) -> Vec<Q> {
    let pre = q_int(1i64 << (d / 2 + 1));
    binomial_poly(d).into_iter().map(|c| c * &pre).collect()
}

pub fn sphere_abs_d(d: u64) -> Result<SpectrumSpec, CatalogError> {
    if d == 0 {
        return Err(bad("sphere_absD", "d must be at least 1"));
    }
    Ok(SpectrumSpec::polynomial(vec![q_frac(d as i64, 2), q_int(1)], sphere_mult(d), 0)?)
}

pub fn sphere_d_pow(d: u64, power: u64) -> Result<SpectrumSpec, CatalogError> {
    if d == 0 {
        return Err(bad("sphere_Dpow", "d must be at least 1"));
    }
    if power == 0 || power % 2 == 1 {
        return Err(bad("sphere_Dpow", "the power must be even and positive"));
    }
    let base = [q_frac(d as i64, 2), q_int(1)];
    let mut a = vec![q_int(1)];
    for _ in 0..power {
        a = poly_mul(&a, &base);
    }
    Ok(SpectrumSpec::polynomial(a, sphere_mult(d), 0)?)
}

pub fn q_exponential(q: Q, p: Vec<Q>) -> Result<SpectrumSpec, CatalogError> {
    Ok(SpectrumSpec::exponential(q, p, q_int(1))?)
}

pub fn entry(full: &str) -> Result<CatalogEntry, CatalogError> {
    let (name, rest) = match full.split_once(':') {
        Some((n, r)) => (n.trim(), r),
        None => (full.trim(), ""),
    };
    let params: Vec<&str> = if rest.trim().is_empty() { vec![] } else { rest.split(',').map(str::trim).collect() };
    let description = ENTRIES
        .iter()
        .find(|e| e.0.split(':').next() == Some(name))
        .map(|e| e.1.to_string())
        .ok_or_else(|| CatalogError::UnknownName(name.into()))?;
    let two_pi = 2.0 * PI;
    let exact = |t: f64, closed: Option<ClosedForm>| Expected {
        classification: Some(ExpectedClass::Exact),
        t: Some(t),
        closed_form: closed,
    };
    let (spec, expected) = match name {
        "sphere_absD" => {
            let [d] = params[..] else { return Err(bad(name, "expected one parameter d")) };
            let d = parse_uint(name, d)?;
            let closed = (d == 1).then_some(ClosedForm::InvSinhHalf);
            (sphere_abs_d(d)?, exact(two_pi, closed))
        }
        "sphere_Dpow" => {
            let [d, p] = params[..] else { return Err(bad(name, "expected parameters d,2k")) };
            let (d, p) = (parse_uint(name, d)?, parse_uint(name, p)?);
            // odd d: M is a polynomial in λ, finitely many poles survive;
            // even d with D² is the divergent family
            let classification = if d % 2 == 1 {
                Some(ExpectedClass::AlmostExact)
            } else if p == 2 {
                Some(ExpectedClass::Divergent)
            } else {
                None
            };
            (sphere_d_pow(d, p)?, Expected { classification, t: None, closed_form: None })
        }
        "circle_trivial_spin" => {
            no_params(name, &params)?;
            let spec = SpectrumSpec::polynomial(vec![q_int(0), q_int(1)], vec![q_int(2)], 1)?.with_kernel(vec![(0.0, 1.0)])?;
            (spec, exact(two_pi, Some(ClosedForm::CothHalf)))
        }
        "circle_nontrivial_spin" => {
            no_params(name, &params)?;
            (sphere_abs_d(1)?, exact(two_pi, Some(ClosedForm::InvSinhHalf)))
        }
        "theta_operator" => {
            no_params(name, &params)?;
            let spec = SpectrumSpec::polynomial(vec![q_int(0), q_int(0), q_int(1)], vec![q_int(1)], 1)?
                .with_kernel(vec![(0.0, 1.0)])?;
            let expected = Expected {
                classification: Some(ExpectedClass::AlmostExact),
                t: None,
                closed_form: Some(ClosedForm::HalfTheta),
            };
            (spec, expected)
        }
        "q_exponential" => {
            let Some((q, p)) = params.split_first() else { return Err(bad(name, "expected q,p0,p1,...")) };
            let q = parse_q(q).ok_or_else(|| bad(name, format!("'{q}' is not a number")))?;
            let p = if p.is_empty() {
                vec![q_int(1)]
            } else {
                p.iter().map(|c| parse_q(c).ok_or_else(|| bad(name, format!("'{c}' is not a number")))).collect::<Result<_, _>>()?
            };
            (q_exponential(q, p)?, exact(f64::INFINITY, None))
        }
        "pow2_pow2" => {
            no_params(name, &params)?;
            let kind = SpectrumKind::Exponential {
                q: q_frac(1, 2),
                p_coeffs: vec![q_int(1)],
                power_r: q_int(1),
                mult_base: q_int(2),
                n_start: 0,
            };
            (SpectrumSpec::new(kind, q_int(1), q_int(0), vec![])?, exact(f64::INFINITY, None))
        }
        "lacunary_gauss" | "subexp_n23" => {
            no_params(name, &params)?;
            let lambda = if name == "lacunary_gauss" { "exp(n^2)" } else { "exp(n^(2/3))" };
            // indexed from n = 1: the λ = 1 mode at n = 0 only shifts h by e^{−t}
            let offset = if name == "lacunary_gauss" { 1 } else { 0 };
            let kind = SpectrumKind::Explicit { pairs: vec![], tail: Some(Tail::new(lambda, "1", offset)?) };
            let expected = Expected { classification: Some(ExpectedClass::NoContinuation), t: None, closed_form: None };
            (SpectrumSpec::new(kind, q_int(1), q_int(0), vec![])?, expected)
        }
        _ => return Err(CatalogError::UnknownName(name.into())),
    };
    Ok(CatalogEntry { name: full.trim().to_string(), description, spec, expected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SpectrumKind;

    #[test]
    fn s3_multiplicities() {
        let e = entry("sphere_absD:3").unwrap();
        let SpectrumKind::Polynomial { a_coeffs, b_coeffs, .. } = &e.spec.kind else { panic!() };
        assert_eq!(a_coeffs, &vec![q_frac(3, 2), q_int(1)]);
        assert_eq!(b_coeffs, &vec![q_int(4), q_int(6), q_int(2)]);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(entry("nope"), Err(CatalogError::UnknownName(_))));
        assert!(matches!(entry("sphere_Dpow:2,3"), Err(CatalogError::BadParams { .. })));
        assert!(matches!(entry("pow2_pow2:1"), Err(CatalogError::BadParams { .. })));
    }

    #[test]
    fn closed_forms_match_entries() {
        for name in ["circle_trivial_spin", "circle_nontrivial_spin", "theta_operator"] {
            let e = entry(name).unwrap();
            let direct = crate::dirichlet::heat_trace_direct(&e.spec, 0.7, 1e-14).unwrap();
            let closed = e.expected.closed_form.unwrap().eval(0.7);
            assert!((direct - closed).abs() < 1e-12 * closed, "{name}");
        }
    }
}
