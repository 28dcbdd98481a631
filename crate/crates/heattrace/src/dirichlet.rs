//! Direct evaluation of h_P(t) = Σ Mₙe^{−tλₙ} and ζ_P(s) = Σ Mₙλₙ^{−s}
//! with certified truncation, and the abscissa of convergence.
//!
//! Heat-trace tails use a ratio majorant: once n is past the index where
//! rₙ = M_{n+1}e^{−tλ_{n+1}} / (Mₙe^{−tλₙ}) is nonincreasing (log-concave
//! multiplicities, convex eigenvalues), Σ_{k>n} ≤ termₙ·rₙ/(1−rₙ).

use num_complex::Complex64 as C64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::number::{cauchy_root_bound, poly_degree, q_frac, q_to_f64, Q};
use crate::spectrum::{SpectrumKind, SpectrumSpec};

const MAX_TERMS: u64 = 400_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DirichletError {
    #[error("heat trace is not defined: N(λ) grows faster than every e^(ελ)")]
    NotTraceClass,
    #[error("could not certify the series tail below {tol:e}")]
    TolError { tol: f64 },
    #[error("Re s = {re} is not inside the half-plane of convergence Re s > {bound}")]
    OutsideHalfPlane { re: f64, bound: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum AbscissaMethod {
    Analytic,
    NumericLimsup { indices_used: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMeta {
    pub abscissa_zeta: f64,
    /// Present when the analytic path gives a rational value.
    pub abscissa_exact: Option<Q>,
    pub heat_well_defined: bool,
    pub method: AbscissaMethod,
}

/// Neumaier-compensated accumulator; summation order is the caller's.
#[derive(Debug, Default, Clone, Copy)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// First index from which the term ratio of the heat series is monotone.
fn monotone_index(spec: &SpectrumSpec) -> u64 {
    let start = spec.first_index();
    let n = match &spec.kind {
        SpectrumKind::Polynomial { b_coeffs, .. } => {
            let lam = spec.lambda_polynomial().unwrap_or_default();
            let d2 = derivative(&derivative(&lam));
            cauchy_root_bound(b_coeffs).max(cauchy_root_bound(&d2)).ceil() as u64 + 1
        }
        SpectrumKind::Exponential { p_coeffs, .. } => cauchy_root_bound(p_coeffs).ceil() as u64 + 1,
        SpectrumKind::Explicit { pairs, .. } => pairs.len() as u64 + 16,
    };
    n.max(start)
}

fn derivative(p: &[Q]) -> Vec<Q> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer((i as i64).into())).collect()
}

fn heat_term(spec: &SpectrumSpec, n: u64, t: f64) -> f64 {
    let lam = spec.eigenvalue(n);
    if lam.is_infinite() {
        return 0.0;
    }
    spec.multiplicity(n) * (-t * lam).exp()
}

/// h_P(t) with certified tail ≤ tol; also returns the number of terms used.
pub fn heat_trace_direct_counted(spec: &SpectrumSpec, t: f64, tol: f64) -> Result<(f64, u64), DirichletError> {
    if matches!(spec.kind, SpectrumKind::Explicit { tail: Some(_), .. }) && !abscissa(spec).heat_well_defined {
        return Err(DirichletError::NotTraceClass);
    }
    let mut acc = Accumulator::default();
    for &(lam, m) in &spec.kernel {
        acc.add(m * (-t * lam).exp());
    }
    let start = spec.first_index();
    let mono = monotone_index(spec);
    let end = spec.end_index();
    let mut n = start;
    let mut term = heat_term(spec, n, t);
    loop {
        acc.add(term);
        if end.is_some_and(|e| n + 1 >= e) {
            return Ok((acc.value(), n + 1 - start));
        }
        let next = heat_term(spec, n + 1, t);
        if n >= mono {
            if next == 0.0 && (term == 0.0 || spec.eigenvalue(n + 1).is_infinite() || n > mono + 64) {
                return Ok((acc.value(), n + 1 - start));
            }
            let ratio = if term > 0.0 { next / term } else { 1.0 };
            if ratio < 1.0 {
                let tail = next / (1.0 - ratio);
                if tail <= tol {
                    acc.add(next);
                    return Ok((acc.value(), n + 2 - start));
                }
            }
        }
        n += 1;
        term = next;
        if n - start > MAX_TERMS {
            return Err(DirichletError::TolError { tol });
        }
    }
}

pub fn heat_trace_direct(spec: &SpectrumSpec, t: f64, tol: f64) -> Result<f64, DirichletError> {
    heat_trace_direct_counted(spec, t, tol).map(|r| r.0)
}

/// Continuous interpolant f(x) = M(x)λ(x)^{−s} and its derivative, for the
/// Euler–Maclaurin tail of the zeta series.
fn zeta_summand(spec: &SpectrumSpec, x: f64, s: C64) -> Option<(C64, C64)> {
    match &spec.kind {
        SpectrumKind::Polynomial { b_coeffs, .. } => {
            let lam_q = spec.lambda_polynomial()?;
            let lam: Vec<f64> = lam_q.iter().map(q_to_f64).collect();
            let dlam: Vec<f64> = derivative(&lam_q).iter().map(q_to_f64).collect();
            let b: Vec<f64> = b_coeffs.iter().map(q_to_f64).collect();
            let db: Vec<f64> = derivative(b_coeffs).iter().map(q_to_f64).collect();
            let l = crate::number::poly_eval_f64(&lam, x);
            let pw = (-s * l.ln()).exp();
            let bv = crate::number::poly_eval_f64(&b, x);
            let f = bv * pw;
            let df = (crate::number::poly_eval_f64(&db, x) - s * bv * crate::number::poly_eval_f64(&dlam, x) / l) * pw;
            Some((f, df))
        }
        SpectrumKind::Explicit { tail: Some(t), .. } => {
            let xe = x + t.offset as f64;
            let f = |y: f64| t.mult.eval(y) * (-s * (t.lambda.ln_eval(y) + scale_ln(spec))).exp();
            let h = 1e-4 * xe.abs().max(1.0);
            Some((f(xe), (f(xe + h) - f(xe - h)) / (2.0 * h)))
        }
        _ => None,
    }
}

fn scale_ln(spec: &SpectrumSpec) -> f64 {
    q_to_f64(&spec.scale).ln()
}

/// ζ_P(s) = Σ Mₙλₙ^{−s} for Re s > L + 0.1.
///
/// Exponential kinds use a geometric ratio certificate. Other kinds sum a
/// head and close with ∫_N^∞ f + f(N)/2 − f'(N)/12, the head length chosen
/// so the next Euler–Maclaurin term is below tol.
pub fn zeta_direct(spec: &SpectrumSpec, s: C64, tol: f64) -> Result<C64, DirichletError> {
    let meta = abscissa(spec);
    let bound = meta.abscissa_zeta + 0.1;
    if !(s.re > bound) {
        return Err(DirichletError::OutsideHalfPlane { re: s.re, bound });
    }
    let start = spec.first_index();
    let term = |n: u64| -> C64 { spec.multiplicity(n) * (-s * spec.ln_eigenvalue(n)).exp() };
    let mut acc = C64::zero();
    match &spec.kind {
        SpectrumKind::Exponential { .. } => {
            let mono = monotone_index(spec);
            let mut n = start;
            loop {
                let cur = term(n);
                acc += cur;
                let next = term(n + 1);
                if n >= mono {
                    let ratio = next.norm() / cur.norm();
                    if ratio < 1.0 && next.norm() / (1.0 - ratio) <= tol {
                        return Ok(acc + next);
                    }
                }
                n += 1;
                if n - start > MAX_TERMS {
                    return Err(DirichletError::TolError { tol });
                }
            }
        }
        SpectrumKind::Explicit { pairs, tail: None } => {
            let _ = pairs;
            let end = spec.end_index().unwrap_or(start);
            for n in start..end {
                acc += term(n);
            }
            Ok(acc)
        }
        _ => {
            let explicit_len = match &spec.kind {
                SpectrumKind::Explicit { pairs, .. } => pairs.len() as u64,
                _ => 0,
            };
            // p: effective decay exponent of the summand.
            let p = ((s.re - meta.abscissa_zeta) * degree_of_lambda(spec)).max(0.05) + 1.0;
            let mut n = start;
            let mut n_tail = (start + 16).max(explicit_len + 16);
            loop {
                while n < n_tail {
                    acc += term(n);
                    n += 1;
                }
                let (f, _) = zeta_summand(spec, n_tail as f64, s).ok_or(DirichletError::TolError { tol })?;
                let x = n_tail as f64;
                let next_em = f.norm() * p * (p + 1.0) * (p + 2.0) / (720.0 * x * x * x);
                if next_em <= tol || n_tail > 50_000_000 {
                    if next_em > tol {
                        return Err(DirichletError::TolError { tol });
                    }
                    break;
                }
                n_tail = (n_tail as f64 * 2.0) as u64;
            }
            let x0 = n_tail as f64;
            let (f0, df0) = zeta_summand(spec, x0, s).ok_or(DirichletError::TolError { tol })?;
            let integral = tail_integral(spec, s, x0, tol)?;
            Ok(acc + integral + 0.5 * f0 - df0 / 12.0)
        }
    }
}

fn degree_of_lambda(spec: &SpectrumSpec) -> f64 {
    match &spec.kind {
        SpectrumKind::Polynomial { .. } => spec
            .lambda_polynomial()
            .and_then(|p| poly_degree(&p))
            .map_or(1.0, |d| d as f64),
        _ => 1.0,
    }
}

/// ∫_{x0}^∞ f(x) dx via x = x0/u on (0, 1].
fn tail_integral(spec: &SpectrumSpec, s: C64, x0: f64, tol: f64) -> Result<C64, DirichletError> {
    let g = |u: f64, part: usize| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let x = x0 / u;
        match zeta_summand(spec, x, s) {
            Some((f, _)) => {
                let v = f * (x0 / (u * u));
                if part == 0 {
                    v.re
                } else {
                    v.im
                }
            }
            None => f64::NAN,
        }
    };
    let re = quadrature::double_exponential::integrate(|u| g(u, 0), 0.0, 1.0, tol * 0.1);
    let im = if s.im == 0.0 {
        0.0
    } else {
        quadrature::double_exponential::integrate(|u| g(u, 1), 0.0, 1.0, tol * 0.1).integral
    };
    if !re.integral.is_finite() {
        return Err(DirichletError::TolError { tol });
    }
    Ok(C64::new(re.integral, im))
}

/// Indices used by the numeric abscissa estimate.
pub const ABSCISSA_INDICES: u64 = 100_000;

/// Abscissa of convergence L of ζ_P and the heat-trace well-definedness flag.
pub fn abscissa(spec: &SpectrumSpec) -> SeriesMeta {
    match &spec.kind {
        SpectrumKind::Polynomial { b_coeffs, .. } => {
            let da = spec.lambda_polynomial().and_then(|p| poly_degree(&p)).unwrap_or(1) as i64;
            let db = poly_degree(b_coeffs).unwrap_or(0) as i64;
            let l = q_frac(1 + db, da);
            SeriesMeta {
                abscissa_zeta: q_to_f64(&l),
                abscissa_exact: Some(l),
                heat_well_defined: true,
                method: AbscissaMethod::Analytic,
            }
        }
        SpectrumKind::Exponential { q, power_r, mult_base, .. } => {
            let exact = mult_base.to_f64() == Some(1.0);
            let l = q_to_f64(mult_base).ln() / (q_to_f64(power_r) * -q_to_f64(q).ln());
            SeriesMeta {
                abscissa_zeta: l,
                abscissa_exact: exact.then(Q::zero),
                heat_well_defined: true,
                method: AbscissaMethod::Analytic,
            }
        }
        SpectrumKind::Explicit { .. } => numeric_abscissa(spec),
    }
}

fn numeric_abscissa(spec: &SpectrumSpec) -> SeriesMeta {
    let start = spec.first_index();
    let end = spec.end_index().unwrap_or(u64::MAX).min(start + ABSCISSA_INDICES);
    if end.saturating_sub(start) < 10 {
        // Finite spectra: ζ_P is entire and the heat trace a finite sum.
        return SeriesMeta {
            abscissa_zeta: f64::NEG_INFINITY,
            abscissa_exact: None,
            heat_well_defined: true,
            method: AbscissaMethod::NumericLimsup { indices_used: end - start },
        };
    }
    let mut count: f64 = spec.kernel.iter().map(|m| m.1).sum();
    let mut ratios = Vec::with_capacity((end - start) as usize);
    let mut growth = Vec::with_capacity((end - start) as usize);
    for n in start..end {
        count += spec.multiplicity(n);
        let ll = spec.ln_eigenvalue(n);
        ratios.push(if ll > 0.0 { count.ln() / ll } else { f64::NAN });
        let lam = ll.exp();
        growth.push(if lam.is_finite() { count.ln() / lam } else { 0.0 });
    }
    let len = ratios.len();
    let decade = &ratios[len - len / 10 ..];
    let l = decade.iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max);
    let g_end = growth[len - 1];
    let g_mid = growth[len / 10];
    SeriesMeta {
        abscissa_zeta: l,
        abscissa_exact: None,
        heat_well_defined: g_end < 0.05 && g_end <= g_mid,
        method: AbscissaMethod::NumericLimsup { indices_used: end - start },
    }
}

/// Numerical Mellin transform ∫₀^∞ h(t) t^{s−1} dt for real s > L.
///
/// [0, t_lo] contributes h(t_lo)t_lo^s/(s−L) (exact for h ∝ t^{−L}); the
/// remainder is split at 1 and closed where e^{−λ₀T} < 1e−14.
pub fn mellin_direct(spec: &SpectrumSpec, s: f64, rel_tol: f64) -> Result<f64, DirichletError> {
    let meta = abscissa(spec);
    let l = meta.abscissa_zeta;
    if !(s > l) {
        return Err(DirichletError::OutsideHalfPlane { re: s, bound: l });
    }
    let lam0 = spec
        .kernel
        .iter()
        .map(|m| m.0)
        .fold(spec.eigenvalue(spec.first_index()), f64::min);
    if lam0 <= 0.0 {
        return Err(DirichletError::OutsideHalfPlane { re: s, bound: f64::INFINITY });
    }
    let h = |t: f64| heat_trace_direct(spec, t, 1e-15 * (1.0 + 1.0 / t)).unwrap_or(f64::NAN);
    let t_lo = 1e-3;
    let mut t_max = 32.3 / lam0;
    while h(t_max) * t_max.powf(s) > 1e-14 {
        t_max *= 1.5;
    }
    let head = h(t_lo) * t_lo.powf(s) / (s - l);
    let f = |t: f64| h(t) * t.powf(s - 1.0);
    let rough = quadrature::double_exponential::integrate(f, t_lo, 1.0, 1e-6).integral
        + quadrature::double_exponential::integrate(f, 1.0, t_max, 1e-6).integral;
    let target = rel_tol * rough.abs() * 0.25;
    let a = quadrature::double_exponential::integrate(f, t_lo, 1.0, target);
    let b = quadrature::double_exponential::integrate(f, 1.0, t_max, target);
    if !(a.integral.is_finite() && b.integral.is_finite()) {
        return Err(DirichletError::TolError { tol: rel_tol });
    }
    Ok(head + a.integral + b.integral)
}
