//! Meromorphic continuation of ζ_P and the poles of Z(s) = Γ(s)ζ_P(s).
//!
//! Supported classes:
//! - A(n) = a(n+α)^g: ζ_P(s) = a^{−s} Σ_j b̃_j ζ_H(g s − j, α + n_start), with
//!   B(n) = Σ_j b̃_j (n+α)^j. Residues at Γ poles are exact Bernoulli sums.
//! - general polynomial A = a n^g (1 + u(n)): binomial expansion of
//!   (1+u)^{−s} to a finite depth J, valid for Re s > −(J − deg B)/g.
//! - λₙ = c·Q^{−n}, Mₙ = p(n)μⁿ: ζ_P(s) = c^{−s} x^{n₀} p̃(x)/(1−x)^{m+1},
//!   x = μQ^s, with p̃ assembled from Eulerian polynomials.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::number::{
    is_integer, poly_degree, poly_eval_q, poly_shift, q_frac, q_int, q_to_f64, trim_poly, Q,
};
use crate::specfun::{
    bernoulli_polynomial_q, eulerian_row, gamma, gamma_residue, hurwitz_zeta, hurwitz_zeta_ln, ln_gamma, riemann_zeta_real,
    SpecFunError, EULER_GAMMA,
};
use crate::spectrum::{SpectrumKind, SpectrumSpec};

/// Trapezoid node counts for Cauchy extraction; the coarse one is the check.
pub const CAUCHY_POINTS: (usize, usize) = (256, 512);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    /// Poles with Re s > −r_max are enumerated.
    pub r_max: f64,
    /// Poles with |Im s| ≤ y_max are enumerated.
    pub y_max: f64,
}

impl Default for Region {
    fn default() -> Self {
        Region { r_max: 12.0, y_max: 60.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassTag {
    LinearA,
    EqualRootsA,
    EvenPowerA,
    BinomialReduced { depth: usize },
    ExponentialQ,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Validity {
    Everywhere,
    /// Evaluator valid for Re s > re_above.
    HalfPlane { re_above: f64 },
}

impl Validity {
    pub fn contains(&self, s: C64) -> bool {
        match self {
            Validity::Everywhere => true,
            Validity::HalfPlane { re_above } => s.re > *re_above,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    ExactRational,
    ExactSpecial,
    NumericCauchy { radius: f64, points: usize, err_est: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleDatum {
    pub location: C64,
    pub order: usize,
    /// b_{−1}, …, b_{−order} of Z at the pole.
    pub principal: Vec<C64>,
    /// Same coefficients as exact rationals, when they are rational.
    pub exact: Option<Vec<Q>>,
    pub provenance: Provenance,
    /// Set when ζ_P looks numerically zero at a Γ pole but no exact path
    /// could confirm it; such poles are kept.
    pub flagged_zero: bool,
}

impl PoleDatum {
    fn simple(location: C64, residue: C64, exact: Option<Q>, provenance: Provenance) -> Self {
        PoleDatum {
            location,
            order: 1,
            principal: vec![residue],
            exact: exact.map(|q| vec![q]),
            provenance,
            flagged_zero: false,
        }
    }

    pub fn conj(&self) -> Self {
        PoleDatum {
            location: self.location.conj(),
            principal: self.principal.iter().map(|b| b.conj()).collect(),
            ..self.clone()
        }
    }

    pub fn err_est(&self) -> f64 {
        match self.provenance {
            Provenance::NumericCauchy { err_est, .. } => err_est,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContinuationError {
    #[error("no supported meromorphic continuation: {0}")]
    UnsupportedClass(String),
    #[error("region Re s > {requested} exceeds the validity half-plane Re s > {available}")]
    DepthInsufficient { requested: f64, available: f64 },
    #[error("no pole at the requested point")]
    NotAPole,
    #[error("Cauchy radius too small")]
    RadiusTooSmall,
    #[error("truncation index must be at least 1")]
    InvalidTruncation,
    #[error("evaluation point is a pole")]
    AtPole,
    #[error("evaluation point lies outside the validity half-plane")]
    OutsideValidity,
}

impl From<SpecFunError> for ContinuationError {
    fn from(_: SpecFunError) -> Self {
        ContinuationError::AtPole
    }
}

#[derive(Debug, Clone)]
pub struct HurwitzEval {
    pub a: Q,
    ln_a: f64,
    pub g: u32,
    /// First value of m = n + α in the summation.
    pub alpha: Q,
    alpha_f: f64,
    /// B in powers of m.
    pub b_tilde: Vec<Q>,
    b_tilde_f: Vec<f64>,
}

impl HurwitzEval {
    fn zeta(&self, s: C64) -> Result<C64, ContinuationError> {
        let mut acc = C64::zero();
        for (j, b) in self.b_tilde_f.iter().enumerate() {
            if *b != 0.0 {
                acc += *b * hurwitz_zeta(self.g as f64 * s - j as f64, self.alpha_f)?;
            }
        }
        Ok((-s * self.ln_a).exp() * acc)
    }

    fn ln_zeta(&self, s: C64) -> Result<C64, ContinuationError> {
        let mut logs = Vec::with_capacity(self.b_tilde_f.len());
        for (j, b) in self.b_tilde_f.iter().enumerate() {
            if *b != 0.0 {
                logs.push((*b, hurwitz_zeta_ln(self.g as f64 * s - j as f64, self.alpha_f)?));
            }
        }
        let top = logs.iter().map(|l| l.1.re).fold(f64::NEG_INFINITY, f64::max);
        let sum: C64 = logs.iter().map(|(b, l)| *b * (l - top).exp()).sum();
        Ok(-s * self.ln_a + top + sum.ln())
    }

    /// ζ_P(−k) = a^k Σ_j b̃_j·(−B_{gk+j+1}(α)/(gk+j+1)), exactly.
    pub fn zeta_neg_int(&self, k: u32) -> Q {
        let mut acc = Q::zero();
        for (j, b) in self.b_tilde.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let n = self.g as usize * k as usize + j + 1;
            acc -= b * bernoulli_polynomial_q(n, &self.alpha) / q_int(n as i64);
        }
        acc * num_traits::pow(self.a.clone(), k as usize)
    }
}

#[derive(Debug, Clone)]
pub struct BinomialEval {
    a: Q,
    ln_a: f64,
    g: u32,
    n_start: u64,
    lam: Vec<f64>,
    b: Vec<f64>,
    deg_b: usize,
    depth: usize,
    u_size: f64,
    /// exponent shift e ↦ [(j, Σ_{l−i=e} c_{j,l} b_i)].
    terms: Vec<(i64, Vec<(usize, f64)>)>,
    terms_exact: BTreeMap<i64, Vec<(usize, Q)>>,
}

impl BinomialEval {
    fn new(lam_q: &[Q], b_q: &[Q], n_start: u64, depth: usize) -> Self {
        let g = poly_degree(lam_q).unwrap_or(1);
        let a = lam_q[g].clone();
        // u(n) = Σ_{l=1}^{g} u_l n^{−l}
        let u: Vec<Q> = (0..=g).map(|l| if l == 0 { Q::zero() } else { &lam_q[g - l] / &a }).collect();
        let u_size = u.iter().map(|c| q_to_f64(c).abs()).sum::<f64>();
        let b_q = trim_poly(b_q.to_vec());
        let mut terms_exact: BTreeMap<i64, Vec<(usize, Q)>> = BTreeMap::new();
        let mut power = vec![Q::one()];
        for j in 0..=depth {
            if j > 0 {
                power = crate::number::poly_mul(&power, &u);
            }
            for (l, c) in power.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (i, bi) in b_q.iter().enumerate() {
                    if bi.is_zero() {
                        continue;
                    }
                    let e = l as i64 - i as i64;
                    let slot = terms_exact.entry(e).or_default();
                    match slot.iter_mut().find(|(jj, _)| *jj == j) {
                        Some((_, v)) => *v += c * bi,
                        None => slot.push((j, c * bi)),
                    }
                }
            }
        }
        let terms = terms_exact
            .iter()
            .map(|(e, v)| (*e, v.iter().map(|(j, c)| (*j, q_to_f64(c))).collect()))
            .collect();
        BinomialEval {
            ln_a: q_to_f64(&a).ln(),
            a,
            g: g as u32,
            n_start,
            lam: lam_q.iter().map(q_to_f64).collect(),
            b: b_q.iter().map(q_to_f64).collect(),
            deg_b: b_q.len().saturating_sub(1),
            depth,
            u_size,
            terms,
            terms_exact,
        }
    }

    fn validity(&self) -> f64 {
        -((self.depth as f64 - self.deg_b as f64) / self.g as f64)
    }

    fn cutoff(&self, s: C64) -> u64 {
        let g = self.g as f64;
        let j = self.depth as f64;
        let min_e = self.terms.first().map_or(0, |t| t.0).min(0) as f64;
        let n1 = 4.0 * self.u_size * (s.norm() + j);
        let n2 = g * s.norm() + g * j - min_e + 2.0;
        (n1.max(n2).max(16.0).ceil() as u64).max(self.n_start)
    }

    fn zeta(&self, s: C64) -> Result<C64, ContinuationError> {
        let n_cut = self.cutoff(s);
        let mut head = C64::zero();
        for n in self.n_start..n_cut {
            let x = n as f64;
            let l = crate::number::poly_eval_f64(&self.lam, x);
            head += crate::number::poly_eval_f64(&self.b, x) * (-s * l.ln()).exp();
        }
        let mut binom = vec![C64::new(1.0, 0.0); self.depth + 1];
        for j in 1..=self.depth {
            binom[j] = binom[j - 1] * (-s - (j as f64 - 1.0)) / j as f64;
        }
        let mut tail = C64::zero();
        for (e, list) in &self.terms {
            let coef: C64 = list.iter().map(|(j, c)| binom[*j] * *c).sum();
            if coef == C64::zero() {
                continue;
            }
            tail += coef * hurwitz_zeta(self.g as f64 * s + *e as f64, n_cut as f64)?;
        }
        Ok(head + (-s * self.ln_a).exp() * tail)
    }

    /// Exact coefficient sum S* such that Res_{s*} ζ_P = a^{−s*} S*/g.
    fn residue_sum(&self, s_star: &Q, e: i64) -> Q {
        let Some(list) = self.terms_exact.get(&e) else { return Q::zero() };
        let mut acc = Q::zero();
        for (j, c) in list {
            acc += binom_neg_q(s_star, *j) * c;
        }
        acc
    }
}

/// binom(−s, j) for rational s.
fn binom_neg_q(s: &Q, j: usize) -> Q {
    let mut acc = Q::one();
    for i in 0..j {
        acc = acc * (-s - q_int(i as i64)) / q_int(i as i64 + 1);
    }
    acc
}

#[derive(Debug, Clone)]
pub struct ExponentialEval {
    pub ln_c: f64,
    pub ln_mu: f64,
    /// log Q < 0, where λₙ = c·Q^{−n}.
    pub ln_q: f64,
    pub n0: u64,
    /// Numerator polynomial p̃(x) of degree ≤ m.
    pub p_tilde: Vec<Q>,
    p_tilde_f: Vec<f64>,
    pub m: usize,
}

impl ExponentialEval {
    fn new(ln_c: f64, ln_mu: f64, ln_q: f64, n0: u64, p: &[Q]) -> Self {
        // p̂(k) = p(n0 + k) = Σ d_j k^j
        let d = trim_poly(poly_shift(p, &q_int(n0 as i64)));
        let m = d.len().saturating_sub(1);
        let one_minus_x = vec![Q::one(), -Q::one()];
        let pow = |e: usize| -> Vec<Q> {
            let mut acc = vec![Q::one()];
            for _ in 0..e {
                acc = crate::number::poly_mul(&acc, &one_minus_x);
            }
            acc
        };
        let mut num = vec![Q::zero(); m + 2];
        for (j, dj) in d.iter().enumerate() {
            if dj.is_zero() {
                continue;
            }
            // Σ_k k^j x^k = x A_j(x)/(1−x)^{j+1} for j ≥ 1, 1/(1−x) for j = 0
            let numer = if j == 0 {
                vec![Q::one()]
            } else {
                let mut v = vec![Q::zero()];
                v.extend(eulerian_row(j).into_iter().map(|e| Q::from_integer(e.into())));
                v
            };
            let full = crate::number::poly_mul(&numer, &pow(m - j));
            for (i, c) in full.into_iter().enumerate() {
                if i < num.len() {
                    num[i] += dj * c;
                } else {
                    num.push(dj * c);
                }
            }
        }
        let p_tilde = trim_poly(num);
        ExponentialEval {
            ln_c,
            ln_mu,
            ln_q,
            n0,
            p_tilde_f: p_tilde.iter().map(q_to_f64).collect(),
            p_tilde,
            m,
        }
    }

    fn zeta(&self, s: C64) -> Result<C64, ContinuationError> {
        let w = self.ln_mu + s * self.ln_q;
        let x = w.exp();
        let den = 1.0 - x;
        if den.norm() == 0.0 {
            return Err(ContinuationError::AtPole);
        }
        let mut p = C64::zero();
        for c in self.p_tilde_f.iter().rev() {
            p = p * x + *c;
        }
        let log_val = -s * self.ln_c + self.n0 as f64 * w + p.ln() - (self.m as f64 + 1.0) * den.ln();
        Ok(log_val.exp())
    }

    /// Real part of the pole line x = 1.
    pub fn pole_re(&self) -> f64 {
        -self.ln_mu / self.ln_q
    }

    /// Imaginary spacing 2π/|log Q| of the poles.
    pub fn pole_spacing(&self) -> f64 {
        2.0 * PI / self.ln_q.abs()
    }

    pub fn p_tilde_at_one(&self) -> f64 {
        self.p_tilde_f.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub enum Evaluator {
    Hurwitz(HurwitzEval),
    Binomial(BinomialEval),
    Exponential(ExponentialEval),
}

#[derive(Debug, Clone)]
pub struct ContinuationData {
    pub class_tag: ClassTag,
    pub validity: Validity,
    pub region: Region,
    /// Sorted by decreasing real part, then increasing |Im|, Im < 0 first.
    pub z_poles: Vec<PoleDatum>,
    /// Γ poles −k whose residue vanishes exactly (ζ_P(−k) = 0).
    pub cancelled: Vec<u32>,
    /// Modes (λ, M) whose heat contribution e^{−tλ}M is added exactly; the
    /// evaluator describes ζ of the spectrum without them.
    pub head: Vec<(f64, f64)>,
    pub evaluator: Evaluator,
}

impl ContinuationData {
    pub fn zeta(&self, s: C64) -> Result<C64, ContinuationError> {
        if !self.validity.contains(s) {
            return Err(ContinuationError::OutsideValidity);
        }
        match &self.evaluator {
            Evaluator::Hurwitz(h) => h.zeta(s),
            Evaluator::Binomial(b) => b.zeta(s),
            Evaluator::Exponential(e) => e.zeta(s),
        }
    }

    pub fn z(&self, s: C64) -> Result<C64, ContinuationError> {
        Ok(gamma(s)? * self.zeta(s)?)
    }

    /// log Z(s), finite where Γ(s) alone would underflow.
    pub fn ln_z(&self, s: C64) -> Result<C64, ContinuationError> {
        if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
            return Err(ContinuationError::AtPole);
        }
        Ok(ln_gamma(s) + self.ln_zeta(s)?)
    }

    /// log ζ_P(s).
    pub fn ln_zeta(&self, s: C64) -> Result<C64, ContinuationError> {
        match &self.evaluator {
            Evaluator::Hurwitz(h) if self.validity.contains(s) => h.ln_zeta(s),
            _ => Ok(self.zeta(s)?.ln()),
        }
    }

    pub fn head_heat(&self, t: f64) -> f64 {
        let mut acc = crate::dirichlet::Accumulator::default();
        for &(lam, m) in &self.head {
            acc.add(m * (-t * lam).exp());
        }
        acc.value()
    }

    pub fn max_pole_re(&self) -> f64 {
        self.z_poles.iter().map(|p| p.location.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn hurwitz(&self) -> Option<&HurwitzEval> {
        match &self.evaluator {
            Evaluator::Hurwitz(h) => Some(h),
            _ => None,
        }
    }

    pub fn exponential(&self) -> Option<&ExponentialEval> {
        match &self.evaluator {
            Evaluator::Exponential(e) => Some(e),
            _ => None,
        }
    }

    /// True when the enumerated poles exhaust all poles of Z.
    pub fn finite_pole_set(&self) -> bool {
        match &self.evaluator {
            Evaluator::Hurwitz(h) => {
                // Γ poles survive only where the Bernoulli sums are nonzero;
                // check a long stretch exactly.
                (1..=40).all(|k| h.zeta_neg_int(k).is_zero())
            }
            _ => false,
        }
    }
}

/// a and α with Ã(n) = a(n+α)^g, when the eigenvalue polynomial has a single
/// root of full multiplicity.
fn equal_roots(lam: &[Q]) -> Option<(Q, Q, usize)> {
    let g = poly_degree(lam)?;
    let a = lam[g].clone();
    let alpha = &lam[g - 1] / (&a * q_int(g as i64));
    let mut monomial = vec![Q::zero(); g + 1];
    monomial[g] = a.clone();
    let expanded = poly_shift(&monomial, &alpha);
    (expanded == trim_poly(lam.to_vec())).then_some((a, alpha, g))
}

/// Continuation for the supported classes, with poles of Z enumerated in
/// `region`. `depth` is the binomial depth J (raised automatically when the
/// region needs more).
pub fn continue_zeta(spec: &SpectrumSpec, region: Region, depth: usize) -> Result<ContinuationData, ContinuationError> {
    let mut head: Vec<(f64, f64)> = spec.kernel.clone();
    match &spec.kind {
        SpectrumKind::Polynomial { b_coeffs, n_start, .. } => {
            let lam = spec.lambda_polynomial().ok_or(ContinuationError::UnsupportedClass("empty".into()))?;
            polynomial_continuation(&lam, b_coeffs, *n_start, region, depth, head)
        }
        SpectrumKind::Exponential { q, p_coeffs, power_r, mult_base, n_start } => {
            if !spec.shift.is_zero() {
                return Err(ContinuationError::UnsupportedClass(
                    "shifted exponential spectra have no rational zeta form".into(),
                ));
            }
            let ln_q = q_to_f64(power_r) * q_to_f64(q).ln();
            let eval = ExponentialEval::new(
                q_to_f64(&spec.scale).ln(),
                q_to_f64(mult_base).ln(),
                ln_q,
                *n_start,
                p_coeffs,
            );
            exponential_continuation(eval, region, head)
        }
        SpectrumKind::Explicit { pairs, tail } => {
            let Some(t) = tail else {
                return Err(ContinuationError::UnsupportedClass("finite explicit list".into()));
            };
            let (Some(l), Some(m)) = (t.lambda.to_polynomial(), t.mult.to_polynomial()) else {
                return Err(ContinuationError::UnsupportedClass(format!(
                    "tail λ = {} has no supported structure",
                    t.lambda_src
                )));
            };
            let first = pairs.len() as i64 + t.offset;
            if first < 0 {
                return Err(ContinuationError::UnsupportedClass("negative tail index".into()));
            }
            let scale = spec.scale.clone();
            let shift = spec.shift.clone();
            let mut lam: Vec<Q> = l.into_iter().map(|c| c * &scale).collect();
            if lam.is_empty() {
                lam.push(Q::zero());
            }
            lam[0] += &scale * &shift;
            for &(l0, m0) in pairs {
                head.push((q_to_f64(&scale) * (l0 + q_to_f64(&shift)), m0));
            }
            polynomial_continuation(&trim_poly(lam), &m, first as u64, region, depth, head)
        }
    }
}

/// Same as `continue_zeta` for the spectrum with its first `n` indices moved
/// into the exactly summed head.
pub fn truncated_zeta(
    spec: &SpectrumSpec,
    n: u64,
    region: Region,
    depth: usize,
) -> Result<ContinuationData, ContinuationError> {
    if n == 0 {
        return Err(ContinuationError::InvalidTruncation);
    }
    let shifted = spec.shifted(n).map_err(|e| ContinuationError::UnsupportedClass(e.to_string()))?;
    let mut data = continue_zeta(&shifted, region, depth)?;
    let start = spec.first_index();
    let mut head = spec.kernel.clone();
    for k in start..start + n {
        head.push((spec.eigenvalue(k), spec.multiplicity(k)));
    }
    head.extend(data.head.iter().copied());
    data.head = head;
    Ok(data)
}

fn polynomial_continuation(
    lam: &[Q],
    b: &[Q],
    n_start: u64,
    region: Region,
    depth: usize,
    mut head: Vec<(f64, f64)>,
) -> Result<ContinuationData, ContinuationError> {
    if let Some((a, alpha, g)) = equal_roots(lam) {
        let mut alpha1 = &alpha + q_int(n_start as i64);
        if alpha1.is_positive() {
            // B in powers of m = n + α
            let b_tilde = trim_poly(poly_shift(b, &-alpha.clone()));
            let even_b = b_tilde.iter().enumerate().all(|(j, c)| j % 2 == 0 || c.is_zero());
            let two_alpha = &alpha1 * q_int(2);
            let even = g % 2 == 0 && even_b && is_integer(&two_alpha);
            let tag = if g == 1 {
                ClassTag::LinearA
            } else if even {
                ClassTag::EvenPowerA
            } else {
                ClassTag::EqualRootsA
            };
            if even {
                // Extend the sum down to m ∈ {½, 1} and subtract the added
                // modes exactly, so every Γ pole below 0 cancels.
                let base = if is_integer(&alpha1) { Q::one() } else { q_frac(1, 2) };
                while alpha1 > base {
                    alpha1 -= Q::one();
                    let lam_m = &a * num_traits::pow(alpha1.clone(), g);
                    let mult = poly_eval_q(&b_tilde, &alpha1);
                    head.push((q_to_f64(&lam_m), -q_to_f64(&mult)));
                }
            }
            let eval = HurwitzEval {
                ln_a: q_to_f64(&a).ln(),
                a,
                g: g as u32,
                alpha_f: q_to_f64(&alpha1),
                alpha: alpha1,
                b_tilde_f: b_tilde.iter().map(q_to_f64).collect(),
                b_tilde,
            };
            return hurwitz_continuation(eval, tag, region, head);
        }
    }
    let g = poly_degree(lam).unwrap_or(1);
    let deg_b = poly_degree(b).unwrap_or(0);
    let needed = (g as f64 * region.r_max).ceil() as usize + deg_b + 2;
    let depth = depth.max(needed);
    let eval = BinomialEval::new(lam, b, n_start.max(1), depth);
    // n = 0 (when present) is summed into the head; n^{−gs} is undefined there.
    if n_start == 0 {
        head.push((q_to_f64(&lam[0]), q_to_f64(b.first().unwrap_or(&Q::zero()))));
    }
    binomial_continuation(eval, region, head)
}

fn hurwitz_continuation(
    eval: HurwitzEval,
    tag: ClassTag,
    region: Region,
    head: Vec<(f64, f64)>,
) -> Result<ContinuationData, ContinuationError> {
    let g = eval.g as i64;
    let mut poles = Vec::new();
    for (j, b) in eval.b_tilde.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let s_star = q_frac(j as i64 + 1, g);
        let s_f = q_to_f64(&s_star);
        let zeta_res = b / q_int(g);
        if is_integer(&s_star) {
            let k = s_star.to_integer().to_i64().unwrap_or(1);
            let fact: Q = (1..k).fold(Q::one(), |acc, i| acc * q_int(i));
            let exact = fact * zeta_res * num_traits::pow(eval.a.clone().recip(), k as usize);
            poles.push(PoleDatum::simple(
                C64::new(s_f, 0.0),
                C64::new(q_to_f64(&exact), 0.0),
                Some(exact),
                Provenance::ExactRational,
            ));
        } else {
            let res = crate::specfun::gamma_real(s_f)? * (-s_f * eval.ln_a).exp() * q_to_f64(&zeta_res);
            poles.push(PoleDatum::simple(C64::new(s_f, 0.0), C64::new(res, 0.0), None, Provenance::ExactSpecial));
        }
    }
    let mut cancelled = Vec::new();
    let mut k = 0u32;
    while -(k as f64) > -region.r_max {
        let v = eval.zeta_neg_int(k);
        if v.is_zero() {
            cancelled.push(k);
        } else {
            let res = gamma_residue(k) * v;
            poles.push(PoleDatum::simple(
                C64::new(-(k as f64), 0.0),
                C64::new(q_to_f64(&res), 0.0),
                Some(res),
                Provenance::ExactRational,
            ));
        }
        k += 1;
    }
    sort_poles(&mut poles);
    Ok(ContinuationData {
        class_tag: tag,
        validity: Validity::Everywhere,
        region,
        z_poles: poles,
        cancelled,
        head,
        evaluator: Evaluator::Hurwitz(eval),
    })
}

fn binomial_continuation(
    eval: BinomialEval,
    region: Region,
    head: Vec<(f64, f64)>,
) -> Result<ContinuationData, ContinuationError> {
    let available = eval.validity();
    if -region.r_max < available {
        return Err(ContinuationError::DepthInsufficient { requested: -region.r_max, available });
    }
    let g = eval.g as i64;
    let mut data = ContinuationData {
        class_tag: ClassTag::BinomialReduced { depth: eval.depth },
        validity: Validity::HalfPlane { re_above: available },
        region,
        z_poles: Vec::new(),
        cancelled: Vec::new(),
        head,
        evaluator: Evaluator::Binomial(eval.clone()),
    };
    let mut poles = Vec::new();
    let mut double_at = Vec::new();
    for &e in eval.terms_exact.keys() {
        let s_star = q_frac(1 - e, g);
        let s_f = q_to_f64(&s_star);
        if s_f <= -region.r_max {
            continue;
        }
        let sum = eval.residue_sum(&s_star, e);
        if sum.is_zero() {
            continue;
        }
        if is_integer(&s_star) && !s_star.is_positive() {
            double_at.push(-s_f as u32);
            continue;
        }
        let zeta_res = &sum / q_int(g);
        if is_integer(&s_star) {
            let k = s_star.to_integer().to_i64().unwrap_or(1);
            let fact: Q = (1..k).fold(Q::one(), |acc, i| acc * q_int(i));
            let exact = fact * zeta_res * num_traits::pow(eval.a.clone().recip(), k as usize);
            poles.push(PoleDatum::simple(
                C64::new(s_f, 0.0),
                C64::new(q_to_f64(&exact), 0.0),
                Some(exact),
                Provenance::ExactRational,
            ));
        } else {
            let res = crate::specfun::gamma_real(s_f)? * (-s_f * eval.ln_a).exp() * q_to_f64(&zeta_res);
            poles.push(PoleDatum::simple(C64::new(s_f, 0.0), C64::new(res, 0.0), None, Provenance::ExactSpecial));
        }
    }
    let zeta_pole_res: Vec<f64> = poles.iter().map(|p| p.location.re).collect();
    let mut k = 0u32;
    while -(k as f64) > -region.r_max {
        let s0 = C64::new(-(k as f64), 0.0);
        let nearest = zeta_pole_res
            .iter()
            .map(|r| (r - s0.re).abs())
            .chain(std::iter::once(1.0))
            .fold(1.0f64, f64::min);
        let radius = 0.5 * nearest.min(1.0 / g as f64);
        let hint = if double_at.contains(&k) { 2 } else { 1 };
        match cauchy_laurent(|s| data.z(s), s0, radius, hint) {
            Ok(mut p) => {
                let scale = p.principal.iter().map(|b| b.norm()).fold(0.0, f64::max);
                if scale < 1e-12 * (1.0 + gamma_residue(k).to_f64().unwrap_or(1.0).abs()) {
                    p.flagged_zero = true;
                }
                poles.push(p);
            }
            Err(ContinuationError::NotAPole) => {
                // Numerically zero residue: keep a flagged zero entry.
                poles.push(PoleDatum {
                    location: s0,
                    order: 1,
                    principal: vec![C64::zero()],
                    exact: None,
                    provenance: Provenance::NumericCauchy {
                        radius,
                        points: CAUCHY_POINTS.1,
                        err_est: 0.0,
                    },
                    flagged_zero: true,
                });
            }
            Err(e) => return Err(e),
        }
        k += 1;
    }
    sort_poles(&mut poles);
    data.z_poles = poles;
    Ok(data)
}

fn exponential_continuation(
    eval: ExponentialEval,
    region: Region,
    head: Vec<(f64, f64)>,
) -> Result<ContinuationData, ContinuationError> {
    let mut data = ContinuationData {
        class_tag: ClassTag::ExponentialQ,
        validity: Validity::Everywhere,
        region,
        z_poles: Vec::new(),
        cancelled: Vec::new(),
        head,
        evaluator: Evaluator::Exponential(eval.clone()),
    };
    let mut poles = Vec::new();
    let sigma = eval.pole_re();
    let spacing = eval.pole_spacing();
    let origin_hit = eval.ln_mu == 0.0;
    if sigma > -region.r_max {
        let mut k = 0i64;
        while k as f64 * spacing <= region.y_max {
            let s_k = C64::new(sigma, k as f64 * spacing);
            let pole = if k == 0 && origin_hit {
                exponential_origin(&eval)
            } else if eval.m == 0 {
                let res = gamma(s_k)? * (-s_k * eval.ln_c).exp() * eval.p_tilde_at_one() / (-eval.ln_q);
                PoleDatum::simple(s_k, res, None, Provenance::ExactSpecial)
            } else {
                let mut radius = 0.5 * spacing;
                if sigma.abs() < 1.0 {
                    radius = radius.min(0.5 * (s_k - C64::new(sigma.round().min(0.0), 0.0)).norm());
                }
                cauchy_laurent(|s| data.z(s), s_k, radius, eval.m + 1)?
            };
            if k > 0 {
                poles.push(pole.conj());
            }
            poles.push(pole);
            k += 1;
        }
    }
    let mut n = if origin_hit { 1u32 } else { 0 };
    while -(n as f64) > -region.r_max {
        let s0 = C64::new(-(n as f64), 0.0);
        let v = eval.zeta(s0)?.re;
        let res = q_to_f64(&gamma_residue(n)) * v;
        let mut p = PoleDatum::simple(s0, C64::new(res, 0.0), None, Provenance::ExactSpecial);
        let local = (-(n as f64) * eval.ln_c).exp().max(1.0);
        p.flagged_zero = v.abs() < 1e-12 * local;
        poles.push(p);
        n += 1;
    }
    sort_poles(&mut poles);
    data.z_poles = poles;
    Ok(data)
}

/// Z at s = 0 for μ = 1: Z = w^{−(m+2)}(−L)^{−(m+1)} G(w) with
/// G = Γ(1+w)·c^{−w}·e^{n₀Lw}·p̃(e^{Lw})·E(w)^{−(m+1)}, E(w) = (e^{Lw}−1)/(Lw).
fn exponential_origin(eval: &ExponentialEval) -> PoleDatum {
    let m = eval.m;
    let order = m + 2;
    let l = eval.ln_q;
    let len = order;
    // exponent: −γw + Σ_{k≥2} (−1)^k ζ(k) w^k/k − w ln c + n₀ L w − (m+1) ln E(w)
    let mut expo = vec![0.0; len];
    if len > 1 {
        expo[1] = -EULER_GAMMA - eval.ln_c + eval.n0 as f64 * l;
    }
    for (k, slot) in expo.iter_mut().enumerate().skip(2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *slot += sign * riemann_zeta_real(k as f64).unwrap_or(f64::NAN) / k as f64;
    }
    let mut e_series = vec![0.0; len];
    let mut fact = 1.0;
    for (k, slot) in e_series.iter_mut().enumerate() {
        fact *= (k + 1) as f64;
        *slot = l.powi(k as i32) / fact;
    }
    let ln_e = ps_log(&e_series);
    for k in 0..len {
        expo[k] -= (m as f64 + 1.0) * ln_e[k];
    }
    let mut g = ps_exp(&expo);
    // p̃(e^{Lw}) = Σ_i p̃_i e^{iLw}
    let mut p_series = vec![0.0; len];
    for (i, c) in eval.p_tilde_f.iter().enumerate() {
        let mut term = *c;
        for (k, slot) in p_series.iter_mut().enumerate() {
            if k > 0 {
                term *= i as f64 * l / k as f64;
            }
            *slot += term;
        }
    }
    g = ps_mul(&g, &p_series);
    let pref = (-l).powi(-(m as i32 + 1));
    let principal: Vec<C64> = (1..=order).map(|k| C64::new(pref * g[order - k], 0.0)).collect();
    PoleDatum {
        location: C64::zero(),
        order,
        principal,
        exact: None,
        provenance: Provenance::ExactSpecial,
        flagged_zero: false,
    }
}

fn ps_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

fn ps_exp(a: &[f64]) -> Vec<f64> {
    // f = exp(a): f' = a' f
    let n = a.len();
    let mut f = vec![0.0; n];
    if n == 0 {
        return f;
    }
    f[0] = a[0].exp();
    for k in 1..n {
        f[k] = (1..=k).map(|i| i as f64 * a[i] * f[k - i]).sum::<f64>() / k as f64;
    }
    f
}

fn ps_log(a: &[f64]) -> Vec<f64> {
    // f = ln a: a f' = a'
    let n = a.len();
    let mut f = vec![0.0; n];
    if n == 0 {
        return f;
    }
    f[0] = a[0].ln();
    for k in 1..n {
        let mut v = k as f64 * a[k];
        for i in 1..k {
            v -= i as f64 * f[i] * a[k - i];
        }
        f[k] = v / (k as f64 * a[0]);
    }
    f
}

fn sort_poles(poles: &mut [PoleDatum]) {
    poles.sort_by(|p, q| {
        q.location
            .re
            .total_cmp(&p.location.re)
            .then(p.location.im.abs().total_cmp(&q.location.im.abs()))
            .then(p.location.im.total_cmp(&q.location.im))
    });
}

/// Trapezoid Cauchy integrals b_{−k} = (1/M) Σ f(s₀+ρω)(ρω)^k, k = 1..=kmax.
fn cauchy_coeffs<F>(f: &F, s0: C64, rho: f64, points: usize, kmax: usize) -> Result<(Vec<C64>, f64), ContinuationError>
where
    F: Fn(C64) -> Result<C64, ContinuationError>,
{
    let mut b = vec![C64::zero(); kmax];
    let mut scale: f64 = 0.0;
    for j in 0..points {
        let theta = 2.0 * PI * (j as f64 + 0.5) / points as f64;
        let w = C64::from_polar(rho, theta);
        let v = f(s0 + w)?;
        scale = scale.max(v.norm());
        let mut wk = w;
        for bk in b.iter_mut() {
            *bk += v * wk;
            wk *= w;
        }
    }
    for bk in b.iter_mut() {
        *bk /= points as f64;
    }
    Ok((b, scale))
}

/// Numeric principal part of f at s0 on a circle of radius `radius`.
pub fn cauchy_laurent<F>(f: F, s0: C64, radius: f64, order_hint: usize) -> Result<PoleDatum, ContinuationError>
where
    F: Fn(C64) -> Result<C64, ContinuationError>,
{
    if !(radius > 1e-6) {
        return Err(ContinuationError::RadiusTooSmall);
    }
    let kmax = order_hint + 1;
    let (coarse, _) = cauchy_coeffs(&f, s0, radius, CAUCHY_POINTS.0, kmax)?;
    let (fine, scale) = cauchy_coeffs(&f, s0, radius, CAUCHY_POINTS.1, kmax)?;
    let mut order = 0;
    for (k, b) in fine.iter().enumerate() {
        if b.norm() > 1e-11 * scale * radius.powi(k as i32 + 1) {
            order = k + 1;
        }
    }
    if order == 0 {
        return Err(ContinuationError::NotAPole);
    }
    let err_est = coarse.iter().zip(&fine).take(order).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let mut principal: Vec<C64> = fine[..order].to_vec();
    if s0.im == 0.0 {
        for b in principal.iter_mut() {
            b.im = 0.0;
        }
    }
    Ok(PoleDatum {
        location: s0,
        order,
        principal,
        exact: None,
        provenance: Provenance::NumericCauchy { radius, points: CAUCHY_POINTS.1, err_est },
        flagged_zero: false,
    })
}

/// Principal part of Z at s0: the enumerated datum when s0 is a known pole,
/// otherwise a Cauchy probe with radius half the distance to the nearest
/// other singularity.
pub fn laurent_at(data: &ContinuationData, s0: C64, order_hint: usize) -> Result<PoleDatum, ContinuationError> {
    if let Some(p) = data.z_poles.iter().find(|p| (p.location - s0).norm() < 1e-12) {
        return Ok(p.clone());
    }
    let mut nearest = f64::INFINITY;
    for p in &data.z_poles {
        let d = (p.location - s0).norm();
        if d > 1e-12 {
            nearest = nearest.min(d);
        }
    }
    // Γ poles that are cancelled or outside the enumerated region.
    let k = (-s0.re).round().max(0.0);
    for kk in [k - 1.0, k, k + 1.0] {
        if kk >= 0.0 {
            let d = (C64::new(-kk, 0.0) - s0).norm();
            if d > 1e-12 {
                nearest = nearest.min(d);
            }
        }
    }
    if let Evaluator::Exponential(e) = &data.evaluator {
        nearest = nearest.min(e.pole_spacing());
    }
    let radius = if nearest.is_finite() { 0.5 * nearest } else { 0.5 };
    cauchy_laurent(|s| data.z(s), s0, radius, order_hint)
}
