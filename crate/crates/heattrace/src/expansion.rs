//! Heat-trace expansions from the poles of Z(s) = Γ(s)ζ_P(s).
//!
//! h(t) = head(t) + Σ_{strips} φₙ(t) + F_R(t), where each pole s₀ of order n
//! contributes r(t) = t^{−s₀} Σ_{k<n} b_{−k−1}/k!·(−log t)^k and
//! F_R(t) = (1/π) ∫₀^∞ Re[Z(−R+iy) t^{R−iy}] dy.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::continuation::{
    continue_zeta, ClassTag, ContinuationData, ContinuationError, Evaluator, PoleDatum, Provenance, Region,
};
use crate::dirichlet::{heat_trace_direct, DirichletError};
use crate::number::{q_int, q_to_f64, Q};
use crate::specfun::{riemann_zeta_real, theta3, theta4};
use crate::spectrum::SpectrumSpec;

/// Default binomial depth.
pub const DEFAULT_DEPTH: usize = 24;
/// Default height for enumerating complex poles.
pub const DEFAULT_Y_MAX: f64 = 60.0;
/// Default count of vertical samples for remainder fits.
pub const DEFAULT_FIT_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpansionError {
    #[error("no meromorphic continuation: {0}")]
    NoContinuation(String),
    #[error("continuation does not reach Re s = {needed}")]
    DepthInsufficient { needed: f64 },
    #[error("a pole of Z lies on the line Re s = {re}")]
    PoleOnLine { re: f64 },
    #[error("Z is not integrable along Re s = {re} (fitted decay {eps})")]
    NonIntegrableLine { re: f64, eps: f64 },
    #[error("need at least {need} remainder bounds, got {got}")]
    InsufficientData { need: usize, got: usize },
    #[error(transparent)]
    Continuation(#[from] ContinuationError),
    #[error(transparent)]
    Direct(#[from] DirichletError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerm {
    pub s0: C64,
    /// c₀..c_{n−1}: the term is t^{−s₀}·Σ c_k(−log t)^k.
    pub log_coeffs: Vec<C64>,
    pub exact: Option<Vec<Q>>,
    pub provenance: Provenance,
}

impl ExpansionTerm {
    pub fn eval(&self, t: f64) -> C64 {
        let lt = -t.ln();
        let mut acc = C64::zero();
        let mut p = 1.0;
        for c in &self.log_coeffs {
            acc += c * p;
            p *= lt;
        }
        acc * (-self.s0 * t.ln()).exp()
    }

    pub fn log_degree(&self) -> usize {
        self.log_coeffs.len().saturating_sub(1)
    }
}

/// c_k = b_{−k−1}/k!.
pub fn residue_term(pole: &PoleDatum) -> ExpansionTerm {
    let mut fact = 1.0;
    let mut coeffs = Vec::with_capacity(pole.order);
    for (k, b) in pole.principal.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        coeffs.push(b / fact);
    }
    let exact = pole.exact.as_ref().map(|bs| {
        let mut f = Q::from_integer(1.into());
        bs.iter()
            .enumerate()
            .map(|(k, b)| {
                if k > 0 {
                    f *= q_int(k as i64);
                }
                b / &f
            })
            .collect()
    });
    ExpansionTerm { s0: pole.location, log_coeffs: coeffs, exact, provenance: pole.provenance.clone() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripPlan {
    /// R₀ < R₁ < …; strip n lies between Re s = −Rₙ and Re s = −R_{n−1}.
    pub r_seq: Vec<f64>,
    /// Per strip: y₀ = 0 < y₁ < … horizontal cut heights.
    pub y_seqs: Vec<Vec<f64>>,
    /// Per strip, per cell: indices into `ContinuationData::z_poles`.
    pub pole_groups: Vec<Vec<Vec<usize>>>,
}

fn distinct_sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    v
}

/// Abscissae at midpoints between consecutive pole real parts; unit steps
/// once the (finite) pole set is exhausted.
pub fn plan_strips(data: &ContinuationData, num_strips: usize) -> Result<StripPlan, ExpansionError> {
    let sigmas = distinct_sorted_desc(data.z_poles.iter().map(|p| p.location.re).collect());
    let finite = data.finite_pole_set();
    let top = sigmas.first().copied().unwrap_or(0.0);
    let mut r_seq = vec![-(top + 0.5)];
    for n in 1..=num_strips {
        let r = if n < sigmas.len() {
            -0.5 * (sigmas[n - 1] + sigmas[n])
        } else if finite {
            if n == sigmas.len() {
                -sigmas[n - 1] + 0.5
            } else {
                r_seq[n - 1] + 1.0
            }
        } else {
            return Err(ExpansionError::DepthInsufficient { needed: r_seq[n - 1] + 1.0 });
        };
        r_seq.push(r);
    }
    if !finite && r_seq[num_strips] >= data.region.r_max {
        return Err(ExpansionError::DepthInsufficient { needed: r_seq[num_strips] });
    }
    let mut y_seqs = Vec::with_capacity(num_strips);
    let mut pole_groups = Vec::with_capacity(num_strips);
    for n in 1..=num_strips {
        let (lo, hi) = (-r_seq[n], -r_seq[n - 1]);
        let members: Vec<usize> = (0..data.z_poles.len())
            .filter(|&i| {
                let re = data.z_poles[i].location.re;
                re > lo && re < hi
            })
            .collect();
        let mut heights: Vec<f64> = members.iter().map(|&i| data.z_poles[i].location.im.abs()).collect();
        heights.sort_by(f64::total_cmp);
        heights.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let mut ys = vec![0.0];
        for w in heights.windows(2) {
            ys.push(0.5 * (w[0] + w[1]));
        }
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); heights.len().max(1)];
        for &i in &members {
            let h = data.z_poles[i].location.im.abs();
            let cell = heights.iter().position(|x| (x - h).abs() < 1e-9).unwrap_or(0);
            cells[cell].push(i);
        }
        for cell in cells.iter_mut() {
            cell.sort_by(|&a, &b| data.z_poles[a].location.im.total_cmp(&data.z_poles[b].location.im));
        }
        y_seqs.push(ys);
        pole_groups.push(cells);
    }
    Ok(StripPlan { r_seq, y_seqs, pole_groups })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderBound {
    pub r: f64,
    pub c: f64,
    pub eps: f64,
    /// RMS residual of the log-linear fit (0 for analytic bounds).
    pub fit_quality: f64,
    pub analytic: bool,
}

impl RemainderBound {
    /// (C/ε)^{1/R}.
    pub fn root(&self) -> f64 {
        ((self.c.ln() - self.eps.ln()) / self.r).exp()
    }

    /// C·t^R/(επ), the bound on |F_R(t)|.
    pub fn remainder_bound(&self, t: f64) -> f64 {
        self.c * t.powf(self.r) / (self.eps * PI)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Strip {
    pub phi: Vec<ExpansionTerm>,
    /// Term indices into `phi` per cell, in increasing |Im s₀|.
    pub cells: Vec<Vec<usize>>,
    pub r_prev: f64,
    pub r: f64,
    pub remainder: Option<RemainderBound>,
}

/// F_∞ for even-power spectra with g = 2 and constant multiplicity:
/// ½·b₀·√(π/(a t))·(θ(e^{−π²/(a t)}) − 1), θ = θ₃ (m from 1) or θ₄ (m from ½).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiRemainder {
    pub b0: f64,
    pub a: f64,
    pub half_integer: bool,
}

impl JacobiRemainder {
    pub fn eval(&self, t: f64) -> f64 {
        let nome = (-PI * PI / (self.a * t)).exp();
        let th = if self.half_integer { theta4(nome) } else { theta3(nome) }.unwrap_or(f64::NAN);
        0.5 * self.b0 * (PI / (self.a * t)).sqrt() * (th - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceEvidence {
    /// (p, dₚ, |dₚ|·0.1^p) for the Γ-pole coefficients at −p.
    pub rows: Vec<(u32, f64, f64)>,
    pub common_sign: Option<f64>,
    pub ratios_increasing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Exact { t: f64, absolute: bool },
    AlmostExact { f_inf: Option<JacobiRemainder>, f_inf_at_one: f64 },
    AsymptoticOnly { t_numeric: Option<f64> },
    Divergent { evidence: DivergenceEvidence },
    NoContinuation { reason: String },
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Exact { .. } => "Exact",
            Classification::AlmostExact { .. } => "AlmostExact",
            Classification::AsymptoticOnly { .. } => "AsymptoticOnly",
            Classification::Divergent { .. } => "Divergent",
            Classification::NoContinuation { .. } => "NoContinuation",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HeatExpansion {
    pub strips: Vec<Strip>,
    pub r0: f64,
    pub classification: Classification,
    /// Modes summed exactly (kernel modes, explicit heads, extension modes
    /// with negative multiplicity).
    pub truncation_head: Vec<(f64, f64)>,
    pub class_tag: ClassTag,
    pub data: ContinuationData,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub depth: usize,
    pub y_max: f64,
    /// Fit a RemainderBound on every strip line.
    pub fit: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { depth: DEFAULT_DEPTH, y_max: DEFAULT_Y_MAX, fit: true }
    }
}

pub fn build_expansion(spec: &SpectrumSpec, num_strips: usize) -> Result<HeatExpansion, ExpansionError> {
    build_expansion_with(spec, num_strips, BuildOptions::default())
}

/// Continuation wide enough for `num_strips` strips.
pub fn continuation_for(spec: &SpectrumSpec, num_strips: usize, opts: BuildOptions) -> Result<(ContinuationData, StripPlan), ExpansionError> {
    let mut r_max = num_strips as f64 + 2.5;
    loop {
        let data = continue_zeta(spec, Region { r_max, y_max: opts.y_max }, opts.depth).map_err(|e| match e {
            ContinuationError::UnsupportedClass(m) => ExpansionError::NoContinuation(m),
            other => ExpansionError::Continuation(other),
        })?;
        match plan_strips(&data, num_strips) {
            Ok(plan) => return Ok((data, plan)),
            Err(ExpansionError::DepthInsufficient { .. }) if r_max < 8.0 * num_strips as f64 + 40.0 => {
                r_max = 2.0 * r_max;
            }
            Err(e) => return Err(e),
        }
    }
}

pub fn build_expansion_with(
    spec: &SpectrumSpec,
    num_strips: usize,
    opts: BuildOptions,
) -> Result<HeatExpansion, ExpansionError> {
    if crate::tauberian::classify_lacunary(spec).lacunary {
        return Err(ExpansionError::NoContinuation("lacunary spectrum".into()));
    }
    let (data, plan) = continuation_for(spec, num_strips, opts)?;
    let bounds: Vec<Option<RemainderBound>> = if opts.fit {
        let rs: Vec<f64> = plan.r_seq[1..].to_vec();
        crate::par::map(&rs, |&r| fit_remainder_bound(&data, r).ok())
    } else {
        vec![None; num_strips]
    };
    let mut strips = Vec::with_capacity(num_strips);
    for n in 1..=num_strips {
        let mut phi = Vec::new();
        let mut cells = Vec::new();
        for cell in &plan.pole_groups[n - 1] {
            let mut idx = Vec::new();
            for &i in cell {
                idx.push(phi.len());
                phi.push(residue_term(&data.z_poles[i]));
            }
            cells.push(idx);
        }
        strips.push(Strip { phi, cells, r_prev: plan.r_seq[n - 1], r: plan.r_seq[n], remainder: bounds[n - 1] });
    }
    let mut exp = HeatExpansion {
        strips,
        r0: plan.r_seq[0],
        classification: Classification::AsymptoticOnly { t_numeric: None },
        truncation_head: data.head.clone(),
        class_tag: data.class_tag.clone(),
        data,
    };
    exp.classification = classify(spec, &exp);
    Ok(exp)
}

fn strip_sum(strip: &Strip, t: f64, reversed: bool) -> C64 {
    let mut acc = C64::zero();
    let order: Vec<&Vec<usize>> =
        if reversed { strip.cells.iter().rev().collect() } else { strip.cells.iter().collect() };
    for cell in order {
        // conjugate pairs are adjacent inside a cell
        let mut pair = C64::zero();
        for &i in cell {
            pair += strip.phi[i].eval(t);
        }
        acc += pair;
    }
    acc
}

fn head_value(exp: &HeatExpansion, t: f64) -> f64 {
    let mut acc = crate::dirichlet::Accumulator::default();
    for &(lam, m) in &exp.truncation_head {
        acc.add(m * (-t * lam).exp());
    }
    acc.value()
}

/// head(t) + Σ_{n ≤ strips_used} φₙ(t), summed in strip order.
pub fn evaluate_expansion(exp: &HeatExpansion, t: f64, strips_used: usize) -> f64 {
    evaluate_expansion_complex(exp, t, strips_used).re
}

pub fn evaluate_expansion_complex(exp: &HeatExpansion, t: f64, strips_used: usize) -> C64 {
    let mut acc = C64::new(head_value(exp, t), 0.0);
    for strip in exp.strips.iter().take(strips_used) {
        acc += strip_sum(strip, t, false);
    }
    acc
}

/// Same sum with the cells of every strip visited in reverse order.
pub fn evaluate_expansion_cells_reversed(exp: &HeatExpansion, t: f64, strips_used: usize) -> f64 {
    let mut acc = C64::new(head_value(exp, t), 0.0);
    for strip in exp.strips.iter().take(strips_used) {
        acc += strip_sum(strip, t, true);
    }
    acc.re
}

/// Partial sums for strip counts 1..=strips (index k holds k+1 strips).
pub fn partial_sums(exp: &HeatExpansion, t: f64) -> Vec<f64> {
    let mut acc = C64::new(head_value(exp, t), 0.0);
    exp.strips
        .iter()
        .map(|s| {
            acc += strip_sum(s, t, false);
            acc.re
        })
        .collect()
}

fn fit_samples() -> usize {
    std::env::var("HEATTRACE_PRECISION_SAMPLES")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n >= 8)
        .unwrap_or(DEFAULT_FIT_SAMPLES)
}

fn check_line(data: &ContinuationData, r: f64) -> Result<(), ExpansionError> {
    let on_pole = data.z_poles.iter().any(|p| (p.location.re + r).abs() < 1e-9);
    let gamma_pole = r >= 0.0 && (r - r.round()).abs() < 1e-9 && !data.cancelled.contains(&(r.round() as u32));
    if on_pole || gamma_pole {
        return Err(ExpansionError::PoleOnLine { re: -r });
    }
    Ok(())
}

/// Least-squares fit of log|Z(−R+iy)| ≈ log C − εy on log-spaced y ∈ [1, 10³],
/// with log C raised by the largest residual so the bound holds on samples.
pub fn fit_remainder_bound_numeric(data: &ContinuationData, r: f64) -> Result<RemainderBound, ExpansionError> {
    check_line(data, r)?;
    let n = fit_samples();
    let mut ys = Vec::with_capacity(n);
    let mut ls = Vec::with_capacity(n);
    for i in 0..n {
        let y = 10f64.powf(3.0 * i as f64 / (n - 1) as f64);
        if let Ok(l) = data.ln_z(C64::new(-r, y)) {
            if l.re.is_finite() {
                ys.push(y);
                ls.push(l.re);
            }
        }
    }
    if ys.len() < 8 {
        return Err(ExpansionError::NonIntegrableLine { re: -r, eps: f64::NAN });
    }
    let m = ys.len() as f64;
    let my = ys.iter().sum::<f64>() / m;
    let ml = ls.iter().sum::<f64>() / m;
    let sxy: f64 = ys.iter().zip(&ls).map(|(y, l)| (y - my) * (l - ml)).sum();
    let sxx: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let eps = -slope;
    let ln_c = ml - slope * my;
    if !(eps > 0.0) {
        return Err(ExpansionError::NonIntegrableLine { re: -r, eps });
    }
    let resid: Vec<f64> = ys.iter().zip(&ls).map(|(y, l)| l - (ln_c - eps * y)).collect();
    let max_resid = resid.iter().copied().fold(0.0, f64::max);
    let rms = (resid.iter().map(|x| x * x).sum::<f64>() / m).sqrt();
    Ok(RemainderBound { r, c: (ln_c + max_resid).exp(), eps, fit_quality: rms, analytic: false })
}

/// Vertical bound on Re s = −R: analytic where the class provides one,
/// otherwise the numeric fit.
pub fn fit_remainder_bound(data: &ContinuationData, r: f64) -> Result<RemainderBound, ExpansionError> {
    check_line(data, r)?;
    if let Some(b) = analytic_bound(data, r) {
        return Ok(b);
    }
    fit_remainder_bound_numeric(data, r)
}

fn analytic_bound(data: &ContinuationData, r: f64) -> Option<RemainderBound> {
    let is_int = |x: f64| (x - x.round()).abs() < 1e-12;
    match &data.evaluator {
        Evaluator::Hurwitz(h) => {
            let pure = h.g == 1
                && h.a == q_int(1)
                && h.alpha == q_int(1)
                && h.b_tilde == vec![q_int(1)]
                && data.head.is_empty();
            // |Z(−2n+iy)| ≤ (2π)^{−2n} ζ(2n+1) e^{−π|y|/2}
            (pure && r > 0.0 && is_int(r / 2.0)).then(|| RemainderBound {
                r,
                c: (2.0 * PI).powf(-r) * riemann_zeta_real(r + 1.0).unwrap_or(f64::NAN),
                eps: PI / 2.0,
                fit_quality: 0.0,
                analytic: true,
            })
        }
        Evaluator::Exponential(e) => {
            let n = r - 0.5;
            let plain = e.ln_mu == 0.0 && e.ln_c == 0.0 && e.n0 == 0;
            (plain && n >= 0.0 && is_int(n)).then(|| {
                // |Γ(−R+iy)| ≤ √(2π)e^{1+R}R^{−R−½}e^{−π|y|/2};
                // |ζ_P(−R+iy)| ≤ p̂(Q^{−R})/|1−Q^{−R}|^{m+1}
                let x = (-r * e.ln_q).exp();
                let p_hat: f64 = e.p_tilde.iter().rev().fold(0.0, |acc, c| acc * x + q_to_f64(c).abs());
                let c = (2.0 * PI).sqrt() * 1.5f64.exp() * n.exp() * p_hat
                    / (1.0 - x).abs().powi(e.m as i32 + 1)
                    * r.powf(-n);
                RemainderBound { r, c, eps: PI / 2.0, fit_quality: 0.0, analytic: true }
            })
        }
        Evaluator::Binomial(_) => None,
    }
}

/// F_R(t) by quadrature along Re s = −R, truncated where the fitted tail
/// C·e^{−εY}·t^R/(επ) drops below 1e−12 of the integrand scale.
pub fn remainder_fr(data: &ContinuationData, r: f64, t: f64) -> Result<f64, ExpansionError> {
    let bound = fit_remainder_bound(data, r)?;
    let ln_t = t.ln();
    let integrand = |y: f64| -> f64 {
        match data.ln_z(C64::new(-r, y)) {
            Ok(l) => (l + C64::new(r, -y) * ln_t).exp().re / PI,
            Err(_) => 0.0,
        }
    };
    let mut scale: f64 = 0.0;
    for i in 0..=8 {
        scale = scale.max(integrand(i as f64 * 0.125).abs());
    }
    let scale = scale.max(1e-300);
    let target = 1e-12 * scale;
    let y_max = ((bound.c * t.powf(r) / (bound.eps * PI) / target).ln() / bound.eps).clamp(4.0, 5e3);
    let width = (PI / ln_t.abs().max(1e-3) / 2.0).clamp(0.05, 1.0);
    let panels = (y_max / width).ceil() as usize;
    let mut acc = crate::dirichlet::Accumulator::default();
    for k in 0..panels {
        let a = k as f64 * width;
        let b = (a + width).min(y_max);
        let out = quadrature::clenshaw_curtis::integrate(integrand, a, b, target * 1e-2 / panels as f64);
        acc.add(out.integral);
    }
    Ok(acc.value())
}

/// T = 1/limsup (Cₙ/εₙ)^{1/Rₙ}, the limsup taken as the maximum over the
/// last half of the bounds.
pub fn exactness_radius(bounds: &[RemainderBound]) -> Result<f64, ExpansionError> {
    let usable: Vec<&RemainderBound> = bounds.iter().filter(|b| b.r > 0.0).collect();
    if usable.len() < 8 {
        return Err(ExpansionError::InsufficientData { need: 8, got: usable.len() });
    }
    let half = &usable[usable.len() / 2..];
    let limsup = half.iter().map(|b| b.root()).fold(0.0, f64::max);
    Ok(if limsup > 0.0 { 1.0 / limsup } else { f64::INFINITY })
}

/// T known in closed form for the class, if any.
pub fn analytic_radius(data: &ContinuationData) -> Option<f64> {
    match (&data.class_tag, &data.evaluator) {
        (ClassTag::LinearA, Evaluator::Hurwitz(h)) => Some(2.0 * PI / q_to_f64(&h.a)),
        (ClassTag::ExponentialQ, _) => Some(f64::INFINITY),
        _ => None,
    }
}

fn jacobi_form(data: &ContinuationData) -> Option<JacobiRemainder> {
    let h = data.hurwitz()?;
    if data.class_tag != ClassTag::EvenPowerA || h.g != 2 || h.b_tilde.len() != 1 {
        return None;
    }
    let half = h.alpha == crate::number::q_frac(1, 2);
    let one = h.alpha == q_int(1);
    (half || one).then(|| JacobiRemainder { b0: q_to_f64(&h.b_tilde[0]), a: q_to_f64(&h.a), half_integer: half })
}

/// Sign/growth signature of the Γ-pole coefficients dₚ (p = 1..=12).
pub fn divergence_evidence(data: &ContinuationData) -> Option<DivergenceEvidence> {
    let mut rows = Vec::new();
    for p in 1..=12u32 {
        let pole = data.z_poles.iter().find(|q| q.location == C64::new(-(p as f64), 0.0))?;
        if pole.order != 1 {
            return None;
        }
        let d = pole.principal[0].re;
        rows.push((p, d, d.abs() * 0.1f64.powi(p as i32)));
    }
    let first = rows[0].1.signum();
    let common = rows.iter().all(|r| r.1 != 0.0 && r.1.signum() == first).then_some(first);
    let ratios: Vec<f64> = rows.windows(2).map(|w| (w[1].1 / w[0].1).abs()).collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    Some(DivergenceEvidence { rows, common_sign: common, ratios_increasing: increasing })
}

/// Decision tree: LinearA ⇒ Exact(2π/a); ExponentialQ ⇒ Exact(∞); finite
/// pole set ⇒ AlmostExact; same-sign, factorially growing Γ-pole
/// coefficients ⇒ Divergent; otherwise AsymptoticOnly.
pub fn classify(spec: &SpectrumSpec, exp: &HeatExpansion) -> Classification {
    let data = &exp.data;
    match data.class_tag {
        ClassTag::LinearA | ClassTag::ExponentialQ => {
            return Classification::Exact { t: analytic_radius(data).unwrap_or(f64::NAN), absolute: true };
        }
        ClassTag::None => return Classification::NoContinuation { reason: "unsupported".into() },
        _ => {}
    }
    if data.finite_pole_set() {
        let full = evaluate_expansion(exp, 1.0, exp.strips.len());
        let f1 = heat_trace_direct(spec, 1.0, 1e-15).map(|h| h - full).unwrap_or(f64::NAN);
        return Classification::AlmostExact { f_inf: jacobi_form(data), f_inf_at_one: f1 };
    }
    let wide;
    let source = if data.region.r_max > 12.5 {
        data
    } else {
        match continue_zeta(spec, Region { r_max: 12.5, y_max: data.region.y_max }, DEFAULT_DEPTH) {
            Ok(d) => {
                wide = d;
                &wide
            }
            Err(_) => data,
        }
    };
    if let Some(ev) = divergence_evidence(source) {
        if ev.common_sign.is_some() && ev.ratios_increasing {
            return Classification::Divergent { evidence: ev };
        }
    }
    let bounds: Vec<RemainderBound> = exp.strips.iter().filter_map(|s| s.remainder).collect();
    let t = exactness_radius(&bounds).ok().filter(|t| t.is_finite() && *t > 0.0);
    Classification::AsymptoticOnly { t_numeric: t }
}

/// Numeric T from `count` fitted lines (analytic overrides disabled),
/// alongside the analytic value when the class has one.
pub fn numeric_radius(spec: &SpectrumSpec, count: usize) -> Result<(Option<f64>, f64), ExpansionError> {
    let (data, plan) = continuation_for(spec, count, BuildOptions { fit: false, ..BuildOptions::default() })?;
    let rs: Vec<f64> = plan.r_seq[1..].iter().copied().filter(|r| *r > 0.0).collect();
    let fits = crate::par::map(&rs, |&r| fit_remainder_bound_numeric(&data, r));
    let bounds: Vec<RemainderBound> = fits.into_iter().collect::<Result<_, _>>()?;
    Ok((analytic_radius(&data), exactness_radius(&bounds)?))
}

/// h(t) − evaluate_expansion(t, all strips).
pub fn f_inf_numeric(spec: &SpectrumSpec, exp: &HeatExpansion, t: f64) -> Result<f64, ExpansionError> {
    Ok(heat_trace_direct(spec, t, 1e-15)? - evaluate_expansion(exp, t, exp.strips.len()))
}

/// Exact rational coefficient of each real, log-free term, in strip order.
pub fn exact_coefficients(exp: &HeatExpansion) -> Vec<(f64, Option<Q>)> {
    exp.strips
        .iter()
        .flat_map(|s| s.phi.iter())
        .filter(|t| t.log_coeffs.len() == 1 && t.s0.im == 0.0)
        .map(|t| (t.s0.re, t.exact.as_ref().map(|e| e[0].clone())))
        .collect()
}

/// True when every coefficient in every strip has the same sign.
pub fn same_sign(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_positive()) || values.iter().all(|v| v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::q_frac;

    fn zeta_spec() -> SpectrumSpec {
        SpectrumSpec::polynomial(vec![q_int(0), q_int(1)], vec![q_int(1)], 1).unwrap()
    }

    #[test]
    fn riemann_strip_plan() {
        let (data, plan) = continuation_for(&zeta_spec(), 6, BuildOptions::default()).unwrap();
        assert_eq!(&plan.r_seq[..], &[-1.5, -0.5, 0.5, 2.0, 4.0, 6.0, 8.0]);
        assert_eq!(plan.pole_groups[0], vec![vec![0]]);
        assert_eq!(data.z_poles[0].location.re, 1.0);
    }

    #[test]
    fn bernoulli_coefficients() {
        let exp = build_expansion(&zeta_spec(), 5).unwrap();
        let coeffs: Vec<Q> = exact_coefficients(&exp).into_iter().map(|c| c.1.unwrap()).collect();
        assert_eq!(coeffs, vec![q_int(1), q_frac(-1, 2), q_frac(1, 12), q_frac(-1, 720), q_frac(1, 30240)]);
        let v = evaluate_expansion(&exp, 0.1, 5);
        let direct = 1.0 / (0.1f64.exp() - 1.0);
        assert!((v - direct).abs() < 1e-12);
    }
}
