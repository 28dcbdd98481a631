//! Leading order of h(t) as t ↓ 0 without continuation: if
//! N(λ) ~ λ^L F(λ) with F slowly varying, then h(t) ~ Γ(L+1) t^{−L} F(1/t).

use crate::dirichlet::{abscissa, heat_trace_direct_counted, DirichletError};
use crate::number::{poly_degree, q_to_f64};
use crate::specfun::gamma_real;
use crate::spectrum::{SpectrumKind, SpectrumSpec};

/// t values at which h(t)/leading(t) is reported.
pub const RATIO_TIMES: [f64; 3] = [1e-4, 1e-8, 1e-12];
const SLOW_FACTORS: [f64; 3] = [std::f64::consts::SQRT_2, 2.0, std::f64::consts::E];
const MAX_DIRECT_TERMS: f64 = 5e7;

#[derive(Debug, Clone, PartialEq)]
pub enum SlowlyVarying {
    /// F(x) = k.
    Const { k: f64 },
    /// F(x) = k·(log x)^a; a = ½ is the square-root-log case.
    LogPower { k: f64, a: f64 },
    /// No form from the grammar; F is sampled from N(λ)/λ^L.
    Unknown,
}

impl SlowlyVarying {
    pub fn eval(&self, x: f64) -> Option<f64> {
        match self {
            SlowlyVarying::Const { k } => Some(*k),
            SlowlyVarying::LogPower { k, a } => Some(k * x.ln().powf(*a)),
            SlowlyVarying::Unknown => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SlowlyVarying::Const { k } => format!("const {k}"),
            SlowlyVarying::LogPower { k, a } if (*a - 0.5).abs() < 1e-12 => format!("{k}·sqrt(log x)"),
            SlowlyVarying::LogPower { k, a } => format!("{k}·(log x)^{a}"),
            SlowlyVarying::Unknown => "unknown".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauberianReport {
    pub l: f64,
    pub slowly_varying: SlowlyVarying,
    /// F(cx)/F(x) for c ∈ {√2, 2, e} at the largest sampled x.
    pub slow_variation_ratios: Vec<(f64, f64)>,
    pub slow_variation_ok: bool,
    /// Γ(L+1)·t^{−L}·F(1/t) written out in t.
    pub leading: String,
    pub ratio_samples: Vec<(f64, f64)>,
}

impl TauberianReport {
    pub fn leading_at(&self, t: f64) -> Option<f64> {
        let f = self.slowly_varying.eval(1.0 / t)?;
        Some(gamma_real(self.l + 1.0).ok()? * t.powf(-self.l) * f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LacunaryEvidence {
    pub lacunary: bool,
    /// (n, log(λ_{n+1}/λₙ)).
    pub log_ratios: Vec<(u64, f64)>,
    pub symbolic: bool,
}

/// λ_{n+1}/λₙ → ∞ ?
pub fn classify_lacunary(spec: &SpectrumSpec) -> LacunaryEvidence {
    let start = spec.first_index();
    let end = spec.end_index();
    let mut log_ratios = Vec::new();
    let mut n = start.max(1);
    while end.map_or(true, |e| n + 1 < e) && n < start + 100_000 {
        log_ratios.push((n, spec.ln_eigenvalue(n + 1) - spec.ln_eigenvalue(n)));
        n = n * 2 + 1;
    }
    let symbolic = match &spec.kind {
        SpectrumKind::Polynomial { .. } | SpectrumKind::Exponential { .. } => Some(false),
        SpectrumKind::Explicit { tail: None, .. } => Some(false),
        SpectrumKind::Explicit { tail: Some(t), .. } => t.lambda.exp_power_form().map(|(_, d, p)| d > 0.0 && p > 1.0),
    };
    let lacunary = symbolic.unwrap_or_else(|| {
        log_ratios.len() >= 4
            && log_ratios.windows(2).all(|w| w[1].1 >= w[0].1)
            && log_ratios.last().is_some_and(|r| r.1 > 10.0)
    });
    LacunaryEvidence { lacunary, log_ratios, symbolic: symbolic.is_some() }
}

/// Symbolic F for the closed forms the grammar covers.
fn symbolic_f(spec: &SpectrumSpec, l: f64) -> SlowlyVarying {
    match &spec.kind {
        SpectrumKind::Polynomial { b_coeffs, .. } => {
            let lam = spec.lambda_polynomial().unwrap_or_default();
            let (Some(g), Some(d)) = (poly_degree(&lam), poly_degree(b_coeffs)) else {
                return SlowlyVarying::Unknown;
            };
            // N(λ) ≈ b/(d+1)·(λ/a)^{(d+1)/g}
            let a = q_to_f64(&lam[g]);
            let b = q_to_f64(&b_coeffs[d]);
            SlowlyVarying::Const { k: b / (d as f64 + 1.0) * a.powf(-l) }
        }
        SpectrumKind::Exponential { q, p_coeffs, power_r, mult_base, .. } if q_to_f64(mult_base) == 1.0 => {
            // N(λ) ≈ p_m/(m+1)·(log λ/|log Q|)^{m+1}
            let m = poly_degree(p_coeffs).unwrap_or(0);
            let ln_q = (q_to_f64(power_r) * q_to_f64(q).ln()).abs();
            let pm = q_to_f64(&p_coeffs[m]);
            let a = m as f64 + 1.0;
            SlowlyVarying::LogPower { k: pm / a * ln_q.powf(-a), a }
        }
        SpectrumKind::Explicit { tail: Some(t), .. } => {
            // λ = c·exp(d n^p), M = 1: N(λ) ≈ (log λ / d)^{1/p}
            let unit_mult = t.mult.as_const().is_some_and(|m| q_to_f64(&m) == 1.0);
            match t.lambda.exp_power_form() {
                Some((_, d, p)) if unit_mult && d > 0.0 && p > 0.0 && l == 0.0 => {
                    SlowlyVarying::LogPower { k: d.powf(-1.0 / p), a: 1.0 / p }
                }
                _ => SlowlyVarying::Unknown,
            }
        }
        _ => SlowlyVarying::Unknown,
    }
}

/// N(λ)/λ^L sampled from the counting function.
fn numeric_f(spec: &SpectrumSpec, l: f64, x: f64) -> f64 {
    spec.counting_function(x).count / x.powf(l)
}

/// Least-squares fit of log N(λₙ) − L log λₙ ≈ log k + a·log log λₙ.
fn regress_log_power(spec: &SpectrumSpec, l: f64) -> Option<SlowlyVarying> {
    let start = spec.first_index();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut count: f64 = spec.kernel.iter().map(|m| m.1).sum();
    let end = spec.end_index().unwrap_or(u64::MAX).min(start + 20_000);
    for n in start..end {
        count += spec.multiplicity(n);
        let ll = spec.ln_eigenvalue(n);
        if ll > 1.0 && n > start + 10 {
            xs.push(ll.ln());
            ys.push(count.ln() - l * ll);
        }
    }
    if xs.len() < 10 {
        return None;
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let a = sxy / sxx;
    Some(SlowlyVarying::LogPower { k: (my - a * mx).exp(), a })
}

/// Largest λ used for slow-variation sampling.
fn sample_point(spec: &SpectrumSpec) -> f64 {
    let start = spec.first_index();
    let n = spec.end_index().map_or(start + 10_000, |e| e.saturating_sub(2).max(start));
    let ll = spec.ln_eigenvalue(n);
    if ll < 700.0 {
        ll.exp()
    } else {
        f64::MAX / 16.0
    }
}

pub fn leading_order(spec: &SpectrumSpec) -> Result<TauberianReport, DirichletError> {
    let meta = abscissa(spec);
    if !meta.heat_well_defined {
        return Err(DirichletError::NotTraceClass);
    }
    // exp-power tails have L = 0 exactly; the numeric limsup only approaches it
    let exp_tail = matches!(&spec.kind, SpectrumKind::Explicit { tail: Some(t), .. }
        if t.lambda.exp_power_form().is_some_and(|(_, d, p)| d > 0.0 && p > 0.0) && t.mult.as_const().is_some());
    let l = if exp_tail { 0.0 } else { meta.abscissa_zeta.max(0.0) };
    let mut f = symbolic_f(spec, l);
    let x = sample_point(spec);
    let ratio_of = |f: &SlowlyVarying, c: f64| -> f64 {
        match (f.eval(c * x), f.eval(x)) {
            (Some(a), Some(b)) => a / b,
            _ => numeric_f(spec, l, c * x) / numeric_f(spec, l, x),
        }
    };
    if f == SlowlyVarying::Unknown {
        let numeric_ok = SLOW_FACTORS.iter().all(|&c| (ratio_of(&f, c) - 1.0).abs() < 0.1);
        if numeric_ok {
            if let Some(fit) = regress_log_power(spec, l) {
                f = fit;
            }
        }
    }
    let slow_variation_ratios: Vec<(f64, f64)> = SLOW_FACTORS
        .iter()
        .map(|&c| {
            let r = match &f {
                // a fitted form would pass trivially; test the data instead
                SlowlyVarying::LogPower { .. } if symbolic_f(spec, l) == SlowlyVarying::Unknown => {
                    numeric_f(spec, l, c * x) / numeric_f(spec, l, x)
                }
                _ => ratio_of(&f, c),
            };
            (c, r)
        })
        .collect();
    let slow_variation_ok = slow_variation_ratios.iter().all(|(_, r)| (r - 1.0).abs() < 0.1);
    if !slow_variation_ok {
        f = SlowlyVarying::Unknown;
    }
    let leading = render_leading(l, &f);
    let mut report = TauberianReport {
        l,
        slowly_varying: f,
        slow_variation_ratios,
        slow_variation_ok,
        leading,
        ratio_samples: Vec::new(),
    };
    for &t in &RATIO_TIMES {
        if !direct_feasible(spec, t) {
            continue;
        }
        let Some(lead) = report.leading_at(t) else { continue };
        if let Ok((h, _)) = heat_trace_direct_counted(spec, t, 1e-12 * lead.abs()) {
            report.ratio_samples.push((t, h / lead));
        }
    }
    Ok(report)
}

fn render_leading(l: f64, f: &SlowlyVarying) -> String {
    let gamma_l = gamma_real(l + 1.0).unwrap_or(f64::NAN);
    let power = if l == 0.0 { String::new() } else { format!("·t^(-{l})") };
    match f {
        SlowlyVarying::Const { k } => format!("{}{power}", gamma_l * k),
        SlowlyVarying::LogPower { k, a } => {
            let c = gamma_l * k;
            let c = if (c - 1.0).abs() < 1e-12 { String::new() } else { format!("{c}·") };
            if (a - 0.5).abs() < 1e-12 {
                format!("{c}√(−log t){power}")
            } else {
                format!("{c}(−log t)^{a}{power}")
            }
        }
        SlowlyVarying::Unknown => format!("{gamma_l}{power}·F(1/t), F not slowly varying"),
    }
}

/// Direct summation at t is affordable when λₙ passes 40/t within the
/// term budget.
fn direct_feasible(spec: &SpectrumSpec, t: f64) -> bool {
    let target = (40.0 / t).ln();
    let start = spec.first_index();
    let mut hi = start + 1;
    while spec.ln_eigenvalue(hi) < target {
        if (hi - start) as f64 > MAX_DIRECT_TERMS {
            return false;
        }
        hi = start + 2 * (hi - start);
        if spec.end_index().is_some_and(|e| hi >= e) {
            return true;
        }
    }
    true
}
