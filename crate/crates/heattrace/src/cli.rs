//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 error or failed verification, 2 no meromorphic continuation.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

use crate::catalog::{self, CatalogEntry};
use crate::continuation::Provenance;
use crate::dirichlet::heat_trace_direct;
use crate::expansion::{
    build_expansion_with, numeric_radius, partial_sums, BuildOptions, Classification, ExpansionError,
    ExpansionTerm, HeatExpansion, DEFAULT_DEPTH,
};
use crate::number::format_q;
use crate::specfun;
use crate::spectrum::SpectrumSpec;
use crate::tauberian::{leading_order, TauberianReport};

#[derive(Debug, Parser)]
#[command(name = "heattrace", version, about = "Heat-trace expansions from spectral data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Term table, remainder bounds and classification.
    Expand {
        #[command(flatten)]
        source: SpecArgs,
        #[arg(long, default_value_t = 8)]
        strips: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare partial sums with direct summation on a t grid.
    Verify {
        #[command(flatten)]
        source: SpecArgs,
        #[arg(long, default_value_t = 8)]
        strips: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[command(flatten)]
        grid: GridArgs,
        /// Relative tolerance on the final partial sum.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classification only.
    Classify {
        #[command(flatten)]
        source: SpecArgs,
        #[arg(long, default_value_t = 8)]
        strips: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Analytic and numeric exactness radius.
    Radius {
        #[command(flatten)]
        source: SpecArgs,
        #[arg(long, default_value_t = RADIUS_STRIPS)]
        strips: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Spot values: zeta, hurwitz, gamma, theta3, theta4, bernoulli.
    Specfun {
        #[arg(value_enum)]
        function: SpecFn,
        /// Real arguments: s (and a for hurwitz), q for theta, n for bernoulli.
        #[arg(allow_negative_numbers = true, required = true, num_args = 1..=2)]
        args: Vec<String>,
        /// Imaginary part of s.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Named example spectra.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List {
        #[command(flatten)]
        output: OutputArgs,
    },
    Show {
        name: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecFn {
    Zeta,
    Hurwitz,
    Gamma,
    Theta3,
    Theta4,
    Bernoulli,
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// Spectrum description in JSON.
    #[arg(long, conflicts_with = "catalog")]
    pub spec: Option<PathBuf>,
    /// Catalog name with optional parameters, e.g. sphere_absD:3.
    #[arg(long)]
    pub catalog: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, num_args = 1..)]
    pub t: Vec<f64>,
    /// min:max:points[:log|lin]
    #[arg(long = "t-grid", conflicts_with = "t")]
    pub t_grid: Option<TGrid>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err("t-grid: expected min:max:points[:log|lin]".into());
        }
        let num = |field: &str, raw: &str| raw.parse::<f64>().map_err(|_| format!("t-grid {field}: '{raw}' is not a number"));
        let t_min = num("min", parts[0])?;
        let t_max = num("max", parts[1])?;
        let points = parts[2].parse::<usize>().map_err(|_| format!("t-grid points: '{}' is not a count", parts[2]))?;
        let spacing = match parts.get(3).copied() {
            None | Some("lin") | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(other) => return Err(format!("t-grid spacing: '{other}' is not log or lin")),
        };
        Ok(TGrid { t_min, t_max, points, spacing })
    }
}

impl TGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.t_min];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let f = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.t_min + f * (self.t_max - self.t_min),
                    Spacing::Log => (self.t_min.ln() + f * (self.t_max.ln() - self.t_min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Default number of fitted lines for `radius`.
pub const RADIUS_STRIPS: usize = 64;

#[derive(Debug, Clone)]
pub enum SpecSource {
    Path(PathBuf),
    Catalog(String),
}

/// Validated settings shared by the subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: SpecSource,
    pub t_values: Vec<f64>,
    pub strips: usize,
    pub tol: f64,
    pub depth: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    pub field: &'static str,
    pub message: String,
}

impl CliError {
    fn new(field: &'static str, message: impl Into<String>) -> Self {
        CliError { field, message: message.into() }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.t_values.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(CliError::new("t", format!("t values must be positive, got {t}")));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::new("tol", format!("must be positive, got {}", self.tol)));
        }
        if self.strips == 0 {
            return Err(CliError::new("strips", "must be at least 1"));
        }
        Ok(())
    }

    fn load(&self) -> Result<(String, SpectrumSpec, Option<CatalogEntry>), CliError> {
        match &self.source {
            SpecSource::Catalog(name) => {
                let e = catalog::entry(name).map_err(|e| CliError::new("catalog", e.to_string()))?;
                Ok((e.name.clone(), e.spec.clone(), Some(e)))
            }
            SpecSource::Path(p) => {
                let raw = std::fs::read_to_string(p).map_err(|e| CliError::new("spec", format!("{}: {e}", p.display())))?;
                let v: Value = serde_json::from_str(&raw).map_err(|e| CliError::new("spec", format!("{}: {e}", p.display())))?;
                let spec = SpectrumSpec::from_json(&v).map_err(|e| CliError::new("spec", e.to_string()))?;
                Ok((p.display().to_string(), spec, None))
            }
        }
    }
}

fn source_of(args: &SpecArgs) -> Result<SpecSource, CliError> {
    match (&args.spec, &args.catalog) {
        (Some(p), None) => Ok(SpecSource::Path(p.clone())),
        (None, Some(c)) => Ok(SpecSource::Catalog(c.clone())),
        _ => Err(CliError::new("spec", "give exactly one of --spec PATH or --catalog NAME")),
    }
}

fn config(source: &SpecArgs, strips: usize, depth: usize, output: &OutputArgs) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        source: source_of(source)?,
        t_values: vec![],
        strips,
        tol: 1e-8,
        depth,
        format: output.format,
        out: output.out.clone(),
    })
}

/// Output of one command: the three renderings and the exit code.
struct Report {
    text: String,
    json: Value,
    csv: Option<String>,
    code: i32,
}

/// Compact JSON with every float written to 17 significant digits. Keys
/// come out sorted, so equal input gives byte-identical output.
struct Fixed17;

impl serde_json::ser::Formatter for Fixed17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed17);
    serde::Serialize::serialize(v, &mut ser).expect("serializing a Value cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn complex(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn fmt_t(t: f64) -> String {
    if t.is_infinite() {
        "∞".into()
    } else if (t / (2.0 * PI) - 1.0).abs() < 1e-12 {
        "2π".into()
    } else {
        format!("{t}")
    }
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:.12e}", z.re)
    } else {
        format!("({:.12e}{:+.12e}i)", z.re, z.im)
    }
}

/// c·t^(−s₀)·(−log t)^k summed over k, exact coefficients where known.
fn render_term(term: &ExpansionTerm) -> String {
    // + 0.0 turns −0 into 0
    let (re, im) = (-term.s0.re + 0.0, -term.s0.im + 0.0);
    let power = match (re == 0.0, im == 0.0) {
        (true, true) => String::new(),
        (false, true) => format!("·t^{re}"),
        _ => format!("·t^({re}{im:+}i)"),
    };
    let parts: Vec<String> = term
        .log_coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let coeff = match term.exact.as_ref().and_then(|e| e.get(k)) {
                Some(q) => format_q(q),
                None if c.im == 0.0 => format!("{:.10e}", c.re),
                None => format!("({:.6e}{:+.6e}i)", c.re, c.im),
            };
            let log = match k {
                0 => String::new(),
                1 => "·(−log t)".into(),
                _ => format!("·(−log t)^{k}"),
            };
            format!("{coeff}{power}{log}")
        })
        .collect();
    parts.join(" + ")
}

fn provenance_name(p: &Provenance) -> String {
    match p {
        Provenance::ExactRational => "exact-rational".into(),
        Provenance::ExactSpecial => "exact-special".into(),
        Provenance::NumericCauchy { err_est, .. } => format!("cauchy(err {err_est:.1e})"),
    }
}

fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::Exact { t, absolute } => json!({"name": "Exact", "T": num(*t), "absolute": absolute}),
        Classification::AlmostExact { f_inf, f_inf_at_one } => json!({
            "name": "AlmostExact",
            "f_inf_at_one": num(*f_inf_at_one),
            "f_inf_closed_form": f_inf.map(|j| json!({"b0": num(j.b0), "a": num(j.a), "theta": if j.half_integer { "theta4" } else { "theta3" }})),
        }),
        Classification::AsymptoticOnly { t_numeric } => {
            json!({"name": "AsymptoticOnly", "T_numeric": t_numeric.map(num)})
        }
        Classification::Divergent { evidence } => json!({
            "name": "Divergent",
            "common_sign": evidence.common_sign.map(num),
            "ratios_increasing": evidence.ratios_increasing,
            "rows": evidence.rows.iter().map(|r| json!({"p": r.0, "d": num(r.1), "d_times_0.1^p": num(r.2)})).collect::<Vec<_>>(),
        }),
        Classification::NoContinuation { reason } => json!({"name": "NoContinuation", "reason": reason}),
    }
}

fn classification_text(c: &Classification) -> String {
    match c {
        Classification::Exact { t, absolute } => {
            format!("Exact, T = {}{}", fmt_t(*t), if *absolute { ", absolutely exact" } else { "" })
        }
        Classification::AlmostExact { f_inf, f_inf_at_one } => {
            let mut s = format!("AlmostExact, F_inf(1) = {f_inf_at_one:.6e}");
            if let Some(j) = f_inf {
                let th = if j.half_integer { "theta4" } else { "theta3" };
                let _ = write!(s, "\n  F_inf(t) = {}·sqrt(pi/({} t))·({th}(0; e^(-pi^2/({} t))) - 1)", j.b0 / 2.0, j.a, j.a);
            }
            s
        }
        Classification::AsymptoticOnly { t_numeric } => match t_numeric {
            Some(t) => format!("AsymptoticOnly, numeric T ≈ {t:.6}"),
            None => "AsymptoticOnly".into(),
        },
        Classification::Divergent { evidence } => {
            let mut s = String::from("Divergent (signature)\n     p                 d_p        |d_p|·0.1^p");
            for (p, d, g) in &evidence.rows {
                let _ = write!(s, "\n  {p:4}  {d:>18.10e}  {g:>15.6e}");
            }
            let _ = write!(
                s,
                "\n  common sign: {}, |d_(p+1)/d_p| increasing: {}",
                evidence.common_sign.map_or("none".into(), |v| format!("{v:+}")),
                evidence.ratios_increasing
            );
            s
        }
        Classification::NoContinuation { reason } => format!("NoContinuation: {reason}"),
    }
}

fn tauberian_json(r: &TauberianReport) -> Value {
    json!({
        "L": num(r.l),
        "slowly_varying": r.slowly_varying.describe(),
        "slow_variation_ok": r.slow_variation_ok,
        "slow_variation_ratios": r.slow_variation_ratios.iter().map(|(c, v)| json!([num(*c), num(*v)])).collect::<Vec<_>>(),
        "leading": r.leading,
        "ratio_samples": r.ratio_samples.iter().map(|(t, v)| json!({"t": num(*t), "h_over_leading": num(*v)})).collect::<Vec<_>>(),
    })
}

fn tauberian_text(r: &TauberianReport) -> String {
    let mut s = format!("Tauberian leading order: h(t) ~ {}\n  L = {}, F = {}", r.leading, r.l, r.slowly_varying.describe());
    let ratios: Vec<String> = r.slow_variation_ratios.iter().map(|(c, v)| format!("F({c:.4}x)/F(x) = {v:.4}")).collect();
    let _ = write!(s, "\n  slow variation {}: {}", if r.slow_variation_ok { "ok" } else { "FAILS" }, ratios.join(", "));
    for (t, v) in &r.ratio_samples {
        let _ = write!(s, "\n  t = {t:e}: h/leading = {v:.6}");
    }
    s
}

/// Exit-2 report when no continuation exists.
fn no_continuation(name: &str, spec: &SpectrumSpec, reason: &str) -> Report {
    let tauber = leading_order(spec);
    let mut text = format!("spec: {name}\nclassification: NoContinuation ({reason})");
    let tj = match &tauber {
        Ok(r) => {
            let _ = write!(text, "\n{}", tauberian_text(r));
            tauberian_json(r)
        }
        Err(e) => {
            let _ = write!(text, "\nTauberian analysis unavailable: {e}");
            json!({"error": e.to_string()})
        }
    };
    Report {
        text,
        json: json!({"spec": name, "classification": {"name": "NoContinuation", "reason": reason}, "tauberian": tj}),
        csv: None,
        code: 2,
    }
}

fn build(cfg: &RunConfig, spec: &SpectrumSpec, fit: bool) -> Result<HeatExpansion, ExpansionError> {
    build_expansion_with(spec, cfg.strips, BuildOptions { depth: cfg.depth, fit, ..BuildOptions::default() })
}

fn expansion_failure(name: &str, spec: &SpectrumSpec, e: ExpansionError) -> Result<Report, CliError> {
    match e {
        ExpansionError::NoContinuation(reason) => Ok(no_continuation(name, spec, &reason)),
        other => Err(CliError::new("spec", other.to_string())),
    }
}

/// Strip edges that should be zero can come out as −0 or a rounding residue.
fn tidy(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn cmd_expand(cfg: &RunConfig) -> Result<Report, CliError> {
    let (name, spec, _) = cfg.load()?;
    let exp = match build(cfg, &spec, true) {
        Ok(e) => e,
        Err(e) => return expansion_failure(&name, &spec, e),
    };
    let mut text = format!("spec: {name}\ncontinuation: {:?}\n", exp.class_tag);
    if !exp.truncation_head.is_empty() {
        let head: Vec<String> = exp.truncation_head.iter().map(|(l, m)| format!("({l}, {m})")).collect();
        let _ = writeln!(text, "truncation head (λ, M): {}", head.join(" "));
    }
    let _ = writeln!(text, "strip   R_prev   R         s0                                  log  term  [provenance]");
    let mut csv = String::from("strip,r_prev,r,s0_re,s0_im,log_power,coeff_re,coeff_im,exact,provenance\n");
    let mut strips_json = Vec::new();
    for (i, strip) in exp.strips.iter().enumerate() {
        let mut terms = Vec::new();
        for term in &strip.phi {
            let exact = term.exact.as_ref().map(|e| e.iter().map(format_q).collect::<Vec<_>>());
            let _ = writeln!(
                text,
                "{:5}  {:7.3}  {:7.3}  {:34}  {:3}  {}  [{}]",
                i + 1,
                tidy(strip.r_prev),
                tidy(strip.r),
                fmt_c(term.s0),
                term.log_degree(),
                render_term(term),
                provenance_name(&term.provenance)
            );
            for (k, c) in term.log_coeffs.iter().enumerate() {
                let ex = term.exact.as_ref().and_then(|e| e.get(k)).map(format_q).unwrap_or_default();
                let _ = writeln!(
                    csv,
                    "{},{:.16e},{:.16e},{:.16e},{:.16e},{k},{:.16e},{:.16e},{ex},{}",
                    i + 1,
                    strip.r_prev,
                    strip.r,
                    term.s0.re,
                    term.s0.im,
                    c.re,
                    c.im,
                    provenance_name(&term.provenance)
                );
            }
            terms.push(json!({
                "s0": complex(term.s0),
                "term": render_term(term),
                "coefficients": term.log_coeffs.iter().map(|c| complex(*c)).collect::<Vec<_>>(),
                "exact": exact,
                "provenance": provenance_name(&term.provenance),
            }));
        }
        let bound = strip.remainder.map(|b| {
            json!({"R": num(b.r), "C": num(b.c), "eps": num(b.eps), "fit_rms": num(b.fit_quality), "analytic": b.analytic})
        });
        if let Some(b) = strip.remainder {
            let _ = writeln!(
                text,
                "       |F_R(t)| <= {:.4e}·t^{}/({:.4}π){}",
                b.c,
                tidy(b.r),
                b.eps,
                if b.analytic { "  (analytic)" } else { "" }
            );
        }
        strips_json.push(json!({"r_prev": num(strip.r_prev), "r": num(strip.r), "terms": terms, "bound": bound}));
    }
    let _ = write!(text, "classification: {}", classification_text(&exp.classification));
    let json = json!({
        "spec": name,
        "spectrum": spec.to_json(),
        "continuation": format!("{:?}", exp.class_tag),
        "truncation_head": exp.truncation_head.iter().map(|(l, m)| json!([num(*l), num(*m)])).collect::<Vec<_>>(),
        "strips": strips_json,
        "classification": classification_json(&exp.classification),
    });
    Ok(Report { text, json, csv: Some(csv), code: 0 })
}

struct VerifyRow {
    t: f64,
    direct: f64,
    partial: Vec<f64>,
    err: Vec<f64>,
    f_inf: Option<f64>,
    residual: f64,
    pass: bool,
}

fn cmd_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    if cfg.t_values.is_empty() {
        return Err(CliError::new("t", "give --t values or --t-grid"));
    }
    let (name, spec, _) = cfg.load()?;
    let exp = match build(cfg, &spec, false) {
        Ok(e) => e,
        Err(e) => return expansion_failure(&name, &spec, e),
    };
    let jacobi = match &exp.classification {
        Classification::AlmostExact { f_inf, .. } => *f_inf,
        _ => None,
    };
    let rows: Vec<Result<VerifyRow, String>> = crate::par::map(&cfg.t_values, |&t| {
        let direct = heat_trace_direct(&spec, t, 1e-15 * 1f64.max(t.recip())).map_err(|e| e.to_string())?;
        let partial = partial_sums(&exp, t);
        let err: Vec<f64> = partial.iter().map(|p| (direct - p).abs()).collect();
        let f_inf = jacobi.map(|j| j.eval(t));
        let last = *partial.last().unwrap_or(&f64::NAN);
        let residual = (direct - last - f_inf.unwrap_or(0.0)).abs() / direct.abs();
        Ok(VerifyRow { t, direct, partial, err, f_inf, residual, pass: residual <= cfg.tol })
    });
    let rows: Vec<VerifyRow> = rows.into_iter().collect::<Result<_, _>>().map_err(|e| CliError::new("t", e))?;
    let k = cfg.strips;
    let mut csv = String::from("t,direct");
    for i in 1..=k {
        let _ = write!(csv, ",partial_{i}");
    }
    for i in 1..=k {
        let _ = write!(csv, ",err_{i}");
    }
    if jacobi.is_some() {
        csv.push_str(",f_inf");
    }
    csv.push('\n');
    let mut text = format!(
        "spec: {name}\nclassification: {}\n{:>12}  {:>22}  {:>12}  {:>5}  {:>12}  pass",
        classification_text(&exp.classification),
        "t",
        "direct",
        "err_last",
        "best",
        "rel_resid"
    );
    let mut rows_json = Vec::new();
    for r in &rows {
        let _ = write!(csv, "{:.16e},{:.16e}", r.t, r.direct);
        for p in &r.partial {
            let _ = write!(csv, ",{p:.16e}");
        }
        for e in &r.err {
            let _ = write!(csv, ",{e:.16e}");
        }
        if let Some(f) = r.f_inf {
            let _ = write!(csv, ",{f:.16e}");
        }
        csv.push('\n');
        let best = r.err.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map_or(0, |b| b.0 + 1);
        let _ = write!(
            text,
            "\n{:>12.6e}  {:>22.16e}  {:>12.4e}  {:>5}  {:>12.4e}  {}",
            r.t,
            r.direct,
            r.err.last().copied().unwrap_or(f64::NAN),
            best,
            r.residual,
            if r.pass { "yes" } else { "NO" }
        );
        let best_err = r.err.get(best.wrapping_sub(1)).copied().unwrap_or(f64::NAN);
        let last_err = r.err.last().copied().unwrap_or(f64::NAN);
        if best < k && last_err > 10.0 * best_err && last_err > 1e-13 * r.direct.abs() {
            let _ = write!(text, "  (error grows beyond {best} strips)");
        }
        rows_json.push(json!({
            "t": num(r.t),
            "direct": num(r.direct),
            "partial": r.partial.iter().map(|p| num(*p)).collect::<Vec<_>>(),
            "err": r.err.iter().map(|e| num(*e)).collect::<Vec<_>>(),
            "f_inf": r.f_inf.map(num),
            "best_strips": best,
            "relative_residual": num(r.residual),
            "pass": r.pass,
        }));
    }
    let all_pass = rows.iter().all(|r| r.pass);
    let json = json!({
        "spec": name,
        "strips": k,
        "tol": num(cfg.tol),
        "classification": classification_json(&exp.classification),
        "rows": rows_json,
        "pass": all_pass,
    });
    Ok(Report { text, json, csv: Some(csv), code: if all_pass { 0 } else { 1 } })
}

fn cmd_classify(cfg: &RunConfig) -> Result<Report, CliError> {
    let (name, spec, entry) = cfg.load()?;
    let exp = match build(cfg, &spec, true) {
        Ok(e) => e,
        Err(e) => return expansion_failure(&name, &spec, e),
    };
    let c = &exp.classification;
    let mut text = format!("spec: {name}\nclassification: {}", classification_text(c));
    let expected = entry.as_ref().and_then(|e| e.expected.classification).map(|x| x.name());
    if let Some(x) = expected {
        let _ = write!(text, "\nexpected: {x}");
    }
    let json = json!({"spec": name, "classification": classification_json(c), "expected": expected});
    Ok(Report { text, json, csv: None, code: 0 })
}

fn cmd_radius(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let (name, spec, _) = cfg.load()?;
    let (analytic, numeric) = match numeric_radius(&spec, cfg.strips) {
        Ok(r) => r,
        Err(e) => return expansion_failure(&name, &spec, e),
    };
    let gap = analytic.filter(|a| a.is_finite()).map(|a| (numeric - a).abs() / a);
    let mut text = format!("spec: {name}\nnumeric T = {} from {} fitted lines", fmt_t(numeric), cfg.strips);
    if numeric.is_finite() {
        let _ = write!(text, " ({numeric:.6})");
    }
    match analytic {
        Some(a) => {
            let _ = write!(text, "\nanalytic T = {}", fmt_t(a));
        }
        None => text.push_str("\nanalytic T: not known for this class"),
    }
    if let Some(g) = gap {
        let _ = write!(text, "\nrelative gap = {g:.4}");
    }
    let json = json!({
        "spec": name,
        "strips": cfg.strips,
        "analytic": analytic.map(num),
        "numeric": num(numeric),
        "relative_gap": gap.map(num),
    });
    Ok(Report { text, json, csv: None, code: 0 })
}

fn cmd_specfun(function: SpecFn, args: &[String], im: f64) -> Result<Report, CliError> {
    let arity = if function == SpecFn::Hurwitz { 2 } else { 1 };
    if args.len() != arity {
        return Err(CliError::new("args", format!("{function:?} takes {arity} argument(s), got {}", args.len())));
    }
    let fail = |e: specfun::SpecFunError| CliError::new("args", e.to_string());
    if function == SpecFn::Bernoulli {
        let n: usize = args[0].parse().map_err(|_| CliError::new("args", format!("'{}' is not an index", args[0])))?;
        let b = specfun::bernoulli_number(n);
        let text = format!("B_{n} = {}", format_q(&b));
        return Ok(Report { text, json: json!({"function": "bernoulli", "n": n, "value": format_q(&b)}), csv: None, code: 0 });
    }
    let re: f64 = args[0].parse().map_err(|_| CliError::new("args", format!("'{}' is not a number", args[0])))?;
    let z = C64::new(re, im);
    let value = match function {
        SpecFn::Zeta => specfun::riemann_zeta(z).map_err(fail)?,
        SpecFn::Hurwitz => {
            let a: f64 = args[1].parse().map_err(|_| CliError::new("args", format!("'{}' is not a number", args[1])))?;
            specfun::hurwitz_zeta(z, a).map_err(fail)?
        }
        SpecFn::Gamma => specfun::gamma(z).map_err(fail)?,
        SpecFn::Theta3 => C64::new(specfun::theta3(z.re).map_err(fail)?, 0.0),
        SpecFn::Theta4 => C64::new(specfun::theta4(z.re).map_err(fail)?, 0.0),
        SpecFn::Bernoulli => unreachable!(),
    };
    let text = if value.im == 0.0 { format!("{:.17}", value.re) } else { format!("{:.17} {:+.17}i", value.re, value.im) };
    let json = json!({"function": format!("{function:?}").to_lowercase(), "s": complex(z), "args": args, "value": complex(value)});
    Ok(Report { text, json, csv: None, code: 0 })
}

fn cmd_catalog(action: &CatalogAction) -> Result<Report, CliError> {
    match action {
        CatalogAction::List { .. } => {
            let text = catalog::ENTRIES.iter().map(|(n, d)| format!("{n:28} {d}")).collect::<Vec<_>>().join("\n");
            let json = json!(catalog::ENTRIES.iter().map(|(n, d)| json!({"name": n, "description": d})).collect::<Vec<_>>());
            Ok(Report { text, json, csv: None, code: 0 })
        }
        CatalogAction::Show { name, .. } => {
            let e = catalog::entry(name).map_err(|e| CliError::new("name", e.to_string()))?;
            let x = &e.expected;
            let mut text = format!("{}: {}\n{}", e.name, e.description, spec_pretty(&e.spec));
            if let Some(c) = x.classification {
                let _ = write!(text, "\nexpected: {}", c.name());
            }
            if let Some(t) = x.t {
                let _ = write!(text, ", T = {}", fmt_t(t));
            }
            if let Some(f) = x.closed_form {
                let _ = write!(text, "\nclosed form: h(t) = {}", f.describe());
            }
            let json = json!({
                "name": e.name,
                "description": e.description,
                "spectrum": e.spec.to_json(),
                "expected": {
                    "classification": x.classification.map(|c| c.name()),
                    "T": x.t.map(num),
                    "closed_form": x.closed_form.map(|f| f.describe()),
                },
            });
            Ok(Report { text, json, csv: None, code: 0 })
        }
    }
}

fn spec_pretty(spec: &SpectrumSpec) -> String {
    serde_json::to_string_pretty(&spec.to_json()).unwrap_or_default()
}

fn output_of(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Expand { output, .. }
        | Command::Verify { output, .. }
        | Command::Classify { output, .. }
        | Command::Radius { output, .. }
        | Command::Specfun { output, .. } => output,
        Command::Catalog { action: CatalogAction::List { output } | CatalogAction::Show { output, .. } } => output,
    }
}

fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Expand { source, strips, depth, output } => {
            let cfg = config(source, *strips, *depth, output)?;
            cfg.validate()?;
            cmd_expand(&cfg)
        }
        Command::Verify { source, strips, depth, grid, tol, output } => {
            let mut cfg = config(source, *strips, *depth, output)?;
            cfg.tol = *tol;
            cfg.t_values = match &grid.t_grid {
                Some(g) => {
                    if g.points == 0 {
                        return Err(CliError::new("t-grid", "points must be at least 1"));
                    }
                    g.values()
                }
                None => grid.t.clone(),
            };
            cmd_verify(&cfg)
        }
        Command::Classify { source, strips, depth, output } => {
            let cfg = config(source, *strips, *depth, output)?;
            cfg.validate()?;
            cmd_classify(&cfg)
        }
        Command::Radius { source, strips, output } => cmd_radius(&config(source, *strips, DEFAULT_DEPTH, output)?),
        Command::Specfun { function, args, im, .. } => cmd_specfun(*function, args, *im),
        Command::Catalog { action } => cmd_catalog(action),
    }
}

fn emit(out: &OutputArgs, body: &str) -> io::Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, body),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Runs one command and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let out = output_of(&cli.command);
    match dispatch(&cli.command) {
        Ok(report) => {
            let body = match out.format {
                Format::Text => report.text + "\n",
                Format::Json => to_json_string(&report.json) + "\n",
                Format::Csv => report.csv.unwrap_or_else(|| to_json_string(&report.json) + "\n"),
            };
            if let Err(e) = emit(out, &body) {
                eprintln!("error: writing output: {e}");
                return 1;
            }
            report.code
        }
        Err(e) => {
            if out.format == Format::Json {
                eprintln!("{}", to_json_string(&json!({"error": {"field": e.field, "message": e.message}})));
            } else {
                eprintln!("error: {}: {}", e.field, e.message);
            }
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: TGrid = "0.01:1:3:log".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 3);
        assert!((v[1] - 0.1).abs() < 1e-15);
        assert!("1:2".parse::<TGrid>().is_err());
        assert!("1:2:3:cubic".parse::<TGrid>().is_err());
    }

    #[test]
    fn fixed_float_format() {
        assert_eq!(to_json_string(&json!({"b": 0.1, "a": 2})), r#"{"a":2,"b":1.0000000000000001e-1}"#);
    }
}
