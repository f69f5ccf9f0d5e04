//! Registry of identities satisfied by the basic Humbert functions, each
//! checked numerically by evaluating both sides at sample points.
//!
//! Every identity has a printed form and, where the printed form fails,
//! candidate repairs. Alternatives are evaluated and reported but never
//! change a verdict.

mod catalog;
pub mod domain;
mod env;
mod report;

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{QError, QResult};
use crate::humbert::{self, ClassicalParams, HumbertKind, HumbertParams};
use crate::qcore::{QContext, SeriesConfig};

pub use catalog::kernel_normalization;
pub use domain::DomainSpec;
pub use report::{run_suite, FailingPoint, FormSummary, IdentityReport, Observation, SuiteOptions, SuiteReport, SuiteSummary, CSV_HEADER};

use env::Env;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Algebraic,
    Operator,
    Recursion,
    Integral,
    Limit,
}

impl IdentityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityKind::Algebraic => "algebraic",
            IdentityKind::Operator => "operator",
            IdentityKind::Recursion => "recursion",
            IdentityKind::Integral => "integral",
            IdentityKind::Limit => "limit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Algebraic, Self::Operator, Self::Recursion, Self::Integral, Self::Limit]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unverifiable,
    NotConverged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unverifiable => "unverifiable",
            Status::NotConverged => "not_converged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "refuted-as-printed")]
    RefutedAsPrinted,
    #[serde(rename = "unverifiable")]
    Unverifiable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::RefutedAsPrinted => "refuted-as-printed",
            Verdict::Unverifiable => "unverifiable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormRole {
    Printed,
    Repair,
    Alternative,
}

impl FormRole {
    pub fn as_str(self) -> &'static str {
        match self {
            FormRole::Printed => "printed",
            FormRole::Repair => "repair",
            FormRole::Alternative => "alternative",
        }
    }
}

/// Parameters of one check. `r`, `s` are derivative orders and `l` a
/// recursion depth (or the moment index for the q-beta moment identity).
/// For `Φ₃` the denominator exponent is `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePoint {
    pub q: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    pub r: usize,
    pub s: usize,
    pub l: usize,
}

impl SamplePoint {
    pub fn new(q: f64, alpha: f64, beta: f64, gamma: f64, x: f64, y: f64) -> Self {
        let c = |v| Complex64::new(v, 0.0);
        SamplePoint { q, alpha: c(alpha), beta: c(beta), gamma: c(gamma), x: c(x), y: c(y), r: 1, s: 1, l: 1 }
    }

    pub fn with_depths(mut self, r: usize, s: usize, l: usize) -> Self {
        self.r = r;
        self.s = s;
        self.l = l;
        self
    }
}

impl Default for SamplePoint {
    fn default() -> Self {
        SamplePoint::new(0.5, 0.7, 1.3, 2.1, 0.2, 0.15)
    }
}

/// Residual tolerance per identity kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub integral: f64,
    pub limit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { algebraic: 1e-8, integral: 1e-6, limit: 1e-2 }
    }
}

impl Tolerances {
    pub fn for_kind(&self, kind: IdentityKind) -> f64 {
        match kind {
            IdentityKind::Integral => self.integral,
            IdentityKind::Limit => self.limit,
            _ => self.algebraic,
        }
    }
}

/// Evaluates one form; returns `(lhs, rhs)` pairs that must agree.
pub(crate) type FormFn = fn(&Env) -> QResult<Vec<(Complex64, Complex64)>>;

#[derive(Clone)]
pub struct Form {
    pub label: &'static str,
    pub role: FormRole,
    pub(crate) eval: FormFn,
}

/// Depth-one step of a recursion: `F(shift j+1) − F(shift j)`.
#[derive(Clone, Copy)]
pub(crate) struct Compose {
    pub base: fn(&Env) -> QResult<Complex64>,
    pub step: fn(&Env, usize) -> QResult<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LimitRule {
    /// `q → 1` towards the classical function of this kind.
    Classical(HumbertKind),
    /// `Φ₂` with `b = 0` against `Φ₃`.
    Phi2VanishingB,
    /// `Φ₁` with `a = 0` against `Φ₃` with numerator `b`.
    Phi1VanishingA,
    /// Parameter tends to infinity; only observed.
    Unverifiable,
}

#[derive(Clone)]
pub struct IdentitySpec {
    pub id: &'static str,
    pub kind: IdentityKind,
    pub title: &'static str,
    pub domain: DomainSpec,
    pub forms: Vec<Form>,
    pub(crate) compose: Option<Compose>,
    pub(crate) limit: Option<LimitRule>,
}

impl IdentitySpec {
    /// Equation label the id refers to, e.g. `EQ_2_17a` gives `(2.17a)`.
    pub fn equation_label(&self) -> String {
        equation_label(self.id)
    }

    pub fn printed(&self) -> Option<&Form> {
        self.forms.iter().find(|f| f.role == FormRole::Printed)
    }

    pub fn has_composition(&self) -> bool {
        self.compose.is_some()
    }
}

fn equation_label(id: &str) -> String {
    let split = |rest: &str| -> (String, String) {
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let suffix = rest[digits.len()..].to_string();
        (digits, suffix)
    };
    if let Some(rest) = id.strip_prefix("EQ_2_").or_else(|| id.strip_prefix("LIM_2_")) {
        let (n, suffix) = split(rest);
        format!("(2.{n}{suffix})")
    } else if let Some(rest) = id.strip_prefix("SC_54_") {
        format!("(2.54) special case {rest}")
    } else if let Some(rest) = id.strip_prefix("SC_") {
        format!("(2.50)-(2.53) special case {rest}")
    } else {
        id.to_string()
    }
}

/// Number of identities in the catalog.
pub const REGISTRY_SIZE: usize = 121;

static REGISTRY: OnceLock<Vec<IdentitySpec>> = OnceLock::new();

/// All identities in registry order.
pub fn registry() -> &'static [IdentitySpec] {
    REGISTRY.get_or_init(catalog::build)
}

pub fn lookup(id: &str) -> QResult<&'static IdentitySpec> {
    registry()
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| QError::UnknownIdentity(id.to_string()))
}

pub fn ids() -> Vec<&'static str> {
    registry().iter().map(|s| s.id).collect()
}

/// Outcome of one form at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormOutcome {
    pub label: &'static str,
    pub role: FormRole,
    pub lhs_value: Complex64,
    pub rhs_value: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub point: SamplePoint,
    pub lhs_value: Complex64,
    pub rhs_value: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub status: Status,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Limit checks: error at each `q` of the sequence.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sequence: Vec<(f64, f64)>,
    /// Repairs and alternatives evaluated at the same point.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub other_forms: Vec<FormOutcome>,
}

const NAN_C: Complex64 = Complex64 { re: f64::NAN, im: f64::NAN };

fn eval_form(form: &Form, e: &Env, tol: f64) -> FormOutcome {
    let mut out = FormOutcome {
        label: form.label,
        role: form.role,
        lhs_value: NAN_C,
        rhs_value: NAN_C,
        abs_residual: f64::NAN,
        rel_residual: f64::NAN,
        status: Status::NotConverged,
        detail: None,
    };
    match (form.eval)(e) {
        Ok(pairs) => {
            let (mut abs, mut rel) = (0.0f64, 0.0f64);
            for &(l, r) in &pairs {
                let a = (l - r).norm();
                let rr = a / r.norm().max(1.0);
                // NaN must not be absorbed by max
                if a.is_nan() || rr.is_nan() {
                    abs = f64::NAN;
                    rel = f64::NAN;
                    break;
                }
                abs = abs.max(a);
                rel = rel.max(rr);
            }
            if let Some(&(l, r)) = pairs.first() {
                out.lhs_value = l;
                out.rhs_value = r;
            }
            out.abs_residual = abs;
            out.rel_residual = rel;
            out.status = if rel <= tol { Status::Pass } else { Status::Fail };
        }
        Err(err) if err.is_not_converged() => {
            out.detail = Some(err.to_string());
        }
        Err(err) => {
            out.abs_residual = f64::INFINITY;
            out.rel_residual = f64::INFINITY;
            out.status = Status::Fail;
            out.detail = Some(err.to_string());
        }
    }
    out
}

/// Checks every form of a non-limit identity at `point`.
pub(crate) fn check_forms(spec: &IdentitySpec, point: &SamplePoint, cfg: &SeriesConfig, tol: f64) -> QResult<Vec<FormOutcome>> {
    spec.domain.validate(point, cfg)?;
    let e = Env::new(point, cfg)?;
    Ok(spec.forms.iter().map(|f| eval_form(f, &e, tol)).collect())
}

/// Checks identity `id` at `point`; the printed form decides `status`.
///
/// Points outside the identity's domain give a `Domain` error rather than a
/// failing check.
pub fn check(id: &str, point: &SamplePoint, cfg: &SeriesConfig, tols: &Tolerances) -> QResult<CheckResult> {
    cfg.validate()?;
    let spec = lookup(id)?;
    if spec.kind == IdentityKind::Limit {
        return limit_check(id, None, point, cfg, tols);
    }
    let tol = tols.for_kind(spec.kind);
    let outcomes = check_forms(spec, point, cfg, tol)?;
    let printed_idx = outcomes.iter().position(|o| o.role == FormRole::Printed).unwrap_or(0);
    let printed = outcomes[printed_idx].clone();
    let other_forms = outcomes
        .into_iter()
        .enumerate()
        .filter(|(i, _)| *i != printed_idx)
        .map(|(_, o)| o)
        .collect();
    Ok(CheckResult {
        id: id.to_string(),
        point: *point,
        lhs_value: printed.lhs_value,
        rhs_value: printed.rhs_value,
        abs_residual: printed.abs_residual,
        rel_residual: printed.rel_residual,
        status: printed.status,
        tolerance: tol,
        detail: printed.detail,
        sequence: Vec::new(),
        other_forms,
    })
}

/// Default `q` sequence for limits towards the classical functions.
pub const LIMIT_Q_SEQUENCE: [f64; 3] = [0.9, 0.99, 0.999];
/// Exponents observed for the divergent-parameter limit.
pub const DIVERGENT_BETA_SEQUENCE: [f64; 3] = [-5.0, -10.0, -15.0];

/// Limit identities.
///
/// For the classical limits, `sequence` lists the `q` values (default
/// [`LIMIT_Q_SEQUENCE`]) and the check passes when the error against the
/// classical function strictly decreases and ends below the limit tolerance.
/// The vanishing-parameter limits are exact substitutions and ignore
/// `sequence`. The divergent-parameter limit always reports `unverifiable`,
/// with the observed values over `β` in `sequence`.
pub fn limit_check(
    id: &str,
    sequence: Option<&[f64]>,
    point: &SamplePoint,
    cfg: &SeriesConfig,
    tols: &Tolerances,
) -> QResult<CheckResult> {
    cfg.validate()?;
    let spec = lookup(id)?;
    let rule = spec
        .limit
        .ok_or_else(|| QError::domain(format!("{id} is not a limit identity")))?;
    spec.domain.validate(point, cfg)?;
    let mut res = CheckResult {
        id: id.to_string(),
        point: *point,
        lhs_value: NAN_C,
        rhs_value: NAN_C,
        abs_residual: f64::NAN,
        rel_residual: f64::NAN,
        status: Status::NotConverged,
        tolerance: tols.limit,
        detail: None,
        sequence: Vec::new(),
        other_forms: Vec::new(),
    };
    let outcome = match rule {
        LimitRule::Classical(kind) => classical_limit(kind, sequence.unwrap_or(&LIMIT_Q_SEQUENCE), point, cfg, tols, &mut res),
        LimitRule::Phi2VanishingB | LimitRule::Phi1VanishingA => vanishing_limit(rule, point, cfg, tols, &mut res),
        LimitRule::Unverifiable => divergent_limit(sequence.unwrap_or(&DIVERGENT_BETA_SEQUENCE), point, cfg, &mut res),
    };
    if let Err(err) = outcome {
        if err.is_not_converged() {
            res.status = Status::NotConverged;
        } else {
            res.status = Status::Fail;
            res.abs_residual = f64::INFINITY;
            res.rel_residual = f64::INFINITY;
        }
        res.detail = Some(err.to_string());
    }
    Ok(res)
}

fn classical_limit(
    kind: HumbertKind,
    qs: &[f64],
    p: &SamplePoint,
    cfg: &SeriesConfig,
    tols: &Tolerances,
    res: &mut CheckResult,
) -> QResult<()> {
    if qs.is_empty() {
        return Err(QError::domain("limit sequence must not be empty"));
    }
    let classical_params = ClassicalParams::new(p.alpha, p.beta, p.gamma)?;
    let target = humbert::classical(kind, &classical_params, p.x, p.y, cfg)?.value;
    let mut last = NAN_C;
    for &q in qs {
        let ctx = QContext::real(q)?;
        let h = 1.0 - q;
        let (x, y) = match kind {
            HumbertKind::Phi1 => (p.x, p.y * h),
            HumbertKind::Phi2 => (p.x * h, p.y * h),
            HumbertKind::Phi3 => (p.x * h, p.y * h * h),
        };
        let params = match kind {
            HumbertKind::Phi3 => HumbertParams::phi3(ctx, p.alpha, p.gamma, cfg)?,
            _ => HumbertParams::new(ctx, p.alpha, p.beta, p.gamma, cfg)?,
        };
        let v = humbert::evaluate(kind, &params, x, y, cfg)?.value;
        let err = (v - target).norm() / target.norm().max(1.0);
        res.sequence.push((q, err));
        last = v;
    }
    let errs: Vec<f64> = res.sequence.iter().map(|&(_, e)| e).collect();
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let final_err = *errs.last().unwrap_or(&f64::NAN);
    res.lhs_value = last;
    res.rhs_value = target;
    res.abs_residual = (last - target).norm();
    res.rel_residual = final_err;
    res.status = if decreasing && final_err < tols.limit { Status::Pass } else { Status::Fail };
    if !decreasing {
        res.detail = Some("error is not strictly decreasing along the q sequence".to_string());
    }
    Ok(())
}

fn vanishing_limit(rule: LimitRule, p: &SamplePoint, cfg: &SeriesConfig, tols: &Tolerances, res: &mut CheckResult) -> QResult<()> {
    let ctx = QContext::real(p.q)?;
    let (lhs, rhs) = match rule {
        LimitRule::Phi2VanishingB => {
            let p2 = HumbertParams::new(ctx, p.alpha, p.beta, p.gamma, cfg)?.with_b(Some(Complex64::new(0.0, 0.0)));
            let p3 = HumbertParams::phi3(ctx, p.alpha, p.gamma, cfg)?;
            (
                humbert::phi2(&p2, p.x, p.y, cfg)?.value,
                humbert::phi3(&p3, p.x, p.y, cfg)?.value,
            )
        }
        _ => {
            let p1 = HumbertParams::new(ctx, p.alpha, p.beta, p.gamma, cfg)?.with_a(Complex64::new(0.0, 0.0));
            let p3 = HumbertParams::phi3(ctx, p.beta, p.gamma, cfg)?;
            (
                humbert::phi1(&p1, p.x, p.y, cfg)?.value,
                humbert::phi3(&p3, p.x, p.y, cfg)?.value,
            )
        }
    };
    res.lhs_value = lhs;
    res.rhs_value = rhs;
    res.abs_residual = (lhs - rhs).norm();
    res.rel_residual = res.abs_residual / rhs.norm().max(1.0);
    res.tolerance = tols.algebraic;
    res.status = if res.rel_residual <= tols.algebraic { Status::Pass } else { Status::Fail };
    Ok(())
}

fn divergent_limit(betas: &[f64], p: &SamplePoint, cfg: &SeriesConfig, res: &mut CheckResult) -> QResult<()> {
    let ctx = QContext::real(p.q)?;
    let mut notes = Vec::new();
    for &beta in betas {
        let b = Complex64::new(beta, 0.0);
        let params = HumbertParams::new(ctx, p.alpha, b, p.gamma, cfg)?;
        let x = p.x * ctx.pow(-b);
        match humbert::phi2(&params, x, p.y, cfg) {
            Ok(v) => {
                notes.push(format!("beta={beta}: {:.6e}{:+.6e}i", v.value.re, v.value.im));
                res.sequence.push((beta, v.value.norm()));
                res.lhs_value = v.value;
            }
            Err(err) => notes.push(format!("beta={beta}: {err}")),
        }
    }
    res.status = Status::Unverifiable;
    res.detail = Some(format!("parameter limit has no finite target; observed {}", notes.join(", ")));
    Ok(())
}

/// Compares a depth-`l` recursion against `l` applications of its depth-one step.
pub fn composition_check(id: &str, point: &SamplePoint, cfg: &SeriesConfig, tols: &Tolerances) -> QResult<CheckResult> {
    let spec = lookup(id)?;
    let compose = spec
        .compose
        .ok_or_else(|| QError::domain(format!("{id} has no depth-one composition")))?;
    spec.domain.validate(point, cfg)?;
    let e = Env::new(point, cfg)?;
    let tol = tols.algebraic;
    // target is the first form that holds, which is the printed form when verified
    let outcomes: Vec<FormOutcome> = spec.forms.iter().map(|f| eval_form(f, &e, tol)).collect();
    let best = outcomes
        .iter()
        .filter(|o| o.role != FormRole::Alternative)
        .find(|o| o.status == Status::Pass)
        .or_else(|| outcomes.first())
        .cloned()
        .ok_or_else(|| QError::domain(format!("{id} has no forms")))?;
    let composed = (|| -> QResult<Complex64> {
        let mut v = (compose.base)(&e)?;
        for j in 0..point.l {
            v += (compose.step)(&e, j)?;
        }
        Ok(v)
    })();
    let mut res = CheckResult {
        id: id.to_string(),
        point: *point,
        lhs_value: NAN_C,
        rhs_value: best.rhs_value,
        abs_residual: f64::NAN,
        rel_residual: f64::NAN,
        status: Status::NotConverged,
        tolerance: tol,
        detail: Some(format!("composition against form: {}", best.label)),
        sequence: Vec::new(),
        other_forms: Vec::new(),
    };
    match composed {
        Ok(v) => {
            res.lhs_value = v;
            res.abs_residual = (v - best.rhs_value).norm();
            res.rel_residual = res.abs_residual / best.rhs_value.norm().max(1.0);
            res.status = if res.rel_residual <= tol { Status::Pass } else { Status::Fail };
        }
        Err(err) if err.is_not_converged() => res.detail = Some(err.to_string()),
        Err(err) => {
            res.status = Status::Fail;
            res.detail = Some(err.to_string());
        }
    }
    Ok(res)
}

/// 64-bit FNV-1a, used to derive a per-identity seed.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Draws `count` points from the identity's domain; deterministic in `(id, seed)`.
pub fn sample_domain(id: &str, count: usize, seed: u64) -> QResult<Vec<SamplePoint>> {
    sample_points(lookup(id)?, count, seed, None)
}

pub(crate) fn sample_points(spec: &IdentitySpec, count: usize, seed: u64, xy_max: Option<f64>) -> QResult<Vec<SamplePoint>> {
    if count == 0 {
        return Err(QError::domain("sample count must be positive"));
    }
    let mut domain = spec.domain.clone();
    if let Some(m) = xy_max {
        domain.xy = match domain.xy {
            domain::XyRule::Signed(_) => domain::XyRule::Signed(m),
            domain::XyRule::Annulus(lo, _) => domain::XyRule::Annulus(lo.min(m), m),
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(spec.id));
    Ok((0..count).map(|_| domain.sample(&mut rng)).collect())
}

#[cfg(test)]
mod tests;
