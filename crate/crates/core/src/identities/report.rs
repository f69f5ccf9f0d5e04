//! Suite runner and its JSON, CSV and text renderings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::QResult;
use crate::qcore::SeriesConfig;

use super::domain::DepthRule;
use super::{
    check_forms, composition_check, kernel_normalization, limit_check, lookup, sample_points, CheckResult, FormOutcome,
    FormRole, IdentityKind, IdentitySpec, LimitRule, SamplePoint, Status, Tolerances, Verdict,
};

pub const CSV_HEADER: &str = "id,paper_equation,n_points,n_pass,n_fail,n_not_converged,max_rel_residual,verdict";

#[derive(Debug, Clone, Default, Serialize)]
pub struct FormSummary {
    pub label: String,
    pub role: Option<FormRole>,
    pub n_pass: usize,
    pub n_fail: usize,
    pub n_not_converged: usize,
    pub max_rel_residual: f64,
    /// Passes at every point that converged, and at least one.
    pub holds: bool,
}

impl FormSummary {
    fn add(&mut self, status: Status, rel: f64) {
        match status {
            Status::Pass => self.n_pass += 1,
            Status::Fail => self.n_fail += 1,
            Status::NotConverged => self.n_not_converged += 1,
            Status::Unverifiable => {}
        }
        if !rel.is_nan() {
            self.max_rel_residual = self.max_rel_residual.max(rel);
        }
        self.holds = self.n_fail == 0 && self.n_pass > 0;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FailingPoint {
    pub point: SamplePoint,
    pub lhs_value: Complex64,
    pub rhs_value: Complex64,
    pub rel_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Per-point record for limits: the error (or observed value) sequence.
#[derive(Debug, Clone, Serialize)]
pub struct Observation {
    pub point: SamplePoint,
    pub sequence: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub paper_equation: String,
    pub kind: IdentityKind,
    pub title: String,
    pub n_points: usize,
    pub n_pass: usize,
    pub n_fail: usize,
    pub n_not_converged: usize,
    pub n_unverifiable: usize,
    pub max_rel_residual: f64,
    pub verdict: Verdict,
    pub repaired_by: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
    pub failing_points: Vec<FailingPoint>,
    /// Repairs and alternatives, one summary each.
    pub forms: Vec<FormSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition: Option<FormSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
}

impl IdentityReport {
    /// Verified, or refuted with a repair that holds, or unverifiable.
    pub fn resolved(&self) -> bool {
        self.verdict != Verdict::RefutedAsPrinted || self.repaired_by.is_some()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteSummary {
    pub n_identities: usize,
    pub verified: usize,
    pub refuted_as_printed: usize,
    pub repaired: usize,
    pub unrepaired: usize,
    pub unverifiable: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xy_max: Option<f64>,
    pub config: SeriesConfig,
    pub tolerances: Tolerances,
    pub summary: SuiteSummary,
    pub identities: Vec<IdentityReport>,
    pub notes: Vec<String>,
}

enum PointOutcome {
    Forms(QResult<Vec<FormOutcome>>, Option<QResult<CheckResult>>),
    Limit(QResult<CheckResult>),
}

fn run_point(spec: &IdentitySpec, p: &SamplePoint, cfg: &SeriesConfig, tols: &Tolerances) -> PointOutcome {
    if spec.kind == IdentityKind::Limit {
        return PointOutcome::Limit(limit_check(spec.id, None, p, cfg, tols));
    }
    let forms = check_forms(spec, p, cfg, tols.for_kind(spec.kind));
    let comp = spec.compose.map(|_| composition_check(spec.id, p, cfg, tols));
    PointOutcome::Forms(forms, comp)
}

/// Sampling controls for [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteOptions {
    pub count: usize,
    pub seed: u64,
    /// Overrides the sampling bound on `|x|, |y|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xy_max: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { count: 50, seed: 1, xy_max: None }
    }
}

/// Checks each identity at `opts.count` seeded sample points.
///
/// Points run in parallel; the report is independent of thread scheduling.
pub fn run_suite(ids: &[&str], opts: &SuiteOptions, cfg: &SeriesConfig, tols: &Tolerances) -> QResult<SuiteReport> {
    cfg.validate()?;
    let SuiteOptions { count, seed, xy_max } = *opts;
    if let Some(m) = xy_max {
        if !(m > 0.0 && m < 1.0) {
            return Err(crate::error::QError::domain(format!("xy bound must lie in (0, 1), got {m}")));
        }
    }
    let mut jobs = Vec::new();
    let mut specs = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        let spec = lookup(id)?;
        specs.push(spec);
        for p in sample_points(spec, count, seed, xy_max)? {
            jobs.push((i, p));
        }
    }
    let outcomes: Vec<PointOutcome> = jobs.par_iter().map(|(i, p)| run_point(specs[*i], p, cfg, tols)).collect();

    let mut reports = Vec::with_capacity(specs.len());
    let mut it = jobs.iter().zip(outcomes);
    for spec in &specs {
        let chunk: Vec<_> = it.by_ref().take(count).map(|((_, p), o)| (*p, o)).collect();
        reports.push(summarize(spec, chunk));
    }

    let mut summary = SuiteSummary { n_identities: reports.len(), ..Default::default() };
    for r in &reports {
        match r.verdict {
            Verdict::Verified => summary.verified += 1,
            Verdict::Unverifiable => summary.unverifiable += 1,
            Verdict::RefutedAsPrinted => {
                summary.refuted_as_printed += 1;
                if r.repaired_by.is_some() {
                    summary.repaired += 1;
                } else {
                    summary.unrepaired += 1;
                }
            }
        }
    }

    let mut notes = Vec::new();
    if specs.iter().any(|s| s.kind == IdentityKind::Integral) {
        let reference = SamplePoint::new(0.6, 1.2, 1.0, 2.5, 0.2, 0.15);
        match kernel_normalization(&reference, cfg) {
            Ok((best, res)) => notes.push(format!(
                "integral kernel normalization: {best} (moment residuals at N=0: plain {:.2e}, times (1-q) {:.2e}, divided by (1-q) {:.2e})",
                res[0], res[1], res[2]
            )),
            Err(err) => notes.push(format!("integral kernel normalization could not be determined: {err}")),
        }
    }
    notes.push("residual = |lhs - rhs| / max(1, |rhs|); the printed form decides the verdict".to_string());

    Ok(SuiteReport {
        tool: "qhumbert",
        version: env!("CARGO_PKG_VERSION"),
        seed,
        count,
        xy_max,
        config: cfg.clone(),
        tolerances: *tols,
        summary,
        identities: reports,
        notes,
    })
}

fn summarize(spec: &IdentitySpec, results: Vec<(SamplePoint, PointOutcome)>) -> IdentityReport {
    let mut rep = IdentityReport {
        id: spec.id.to_string(),
        paper_equation: spec.equation_label(),
        kind: spec.kind,
        title: spec.title.to_string(),
        n_points: results.len(),
        n_pass: 0,
        n_fail: 0,
        n_not_converged: 0,
        n_unverifiable: 0,
        max_rel_residual: f64::NAN,
        verdict: Verdict::Unverifiable,
        repaired_by: None,
        pattern: None,
        failing_points: Vec::new(),
        forms: spec
            .forms
            .iter()
            .filter(|f| f.role != FormRole::Printed)
            .map(|f| FormSummary { label: f.label.to_string(), role: Some(f.role), ..Default::default() })
            .collect(),
        composition: spec.compose.map(|_| FormSummary { label: "depth-one composition".to_string(), ..Default::default() }),
        observations: Vec::new(),
    };
    let mut printed = FormSummary::default();
    let mut passing_points = Vec::new();

    for (p, outcome) in results {
        let (status, rel, lhs, rhs, detail) = match outcome {
            PointOutcome::Limit(Ok(c)) => {
                if !c.sequence.is_empty() || spec.limit == Some(LimitRule::Unverifiable) {
                    rep.observations.push(Observation { point: p, sequence: c.sequence.clone(), detail: c.detail.clone() });
                }
                (c.status, c.rel_residual, c.lhs_value, c.rhs_value, c.detail)
            }
            PointOutcome::Limit(Err(err)) | PointOutcome::Forms(Err(err), _) => {
                let nan = Complex64::new(f64::NAN, f64::NAN);
                let st = if err.is_not_converged() { Status::NotConverged } else { Status::Fail };
                (st, f64::INFINITY, nan, nan, Some(err.to_string()))
            }
            PointOutcome::Forms(Ok(forms), comp) => {
                let mut others = rep.forms.iter_mut();
                let mut first = None;
                for o in forms {
                    if o.role == FormRole::Printed {
                        first = Some(o);
                    } else if let Some(s) = others.next() {
                        s.add(o.status, o.rel_residual);
                    }
                }
                if let (Some(summary), Some(c)) = (rep.composition.as_mut(), comp) {
                    match c {
                        Ok(c) => summary.add(c.status, c.rel_residual),
                        Err(err) => summary.add(
                            if err.is_not_converged() { Status::NotConverged } else { Status::Fail },
                            f64::INFINITY,
                        ),
                    }
                }
                let o = first.expect("every identity with forms has a printed form");
                (o.status, o.rel_residual, o.lhs_value, o.rhs_value, o.detail)
            }
        };
        match status {
            Status::Pass => {
                rep.n_pass += 1;
                passing_points.push(p);
            }
            Status::Fail => {
                rep.n_fail += 1;
                rep.failing_points.push(FailingPoint { point: p, lhs_value: lhs, rhs_value: rhs, rel_residual: rel, detail });
            }
            Status::NotConverged => rep.n_not_converged += 1,
            Status::Unverifiable => rep.n_unverifiable += 1,
        }
        printed.add(status, rel);
    }
    if printed.n_pass + printed.n_fail + printed.n_not_converged > 0 {
        rep.max_rel_residual = printed.max_rel_residual;
    }

    rep.verdict = if spec.limit == Some(LimitRule::Unverifiable) {
        Verdict::Unverifiable
    } else if rep.n_fail > 0 {
        Verdict::RefutedAsPrinted
    } else if rep.n_pass > 0 {
        Verdict::Verified
    } else {
        Verdict::Unverifiable
    };
    if rep.verdict == Verdict::RefutedAsPrinted {
        rep.repaired_by = rep
            .forms
            .iter()
            .find(|f| f.role == Some(FormRole::Repair) && f.holds)
            .map(|f| f.label.clone());
        rep.pattern = Some(failure_pattern(spec, &rep.failing_points, &passing_points));
    }
    rep
}

/// Summarizes where the printed form fails, to help diagnose typos.
fn failure_pattern(spec: &IdentitySpec, failing: &[FailingPoint], passing: &[SamplePoint]) -> String {
    let mut parts = Vec::new();
    let depth_of: Option<(&str, fn(&SamplePoint) -> usize)> = match spec.domain.depth {
        DepthRule::L(..) => Some(("l", |p| p.l)),
        DepthRule::R | DepthRule::RS => Some(("r", |p| p.r)),
        DepthRule::S => Some(("s", |p| p.s)),
        DepthRule::None => None,
    };
    if let Some((name, f)) = depth_of {
        let fail: BTreeSet<usize> = failing.iter().map(|fp| f(&fp.point)).collect();
        let pass: BTreeSet<usize> = passing.iter().map(f).collect();
        parts.push(format!("fails at {name} in {fail:?}, holds at {name} in {pass:?}"));
    }
    let ratios: Vec<(Complex64, f64)> = failing
        .iter()
        .filter(|fp| fp.rhs_value.norm() > 0.0 && fp.lhs_value.is_finite())
        .map(|fp| (fp.lhs_value / fp.rhs_value, fp.point.q))
        .collect();
    if !ratios.is_empty() {
        let lo = ratios.iter().map(|(r, _)| r.re).fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().map(|(r, _)| r.re).fold(f64::NEG_INFINITY, f64::max);
        parts.push(format!("lhs/rhs real part in [{lo:.6}, {hi:.6}]"));
        let tracks = |g: fn(f64) -> f64| ratios.iter().all(|(r, q)| (r / g(*q) - 1.0).norm() < 1e-6);
        if tracks(|q| 1.0 - q) {
            parts.push("lhs/rhs equals (1-q)".to_string());
        } else if tracks(|q| 1.0 / (1.0 - q)) {
            parts.push("lhs/rhs equals 1/(1-q)".to_string());
        }
    }
    let errors = failing.iter().filter(|fp| fp.detail.is_some()).count();
    if errors > 0 {
        parts.push(format!("{errors} point(s) failed with an evaluation error"));
    }
    parts.join("; ")
}

fn fmt_residual(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.3e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl SuiteReport {
    /// Every refuted identity has a repair that holds.
    pub fn all_resolved(&self) -> bool {
        self.identities.iter().all(IdentityReport::resolved)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.identities {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                csv_field(&r.id),
                csv_field(&r.paper_equation),
                r.n_points,
                r.n_pass,
                r.n_fail,
                r.n_not_converged,
                fmt_residual(r.max_rel_residual),
                r.verdict.as_str()
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}  seed={} points/id={}", self.tool, self.version, self.seed, self.count);
        for r in &self.identities {
            let _ = writeln!(
                out,
                "{:<10} {:<19} pass {:>3}/{:<3} fail {:>3} nc {:>3}  max rel {:>10}  {}",
                r.id,
                r.verdict.as_str(),
                r.n_pass,
                r.n_points,
                r.n_fail,
                r.n_not_converged,
                fmt_residual(r.max_rel_residual),
                r.repaired_by.as_deref().map(|s| format!("repaired: {s}")).unwrap_or_default()
            );
            if let Some(p) = &r.pattern {
                let _ = writeln!(out, "{:<10} pattern: {p}", "");
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} identities: {} verified, {} refuted as printed ({} repaired, {} unrepaired), {} unverifiable",
            s.n_identities, s.verified, s.refuted_as_printed, s.repaired, s.unrepaired, s.unverifiable
        );
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
