//! Basic Humbert functions and their classical counterparts.
//!
//! With `N = n + k`:
//!
//! * `Φ₁(a, b; c; x, y) = Σ (a)_N (b)_n / ((c)_N (q)_n (q)_k) xⁿ yᵏ`
//! * `Φ₂(a, b; c; x, y) = Σ (a)_n (b)_k / ((c)_N (q)_n (q)_k) xⁿ yᵏ`
//! * `Φ₃(a; c; x, y)    = Σ (a)_n       / ((c)_N (q)_n (q)_k) xⁿ yᵏ`
//!
//! All three need `|x| < 1` and `|y| < 1` for the q-series to converge: the
//! `k`-ratio tends to `y` because `(c)_N` stays bounded. Only `|x| < 1` is
//! checked up front; a `y` outside the disk shows up as `NotConverged`.
//!
//! The ratio closures of `Φ₂` at `b = 0` and `Φ₁` at `a = 0` perform exactly
//! the same floating-point operations as those of `Φ₃`, so those parameter
//! limits hold bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, QResult};
use crate::qcore::{pole_guard, q_pochhammer, EvalResult, QContext, QPower, SeriesConfig};
use crate::series::{sum_double, DoubleSeriesSpec};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HumbertKind {
    Phi1,
    Phi2,
    Phi3,
}

/// Parameters of a basic Humbert function, held as q-powers.
///
/// For `Φ₃` the single numerator sits in `a`, `b` is `None`, and the
/// denominator (written with the letter β in some texts) sits in `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HumbertParams {
    pub ctx: QContext,
    pub a: QPower,
    pub b: Option<QPower>,
    pub c: QPower,
}

impl HumbertParams {
    pub fn from_values(
        ctx: QContext,
        a: Complex64,
        b: Option<Complex64>,
        c: Complex64,
        cfg: &SeriesConfig,
    ) -> QResult<Self> {
        pole_guard(&ctx, c, cfg.tol_pole, "denominator parameter")?;
        Ok(HumbertParams { ctx, a: QPower(a), b: b.map(QPower), c: QPower(c) })
    }

    /// Parameters for `Φ₁`/`Φ₂` from exponents `α, β, γ`.
    pub fn new(ctx: QContext, alpha: Complex64, beta: Complex64, gamma: Complex64, cfg: &SeriesConfig) -> QResult<Self> {
        Self::from_values(ctx, ctx.pow(alpha), Some(ctx.pow(beta)), ctx.pow(gamma), cfg)
    }

    /// Parameters for `Φ₃` from its numerator and denominator exponents.
    pub fn phi3(ctx: QContext, alpha: Complex64, denominator: Complex64, cfg: &SeriesConfig) -> QResult<Self> {
        Self::from_values(ctx, ctx.pow(alpha), None, ctx.pow(denominator), cfg)
    }

    /// Replaces `a`, keeping everything else.
    pub fn with_a(mut self, a: Complex64) -> Self {
        self.a = QPower(a);
        self
    }

    pub fn with_b(mut self, b: Option<Complex64>) -> Self {
        self.b = b.map(QPower);
        self
    }

    fn b_value(&self, what: &str) -> QResult<Complex64> {
        self.b
            .map(QPower::value)
            .ok_or_else(|| QError::domain(format!("{what} needs a second numerator parameter")))
    }
}

/// Integer shift of the exponents; exact multiplication by powers of `q`.
pub fn shifted(p: &HumbertParams, d_alpha: i32, d_beta: i32, d_gamma: i32, cfg: &SeriesConfig) -> QResult<HumbertParams> {
    let ctx = p.ctx;
    let c = p.c.shift(&ctx, d_gamma);
    pole_guard(&ctx, c.value(), cfg.tol_pole, "shifted denominator parameter")?;
    Ok(HumbertParams {
        ctx,
        a: p.a.shift(&ctx, d_alpha),
        b: p.b.map(|b| b.shift(&ctx, d_beta)),
        c,
    })
}

fn check_x(x: Complex64) -> QResult<()> {
    if !(x.norm() < 1.0) {
        return Err(QError::domain(format!("Humbert series require |x| < 1, got {}", x.norm())));
    }
    Ok(())
}

/// `q^0, q^1, …, q^{len−1}` by repeated multiplication.
fn power_table(q: Complex64, len: usize) -> Vec<Complex64> {
    let mut t = Vec::with_capacity(len);
    let mut v = ONE;
    for _ in 0..len {
        t.push(v);
        v *= q;
    }
    t
}

/// Term ratios of the three series at fixed `(x, y)`.
pub struct HumbertRatios {
    kind: HumbertKind,
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: Complex64,
    y: Complex64,
    qp: Vec<Complex64>,
}

impl HumbertRatios {
    /// Ratios valid for `n + k < max_index`.
    pub fn new(kind: HumbertKind, p: &HumbertParams, x: Complex64, y: Complex64, max_index: usize) -> QResult<Self> {
        let b = match kind {
            HumbertKind::Phi1 => p.b_value("phi1")?,
            HumbertKind::Phi2 => p.b_value("phi2")?,
            HumbertKind::Phi3 => Complex64::new(0.0, 0.0),
        };
        Ok(HumbertRatios {
            kind,
            a: p.a.value(),
            b,
            c: p.c.value(),
            x,
            y,
            qp: power_table(p.ctx.q(), max_index + 2),
        })
    }

    /// `term(n+1, k) / term(n, k)`.
    #[inline]
    pub fn ratio_n(&self, n: usize, k: usize) -> Complex64 {
        let qp = &self.qp;
        let den = (ONE - self.c * qp[n + k]) * (ONE - qp[n + 1]);
        match self.kind {
            HumbertKind::Phi1 => (ONE - self.a * qp[n + k]) * ((ONE - self.b * qp[n]) * self.x) / den,
            HumbertKind::Phi2 | HumbertKind::Phi3 => (ONE - self.a * qp[n]) * self.x / den,
        }
    }

    /// `term(n, k+1) / term(n, k)`.
    #[inline]
    pub fn ratio_k(&self, n: usize, k: usize) -> Complex64 {
        let qp = &self.qp;
        let den = (ONE - self.c * qp[n + k]) * (ONE - qp[k + 1]);
        match self.kind {
            HumbertKind::Phi1 => (ONE - self.a * qp[n + k]) * self.y / den,
            HumbertKind::Phi2 => (ONE - self.b * qp[k]) * self.y / den,
            HumbertKind::Phi3 => self.y / den,
        }
    }
}

pub fn evaluate(kind: HumbertKind, p: &HumbertParams, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    check_x(x)?;
    let r = HumbertRatios::new(kind, p, x, y, 2 * cfg.max_terms_2d)?;
    let spec = DoubleSeriesSpec::new(ONE, |n, k| r.ratio_n(n, k), |n, k| r.ratio_k(n, k));
    sum_double(&spec, cfg)
}

pub fn phi1(p: &HumbertParams, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    evaluate(HumbertKind::Phi1, p, x, y, cfg)
}

pub fn phi2(p: &HumbertParams, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    evaluate(HumbertKind::Phi2, p, x, y, cfg)
}

/// `Φ₃(a; c; x, y)`; any `b` in `p` is ignored.
pub fn phi3(p: &HumbertParams, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    evaluate(HumbertKind::Phi3, p, x, y, cfg)
}

/// The `(n, k)` term computed directly from finite q-shifted factorials.
/// Independent of the ratio recurrences; used for brute-force comparison.
pub fn direct_term(kind: HumbertKind, p: &HumbertParams, n: usize, k: usize, x: Complex64, y: Complex64) -> Complex64 {
    let ctx = &p.ctx;
    let q = ctx.q();
    let (a, c) = (p.a.value(), p.c.value());
    let b = p.b.map(QPower::value).unwrap_or(Complex64::new(0.0, 0.0));
    let numer = match kind {
        HumbertKind::Phi1 => q_pochhammer(ctx, a, n + k) * q_pochhammer(ctx, b, n),
        HumbertKind::Phi2 => q_pochhammer(ctx, a, n) * q_pochhammer(ctx, b, k),
        HumbertKind::Phi3 => q_pochhammer(ctx, a, n),
    };
    let denom = q_pochhammer(ctx, c, n + k) * q_pochhammer(ctx, q, n) * q_pochhammer(ctx, q, k);
    numer / denom * x.powi(n as i32) * y.powi(k as i32)
}

/// Exponents of a classical Humbert function; `beta` is unused by `Φ₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl ClassicalParams {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> QResult<Self> {
        let n = gamma.re.round();
        if n <= 0.0 && (gamma - Complex64::new(n, 0.0)).norm() < 1e-12 {
            return Err(QError::domain(format!("classical denominator {gamma} is a non-positive integer")));
        }
        Ok(ClassicalParams { alpha, beta, gamma })
    }
}

fn idx(n: usize) -> Complex64 {
    Complex64::new(n as f64, 0.0)
}

pub fn classical_phi1(p: &ClassicalParams, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    check_x(x)?;
    let (al, be, ga) = (p.alpha, p.beta, p.gamma);
    let spec = DoubleSeriesSpec::new(
        ONE,
        |n, k| (al + idx(n + k)) * (be + idx(n)) * x / ((ga + idx(n + k)) * idx(n + 1)),
        |n, k| (al + idx(n + k)) * y / ((ga + idx(n + k)) * idx(k + 1)),
    );
    sum_double(&spec, cfg)
}

pub fn classical_phi2(p: &ClassicalParams, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    let (al, be, ga) = (p.alpha, p.beta, p.gamma);
    let spec = DoubleSeriesSpec::new(
        ONE,
        |n, k| (al + idx(n)) * x / ((ga + idx(n + k)) * idx(n + 1)),
        |n, k| (be + idx(k)) * y / ((ga + idx(n + k)) * idx(k + 1)),
    );
    sum_double(&spec, cfg)
}

/// Classical `Φ₃(α; γ; x, y)`.
pub fn classical_phi3(p: &ClassicalParams, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    let (al, ga) = (p.alpha, p.gamma);
    let spec = DoubleSeriesSpec::new(
        ONE,
        |n, k| (al + idx(n)) * x / ((ga + idx(n + k)) * idx(n + 1)),
        |n, k| y / ((ga + idx(n + k)) * idx(k + 1)),
    );
    sum_double(&spec, cfg)
}

pub fn classical(kind: HumbertKind, p: &ClassicalParams, x: Complex64, y: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    match kind {
        HumbertKind::Phi1 => classical_phi1(p, x, y, cfg),
        HumbertKind::Phi2 => classical_phi2(p, x, y, cfg),
        HumbertKind::Phi3 => classical_phi3(p, x, y, cfg),
    }
}
