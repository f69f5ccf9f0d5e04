//! Scalar q-calculus primitives.
//!
//! Parameters of the hypergeometric functions are carried as q-power values
//! `a = q^α` rather than as exponents, because every contiguous relation moves
//! a parameter by a whole step and that is an exact multiplication by `q`.
//! Routines that genuinely need the exponent (q-numbers, q-gamma) take it
//! explicitly.
//!
//! Complex powers use the principal branch: `q^α = exp(α·Log q)` with the cut
//! of `Log` along the negative real axis. The q-gamma, q-beta and Jackson
//! integral paths only accept real `q` in `(0, 1)`, where no branch question
//! arises.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, QResult};
use crate::qops;
use crate::series;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// The base `q`, validated once and shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QContext {
    q: Complex64,
}

impl QContext {
    pub fn new(q: Complex64) -> QResult<Self> {
        let m = q.norm();
        if !(m > 0.0 && m < 1.0) || !q.re.is_finite() || !q.im.is_finite() {
            return Err(QError::domain(format!("base q = {q} must satisfy 0 < |q| < 1")));
        }
        Ok(QContext { q })
    }

    pub fn real(q: f64) -> QResult<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    #[inline]
    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// `Some(q)` when the base is real and in `(0, 1)`.
    pub fn real_q(&self) -> Option<f64> {
        (self.q.im == 0.0 && self.q.re > 0.0 && self.q.re < 1.0).then_some(self.q.re)
    }

    pub fn require_real(&self, what: &str) -> QResult<f64> {
        self.real_q()
            .ok_or_else(|| QError::domain(format!("{what} requires real q in (0, 1), got {}", self.q)))
    }

    /// Principal-branch power `q^e`.
    #[inline]
    pub fn pow(&self, e: Complex64) -> Complex64 {
        if e == Complex64::new(0.0, 0.0) {
            return ONE;
        }
        (e * self.q.ln()).exp()
    }

    #[inline]
    pub fn pow_real(&self, e: f64) -> Complex64 {
        self.pow(Complex64::new(e, 0.0))
    }

    /// Integer power by repeated squaring; exact sign handling for negative `n`.
    #[inline]
    pub fn powi(&self, n: i32) -> Complex64 {
        self.q.powi(n)
    }
}

/// A parameter held as its q-power value `q^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QPower(pub Complex64);

impl QPower {
    pub fn from_exponent(ctx: &QContext, alpha: Complex64) -> Self {
        QPower(ctx.pow(alpha))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    /// `α → α + 1`.
    #[inline]
    pub fn raise(self, ctx: &QContext) -> Self {
        QPower(self.0 * ctx.q())
    }

    /// `α → α + steps`, by repeated multiplication (or division) by `q`.
    pub fn shift(self, ctx: &QContext, steps: i32) -> Self {
        let q = ctx.q();
        let mut v = self.0;
        if steps >= 0 {
            for _ in 0..steps {
                v *= q;
            }
        } else {
            for _ in 0..(-steps) {
                v /= q;
            }
        }
        QPower(v)
    }
}

impl From<QPower> for Complex64 {
    fn from(p: QPower) -> Self {
        p.0
    }
}

/// Truncation and tolerance policy for every series, product and integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    /// Relative size below which a term (or antidiagonal block) counts as negligible.
    pub tol: f64,
    pub max_terms_1d: usize,
    /// Maximum number of antidiagonals for double series.
    pub max_terms_2d: usize,
    /// Successive negligible terms required before stopping.
    pub consecutive_small: usize,
    /// Proximity guard around forbidden parameter values.
    pub tol_pole: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            tol: 1e-15,
            max_terms_1d: 20_000,
            max_terms_2d: 1_000,
            consecutive_small: 3,
            tol_pole: 1e-8,
        }
    }
}

impl SeriesConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> QResult<()> {
        if !(self.tol > 0.0) {
            return Err(QError::domain("tol must be positive"));
        }
        if self.max_terms_1d < 1 || self.max_terms_2d < 1 {
            return Err(QError::domain("max_terms must be at least 1"));
        }
        if self.consecutive_small < 2 {
            return Err(QError::domain("consecutive_small must be at least 2"));
        }
        if !(self.tol_pole >= 0.0) {
            return Err(QError::domain("tol_pole must be non-negative"));
        }
        Ok(())
    }
}

/// A computed value together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Magnitude of the last accepted term or block.
    pub tail_estimate: f64,
    pub converged: bool,
}

impl EvalResult {
    /// A value known in closed form.
    pub fn exact(value: Complex64) -> Self {
        EvalResult { value, terms_used: 0, tail_estimate: 0.0, converged: true }
    }
}

/// Raises `DomainError` when `c·q^j` lies within `tol_pole` of 1 for some
/// `j ≥ 0`, i.e. when `c ∈ {1, q⁻¹, q⁻², …}` up to tolerance.
pub fn pole_guard(ctx: &QContext, c: Complex64, tol_pole: f64, what: &str) -> QResult<()> {
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(QError::domain(format!("{what}: parameter {c} is not finite")));
    }
    let q = ctx.q();
    let mut v = c;
    let mut j = 0usize;
    while v.norm() >= 0.5 {
        if (ONE - v).norm() < tol_pole {
            return Err(QError::domain(format!(
                "{what}: parameter {c} is within {tol_pole:e} of q^-{j}"
            )));
        }
        v *= q;
        j += 1;
        if j > 10_000_000 {
            break;
        }
    }
    Ok(())
}

/// The q-number `[α]_q = (1 − q^α)/(1 − q)`.
pub fn q_number(ctx: &QContext, alpha: Complex64) -> Complex64 {
    (ONE - ctx.pow(alpha)) / (ONE - ctx.q())
}

/// Finite q-shifted factorial `(a; q)_n = ∏_{r<n} (1 − a q^r)`.
pub fn q_pochhammer(ctx: &QContext, a: Complex64, n: usize) -> Complex64 {
    let q = ctx.q();
    let mut p = ONE;
    let mut aq = a;
    for _ in 0..n {
        p *= ONE - aq;
        aq *= q;
    }
    p
}

/// Infinite product `(a; q)_∞`, truncated once `|a q^r| < tol` for
/// `consecutive_small` successive factors.
pub fn q_pochhammer_inf(ctx: &QContext, a: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    let q = ctx.q();
    let mut p = ONE;
    let mut aq = a;
    let mut run = 0usize;
    for r in 0..cfg.max_terms_1d {
        let m = aq.norm();
        p *= ONE - aq;
        if m < cfg.tol {
            run += 1;
            if run >= cfg.consecutive_small {
                return Ok(EvalResult { value: p, terms_used: r + 1, tail_estimate: m, converged: true });
            }
        } else {
            run = 0;
        }
        aq *= q;
    }
    Err(QError::NotConverged(EvalResult {
        value: p,
        terms_used: cfg.max_terms_1d,
        tail_estimate: aq.norm(),
        converged: false,
    }))
}

fn nonpositive_integer(z: Complex64, tol: f64) -> bool {
    let n = z.re.round();
    n <= 0.0 && (z - Complex64::new(n, 0.0)).norm() < tol.max(1e-14)
}

/// q-gamma `Γ_q(α) = (q;q)_∞ / ((q^α;q)_∞ (1−q)^{α−1})`, real `q` only.
pub fn q_gamma(ctx: &QContext, alpha: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    let q = ctx.require_real("q_gamma")?;
    if nonpositive_integer(alpha, cfg.tol_pole) {
        return Err(QError::PoleAtNonpositiveInteger(alpha));
    }
    let ratio = q_pochhammer_inf_ratio(ctx, ctx.q(), ctx.pow(alpha), cfg)?;
    let scale = ((alpha - ONE) * (1.0 - q).ln()).exp();
    Ok(EvalResult { value: ratio.value / scale, ..ratio })
}

/// `(a;q)_∞ / (b;q)_∞` as one product of factor ratios. Either product alone
/// underflows for `q` near 1 (`(q;q)_∞ ≈ e^{−π²/6(1−q)}`) while the ratio does not.
pub fn q_pochhammer_inf_ratio(ctx: &QContext, a: Complex64, b: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    let q = ctx.q();
    let (mut aq, mut bq) = (a, b);
    let mut p = ONE;
    let mut run = 0usize;
    for r in 0..cfg.max_terms_1d {
        let den = ONE - bq;
        if den.norm() == 0.0 {
            return Err(QError::domain(format!("(b;q)_inf vanishes at factor {r} for b = {b}")));
        }
        p *= (ONE - aq) / den;
        let m = aq.norm().max(bq.norm());
        if m < cfg.tol {
            run += 1;
            if run >= cfg.consecutive_small {
                return Ok(EvalResult { value: p, terms_used: r + 1, tail_estimate: m, converged: true });
            }
        } else {
            run = 0;
        }
        aq *= q;
        bq *= q;
    }
    Err(QError::NotConverged(EvalResult {
        value: p,
        terms_used: cfg.max_terms_1d,
        tail_estimate: aq.norm().max(bq.norm()),
        converged: false,
    }))
}

/// q-beta `B_q(m, n) = ∫₀¹ t^{m−1} (qt;q)_∞ / (t q^n;q)_∞ d_q t` as a Jackson integral.
pub fn q_beta(ctx: &QContext, m: Complex64, n: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    ctx.require_real("q_beta")?;
    if !(m.re > 0.0) {
        return Err(QError::domain(format!("q_beta requires Re(m) > 0, got {m}")));
    }
    if nonpositive_integer(n, cfg.tol_pole) {
        return Err(QError::domain(format!("q_beta requires n not in {{0, -1, -2, ...}}, got {n}")));
    }
    let qn = ctx.pow(n);
    pole_guard(ctx, qn, cfg.tol_pole, "q_beta kernel")?;
    let q = ctx.q();
    qops::jackson_integral_01(
        ctx,
        |t| {
            let power = (t.ln() * (m - ONE)).exp();
            Ok(power * q_pochhammer_inf_ratio(ctx, q * t, t * qn, cfg)?.value)
        },
        cfg,
    )
}

/// q-exponential `e_q(z) = Σ zⁿ / [n]_q!`, restricted to `|z(1−q)| < 1`.
pub fn q_exponential(ctx: &QContext, z: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    let q = ctx.q();
    let w = z * (ONE - q);
    if w.norm() >= 1.0 {
        return Err(QError::domain(format!("q_exponential requires |z(1-q)| < 1, got {}", w.norm())));
    }
    let mut term = ONE;
    let mut qn1 = q;
    series::sum_1d(cfg, |n| {
        if n > 0 {
            term *= w / (ONE - qn1);
            qn1 *= q;
        }
        Ok(term)
    })
}

/// `(1 − qt)_{−ν} = Σ [ν]_q[ν+1]_q⋯[ν+n−1]_q / [n]_q! · tⁿ = Σ (q^ν;q)_n/(q;q)_n tⁿ`.
///
/// A positive subscript `(1 − qt)_{ν}` under the series reading is this
/// function evaluated at `−ν`.
pub fn q_power_binomial(ctx: &QContext, t: Complex64, nu: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    let q = ctx.q();
    let a = ctx.pow(nu);
    if t.norm() >= 1.0 && !terminates(ctx, a, cfg) {
        return Err(QError::domain(format!("q_power_binomial requires |t| < 1, got {}", t.norm())));
    }
    let mut term = ONE;
    let mut aqn = a;
    let mut qn1 = q;
    series::sum_1d(cfg, |n| {
        if n > 0 {
            term *= (ONE - aqn) * t / (ONE - qn1);
            aqn *= q;
            qn1 *= q;
        }
        Ok(term)
    })
}

/// Product form `(qt;q)_∞ / (q^{ν+1} t;q)_∞`; equals the finite product
/// `(1 − qt)(1 − q²t)⋯(1 − q^ν t)` when `ν` is a non-negative integer.
pub fn q_power_product(ctx: &QContext, t: Complex64, nu: Complex64, cfg: &SeriesConfig) -> QResult<EvalResult> {
    let q = ctx.q();
    let shifted = ctx.pow(nu + ONE) * t;
    pole_guard(ctx, shifted, cfg.tol_pole, "q_power_product")?;
    let top = q_pochhammer_inf(ctx, q * t, cfg)?;
    let bottom = q_pochhammer_inf(ctx, shifted, cfg)?;
    Ok(EvalResult {
        value: top.value / bottom.value,
        terms_used: top.terms_used.max(bottom.terms_used),
        tail_estimate: top.tail_estimate.max(bottom.tail_estimate),
        converged: true,
    })
}

/// True when `(a;q)_n` vanishes for some finite `n`, i.e. `a = q^{−m}`.
pub(crate) fn terminates(ctx: &QContext, a: Complex64, cfg: &SeriesConfig) -> bool {
    let q = ctx.q();
    let mut v = a;
    let mut j = 0;
    while v.norm() >= 0.5 && j < cfg.max_terms_1d {
        if (ONE - v).norm() < cfg.tol_pole.max(1e-13) {
            return true;
        }
        v *= q;
        j += 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn brute_inf(a: Complex64, q: f64, n: usize) -> Complex64 {
        let mut p = ONE;
        let mut aq = a;
        for _ in 0..n {
            p *= ONE - aq;
            aq *= q;
        }
        p
    }

    #[test]
    fn context_rejects_bad_bases() {
        assert!(QContext::real(0.0).is_err());
        assert!(QContext::real(1.0).is_err());
        assert!(QContext::real(-1.2).is_err());
        assert!(QContext::new(Complex64::new(0.6, 0.6)).is_ok());
        assert!(QContext::real(f64::NAN).is_err());
    }

    #[test]
    fn q_number_examples() {
        let ctx = QContext::real(0.5).unwrap();
        assert_eq!(q_number(&ctx, c(0.0)), c(0.0));
        assert!((q_number(&ctx, c(1.0)) - c(1.0)).norm() < 1e-15);
        assert!((q_number(&ctx, c(2.0)) - c(1.5)).norm() < 1e-15);
    }

    #[test]
    fn pochhammer_examples() {
        let ctx = QContext::real(0.5).unwrap();
        assert_eq!(q_pochhammer(&ctx, c(0.3), 0), ONE);
        assert!((q_pochhammer(&ctx, c(0.5), 2) - c(0.375)).norm() < 1e-15);
        let ctx9 = QContext::real(0.9).unwrap();
        for n in 1..6 {
            assert_eq!(q_pochhammer(&ctx9, ONE, n), c(0.0));
        }
    }

    #[test]
    fn pochhammer_inf_examples() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        assert_eq!(q_pochhammer_inf(&ctx, c(0.0), &cfg).unwrap().value, ONE);
        // Frozen from a 200-factor direct product.
        let r = q_pochhammer_inf(&ctx, c(0.5), &cfg).unwrap();
        assert!((r.value - c(0.288_788_095_086_602_4)).norm() < 1e-15);
        let frozen = brute_inf(c(0.5), 0.5, 200);
        assert!((r.value - frozen).norm() < 1e-15);

        let ctx9 = QContext::real(0.9).unwrap();
        let r = q_pochhammer_inf(&ctx9, c(0.9), &cfg).unwrap();
        let oracle = brute_inf(c(0.9), 0.9, 10_000);
        assert!((r.value - oracle).norm() <= 1e-14 * oracle.norm());
    }

    #[test]
    fn pochhammer_inf_reports_non_convergence() {
        let cfg = SeriesConfig { max_terms_1d: 5, ..SeriesConfig::default() };
        let ctx = QContext::real(0.9).unwrap();
        match q_pochhammer_inf(&ctx, c(0.5), &cfg) {
            Err(QError::NotConverged(r)) => {
                assert!(!r.converged);
                assert_eq!(r.terms_used, 5);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn q_gamma_examples() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        assert!((q_gamma(&ctx, c(1.0), &cfg).unwrap().value - ONE).norm() < 1e-14);
        assert!((q_gamma(&ctx, c(2.0), &cfg).unwrap().value - ONE).norm() < 1e-14);
        let g = q_gamma(&ctx, c(2.5), &cfg).unwrap().value;
        let g1 = q_gamma(&ctx, c(3.5), &cfg).unwrap().value;
        assert!((g1 - q_number(&ctx, c(2.5)) * g).norm() < 1e-14 * g1.norm());
    }

    #[test]
    fn q_gamma_poles_and_complex_q() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        for a in [0.0, -1.0, -4.0] {
            assert!(matches!(q_gamma(&ctx, c(a), &cfg), Err(QError::PoleAtNonpositiveInteger(_))));
        }
        let cq = QContext::new(Complex64::new(0.3, 0.2)).unwrap();
        assert!(matches!(q_gamma(&cq, c(1.5), &cfg), Err(QError::Domain(_))));
    }

    #[test]
    fn q_beta_examples() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        let b = q_beta(&ctx, c(2.0), c(1.0), &cfg).unwrap().value;
        assert!((b - c(2.0 / 3.0)).norm() < 1e-14);
        let b = q_beta(&ctx, c(1.0), c(1.0), &cfg).unwrap().value;
        assert!((b - ONE).norm() < 1e-14);

        let ctx4 = QContext::real(0.4).unwrap();
        let b = q_beta(&ctx4, c(1.5), c(2.5), &cfg).unwrap().value;
        let g = q_gamma(&ctx4, c(1.5), &cfg).unwrap().value * q_gamma(&ctx4, c(2.5), &cfg).unwrap().value
            / q_gamma(&ctx4, c(4.0), &cfg).unwrap().value;
        assert!((b - g).norm() < 1e-13 * g.norm());
    }

    #[test]
    fn q_beta_domain_errors() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        assert!(matches!(q_beta(&ctx, c(-0.5), c(1.0), &cfg), Err(QError::Domain(_))));
        assert!(matches!(q_beta(&ctx, c(1.0), c(-2.0), &cfg), Err(QError::Domain(_))));
    }

    #[test]
    fn q_exponential_examples() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        assert_eq!(q_exponential(&ctx, c(0.0), &cfg).unwrap().value, ONE);

        // 50-term brute force with factorials built from q-numbers.
        let z = c(0.3);
        let mut oracle = Complex64::new(0.0, 0.0);
        let mut fact = ONE;
        for n in 0..50 {
            if n > 0 {
                fact *= q_number(&ctx, c(n as f64));
            }
            oracle += z.powi(n) / fact;
        }
        let v = q_exponential(&ctx, z, &cfg).unwrap().value;
        assert!((v - oracle).norm() < 1e-15);
        assert!(matches!(q_exponential(&ctx, c(2.5), &cfg), Err(QError::Domain(_))));
    }

    #[test]
    fn q_exponential_is_reciprocal_product() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.7).unwrap();
        let z = Complex64::new(0.8, -0.4);
        let v = q_exponential(&ctx, z, &cfg).unwrap().value;
        let p = q_pochhammer_inf(&ctx, z * 0.3, &cfg).unwrap().value;
        assert!((v * p - ONE).norm() < 1e-13);
    }

    #[test]
    fn q_power_binomial_examples() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        assert_eq!(q_power_binomial(&ctx, c(0.0), c(2.3), &cfg).unwrap().value, ONE);
        let v = q_power_binomial(&ctx, c(0.2), c(1.0), &cfg).unwrap().value;
        assert!((v - c(1.25)).norm() < 1e-15);
        for t in [0.1, -0.7, 0.95] {
            let v = q_power_binomial(&ctx, c(t), c(0.0), &cfg).unwrap().value;
            assert_eq!(v, ONE);
        }
        assert!(q_power_binomial(&ctx, c(1.0), c(0.5), &cfg).is_err());
        // Terminating case is allowed on |t| >= 1.
        let v = q_power_binomial(&ctx, c(2.0), c(-1.0), &cfg).unwrap().value;
        // (q^-1;q)_1/(q;q)_1 · t = (1 − 2)/(1 − 0.5) · 2, and every later term vanishes.
        assert!((v - c(1.0 + (1.0 - 2.0) / (1.0 - 0.5) * 2.0)).norm() < 1e-14);
    }

    #[test]
    fn q_power_product_finite_case() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.6).unwrap();
        let t = c(0.35);
        let v = q_power_product(&ctx, t, c(3.0), &cfg).unwrap().value;
        let direct = (ONE - t * 0.6) * (ONE - t * 0.36) * (ONE - t * 0.216);
        assert!((v - direct).norm() < 1e-15);
    }

    #[test]
    fn pole_guard_detects_reciprocal_powers() {
        let ctx = QContext::real(0.5).unwrap();
        assert!(pole_guard(&ctx, c(1.0), 1e-8, "t").is_err());
        assert!(pole_guard(&ctx, c(4.0), 1e-8, "t").is_err());
        assert!(pole_guard(&ctx, c(4.0 + 1e-6), 1e-8, "t").is_ok());
        assert!(pole_guard(&ctx, c(0.25), 1e-8, "t").is_ok());
    }

    #[test]
    fn shift_round_trips_exactly() {
        let ctx = QContext::real(0.5).unwrap();
        let p = QPower::from_exponent(&ctx, c(2.1));
        let back = p.shift(&ctx, -1).shift(&ctx, -1).shift(&ctx, 2);
        assert_eq!(back, p);
        assert_eq!(p.raise(&ctx).value(), p.value() * 0.5);
    }
}
