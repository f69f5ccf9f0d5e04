//! Evaluation context shared by every identity form.

use num_complex::Complex64;

use crate::error::QResult;
use crate::humbert::{self, HumbertKind, HumbertParams};
use crate::qcore::{q_number, q_pochhammer, q_pochhammer_inf, QContext, SeriesConfig};
use crate::qops::{self, Axis};
use crate::series::{self, rphis_plain};

use super::SamplePoint;

pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A sample point resolved into q-powers, plus the series policy.
///
/// `a = q^α`, `b = q^β`, `c = q^γ`. For `Φ₃` the numerator is `a` and the
/// denominator is `c`.
pub(crate) struct Env<'a> {
    pub pt: &'a SamplePoint,
    pub cfg: &'a SeriesConfig,
    pub ctx: QContext,
    pub q: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    base: HumbertParams,
}

impl<'a> Env<'a> {
    pub fn new(pt: &'a SamplePoint, cfg: &'a SeriesConfig) -> QResult<Self> {
        let ctx = QContext::real(pt.q)?;
        let base = HumbertParams::new(ctx, pt.alpha, pt.beta, pt.gamma, cfg)?;
        Ok(Env {
            pt,
            cfg,
            ctx,
            q: ctx.q(),
            a: base.a.value(),
            b: base.b.map(|b| b.value()).unwrap_or(ZERO),
            c: base.c.value(),
            x: pt.x,
            y: pt.y,
            base,
        })
    }

    pub fn r(&self) -> usize {
        self.pt.r
    }
    pub fn s(&self) -> usize {
        self.pt.s
    }
    pub fn l(&self) -> usize {
        self.pt.l
    }

    /// `1 − q`.
    pub fn omq(&self) -> Complex64 {
        ONE - self.q
    }

    /// `[e]_q`.
    pub fn qn(&self, e: Complex64) -> Complex64 {
        q_number(&self.ctx, e)
    }

    pub fn pow(&self, e: Complex64) -> Complex64 {
        self.ctx.pow(e)
    }

    pub fn qpow(&self, n: i32) -> Complex64 {
        self.ctx.powi(n)
    }

    pub fn poch(&self, v: Complex64, n: usize) -> Complex64 {
        q_pochhammer(&self.ctx, v, n)
    }

    pub fn poch_inf(&self, v: Complex64) -> QResult<Complex64> {
        Ok(q_pochhammer_inf(&self.ctx, v, self.cfg)?.value)
    }

    /// `x^e` on the principal branch.
    pub fn cpow(&self, z: Complex64, e: Complex64) -> Complex64 {
        (z.ln() * e).exp()
    }

    pub fn phi(&self, kind: HumbertKind, da: i32, db: i32, dc: i32, x: Complex64, y: Complex64) -> QResult<Complex64> {
        let p = humbert::shifted(&self.base, da, db, dc, self.cfg)?;
        Ok(humbert::evaluate(kind, &p, x, y, self.cfg)?.value)
    }

    /// `Φ₁` with exponent shifts `(Δα, Δβ, Δγ)` at `(x, y)`.
    pub fn f1(&self, da: i32, db: i32, dc: i32, x: Complex64, y: Complex64) -> QResult<Complex64> {
        self.phi(HumbertKind::Phi1, da, db, dc, x, y)
    }

    pub fn f2(&self, da: i32, db: i32, dc: i32, x: Complex64, y: Complex64) -> QResult<Complex64> {
        self.phi(HumbertKind::Phi2, da, db, dc, x, y)
    }

    /// `Φ₃` with numerator shift `Δα` and denominator shift `Δγ`.
    pub fn f3(&self, da: i32, dc: i32, x: Complex64, y: Complex64) -> QResult<Complex64> {
        self.phi(HumbertKind::Phi3, da, 0, dc, x, y)
    }

    /// Evaluates a Humbert function with explicit parameter values.
    pub fn phi_values(
        &self,
        kind: HumbertKind,
        a: Complex64,
        b: Option<Complex64>,
        c: Complex64,
        x: Complex64,
        y: Complex64,
    ) -> QResult<Complex64> {
        let p = HumbertParams::from_values(self.ctx, a, b, c, self.cfg)?;
        Ok(humbert::evaluate(kind, &p, x, y, self.cfg)?.value)
    }

    /// Plain-convention `rΦs`.
    pub fn rphis(&self, numer: &[Complex64], denom: &[Complex64], z: Complex64) -> QResult<Complex64> {
        Ok(rphis_plain(&self.ctx, numer, denom, z, self.cfg)?.value)
    }

    /// `Σ_n term(n)` under the series policy.
    pub fn sum<F>(&self, term: F) -> QResult<Complex64>
    where
        F: FnMut(usize) -> QResult<Complex64>,
    {
        Ok(series::sum_1d(self.cfg, term)?.value)
    }

    /// `Θ_x f` (or `Θ_y f`) at the sample point.
    pub fn theta<F>(&self, axis: Axis, f: F) -> QResult<Complex64>
    where
        F: Fn(Complex64, Complex64) -> QResult<Complex64>,
    {
        self.theta_at(axis, f, self.x, self.y)
    }

    pub fn theta_at<F>(&self, axis: Axis, f: F, x: Complex64, y: Complex64) -> QResult<Complex64>
    where
        F: Fn(Complex64, Complex64) -> QResult<Complex64>,
    {
        qops::theta_q_operator(&self.ctx, f, axis, x, y)
    }

    /// `[Θ + e]_q f` at `(x, y)`.
    pub fn bracket<F>(&self, axis: Axis, e: Complex64, f: F, x: Complex64, y: Complex64) -> QResult<Complex64>
    where
        F: Fn(Complex64, Complex64) -> QResult<Complex64>,
    {
        qops::bracket_theta(&self.ctx, f, axis, e, x, y)
    }

    pub fn dx_iter<F>(&self, f: F, z: Complex64, r: usize) -> QResult<Complex64>
    where
        F: Fn(Complex64) -> QResult<Complex64>,
    {
        qops::jackson_derivative_iter(&self.ctx, f, z, r, self.cfg)
    }

    /// `(z² D_q)^r f` by nesting the two-point rule.
    pub fn z2d_iter(&self, f: &dyn Fn(Complex64) -> QResult<Complex64>, z: Complex64, r: usize) -> QResult<Complex64> {
        if r == 0 {
            return f(z);
        }
        let inner = |w: Complex64| self.z2d_iter(f, w, r - 1);
        Ok(z * z * qops::jackson_derivative(&self.ctx, inner, z, self.cfg)?)
    }

    /// `D_{q}` in a parameter value, `(g(v) − g(qv)) / ((1 − q) v)`.
    pub fn dparam<G>(&self, g: G, v: Complex64) -> QResult<Complex64>
    where
        G: Fn(Complex64) -> QResult<Complex64>,
    {
        qops::param_q_derivative(&self.ctx, g, v, self.cfg)
    }

    /// `∫₀¹ f(t) d_q t`.
    pub fn integral<F>(&self, f: F) -> QResult<Complex64>
    where
        F: Fn(Complex64) -> QResult<Complex64>,
    {
        Ok(qops::jackson_integral_01(&self.ctx, f, self.cfg)?.value)
    }

    /// `Γ_q(γ) / (Γ_q(α) Γ_q(γ − α))`.
    pub fn gamma_ratio(&self) -> QResult<Complex64> {
        let g = |e: Complex64| -> QResult<Complex64> { Ok(crate::qcore::q_gamma(&self.ctx, e, self.cfg)?.value) };
        let (al, ga) = (self.pt.alpha, self.pt.gamma);
        Ok(g(ga)? / (g(al)? * g(ga - al)?))
    }
}
