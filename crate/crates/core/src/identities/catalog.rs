//! Identity definitions. `a = q^α`, `b = q^β`, `c = q^γ`; for `Φ₃` the
//! denominator exponent is `γ`.

use num_complex::Complex64;

use crate::error::QResult;
use crate::humbert::HumbertKind;
use crate::qcore::{q_exponential, q_power_binomial, q_power_product, SeriesConfig};
use crate::qops::Axis::{Both, X, Y};

use super::domain::{AvoidRule, DepthRule, DomainSpec, GammaRule};
use super::env::{Env, ONE, ZERO};
use super::{Compose, Form, FormFn, FormRole, IdentityKind, IdentitySpec, LimitRule, SamplePoint};

type C = Complex64;
type Sides = QResult<Vec<(C, C)>>;

fn pair(l: C, r: C) -> Sides {
    Ok(vec![(l, r)])
}

/// Every value in the chain against the last one.
fn chain(v: Vec<C>) -> Sides {
    let last = *v.last().expect("chain needs values");
    Ok(v[..v.len() - 1].iter().map(|&x| (x, last)).collect())
}

fn cr(v: f64) -> C {
    C::new(v, 0.0)
}

fn ident(id: &'static str, kind: IdentityKind, title: &'static str, domain: DomainSpec, printed: FormFn) -> IdentitySpec {
    IdentitySpec {
        id,
        kind,
        title,
        domain,
        forms: vec![Form { label: "printed", role: FormRole::Printed, eval: printed }],
        compose: None,
        limit: None,
    }
}

impl IdentitySpec {
    fn repair(mut self, label: &'static str, eval: FormFn) -> Self {
        self.forms.push(Form { label, role: FormRole::Repair, eval });
        self
    }

    fn alt(mut self, label: &'static str, eval: FormFn) -> Self {
        self.forms.push(Form { label, role: FormRole::Alternative, eval });
        self
    }

    fn compose(mut self, base: fn(&Env) -> QResult<C>, step: fn(&Env, usize) -> QResult<C>) -> Self {
        self.compose = Some(Compose { base, step });
        self
    }
}

fn limit(id: &'static str, title: &'static str, rule: LimitRule) -> IdentitySpec {
    IdentitySpec {
        id,
        kind: IdentityKind::Limit,
        title,
        domain: DomainSpec::base(),
        forms: Vec::new(),
        compose: None,
        limit: Some(rule),
    }
}

// ---------------------------------------------------------------------------
// shared pieces

impl Env<'_> {
    fn ri(&self) -> i32 {
        self.r() as i32
    }
    fn si(&self) -> i32 {
        self.s() as i32
    }
    fn li(&self) -> i32 {
        self.l() as i32
    }
    /// `q^{γ−1}`.
    fn cq(&self) -> C {
        self.c / self.q
    }
    /// `[γ − 1]_q`.
    fn qn_gm1(&self) -> C {
        self.qn(self.pt.gamma - ONE)
    }
    fn omq_pow(&self, n: usize) -> C {
        self.omq().powi(n as i32)
    }

    /// `Σ_{r=1}^{l} q^{r−1} g(r)`.
    fn raised_sum(&self, g: impl Fn(i32) -> QResult<C>) -> QResult<C> {
        let mut s = ZERO;
        for r in 1..=self.li() {
            s += self.qpow(r - 1) * g(r)?;
        }
        Ok(s)
    }

    /// `Σ_{r=1}^{l} c q^{r−1} / ((q^r − c)(q^{r−1} − c)) · g(r)`.
    fn lowered_sum(&self, g: impl Fn(i32) -> QResult<C>) -> QResult<C> {
        let mut s = ZERO;
        for r in 1..=self.li() {
            let w = self.c * self.qpow(r - 1) / ((self.qpow(r) - self.c) * (self.qpow(r - 1) - self.c));
            s += w * g(r)?;
        }
        Ok(s)
    }

    /// Weight of one denominator-lowering step taken from `γ − j`.
    fn lowering_weight(&self, j: usize) -> (C, i32) {
        let cj = self.pow(self.pt.gamma - cr(j as f64));
        (cj / ((self.q - cj) * (ONE - cj)), 1 - j as i32)
    }

    fn a_at(&self, j: usize) -> C {
        self.pow(self.pt.alpha + cr(j as f64))
    }
    fn b_at(&self, j: usize) -> C {
        self.pow(self.pt.beta + cr(j as f64))
    }

    fn f1_(&self) -> QResult<C> {
        self.f1(0, 0, 0, self.x, self.y)
    }
    fn f2_(&self) -> QResult<C> {
        self.f2(0, 0, 0, self.x, self.y)
    }
    fn f3_(&self) -> QResult<C> {
        self.f3(0, 0, self.x, self.y)
    }
}

// ---------------------------------------------------------------------------
// q-derivatives in the arguments

fn d_phi1_x(e: &Env) -> Sides {
    let r = e.r();
    let lhs = e.dx_iter(|x| e.f1(0, 0, 0, x, e.y), e.x, r)?;
    let k = e.poch(e.a, r) * e.poch(e.b, r) / (e.poch(e.c, r) * e.omq_pow(r));
    pair(lhs, k * e.f1(e.ri(), e.ri(), e.ri(), e.x, e.y)?)
}

fn d_phi1_y(e: &Env) -> Sides {
    let s = e.s();
    let lhs = e.dx_iter(|y| e.f1(0, 0, 0, e.x, y), e.y, s)?;
    let k = e.poch(e.a, s) / (e.poch(e.c, s) * e.omq_pow(s));
    pair(lhs, k * e.f1(e.si(), 0, e.si(), e.x, e.y)?)
}

fn d_phi1_xy(e: &Env) -> Sides {
    let (r, s) = (e.r(), e.s());
    let lhs = e.dx_iter(|x| e.dx_iter(|y| e.f1(0, 0, 0, x, y), e.y, s), e.x, r)?;
    let k = e.poch(e.a, r + s) * e.poch(e.b, r) / (e.poch(e.c, r + s) * e.omq_pow(r + s));
    let n = (r + s) as i32;
    pair(lhs, k * e.f1(n, e.ri(), n, e.x, e.y)?)
}

fn d_phi2_x(e: &Env) -> Sides {
    let r = e.r();
    let lhs = e.dx_iter(|x| e.f2(0, 0, 0, x, e.y), e.x, r)?;
    let k = e.poch(e.a, r) / (e.poch(e.c, r) * e.omq_pow(r));
    pair(lhs, k * e.f2(e.ri(), 0, e.ri(), e.x, e.y)?)
}

fn d_phi2_y(e: &Env) -> Sides {
    let s = e.s();
    let lhs = e.dx_iter(|y| e.f2(0, 0, 0, e.x, y), e.y, s)?;
    let k = e.poch(e.b, s) / (e.poch(e.c, s) * e.omq_pow(s));
    pair(lhs, k * e.f2(0, e.si(), e.si(), e.x, e.y)?)
}

fn d_phi2_xy(e: &Env) -> Sides {
    let (r, s) = (e.r(), e.s());
    let lhs = e.dx_iter(|x| e.dx_iter(|y| e.f2(0, 0, 0, x, y), e.y, s), e.x, r)?;
    let k = e.poch(e.a, r) * e.poch(e.b, s) / (e.poch(e.c, r + s) * e.omq_pow(r + s));
    pair(lhs, k * e.f2(e.ri(), e.si(), (r + s) as i32, e.x, e.y)?)
}

fn d_phi3_x(e: &Env) -> Sides {
    let r = e.r();
    let lhs = e.dx_iter(|x| e.f3(0, 0, x, e.y), e.x, r)?;
    let k = e.poch(e.a, r) / (e.poch(e.c, r) * e.omq_pow(r));
    pair(lhs, k * e.f3(e.ri(), e.ri(), e.x, e.y)?)
}

fn d_phi3_y(e: &Env) -> Sides {
    let s = e.s();
    let lhs = e.dx_iter(|y| e.f3(0, 0, e.x, y), e.y, s)?;
    let k = ONE / (e.poch(e.c, s) * e.omq_pow(s));
    pair(lhs, k * e.f3(0, e.si(), e.x, e.y)?)
}

fn d_phi3_xy(e: &Env) -> Sides {
    let (r, s) = (e.r(), e.s());
    let lhs = e.dx_iter(|x| e.dx_iter(|y| e.f3(0, 0, x, y), e.y, s), e.x, r)?;
    let k = e.poch(e.a, r) / (e.omq_pow(r + s) * e.poch(e.c, r + s));
    pair(lhs, k * e.f3(e.ri(), (r + s) as i32, e.x, e.y)?)
}

fn d_phi1_x_once(e: &Env) -> Sides {
    let lhs = crate::qops::jackson_derivative(&e.ctx, |x| e.f1(0, 0, 0, x, e.y), e.x, e.cfg)?;
    let k = (ONE - e.a) * (ONE - e.b) / (e.omq() * (ONE - e.c));
    pair(lhs, k * e.f1(1, 1, 1, e.x, e.y)?)
}

// ---------------------------------------------------------------------------
// Θ-operator relations

/// `(q^e Θ_u + [e]_q) F + q^e Θ_v F(q·u)` for the pair of axes `(u, v)`.
fn theta_mix(e: &Env, f: &dyn Fn(C, C) -> QResult<C>, exp: C, u_is_x: bool) -> QResult<C> {
    let p = e.pow(exp);
    let base = f(e.x, e.y)?;
    if u_is_x {
        let tu = e.theta(X, f)?;
        let tv = e.theta(Y, |x, y| f(e.q * x, y))?;
        Ok(p * tu + e.qn(exp) * base + p * tv)
    } else {
        let tu = e.theta(Y, f)?;
        let tv = e.theta(X, |x, y| f(x, e.q * y))?;
        Ok(p * tu + e.qn(exp) * base + p * tv)
    }
}

/// `(q^e Θ_u + [e]_q) F` for a single axis.
fn theta_single(e: &Env, f: &dyn Fn(C, C) -> QResult<C>, exp: C, axis: crate::qops::Axis) -> QResult<C> {
    Ok(e.pow(exp) * e.theta(axis, f)? + e.qn(exp) * f(e.x, e.y)?)
}

/// `Θ_x F + Θ_y F(qx)` and `Θ_y F + Θ_x F(qy)`.
fn theta_sym(e: &Env, f: &dyn Fn(C, C) -> QResult<C>) -> Sides {
    let lhs = e.theta(X, f)? + e.theta(Y, |x, y| f(e.q * x, y))?;
    let rhs = e.theta(Y, f)? + e.theta(X, |x, y| f(x, e.q * y))?;
    pair(lhs, rhs)
}

// ---------------------------------------------------------------------------
// parameter q-differences

fn dparam_alpha_phi1(e: &Env) -> QResult<C> {
    e.dparam(|a| e.phi_values(HumbertKind::Phi1, a, Some(e.b), e.c, e.x, e.y), e.a)
}

fn dgamma(e: &Env, kind: HumbertKind) -> QResult<C> {
    let b = if kind == HumbertKind::Phi3 { None } else { Some(e.b) };
    e.dparam(|c| e.phi_values(kind, e.a, b, c, e.x, e.y), e.c)
}

// ---------------------------------------------------------------------------
// PDE helpers

/// `[Θ_x + Θ_y + e]_q` applied at `(x, y)`.
fn both(e: &Env, exp: C, f: &dyn Fn(C, C) -> QResult<C>, x: C, y: C) -> QResult<C> {
    e.bracket(Both, exp, f, x, y)
}

// ---------------------------------------------------------------------------
// recursions in the numerator parameters

fn rec_phi1_alpha(e: &Env) -> Sides {
    let k = ONE / (ONE - e.c);
    let s1 = e.raised_sum(|r| e.f1(r, 1, 1, e.x, e.y))?;
    let s2 = e.raised_sum(|r| e.f1(r, 0, 1, e.q * e.x, e.y))?;
    pair(
        e.f1(e.li(), 0, 0, e.x, e.y)?,
        e.f1_()? + e.a * e.x * (ONE - e.b) * k * s1 + e.a * e.y * k * s2,
    )
}

fn step_phi1_alpha(e: &Env, j: usize) -> QResult<C> {
    let aj = e.a_at(j);
    let k = ONE / (ONE - e.c);
    let jj = j as i32 + 1;
    Ok(aj * e.x * (ONE - e.b) * k * e.f1(jj, 1, 1, e.x, e.y)? + aj * e.y * k * e.f1(jj, 0, 1, e.q * e.x, e.y)?)
}

fn rec_phi1_alpha_sym_printed(e: &Env) -> Sides {
    let k = ONE / (ONE - e.c);
    let sy = e.raised_sum(|r| e.f1(r, 1, 1, e.x, e.y))?;
    let sx = e.raised_sum(|r| e.f1(r, 0, 1, e.x, e.q * e.y))?;
    pair(
        e.f1(e.li(), 0, 0, e.x, e.y)?,
        e.f1_()? + e.a * e.y * k * sy + e.a * e.x * (ONE - e.b) * k * sx,
    )
}

fn rec_phi1_alpha_sym(e: &Env) -> Sides {
    let k = ONE / (ONE - e.c);
    let sy = e.raised_sum(|r| e.f1(r, 0, 1, e.x, e.y))?;
    let sx = e.raised_sum(|r| e.f1(r, 1, 1, e.x, e.q * e.y))?;
    pair(
        e.f1(e.li(), 0, 0, e.x, e.y)?,
        e.f1_()? + e.a * e.y * k * sy + e.a * e.x * (ONE - e.b) * k * sx,
    )
}

fn step_phi1_alpha_sym(e: &Env, j: usize) -> QResult<C> {
    let aj = e.a_at(j);
    let k = ONE / (ONE - e.c);
    let jj = j as i32 + 1;
    Ok(aj * e.y * k * e.f1(jj, 0, 1, e.x, e.y)? + aj * e.x * (ONE - e.b) * k * e.f1(jj, 1, 1, e.x, e.q * e.y)?)
}

fn rec_phi1_beta_with(e: &Env, g: impl Fn(i32) -> QResult<C>) -> Sides {
    let s = e.raised_sum(g)?;
    pair(
        e.f1(0, e.li(), 0, e.x, e.y)?,
        e.f1_()? + e.b * e.x * (ONE - e.a) / (ONE - e.c) * s,
    )
}

fn step_phi1_beta(e: &Env, j: usize) -> QResult<C> {
    Ok(e.b_at(j) * e.x * (ONE - e.a) / (ONE - e.c) * e.f1(1, j as i32 + 1, 1, e.x, e.y)?)
}

fn rec_phi2_alpha(e: &Env) -> Sides {
    let s = e.raised_sum(|r| e.f2(r, 0, 1, e.x, e.y))?;
    pair(e.f2(e.li(), 0, 0, e.x, e.y)?, e.f2_()? + e.a * e.x / (ONE - e.c) * s)
}

fn step_phi2_alpha(e: &Env, j: usize) -> QResult<C> {
    Ok(e.a_at(j) * e.x / (ONE - e.c) * e.f2(j as i32 + 1, 0, 1, e.x, e.y)?)
}

fn rec_phi2_beta_with(e: &Env, w: C, x: C) -> Sides {
    let s = e.raised_sum(|r| e.f2(0, r, 1, x, e.y))?;
    pair(e.f2(0, e.li(), 0, e.x, e.y)?, e.f2_()? + w * e.y / (ONE - e.c) * s)
}

fn step_phi2_beta(e: &Env, j: usize) -> QResult<C> {
    Ok(e.b_at(j) * e.y / (ONE - e.c) * e.f2(0, j as i32 + 1, 1, e.x, e.y)?)
}

fn rec_phi3_alpha(e: &Env) -> Sides {
    let s = e.raised_sum(|r| e.f3(r, 1, e.x, e.y))?;
    pair(e.f3(e.li(), 0, e.x, e.y)?, e.f3_()? + e.a * e.x / (ONE - e.c) * s)
}

fn step_phi3_alpha(e: &Env, j: usize) -> QResult<C> {
    Ok(e.a_at(j) * e.x / (ONE - e.c) * e.f3(j as i32 + 1, 1, e.x, e.y)?)
}

// ---------------------------------------------------------------------------
// recursions lowering the denominator parameter

/// `Φ₁(γ−l)` against the lowered sums; `x`-sum with `β+1` when `beta_in_x`.
fn low_phi1(e: &Env, beta_in_x: bool, xs: impl Fn(i32) -> (C, C), ys: impl Fn(i32) -> (C, C)) -> Sides {
    let (db_x, db_y) = if beta_in_x { (1, 0) } else { (0, 1) };
    let sx = e.lowered_sum(|r| {
        let (x, y) = xs(r);
        e.f1(1, db_x, 2 - r, x, y)
    })?;
    let sy = e.lowered_sum(|r| {
        let (x, y) = ys(r);
        e.f1(1, db_y, 2 - r, x, y)
    })?;
    let wx = e.x * (ONE - e.a) * if beta_in_x { ONE - e.b } else { ONE };
    let wy = e.y * (ONE - e.a) * if beta_in_x { ONE } else { ONE - e.b };
    pair(e.f1(0, 0, -e.li(), e.x, e.y)?, e.f1_()? + wx * sx + wy * sy)
}

fn step_low_phi1(e: &Env, j: usize) -> QResult<C> {
    let (w, dc) = e.lowering_weight(j);
    Ok(w * e.x * (ONE - e.a) * (ONE - e.b) * e.f1(1, 1, dc, e.x, e.y)?
        + w * e.y * (ONE - e.a) * e.f1(1, 0, dc, e.q * e.x, e.y)?)
}

fn step_low_phi1_sym(e: &Env, j: usize) -> QResult<C> {
    let (w, dc) = e.lowering_weight(j);
    Ok(w * e.y * (ONE - e.a) * e.f1(1, 0, dc, e.x, e.y)?
        + w * e.x * (ONE - e.a) * (ONE - e.b) * e.f1(1, 1, dc, e.x, e.q * e.y)?)
}

/// Printed `y`-first form: `β+1` in the `y`-sum, `x`-sum at `(x, q^r y)` when `full_q`.
fn low_phi1_sym_printed(e: &Env) -> Sides {
    let sy = e.lowered_sum(|r| e.f1(1, 1, 2 - r, e.x, e.y))?;
    let sx = e.lowered_sum(|r| e.f1(1, 0, 2 - r, e.x, e.qpow(r) * e.y))?;
    pair(
        e.f1(0, 0, -e.li(), e.x, e.y)?,
        e.f1_()? + e.y * (ONE - e.a) * sy + e.x * (ONE - e.a) * (ONE - e.b) * sx,
    )
}

fn low_phi1_sym_with(e: &Env, yarg: impl Fn(i32) -> C) -> Sides {
    let sy = e.lowered_sum(|r| e.f1(1, 0, 2 - r, e.x, e.y))?;
    let sx = e.lowered_sum(|r| e.f1(1, 1, 2 - r, e.x, yarg(r)))?;
    pair(
        e.f1(0, 0, -e.li(), e.x, e.y)?,
        e.f1_()? + e.y * (ONE - e.a) * sy + e.x * (ONE - e.a) * (ONE - e.b) * sx,
    )
}

/// `Φ₂(γ−l)`; the `y`-sum is evaluated at `(xarg(r), y)` and the `x`-sum at `(x, yarg(r))`.
fn low_phi2(e: &Env, xarg: impl Fn(i32) -> C, yarg: impl Fn(i32) -> C) -> Sides {
    let sx = e.lowered_sum(|r| e.f2(1, 0, 2 - r, e.x, yarg(r)))?;
    let sy = e.lowered_sum(|r| e.f2(0, 1, 2 - r, xarg(r), e.y))?;
    pair(
        e.f2(0, 0, -e.li(), e.x, e.y)?,
        e.f2_()? + e.x * (ONE - e.a) * sx + e.y * (ONE - e.b) * sy,
    )
}

fn step_low_phi2_x(e: &Env, j: usize) -> QResult<C> {
    let (w, dc) = e.lowering_weight(j);
    Ok(w * e.x * (ONE - e.a) * e.f2(1, 0, dc, e.x, e.y)? + w * e.y * (ONE - e.b) * e.f2(0, 1, dc, e.q * e.x, e.y)?)
}

fn step_low_phi2_y(e: &Env, j: usize) -> QResult<C> {
    let (w, dc) = e.lowering_weight(j);
    Ok(w * e.y * (ONE - e.b) * e.f2(0, 1, dc, e.x, e.y)? + w * e.x * (ONE - e.a) * e.f2(1, 0, dc, e.x, e.q * e.y)?)
}

fn low_phi3(e: &Env, xarg: impl Fn(i32) -> C, yarg: impl Fn(i32) -> C) -> Sides {
    let sx = e.lowered_sum(|r| e.f3(1, 2 - r, e.x, yarg(r)))?;
    let sy = e.lowered_sum(|r| e.f3(0, 2 - r, xarg(r), e.y))?;
    pair(
        e.f3(0, -e.li(), e.x, e.y)?,
        e.f3_()? + e.x * (ONE - e.a) * sx + e.y * sy,
    )
}

fn step_low_phi3_x(e: &Env, j: usize) -> QResult<C> {
    let (w, dc) = e.lowering_weight(j);
    Ok(w * e.x * (ONE - e.a) * e.f3(1, dc, e.x, e.y)? + w * e.y * e.f3(0, dc, e.q * e.x, e.y)?)
}

fn step_low_phi3_y(e: &Env, j: usize) -> QResult<C> {
    let (w, dc) = e.lowering_weight(j);
    Ok(w * e.y * e.f3(0, dc, e.x, e.y)? + w * e.x * (ONE - e.a) * e.f3(1, dc, e.x, e.q * e.y)?)
}

// ---------------------------------------------------------------------------
// single-sum expansions

/// `Σ_n (a)_n(b)_n/((c)_n(q)_n) xⁿ ₂Φ₁(aqⁿ, 0; cqⁿ; y)`.
fn expand_phi1_x(e: &Env, x: C, y: C) -> QResult<C> {
    e.sum(|n| {
        let coef = e.poch(e.a, n) * e.poch(e.b, n) / (e.poch(e.c, n) * e.poch(e.q, n)) * x.powi(n as i32);
        if coef == ZERO {
            return Ok(ZERO);
        }
        let qn = e.qpow(n as i32);
        Ok(coef * e.rphis(&[e.a * qn, ZERO], &[e.c * qn], y)?)
    })
}

/// `Σ_k (a)_k/((c)_k(q)_k) yᵏ ₂Φ₁(aqᵏ, b; cqᵏ; x)`.
fn expand_phi1_y(e: &Env, x: C, y: C) -> QResult<C> {
    e.sum(|k| {
        let coef = e.poch(e.a, k) / (e.poch(e.c, k) * e.poch(e.q, k)) * y.powi(k as i32);
        if coef == ZERO {
            return Ok(ZERO);
        }
        let qk = e.qpow(k as i32);
        Ok(coef * e.rphis(&[e.a * qk, e.b], &[e.c * qk], x)?)
    })
}

/// `Σ_n (u)_n/((c)_n(q)_n) zⁿ ₂Φ₁(v, 0; cqⁿ; w)`.
fn expand_simple(e: &Env, u: C, z: C, v: C, w: C) -> QResult<C> {
    e.sum(|n| {
        let coef = e.poch(u, n) / (e.poch(e.c, n) * e.poch(e.q, n)) * z.powi(n as i32);
        if coef == ZERO {
            return Ok(ZERO);
        }
        Ok(coef * e.rphis(&[v, ZERO], &[e.c * e.qpow(n as i32)], w)?)
    })
}

// ---------------------------------------------------------------------------
// transformation and integral representations

/// `(a, bx)_∞/(c, x, y)_∞ · ₃Φ₂(c/a, x, y; bx, 0; a)`.
fn transformed_phi1(e: &Env, x: C, y: C) -> QResult<C> {
    let pre = e.poch_inf(e.a)? * e.poch_inf(e.b * x)? / (e.poch_inf(e.c)? * e.poch_inf(x)? * e.poch_inf(y)?);
    Ok(pre * e.rphis(&[e.c / e.a, x, y], &[e.b * x, ZERO], e.a)?)
}

/// `t^{e}` for a lattice point `t > 0`.
fn tpow(e: &Env, t: C, exp: C) -> C {
    e.cpow(t, exp)
}

/// Integral representation of `Φ₁`, with the kernel scaled by `norm`.
fn integral_phi1(e: &Env, norm: C) -> QResult<C> {
    let al = e.pt.alpha;
    let shift = e.pow(e.pt.gamma - al);
    let v = e.integral(|t| {
        let num = e.poch_inf(e.q * t)? * e.poch_inf(e.b * e.x * t)?;
        let den = e.poch_inf(e.x * t)? * e.poch_inf(e.y * t)? * e.poch_inf(shift * t)?;
        Ok(tpow(e, t, al - ONE) * num / den)
    })?;
    Ok(norm * e.gamma_ratio()? * v)
}

#[derive(Clone, Copy)]
enum PowerReading {
    /// Positive subscript evaluated by the series with the exponent negated.
    Series,
    /// Reciprocal of the negative-subscript series, continued as a product.
    Reciprocal,
    /// `(qt)_∞ / (q^{ν+1} t)_∞`.
    Product,
}

fn integral_power_phi1(e: &Env, reading: PowerReading) -> QResult<C> {
    let al = e.pt.alpha;
    let nu = e.pt.gamma - al - ONE;
    let v = e.integral(|t| {
        let lead = match reading {
            PowerReading::Series => q_power_binomial(&e.ctx, t, -nu, e.cfg)?.value,
            PowerReading::Reciprocal => e.poch_inf(t)? / e.poch_inf(e.pow(nu) * t)?,
            PowerReading::Product => q_power_product(&e.ctx, t, nu, e.cfg)?.value,
        };
        let mid = q_power_binomial(&e.ctx, e.x * t, e.pt.beta, e.cfg)?.value;
        let ex = q_exponential(&e.ctx, t * e.y / e.omq(), e.cfg)?.value;
        Ok(tpow(e, t, al - ONE) * lead * mid * ex)
    })?;
    Ok(e.gamma_ratio()? * v)
}

/// `Γ-ratio · ∫ t^{α+N−1} (qt)_∞/(t q^{γ−α})_∞ d_q t` with `N = l`.
fn beta_moment(e: &Env, norm: C) -> QResult<C> {
    let al = e.pt.alpha;
    let shift = e.pow(e.pt.gamma - al);
    let n = cr(e.l() as f64);
    let v = e.integral(|t| Ok(tpow(e, t, al + n - ONE) * e.poch_inf(e.q * t)? / e.poch_inf(shift * t)?))?;
    Ok(norm * e.gamma_ratio()? * v)
}

fn moment_sides(e: &Env, norm: C) -> Sides {
    let n = e.l();
    pair(e.poch(e.a, n) / e.poch(e.c, n), beta_moment(e, norm)?)
}

/// Which kernel normalization reproduces the q-beta moment at `N = 0`.
///
/// Returns the residual for the plain kernel, the kernel times `(1 − q)` and
/// the kernel divided by `(1 − q)`, in that order, with the label of the best.
pub fn kernel_normalization(point: &SamplePoint, cfg: &SeriesConfig) -> QResult<(&'static str, [f64; 3])> {
    let mut p = *point;
    p.l = 0;
    let e = Env::new(&p, cfg)?;
    let labels = ["plain", "times (1-q)", "divided by (1-q)"];
    let norms = [ONE, e.omq(), ONE / e.omq()];
    let mut res = [0.0; 3];
    for (i, &n) in norms.iter().enumerate() {
        let (l, r) = moment_sides(&e, n)?[0];
        res[i] = (l - r).norm() / r.norm().max(1.0);
    }
    let best = (0..3).min_by(|&i, &j| res[i].total_cmp(&res[j])).unwrap_or(0);
    Ok((labels[best], res))
}

// ---------------------------------------------------------------------------
// q-derivatives of power-weighted functions

/// `D_x^r [x^{e+r−1} F]` against `(u)_r/(1−q)^r x^{e−1} F(shifted)`, where
/// `e` is `β` (numerator `b`) or `α` (numerator `a`).
fn weighted_dx(e: &Env, kind: HumbertKind, rhs_shift: (i32, i32), numer_is_b: bool) -> Sides {
    let r = e.r();
    let base_exp = if numer_is_b { e.pt.beta } else { e.pt.alpha };
    let numer = if numer_is_b { e.b } else { e.a };
    let lhs = e.dx_iter(
        |x| Ok(e.cpow(x, base_exp + cr(r as f64) - ONE) * e.phi(kind, 0, 0, 0, x, e.y)?),
        e.x,
        r,
    )?;
    let rhs = e.poch(numer, r) / e.omq_pow(r)
        * e.cpow(e.x, base_exp - ONE)
        * e.phi(kind, rhs_shift.0, rhs_shift.1, 0, e.x, e.y)?;
    pair(lhs, rhs)
}

fn weighted_dy_phi2(e: &Env) -> Sides {
    let s = e.s();
    let lhs = e.dx_iter(
        |y| Ok(e.cpow(y, e.pt.beta + cr(s as f64) - ONE) * e.f2(0, 0, 0, e.x, y)?),
        e.y,
        s,
    )?;
    let rhs = e.poch(e.b, s) / e.omq_pow(s) * e.cpow(e.y, e.pt.beta - ONE) * e.f2(0, e.si(), 0, e.x, e.y)?;
    pair(lhs, rhs)
}

/// `(z²D_z)^r [z^{α−shift} Φ₁(…)]` against `(a)_r/(1−q)^r z^{α+r} Φ₁(α+r; …)`.
fn z2d_phi1(e: &Env, in_x: bool, lower_by_r: bool) -> Sides {
    let r = e.r();
    let shift = if lower_by_r { cr(r as f64) - ONE } else { ZERO };
    let z0 = if in_x { e.x } else { e.y };
    let args = |z: C| if in_x { (z, z * e.y) } else { (e.x * z, z) };
    let f = |z: C| -> QResult<C> {
        let (u, v) = args(z);
        Ok(e.cpow(z, e.pt.alpha - shift) * e.f1(0, 0, 0, u, v)?)
    };
    let lhs = e.z2d_iter(&f, z0, r)?;
    let (u, v) = args(z0);
    let rhs = e.poch(e.a, r) / e.omq_pow(r) * e.cpow(z0, e.pt.alpha + cr(r as f64)) * e.f1(e.ri(), 0, 0, u, v)?;
    pair(lhs, rhs)
}

// ---------------------------------------------------------------------------

pub(crate) fn build() -> Vec<IdentitySpec> {
    use IdentityKind::{Algebraic as Alg, Integral as Int, Operator as Op, Recursion as Rec};
    let base = DomainSpec::base;
    let gm1 = || DomainSpec::base().avoid(AvoidRule::Through(1));
    let depth = || DomainSpec::base().depth(DepthRule::L(1, 3));
    let lowered = || DomainSpec::base().depth(DepthRule::L(1, 3)).avoid(AvoidRule::ThroughDepth);
    let deriv = DomainSpec::derivative;
    let integral = || DomainSpec {
        alpha: (0.2, 2.0),
        gamma: GammaRule::AlphaPlus(0.3, 1.5),
        ..DomainSpec::base()
    };

    let mut v = vec![
        // q-derivatives in x and y
        ident("EQ_2_1", Op, "Phi1: r-th q-derivative in x", deriv(DepthRule::R), d_phi1_x),
        ident("EQ_2_2a", Op, "Phi1: s-th q-derivative in y", deriv(DepthRule::S), d_phi1_y),
        ident("EQ_2_2b", Op, "Phi1: mixed q-derivative", deriv(DepthRule::RS), d_phi1_xy),
        ident("EQ_2_3a", Op, "Phi2: r-th q-derivative in x", deriv(DepthRule::R), d_phi2_x),
        ident("EQ_2_3b", Op, "Phi2: s-th q-derivative in y", deriv(DepthRule::S), d_phi2_y),
        ident("EQ_2_3c", Op, "Phi2: mixed q-derivative", deriv(DepthRule::RS), d_phi2_xy),
        ident("EQ_2_4a", Op, "Phi3: r-th q-derivative in x", deriv(DepthRule::R), d_phi3_x),
        ident("EQ_2_4b", Op, "Phi3: s-th q-derivative in y", deriv(DepthRule::S), d_phi3_y),
        ident("EQ_2_4c", Op, "Phi3: mixed q-derivative", deriv(DepthRule::RS), d_phi3_xy),
        ident("EQ_2_5", Op, "Phi1: first q-derivative in x", deriv(DepthRule::None), d_phi1_x_once),
        // dilation operators
        ident("EQ_2_6a", Op, "Phi1: q^{Theta_x} dilation", base(), |e| {
            pair(crate::qops::theta_shift_x(&e.ctx, |x, y| e.f1(0, 0, 0, x, y), e.x, e.y)?, e.f1(0, 0, 0, e.q * e.x, e.y)?)
        }),
        ident("EQ_2_6b", Op, "Phi1: q^{Theta_y} dilation", base(), |e| {
            pair(crate::qops::theta_shift_y(&e.ctx, |x, y| e.f1(0, 0, 0, x, y), e.x, e.y)?, e.f1(0, 0, 0, e.x, e.q * e.y)?)
        }),
        ident("EQ_2_7a", Op, "Phi2: q^{Theta_x} dilation", base(), |e| {
            pair(crate::qops::theta_shift_x(&e.ctx, |x, y| e.f2(0, 0, 0, x, y), e.x, e.y)?, e.f2(0, 0, 0, e.q * e.x, e.y)?)
        }),
        ident("EQ_2_7b", Op, "Phi2: q^{Theta_y} dilation", base(), |e| {
            pair(crate::qops::theta_shift_y(&e.ctx, |x, y| e.f2(0, 0, 0, x, y), e.x, e.y)?, e.f2(0, 0, 0, e.x, e.q * e.y)?)
        }),
        ident("EQ_2_8a", Op, "Phi3: q^{Theta_x} dilation", base(), |e| {
            pair(crate::qops::theta_shift_x(&e.ctx, |x, y| e.f3(0, 0, x, y), e.x, e.y)?, e.f3(0, 0, e.q * e.x, e.y)?)
        }),
        ident("EQ_2_8b", Op, "Phi3: q^{Theta_y} dilation", base(), |e| {
            pair(crate::qops::theta_shift_y(&e.ctx, |x, y| e.f3(0, 0, x, y), e.x, e.y)?, e.f3(0, 0, e.x, e.q * e.y)?)
        }),
        // first-order q-differential relations
        ident("EQ_2_9", Op, "Phi1: raising alpha via Theta_x", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            pair(theta_mix(e, &f, e.pt.alpha, true)?, e.qn(e.pt.alpha) * e.f1(1, 0, 0, e.x, e.y)?)
        }),
        ident("EQ_2_10a", Op, "Phi1: raising alpha via Theta_y", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            pair(theta_mix(e, &f, e.pt.alpha, false)?, e.qn(e.pt.alpha) * e.f1(1, 0, 0, e.x, e.y)?)
        }),
        ident("EQ_2_10b", Op, "Phi1: raising beta", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            pair(theta_single(e, &f, e.pt.beta, X)?, e.qn(e.pt.beta) * e.f1(0, 1, 0, e.x, e.y)?)
        }),
        ident("EQ_2_10c", Op, "Phi1: lowering gamma via Theta_x", gm1(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            pair(theta_mix(e, &f, e.pt.gamma - ONE, true)?, e.qn_gm1() * e.f1(0, 0, -1, e.x, e.y)?)
        }),
        ident("EQ_2_10d", Op, "Phi1: lowering gamma via Theta_y", gm1(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            pair(theta_mix(e, &f, e.pt.gamma - ONE, false)?, e.qn_gm1() * e.f1(0, 0, -1, e.x, e.y)?)
        }),
        ident("EQ_2_11a", Op, "Phi2: raising alpha", base(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            pair(theta_single(e, &f, e.pt.alpha, X)?, e.qn(e.pt.alpha) * e.f2(1, 0, 0, e.x, e.y)?)
        }),
        ident("EQ_2_11b", Op, "Phi2: raising beta", base(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            pair(theta_single(e, &f, e.pt.beta, Y)?, e.qn(e.pt.beta) * e.f2(0, 1, 0, e.x, e.y)?)
        }),
        ident("EQ_2_11c", Op, "Phi2: lowering gamma via Theta_x", gm1(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            pair(theta_mix(e, &f, e.pt.gamma - ONE, true)?, e.qn_gm1() * e.f2(0, 0, -1, e.x, e.y)?)
        }),
        ident("EQ_2_11d", Op, "Phi2: lowering gamma via Theta_y", gm1(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            pair(theta_mix(e, &f, e.pt.gamma - ONE, false)?, e.qn_gm1() * e.f2(0, 0, -1, e.x, e.y)?)
        }),
        ident("EQ_2_12a", Op, "Phi3: raising alpha", base(), |e| {
            let f = |x, y| e.f3(0, 0, x, y);
            pair(theta_single(e, &f, e.pt.alpha, X)?, e.qn(e.pt.alpha) * e.f3(1, 0, e.x, e.y)?)
        }),
        ident("EQ_2_12b", Op, "Phi3: lowering the denominator via Theta_x", gm1(), |e| {
            let f = |x, y| e.f3(0, 0, x, y);
            pair(theta_mix(e, &f, e.pt.gamma - ONE, true)?, e.qn_gm1() * e.f3(0, -1, e.x, e.y)?)
        }),
        ident("EQ_2_12c", Op, "Phi3: lowering the denominator via Theta_y", gm1(), |e| {
            let f = |x, y| e.f3(0, 0, x, y);
            pair(theta_mix(e, &f, e.pt.gamma - ONE, false)?, e.qn_gm1() * e.f3(0, -1, e.x, e.y)?)
        }),
        ident("EQ_2_13a", Op, "Phi1: symmetric Theta relation", base(), |e| {
            theta_sym(e, &|x, y| e.f1(0, 0, 0, x, y))
        }),
        ident("EQ_2_13b", Op, "Phi1: contiguous relation in alpha and gamma", gm1(), |e| {
            let cq = e.cq();
            pair(
                (e.a - cq) * e.f1_()?,
                (ONE - cq) * e.a * e.f1(0, 0, -1, e.x, e.y)? - (ONE - e.a) * cq * e.f1(1, 0, 0, e.x, e.y)?,
            )
        }),
        ident("EQ_2_14a", Op, "Phi2: contiguous relation in alpha and beta", base(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            pair(
                e.a / e.qn(e.pt.alpha) * e.theta(X, f)? + e.f2(0, 1, 0, e.x, e.y)?,
                e.b / e.qn(e.pt.beta) * e.theta(Y, f)? + e.f2(1, 0, 0, e.x, e.y)?,
            )
        }),
        ident("EQ_2_14b", Op, "Phi2: symmetric Theta relation", base(), |e| {
            theta_sym(e, &|x, y| e.f2(0, 0, 0, x, y))
        }),
        ident("EQ_2_15", Op, "Phi3: symmetric Theta relation", base(), |e| {
            theta_sym(e, &|x, y| e.f3(0, 0, x, y))
        }),
        // recursions in the numerator parameters
        ident("EQ_2_16", Rec, "Phi1: alpha raised by l", depth(), rec_phi1_alpha).compose(|e| e.f1_(), step_phi1_alpha),
        ident("EQ_2_17a", Rec, "Phi1: alpha raised by l, y-first split", depth(), rec_phi1_alpha_sym_printed)
            .repair("beta+1 moved from the y-sum to the x-sum", rec_phi1_alpha_sym)
            .compose(|e| e.f1_(), step_phi1_alpha_sym),
        ident("EQ_2_17b", Rec, "Phi1: beta raised by l", depth(), |e| {
            rec_phi1_beta_with(e, |_| e.f1(0, e.li(), 1, e.x, e.y))
        })
        .repair("inner beta+l read as beta+r", |e| rec_phi1_beta_with(e, |r| e.f1(0, r, 1, e.x, e.y)))
        .repair("inner alpha raised to alpha+1 and beta+l read as beta+r", |e| {
            rec_phi1_beta_with(e, |r| e.f1(1, r, 1, e.x, e.y))
        })
        .compose(|e| e.f1_(), step_phi1_beta),
        ident("EQ_2_18a", Rec, "Phi2: alpha raised by l", depth(), rec_phi2_alpha).compose(|e| e.f2_(), step_phi2_alpha),
        ident("EQ_2_18b", Rec, "Phi2: beta raised by l", depth(), |e| rec_phi2_beta_with(e, e.a, e.q * e.x))
            .repair("prefactor q^alpha read as q^beta", |e| rec_phi2_beta_with(e, e.b, e.q * e.x))
            .repair("prefactor q^beta and argument x instead of qx", |e| rec_phi2_beta_with(e, e.b, e.x))
            .compose(|e| e.f2_(), step_phi2_beta),
        ident("EQ_2_19", Rec, "Phi3: alpha raised by l", depth(), rec_phi3_alpha).compose(|e| e.f3_(), step_phi3_alpha),
        ident("EQ_2_20", Rec, "Phi1: alpha raised by one", base(), |e| {
            let k = ONE / (ONE - e.c);
            pair(
                e.f1(1, 0, 0, e.x, e.y)?,
                e.f1_()? + e.a * e.x * (ONE - e.b) * k * e.f1(1, 1, 1, e.x, e.y)?
                    + e.a * e.y * k * e.f1(1, 0, 1, e.q * e.x, e.y)?,
            )
        }),
        // recursions lowering gamma
        ident("EQ_2_21", Rec, "Phi1: gamma lowered by l", lowered(), |e| {
            low_phi1(e, true, |_| (e.x, e.y), |r| (e.qpow(r) * e.x, e.y))
        })
        .repair("argument q^r x read as qx", |e| low_phi1(e, true, |_| (e.x, e.y), |_| (e.q * e.x, e.y)))
        .compose(|e| e.f1_(), step_low_phi1),
        ident("EQ_2_22", Rec, "Phi1: gamma lowered by l, y-first split", lowered(), low_phi1_sym_printed)
            .repair("beta+1 moved from the y-sum to the x-sum", |e| low_phi1_sym_with(e, |r| e.qpow(r) * e.y))
            .repair("beta+1 moved to the x-sum and q^r y read as qy", |e| low_phi1_sym_with(e, |_| e.q * e.y))
            .compose(|e| e.f1_(), step_low_phi1_sym),
        ident("EQ_2_23a", Rec, "Phi2: gamma lowered by l", lowered(), |e| {
            low_phi2(e, |r| e.qpow(r) * e.x, |_| e.y)
        })
        .repair("argument q^r x read as qx", |e| low_phi2(e, |_| e.q * e.x, |_| e.y))
        .compose(|e| e.f2_(), step_low_phi2_x),
        ident("EQ_2_23b", Rec, "Phi2: gamma lowered by l, y-first split", lowered(), |e| {
            low_phi2(e, |_| e.x, |r| e.qpow(r) * e.y)
        })
        .repair("argument q^r y read as qy", |e| low_phi2(e, |_| e.x, |_| e.q * e.y))
        .compose(|e| e.f2_(), step_low_phi2_y),
        ident("EQ_2_24a", Rec, "Phi3: denominator lowered by l", lowered(), |e| {
            low_phi3(e, |r| e.qpow(r) * e.x, |_| e.y)
        })
        .repair("argument q^r x read as qx", |e| low_phi3(e, |_| e.q * e.x, |_| e.y))
        .compose(|e| e.f3_(), step_low_phi3_x),
        ident("EQ_2_24b", Rec, "Phi3: denominator lowered by l, y-first split", lowered(), |e| {
            low_phi3(e, |_| e.x, |r| e.qpow(r) * e.y)
        })
        .repair("argument q^r y read as qy", |e| low_phi3(e, |_| e.x, |_| e.q * e.y))
        .compose(|e| e.f3_(), step_low_phi3_y),
        ident("EQ_2_25", Rec, "Phi1: gamma lowered by one", gm1(), |e| {
            let w = e.c / ((e.q - e.c) * (ONE - e.c));
            pair(
                e.f1(0, 0, -1, e.x, e.y)?,
                e.f1_()? + w * e.x * (ONE - e.a) * (ONE - e.b) * e.f1(1, 1, 1, e.x, e.y)?
                    + w * e.y * (ONE - e.a) * e.f1(1, 0, 1, e.q * e.x, e.y)?,
            )
        }),
        // q-differences in the parameters
        ident("EQ_2_26", Op, "Phi1: q-difference in alpha", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            let rhs = -(e.theta(X, f)? + e.theta(Y, |x, y| f(e.q * x, y))?) / (ONE - e.a);
            pair(dparam_alpha_phi1(e)?, rhs)
        })
        .alt("difference quotient without the 1/q^alpha factor", |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            let rhs = -(e.theta(X, f)? + e.theta(Y, |x, y| f(e.q * x, y))?) / (ONE - e.a);
            pair(dparam_alpha_phi1(e)? * e.a, rhs)
        }),
        ident("EQ_2_27a", Op, "Phi1: q-difference in alpha, y-first", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            let rhs = -(e.theta(Y, f)? + e.theta(X, |x, y| f(x, e.q * y))?) / (ONE - e.a);
            pair(dparam_alpha_phi1(e)?, rhs)
        }),
        ident("EQ_2_27b", Op, "Phi1: q-difference in beta", base(), |e| {
            let lhs = e.dparam(|b| e.phi_values(HumbertKind::Phi1, e.a, Some(b), e.c, e.x, e.y), e.b)?;
            pair(lhs, -e.theta(X, |x, y| e.f1(0, 0, 0, x, y))? / (ONE - e.b))
        }),
        ident("EQ_2_27c", Op, "Phi1: q-difference in gamma", base(), |e| {
            let g = |x, y| e.f1(0, 0, 1, x, y);
            let rhs = (e.theta(X, g)? + e.theta(Y, |x, y| g(e.q * x, y))?) / (ONE - e.c);
            pair(dgamma(e, HumbertKind::Phi1)?, rhs)
        }),
        ident("EQ_2_27d", Op, "Phi1: q-difference in gamma, y-first", base(), |e| {
            let g = |x, y| e.f1(0, 0, 1, x, y);
            let rhs = (e.theta(Y, g)? + e.theta(X, |x, y| g(x, e.q * y))?) / (ONE - e.c);
            pair(dgamma(e, HumbertKind::Phi1)?, rhs)
        }),
        ident("EQ_2_28a", Op, "Phi2: q-difference in alpha", base(), |e| {
            let lhs = e.dparam(|a| e.phi_values(HumbertKind::Phi2, a, Some(e.b), e.c, e.x, e.y), e.a)?;
            pair(lhs, -e.theta(X, |x, y| e.f2(0, 0, 0, x, y))? / (ONE - e.a))
        }),
        ident("EQ_2_28b", Op, "Phi2: q-difference in beta", base(), |e| {
            let lhs = e.dparam(|b| e.phi_values(HumbertKind::Phi2, e.a, Some(b), e.c, e.x, e.y), e.b)?;
            pair(lhs, -e.theta(Y, |x, y| e.f2(0, 0, 0, x, y))? / (ONE - e.b))
        }),
        ident("EQ_2_28c", Op, "Phi2: q-difference in gamma", base(), |e| {
            let g = |x, y| e.f2(0, 0, 1, x, y);
            let rhs = (e.theta(X, g)? + e.theta(Y, |x, y| g(e.q * x, y))?) / (ONE - e.c);
            pair(dgamma(e, HumbertKind::Phi2)?, rhs)
        }),
        ident("EQ_2_28d", Op, "Phi2: q-difference in gamma, y-first", base(), |e| {
            let g = |x, y| e.f2(0, 0, 1, x, y);
            let rhs = (e.theta(Y, g)? + e.theta(X, |x, y| g(x, e.q * y))?) / (ONE - e.c);
            pair(dgamma(e, HumbertKind::Phi2)?, rhs)
        }),
        ident("EQ_2_29a", Op, "Phi3: q-difference in alpha", base(), |e| {
            let lhs = e.dparam(|a| e.phi_values(HumbertKind::Phi3, a, None, e.c, e.x, e.y), e.a)?;
            pair(lhs, -e.theta(X, |x, y| e.f3(0, 0, x, y))? / (ONE - e.a))
        }),
        ident("EQ_2_29b", Op, "Phi3: q-difference in the denominator", base(), |e| {
            let g = |x, y| e.f3(0, 1, x, y);
            let rhs = (e.theta(X, g)? + e.theta(Y, |x, y| g(e.q * x, y))?) / (ONE - e.c);
            pair(dgamma(e, HumbertKind::Phi3)?, rhs)
        }),
        ident("EQ_2_29c", Op, "Phi3: q-difference in the denominator, y-first", base(), |e| {
            let g = |x, y| e.f3(0, 1, x, y);
            let rhs = (e.theta(Y, g)? + e.theta(X, |x, y| g(x, e.q * y))?) / (ONE - e.c);
            pair(dgamma(e, HumbertKind::Phi3)?, rhs)
        }),
        // [Θ]_q contiguity
        ident("EQ_2_30", Op, "Phi1: [Theta_x]_q", base(), |e| {
            let k = e.qn(e.pt.alpha) * e.qn(e.pt.beta) / e.qn(e.pt.gamma);
            pair(e.theta(X, |x, y| e.f1(0, 0, 0, x, y))?, k * e.x * e.f1(1, 1, 1, e.x, e.y)?)
        })
        .alt("extra 1/(1-q) in the prefactor", |e| {
            let k = e.qn(e.pt.alpha) * e.qn(e.pt.beta) / (e.qn(e.pt.gamma) * e.omq());
            pair(e.theta(X, |x, y| e.f1(0, 0, 0, x, y))?, k * e.x * e.f1(1, 1, 1, e.x, e.y)?)
        }),
        ident("EQ_2_31", Op, "Phi1: [Theta_y]_q", base(), |e| {
            let k = e.qn(e.pt.alpha) / (e.omq() * e.qn(e.pt.gamma));
            pair(e.theta(Y, |x, y| e.f1(0, 0, 0, x, y))?, k * e.y * e.f1(1, 0, 1, e.x, e.y)?)
        })
        .alt("prefactor without 1/(1-q)", |e| {
            let k = e.qn(e.pt.alpha) / e.qn(e.pt.gamma);
            pair(e.theta(Y, |x, y| e.f1(0, 0, 0, x, y))?, k * e.y * e.f1(1, 0, 1, e.x, e.y)?)
        }),
        ident("EQ_2_32a", Op, "Phi2: [Theta_x]_q", base(), |e| {
            let k = e.qn(e.pt.alpha) / (e.omq() * e.qn(e.pt.gamma));
            pair(e.theta(X, |x, y| e.f2(0, 0, 0, x, y))?, k * e.x * e.f2(1, 0, 1, e.x, e.y)?)
        }),
        ident("EQ_2_32b", Op, "Phi2: [Theta_y]_q", base(), |e| {
            let k = e.qn(e.pt.beta) / (e.omq() * e.qn(e.pt.gamma));
            pair(e.theta(Y, |x, y| e.f2(0, 0, 0, x, y))?, k * e.y * e.f2(0, 1, 1, e.x, e.y)?)
        }),
        ident("EQ_2_33a", Op, "Phi3: [Theta_x]_q", base(), |e| {
            let k = e.qn(e.pt.alpha) / (e.omq() * e.qn(e.pt.gamma));
            pair(e.theta(X, |x, y| e.f3(0, 0, x, y))?, k * e.x * e.f3(1, 1, e.x, e.y)?)
        }),
        ident("EQ_2_33b", Op, "Phi3: [Theta_y]_q", base(), |e| {
            let k = ONE / (e.omq() * e.omq() * e.qn(e.pt.gamma));
            pair(e.theta(Y, |x, y| e.f3(0, 0, x, y))?, k * e.y * e.f3(0, 1, e.x, e.y)?)
        }),
        // [Θ + α]_q contiguity
        ident("EQ_2_34", Op, "Phi1: [Theta_x+Theta_y+alpha]_q", base(), |e| {
            let lhs = both(e, e.pt.alpha, &|x, y| e.f1(0, 0, 0, x, y), e.x, e.y)?;
            pair(lhs, e.qn(e.pt.alpha) * e.f1(1, 0, 0, e.x, e.y)?)
        }),
        ident("EQ_2_35a", Op, "Phi1: [Theta_x+beta]_q", base(), |e| {
            let lhs = e.bracket(X, e.pt.beta, |x, y| e.f1(0, 0, 0, x, y), e.x, e.y)?;
            pair(lhs, e.qn(e.pt.beta) * e.f1(0, 1, 0, e.x, e.y)?)
        }),
        ident("EQ_2_35b", Op, "Phi1: [Theta_x+Theta_y+gamma-1]_q", gm1(), |e| {
            let lhs = both(e, e.pt.gamma - ONE, &|x, y| e.f1(0, 0, 0, x, y), e.x, e.y)?;
            pair(lhs, e.qn_gm1() * e.f1(0, 0, -1, e.x, e.y)?)
        }),
        ident("EQ_2_36a", Op, "Phi2: [Theta_x+alpha]_q", base(), |e| {
            let lhs = e.bracket(X, e.pt.alpha, |x, y| e.f2(0, 0, 0, x, y), e.x, e.y)?;
            pair(lhs, e.qn(e.pt.alpha) * e.f2(1, 0, 0, e.x, e.y)?)
        }),
        ident("EQ_2_36b", Op, "Phi2: [Theta_y+beta]_q", base(), |e| {
            let lhs = e.bracket(Y, e.pt.beta, |x, y| e.f2(0, 0, 0, x, y), e.x, e.y)?;
            pair(lhs, e.qn(e.pt.beta) * e.f2(0, 1, 0, e.x, e.y)?)
        }),
        ident("EQ_2_36c", Op, "Phi2: [Theta_x+Theta_y+gamma-1]_q", gm1(), |e| {
            let lhs = both(e, e.pt.gamma - ONE, &|x, y| e.f2(0, 0, 0, x, y), e.x, e.y)?;
            pair(lhs, e.qn_gm1() * e.f2(0, 0, -1, e.x, e.y)?)
        }),
        ident("EQ_2_37a", Op, "Phi3: [Theta_x+alpha]_q", base(), |e| {
            let lhs = e.bracket(X, e.pt.alpha, |x, y| e.f3(0, 0, x, y), e.x, e.y)?;
            pair(lhs, e.qn(e.pt.alpha) * e.f3(1, 0, e.x, e.y)?)
        }),
        ident("EQ_2_37b", Op, "Phi3: [Theta_x+Theta_y+denominator-1]_q", gm1(), |e| {
            let lhs = both(e, e.pt.gamma - ONE, &|x, y| e.f3(0, 0, x, y), e.x, e.y)?;
            pair(lhs, e.qn_gm1() * e.f3(0, -1, e.x, e.y)?)
        }),
        // three-term contiguous relations
        ident("EQ_2_38", Op, "Phi1: alpha contiguity", base(), |e| {
            pair((ONE - e.a) * e.f1(1, 0, 0, e.x, e.y)? + e.a * e.f1(0, 0, 0, e.q * e.x, e.q * e.y)?, e.f1_()?)
        }),
        ident("EQ_2_39a", Op, "Phi1: beta contiguity", base(), |e| {
            pair((ONE - e.b) * e.f1(0, 1, 0, e.x, e.y)? + e.b * e.f1(0, 0, 0, e.q * e.x, e.y)?, e.f1_()?)
        }),
        ident("EQ_2_39b", Op, "Phi1: gamma contiguity", gm1(), |e| {
            let cq = e.cq();
            pair((ONE - cq) * e.f1(0, 0, -1, e.x, e.y)? + cq * e.f1(0, 0, 0, e.q * e.x, e.q * e.y)?, e.f1_()?)
        }),
        ident("EQ_2_40a", Op, "Phi2: alpha contiguity", base(), |e| {
            pair((ONE - e.a) * e.f2(1, 0, 0, e.x, e.y)? + e.a * e.f2(0, 0, 0, e.q * e.x, e.y)?, e.f2_()?)
        }),
        ident("EQ_2_40b", Op, "Phi2: beta contiguity", base(), |e| {
            pair((ONE - e.b) * e.f2(0, 1, 0, e.x, e.y)? + e.b * e.f2(0, 0, 0, e.x, e.q * e.y)?, e.f2_()?)
        }),
        ident("EQ_2_40c", Op, "Phi2: gamma contiguity", gm1(), |e| {
            let cq = e.cq();
            pair((ONE - cq) * e.f2(0, 0, -1, e.x, e.y)? + cq * e.f2(0, 0, 0, e.q * e.x, e.q * e.y)?, e.f2_()?)
        }),
        ident("EQ_2_41a", Op, "Phi3: alpha contiguity", base(), |e| {
            pair((ONE - e.a) * e.f3(1, 0, e.x, e.y)? + e.a * e.f3(0, 0, e.q * e.x, e.y)?, e.f3_()?)
        }),
        ident("EQ_2_41b", Op, "Phi3: denominator contiguity", gm1(), |e| {
            let cq = e.cq();
            pair((ONE - cq) * e.f3(0, -1, e.x, e.y)? + cq * e.f3(0, 0, e.q * e.x, e.q * e.y)?, e.f3_()?)
        }),
        // second-order q-difference equations
        ident("EQ_2_42", Op, "Phi1: q-difference equation in x", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            let gm1 = e.pt.gamma - ONE;
            let lhs = e.theta(X, |x, y| both(e, gm1, &f, x, y))?;
            let inner = |x, y| e.bracket(X, e.pt.beta, f, x, y);
            let rhs = e.x * both(e, e.pt.alpha, &inner, e.x, e.y)?;
            pair(lhs, rhs)
        }),
        ident("EQ_2_43", Op, "Phi1: q-difference equation in y", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            let gm1 = e.pt.gamma - ONE;
            let lhs = e.theta(Y, |x, y| both(e, gm1, &f, x, y))?;
            pair(lhs, e.y / e.omq() * both(e, e.pt.alpha, &f, e.x, e.y)?)
        }),
        ident("EQ_2_44a", Op, "Phi2: q-difference equation in x", base(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            let gm1 = e.pt.gamma - ONE;
            let lhs = e.theta(X, |x, y| both(e, gm1, &f, x, y))?;
            pair(lhs, e.x / e.omq() * e.bracket(X, e.pt.alpha, f, e.x, e.y)?)
        }),
        ident("EQ_2_44b", Op, "Phi2: q-difference equation in y", base(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            let gm1 = e.pt.gamma - ONE;
            let lhs = e.theta(Y, |x, y| both(e, gm1, &f, x, y))?;
            pair(lhs, e.y / e.omq() * e.bracket(Y, e.pt.beta, f, e.x, e.y)?)
        }),
        ident("EQ_2_45a", Op, "Phi3: q-difference equation in x", base(), |e| {
            let f = |x, y| e.f3(0, 0, x, y);
            let gm1 = e.pt.gamma - ONE;
            let lhs = e.theta(X, |x, y| both(e, gm1, &f, x, y))?;
            pair(lhs, e.x / e.omq() * e.bracket(X, e.pt.alpha, f, e.x, e.y)?)
        }),
        ident("EQ_2_45b", Op, "Phi3: q-difference equation in y", base(), |e| {
            let f = |x, y| e.f3(0, 0, x, y);
            let gm1 = e.pt.gamma - ONE;
            let lhs = e.theta(Y, |x, y| both(e, gm1, &f, x, y))?;
            pair(lhs, e.y / (e.omq() * e.omq()) * f(e.x, e.y)?)
        }),
        // expanded second-order equations
        ident("EQ_2_46", Op, "Phi1: expanded q-difference equation in x", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            let tx = |x, y| e.theta_at(X, f, x, y);
            let cq = e.cq();
            let (qa, qb) = (e.a, e.b);
            let (na, nb) = (e.qn(e.pt.alpha), e.qn(e.pt.beta));
            let t = tx(e.x, e.y)?;
            let lhs = cq * e.theta(X, |x, y| both(e, ZERO, &f, x, y))? - cq * t + e.qn(e.pt.gamma) * t;
            let rhs = e.x
                * (qa * qb * both(e, ZERO, &tx, e.x, e.y)?
                    + qa * nb * both(e, ZERO, &f, e.x, e.y)?
                    + qb * na * t
                    + na * nb * f(e.x, e.y)?);
            pair(lhs, rhs)
        }),
        ident("EQ_2_47", Op, "Phi1: expanded q-difference equation in y", base(), |e| {
            let f = |x, y| e.f1(0, 0, 0, x, y);
            let cq = e.cq();
            let lhs = cq * e.theta(Y, |x, y| both(e, ZERO, &f, x, y))? + (e.qn(e.pt.gamma) - cq) * e.theta(Y, f)?;
            let rhs = e.y / e.omq() * (e.a * both(e, ZERO, &f, e.x, e.y)? + e.qn(e.pt.alpha) * f(e.x, e.y)?);
            pair(lhs, rhs)
        }),
        ident("EQ_2_48a", Op, "Phi2: expanded q-difference equation in x", base(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            let cq = e.cq();
            let t = e.theta(X, f)?;
            let lhs = cq * e.theta(X, |x, y| both(e, ZERO, &f, x, y))? + (e.qn(e.pt.gamma) - cq) * t;
            let rhs = e.x / e.omq() * (e.a * t + e.qn(e.pt.alpha) * f(e.x, e.y)?);
            pair(lhs, rhs)
        }),
        ident("EQ_2_48b", Op, "Phi2: expanded q-difference equation in y", base(), |e| {
            let f = |x, y| e.f2(0, 0, 0, x, y);
            let cq = e.cq();
            let t = e.theta(Y, f)?;
            let lhs = cq * e.theta(Y, |x, y| both(e, ZERO, &f, x, y))? + (e.qn(e.pt.gamma) - cq) * t;
            let rhs = e.y / e.omq() * (e.b * t + e.qn(e.pt.beta) * f(e.x, e.y)?);
            pair(lhs, rhs)
        }),
        ident("EQ_2_49a", Op, "Phi3: expanded q-difference equation in x", base(), |e| {
            let f = |x, y| e.f3(0, 0, x, y);
            let cq = e.cq();
            let t = e.theta(X, f)?;
            let lhs = cq * e.theta(X, |x, y| both(e, ZERO, &f, x, y))? + (e.qn(e.pt.gamma) - cq) * t;
            let rhs = e.x / e.omq() * (e.a * t + e.qn(e.pt.alpha) * f(e.x, e.y)?);
            pair(lhs, rhs)
        }),
        ident("EQ_2_49b", Op, "Phi3: expanded q-difference equation in y", base(), |e| {
            let f = |x, y| e.f3(0, 0, x, y);
            let cq = e.cq();
            let lhs = cq * e.theta(Y, |x, y| both(e, ZERO, &f, x, y))? + (e.qn(e.pt.gamma) - cq) * e.theta(Y, f)?;
            pair(lhs, e.y / (e.omq() * e.omq()) * f(e.x, e.y)?)
        }),
        // single-sum expansions
        ident("EQ_2_50", Alg, "Phi1: expansion in powers of x", base(), |e| {
            pair(e.f1_()?, expand_phi1_x(e, e.x, e.y)?)
        }),
        ident("EQ_2_51", Alg, "Phi1: expansion in powers of y", base(), |e| {
            pair(e.f1_()?, expand_phi1_y(e, e.x, e.y)?)
        }),
        ident("EQ_2_52a", Alg, "Phi2: expansion in powers of x", base(), |e| {
            pair(e.f2_()?, expand_simple(e, e.a, e.x, e.b, e.y)?)
        }),
        ident("EQ_2_52b", Alg, "Phi2: expansion in powers of y", base(), |e| {
            pair(e.f2_()?, expand_simple(e, e.b, e.y, e.a, e.x)?)
        }),
        ident("EQ_2_53a", Alg, "Phi3: expansion in powers of x", base(), |e| {
            pair(e.f3_()?, expand_simple(e, e.a, e.x, ZERO, e.y)?)
        }),
        ident("EQ_2_53b", Alg, "Phi3: expansion in powers of y", base(), |e| {
            pair(e.f3_()?, expand_simple(e, ZERO, e.y, e.a, e.x)?)
        }),
        ident("SC_1", Alg, "Phi1 on the x-axis", base(), |e| {
            chain(vec![
                e.f1(0, 0, 0, e.x, ZERO)?,
                expand_phi1_x(e, e.x, ZERO)?,
                e.rphis(&[e.a, e.b], &[e.c], e.x)?,
            ])
        }),
        ident("SC_2", Alg, "Phi1 on the y-axis", base(), |e| {
            chain(vec![
                e.f1(0, 0, 0, ZERO, e.y)?,
                expand_phi1_y(e, ZERO, e.y)?,
                e.rphis(&[e.a, ZERO], &[e.c], e.y)?,
            ])
        }),
        ident("SC_3", Alg, "Phi2 on the axes", base(), |e| {
            Ok(vec![
                (e.f2(0, 0, 0, e.x, ZERO)?, e.rphis(&[e.a, ZERO], &[e.c], e.x)?),
                (e.f2(0, 0, 0, ZERO, e.y)?, e.rphis(&[e.b, ZERO], &[e.c], e.y)?),
            ])
        }),
        ident("SC_4", Alg, "Phi3 on the axes", base(), |e| {
            Ok(vec![
                (e.f3(0, 0, e.x, ZERO)?, e.rphis(&[e.a, ZERO], &[e.c], e.x)?),
                (e.f3(0, 0, ZERO, e.y)?, e.rphis(&[ZERO, ZERO], &[e.c], e.y)?),
            ])
        }),
        // transformation formula
        ident("EQ_2_54", Alg, "Phi1: transformation to a single 3phi2", base().positive_alpha(), |e| {
            pair(e.f1_()?, transformed_phi1(e, e.x, e.y)?)
        }),
        ident("SC_54_1", Alg, "Phi1 on the line y = q^beta x", base().positive_alpha(), |e| {
            let y = e.b * e.x;
            let pre = e.poch_inf(e.a)? / (e.poch_inf(e.c)? * e.poch_inf(e.x)?);
            chain(vec![
                e.f1(0, 0, 0, e.x, y)?,
                transformed_phi1(e, e.x, y)?,
                pre * e.rphis(&[e.c / e.a, e.x], &[ZERO], e.a)?,
                e.rphis(&[e.a, ZERO], &[e.c], e.x)?,
            ])
        }),
        ident(
            "SC_54_2",
            Alg,
            "Phi1 at x = q^{gamma-alpha-beta}",
            DomainSpec {
                alpha: (0.2, 0.7),
                beta: (0.2, 0.7),
                gamma: GammaRule::AlphaBetaPlus(1.0, 1.5),
                ..DomainSpec::base().q_range(0.3, 0.8).positive_alpha()
            },
            |e| {
                let x0 = e.c / (e.a * e.b);
                let ca = e.c / e.a;
                let pre = e.poch_inf(e.a)? * e.poch_inf(ca)? / (e.poch_inf(e.c)? * e.poch_inf(x0)? * e.poch_inf(e.y)?);
                chain(vec![
                    e.f1(0, 0, 0, x0, e.y)?,
                    pre * e.rphis(&[ca, x0, e.y], &[ca, ZERO], e.a)?,
                    pre * e.rphis(&[x0, e.y], &[ZERO], e.a)?,
                ])
            },
        ),
        // integral representations
        ident("EQ_2_55", Int, "Phi1: q-integral representation", integral(), |e| {
            pair(e.f1_()?, integral_phi1(e, ONE)?)
        })
        .alt("kernel times (1-q)", |e| pair(e.f1_()?, integral_phi1(e, e.omq())?))
        .alt("kernel divided by (1-q)", |e| pair(e.f1_()?, integral_phi1(e, ONE / e.omq())?)),
        ident("EQ_2_56", Int, "Phi1: q-integral with q-power and q-exponential factors", integral(), |e| {
            pair(e.f1_()?, integral_power_phi1(e, PowerReading::Series)?)
        })
        .repair("positive-subscript power as the reciprocal series", |e| {
            pair(e.f1_()?, integral_power_phi1(e, PowerReading::Reciprocal)?)
        })
        .repair("positive-subscript power as the infinite product", |e| {
            pair(e.f1_()?, integral_power_phi1(e, PowerReading::Product)?)
        }),
        ident(
            "EQ_2_57",
            Int,
            "q-beta moment of the integral kernel",
            integral().depth(DepthRule::L(0, 5)),
            |e| moment_sides(e, ONE),
        )
        .alt("kernel times (1-q)", |e| moment_sides(e, e.omq()))
        .alt("kernel divided by (1-q)", |e| moment_sides(e, ONE / e.omq())),
        // q-derivatives of power-weighted functions
        ident("EQ_2_58", Op, "Phi1: D_x^r of x^{beta+r-1} Phi1", deriv(DepthRule::R), |e| {
            weighted_dx(e, HumbertKind::Phi1, (0, e.ri()), true)
        }),
        ident("EQ_2_59a", Op, "Phi1(x, xy): (x^2 D_x)^r", deriv(DepthRule::R), |e| z2d_phi1(e, true, true))
            .repair("prefactor x^{alpha-r+1} read as x^alpha", |e| z2d_phi1(e, true, false)),
        ident("EQ_2_59b", Op, "Phi1(xy, y): (y^2 D_y)^r", deriv(DepthRule::R), |e| z2d_phi1(e, false, true))
            .repair("prefactor y^{alpha-r+1} read as y^alpha", |e| z2d_phi1(e, false, false)),
        ident("EQ_2_60a", Op, "Phi2: D_x^r of x^{alpha+r-1} Phi2", deriv(DepthRule::R), |e| {
            weighted_dx(e, HumbertKind::Phi2, (e.ri(), 0), false)
        }),
        ident("EQ_2_60b", Op, "Phi2: D_y^s of y^{beta+s-1} Phi2", deriv(DepthRule::S), weighted_dy_phi2),
        ident("EQ_2_61", Op, "Phi3: D_x^r of x^{alpha+r-1} Phi3", deriv(DepthRule::R), |e| {
            weighted_dx(e, HumbertKind::Phi3, (e.ri(), 0), false)
        }),
    ];
    v.extend([
        limit("LIM_2_62", "Phi1 tends to the classical Phi1 as q -> 1", LimitRule::Classical(HumbertKind::Phi1)),
        limit("LIM_2_63", "Phi2 tends to the classical Phi2 as q -> 1", LimitRule::Classical(HumbertKind::Phi2)),
        limit("LIM_2_64", "Phi3 tends to the classical Phi3 as q -> 1", LimitRule::Classical(HumbertKind::Phi3)),
        limit("LIM_2_65", "Phi2 with q^beta = 0 is Phi3", LimitRule::Phi2VanishingB),
        limit("LIM_2_66", "Phi2 as beta -> -infinity", LimitRule::Unverifiable),
        limit("LIM_2_67", "Phi1 with q^alpha = 0 is Phi3 with numerator q^beta", LimitRule::Phi1VanishingA),
    ]);
    v
}
