//! q-operators acting on black-box evaluators.
//!
//! An evaluator is any `Fn(z) -> QResult<Complex64>` (one variable) or
//! `Fn(x, y) -> QResult<Complex64>` (two variables). Operators return the
//! plain value; truncation diagnostics of the inner function are not carried
//! through, but its errors are.

use num_complex::Complex64;

use crate::error::{QError, QResult};
use crate::qcore::{EvalResult, QContext, SeriesConfig};
use crate::series;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Which argument(s) an operator shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Both,
}

impl Axis {
    fn factors(self, q: Complex64) -> (Complex64, Complex64) {
        match self {
            Axis::X => (q, ONE),
            Axis::Y => (ONE, q),
            Axis::Both => (q, q),
        }
    }
}

fn nonzero(z: Complex64, cfg: &SeriesConfig) -> QResult<()> {
    if z.norm() < cfg.tol_pole {
        return Err(QError::ZeroArgument(z));
    }
    Ok(())
}

/// `D_q f(z) = (f(z) − f(qz)) / ((1 − q) z)`.
pub fn jackson_derivative<F>(ctx: &QContext, f: F, z: Complex64, cfg: &SeriesConfig) -> QResult<Complex64>
where
    F: Fn(Complex64) -> QResult<Complex64>,
{
    nonzero(z, cfg)?;
    let q = ctx.q();
    Ok((f(z)? - f(q * z)?) / ((ONE - q) * z))
}

/// Coefficients `c_0..c_r` with `D_q^r f(z) = z^{−r} Σ_j c_j f(q^j z)`.
///
/// Applying `D_q` once more to `z^{−m} Σ c_j f(q^j z)` gives
/// `c'_j = (c_j − q^{−m} c_{j−1}) / (1 − q)`.
pub fn iterated_derivative_coefficients(ctx: &QContext, r: usize) -> Vec<Complex64> {
    let q = ctx.q();
    let mut c = vec![ONE];
    let mut q_neg_m = ONE;
    for _ in 0..r {
        let mut next = Vec::with_capacity(c.len() + 1);
        for j in 0..=c.len() {
            let here = if j < c.len() { c[j] } else { Complex64::new(0.0, 0.0) };
            let before = if j > 0 { c[j - 1] } else { Complex64::new(0.0, 0.0) };
            next.push((here - q_neg_m * before) / (ONE - q));
        }
        c = next;
        q_neg_m /= q;
    }
    c
}

/// `D_q^r f(z)`, evaluated on the lattice `z, qz, …, q^r z` with `r + 1` calls.
pub fn jackson_derivative_iter<F>(
    ctx: &QContext,
    f: F,
    z: Complex64,
    r: usize,
    cfg: &SeriesConfig,
) -> QResult<Complex64>
where
    F: Fn(Complex64) -> QResult<Complex64>,
{
    if r == 0 {
        return f(z);
    }
    nonzero(z, cfg)?;
    let q = ctx.q();
    let coeffs = iterated_derivative_coefficients(ctx, r);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut point = z;
    for c in coeffs {
        acc += c * f(point)?;
        point *= q;
    }
    Ok(acc / z.powi(r as i32))
}

/// `∫₀¹ f(t) d_q t = (1 − q) Σ_k q^k f(q^k)`, real `q` only.
pub fn jackson_integral_01<F>(ctx: &QContext, f: F, cfg: &SeriesConfig) -> QResult<EvalResult>
where
    F: Fn(Complex64) -> QResult<Complex64>,
{
    let q = ctx.require_real("jackson_integral_01")?;
    let mut qk = 1.0f64;
    series::sum_1d(cfg, |k| {
        if k > 0 {
            qk *= q;
        }
        Ok(f(Complex64::new(qk, 0.0))? * ((1.0 - q) * qk))
    })
}

/// `q^{Θ_x} f = f(qx, y)`.
pub fn theta_shift_x<F>(ctx: &QContext, f: F, x: Complex64, y: Complex64) -> QResult<Complex64>
where
    F: Fn(Complex64, Complex64) -> QResult<Complex64>,
{
    f(ctx.q() * x, y)
}

/// `q^{Θ_y} f = f(x, qy)`.
pub fn theta_shift_y<F>(ctx: &QContext, f: F, x: Complex64, y: Complex64) -> QResult<Complex64>
where
    F: Fn(Complex64, Complex64) -> QResult<Complex64>,
{
    f(x, ctx.q() * y)
}

/// `[Θ + α]_q f = (f(x, y) − q^α f(σx, σ'y)) / (1 − q)`, where `Θ` is `Θ_x`,
/// `Θ_y` or `Θ_x + Θ_y` according to `axis`.
pub fn bracket_theta<F>(
    ctx: &QContext,
    f: F,
    axis: Axis,
    alpha: Complex64,
    x: Complex64,
    y: Complex64,
) -> QResult<Complex64>
where
    F: Fn(Complex64, Complex64) -> QResult<Complex64>,
{
    let q = ctx.q();
    let (sx, sy) = axis.factors(q);
    Ok((f(x, y)? - ctx.pow(alpha) * f(sx * x, sy * y)?) / (ONE - q))
}

/// `[Θ_x]_q f = Θ_x f = (f(x, y) − f(qx, y)) / (1 − q)` (and likewise in `y`).
pub fn theta_q_operator<F>(ctx: &QContext, f: F, axis: Axis, x: Complex64, y: Complex64) -> QResult<Complex64>
where
    F: Fn(Complex64, Complex64) -> QResult<Complex64>,
{
    if axis == Axis::Both {
        return Err(QError::domain("theta_q_operator acts on a single axis"));
    }
    bracket_theta(ctx, f, axis, Complex64::new(0.0, 0.0), x, y)
}

/// `D_{α,q} g = (g(a) − g(qa)) / ((1 − q) a)` for a function of the q-power `a = q^α`.
pub fn param_q_derivative<G>(ctx: &QContext, g: G, a: Complex64, cfg: &SeriesConfig) -> QResult<Complex64>
where
    G: Fn(Complex64) -> QResult<Complex64>,
{
    jackson_derivative(ctx, g, a, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{q_number, q_pochhammer};
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn derivative_examples() {
        let cfg = SeriesConfig::default();
        for q in [0.2, 0.5, 0.9] {
            let ctx = QContext::real(q).unwrap();
            let d = jackson_derivative(&ctx, |z| Ok(z * z), ONE, &cfg).unwrap();
            assert!(close(d, c(1.0 + q), 1e-15));
            let d = jackson_derivative(&ctx, |_| Ok(c(3.0)), c(0.7), &cfg).unwrap();
            assert_eq!(d, c(0.0));
        }
        let ctx = QContext::real(0.5).unwrap();
        let d = jackson_derivative(&ctx, |z| Ok(z.powi(3)), c(0.3), &cfg).unwrap();
        assert!(close(d, c(1.75 * 0.09), 1e-15));
        assert!(matches!(
            jackson_derivative(&ctx, Ok, c(0.0), &cfg),
            Err(QError::ZeroArgument(_))
        ));
    }

    #[test]
    fn iterated_derivative_examples() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        let f = |z: Complex64| Ok(z.powi(3) + z * 2.0);
        let z = c(0.4);
        assert_eq!(
            jackson_derivative_iter(&ctx, f, z, 1, &cfg).unwrap(),
            jackson_derivative(&ctx, f, z, &cfg).unwrap()
        );
        let d3 = jackson_derivative_iter(&ctx, |z| Ok(z * z), c(0.8), 3, &cfg).unwrap();
        assert!(d3.norm() < 1e-13);
        let d2 = jackson_derivative_iter(&ctx, |z| Ok(z.powi(3)), ONE, 2, &cfg).unwrap();
        assert!(close(d2, c(2.625), 1e-14));
    }

    #[test]
    fn iterated_matches_nested_composition() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.6).unwrap();
        let f = |z: Complex64| Ok((z * 0.7).exp());
        let z = Complex64::new(0.3, -0.2);
        let d1 = |w: Complex64| jackson_derivative(&ctx, f, w, &cfg);
        let d2 = |w: Complex64| jackson_derivative(&ctx, d1, w, &cfg);
        let nested = jackson_derivative(&ctx, d2, z, &cfg).unwrap();
        let direct = jackson_derivative_iter(&ctx, f, z, 3, &cfg).unwrap();
        assert!(close(direct, nested, 1e-11));
    }

    #[test]
    fn jackson_integral_examples() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        let one = jackson_integral_01(&ctx, |_| Ok(ONE), &cfg).unwrap().value;
        assert!(close(one, ONE, 1e-15));
        let lin = jackson_integral_01(&ctx, Ok, &cfg).unwrap().value;
        assert!(close(lin, ONE / q_number(&ctx, c(2.0)), 1e-15));
        let sq = jackson_integral_01(&ctx, |t| Ok(t * t), &cfg).unwrap().value;
        assert!(close(sq, c(4.0 / 7.0), 1e-15));
        for m in [1.0, 2.0, 3.0, 5.0] {
            for q in [0.3, 0.7, 0.9] {
                let ctx = QContext::real(q).unwrap();
                let v = jackson_integral_01(&ctx, |t| Ok(t.powf(m - 1.0)), &cfg).unwrap().value;
                assert!(close(v, ONE / q_number(&ctx, c(m)), 1e-14));
            }
        }
        let cq = QContext::new(Complex64::new(0.4, 0.1)).unwrap();
        assert!(jackson_integral_01(&cq, |_| Ok(ONE), &cfg).is_err());
    }

    #[test]
    fn divergent_integrand_is_not_converged() {
        let cfg = SeriesConfig { max_terms_1d: 200, ..SeriesConfig::default() };
        let ctx = QContext::real(0.5).unwrap();
        let r = jackson_integral_01(&ctx, |t| Ok(ONE / (t * t)), &cfg);
        assert!(r.is_err());
    }

    #[test]
    fn theta_shift_examples() {
        let ctx = QContext::real(0.3).unwrap();
        let f = |x: Complex64, y: Complex64| Ok(x + y * 10.0);
        assert_eq!(theta_shift_x(&ctx, |x, _| Ok(x), ONE, c(5.0)).unwrap(), c(0.3));
        assert_eq!(theta_shift_y(&ctx, |_, _| Ok(c(2.0)), ONE, ONE).unwrap(), c(2.0));
        let twice = theta_shift_x(&ctx, |x, y| theta_shift_x(&ctx, f, x, y), ONE, ONE).unwrap();
        assert_eq!(twice, f(c(0.3 * 0.3), ONE).unwrap());
    }

    #[test]
    fn bracket_theta_examples() {
        let ctx = QContext::real(0.5).unwrap();
        let x = c(0.7);
        let v = bracket_theta(&ctx, |x, _| Ok(x.powi(4)), Axis::X, c(0.0), x, ONE).unwrap();
        assert!(close(v, q_number(&ctx, c(4.0)) * x.powi(4), 1e-15));
        let v = bracket_theta(&ctx, |_, _| Ok(c(2.0)), Axis::Both, c(0.0), x, ONE).unwrap();
        assert_eq!(v, c(0.0));
        let v = bracket_theta(&ctx, |_, _| Ok(c(2.0)), Axis::Y, c(1.7), x, ONE).unwrap();
        assert!(close(v, q_number(&ctx, c(1.7)) * 2.0, 1e-15));
        let v = bracket_theta(&ctx, |x, y| Ok(x * y), Axis::Both, c(0.0), ONE, ONE).unwrap();
        assert!(close(v, c(1.5), 1e-15));
    }

    #[test]
    fn theta_q_operator_on_monomials() {
        let ctx = QContext::real(0.6).unwrap();
        let (x, y) = (c(0.3), c(-0.4));
        let v = theta_q_operator(&ctx, |x, y| Ok(x.powi(3) * y.powi(2)), Axis::X, x, y).unwrap();
        assert!(close(v, q_number(&ctx, c(3.0)) * x.powi(3) * y.powi(2), 1e-15));
        let v = theta_q_operator(&ctx, |x, y| Ok(x.powi(3) * y.powi(2)), Axis::Y, x, y).unwrap();
        assert!(close(v, q_number(&ctx, c(2.0)) * x.powi(3) * y.powi(2), 1e-15));
        let v = theta_q_operator(&ctx, |_, y| Ok(y.exp()), Axis::X, x, y).unwrap();
        assert_eq!(v, c(0.0));
        assert!(theta_q_operator(&ctx, |_, y| Ok(y), Axis::Both, x, y).is_err());
    }

    #[test]
    fn param_derivative_examples() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        let v = param_q_derivative(&ctx, |a| Ok(q_pochhammer(&ctx, a, 1)), c(0.37), &cfg).unwrap();
        assert!(close(v, c(-1.0), 1e-14));
        assert_eq!(param_q_derivative(&ctx, |_| Ok(ONE), c(0.37), &cfg).unwrap(), c(0.0));
        let a = c(0.25);
        let v = param_q_derivative(&ctx, |a| Ok(q_pochhammer(&ctx, a, 2)), a, &cfg).unwrap();
        // (1−a)(1−aq) − (1−qa)(1−q²a) over (1−q)a.
        let oracle = ((1.0 - 0.25) * (1.0 - 0.125) - (1.0 - 0.125) * (1.0 - 0.0625)) / (0.5 * 0.25);
        assert!(close(v, c(oracle), 1e-14));
        assert!(param_q_derivative(&ctx, Ok, c(0.0), &cfg).is_err());
    }

    #[test]
    fn derivative_tends_to_classical_as_q_increases() {
        let cfg = SeriesConfig::default();
        let f = |z: Complex64| Ok(z.powi(4) - z * 3.0);
        let z = c(0.8);
        let exact = 4.0 * 0.8f64.powi(3) - 3.0;
        let mut last = f64::INFINITY;
        for q in [0.9, 0.99, 0.999] {
            let ctx = QContext::real(q).unwrap();
            let err = (jackson_derivative(&ctx, f, z, &cfg).unwrap() - c(exact)).norm();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-2);
    }

    proptest! {
        #[test]
        fn monomial_eigenrelation(q in 0.2f64..0.95, n in 0i32..=8, re in -0.9f64..0.9, im in -0.9f64..0.9) {
            let z = Complex64::new(re, im);
            prop_assume!(z.norm() > 0.05);
            let cfg = SeriesConfig::default();
            let ctx = QContext::real(q).unwrap();
            let d = jackson_derivative(&ctx, |w| Ok(w.powi(n)), z, &cfg).unwrap();
            let expected = q_number(&ctx, c(n as f64)) * if n == 0 { c(0.0) } else { z.powi(n - 1) };
            prop_assert!((d - expected).norm() <= 1e-12 * expected.norm().max(1.0));
        }

        #[test]
        fn iterated_monomial_rule(q in 0.3f64..0.9, n in 0i32..=7, r in 1usize..=4, x in 0.2f64..0.9) {
            let cfg = SeriesConfig::default();
            let ctx = QContext::real(q).unwrap();
            let z = c(x);
            let d = jackson_derivative_iter(&ctx, |w| Ok(w.powi(n)), z, r, &cfg).unwrap();
            let mut expected = if (r as i32) > n { c(0.0) } else { z.powi(n - r as i32) };
            for j in 0..r as i32 {
                expected *= q_number(&ctx, c((n - j) as f64));
            }
            // Cancellation in the lattice sum is the only error source.
            let cond: f64 = iterated_derivative_coefficients(&ctx, r)
                .iter()
                .enumerate()
                .map(|(j, cj)| cj.norm() * (z * q.powi(j as i32)).powi(n).norm())
                .sum::<f64>()
                / z.norm().powi(r as i32);
            prop_assert!((d - expected).norm() <= 1e-14 * cond + 1e-13 * expected.norm());
        }
    }
}
