//! Convergence-controlled summation engines.
//!
//! Double series are summed along antidiagonals `n + k = ℓ`, so that
//! `Σ_{n,k} A(n,k) = Σ_ℓ Σ_{κ≤ℓ} A(ℓ−κ, κ)`. Terms are produced by ratio
//! recurrences: the corner `(ℓ, 0)` from `(ℓ−1, 0)` through `ratio_n`, every
//! other term `(n, k)` from `(n, k−1)` on the previous antidiagonal through
//! `ratio_k`. No division is needed, so terminating numerators are safe.
//!
//! Stopping rule everywhere: `consecutive_small` successive terms (blocks)
//! whose magnitude is below `tol · max(1, |partial sum|)`. For double series
//! the magnitude of a block is its absolute mass `Σ|A|`, which cannot vanish
//! by cancellation inside the block.

use num_complex::Complex64;

use crate::error::{QError, QResult};
use crate::qcore::{pole_guard, terminates, EvalResult, QContext, SeriesConfig};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Running sum with the shared stopping rule.
#[derive(Debug)]
pub struct Accumulator<'a> {
    cfg: &'a SeriesConfig,
    sum: Complex64,
    run: usize,
    terms: usize,
    last: f64,
}

impl<'a> Accumulator<'a> {
    pub fn new(cfg: &'a SeriesConfig) -> Self {
        Accumulator { cfg, sum: ZERO, run: 0, terms: 0, last: f64::INFINITY }
    }

    /// Adds `value` (whose size for the stopping rule is `mass`) and reports
    /// whether the sum is now converged.
    pub fn push(&mut self, value: Complex64, mass: f64) -> bool {
        self.sum += value;
        self.terms += 1;
        self.last = mass;
        if mass < self.cfg.tol * self.sum.norm().max(1.0) {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= self.cfg.consecutive_small
    }

    pub fn sum(&self) -> Complex64 {
        self.sum
    }

    pub fn finish(&self, terms_used: usize, converged: bool) -> EvalResult {
        EvalResult { value: self.sum, terms_used, tail_estimate: self.last, converged }
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Sums `Σ_{n≥0} term(n)` under the configured policy.
pub fn sum_1d<F>(cfg: &SeriesConfig, mut term: F) -> QResult<EvalResult>
where
    F: FnMut(usize) -> QResult<Complex64>,
{
    let mut acc = Accumulator::new(cfg);
    for n in 0..cfg.max_terms_1d {
        let t = term(n)?;
        if !finite(t) {
            return Err(QError::RatioUndefined { n, k: 0 });
        }
        if acc.push(t, t.norm()) {
            return Ok(acc.finish(n + 1, true));
        }
    }
    Err(QError::NotConverged(acc.finish(cfg.max_terms_1d, false)))
}

/// A double series described by its `(0,0)` term and the two term ratios
/// `term(n+1,k)/term(n,k)` and `term(n,k+1)/term(n,k)`.
pub struct DoubleSeriesSpec<Rn, Rk>
where
    Rn: Fn(usize, usize) -> Complex64,
    Rk: Fn(usize, usize) -> Complex64,
{
    pub initial_term: Complex64,
    pub ratio_n: Rn,
    pub ratio_k: Rk,
}

impl<Rn, Rk> DoubleSeriesSpec<Rn, Rk>
where
    Rn: Fn(usize, usize) -> Complex64,
    Rk: Fn(usize, usize) -> Complex64,
{
    pub fn new(initial_term: Complex64, ratio_n: Rn, ratio_k: Rk) -> Self {
        DoubleSeriesSpec { initial_term, ratio_n, ratio_k }
    }

    /// Term `(n, k)` built along the path `(0,0) → (n,0) → (n,k)`.
    pub fn term(&self, n: usize, k: usize) -> Complex64 {
        let mut t = self.initial_term;
        for i in 0..n {
            t *= (self.ratio_n)(i, 0);
        }
        for j in 0..k {
            t *= (self.ratio_k)(n, j);
        }
        t
    }
}

/// Antidiagonal summation of a double series.
pub fn sum_double<Rn, Rk>(spec: &DoubleSeriesSpec<Rn, Rk>, cfg: &SeriesConfig) -> QResult<EvalResult>
where
    Rn: Fn(usize, usize) -> Complex64,
    Rk: Fn(usize, usize) -> Complex64,
{
    if !finite(spec.initial_term) {
        return Err(QError::RatioUndefined { n: 0, k: 0 });
    }
    let mut acc = Accumulator::new(cfg);
    let mut terms = 1usize;
    let mut prev = vec![spec.initial_term];
    if acc.push(spec.initial_term, spec.initial_term.norm()) && cfg.max_terms_2d == 1 {
        return Ok(acc.finish(terms, true));
    }
    let mut cur: Vec<Complex64> = Vec::new();
    for l in 1..cfg.max_terms_2d {
        cur.clear();
        cur.reserve(l + 1);
        let corner = if prev[0] == ZERO {
            ZERO
        } else {
            let r = (spec.ratio_n)(l - 1, 0);
            if !finite(r) {
                return Err(QError::RatioUndefined { n: l - 1, k: 0 });
            }
            prev[0] * r
        };
        cur.push(corner);
        for k in 1..=l {
            let below = prev[k - 1];
            let t = if below == ZERO {
                ZERO
            } else {
                let r = (spec.ratio_k)(l - k, k - 1);
                if !finite(r) {
                    return Err(QError::RatioUndefined { n: l - k, k: k - 1 });
                }
                below * r
            };
            cur.push(t);
        }
        terms += l + 1;
        let block: Complex64 = cur.iter().sum();
        let mass: f64 = cur.iter().map(|t| t.norm()).sum();
        std::mem::swap(&mut prev, &mut cur);
        if acc.push(block, mass) {
            return Ok(acc.finish(terms, true));
        }
    }
    Err(QError::NotConverged(acc.finish(terms, false)))
}

/// Unilateral basic hypergeometric series in the plain quotient convention:
/// `Σ_n ∏(a_i;q)_n / (∏(b_j;q)_n (q;q)_n) zⁿ`, with no `(−1)ⁿ q^{n(n−1)/2}`
/// correction for any `r`, `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperSeriesSpec {
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
    pub argument: Complex64,
}

impl HyperSeriesSpec {
    pub fn new(numerator: &[Complex64], denominator: &[Complex64], argument: Complex64) -> Self {
        HyperSeriesSpec { numerator: numerator.to_vec(), denominator: denominator.to_vec(), argument }
    }
}

pub fn sum_rphis(ctx: &QContext, spec: &HyperSeriesSpec, cfg: &SeriesConfig) -> QResult<EvalResult> {
    for &b in &spec.denominator {
        pole_guard(ctx, b, cfg.tol_pole, "rphis denominator")?;
    }
    let z = spec.argument;
    let terminating = spec.numerator.iter().any(|&a| terminates(ctx, a, cfg));
    if z.norm() >= 1.0 && !terminating {
        return Err(QError::domain(format!(
            "non-terminating rphis requires |argument| < 1, got {}",
            z.norm()
        )));
    }
    let q = ctx.q();
    let mut numer = spec.numerator.clone();
    let mut denom = spec.denominator.clone();
    let mut qn1 = q;
    let mut term = ONE;
    sum_1d(cfg, |n| {
        if n > 0 {
            let mut r = z / (ONE - qn1);
            for a in numer.iter_mut() {
                r *= ONE - *a;
                *a *= q;
            }
            for b in denom.iter_mut() {
                r /= ONE - *b;
                *b *= q;
            }
            qn1 *= q;
            term *= r;
        }
        Ok(term)
    })
}

/// Convenience wrapper around [`sum_rphis`] in the plain convention.
pub fn rphis_plain(
    ctx: &QContext,
    numerator: &[Complex64],
    denominator: &[Complex64],
    argument: Complex64,
    cfg: &SeriesConfig,
) -> QResult<EvalResult> {
    sum_rphis(ctx, &HyperSeriesSpec::new(numerator, denominator, argument), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{q_pochhammer, q_pochhammer_inf};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn geometric_double_series() {
        let cfg = SeriesConfig::default();
        let (x, y) = (c(0.5), c(0.5));
        let spec = DoubleSeriesSpec::new(ONE, |_, _| x, |_, _| y);
        let r = sum_double(&spec, &cfg).unwrap();
        assert!((r.value - c(4.0)).norm() < 1e-14);
        assert!(r.converged);
        assert!(r.tail_estimate <= cfg.tol * r.value.norm().max(1.0));
    }

    #[test]
    fn single_surviving_term() {
        let cfg = SeriesConfig::default();
        let spec = DoubleSeriesSpec::new(ONE, |_, _| ZERO, |_, _| ZERO);
        assert_eq!(sum_double(&spec, &cfg).unwrap().value, ONE);
    }

    #[test]
    fn phi2_spec_matches_double_loop() {
        // alpha = beta = gamma = 1, so a = b = c = q.
        let cfg = SeriesConfig::default();
        let q = 0.5;
        let ctx = QContext::real(q).unwrap();
        let (a, b, cc) = (c(q), c(q), c(q));
        let (x, y) = (c(0.2), c(0.2));
        let spec = DoubleSeriesSpec::new(
            ONE,
            |n, k| (ONE - a * q.powi(n as i32)) * x / ((ONE - cc * q.powi((n + k) as i32)) * (1.0 - q.powi(n as i32 + 1))),
            |n, k| (ONE - b * q.powi(k as i32)) * y / ((ONE - cc * q.powi((n + k) as i32)) * (1.0 - q.powi(k as i32 + 1))),
        );
        let mut brute = ZERO;
        for n in 0..=60usize {
            for k in 0..=60usize {
                brute += q_pochhammer(&ctx, a, n) * q_pochhammer(&ctx, b, k) * x.powi(n as i32) * y.powi(k as i32)
                    / (q_pochhammer(&ctx, cc, n + k) * q_pochhammer(&ctx, c(q), n) * q_pochhammer(&ctx, c(q), k));
            }
        }
        let v = sum_double(&spec, &cfg).unwrap().value;
        assert!((v - brute).norm() < 1e-14 * brute.norm());
    }

    #[test]
    fn non_finite_ratio_is_reported() {
        let cfg = SeriesConfig::default();
        let spec = DoubleSeriesSpec::new(ONE, |n, _| if n == 3 { c(f64::NAN) } else { c(0.1) }, |_, _| c(0.1));
        assert!(matches!(sum_double(&spec, &cfg), Err(QError::RatioUndefined { n: 3, k: 0 })));
    }

    #[test]
    fn slow_series_hits_the_antidiagonal_cap() {
        let cfg = SeriesConfig { max_terms_2d: 50, ..SeriesConfig::default() };
        let spec = DoubleSeriesSpec::new(ONE, |_, _| c(0.99), |_, _| c(0.1));
        match sum_double(&spec, &cfg) {
            Err(QError::NotConverged(r)) => assert!(!r.converged),
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn block_cancellation_does_not_stop_early() {
        // term(n,k) = x^n (-x)^k: every odd antidiagonal sums to zero.
        let cfg = SeriesConfig::default();
        let x = c(0.3);
        let spec = DoubleSeriesSpec::new(ONE, |_, _| x, |_, _| -x);
        let v = sum_double(&spec, &cfg).unwrap().value;
        let exact = ONE / ((ONE - x) * (ONE + x));
        assert!((v - exact).norm() < 1e-15);
    }

    #[test]
    fn one_phi_zero_is_q_binomial_theorem() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        let a = ctx.pow_real(0.5);
        let x = c(0.3);
        let lhs = rphis_plain(&ctx, &[a], &[], x, &cfg).unwrap().value;
        let rhs = q_pochhammer_inf(&ctx, a * x, &cfg).unwrap().value / q_pochhammer_inf(&ctx, x, &cfg).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn zero_phi_zero_is_reciprocal_product() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        let y = c(0.25);
        let lhs = rphis_plain(&ctx, &[], &[], y, &cfg).unwrap().value;
        let rhs = ONE / q_pochhammer_inf(&ctx, y, &cfg).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn zero_argument_and_domain() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        let v = rphis_plain(&ctx, &[c(0.3), c(0.1)], &[c(0.7)], ZERO, &cfg).unwrap().value;
        assert_eq!(v, ONE);
        assert!(matches!(rphis_plain(&ctx, &[c(0.3)], &[], c(1.2), &cfg), Err(QError::Domain(_))));
        assert!(matches!(rphis_plain(&ctx, &[c(0.3)], &[c(4.0)], c(0.2), &cfg), Err(QError::Domain(_))));
    }

    #[test]
    fn terminating_series_is_exact_after_m_plus_one_terms() {
        let cfg = SeriesConfig::default();
        let ctx = QContext::real(0.5).unwrap();
        let m = 4;
        let a = ctx.powi(-m);
        let z = c(3.0);
        let full = rphis_plain(&ctx, &[a, c(0.2)], &[c(0.6)], z, &cfg).unwrap();
        let mut partial = ZERO;
        for n in 0..=(m as usize) {
            partial += q_pochhammer(&ctx, a, n) * q_pochhammer(&ctx, c(0.2), n) * z.powi(n as i32)
                / (q_pochhammer(&ctx, c(0.6), n) * q_pochhammer(&ctx, ctx.q(), n));
        }
        assert!((full.value - partial).norm() <= 1e-14 * partial.norm());
        assert!(full.terms_used <= m as usize + 1 + cfg.consecutive_small);
        let longer = SeriesConfig { consecutive_small: 50, ..cfg.clone() };
        assert_eq!(rphis_plain(&ctx, &[a, c(0.2)], &[c(0.6)], z, &longer).unwrap().value, full.value);
    }
}
