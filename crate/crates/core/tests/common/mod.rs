#![allow(dead_code)]

use num_complex::Complex64;
use qhumbert::humbert::{direct_term, HumbertKind, HumbertParams};
use qhumbert::{QContext, SeriesConfig};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Row-major brute force `Σ_{n<N} Σ_{k<N} w(n, k) · term(n, k)`.
pub fn brute_force<W>(kind: HumbertKind, p: &HumbertParams, x: Complex64, y: Complex64, size: usize, w: W) -> Complex64
where
    W: Fn(usize, usize) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..size {
        for k in 0..size {
            acc += w(n, k) * direct_term(kind, p, n, k, x, y);
        }
    }
    acc
}

pub struct RandomPoint {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub x: f64,
    pub y: f64,
}

impl RandomPoint {
    /// `q ∈ [q_lo, q_hi]`, exponents in `[0.2, 3]` with `γ` clear of integers,
    /// `|x|, |y| ∈ [xy_lo, 0.4]` with random signs.
    pub fn draw(rng: &mut ChaCha8Rng, (q_lo, q_hi): (f64, f64), xy_lo: f64) -> Self {
        let gamma = loop {
            let g: f64 = rng.gen_range(0.2..3.0);
            if (g - g.round()).abs() > 0.1 {
                break g;
            }
        };
        let coord = |rng: &mut ChaCha8Rng| {
            let v = rng.gen_range(xy_lo..=0.4);
            if rng.gen_bool(0.5) {
                v
            } else {
                -v
            }
        };
        RandomPoint {
            q: rng.gen_range(q_lo..=q_hi),
            alpha: rng.gen_range(0.2..3.0),
            beta: rng.gen_range(0.2..3.0),
            gamma,
            x: coord(rng),
            y: coord(rng),
        }
    }

    pub fn ctx(&self) -> QContext {
        QContext::real(self.q).unwrap()
    }

    pub fn params(&self, kind: HumbertKind) -> HumbertParams {
        let cfg = SeriesConfig::default();
        match kind {
            HumbertKind::Phi3 => HumbertParams::phi3(self.ctx(), c(self.alpha), c(self.gamma), &cfg).unwrap(),
            _ => HumbertParams::new(self.ctx(), c(self.alpha), c(self.beta), c(self.gamma), &cfg).unwrap(),
        }
    }
}

pub const KINDS: [HumbertKind; 3] = [HumbertKind::Phi1, HumbertKind::Phi2, HumbertKind::Phi3];
