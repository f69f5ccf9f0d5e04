//! Parameter domains: seeded sampling and validation of user-supplied points.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{QError, QResult};
use crate::qcore::SeriesConfig;

use super::SamplePoint;

/// Sampling keeps `γ` at least this far from excluded integers.
pub const SAMPLE_MARGIN: f64 = 0.15;
/// Validation of explicit points rejects `γ` closer than this to an excluded integer.
pub const VALIDATE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRule {
    Range(f64, f64),
    /// `γ = α + U[lo, hi]`.
    AlphaPlus(f64, f64),
    /// `γ = α + β + U[lo, hi]`.
    AlphaBetaPlus(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum XyRule {
    /// `x, y ∈ [−max, max]`.
    Signed(f64),
    /// `|x|, |y| ∈ [lo, hi]` with a random sign.
    Annulus(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthRule {
    None,
    R,
    S,
    RS,
    L(usize, usize),
}

/// Integers `j = 0..=n` that `γ` must avoid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AvoidRule {
    None,
    Through(usize),
    /// Through the sampled depth `l`.
    ThroughDepth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainSpec {
    pub q: (f64, f64),
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
    pub gamma: GammaRule,
    pub xy: XyRule,
    pub depth: DepthRule,
    pub avoid_gamma: AvoidRule,
    pub nonzero_x: bool,
    pub nonzero_y: bool,
    /// `Re α > 0`, needed when `q^α` is a series argument.
    pub positive_alpha: bool,
}

pub const DEPTH_MAX: usize = 3;

impl DomainSpec {
    pub fn base() -> Self {
        DomainSpec {
            q: (0.3, 0.9),
            alpha: (0.2, 3.0),
            beta: (0.2, 3.0),
            gamma: GammaRule::Range(0.2, 3.0),
            xy: XyRule::Signed(0.4),
            depth: DepthRule::None,
            avoid_gamma: AvoidRule::None,
            nonzero_x: false,
            nonzero_y: false,
            positive_alpha: false,
        }
    }

    /// Domain for iterated q-derivatives: rounding grows like `((1 − q)|x|)^{−r}`,
    /// so `q` stays mid-range and `|x|, |y|` away from zero.
    pub fn derivative(depth: DepthRule) -> Self {
        let (nx, ny) = match depth {
            DepthRule::R => (true, false),
            DepthRule::S => (false, true),
            _ => (true, true),
        };
        DomainSpec {
            q: (0.4, 0.6),
            xy: XyRule::Annulus(0.3, 0.4),
            depth,
            nonzero_x: nx,
            nonzero_y: ny,
            ..Self::base()
        }
    }

    pub fn avoid(mut self, rule: AvoidRule) -> Self {
        self.avoid_gamma = rule;
        self
    }

    pub fn depth(mut self, depth: DepthRule) -> Self {
        self.depth = depth;
        self
    }

    pub fn q_range(mut self, lo: f64, hi: f64) -> Self {
        self.q = (lo, hi);
        self
    }

    pub fn positive_alpha(mut self) -> Self {
        self.positive_alpha = true;
        self
    }

    fn avoid_upto(&self, l: usize) -> Option<usize> {
        match self.avoid_gamma {
            AvoidRule::None => None,
            AvoidRule::Through(n) => Some(n),
            AvoidRule::ThroughDepth => Some(l),
        }
    }

    fn gamma_clear(&self, gamma: Complex64, l: usize, margin: f64) -> Option<usize> {
        let n = self.avoid_upto(l)?;
        (0..=n).find(|&j| (gamma - j as f64).norm() < margin)
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> SamplePoint {
        let uni = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| rng.gen_range(lo..=hi);
        let q = uni(rng, self.q);
        let alpha = uni(rng, self.alpha);
        let beta = uni(rng, self.beta);
        let (mut r, mut s, mut l) = (1, 1, 1);
        match self.depth {
            DepthRule::None => {}
            DepthRule::R => r = rng.gen_range(1..=DEPTH_MAX),
            DepthRule::S => s = rng.gen_range(1..=DEPTH_MAX),
            DepthRule::RS => {
                r = rng.gen_range(1..=DEPTH_MAX);
                s = rng.gen_range(1..=DEPTH_MAX);
            }
            DepthRule::L(lo, hi) => l = rng.gen_range(lo..=hi),
        }
        let gamma = loop {
            let g = match self.gamma {
                GammaRule::Range(lo, hi) => uni(rng, (lo, hi)),
                GammaRule::AlphaPlus(lo, hi) => alpha + uni(rng, (lo, hi)),
                GammaRule::AlphaBetaPlus(lo, hi) => alpha + beta + uni(rng, (lo, hi)),
            };
            if self.gamma_clear(Complex64::new(g, 0.0), l, SAMPLE_MARGIN).is_none() {
                break g;
            }
        };
        let coord = |rng: &mut ChaCha8Rng| match self.xy {
            XyRule::Signed(m) => rng.gen_range(-m..=m),
            XyRule::Annulus(lo, hi) => {
                let v = rng.gen_range(lo..=hi);
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            }
        };
        let x = coord(rng);
        let y = coord(rng);
        SamplePoint {
            q,
            alpha: Complex64::new(alpha, 0.0),
            beta: Complex64::new(beta, 0.0),
            gamma: Complex64::new(gamma, 0.0),
            x: Complex64::new(x, 0.0),
            y: Complex64::new(y, 0.0),
            r,
            s,
            l,
        }
    }

    /// Rejects points where the identity's terms are undefined.
    pub fn validate(&self, p: &SamplePoint, cfg: &SeriesConfig) -> QResult<()> {
        if !(p.q > 0.0 && p.q < 1.0) {
            return Err(QError::domain(format!("q must lie in (0, 1), got {}", p.q)));
        }
        for (name, v) in [("x", p.x), ("y", p.y)] {
            if !(v.norm() < 1.0) {
                return Err(QError::domain(format!("|{name}| must be < 1, got {}", v.norm())));
            }
        }
        if self.nonzero_x && p.x.norm() < cfg.tol_pole {
            return Err(QError::domain("x must be nonzero for a q-derivative in x"));
        }
        if self.nonzero_y && p.y.norm() < cfg.tol_pole {
            return Err(QError::domain("y must be nonzero for a q-derivative in y"));
        }
        match self.depth {
            DepthRule::R if p.r == 0 => return Err(QError::domain("r must be >= 1")),
            DepthRule::S if p.s == 0 => return Err(QError::domain("s must be >= 1")),
            DepthRule::RS if p.r == 0 || p.s == 0 => return Err(QError::domain("r and s must be >= 1")),
            DepthRule::L(lo, _) if p.l < lo => return Err(QError::domain(format!("l must be >= {lo}"))),
            _ => {}
        }
        if self.positive_alpha && p.alpha.re <= 0.0 {
            return Err(QError::domain("Re(alpha) must be positive"));
        }
        match self.gamma {
            GammaRule::Range(..) => {}
            GammaRule::AlphaPlus(..) => {
                if p.alpha.re <= 0.0 || (p.gamma - p.alpha).re <= 0.0 {
                    return Err(QError::domain("need 0 < Re(alpha) < Re(gamma)"));
                }
            }
            GammaRule::AlphaBetaPlus(..) => {
                if (p.gamma - p.alpha - p.beta).re <= 0.0 {
                    return Err(QError::domain("need Re(gamma - alpha - beta) > 0"));
                }
            }
        }
        if let Some(j) = self.gamma_clear(p.gamma, p.l, VALIDATE_MARGIN) {
            return Err(QError::domain(format!("gamma must avoid the integer {j}")));
        }
        Ok(())
    }

    /// One-line human-readable constraint summary.
    pub fn describe(&self) -> String {
        let mut parts = vec![format!("q in [{}, {}]", self.q.0, self.q.1)];
        parts.push(format!("alpha in [{}, {}]", self.alpha.0, self.alpha.1));
        parts.push(format!("beta in [{}, {}]", self.beta.0, self.beta.1));
        parts.push(match self.gamma {
            GammaRule::Range(lo, hi) => format!("gamma in [{lo}, {hi}]"),
            GammaRule::AlphaPlus(lo, hi) => format!("gamma - alpha in [{lo}, {hi}]"),
            GammaRule::AlphaBetaPlus(lo, hi) => format!("gamma - alpha - beta in [{lo}, {hi}]"),
        });
        parts.push(match self.xy {
            XyRule::Signed(m) => format!("|x|, |y| <= {m}"),
            XyRule::Annulus(lo, hi) => format!("|x|, |y| in [{lo}, {hi}]"),
        });
        match self.depth {
            DepthRule::None => {}
            DepthRule::R => parts.push(format!("r in 1..={DEPTH_MAX}")),
            DepthRule::S => parts.push(format!("s in 1..={DEPTH_MAX}")),
            DepthRule::RS => parts.push(format!("r, s in 1..={DEPTH_MAX}")),
            DepthRule::L(lo, hi) => parts.push(format!("l in {lo}..={hi}")),
        }
        match self.avoid_gamma {
            AvoidRule::None => {}
            AvoidRule::Through(n) => parts.push(format!("gamma avoids 0..={n}")),
            AvoidRule::ThroughDepth => parts.push("gamma avoids 0..=l".to_string()),
        }
        if self.positive_alpha {
            parts.push("alpha > 0".to_string());
        }
        parts.join("; ")
    }
}
