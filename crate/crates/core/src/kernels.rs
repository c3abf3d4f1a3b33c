//! Half-line kernels for the symmetric α-stable process killed on leaving
//! `D = (0, ∞)`.
//!
//! The Green function is the one-dimensional half-space formula
//!
//! `G(x, y) = |x−y|^{α−1} I(4xy/(x−y)²) / (2^α Γ(α/2)²)`,
//! `I(r) = ∫_0^r s^{α/2−1} (1+s)^{−1/2} ds`.
//!
//! `I` is an incomplete Beta integral and is summed from two series in
//! `τ = s/(1+s) ≤ 1/2`, so every term decays at least like `2^{−k}`. The
//! Poisson kernel and the exit-position distribution are obtained from `G`
//! by quadrature.

use serde::{Deserialize, Serialize};

use crate::constants::{check_alpha, kappa, levy_a, StableParams};
use crate::error::{Error, Result};
use crate::quad::{integrate_nodes, Node, QuadConfig, QuadResult, SingularSpec};
use crate::specfun::{gamma_ext, sin_pi};
use crate::stable_mc::{groundstate_paths, mean_estimate, ratio_estimate, McEstimate, SimConfig};

/// Envelope `(t^{−1/α} ∧ t|x−y|^{−1−α})(1 ∧ x^{α/2}/√t)(1 ∧ y^{α/2}/√t)`
/// of the killed heat kernel; zero off `D × D`. Not the exact density.
pub fn heat_profile(alpha: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t > 0.0) {
        return Err(Error::domain("t", t, "(0, inf)"));
    }
    if x <= 0.0 || y <= 0.0 {
        return Ok(0.0);
    }
    let free = t.powf(-1.0 / alpha).min(t * (x - y).abs().powf(-1.0 - alpha));
    let st = t.sqrt();
    let h = 0.5 * alpha;
    Ok(free * (x.powf(h) / st).min(1.0) * (y.powf(h) / st).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenEval {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

const SERIES_TERMS: usize = 90;

/// Precomputed constants of `G` for one α.
#[derive(Debug, Clone)]
pub struct GreenKernel {
    alpha: f64,
    norm: f64,
    /// `I(1)`
    i_one: f64,
    /// `(α/2 + 1/2)_k / k!`
    low: Vec<f64>,
    /// `(1 − α/2)_k / k!`
    high: Vec<f64>,
}

/// `(e^{m L} − 1)/m`, continuous at `m = 0`.
fn expm1_over(m: f64, l: f64) -> f64 {
    if m == 0.0 {
        l
    } else if l.is_infinite() {
        if m * l < 0.0 {
            -1.0 / m
        } else {
            f64::INFINITY
        }
    } else {
        (m * l).exp_m1() / m
    }
}

fn pochhammer_ratios(start: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(SERIES_TERMS);
    let mut c = 1.0;
    for k in 0..SERIES_TERMS {
        v.push(c);
        c *= (start + k as f64) / (k as f64 + 1.0);
    }
    v
}

impl GreenKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let a = 0.5 * alpha;
        let g = gamma_ext(a)?;
        let mut k = GreenKernel {
            alpha,
            norm: 1.0 / (2f64.powf(alpha) * g * g),
            i_one: 0.0,
            low: pochhammer_ratios(a + 0.5),
            high: pochhammer_ratios(1.0 - a),
        };
        k.i_one = k.lower_series(0.5);
        Ok(k)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `I(r)` for `r ≤ 1`, i.e. `∫_0^z τ^{a−1}(1−τ)^{−a−1/2} dτ` with `z = r/(1+r) ≤ 1/2`.
    fn lower_series(&self, z: f64) -> f64 {
        let a = 0.5 * self.alpha;
        let lz = z.ln();
        let mut s = 0.0;
        for (k, c) in self.low.iter().enumerate() {
            let e = a + k as f64;
            let t = c * (e * lz).exp() / e;
            s += t;
            if t < 1e-17 * s {
                break;
            }
        }
        s
    }

    /// `I(r)` for `r = 4xy/(x−y)²`, given the gap `|x − y|` exactly.
    pub fn inner(&self, x: f64, y: f64, gap: f64) -> f64 {
        let sum = x + y;
        let rho = gap / sum;
        let tau0 = rho * rho;
        if tau0 >= 0.5 {
            return self.lower_series(4.0 * x * y / (sum * sum));
        }
        let m0 = 0.5 - 0.5 * self.alpha;
        let l = (0.5 / tau0).ln();
        // the k = 0 term; divergent as the gap closes when α ≥ 1
        self.i_one + tau0.powf(m0) * expm1_over(m0, l) + self.high_rest(tau0)
    }

    /// `Σ_{k≥1} (1−a)_k/k! ∫_{τ0}^{1/2} τ^{k−a−1/2} dτ`
    fn high_rest(&self, tau0: f64) -> f64 {
        let m0 = 0.5 - 0.5 * self.alpha;
        let (lh, lt) = (0.5f64.ln(), tau0.ln());
        let mut s = 0.0;
        for (k, c) in self.high.iter().enumerate().skip(1) {
            let m = k as f64 + m0;
            let t = c * ((m * lh).exp() - (m * lt).exp()) / m;
            s += t;
            if t.abs() < 1e-17 * s.abs() {
                break;
            }
        }
        s
    }

    /// `G(x, y)` with the gap `|x − y|` supplied exactly.
    pub fn eval_gap(&self, x: f64, y: f64, gap: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 {
            return 0.0;
        }
        let sum = x + y;
        let rho = gap / sum;
        let tau0 = rho * rho;
        let e = self.alpha - 1.0;
        if tau0 >= 0.5 {
            return self.norm * gap.powf(e) * self.inner(x, y, gap);
        }
        let m0 = -0.5 * e;
        let l = (0.5 / tau0).ln();
        // gap^{α−1} τ0^{m0} = (x+y)^{α−1}
        let head = sum.powf(e) * expm1_over(m0, l);
        let rest = if gap == 0.0 {
            0.0
        } else {
            gap.powf(e) * (self.i_one + self.high_rest(tau0))
        };
        self.norm * (head + rest)
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<GreenEval> {
        let gap = (x - y).abs();
        if self.alpha <= 1.0 && x > 0.0 && y > 0.0 && gap < 1e-12 * (x + y) {
            return Err(Error::DiagonalSingularity { x, y });
        }
        Ok(GreenEval {
            x,
            y,
            value: self.eval_gap(x, y, gap),
        })
    }
}

pub fn green_halfline(alpha: f64, x: f64, y: f64) -> Result<GreenEval> {
    GreenKernel::new(alpha)?.eval(x, y)
}

/// Quadrature value and closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub quad: QuadResult,
}

impl KernelCheck {
    pub fn rel_defect(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs()
    }
}

/// Shape of `y ↦ G(x, y) w(y)` for a weight `w ~ y^{lead}` at 0 and `y^{decay}` at ∞.
fn green_spec(alpha: f64, x: f64, lead: f64, decay: f64) -> SingularSpec {
    let h = 0.5 * alpha;
    let mut spec = SingularSpec::new()
        .left((h + lead).min(0.0))
        .at(x, (alpha - 1.0).min(0.0))
        .decay(h - 1.0 + decay);
    if alpha == 1.0 {
        spec = spec.with_log();
    }
    spec
}

fn green_node(k: &GreenKernel, x: f64, n: Node) -> f64 {
    k.eval_gap(x, n.x, n.dist(x))
}

/// `∫_D G(x, y) y^{−β−α/2} dy` against `x^{α/2−β} / κ_β`.
pub fn green_identity_check(p: &StableParams, x: f64, cfg: &QuadConfig) -> Result<KernelCheck> {
    if !(x > 0.0) {
        return Err(Error::domain("x", x, "(0, inf)"));
    }
    let k = GreenKernel::new(p.alpha)?;
    let s = -p.beta - 0.5 * p.alpha;
    let f = |n: Node| green_node(&k, x, n) * n.x.powf(s);
    let quad = integrate_nodes(f, 0.0, f64::INFINITY, &green_spec(p.alpha, x, s, s), cfg)?;
    Ok(KernelCheck {
        lhs: quad.value,
        rhs: x.powf(-p.lower_gap()) / kappa(p),
        quad,
    })
}

/// `P_D(x, z) = ∫_D G(x, y) ν(z − y) dy` for `z < 0`, by quadrature.
pub fn poisson_halfline(alpha: f64, x: f64, z: f64) -> Result<f64> {
    poisson_quad(alpha, x, z, &QuadConfig::default()).map(|q| q.value)
}

pub fn poisson_quad(alpha: f64, x: f64, z: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    check_args(alpha, x, z)?;
    let k = GreenKernel::new(alpha)?;
    let a = levy_a(alpha)?;
    let f = |n: Node| green_node(&k, x, n) * a * (n.x - z).powf(-1.0 - alpha);
    integrate_nodes(f, 0.0, f64::INFINITY, &green_spec(alpha, x, 0.0, -1.0 - alpha), cfg)
}

/// `(sin(πα/2)/π) (x/|z|)^{α/2} / (x − z)`, the classical closed form of the
/// half-line Poisson kernel. Used to cross-check the quadrature.
pub fn poisson_closed_form(alpha: f64, x: f64, z: f64) -> Result<f64> {
    check_args(alpha, x, z)?;
    Ok(sin_pi(0.5 * alpha) / std::f64::consts::PI * (x / -z).powf(0.5 * alpha) / (x - z))
}

fn check_args(alpha: f64, x: f64, z: f64) -> Result<()> {
    check_alpha(alpha)?;
    if !(x > 0.0) {
        return Err(Error::domain("x", x, "(0, inf)"));
    }
    if !(z < 0.0) {
        return Err(Error::domain("z", z, "(-inf, 0)"));
    }
    Ok(())
}

/// `P^x(X_τ ≤ z) = (A_α/α) ∫_D G(x, y) (y − z)^{−α} dy` for `z ≤ 0`.
pub fn exit_cdf(alpha: f64, x: f64, z: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    check_args(alpha, x, if z == 0.0 { -1.0 } else { z })?;
    let k = GreenKernel::new(alpha)?;
    let c = levy_a(alpha)? / alpha;
    let f = |n: Node| green_node(&k, x, n) * c * (n.x - z).powf(-alpha);
    let lead = if z == 0.0 { -alpha } else { 0.0 };
    integrate_nodes(f, 0.0, f64::INFINITY, &green_spec(alpha, x, lead, -alpha), cfg)
}

/// Tabulated exit-position distribution function, valid for every start `x`
/// by scaling: `P^x(X_τ ≤ z)` depends on `z/x` only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExitCdfTable {
    pub alpha: f64,
    /// Values at `θ_j = j/n` where `u = |z|/(x+|z|)` and `u/(1−u) = (θ/(1−θ))^4`.
    values: Vec<f64>,
}

const CLUSTER: f64 = 4.0;

impl ExitCdfTable {
    pub fn build(alpha: f64, n: usize, cfg: &QuadConfig) -> Result<Self> {
        let mut values = Vec::with_capacity(n + 1);
        values.push(1.0);
        for j in 1..n {
            let th = j as f64 / n as f64;
            let s = (th / (1.0 - th)).powf(CLUSTER);
            values.push(exit_cdf(alpha, 1.0, -s, cfg)?.value.clamp(0.0, 1.0));
        }
        values.push(0.0);
        Ok(ExitCdfTable { alpha, values })
    }

    pub fn eval(&self, x: f64, z: f64) -> f64 {
        if z >= 0.0 {
            return 1.0;
        }
        let s = -z / x;
        let r = s.powf(1.0 / CLUSTER);
        let th = r / (1.0 + r);
        let n = self.values.len() - 1;
        let pos = th * n as f64;
        let j = (pos.floor() as usize).min(n - 1);
        let w = pos - j as f64;
        self.values[j] * (1.0 - w) + self.values[j + 1] * w
    }

    /// Kolmogorov–Smirnov distance between a sample of exit positions from
    /// `x` and this distribution.
    pub fn ks_distance(&self, x: f64, sample: &[f64]) -> f64 {
        let mut s: Vec<f64> = sample.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len() as f64;
        s.iter()
            .enumerate()
            .map(|(i, &z)| {
                let f = self.eval(x, z);
                (f - i as f64 / n).abs().max((i as f64 + 1.0) / n - f)
            })
            .fold(0.0, f64::max)
    }
}

/// Monte Carlo estimates of the ground-state pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    /// The normalising constant `C = E^1 ∫_0^τ t^a X_t^{−γ} dt`, `a = (γ−β−α/2)/α`.
    pub c_hat: McEstimate,
    /// `h_β(x)`, target `x^{α/2−β}`.
    pub h_hat: McEstimate,
    /// `h_β(x) q_β(x)`, target `κ_β x^{−α/2−β}`.
    pub q_hat: McEstimate,
}

/// Seed offset of the independent run used for `h_β(x)`.
const H_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// `h_β(x) = C^{−1} E^x ∫_0^τ t^a X_t^{−γ} dt` and
/// `h_β q_β(x) = C^{−1} a E^x ∫_0^τ t^{a−1} X_t^{−γ} dt`.
///
/// `C` and `q_β(1)` come from one run at `x = 1`; `q` is carried to `x` by
/// `h_β q_β(x) = x^{−α/2−β} q_β(1)`. `h_β(x)` uses an independent run at `x`.
pub fn groundstate_pair(p: &StableParams, x: f64, cfg: &SimConfig) -> Result<GroundState> {
    let gamma = p
        .gamma_exp
        .ok_or_else(|| Error::Config("ground state needs the exponent gamma".into()))?;
    let g = p.with_gamma(gamma)?;
    if !(x > 0.0) {
        return Err(Error::domain("x", x, "(0, inf)"));
    }
    if cfg.alpha != g.alpha {
        return Err(Error::Config(format!("config alpha {} differs from {}", cfg.alpha, g.alpha)));
    }
    let a = (gamma - g.beta - g.half_alpha()) / g.alpha;
    let (f_c, f_q, _) = groundstate_paths(a, gamma, &cfg.at(1.0))?;
    let c_hat = mean_estimate(&f_c);
    let scaled_q: Vec<f64> = f_q.iter().map(|v| a * v).collect();
    let q1 = ratio_estimate(&scaled_q, &f_c);
    let h_run = cfg.at(x).with_seed(cfg.seed ^ H_SEED_SALT);
    let (f_x, _, _) = groundstate_paths(a, gamma, &h_run)?;
    let num = mean_estimate(&f_x);
    let h = num.mean / c_hat.mean;
    let rel = (num.stderr / num.mean).hypot(c_hat.stderr / c_hat.mean);
    let h_hat = McEstimate {
        mean: h,
        stderr: h * rel,
        n: num.n,
        ci95: (h * (1.0 - 1.96 * rel), h * (1.0 + 1.96 * rel)),
        reduction: num.reduction,
        censored: num.censored,
    };
    Ok(GroundState {
        c_hat,
        h_hat,
        q_hat: q1.scaled(x.powf(-g.half_alpha() - g.beta)),
    })
}
