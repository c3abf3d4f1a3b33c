//! The killed Dirichlet form of the half-line and its ground-state
//! representation with weight `h(x) = x^{α/2−β}`:
//!
//! `E(u,u) = ½∬_{D×D}(u(x)−u(y))²ν(x−y) + (A_α/α)∫_D u² x^{−α}`
//! `       = κ_β ∫_D u² x^{−α} + ½∬_{D×D}(u(x)/h(x) − u(y)/h(y))² h(x)h(y) ν(x−y)`.
//!
//! Test functions are supported on `S = [c−r, c+r] ⊂ (0, ∞)`. Each double
//! integral splits into the part over `S × S`, computed in the variables
//! `(x, h = y − x)` with a mesh graded towards `h = 0`, and the part with one
//! point outside `S`, which reduces to a single integral over `S`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{check_alpha, kappa, kappa_half, levy_a, StableParams};
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, integrate, QuadConfig, SingularSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Shape {
    /// `exp(1 − 1/(1 − s²))`, `s = (x − c)/r`
    Bump,
    /// `1 − |s|`
    Hat,
    /// `x^p` times the bump
    TruncatedPower { power: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub shape: Shape,
    pub center: f64,
    pub radius: f64,
    pub amplitude: f64,
}

impl TestFunction {
    pub fn new(shape: Shape, center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::domain("radius", radius, "(0, inf)"));
        }
        if !(center - radius > 0.0) {
            return Err(Error::SupportTouchesBoundary {
                lo: center - radius,
                hi: center + radius,
            });
        }
        Ok(TestFunction {
            shape,
            center,
            radius,
            amplitude: 1.0,
        })
    }

    pub fn bump(center: f64, radius: f64) -> Result<Self> {
        Self::new(Shape::Bump, center, radius)
    }

    /// Hat on `[lo, hi]`.
    pub fn hat(lo: f64, hi: f64) -> Result<Self> {
        Self::new(Shape::Hat, 0.5 * (lo + hi), 0.5 * (hi - lo))
    }

    pub fn truncated_power(power: f64, center: f64, radius: f64) -> Result<Self> {
        Self::new(Shape::TruncatedPower { power }, center, radius)
    }

    pub fn with_amplitude(mut self, a: f64) -> Self {
        self.amplitude = a;
        self
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    fn check(&self) -> Result<()> {
        let (lo, hi) = self.support();
        if !(lo > 0.0) || !(self.radius > 0.0) {
            return Err(Error::SupportTouchesBoundary { lo, hi });
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.center) / self.radius;
        if s.abs() >= 1.0 || self.amplitude == 0.0 {
            return 0.0;
        }
        let bump = || (1.0 - 1.0 / ((1.0 - s) * (1.0 + s))).exp();
        self.amplitude
            * match self.shape {
                Shape::Bump => bump(),
                Shape::Hat => 1.0 - s.abs(),
                Shape::TruncatedPower { power } => x.powf(power) * bump(),
            }
    }

    /// `u(x + h) − u(x)` without cancellation for small `h > 0`.
    fn increment(&self, x: f64, h: f64) -> f64 {
        let (sx, d) = ((x - self.center) / self.radius, h / self.radius);
        let sy = sx + d;
        if sx.abs() >= 1.0 || sy.abs() >= 1.0 || self.amplitude == 0.0 {
            return self.eval(x + h) - self.eval(x);
        }
        // φ(s) = 1 − 1/(1 − s²); large steps in φ do not cancel
        let bump_step = || {
            let phi = |s: f64| 1.0 - 1.0 / ((1.0 - s) * (1.0 + s));
            let dphi = -d * (sx + sy) / ((1.0 - sx * sx) * (1.0 - sy * sy));
            let bx = phi(sx).exp();
            if dphi.abs() < 1.0 {
                (bx, bx * dphi.exp_m1())
            } else {
                (bx, phi(sy).exp() - bx)
            }
        };
        self.amplitude
            * match self.shape {
                Shape::Hat if sx >= 0.0 => -d,
                Shape::Hat if sy <= 0.0 => d,
                Shape::Hat => sx.abs() - sy.abs(),
                Shape::Bump => bump_step().1,
                Shape::TruncatedPower { power } => {
                    let (bx, db) = bump_step();
                    let (px, dp) = (x.powf(power), x.powf(power) * (power * (h / x).ln_1p()).exp_m1());
                    (px + dp) * db + bx * dp
                }
            }
    }

    /// Points where the function is not smooth, including the support ends.
    fn kinks(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        match self.shape {
            Shape::Hat => vec![lo, self.center, hi],
            _ => vec![lo, hi],
        }
    }

    /// The fixed corpus: `bump(2,1)`, `bump(5,0.5)`, hat on `[1,3]` and
    /// `x^{0.3}·bump(3,1)`.
    pub fn corpus() -> Vec<(String, TestFunction)> {
        vec![
            ("bump(2,1)".into(), Self::bump(2.0, 1.0).unwrap()),
            ("bump(5,0.5)".into(), Self::bump(5.0, 0.5).unwrap()),
            ("hat(1,3)".into(), Self::hat(1.0, 3.0).unwrap()),
            ("x^0.3*bump(3,1)".into(), Self::truncated_power(0.3, 3.0, 1.0).unwrap()),
        ]
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// `bump(c,r)`, `hat(lo,hi)` or `power(p,c,r)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse test function '{s}'"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let args: Vec<f64> = inner
            .split(',')
            .map(|a| a.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (&s[..open], args.as_slice()) {
            ("bump", [c, r]) => Self::bump(*c, *r),
            ("hat", [lo, hi]) => Self::hat(*lo, *hi),
            ("power", [p, c, r]) => Self::truncated_power(*p, *c, *r),
            _ => Err(bad()),
        }
    }
}

/// Mesh sizes of the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    /// Panels in `x` between consecutive kinks of `u`.
    pub x_panels: usize,
    /// Graded cells in `h`.
    pub h_cells: usize,
    /// Gauss points per panel or cell.
    pub order: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            x_panels: 16,
            h_cells: 24,
            order: 4,
        }
    }
}

impl Resolution {
    /// Mesh halving.
    pub fn refined(self) -> Self {
        Resolution {
            x_panels: 2 * self.x_panels,
            h_cells: 2 * self.h_cells,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FormBreakdown {
    pub jump_term: f64,
    pub killing_term: f64,
    pub hardy_term: f64,
    pub weighted_jump_term: f64,
}

impl FormBreakdown {
    pub fn direct(&self) -> f64 {
        self.jump_term + self.killing_term
    }

    pub fn groundstate(&self) -> f64 {
        self.hardy_term + self.weighted_jump_term
    }

    pub fn gap(&self) -> f64 {
        let e = self.direct();
        (e - self.groundstate()).abs() / (1.0 + e)
    }
}

/// Panel grading towards both ends of a kink interval, where the outer
/// integrands behave like `c₀ + c₁d^{2−α}` in the distance `d`.
const X_GRADING: f64 = 3.0;

/// Gauss nodes `(x, w)` on `[a, b]` split into `n` panels graded towards both ends.
fn panels(a: f64, b: f64, n: usize, gl: &(Vec<f64>, Vec<f64>), out: &mut Vec<(f64, f64)>) {
    let map = |t: f64| {
        let (p, q) = (t.powf(X_GRADING), (1.0 - t).powf(X_GRADING));
        a + (b - a) * p / (p + q)
    };
    for k in 0..n {
        let (lo, hi) = (map(k as f64 / n as f64), map((k + 1) as f64 / n as f64));
        let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (t, w) in gl.0.iter().zip(&gl.1) {
            out.push((c + r * t, r * w));
        }
    }
}

/// Outer nodes on the support, panels aligned with the kinks.
fn outer_nodes(u: &TestFunction, res: &Resolution) -> Vec<(f64, f64)> {
    let gl = gauss_legendre(res.order);
    let k = u.kinks();
    let mut out = Vec::new();
    for w in k.windows(2) {
        panels(w[0], w[1], res.x_panels, &gl, &mut out);
    }
    out
}

/// `∫_0^L g(h) h^{1−α} dh` for bounded `g`. With `h = L t^q`, `q = 2/(2−α)`,
/// this is `q L^{2−α} ∫_0^1 g(L t^q) t dt`, done on Gauss cells uniform in `t`
/// and split at the given interior breakpoints.
fn graded<G: Fn(f64) -> f64>(g: G, len: f64, alpha: f64, res: &Resolution, breaks: &[f64], gl: &(Vec<f64>, Vec<f64>)) -> f64 {
    let q = 2.0 / (2.0 - alpha);
    let n = res.h_cells;
    let mut edges: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    edges.extend(breaks.iter().filter(|&&b| b > 0.0 && b < len).map(|b| (b / len).powf(1.0 / q)));
    edges.sort_by(f64::total_cmp);
    let mut s = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        for (t, wt) in gl.0.iter().zip(&gl.1) {
            let t = c + r * t;
            // g only needs h > 0; near α = 2 the power underflows
            let h = (len * t.powf(q)).max(1e-150);
            s += r * wt * t * g(h);
        }
    }
    q * len.powf(2.0 - alpha) * s
}

/// `½∬_{S×S} F(x, y) ν(x−y)` for a symmetric `F` vanishing on the diagonal,
/// as `∫_S ∫_0^{hi−x} f(x, h) A h^{−1−α} dh dx` with `f(x, h) = F(x, x+h)`.
fn inner_double<F: Fn(f64, f64) -> f64>(u: &TestFunction, alpha: f64, res: &Resolution, f: F) -> Result<f64> {
    let a = levy_a(alpha)?;
    let (_, hi) = u.support();
    let gl = gauss_legendre(res.order);
    let kinks = u.kinks();
    let mut s = 0.0;
    for (x, wx) in outer_nodes(u, res) {
        let breaks: Vec<f64> = kinks.iter().map(|k| k - x).collect();
        let g = |h: f64| f(x, h) / (h * h);
        s += wx * a * graded(g, hi - x, alpha, res, &breaks, &gl);
    }
    Ok(s)
}

fn outer<G: Fn(f64) -> f64>(u: &TestFunction, res: &Resolution, g: G) -> f64 {
    outer_nodes(u, res).iter().map(|&(x, w)| w * g(x)).sum()
}

/// `(jump_term, killing_term)` of the Dirichlet form.
pub fn energy_direct(u: &TestFunction, alpha: f64) -> Result<(f64, f64)> {
    let b = breakdown_at(u, alpha, None, &Resolution::default())?;
    Ok((b.jump_term, b.killing_term))
}

/// `(hardy_term, weighted_jump_term)` of the ground-state representation.
pub fn energy_groundstate(u: &TestFunction, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    let b = breakdown_at(u, alpha, Some(beta), &Resolution::default())?;
    Ok((b.hardy_term, b.weighted_jump_term))
}

/// All four terms at a given resolution; the ground-state pair is zero when
/// `beta` is `None`.
pub fn breakdown_at(u: &TestFunction, alpha: f64, beta: Option<f64>, res: &Resolution) -> Result<FormBreakdown> {
    check_alpha(alpha)?;
    u.check()?;
    let p = beta.map(|b| StableParams::new(alpha, b)).transpose()?;
    if u.amplitude == 0.0 {
        return Ok(FormBreakdown::default());
    }
    let a = levy_a(alpha)?;
    let (lo, hi) = u.support();
    // ∫_{D∖S} ν(x−y) dy
    let out_mass = |x: f64| a / alpha * ((x - lo).powf(-alpha) - x.powf(-alpha) + (hi - x).powf(-alpha));
    let u2 = |x: f64| {
        let v = u.eval(x);
        v * v
    };
    let jump = inner_double(u, alpha, res, |x, h| u.increment(x, h).powi(2))? + outer(u, res, |x| u2(x) * out_mass(x));
    let potential = outer(u, res, |x| u2(x) * x.powf(-alpha));
    let mut b = FormBreakdown {
        jump_term: jump,
        killing_term: a / alpha * potential,
        ..Default::default()
    };
    if let Some(p) = p {
        let e = -p.lower_gap();
        let wt = |x: f64| x.powf(e);
        let cfg = QuadConfig::default().with_rel(1e-13);
        let mut err = None;
        let mut outside = |x: f64| -> f64 {
            let f = |y: f64| wt(y) * a * (x - y).abs().powf(-1.0 - alpha);
            let left = integrate(f, 0.0, lo, &SingularSpec::new().left(e.min(0.0)), &cfg);
            let right = integrate(f, hi, f64::INFINITY, &SingularSpec::new().decay(e - 1.0 - alpha), &cfg);
            match (left, right) {
                (Ok(l), Ok(r)) => l.value + r.value,
                (Err(x), _) | (_, Err(x)) => {
                    err = Some(x);
                    f64::NAN
                }
            }
        };
        let mut cross = 0.0;
        for (x, w) in outer_nodes(u, res) {
            let v = u2(x);
            if v > 0.0 {
                cross += w * v / wt(x) * outside(x);
            }
        }
        if let Some(x) = err {
            return Err(x);
        }
        b.hardy_term = kappa(&p) * potential;
        // u/w at x + h minus at x, split as (Δu)/w(x+h) + u(x)Δ(1/w)
        b.weighted_jump_term = inner_double(u, alpha, res, |x, h| {
            let (wx, wy) = (wt(x), wt(x + h));
            let inv_step = (-e * (h / x).ln_1p()).exp_m1() / wx;
            let d = u.increment(x, h) / wy + u.eval(x) * inv_step;
            d * d * wx * wy
        })? + cross;
    }
    Ok(b)
}

/// `|E(u,u) − (κ_β∫u²x^{−α} + weighted form)| / (1 + E(u,u))`.
pub fn hardy_identity_gap(u: &TestFunction, alpha: f64, beta: f64) -> Result<f64> {
    hardy_identity_gap_at(u, alpha, beta, &Resolution::default())
}

pub fn hardy_identity_gap_at(u: &TestFunction, alpha: f64, beta: f64, res: &Resolution) -> Result<f64> {
    Ok(breakdown_at(u, alpha, Some(beta), res)?.gap())
}

/// `(E(u,u), κ_{1/2}∫u²x^{−α})`; the sharp Hardy inequality says the first
/// dominates.
pub fn hardy_inequality_check(u: &TestFunction, alpha: f64) -> Result<(f64, f64)> {
    let b = breakdown_at(u, alpha, None, &Resolution::default())?;
    let bound = kappa_half(alpha)? * b.killing_term * alpha / levy_a(alpha)?;
    Ok((b.direct(), bound))
}
