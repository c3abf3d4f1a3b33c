//! Monte Carlo for the symmetric α-stable process killed on leaving `(0, ∞)`.
//!
//! Paths are advanced with a scale-adaptive Euler step: from `X` the next
//! time cell has length `h = dt·X^α`, so that
//!
//! `X' = X (1 + dt^{1/α} S)`,  `S` standard symmetric α-stable.
//!
//! The step count is then geometric (a step kills with probability
//! `P(S < −dt^{−1/α})` whatever `X` is) and the path is exactly scale
//! covariant in the start point. The Richardson scheme couples a walker with
//! step `dt/2` and one with step `dt` through the same stable draws: two fine
//! steps use `S₁, S₂`, the coarse step uses `(S₁ + S₂)/2^{1/α}`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{check_alpha, StableParams};
use crate::error::{Error, Result};
use crate::specfun::{gamma_ext, sin_pi};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Euler,
    EulerRichardson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub alpha: f64,
    pub x0: f64,
    pub dt: f64,
    pub t_max: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub scheme: Scheme,
}

/// Paths still alive at the horizon are re-run once with the horizon
/// multiplied by this factor.
pub const HORIZON_RAISE: f64 = 1e8;
/// Censored fraction above which the horizon is raised.
pub const CENSOR_LIMIT: f64 = 1e-3;
/// Upper bound on the expected number of stable draws of one run.
pub const MAX_EXPECTED_DRAWS: f64 = 2e11;

impl SimConfig {
    /// Defaults: `dt = 1e−3`, `1e5` paths, seed 0, Richardson scheme and
    /// horizon `1e4·x0^α`.
    pub fn new(alpha: f64, x0: f64) -> Result<Self> {
        let c = SimConfig {
            alpha,
            x0,
            dt: 1e-3,
            t_max: 1e4 * x0.powf(alpha),
            n_paths: 100_000,
            seed: 0,
            scheme: Scheme::EulerRichardson,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_paths(mut self, n: usize) -> Self {
        self.n_paths = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    /// Same configuration started from `x0`, horizon rescaled.
    pub fn at(mut self, x0: f64) -> Self {
        self.t_max *= (x0 / self.x0).powf(self.alpha);
        self.x0 = x0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.x0 > 0.0) {
            return Err(Error::domain("x0", self.x0, "(0, inf)"));
        }
        if !(self.dt > 0.0 && self.dt < 1.0) {
            return Err(Error::domain("dt", self.dt, "(0, 1)"));
        }
        if !(self.t_max >= self.dt) {
            return Err(Error::domain("t_max", self.t_max, "[dt, inf)"));
        }
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be positive".into()));
        }
        Ok(())
    }

    /// Expected number of stable draws, from the per-step kill rate.
    pub fn expected_draws(&self) -> f64 {
        let per_path = 1.0 / kill_probability(self.alpha, self.dt);
        let factor = match self.scheme {
            Scheme::Euler => 1.0,
            Scheme::EulerRichardson => 2.0,
        };
        self.n_paths as f64 * per_path * factor
    }

    fn check_budget(&self) -> Result<()> {
        let d = self.expected_draws();
        if d > MAX_EXPECTED_DRAWS {
            return Err(Error::McBudgetExceeded(format!(
                "about {d:.2e} stable draws expected, limit {MAX_EXPECTED_DRAWS:.0e}"
            )));
        }
        Ok(())
    }
}

/// Asymptotic `P(S < −u) ≈ c u^{−α}` of the per-step kill probability,
/// `c = Γ(α) sin(πα/2)/π`.
fn kill_probability(alpha: f64, dt: f64) -> f64 {
    let c = gamma_ext(alpha).map(|g| g * sin_pi(0.5 * alpha) / PI).unwrap_or(1.0);
    (c * dt).min(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    Mean,
    MedianOfMeans,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
    pub ci95: (f64, f64),
    pub reduction: Reduction,
    /// Fraction of paths still alive at the (raised) horizon.
    pub censored: f64,
}

impl McEstimate {
    fn new(mean: f64, stderr: f64, n: usize, reduction: Reduction) -> Self {
        McEstimate {
            mean,
            stderr,
            n,
            ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            reduction,
            censored: 0.0,
        }
    }

    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.stderr
    }

    pub fn covers(&self, target: f64, k: f64) -> bool {
        self.z_score(target).abs() <= k
    }

    /// `|a − b|` in units of the combined standard error.
    pub fn z_between(&self, other: &McEstimate) -> f64 {
        (self.mean - other.mean) / self.stderr.hypot(other.stderr)
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.mean *= s;
        self.stderr *= s.abs();
        self.ci95 = (self.mean - 1.96 * self.stderr, self.mean + 1.96 * self.stderr);
        self
    }
}

/// One standard symmetric α-stable variate (characteristic function
/// `e^{−|ξ|^α}`) by the Chambers–Mallows–Stuck transform.
pub fn sample_standard_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let v = PI * (rng.gen::<f64>() - 0.5);
    if alpha == 1.0 {
        return v.tan();
    }
    // W ~ Exp(1); 1 − U avoids ln 0
    let w = -(1.0 - rng.gen::<f64>()).ln();
    let r = 1.0 / alpha;
    let e = (r - 1.0) * ((v - alpha * v).cos().ln() - w.ln()) - r * v.cos().ln();
    (alpha * v).sin() * e.exp()
}

/// `dt^{1/α} S`: the increment of the free process over time `dt`.
pub fn sample_stable_increment<R: Rng + ?Sized>(alpha: f64, dt: f64, rng: &mut R) -> f64 {
    dt.powf(1.0 / alpha) * sample_standard_stable(alpha, rng)
}

pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(path);
    r
}

/// Per-path bookkeeping of a functional.
trait Observer {
    /// The path sits at `x = e^{lx}` on the time cell `[t, t + h)`.
    fn cell(&mut self, t: f64, h: f64, lx: f64);
    /// The path moved to `x = e^{lx}` at time `t`; `false` stops it.
    fn moved(&mut self, _t: f64, _lx: f64) -> bool {
        true
    }
    fn killed(&mut self, _t: f64, _x: f64) {}
    fn values(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Running,
    Done,
    Censored,
}

struct Walker {
    lx: f64,
    t: f64,
    dt: f64,
    scale: f64,
    status: Status,
}

impl Walker {
    fn new(x0: f64, dt: f64, alpha: f64) -> Self {
        Walker {
            lx: x0.ln(),
            t: 0.0,
            dt,
            scale: dt.powf(1.0 / alpha),
            status: Status::Running,
        }
    }

    fn step<O: Observer>(&mut self, s: f64, alpha: f64, t_max: f64, obs: &mut O) {
        if self.status != Status::Running {
            return;
        }
        if self.t >= t_max {
            self.status = Status::Censored;
            return;
        }
        let h = self.dt * (alpha * self.lx).exp();
        obs.cell(self.t, h, self.lx);
        let r = self.scale * s;
        self.t += h;
        if r <= -1.0 {
            obs.killed(self.t, self.lx.exp() * (1.0 + r));
            self.status = Status::Done;
        } else {
            self.lx += r.ln_1p();
            if !obs.moved(self.t, self.lx) {
                self.status = Status::Done;
            }
        }
    }
}

struct PathOut {
    values: Vec<f64>,
    censored: bool,
}

fn run_path<O: Observer>(cfg: &SimConfig, t_max: f64, index: u64, make: &(impl Fn() -> O + Sync)) -> PathOut {
    let mut rng = path_rng(cfg.seed, index);
    let a = cfg.alpha;
    match cfg.scheme {
        Scheme::Euler => {
            let mut o = make();
            let mut w = Walker::new(cfg.x0, cfg.dt, a);
            while w.status == Status::Running {
                let s = sample_standard_stable(a, &mut rng);
                w.step(s, a, t_max, &mut o);
            }
            PathOut {
                values: o.values(),
                censored: w.status == Status::Censored,
            }
        }
        Scheme::EulerRichardson => {
            let (mut of, mut oc) = (make(), make());
            let mut fine = Walker::new(cfg.x0, 0.5 * cfg.dt, a);
            let mut coarse = Walker::new(cfg.x0, cfg.dt, a);
            let mix = 0.5f64.powf(1.0 / a);
            while fine.status == Status::Running || coarse.status == Status::Running {
                let s1 = sample_standard_stable(a, &mut rng);
                let s2 = sample_standard_stable(a, &mut rng);
                fine.step(s1, a, t_max, &mut of);
                fine.step(s2, a, t_max, &mut of);
                coarse.step(mix * (s1 + s2), a, t_max, &mut oc);
            }
            let (vf, vc) = (of.values(), oc.values());
            PathOut {
                values: vf.iter().zip(&vc).map(|(f, c)| 2.0 * f - c).collect(),
                censored: fine.status == Status::Censored || coarse.status == Status::Censored,
            }
        }
    }
}

/// Runs all paths, re-running censored ones once with a raised horizon.
/// Returns per-path values (in path order) and the censored fraction.
fn run_paths<O: Observer>(cfg: &SimConfig, make: impl Fn() -> O + Sync) -> Result<(Vec<Vec<f64>>, f64)> {
    cfg.validate()?;
    cfg.check_budget()?;
    let mut out: Vec<PathOut> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| run_path(cfg, cfg.t_max, i, &make))
        .collect();
    let count = |o: &[PathOut]| o.iter().filter(|p| p.censored).count();
    if count(&out) as f64 > CENSOR_LIMIT * cfg.n_paths as f64 {
        let raised = cfg.t_max * HORIZON_RAISE;
        out.par_iter_mut().enumerate().filter(|(_, p)| p.censored).for_each(|(i, p)| {
            *p = run_path(cfg, raised, i as u64, &make);
        });
    }
    let censored = count(&out) as f64 / cfg.n_paths as f64;
    Ok((out.into_iter().map(|p| p.values).collect(), censored))
}

/// Fixed-order pairwise sum.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

const MOM_BLOCKS: usize = 16;
const KURTOSIS_LIMIT: f64 = 10.0;

fn kurtosis(v: &[f64], mean: f64) -> f64 {
    let n = v.len() as f64;
    let d2: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    let m2 = pairwise_sum(&d2) / n;
    let d4: Vec<f64> = d2.iter().map(|d| d * d).collect();
    let m4 = pairwise_sum(&d4) / n;
    if m2 > 0.0 {
        m4 / (m2 * m2)
    } else {
        0.0
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn sample_sd(v: &[f64], mean: f64) -> f64 {
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    let d2: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    (pairwise_sum(&d2) / (n - 1) as f64).sqrt()
}

/// Estimate of `Σ num / Σ den` with delta-method standard error; falls back to
/// the median of 16 block ratios when the linearised residuals are heavy tailed.
pub fn ratio_estimate(num: &[f64], den: &[f64]) -> McEstimate {
    let n = num.len();
    let r = pairwise_sum(num) / pairwise_sum(den);
    let dbar = pairwise_sum(den) / n as f64;
    let psi: Vec<f64> = num.iter().zip(den).map(|(a, b)| (a - r * b) / dbar).collect();
    let sd = sample_sd(&psi, 0.0);
    if n >= 4 * MOM_BLOCKS && kurtosis(&psi, 0.0) > KURTOSIS_LIMIT {
        let blocks: Vec<f64> = (0..MOM_BLOCKS)
            .map(|k| {
                let (lo, hi) = (k * n / MOM_BLOCKS, (k + 1) * n / MOM_BLOCKS);
                pairwise_sum(&num[lo..hi]) / pairwise_sum(&den[lo..hi])
            })
            .collect();
        let m = median(blocks.clone());
        let mean_b = pairwise_sum(&blocks) / MOM_BLOCKS as f64;
        // the median of normal block means has variance π/2 · σ²_block / B
        let se = (PI / 2.0).sqrt() * sample_sd(&blocks, mean_b) / (MOM_BLOCKS as f64).sqrt();
        return McEstimate::new(m, se, n, Reduction::MedianOfMeans);
    }
    McEstimate::new(r, sd / (n as f64).sqrt(), n, Reduction::Mean)
}

/// Sample mean with the same heavy-tail fallback as [`ratio_estimate`].
pub fn mean_estimate(v: &[f64]) -> McEstimate {
    let ones = vec![1.0; v.len()];
    ratio_estimate(v, &ones)
}

/// `E^x ∫_0^τ t^a X_t^{−γ} dt` for several `(a, γ)` at once; cells are
/// integrated exactly in `t`.
struct TimeWeighted {
    exps: Vec<(f64, f64)>,
    acc: Vec<f64>,
}

/// `∫_t^{t+h} s^a ds`
fn cell_power(t: f64, h: f64, a: f64) -> f64 {
    let e = a + 1.0;
    if t == 0.0 {
        return h.powf(e) / e;
    }
    t.powf(e) * (e * (h / t).ln_1p()).exp_m1() / e
}

impl Observer for TimeWeighted {
    fn cell(&mut self, t: f64, h: f64, lx: f64) {
        for (acc, &(a, g)) in self.acc.iter_mut().zip(&self.exps) {
            *acc += if a == 0.0 { h } else { cell_power(t, h, a) } * (-g * lx).exp();
        }
    }
    fn values(&self) -> Vec<f64> {
        self.acc.clone()
    }
}

/// Occupation functional up to the first passage above `level`, with the
/// scaled weight `(X_σ/x0)^{w}` of the overshoot.
///
/// A step that lands above `FAR·level` has `S` deep in its Pareto tail; its
/// weight is replaced by the conditional mean under that tail, which removes
/// the heavy tail of the overshoot weight.
struct Renewal {
    alpha: f64,
    gamma: f64,
    /// `ln` of the level and of the start point
    level: f64,
    x0: f64,
    w: f64,
    /// `ln x` before the last move
    prev: f64,
    a: f64,
    b: f64,
}

/// Overshoots beyond this multiple of the level use the tail expectation.
pub const FAR: f64 = 64.0;

/// `E[(1 + cP)^w]` for `P` Pareto with index `α` on `[1, ∞)`, `c > 1`, `w < α`.
fn pareto_moment(alpha: f64, w: f64, c: f64) -> f64 {
    let mut s = 0.0;
    let mut binom = 1.0;
    for j in 0..60 {
        let jf = j as f64;
        let t = binom * c.powf(w - jf) * alpha / (alpha - w + jf);
        s += t;
        if t.abs() < 1e-17 * s.abs() {
            break;
        }
        binom *= (w - jf) / (jf + 1.0);
    }
    s
}

impl Observer for Renewal {
    fn cell(&mut self, _t: f64, h: f64, lx: f64) {
        self.a += h * (-self.gamma * lx).exp();
        self.prev = lx;
    }
    fn moved(&mut self, _t: f64, lx: f64) -> bool {
        if lx > self.level {
            let far = self.level + FAR.ln();
            self.b = if self.w > 0.0 && lx > far {
                // x(1 + εS) > FAR·L  ⇔  εS > c = FAR·L/x − 1
                let c = (far - self.prev).exp() - 1.0;
                (self.w * (self.prev - self.x0)).exp() * pareto_moment(self.alpha, self.w, c)
            } else {
                (self.w * (lx - self.x0)).exp()
            };
            return false;
        }
        true
    }
    fn values(&self) -> Vec<f64> {
        vec![self.a, 1.0 - self.b]
    }
}

/// Renewal level as a multiple of the start point.
pub const RENEWAL_LEVEL: f64 = 4.0;

/// `E^x ∫_0^τ X_t^{−β−α/2} dt`, target `x^{α/2−β}/κ_β`.
///
/// With `σ` the first passage above `R x0`, the strong Markov property and
/// scaling give `m = E∫_0^{σ∧τ} + E[(X_σ/x0)^{α/2−β}; σ < τ]·m`, which is solved
/// for `m`. Paths are short and the overshoot weight has finite variance.
pub fn estimate_occupation(alpha: f64, beta: f64, cfg: &SimConfig) -> Result<McEstimate> {
    let p = StableParams::new(alpha, beta)?;
    check_cfg_alpha(cfg, alpha)?;
    occupation_renewal(cfg, beta + p.half_alpha(), -p.lower_gap())
}

fn check_cfg_alpha(cfg: &SimConfig, alpha: f64) -> Result<()> {
    if cfg.alpha != alpha {
        return Err(Error::Config(format!("config alpha {} differs from {}", cfg.alpha, alpha)));
    }
    Ok(())
}

fn occupation_renewal(cfg: &SimConfig, gamma: f64, w: f64) -> Result<McEstimate> {
    let make = || Renewal {
        alpha: cfg.alpha,
        gamma,
        prev: cfg.x0.ln(),
        level: (RENEWAL_LEVEL * cfg.x0).ln(),
        x0: cfg.x0.ln(),
        w,
        a: 0.0,
        b: 0.0,
    };
    let (vals, censored) = run_paths(cfg, make)?;
    let num: Vec<f64> = vals.iter().map(|v| v[0]).collect();
    let den: Vec<f64> = vals.iter().map(|v| v[1]).collect();
    let mut e = ratio_estimate(&num, &den);
    e.censored = censored;
    Ok(e)
}

/// `E^x ∫_0^τ X_t^{−α} dt`, target `π/(Γ(α) sin(πα/2))` for every `x`.
pub fn estimate_beta_eq_alpha_half(alpha: f64, cfg: &SimConfig) -> Result<McEstimate> {
    estimate_occupation(alpha, 0.5 * alpha, cfg)
}

/// Plain path average of `∫_0^{τ∧T} t^a X_t^{−γ} dt`.
pub fn weighted_time_functional(alpha: f64, a: f64, gamma: f64, cfg: &SimConfig) -> Result<McEstimate> {
    check_alpha(alpha)?;
    check_cfg_alpha(cfg, alpha)?;
    if !(a > -1.0) {
        return Err(Error::domain("t exponent", a, "(-1, inf)"));
    }
    if !(gamma > -1.0 - 0.5 * alpha) {
        return Err(Error::domain("x exponent", gamma, "(-1-alpha/2, inf)"));
    }
    if a == 0.0 && gamma > 0.5 * alpha && gamma < 1.0 + 0.5 * alpha {
        return occupation_renewal(cfg, gamma, alpha - gamma);
    }
    let (vals, censored) = run_paths(cfg, || TimeWeighted {
        exps: vec![(a, gamma)],
        acc: vec![0.0],
    })?;
    let v: Vec<f64> = vals.iter().map(|v| v[0]).collect();
    let mut e = mean_estimate(&v);
    e.censored = censored;
    Ok(e)
}

/// Records survival indicators and `X_t^{−γ}` on a time grid.
struct Survival<'a> {
    grid: &'a [f64],
    gamma: f64,
    next: usize,
    alive: Vec<f64>,
}

impl Observer for Survival<'_> {
    fn cell(&mut self, t: f64, h: f64, lx: f64) {
        while self.next < self.grid.len() && self.grid[self.next] < t + h {
            if self.grid[self.next] >= t {
                self.alive[self.next] = (-self.gamma * lx).exp();
            }
            self.next += 1;
        }
    }
    fn moved(&mut self, _t: f64, _lx: f64) -> bool {
        self.next < self.grid.len()
    }
    fn values(&self) -> Vec<f64> {
        self.alive.clone()
    }
}

/// `P^x(τ > t)` on an increasing grid.
pub fn estimate_survival(alpha: f64, x0: f64, t_grid: &[f64], cfg: &SimConfig) -> Result<Vec<McEstimate>> {
    estimate_survival_weighted(alpha, x0, 0.0, t_grid, cfg)
}

/// `E^x[X_t^{−γ}; τ > t]` on an increasing grid; `γ = 0` is the survival
/// probability.
pub fn estimate_survival_weighted(alpha: f64, x0: f64, gamma: f64, t_grid: &[f64], cfg: &SimConfig) -> Result<Vec<McEstimate>> {
    check_cfg_alpha(cfg, alpha)?;
    if t_grid.is_empty() || t_grid[0] <= 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("time grid must be positive and increasing".into()));
    }
    let last = *t_grid.last().unwrap();
    let run = cfg.at(x0).with_t_max(last.max(cfg.dt) * 2.0);
    let (vals, _) = run_paths(&run, || Survival {
        grid: t_grid,
        gamma,
        next: 0,
        alive: vec![0.0; t_grid.len()],
    })?;
    Ok((0..t_grid.len())
        .map(|j| {
            let v: Vec<f64> = vals.iter().map(|p| p[j]).collect();
            mean_estimate(&v)
        })
        .collect())
}

struct Exit {
    x: f64,
    t: f64,
}

impl Observer for Exit {
    fn cell(&mut self, _t: f64, _h: f64, _lx: f64) {}
    fn killed(&mut self, t: f64, x: f64) {
        self.x = x;
        self.t = t;
    }
    fn values(&self) -> Vec<f64> {
        vec![self.x, self.t]
    }
}

/// Exit positions and exit times of the Euler walker.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExitSample {
    /// Sorted exit positions, all `≤ 0`.
    pub positions: Vec<f64>,
    /// Exit times in path order.
    pub times: Vec<f64>,
    pub censored: f64,
}

/// Sorted sample of `X_τ` (Richardson does not apply to a distribution; the
/// Euler walker with `cfg.dt` is used).
pub fn estimate_exit_law(alpha: f64, x0: f64, cfg: &SimConfig) -> Result<ExitSample> {
    check_cfg_alpha(cfg, alpha)?;
    let run = cfg.at(x0).with_scheme(Scheme::Euler).with_t_max(f64::INFINITY);
    let (vals, censored) = run_paths(&run, || Exit { x: f64::NAN, t: f64::NAN })?;
    let mut positions: Vec<f64> = vals.iter().map(|v| v[0]).collect();
    positions.sort_by(f64::total_cmp);
    Ok(ExitSample {
        positions,
        times: vals.iter().map(|v| v[1]).collect(),
        censored,
    })
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Least-squares slope and intercept of `y` on `x`.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Log-log slope of the survival curve.
pub fn survival_slope(t_grid: &[f64], est: &[McEstimate]) -> f64 {
    let lx: Vec<f64> = t_grid.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = est.iter().map(|e| e.mean.ln()).collect();
    ols(&lx, &ly).0
}

/// Per-path values of `∫ t^a X^{−γ}` and `∫ t^{a−1} X^{−γ}` for the ground state.
pub(crate) fn groundstate_paths(a: f64, gamma: f64, cfg: &SimConfig) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let (vals, censored) = run_paths(cfg, || TimeWeighted {
        exps: vec![(a, gamma), (a - 1.0, gamma)],
        acc: vec![0.0; 2],
    })?;
    Ok((vals.iter().map(|v| v[0]).collect(), vals.iter().map(|v| v[1]).collect(), censored))
}
