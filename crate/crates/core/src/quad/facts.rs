//! Quadrature checks of the Beta-type integral identities behind the
//! constants `Ĉ`, `C̃`, `C̄`.
//!
//! Each identity integrates a power kernel against `w^{−β−α/2}` over `(0, ∞)`:
//!
//! | fact | integrand | closed form |
//! |------|-----------|-------------|
//! | `PlainAbs`  | `|1−w|^{α−1} w^{−β−α/2}` | `Ĉ` |
//! | `PlainPlus` | `(1+w)^{α−1} w^{−β−α/2}` | `C̃` |
//! | `PowerAbs`  | `(|1−w|^{α−1} − w^{α−1}) w^{−β−α/2}` | `Ĉ` |
//! | `PowerPlus` | `((1+w)^{α−1} − w^{α−1}) w^{−β−α/2}` | `C̃` |
//! | `UnitAbs`   | `(|1−w|^{α−1} − 1) w^{−β−α/2}` | `Ĉ` |
//! | `UnitPlus`  | `((1+w)^{α−1} − 1) w^{−β−α/2}` | `C̃` |
//! | `LogAbs`    | `w^{−β−1/2} ln(|1−w|/w)` (α = 1) | `π sin(πβ) / ((1/2−β) cos(πβ))` |
//! | `LogPlus`   | `w^{−β−1/2} ln(1+1/w)` (α = 1) | `π / ((1/2−β) cos(πβ))` |
//!
//! The unit-compensated integrals diverge at infinity when `β < α/2`; there
//! the value is the finite part, obtained by subtracting `w^{α/2−β−1}` on
//! `[1, ∞)` and adding back its continued integral `−1/(α/2−β)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{integrate_nodes, Node, QuadConfig, QuadResult, SingularSpec};
use crate::constants::{bar_c, hat_c, levy_a, tilde_c, StableParams};
use crate::error::{Error, Result};
use crate::specfun::{beta_ext, cos_pi, is_pole, sin_pi};

/// Distance to a degenerate line below which checks are skipped.
pub const SKIP_BAND: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fact {
    PlainAbs,
    PlainPlus,
    PowerAbs,
    PowerPlus,
    UnitAbs,
    UnitPlus,
    LogAbs,
    LogPlus,
}

impl Fact {
    pub const ALL: [Fact; 8] = [
        Fact::PlainAbs,
        Fact::PlainPlus,
        Fact::PowerAbs,
        Fact::PowerPlus,
        Fact::UnitAbs,
        Fact::UnitPlus,
        Fact::LogAbs,
        Fact::LogPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fact::PlainAbs => "plain-abs",
            Fact::PlainPlus => "plain-plus",
            Fact::PowerAbs => "power-abs",
            Fact::PowerPlus => "power-plus",
            Fact::UnitAbs => "unit-abs",
            Fact::UnitPlus => "unit-plus",
            Fact::LogAbs => "log-abs",
            Fact::LogPlus => "log-plus",
        }
    }

    fn is_abs(self) -> bool {
        matches!(self, Fact::PlainAbs | Fact::PowerAbs | Fact::UnitAbs | Fact::LogAbs)
    }

    /// Whether `(α, β)` lies in the window where the identity holds.
    pub fn in_window(self, alpha: f64, beta: f64) -> bool {
        let h = 0.5 * alpha;
        let open = |x: f64, lo: f64, hi: f64| x > lo && x < hi;
        match self {
            Fact::PlainAbs | Fact::PlainPlus => open(alpha, 0.0, 1.0) && open(beta, h, 1.0 - h),
            Fact::PowerAbs | Fact::PowerPlus => {
                (open(alpha, 0.0, 1.0) && open(beta, 0.0, h)) || (open(alpha, 1.0, 2.0) && open(beta, 0.0, 1.0 - h))
            }
            Fact::UnitAbs | Fact::UnitPlus => open(alpha, 1.0, 2.0) && open(beta, 1.0 - h, 1.0),
            Fact::LogAbs | Fact::LogPlus => alpha == 1.0 && open(beta, 0.0, 0.5),
        }
    }

    /// A short description of the window, for error messages.
    pub fn window(self) -> &'static str {
        match self {
            Fact::PlainAbs | Fact::PlainPlus => "alpha in (0,1), beta in (alpha/2, 1-alpha/2)",
            Fact::PowerAbs | Fact::PowerPlus => {
                "alpha in (0,1), beta in (0, alpha/2) or alpha in (1,2), beta in (0, 1-alpha/2)"
            }
            Fact::UnitAbs | Fact::UnitPlus => "alpha in (1,2), beta in (1-alpha/2, 1)",
            Fact::LogAbs | Fact::LogPlus => "alpha = 1, beta in (0, 1/2)",
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fact::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or(Error::Config(format!("unknown integral identity '{s}'")))
    }
}

/// Quadrature value and closed form of one identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub lhs: f64,
    pub rhs: f64,
    pub quad: QuadResult,
}

impl Check {
    pub fn rel_defect(&self) -> f64 {
        (self.lhs - self.rhs).abs() / (1.0 + self.rhs.abs())
    }
}

fn near_degenerate(p: &StableParams) -> Option<&'static str> {
    if p.lower_gap().abs() < SKIP_BAND {
        Some("beta within 1e-4 of alpha/2")
    } else if p.upper_gap().abs() < SKIP_BAND {
        Some("beta + alpha/2 within 1e-4 of 1")
    } else {
        None
    }
}

/// `|1 − w|^{e}` or `(1 + w)^{e}` relative to `w^{e}` for large `w`:
/// returns `(1 ∓ 1/w)^{e} − 1` without cancellation.
fn rel_excess(w: f64, e: f64, abs: bool) -> f64 {
    let s = if abs { -1.0 / w } else { 1.0 / w };
    (e * s.ln_1p()).exp_m1()
}

/// `|1−w|` (exact near `w = 1`) or `1 + w`.
fn kernel_base(n: Node, abs: bool) -> f64 {
    if abs {
        n.dist(1.0)
    } else {
        1.0 + n.x
    }
}

/// Integrand of a power-type identity, evaluated without cancellation.
fn power_integrand(fact: Fact, alpha: f64, beta: f64, fp: bool) -> impl Fn(Node) -> f64 {
    let abs = fact.is_abs();
    let e = alpha - 1.0;
    let s = -beta - 0.5 * alpha;
    move |n: Node| {
        let w = n.x;
        let ws = w.powf(s);
        let core = match fact {
            Fact::PlainAbs | Fact::PlainPlus => kernel_base(n, abs).powf(e),
            Fact::PowerAbs | Fact::PowerPlus => {
                if w > 2.0 {
                    w.powf(e) * rel_excess(w, e, abs)
                } else {
                    kernel_base(n, abs).powf(e) - w.powf(e)
                }
            }
            _ => {
                if w < 0.5 {
                    // (1 ∓ w)^e − 1
                    let t = if abs { -w } else { w };
                    (e * t.ln_1p()).exp_m1()
                } else if w > 2.0 {
                    // w^e (1 ∓ 1/w)^e − 1, optionally minus the divergent w^e
                    let we = w.powf(e);
                    let r = we * rel_excess(w, e, abs);
                    if fp {
                        r - 1.0
                    } else {
                        r + we - 1.0
                    }
                } else {
                    let v = kernel_base(n, abs).powf(e) - 1.0;
                    if fp && w >= 1.0 {
                        v - w.powf(e)
                    } else {
                        v
                    }
                }
            }
        };
        core * ws
    }
}

fn log_integrand(fact: Fact, beta: f64) -> impl Fn(Node) -> f64 {
    let s = -beta - 0.5;
    move |n: Node| {
        let w = n.x;
        let l = match fact {
            Fact::LogAbs => {
                if w < 1.0 {
                    (-w).ln_1p() - w.ln()
                } else if w > 2.0 {
                    (-1.0 / w).ln_1p()
                } else {
                    n.dist(1.0).ln() - w.ln()
                }
            }
            _ => {
                if w < 1.0 {
                    w.ln_1p() - w.ln()
                } else {
                    (1.0 / w).ln_1p()
                }
            }
        };
        w.powf(s) * l
    }
}

/// Closed form of a log identity at `α = 1`.
pub fn log_closed_form(fact: Fact, beta: f64) -> f64 {
    let base = PI / ((0.5 - beta) * cos_pi(beta));
    match fact {
        Fact::LogAbs => base * sin_pi(beta),
        _ => base,
    }
}

/// Quadrature of the selected identity against its closed form.
pub fn fact_check(fact: Fact, p: &StableParams, cfg: &QuadConfig) -> Result<Check> {
    let (alpha, beta) = (p.alpha, p.beta);
    if !fact.in_window(alpha, beta) {
        return Err(Error::domain("(alpha, beta)", beta, fact.window()));
    }
    if let Some(reason) = near_degenerate(p) {
        return Err(Error::DegenerateParams { alpha, beta, reason });
    }
    let h = 0.5 * alpha;
    let e = alpha - 1.0;
    let lead = -beta - h;
    match fact {
        Fact::LogAbs | Fact::LogPlus => {
            let mut spec = SingularSpec::new().left(lead).decay(lead - 1.0).with_log();
            if fact == Fact::LogAbs {
                spec = spec.at(1.0, 0.0);
            }
            let quad = integrate_nodes(log_integrand(fact, beta), 0.0, f64::INFINITY, &spec, cfg)?;
            Ok(Check {
                lhs: quad.value,
                rhs: log_closed_form(fact, beta),
                quad,
            })
        }
        _ => {
            let rhs = if fact.is_abs() { hat_c(p)? } else { tilde_c(p)? };
            let (left, decay) = match fact {
                Fact::PlainAbs | Fact::PlainPlus => (lead, e + lead),
                Fact::PowerAbs | Fact::PowerPlus => (lead.min(e + lead), e - 1.0 + lead),
                _ => (1.0 + lead, (e - 1.0 + lead).max(lead)),
            };
            // divergent at infinity: take the finite part
            let fp = matches!(fact, Fact::UnitAbs | Fact::UnitPlus) && e + lead >= -1.0;
            let decay = if matches!(fact, Fact::UnitAbs | Fact::UnitPlus) && !fp {
                e + lead
            } else {
                decay
            };
            let mut spec = SingularSpec::new().left(left).decay(decay);
            match fact {
                Fact::PowerAbs | Fact::PowerPlus => spec = spec.left_also(lead.max(e + lead)),
                Fact::UnitAbs | Fact::UnitPlus => spec = spec.decay_also(e - 1.0 + lead).decay_also(lead),
                _ => {}
            }
            if fact.is_abs() {
                spec = spec.at(1.0, e.min(0.0));
            } else if fp {
                spec = spec.at(1.0, 0.0);
            }
            let quad = integrate_nodes(power_integrand(fact, alpha, beta, fp), 0.0, f64::INFINITY, &spec, cfg)?;
            let lhs = if fp { quad.value - 1.0 / (h - beta) } else { quad.value };
            Ok(Check { lhs, rhs, quad })
        }
    }
}

/// `∫_0^1 s^{a−1}((1−s)^{b−1} − 1) ds` against `−1/a + B(a, b)`.
pub fn lemma21_check(a: f64, b: f64, cfg: &QuadConfig) -> Result<Check> {
    if !(a > -1.0 && a < 0.0) {
        return Err(Error::domain("a", a, "(-1, 0)"));
    }
    if !(b > 0.0) {
        return Err(Error::domain("b", b, "(0, inf)"));
    }
    if is_pole(a + b) {
        return Err(Error::PoleArgument(a + b));
    }
    let f = move |n: Node| {
        let bracket = if n.anchor == 1.0 {
            n.offset.abs().powf(b - 1.0) - 1.0
        } else {
            ((b - 1.0) * (-n.x).ln_1p()).exp_m1()
        };
        n.x.powf(a - 1.0) * bracket
    };
    let spec = SingularSpec::new().left(a).right((b - 1.0).min(0.0));
    let quad = integrate_nodes(f, 0.0, 1.0, &spec, cfg)?;
    Ok(Check {
        lhs: quad.value,
        rhs: -1.0 / a + beta_ext(a, b)?,
        quad,
    })
}

/// `A_α ∫_0^∞ (1+z)^{−1−α} z^{α/2−β} dz` against `C̄`.
pub fn bar_c_quadrature(p: &StableParams, cfg: &QuadConfig) -> Result<Check> {
    let (alpha, beta) = (p.alpha, p.beta);
    let s = 0.5 * alpha - beta;
    let f = move |z: Node| (1.0 + z.x).powf(-1.0 - alpha) * z.x.powf(s);
    let spec = SingularSpec::new().left(s.min(0.0)).decay(s - 1.0 - alpha);
    let quad = integrate_nodes(f, 0.0, f64::INFINITY, &spec, cfg)?;
    Ok(Check {
        lhs: levy_a(alpha)? * quad.value,
        rhs: bar_c(p)?,
        quad,
    })
}

/// The log-abs integral computed directly and after the substitution `w = 1/x`,
/// which turns it into `∫_0^∞ x^{β−3/2} ln|1−x| dx`.
pub fn substitution_pair(beta: f64, cfg: &QuadConfig) -> Result<(f64, f64)> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::domain("beta", beta, "(0, 1/2)"));
    }
    let p = StableParams::new(1.0, beta)?;
    let direct = fact_check(Fact::LogAbs, &p, cfg)?.lhs;
    let f = move |n: Node| {
        let x = n.x;
        let l = if x < 0.5 { (-x).ln_1p() } else { n.dist(1.0).ln() };
        x.powf(beta - 1.5) * l
    };
    let spec = SingularSpec::new()
        .left(beta - 0.5)
        .at(1.0, 0.0)
        .decay(beta - 1.5)
        .with_log();
    let sub = integrate_nodes(f, 0.0, f64::INFINITY, &spec, cfg)?;
    Ok((direct, sub.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    fn p(a: f64, b: f64) -> StableParams {
        StableParams::new(a, b).unwrap()
    }

    #[test]
    fn plain_abs_example() {
        let c = fact_check(Fact::PlainAbs, &p(0.5, 0.5), &cfg()).unwrap();
        assert!((c.rhs - 10.488_230_217_168_479).abs() < 1e-12);
        assert!(c.rel_defect() < 1e-9, "{c:?}");
    }

    #[test]
    fn log_abs_example() {
        let c = fact_check(Fact::LogAbs, &p(1.0, 0.25), &cfg()).unwrap();
        assert!((c.rhs - 4.0 * PI).abs() < 1e-12);
        assert!(c.rel_defect() < 1e-9, "{c:?}");
    }

    #[test]
    fn unit_plus_finite_part_example() {
        let c = fact_check(Fact::UnitPlus, &p(1.5, 0.5), &cfg()).unwrap();
        assert!((c.rhs + 6.777_704_678_351_833).abs() < 1e-11);
        assert!(c.rel_defect() < 1e-9, "{c:?}");
    }

    #[test]
    fn every_fact_at_an_interior_point() {
        let pts = [
            (Fact::PlainAbs, 0.4, 0.5),
            (Fact::PlainPlus, 0.4, 0.5),
            (Fact::PowerAbs, 0.6, 0.1),
            (Fact::PowerPlus, 0.6, 0.1),
            (Fact::PowerAbs, 1.4, 0.2),
            (Fact::PowerPlus, 1.4, 0.2),
            (Fact::UnitAbs, 1.4, 0.9),
            (Fact::UnitPlus, 1.4, 0.9),
            (Fact::UnitAbs, 1.6, 0.5),
            (Fact::LogPlus, 1.0, 0.1),
        ];
        for (f, a, b) in pts {
            let c = fact_check(f, &p(a, b), &cfg()).unwrap();
            assert!(c.rel_defect() < 1e-8, "{f} ({a},{b}): {c:?}");
        }
    }

    #[test]
    fn window_and_degeneracy_errors() {
        assert!(matches!(fact_check(Fact::PlainAbs, &p(1.5, 0.5), &cfg()), Err(Error::Domain { .. })));
        assert!(matches!(fact_check(Fact::LogAbs, &p(0.9, 0.2), &cfg()), Err(Error::Domain { .. })));
        assert!(matches!(
            fact_check(Fact::PowerAbs, &p(0.5, 0.25 - 5e-5), &cfg()),
            Err(Error::DegenerateParams { .. })
        ));
        assert_eq!("unit-plus".parse::<Fact>().unwrap(), Fact::UnitPlus);
        assert!("nope".parse::<Fact>().is_err());
    }

    #[test]
    fn beta_remainder_examples() {
        let c = lemma21_check(-0.5, 2.0, &cfg()).unwrap();
        assert!((c.lhs + 2.0).abs() < 1e-9 && (c.rhs + 2.0).abs() < 1e-12, "{c:?}");
        let c = lemma21_check(-0.3, 1.0, &cfg()).unwrap();
        assert!(c.lhs.abs() < 1e-12 && c.rhs.abs() < 1e-12, "{c:?}");
        let c = lemma21_check(-0.5, 3.0, &cfg()).unwrap();
        assert!((c.lhs + 10.0 / 3.0).abs() < 1e-9 && (c.rhs + 10.0 / 3.0).abs() < 1e-12, "{c:?}");
        let c = lemma21_check(-0.7, 0.4, &cfg()).unwrap();
        assert!((c.lhs - c.rhs).abs() < 1e-8 * (1.0 + c.rhs.abs()), "{c:?}");
        assert!(lemma21_check(0.2, 1.0, &cfg()).is_err());
    }

    #[test]
    fn bar_c_examples() {
        let c = bar_c_quadrature(&p(1.0, 0.5), &cfg()).unwrap();
        assert!((c.lhs - 1.0 / PI).abs() < 1e-10);
        let c = bar_c_quadrature(&p(0.5, 0.5), &cfg()).unwrap();
        assert!((c.lhs - 0.337_989_120_033_642_36).abs() < 1e-9, "{c:?}");
        let c = bar_c_quadrature(&p(1.5, 0.25), &cfg()).unwrap();
        assert!((c.lhs - 0.199_471_140_200_716_34).abs() < 1e-9, "{c:?}");
    }

    #[test]
    fn substitution_consistency() {
        for b in [0.05, 0.25, 0.45] {
            let (d, s) = substitution_pair(b, &cfg()).unwrap();
            assert!((d - s).abs() < 1e-9 * (1.0 + d.abs()), "{b}: {d} {s}");
        }
    }
}
