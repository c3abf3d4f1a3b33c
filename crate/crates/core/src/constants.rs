//! Closed-form constants of the killed stable semigroup on `D = (0, ∞)`.
//!
//! | symbol | formula |
//! |--------|---------|
//! | `A_α`  | `αΓ(α) sin(πα/2) / π` (Lévy density `ν(y) = A_α |y|^{-1-α}`) |
//! | `C_α`  | `1 / (2Γ(α) cos(πα/2))` (Riesz potential constant) |
//! | `Ĉ`    | `B(1−β−α/2, α) + B(α, β−α/2)` |
//! | `C̃`    | `B(1−β−α/2, β−α/2)` |
//! | `C̄`    | `A_α B(1−β+α/2, α/2+β)` |
//! | `κ_β`  | `Γ(β+α/2)Γ(1−β+α/2) / (Γ(β)Γ(1−β))` |
//! | `κ^ℝ`  | `2^α Γ((b+α)/2)Γ((1−b)/2) / (Γ(b/2)Γ((1−α−b)/2))` |
//!
//! Every constant is also available as a [`ConstantSet`] snapshot where
//! constants that do not exist at the given parameters are `None`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{beta_ext, gamma_ext, is_pole, recip_gamma, sin_pi, cos_pi, ValueKind};

/// Tolerance for the degenerate lines `β = α/2` and `β + α/2 = 1`.
pub const DEGENERACY_EPS: f64 = 1e-10;

/// Validated (α, β, optional γ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_exp: Option<f64>,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain("beta", beta, "(0, 1)"));
        }
        Ok(StableParams {
            alpha,
            beta,
            gamma_exp: None,
        })
    }

    /// Attaches the time-weight exponent γ, which must lie in `(β + α/2, 1 + α/2)`.
    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        let lo = self.beta + 0.5 * self.alpha;
        let hi = 1.0 + 0.5 * self.alpha;
        if !(gamma > lo && gamma < hi) {
            return Err(Error::domain("gamma", gamma, "(beta + alpha/2, 1 + alpha/2)"));
        }
        Ok(StableParams {
            gamma_exp: Some(gamma),
            ..self
        })
    }

    pub fn half_alpha(&self) -> f64 {
        0.5 * self.alpha
    }

    /// `β − α/2`
    pub fn lower_gap(&self) -> f64 {
        self.beta - 0.5 * self.alpha
    }

    /// `1 − β − α/2`
    pub fn upper_gap(&self) -> f64 {
        1.0 - self.beta - 0.5 * self.alpha
    }

    /// True on the lines where `Ĉ` and `C̃` are undefined.
    pub fn is_degenerate(&self) -> bool {
        self.lower_gap().abs() < DEGENERACY_EPS || self.upper_gap().abs() < DEGENERACY_EPS
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "(0, 2)"))
    }
}

/// A value tagged with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flagged {
    pub value: f64,
    /// Outside the window `0 < b < 1 − α` where the whole-line constant is defined.
    pub extended: bool,
    pub kind: ValueKind,
}

pub fn levy_a(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha * gamma_ext(alpha)? * sin_pi(0.5 * alpha) / std::f64::consts::PI)
}

pub fn riesz_c(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if (alpha - 1.0).abs() < DEGENERACY_EPS {
        return Err(Error::PoleAtOne);
    }
    riesz_c_continued(alpha)
}

/// `1/(2Γ(s)cos(πs/2))` for any real `s` where it is finite. At negative
/// arguments `C_{−α} = −A_α`.
pub fn riesz_c_continued(s: f64) -> Result<f64> {
    let c = cos_pi(0.5 * s);
    if c.abs() < 1e-14 {
        return Err(Error::domain("s", s, "reals with cos(pi s/2) != 0"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(recip_gamma(s) / (2.0 * c))
}

pub fn kappa(p: &StableParams) -> f64 {
    let h = p.half_alpha();
    // every argument is positive on the parameter domain
    gamma_pos(p.beta + h) * gamma_pos(1.0 - p.beta + h) * recip_gamma(p.beta) * recip_gamma(1.0 - p.beta)
}

fn gamma_pos(x: f64) -> f64 {
    1.0 / recip_gamma(x)
}

/// `Γ((α+1)/2)² / π`, the value of `κ_β` at `β = 1/2`.
pub fn kappa_half(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let g = gamma_pos(0.5 * (alpha + 1.0));
    Ok(g * g / std::f64::consts::PI)
}

/// Whole-line constant `κ^ℝ_b` in dimension one.
///
/// Outside `0 < b < 1 − α` the Gammas are evaluated by continuation; a pole of
/// a denominator Gamma yields `0` with [`ValueKind::Limit`].
pub fn kappa_r(alpha: f64, b: f64) -> Result<Flagged> {
    check_alpha(alpha)?;
    let num1 = 0.5 * (b + alpha);
    let num2 = 0.5 * (1.0 - b);
    let den1 = 0.5 * b;
    let den2 = 0.5 * (1.0 - alpha - b);
    let extended = !(b > 0.0 && b < 1.0 - alpha);
    if is_pole(den1) || is_pole(den2) {
        if is_pole(num1) || is_pole(num2) {
            return Err(Error::PoleArgument(if is_pole(num1) { num1 } else { num2 }));
        }
        return Ok(Flagged {
            value: 0.0,
            extended,
            kind: ValueKind::Limit,
        });
    }
    let v = 2f64.powf(alpha) * gamma_ext(num1)? * gamma_ext(num2)? * recip_gamma(den1) * recip_gamma(den2);
    Ok(Flagged {
        value: v,
        extended,
        kind: ValueKind::Regular,
    })
}

fn require_nondegenerate(p: &StableParams) -> Result<()> {
    if p.lower_gap().abs() < DEGENERACY_EPS {
        return Err(Error::DegenerateParams {
            alpha: p.alpha,
            beta: p.beta,
            reason: "beta = alpha/2",
        });
    }
    if p.upper_gap().abs() < DEGENERACY_EPS {
        return Err(Error::DegenerateParams {
            alpha: p.alpha,
            beta: p.beta,
            reason: "beta + alpha/2 = 1",
        });
    }
    Ok(())
}

pub fn hat_c(p: &StableParams) -> Result<f64> {
    require_nondegenerate(p)?;
    Ok(beta_ext(p.upper_gap(), p.alpha)? + beta_ext(p.alpha, p.lower_gap())?)
}

pub fn tilde_c(p: &StableParams) -> Result<f64> {
    require_nondegenerate(p)?;
    beta_ext(p.upper_gap(), p.lower_gap())
}

pub fn bar_c(p: &StableParams) -> Result<f64> {
    let h = p.half_alpha();
    Ok(levy_a(p.alpha)? * beta_ext(1.0 - p.beta + h, h + p.beta)?)
}

/// `C_α Ĉ / (1 + C_α C̃ C̄)`, which equals `1/κ_β` for `α ≠ 1`, `β ∈ (0, 1/2]`.
pub fn prop35_ratio(p: &StableParams) -> Result<f64> {
    if p.beta > 0.5 {
        return Err(Error::domain("beta", p.beta, "(0, 1/2]"));
    }
    let c = riesz_c(p.alpha)?;
    let hat = hat_c(p)?;
    let tilde = tilde_c(p)?;
    let bar = bar_c(p)?;
    Ok(c * hat / (1.0 + c * tilde * bar))
}

/// Both sides of the two trigonometric simplifications of `C_α Ĉ` and `1 + C_α C̃ C̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigSides {
    pub hat_lhs: f64,
    pub hat_rhs: f64,
    pub denom_lhs: f64,
    pub denom_rhs: f64,
}

impl TrigSides {
    pub fn max_rel_defect(&self) -> f64 {
        let r = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        r(self.hat_lhs, self.hat_rhs).max(r(self.denom_lhs, self.denom_rhs))
    }
}

pub fn trig_identities(p: &StableParams) -> Result<TrigSides> {
    let c = riesz_c(p.alpha)?;
    let hat = hat_c(p)?;
    let tilde = tilde_c(p)?;
    let bar = bar_c(p)?;
    let (b, h) = (p.beta, p.half_alpha());
    let hat_rhs = gamma_ext(b - h)? * recip_gamma(b + h) * sin_pi(b) / sin_pi(b + h);
    let sb = sin_pi(b);
    let denom_rhs = sb * sb / (sin_pi(b + h) * sin_pi(b - h));
    Ok(TrigSides {
        hat_lhs: c * hat,
        hat_rhs,
        denom_lhs: 1.0 + c * tilde * bar,
        denom_rhs,
    })
}

/// Partial sum of the series for `κ'_β / κ_β` and a bound on its tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

const LOGDERIV_TAIL: f64 = 1e-12;

/// `d/dβ log κ_β` as the sum over k of
/// `(1−2β)(α/2)(2k+1+α/2) / ((β+α/2+k)(1−β+α/2+k)(β+k)(1−β+k))`.
///
/// For `k >= 1` each term is at most `2|1−2β|α / k³`, so the tail past `K`
/// is bounded by `|1−2β|α / K²`; `K` is chosen to push that below 1e-12.
pub fn kappa_logderiv(p: &StableParams) -> SeriesSum {
    let (b, h) = (p.beta, p.half_alpha());
    let c = (1.0 - 2.0 * b).abs() * p.alpha;
    let k_max = if c == 0.0 {
        0
    } else {
        (c / LOGDERIV_TAIL).sqrt().ceil() as usize
    };
    let term = |k: f64| {
        (1.0 - 2.0 * b) * h * (2.0 * k + 1.0 + h)
            / ((b + h + k) * (1.0 - b + h + k) * (b + k) * (1.0 - b + k))
    };
    // smallest terms first, compensated
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in (0..=k_max).rev() {
        let y = term(k as f64) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let tail_bound = if k_max == 0 { 0.0 } else { c / (k_max as f64).powi(2) };
    SeriesSum {
        value: sum,
        tail_bound,
        terms: k_max + 1,
    }
}

/// `|κ^ℝ_{β−α/2} + C̄ − κ_β|`.
pub fn remark46_check(p: &StableParams) -> Result<f64> {
    let kr = kappa_r(p.alpha, p.lower_gap())?;
    Ok((kr.value + bar_c(p)? - kappa(p)).abs())
}

/// Which optional constants exist at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub riesz: bool,
    pub hat_tilde: bool,
    pub kappa_r_primary: bool,
}

/// All constants at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantSet {
    pub alpha: f64,
    pub beta: f64,
    pub a_alpha: f64,
    pub c_alpha: Option<f64>,
    pub hat_c: Option<f64>,
    pub tilde_c: Option<f64>,
    pub bar_c: f64,
    pub kappa: f64,
    pub kappa_r: Option<f64>,
    pub validity: Validity,
}

impl ConstantSet {
    pub fn compute(p: &StableParams) -> Result<Self> {
        let c_alpha = riesz_c(p.alpha).ok();
        let (hat, tilde) = if p.is_degenerate() {
            (None, None)
        } else {
            (Some(hat_c(p)?), Some(tilde_c(p)?))
        };
        let kr = kappa_r(p.alpha, p.beta)
            .ok()
            .filter(|f| !f.extended && f.kind == ValueKind::Regular)
            .map(|f| f.value);
        Ok(ConstantSet {
            alpha: p.alpha,
            beta: p.beta,
            a_alpha: levy_a(p.alpha)?,
            c_alpha,
            hat_c: hat,
            tilde_c: tilde,
            bar_c: bar_c(p)?,
            kappa: kappa(p),
            kappa_r: kr,
            validity: Validity {
                riesz: c_alpha.is_some(),
                hat_tilde: hat.is_some(),
                kappa_r_primary: kr.is_some(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(a: f64, b: f64) -> StableParams {
        StableParams::new(a, b).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn params_validation() {
        assert!(StableParams::new(0.0, 0.5).is_err());
        assert!(StableParams::new(2.0, 0.5).is_err());
        assert!(StableParams::new(1.0, 1.0).is_err());
        let q = p(1.0, 0.5);
        assert!(q.with_gamma(1.0).is_err());
        assert!(q.with_gamma(1.5).is_err());
        assert_eq!(q.with_gamma(1.25).unwrap().gamma_exp, Some(1.25));
    }

    #[test]
    fn levy_and_riesz_values() {
        assert!(rel(levy_a(1.0).unwrap(), 1.0 / PI) < 1e-15);
        assert!(rel(levy_a(0.5).unwrap(), 0.199_471_140_200_716_34) < 1e-14);
        assert!(rel(levy_a(1.5).unwrap(), 0.299_206_710_301_074_5) < 1e-14);
        assert!(levy_a(2.0).is_err());
        assert!(rel(riesz_c(0.5).unwrap(), 0.398_942_280_401_432_7) < 1e-14);
        assert!(rel(riesz_c(1.5).unwrap(), -0.797_884_560_802_865_4) < 1e-14);
        assert_eq!(riesz_c(1.0), Err(Error::PoleAtOne));
        for a in [0.3, 0.5, 1.2, 1.7] {
            let d = (riesz_c_continued(-a).unwrap() + levy_a(a).unwrap()).abs();
            assert!(d < 1e-12, "C_-a vs -A_a at {a}: {d}");
        }
    }

    #[test]
    fn kappa_closed_forms() {
        assert!(rel(kappa(&p(1.0, 0.5)), 1.0 / PI) < 1e-14);
        assert!(rel(kappa(&p(1.0, 0.25)), 0.25) < 1e-14);
        assert!(rel(kappa(&p(0.5, 0.25)), 1.0 / (2.0 * PI).sqrt()) < 1e-14);
        assert!(rel(1.0 / kappa(&p(1.5, 0.25)), 5.013_256_549_262_001) < 1e-13);
    }

    #[test]
    fn kappa_r_values() {
        let v = kappa_r(0.5, 0.25).unwrap();
        // √2 (Γ(3/8)/Γ(1/8))², mpmath
        assert!(rel(v.value, 0.139_999_677_452_482_63) < 1e-13);
        assert!(!v.extended);
        let a = kappa_r(0.5, 0.1).unwrap().value;
        let b = kappa_r(0.5, 1.0 - 0.5 - 0.1).unwrap().value;
        assert!((a - b).abs() < 1e-12);
        assert!(v.value < kappa(&p(0.5, 0.25)));
        let lim = kappa_r(1.0, 0.0).unwrap();
        assert_eq!((lim.value, lim.kind, lim.extended), (0.0, ValueKind::Limit, true));
    }

    #[test]
    fn hat_tilde_bar_values() {
        let q = p(0.5, 0.5);
        // 2B(1/4,1/2), B(1/4,1/4), A_{1/2}B(3/4,3/4): mpmath
        assert!(rel(hat_c(&q).unwrap(), 10.488_230_217_168_479) < 1e-13);
        assert!(rel(tilde_c(&q).unwrap(), 7.416_298_709_205_487_7) < 1e-13);
        assert!(rel(bar_c(&q).unwrap(), 0.337_989_120_033_642_36) < 1e-13);
        assert!(rel(bar_c(&p(1.0, 0.5)).unwrap(), 1.0 / PI) < 1e-14);
        assert!(rel(tilde_c(&p(1.5, 0.5)).unwrap(), -6.777_704_678_351_833) < 1e-13);
        assert!(matches!(hat_c(&p(1.0, 0.5)), Err(Error::DegenerateParams { .. })));
        assert!(matches!(tilde_c(&p(1.0, 0.5 + 1e-11)), Err(Error::DegenerateParams { .. })));
        assert!(matches!(hat_c(&p(1.2, 0.4)), Err(Error::DegenerateParams { .. })));
    }

    #[test]
    fn ratio_examples() {
        let r = prop35_ratio(&p(0.5, 0.5)).unwrap();
        assert!(rel(r, 2.092_099_240_106_203) < 1e-12);
        let q = p(0.5, 0.5);
        let prod = riesz_c(0.5).unwrap() * tilde_c(&q).unwrap() * bar_c(&q).unwrap();
        assert!((prod - 1.0).abs() < 1e-9);
        assert!(prop35_ratio(&p(0.5, 0.6)).is_err());
        assert_eq!(prop35_ratio(&p(1.0, 0.3)), Err(Error::PoleAtOne));
    }

    #[test]
    fn ratio_is_degenerate_at_beta_equal_half_alpha() {
        assert!(matches!(prop35_ratio(&p(0.5, 0.25)), Err(Error::DegenerateParams { .. })));
    }

    #[test]
    fn logderiv_examples() {
        let s = kappa_logderiv(&p(1.0, 0.5));
        assert_eq!(s.value, 0.0);
        let s = kappa_logderiv(&p(1.0, 0.25));
        assert!(s.tail_bound <= 1e-12);
        // mpmath: d/dβ log κ at (1, 1/4)
        assert!((s.value - 2.283_185_307_179_586_5).abs() < 1e-11);
        let h = 1e-6;
        let fd = ((kappa(&p(1.0, 0.25 + h))).ln() - (kappa(&p(1.0, 0.25 - h))).ln()) / (2.0 * h);
        assert!((fd - s.value).abs() < 1e-6);
        let a = kappa_logderiv(&p(1.3, 0.3)).value;
        let b = kappa_logderiv(&p(1.3, 0.7)).value;
        assert!((a + b).abs() < 1e-12);
        assert!((a - 1.733_819_064_979_961_3).abs() < 1e-11);
    }

    #[test]
    fn whole_line_decomposition_examples() {
        for (a, b) in [(0.5, 0.5), (1.5, 0.9), (1.0, 0.5), (0.3, 0.95), (1.9, 0.05)] {
            let q = p(a, b);
            let d = remark46_check(&q).unwrap();
            assert!(d <= 1e-10 * (1.0 + kappa(&q)), "({a},{b}): {d}");
        }
    }

    #[test]
    fn kappa_sharp_constant_and_alpha_two_limit() {
        for a in [0.1, 0.7, 1.0, 1.5, 1.95] {
            assert!(rel(kappa(&p(a, 0.5)), kappa_half(a).unwrap()) < 1e-12);
        }
        for i in 1..10 {
            let b = i as f64 / 10.0;
            assert!((kappa(&p(1.9999, b)) - b * (1.0 - b)).abs() <= 5e-3);
        }
    }

    #[test]
    fn constant_set_absent_fields() {
        let s = ConstantSet::compute(&p(1.0, 0.5)).unwrap();
        assert!(s.c_alpha.is_none() && s.hat_c.is_none() && s.tilde_c.is_none());
        assert!(s.kappa_r.is_none());
        let s = ConstantSet::compute(&p(0.5, 0.2)).unwrap();
        assert!(s.c_alpha.is_some() && s.hat_c.is_some() && s.kappa_r.is_some());
        assert!(s.kappa > 0.0 && s.bar_c > 0.0);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn p(a: f64, b: f64) -> StableParams {
        StableParams::new(a, b).unwrap()
    }

    // keeps draws clear of β = α/2, β = 1 − α/2 and α = 1
    fn clear(a: f64, b: f64) -> bool {
        let h = 0.5 * a;
        (b - h).abs() > 1e-2 && (1.0 - b - h).abs() > 1e-2 && (a - 1.0).abs() > 1e-2
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn kappa_is_symmetric(a in 0.01f64..1.99, b in 0.001f64..0.999) {
            let (k1, k2) = (kappa(&p(a, b)), kappa(&p(a, 1.0 - b)));
            prop_assert!((k1 - k2).abs() <= 1e-12 * k1 && k1 > 0.0);
        }

        #[test]
        fn ratio_is_reciprocal_kappa(a in 0.01f64..1.99, b in 0.001f64..0.5) {
            prop_assume!(clear(a, b));
            let r = prop35_ratio(&p(a, b)).unwrap();
            prop_assert!((r * kappa(&p(a, b)) - 1.0).abs() <= 1e-9, "{a},{b}: {r}");
        }

        #[test]
        // below β ≈ 0.02 the left side 1 + C_α C̃ C̄ cancels to ~1e−5 near α = 1
        fn trig_simplifications(a in 0.01f64..1.99, b in 0.02f64..0.5) {
            prop_assume!(clear(a, b));
            let t = trig_identities(&p(a, b)).unwrap();
            prop_assert!(t.max_rel_defect() <= 1e-10, "{a},{b}: {t:?}");
        }

        #[test]
        fn whole_line_decomposition(a in 0.01f64..1.99, b in 0.001f64..0.999) {
            prop_assume!(clear(a, b));
            let k = kappa(&p(a, b));
            prop_assert!(remark46_check(&p(a, b)).unwrap() <= 1e-10 * (1.0 + k));
        }

        #[test]
        fn logderiv_sign_follows_half(a in 0.01f64..1.99, b in 0.001f64..0.999) {
            let d = kappa_logderiv(&p(a, b));
            prop_assert!(d.tail_bound <= 1e-12);
            prop_assert!(d.value.signum() == (0.5 - b).signum() || (b - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_monotone_on_each_side_of_half() {
        for i in 1..40 {
            let a = 0.05 * i as f64;
            let k: Vec<f64> = (1..=99).map(|j| kappa(&p(a, j as f64 / 100.0))).collect();
            // k[j] is β = (j+1)/100; the peak is k[49]
            assert!(k[..50].windows(2).all(|w| w[1] > w[0]), "α={a}");
            assert!(k[49..].windows(2).all(|w| w[1] < w[0]), "α={a}");
        }
    }

    #[test]
    fn kappa_dominates_whole_line_constant() {
        for i in 1..=9 {
            let a = i as f64 / 10.0;
            let mut b: f64 = 0.02;
            while b <= 0.5 * (1.0 - a) + 1e-12 {
                let kr = kappa_r(a, b).unwrap();
                assert!(!kr.extended);
                assert!(kappa(&p(a, b)) > kr.value, "α={a} β={b}");
                b += 0.02;
            }
        }
    }
}
