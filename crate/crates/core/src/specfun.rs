//! Gamma, log-Gamma and Beta on the whole real line minus the poles.
//!
//! `Γ` is evaluated with the Lanczos approximation (g = 7, nine coefficients)
//! for `x >= 1/2` and with the reflection formula below that, which also
//! extends it to negative non-integers. `B(x, y) = Γ(x)Γ(y)/Γ(x+y)` is formed
//! as a signed quotient so that mixed-sign arguments keep their sign.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Distance to a non-positive integer below which an argument counts as a pole.
pub const POLE_EPS: f64 = 1e-8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Whether a value was obtained directly or as a limit across a pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ValueKind {
    Regular,
    /// Value fixed by continuity at a pole of a denominator (e.g. `1/Γ(-n) = 0`).
    Limit,
}

/// A function value with a conservative bound on its evaluation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err_bound: f64,
    pub kind: ValueKind,
}

impl EvalResult {
    fn regular(value: f64, rel: f64) -> Self {
        EvalResult {
            value,
            abs_err_bound: (value * rel).abs(),
            kind: ValueKind::Regular,
        }
    }
}

/// Distance from `x` to the nearest non-positive integer (infinite for `x > 0.5`).
pub fn pole_distance(x: f64) -> f64 {
    if x > 0.5 {
        return f64::INFINITY;
    }
    (x - x.round()).abs()
}

pub fn is_pole(x: f64) -> bool {
    pole_distance(x) < POLE_EPS
}

/// `sin(πx)` with exact argument reduction, so zeros at the integers are exact.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // r in [-1, 1]; the subtraction is exact.
    let r = x - 2.0 * (0.5 * x).round();
    let a = r.abs();
    let s = if a <= 0.25 {
        (PI * a).sin()
    } else if a <= 0.75 {
        (PI * (0.5 - a)).cos()
    } else {
        (PI * (1.0 - a)).sin()
    };
    s.copysign(r)
}

/// `cos(πx)` with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = (x - 2.0 * (0.5 * x).round()).abs();
    if r <= 0.25 {
        (PI * r).cos()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).sin()
    } else {
        -(PI * (1.0 - r)).cos()
    }
}

fn lanczos_sum(z: f64) -> f64 {
    // z = x - 1 >= -1/2
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Γ(x) for x >= 1/2.
fn gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let w = z + LANCZOS_G + 0.5;
    let s = lanczos_sum(z);
    // split the power to postpone overflow
    let p = w.powf(0.5 * (z + 0.5));
    SQRT_2PI * p * (p * (-w).exp()) * s
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let w = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * w.ln() - w + lanczos_sum(z).ln()
}

/// Relative error bound for the Lanczos branch at `x >= 1/2`.
fn lanczos_rel_bound(x: f64) -> f64 {
    let w = x + LANCZOS_G - 0.5;
    f64::EPSILON * (32.0 + 2.0 * (x + 0.5) * w.ln().abs() + w)
}

/// Γ(x) with an error bound. Negative non-integers go through reflection.
pub fn gamma_eval(x: f64) -> Result<EvalResult> {
    if !x.is_finite() {
        return Err(Error::domain("x", x, "finite reals"));
    }
    if is_pole(x) {
        return Err(Error::PoleArgument(x));
    }
    if x >= 0.5 {
        return Ok(EvalResult::regular(gamma_lanczos(x), lanczos_rel_bound(x)));
    }
    let s = sin_pi(x);
    let g1 = gamma_lanczos(1.0 - x);
    let rel = lanczos_rel_bound(1.0 - x) + 8.0 * f64::EPSILON * (1.0 + x.abs() / pole_distance(x).max(1e-300));
    Ok(EvalResult::regular(PI / (s * g1), rel))
}

/// Γ(x), extended to negative non-integers by `xΓ(x) = Γ(x+1)`.
pub fn gamma_ext(x: f64) -> Result<f64> {
    gamma_eval(x).map(|r| r.value)
}

/// 1/Γ(x): entire, exactly zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if x >= 0.5 {
        return 1.0 / gamma_lanczos(x);
    }
    if x == x.round() {
        return 0.0;
    }
    sin_pi(x) * gamma_lanczos(1.0 - x) / PI
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::domain("x", x, "finite reals"));
    }
    if is_pole(x) {
        return Err(Error::PoleArgument(x));
    }
    if x >= 0.5 {
        return Ok((ln_gamma_lanczos(x), 1.0));
    }
    let s = sin_pi(x);
    let v = PI.ln() - s.abs().ln() - ln_gamma_lanczos(1.0 - x);
    Ok((v, s.signum()))
}

/// B(x, y) with an error bound; `kind == Limit` when Γ(x+y) sits on a pole.
pub fn beta_eval(x: f64, y: f64) -> Result<EvalResult> {
    if is_pole(x) {
        return Err(Error::PoleArgument(x));
    }
    if is_pole(y) {
        return Err(Error::PoleArgument(y));
    }
    let s = x + y;
    if is_pole(s) {
        return Ok(EvalResult {
            value: 0.0,
            abs_err_bound: 0.0,
            kind: ValueKind::Limit,
        });
    }
    if x > 0.0 && y > 0.0 && s > 100.0 {
        // log space only where every Gamma is positive and the product could overflow
        let v = (ln_gamma_lanczos(x) + ln_gamma_lanczos(y) - ln_gamma_lanczos(s)).exp();
        let rel = f64::EPSILON * 4.0 * (1.0 + ln_gamma_lanczos(s).abs());
        return Ok(EvalResult::regular(v, rel));
    }
    let gx = gamma_eval(x)?;
    let gy = gamma_eval(y)?;
    let gs = gamma_eval(s)?;
    let v = gx.value * gy.value / gs.value;
    let rel = gx.abs_err_bound / gx.value.abs()
        + gy.abs_err_bound / gy.value.abs()
        + gs.abs_err_bound / gs.value.abs()
        + 2.0 * f64::EPSILON;
    Ok(EvalResult::regular(v, rel))
}

/// B(x, y) = Γ(x)Γ(y)/Γ(x+y) on ℝ∖{0,−1,−2,…}; zero when only x+y is a pole.
pub fn beta_ext(x: f64, y: f64) -> Result<f64> {
    beta_eval(x, y).map(|r| r.value)
}

/// The Gamma identities used to simplify the ground-state constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaIdentity {
    /// Γ(1−x)Γ(x) = π / sin(πx)
    Reflection,
    /// Γ(1−x)Γ(1+x) = πx / sin(πx)
    ShiftedReflection,
    /// Γ(x)/Γ(1/2−x) = 2^{1−2x} cos(πx) Γ(2x) / √π
    Duplication,
}

fn check_pole(x: f64) -> Result<()> {
    if is_pole(x) {
        Err(Error::PoleArgument(x))
    } else {
        Ok(())
    }
}

/// Returns the pair (LHS, RHS) of the selected identity at `x`.
pub fn identity_sides(x: f64, which: GammaIdentity) -> Result<(f64, f64)> {
    match which {
        GammaIdentity::Reflection => {
            check_pole(x)?;
            check_pole(1.0 - x)?;
            Ok((gamma_ext(1.0 - x)? * gamma_ext(x)?, PI / sin_pi(x)))
        }
        GammaIdentity::ShiftedReflection => {
            check_pole(1.0 + x)?;
            check_pole(1.0 - x)?;
            let lhs = gamma_ext(1.0 - x)? * gamma_ext(1.0 + x)?;
            let rhs = if x.abs() < POLE_EPS {
                1.0
            } else {
                PI * x / sin_pi(x)
            };
            Ok((lhs, rhs))
        }
        GammaIdentity::Duplication => {
            check_pole(x)?;
            check_pole(2.0 * x)?;
            let lhs = gamma_ext(x)? * recip_gamma(0.5 - x);
            let rhs = 2f64.powf(1.0 - 2.0 * x) * cos_pi(x) * gamma_ext(2.0 * x)? / PI.sqrt();
            Ok((lhs, rhs))
        }
    }
}

/// |LHS − RHS| of the selected Gamma identity.
pub fn reflection_defect(x: f64, which: GammaIdentity) -> Result<f64> {
    let (l, r) = identity_sides(x, which)?;
    Ok((l - r).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn gamma_reference_values() {
        // mpmath, 40 digits
        let cases = [
            (1.0, 1.0),
            (0.5, 1.772_453_850_905_516),
            (-0.5, -3.544_907_701_811_032),
            (0.25, 3.625_609_908_221_908_3),
            (-1.3, 3.328_347_006_788_609_7),
            (-3.7, 0.251_643_995_902_422_6),
            (4.3, 8.855_343_360_454_037),
        ];
        for (x, g) in cases {
            let v = gamma_ext(x).unwrap();
            assert!(rel(v, g) < 1e-14, "Γ({x}) = {v}, want {g}");
        }
    }

    #[test]
    fn gamma_poles_rejected() {
        for x in [0.0, -1.0, -2.0, -7.0, -3.0 + 1e-9] {
            assert_eq!(gamma_ext(x), Err(Error::PoleArgument(x)));
        }
        assert!(gamma_ext(-3.0 + 1e-7).is_ok());
    }

    #[test]
    fn recip_gamma_vanishes_on_poles() {
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-4.0), 0.0);
        let near = recip_gamma(-2.0 + 1e-12);
        assert!(near.abs() < 1e-11 && near != 0.0);
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for x in [0.1, 0.7, 3.3, 25.0, -0.5, -2.25] {
            let (l, s) = ln_gamma(x).unwrap();
            assert!(rel(s * l.exp(), gamma_ext(x).unwrap()) < 1e-13);
        }
        assert!((ln_gamma(171.5).unwrap().0 - 709.143_163_030_928_2).abs() < 1e-10);
    }

    #[test]
    fn beta_examples() {
        assert!(rel(beta_ext(1.0, 1.0).unwrap(), 1.0) < 1e-15);
        assert!(rel(beta_ext(0.5, 0.5).unwrap(), PI) < 1e-14);
        assert!(rel(beta_ext(-0.5, 2.0).unwrap(), -4.0) < 1e-14);
        // B(-0.25, -0.25), mpmath
        assert!(rel(beta_ext(-0.25, -0.25).unwrap(), -6.777_704_678_351_833) < 1e-13);
        assert!(rel(beta_ext(200.0, 3.0).unwrap(), 2.0 / (200.0 * 201.0 * 202.0)) < 1e-12);
    }

    #[test]
    fn beta_limit_and_poles() {
        let r = beta_eval(-0.5, -0.5).unwrap();
        assert_eq!((r.value, r.kind), (0.0, ValueKind::Limit));
        assert_eq!(beta_ext(-1.0, 0.3), Err(Error::PoleArgument(-1.0)));
        assert_eq!(beta_ext(0.3, 0.0), Err(Error::PoleArgument(0.0)));
    }

    #[test]
    fn sin_cos_pi_exact_zeros() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-2.0), 0.0);
        assert_eq!(cos_pi(2.5), 0.0);
        assert!((sin_pi(0.25) - 0.5f64.sqrt()).abs() < 4e-16);
        assert!((cos_pi(1.0) + 1.0).abs() < 1e-16);
        assert!((sin_pi(-1.75) - 0.5f64.sqrt()).abs() < 4e-16);
    }

    #[test]
    fn identities_hold() {
        assert!(reflection_defect(0.5, GammaIdentity::Reflection).unwrap() < 1e-14);
        for which in [
            GammaIdentity::Reflection,
            GammaIdentity::ShiftedReflection,
            GammaIdentity::Duplication,
        ] {
            for x in [0.25, 0.1, 0.73, -0.35, 1.2] {
                let (l, _) = identity_sides(x, which).unwrap();
                let d = reflection_defect(x, which).unwrap();
                assert!(d <= 1e-12 * (1.0 + l.abs()), "{which:?} at {x}: {d}");
            }
        }
        assert!(reflection_defect(1.0, GammaIdentity::Reflection).is_err());
        assert!(reflection_defect(-1.0, GammaIdentity::Duplication).is_err());
    }

    #[test]
    fn error_bound_is_nonnegative() {
        for x in [-4.5, -0.1, 0.2, 1.0, 10.0] {
            let r = gamma_eval(x).unwrap();
            assert!(r.abs_err_bound >= 0.0 && r.value.is_finite());
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::quad::{integrate_nodes, Node, QuadConfig, SingularSpec};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn recursion(x in -5.0f64..5.0) {
            prop_assume!(pole_distance(x) > 1e-6 && pole_distance(x + 1.0) > 1e-6);
            let (g, g1) = (gamma_ext(x).unwrap(), gamma_ext(x + 1.0).unwrap());
            prop_assert!((x * g - g1).abs() <= 1e-12 * (1.0 + g1.abs()), "{x}: {} vs {g1}", x * g);
        }

        #[test]
        fn reflection(x in 1e-6f64..(1.0 - 1e-6)) {
            let v = gamma_ext(x).unwrap() * gamma_ext(1.0 - x).unwrap() * sin_pi(x) / std::f64::consts::PI;
            prop_assert!((v - 1.0).abs() <= 1e-12, "{x}: {v}");
        }

        #[test]
        fn beta_is_symmetric(x in -4.0f64..4.0, y in -4.0f64..4.0) {
            match (beta_ext(x, y), beta_ext(y, x)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn beta_matches_its_integral(x in 0.1f64..3.0, y in 0.1f64..3.0) {
            let spec = SingularSpec::new().left(x - 1.0).right(y - 1.0);
            let f = |n: Node| n.dist(0.0).powf(x - 1.0) * n.dist(1.0).powf(y - 1.0);
            let q = integrate_nodes(f, 0.0, 1.0, &spec, &QuadConfig::default()).unwrap();
            let b = beta_ext(x, y).unwrap();
            prop_assert!((q.value - b).abs() <= 1e-9 * b, "{x},{y}: {} vs {b}", q.value);
        }
    }
}
