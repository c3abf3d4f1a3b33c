//! Basic rules: 21-point Gauss–Kronrod and level-halving tanh-sinh.

use std::f64::consts::FRAC_PI_2;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_626_285_480,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Kronrod estimate and QUADPACK-style error bound on `[a, b]`.
pub(crate) fn gauss_kronrod21<G: FnMut(f64) -> f64>(mut g: G, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let (f1, f2) = (g(c - dx), g(c + dx));
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let resabs: f64 = WGK[10] * fc.abs() + (0..10).map(|j| WGK[j] * (fv1[j].abs() + fv2[j].abs())).sum::<f64>();
    let value = resk * h;
    let resasc = resasc * h.abs();
    let resabs = resabs * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.is_finite() {
        return (value, f64::INFINITY);
    }
    (value, err)
}

/// `n`-point Gauss–Legendre nodes and weights on `[−1, 1]`, by Newton
/// iteration on `P_n` from the Chebyshev guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

pub(crate) struct TanhSinh;

const TS_MIN_LEVEL: u32 = 3;
const TS_MAX_LEVEL: u32 = 7;
const TS_WEIGHT_FLOOR: f64 = 1e-300;

impl TanhSinh {
    /// Tanh-sinh on `[a, b]`, halving the step until successive levels agree
    /// to `tol`. Abscissae near either end are formed from the end point plus
    /// an accurately computed complement. Returns (value, |last change|).
    pub(crate) fn integrate<G: FnMut(f64) -> f64>(mut g: G, a: f64, b: f64, tol: f64) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        // t beyond which a side is dropped (weight underflow or a non-finite value)
        let mut stop_lo = f64::INFINITY;
        let mut stop_hi = f64::INFINITY;
        let mut sum = FRAC_PI_2 * g(mid);
        let mut h = 1.0;
        let mut prev = f64::NAN;
        let mut diff = f64::INFINITY;
        for level in 0..=TS_MAX_LEVEL {
            let (start, step) = if level == 0 { (1usize, 1usize) } else { (1usize, 2usize) };
            let mut k = start;
            loop {
                let t = k as f64 * h;
                if t >= stop_lo && t >= stop_hi {
                    break;
                }
                let u = FRAC_PI_2 * t.sinh();
                let cu = u.cosh();
                let w = FRAC_PI_2 * t.cosh() / (cu * cu);
                let comp = (-u).exp() / cu;
                if w < TS_WEIGHT_FLOOR || comp * half == 0.0 {
                    stop_lo = stop_lo.min(t);
                    stop_hi = stop_hi.min(t);
                    break;
                }
                let d = half * comp;
                if t < stop_lo {
                    let v = g(a + d);
                    if v.is_finite() {
                        sum += w * v;
                    } else {
                        stop_lo = t;
                    }
                }
                if t < stop_hi {
                    let v = g(b - d);
                    if v.is_finite() {
                        sum += w * v;
                    } else {
                        stop_hi = t;
                    }
                }
                k += step;
            }
            let est = sum * h * half;
            if level > 0 {
                diff = (est - prev).abs();
                if level >= TS_MIN_LEVEL && diff <= tol.max(1e-15 * est.abs()) {
                    return (est, diff);
                }
            }
            prev = est;
            h *= 0.5;
        }
        (prev, diff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let sk = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let sg = 2.0 * WG.iter().sum::<f64>();
        assert!((sk - 2.0).abs() < 1e-15);
        assert!((sg - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_exact_for_high_degree_polynomials() {
        for deg in [0, 5, 20, 31] {
            let (v, _) = gauss_kronrod21(|x| x.powi(deg), 0.0, 1.0);
            assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "deg {deg}: {v}");
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in [1, 2, 4, 7] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
        let (x, _) = gauss_legendre(4);
        assert!((x[3] - 0.861_136_311_594_052_6).abs() < 1e-15);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let (v, e) = TanhSinh::integrate(|x| x.powf(-0.75), 0.0, 1.0, 1e-14);
        assert!((v - 4.0).abs() < 1e-9, "{v} {e}");
        let (v, _) = TanhSinh::integrate(|x| (1.0 - x * x).sqrt(), -1.0, 1.0, 1e-14);
        assert!((v - FRAC_PI_2).abs() < 1e-14);
    }
}
