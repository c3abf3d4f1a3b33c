//! Fixed-precision number output: every float leaves the program rounded to
//! 12 significant digits, so reruns are byte-identical.

pub const SIG_DIGITS: usize = 12;

/// Rounds to 12 significant digits; non-finite values pass through.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIG_DIGITS - 1, v).parse().unwrap_or(v)
}

/// Shortest text of the rounded value, plain notation for moderate
/// magnitudes and exponent notation otherwise.
pub fn fmt_num(v: f64) -> String {
    let r = round_sig(v);
    if r == 0.0 {
        return "0".into();
    }
    if !r.is_finite() {
        return format!("{r}");
    }
    let a = r.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn round_opt(v: Option<f64>) -> Option<f64> {
    v.map(round_sig)
}
