use hsl_core::stable_mc::{estimate_occupation, Scheme, SimConfig};

// Steps coarse enough that the discretisation bias (0.4, 0.12, 0.02 between
// successive levels) sits well above the standard error (~0.012).
#[test]
fn euler_bias_shrinks_under_halving() {
    let est: Vec<f64> = [0.8, 0.4, 0.2, 0.1]
        .iter()
        .map(|&dt| {
            let c = SimConfig::new(1.0, 1.0).unwrap().with_paths(100_000).with_dt(dt).with_seed(9).with_scheme(Scheme::Euler);
            estimate_occupation(1.0, 0.5, &c).unwrap().mean
        })
        .collect();
    let diffs: Vec<f64> = est.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    assert!(diffs.windows(2).all(|d| d[1] < d[0]), "{est:?}");
}
