use std::path::Path;
use std::process::{Command, Output};

use hsl_cli::RunReport;

fn hsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsl")).args(args).output().expect("spawn hsl")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> RunReport {
    RunReport::from_json(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// Column `name` of a CSV table as parsed numbers (blank cells are `None`).
fn csv_column(text: &str, name: &str) -> Vec<Option<f64>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).and_then(|c| c.parse().ok())).collect()
}

#[test]
fn constants_single_point() {
    let o = hsl(&["constants", "--alpha", "1", "--beta", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let kappa = csv_column(&out, "kappa");
    assert_eq!(kappa.len(), 1);
    assert!((kappa[0].unwrap() - 1.0 / std::f64::consts::PI).abs() < 1e-11);
    // C_α has a pole at α = 1 and is left blank
    assert_eq!(csv_column(&out, "c_alpha"), vec![None]);
}

#[test]
fn constants_grid_peaks_at_half() {
    let o = hsl(&["constants", "--alpha", "0.7", "--beta-grid", "0.05:0.95:0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let betas = csv_column(&out, "beta");
    let kappa: Vec<f64> = csv_column(&out, "kappa").into_iter().map(Option::unwrap).collect();
    assert_eq!(betas.len(), 19);
    let imax = (0..kappa.len()).max_by(|&i, &j| kappa[i].total_cmp(&kappa[j])).unwrap();
    assert_eq!(betas[imax], Some(0.5));
}

#[test]
fn constants_near_two() {
    // κ_β → β(1 − β) as α → 2
    let o = hsl(&["constants", "--alpha", "1.9999", "--beta-grid", "0.1:0.9:0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for (b, k) in csv_column(&out, "beta").into_iter().zip(csv_column(&out, "kappa")) {
        let (b, k) = (b.unwrap(), k.unwrap());
        assert!((k - b * (1.0 - b)).abs() <= 5e-3, "{b}: {k}");
    }
}

#[test]
fn invalid_parameters_exit_two() {
    for args in [
        &["constants", "--alpha", "2.5", "--beta", "0.5"][..],
        &["constants", "--alpha", "1"],
        &["constants", "--alpha", "1", "--beta", "1.2"],
        &["verify", "bogus"],
        &["simulate", "occupation", "--alpha", "1"],
        &["simulate", "survival", "--alpha", "1", "--paths", "0"],
    ] {
        let o = hsl(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_identities_skips_degenerate_points() {
    let o = hsl(&["verify", "identities"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert!(r.all_pass());
    let skipped = r.skipped().count();
    assert!(skipped > 0);
    for s in r.skipped() {
        assert!(s.note.as_deref().unwrap().starts_with("SKIPPED_DEGENERATE"));
    }
    assert!(r.results.len() > skipped);
}

#[test]
fn verify_integrals_and_hardy_pass() {
    for args in [&["integrals", "--alpha", "0.5,1.5", "--beta", "0.2,0.6"][..], &["hardy"]] {
        let suite = args[0];
        let o = hsl(&[&["verify"][..], args].concat());
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
        let r = report(&o);
        assert!(!r.results.is_empty() && r.all_pass());
    }
}

#[test]
fn verify_green_subset() {
    let o = hsl(&["verify", "green", "--alpha", "0.5,1.5", "--beta", "0.3", "--x", "0.5,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o).results.len(), 4);
}

#[test]
fn tight_tolerance_fails_with_exit_one() {
    let o = hsl(&["simulate", "occupation", "--alpha", "1", "--beta", "0.5", "--paths", "2000", "--dt", "0.01", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert!(!r.all_pass());
    assert!(!o.stderr.is_empty());
}

#[test]
fn simulation_output_is_reproducible() {
    let args = ["simulate", "occupation", "--alpha", "1", "--beta", "0.5", "--paths", "4000", "--dt", "0.01", "--seed", "3"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hsl")).args(args).env("HSL_THREADS", threads).output().unwrap()
    };
    let a = run("1");
    let b = run("1");
    let c = run("2");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let r = report(&a);
    assert_eq!(r.seed, Some(3));
    assert!(r.wall_time_ms.is_none());
}

#[test]
fn bad_thread_count_exits_two() {
    let o = Command::new(env!("CARGO_BIN_EXE_hsl"))
        .args(["constants", "--alpha", "1", "--beta", "0.5"])
        .env("HSL_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn timing_flag_adds_wall_time() {
    let o = hsl(&["constants", "--alpha", "1", "--beta", "0.5", "--format", "json", "--timing"]);
    assert!(report(&o).wall_time_ms.is_some());
}

#[test]
fn survival_report_has_one_estimate_per_time() {
    let o = hsl(&["simulate", "survival", "--alpha", "1", "--paths", "2000", "--dt", "0.01", "--t", "2:20:2", "--tol", "1"]);
    let r = report(&o);
    assert_eq!(r.estimates.len(), 10);
    let means: Vec<f64> = r.estimates.iter().map(|e| e.mean).collect();
    assert!(means.windows(2).all(|w| w[1] <= w[0]), "{means:?}");
    assert!(r.results.iter().any(|rec| rec.name.contains("slope")));
}

#[test]
fn exit_law_matches_reference_cdf() {
    let o = hsl(&["simulate", "exit-law", "--alpha", "1", "--paths", "20000", "--dt", "0.01", "--seed", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn plot_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("fig2");
    let o = hsl(&["plot", "compare", "--alpha", "0.5", "--out", prefix.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(report(&o).all_pass());
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    let svg = std::fs::read_to_string(prefix.with_extension("svg")).unwrap();
    assert_eq!(csv.lines().count(), 100);
    assert!(csv.lines().next().unwrap().contains("kappa_r"));
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(svg.contains("<rect") && svg.contains("#fde9c8"));

    let prefix = dir.path().join("fig1");
    let o = hsl(&["plot", "kappa", "--out", prefix.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("1,0.5,0.318309886184")), "{csv}");
}

#[test]
fn unwritable_output_exits_two() {
    let target = Path::new("/nonexistent-dir/sub/out.csv");
    let o = hsl(&["constants", "--alpha", "1", "--beta", "0.5", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_file_round_trips_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = hsl(&["verify", "integrals", "--alpha", "1", "--beta", "0.3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let r = RunReport::from_json(&text).unwrap();
    assert_eq!(r.to_json().unwrap(), text);
}
