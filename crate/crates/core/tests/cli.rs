use std::path::Path;

use casimir_core::cli::{config_from_report, execute, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};

fn run(args: &[&str]) -> i32 {
    execute(std::iter::once("casimir").chain(args.iter().copied()))
}

fn run_to(args: &[&str], out: &Path) -> (i32, String) {
    let mut v = args.to_vec();
    let p = out.to_str().unwrap();
    v.extend(["--out", p]);
    let code = run(&v);
    (code, std::fs::read_to_string(out).unwrap_or_default())
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]), EXIT_USAGE);
    assert_eq!(run(&["lifshitz", "--model", "gold"]), EXIT_USAGE);
    assert_eq!(
        run(&["lifshitz", "--model", "plasma:xi=30", "--tol", "2"]),
        EXIT_USAGE
    );
    assert_eq!(run(&["poles"]), EXIT_USAGE);
    assert_eq!(run(&["--help"]), EXIT_OK);
}

#[test]
fn cavity_spectrum_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "cavity-spectrum",
        "--model",
        "const:xi=2",
        "--word",
        "OOO",
        "--nmax",
        "2",
        "--omega-max",
        "12",
    ];
    let (c1, a) = run_to(&args, &dir.path().join("a.csv"));
    let (c2, b) = run_to(&args, &dir.path().join("b.csv"));
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(
        lines.next().unwrap(),
        "s,word,nx,ny,lambda1,lambda2,lambda,xi,omega,residual,sigma_min"
    );
    assert!(lines.count() > 0);
}

#[test]
fn empty_eee_spectrum_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eee.csv");
    let (code, text) = run_to(
        &["cavity-spectrum", "--model", "const:xi=2", "--word", "EEE"],
        &out,
    );
    assert_eq!(code, EXIT_OK);
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn report_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pc.json");
    let (code, first) = run_to(
        &[
            "lifshitz", "--model", "pc", "--te", "--R0", "5", "--rho", "5",
        ],
        &out,
    );
    assert_eq!(code, EXIT_OK);
    let config = config_from_report(&first).unwrap();
    assert_eq!(
        config_from_report(&serde_json::to_string(&config).unwrap()).unwrap(),
        config
    );
    // Re-running from the report writes the same bytes to the same path.
    assert_eq!(run(&["--config", out.to_str().unwrap()]), EXIT_OK);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(
        &["verify", "--suite", "pc", "--format", "csv"],
        &dir.path().join("pc.csv"),
    );
    assert_eq!(code, EXIT_OK);
    assert!(text.starts_with("suite,check,value,tolerance,passed"));
    // The TE contour discrepancy at the default cutoffs exceeds 2%.
    let (code, _) = run_to(
        &["verify", "--suite", "cauchy"],
        &dir.path().join("cauchy.json"),
    );
    assert_eq!(code, EXIT_VERIFICATION);
}

#[test]
fn casimir_reports_energy_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(
        &["casimir", "--model", "pc", "--Lz", "1e-6"],
        &dir.path().join("c.json"),
    );
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let total = rows.iter().find(|r| r["s"] == "total").unwrap();
    let u = total["U_J_per_m2"].as_f64().unwrap();
    let expect =
        -std::f64::consts::PI.powi(2) * 1.054_571_817e-34 * 299_792_458.0 / (720.0 * 1e-18);
    assert!((u / expect - 1.0).abs() < 1e-9);
}
