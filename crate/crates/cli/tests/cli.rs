use std::path::Path;
use std::process::{Command, Output};

const GOLDEN_HEADER: &str = "n,rep_exponent,dim,box_radius,beta,kappa,loop_l1,loop_l2,len_gamma,len_gamma_c,\
wilson_re,wilson_im,wilson_se,wprime_re,wprime_im,wprime_se,thetaprod_re,thetaprod_im,thetaprod_se,\
upsilon_re,upsilon_im,upsilon_se,upsilon_z2_re,upsilon_z2_se,bound_rhs,a1_ok,a2_ok,a3_ok";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zn-higgs")).args(args).output().unwrap()
}

const SMALL: [&str; 14] = [
    "--dim", "2", "--box-radius", "3", "--n", "3", "--beta", "0.5", "--kappa", "0.5", "--sweeps", "100",
    "--thin", "1",
];

fn experiment(out: &Path) -> Output {
    let mut args = vec!["experiment", "--loop", "2x2", "--out", out.to_str().unwrap()];
    args.extend(SMALL);
    run(&args)
}

#[test]
fn dry_run_prints_resolved_config_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = run(&["experiment", "--dry-run", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["burnin"], 70);
    assert!(!out.exists());
}

#[test]
fn margin_violation_exits_2_with_rule_name() {
    let o = run(&["experiment", "--loop", "6x6", "--dry-run"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("loop margin rule"));
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"betta": 2.0}"#).unwrap();
    let o = run(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oversized_enumeration_exits_3() {
    let o = run(&["oracle", "--side", "6"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = experiment(&dir.path().join("missing").join("x.csv"));
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn oracle_reports_exact_checks() {
    let o = run(&["oracle", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["coupling_marginal_tv"].as_f64().unwrap() <= 1e-12);
    assert!(v["unitary_gauge_residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["poincare"]["consistent"], true);
}

#[test]
fn experiment_csv_is_golden_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert_eq!(experiment(&a).status.code(), Some(0));
    assert_eq!(experiment(&b).status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(GOLDEN_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 28);
    // Z^2 with n = 3: no W' / theta product and no Z_2 closed form
    for i in [13, 14, 15, 16, 17, 18, 22, 23] {
        assert_eq!(row[i], "", "column {i}");
    }
}

#[test]
fn check_reports_assumptions() {
    let o = run(&["check", "--beta", "1.0", "--kappa", "1.7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["assumptions"]["z2_order"], false);
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.svg");
    let mut args = vec!["render", "--pair", "--out", out.to_str().unwrap()];
    args.extend(SMALL);
    assert_eq!(run(&args).status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("<svg"));
}
