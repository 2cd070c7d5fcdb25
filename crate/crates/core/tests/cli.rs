use std::process::{Command, Output};

fn genbeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genbeta")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn classify_golden_yrrap_is_eventually_periodic() {
    let o = genbeta(&["classify", "--named", "golden", "--pattern", "e1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("EventuallyPeriodic"), "{}", stdout(&o));
}

#[test]
fn rational_beta_is_unresolved() {
    let o = genbeta(&["classify", "--rational", "3/2", "--max-steps", "50"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_polynomial_is_an_error() {
    let o = genbeta(&["classify", "--poly", "-1,x,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn two_beta_forms_are_rejected() {
    let o = genbeta(&["classify", "--named", "golden", "--rational", "5/2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_suite_is_an_error() {
    assert_eq!(genbeta(&["verify", "nope"]).status.code(), Some(1));
}

#[test]
fn charpoly_of_golden_parry_orbit() {
    let o = genbeta(&["charpoly", "--poly", "-1,-1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("x^2 - x - 1"), "{}", stdout(&o));
}

#[test]
fn conjugates_csv_has_header() {
    let o = genbeta(&["conjugates", "--named", "golden"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("re,im,residual,is_beta\n"));
}

#[test]
fn member_on_the_spike_is_inner_yes() {
    let o = genbeta(&["member", "--z", "-0.9,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"]["kind"], "InnerYes");
}

#[test]
fn member_outside_the_disk_is_an_error() {
    assert_eq!(genbeta(&["member", "--z", "1.5,0"]).status.code(), Some(1));
}

#[test]
fn nonyrrap_certificate_json() {
    let o = genbeta(&["construct", "nonyrrap", "--seed-beta", "golden", "--n", "1", "--m", "2", "--approx-steps", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["certificate"]["f_at_minus_one"], "-1");
    assert!(v["approx_e1_orbit"].is_object());
}

#[test]
fn lemma1_construct_reports_orbit() {
    let o = genbeta(&["construct", "lemma1", "--m", "3,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["orbit"].is_object());
}

#[test]
fn cloud_writes_csv_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cloud.csv");
    let o = genbeta(&["--out", path.to_str().unwrap(), "cloud", "--pattern", "e1", "--random", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("re,im,source_beta,pattern,residual\n"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn chebyshev_reports_small_residual() {
    let o = genbeta(&["chebyshev", "--named", "golden", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["residual_ok"], true);
    assert_eq!(v["consistency"]["status"], "agree");
}

#[test]
fn verify_membership_suite_passes() {
    let o = genbeta(&["verify", "membership"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
