use std::process::{Command, Output};

use hypersum::gosper::{certificate_holds, CertificateRecord};
use hypersum::hyperterm::{parse_term, ParamBinding, Var};
use hypersum::zeilberger::{TelescopingCertificate, TelescopingRecord};

fn hypersum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypersum")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn suite(name: &str) -> String {
    format!("{}/../../suites/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn gosper_exit_codes() {
    let o = hypersum(&["gosper", "binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("R(n,k) = "));
    let o = hypersum(&["gosper", "binom(n,k)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("not Gosper-summable"));
    let o = hypersum(&["gosper", "k*fact(k)"]);
    assert!(stdout(&o).contains("G(n,k) = fact(k)"));
}

#[test]
fn parse_errors_point_at_the_input() {
    let o = hypersum(&["gosper", "binom(n,k^2)"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("nonlinear argument"), "{err}");
    assert!(err.contains("  binom(n,k^2)\n          ^"), "{err}");
    assert_eq!(hypersum(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hypersum(&["sum", "binom(n,k)", "--param", "r"]).status.code(), Some(1));
}

#[test]
fn zeil_recurrences() {
    let o = hypersum(&["zeil", "binom(n,k)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("recurrence: w(n+1) - 2*w(n) = 0"));
    let o = hypersum(&["zeil", "fact(k)", "--jmax", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("order <= 2"));
}

#[test]
fn machine_gosper_round_trips() {
    let src = "binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)";
    let o = hypersum(&["gosper", src, "--machine"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["summable"], true);
    let rec: CertificateRecord = serde_json::from_value(v["certificate"].clone()).unwrap();
    let r = rec.r.to_kfrac().unwrap();
    let ratio = parse_term(src).unwrap().shift_quotient(Var::K, &ParamBinding::new()).unwrap();
    assert!(certificate_holds(&r, &ratio));
    // all numbers are strings
    assert!(!stdout(&o).contains(":1") && !stdout(&o).contains("[1"));
}

#[test]
fn machine_zeil_round_trips() {
    let src = "binom(n,k)^2*binom(2k,n)";
    let o = hypersum(&["zeil", src, "--machine"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["natural_boundaries"], true);
    let rec: TelescopingRecord = serde_json::from_value(v["certificate"].clone()).unwrap();
    let cert = TelescopingCertificate {
        recurrence: rec.recurrence.to_recurrence().unwrap(),
        r: rec.r.to_kfrac().unwrap(),
    };
    assert!(cert.verify(&parse_term(src).unwrap(), &ParamBinding::new()).unwrap());
}

#[test]
fn identical_invocations_identical_output() {
    for args in [
        &["zeil", "binom(n,k)^3", "--machine"][..],
        &["suite", &suite("paper.suite"), "--machine"][..],
    ] {
        let (a, b) = (hypersum(args), hypersum(args));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn wz_check() {
    let f = "binom(n+r,n)*binom(r+k,r-1)*binom(n+k,n)";
    let g = format!("{f}*(k+1)*k/(n+1)");
    let op = "(n+1)*w(n+1) - n*w(n) = 0";
    let o = hypersum(&["wz-check", f, &g, "--operator", op, "--range", "r=1..3", "--range", "s=1..3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified on 9 binding(s)"));
    let bad = format!("{f}*(k+2)*k/(n+1)");
    let o = hypersum(&["wz-check", f, &bad, "--operator", op, "--param", "r=2"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sums_and_series() {
    let o = hypersum(&["sum", "binom(n,k)", "--n", "4"]);
    assert_eq!(stdout(&o), "n=4: 16\n");
    let o = hypersum(&["sum", "binom(n,k)", "--n", "2", "--machine"]);
    assert_eq!(stdout(&o), "{\"kind\":\"sum\",\"n\":\"2\",\"value\":\"4\"}\n");
    let o = hypersum(&["series", "ballot(2)", "--order", "3"]);
    assert_eq!(stdout(&o), "0: 1\n1: 4\n2: 15\n3: 56\n");
    assert_eq!(hypersum(&["series", "fibonacci"]).status.code(), Some(1));
}

#[test]
fn suite_exit_codes() {
    let o = hypersum(&["suite", &suite("mutations.suite")]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("franel-two-forms/inner-index"));

    let dir = std::env::temp_dir().join(format!("hypersum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.suite");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = hypersum(&["suite", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stderr).unwrap().contains("warning"));
    let broken = dir.join("broken.suite");
    std::fs::write(&broken, "[[case]]\nid = 3\n").unwrap();
    assert_eq!(hypersum(&["suite", broken.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
