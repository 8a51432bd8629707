use std::time::Instant;

use hypersum::verify::{run_identity_suite, Manifest};

fn load(name: &str) -> Manifest {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../suites/");
    Manifest::from_toml(&std::fs::read_to_string(format!("{path}{name}")).unwrap()).unwrap()
}

#[test]
fn bundled_suite_passes() {
    let t = Instant::now();
    let report = run_identity_suite(&load("paper.suite"));
    print!("{}", report.table());
    for c in &report.cases {
        for ch in &c.checks {
            println!("  {} {} {}", c.id, ch.name, if ch.passed { "ok" } else { "FAILED" });
        }
    }
    println!("elapsed {:?}", t.elapsed());
    assert_eq!(report.cases.len(), 8);
    assert!(report.all_passed());
}

#[test]
fn every_mutant_is_caught() {
    let report = run_identity_suite(&load("mutations.suite"));
    print!("{}", report.table());
    assert!(report.cases.len() >= 8);
    for c in &report.cases {
        assert!(!c.passed(), "mutant {} survived", c.id);
        assert!(c.first_failure.is_some());
    }
}

#[test]
fn report_is_deterministic() {
    let m = load("paper.suite");
    let a = run_identity_suite(&m);
    let b = run_identity_suite(&m);
    assert_eq!(a.json_lines(), b.json_lines());
    assert_eq!(a.table(), b.table());
}
