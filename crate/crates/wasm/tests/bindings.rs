use hypersum_wasm::{gosper, series_coefficients, zeilberger};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn gosper_json() {
    let v = parse(gosper("binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)"));
    assert_eq!(v["ok"], true);
    assert_eq!(v["summable"], true);
    assert!(v["R"].as_str().unwrap().starts_with("R(n,k) = "));
    assert_eq!(parse(gosper("binom(n,k)"))["summable"], false);
    let bad = parse(gosper("binom(n,k^2)"));
    assert_eq!(bad["ok"], false);
    assert!(bad["error"].as_str().unwrap().contains("nonlinear"));
}

#[test]
fn zeilberger_json() {
    let v = parse(zeilberger("binom(n,k)", 2));
    assert_eq!(v["recurrence"], "w(n+1) - 2*w(n) = 0");
    assert_eq!(v["natural"], true);
    assert_eq!(parse(zeilberger("binom(n,k)", 9))["ok"], false);
}

#[test]
fn series_json() {
    let v = parse(series_coefficients("catalan", 5));
    let c: Vec<&str> = v["coeffs"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(c, ["1", "1", "2", "5", "14", "42"]);
    assert_eq!(parse(series_coefficients("nope", 5))["ok"], false);
    assert_eq!(parse(series_coefficients("catalan", 10_000))["ok"], false);
}
