//! Running a manifest: one worker per case, reports in manifest order.

use std::fmt::Write as _;

use serde::Serialize;

use crate::arith::{parse_q, KFrac, Ring, Q};
use crate::gosper::{gosper_antidifference, telescope_sum, GosperResult};
use crate::hyperterm::{parse_linear, parse_term, term_ratio_is_one, HyperTerm, LinearForm, ParamBinding};
use crate::zeilberger::{creative_telescope, natural_sum, operator_equal, sum_recurrence_natural, Recurrence};

use super::expr::eval_side;
use super::{
    check_recurrence, grid_points, lower_boundary_vanishes, oracle_sum, wz_identity_holds, CaseSpec,
    Env, GosperSpec, LinComb, Manifest, RecurrenceSpec, SequenceSpec, SumExpr, WzPair, WzSpec,
    ZeilSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub status: &'static str,
    pub grid_size: usize,
    pub first_failure: Option<String>,
    #[serde(skip)]
    pub checks: Vec<CheckOutcome>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed)
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed()).count()
    }

    /// Human-readable table, one row per case.
    pub fn table(&self) -> String {
        let w = self.cases.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let mut out = format!("{:<w$}  {:<6}  {:>9}  {}\n", "id", "status", "grid", "first failure");
        for c in &self.cases {
            let _ = writeln!(
                out,
                "{:<w$}  {:<6}  {:>9}  {}",
                c.id,
                c.status,
                c.grid_size,
                c.first_failure.as_deref().unwrap_or("-")
            );
        }
        let _ = writeln!(out, "{} passed, {} failed", self.cases.len() - self.failures(), self.failures());
        out
    }

    /// One JSON object per case.
    pub fn json_lines(&self) -> String {
        self.cases
            .iter()
            .map(|c| serde_json::to_string(c).expect("plain data") + "\n")
            .collect()
    }
}

/// Check every case of the manifest; cases run concurrently but the
/// report order is the manifest order.
pub fn run_identity_suite(manifest: &Manifest) -> SuiteReport {
    let cases = std::thread::scope(|s| {
        let handles: Vec<_> = manifest.case.iter().map(|c| s.spawn(move || run_case(c))).collect();
        handles
            .into_iter()
            .zip(&manifest.case)
            .map(|(h, c)| {
                h.join().unwrap_or_else(|_| CaseReport {
                    id: c.id.clone(),
                    status: "fail",
                    grid_size: 0,
                    first_failure: Some("internal: checker panicked".into()),
                    checks: Vec::new(),
                })
            })
            .collect()
    });
    SuiteReport { cases }
}

/// Collected outcomes for one case.
struct Checks(Vec<CheckOutcome>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, result: Result<(), String>) {
        let (passed, detail) = match result {
            Ok(()) => (true, None),
            Err(d) => (false, Some(d)),
        };
        self.0.push(CheckOutcome {
            name: name.into(),
            passed,
            detail,
        });
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sym(name: &str) -> Result<char, String> {
    let mut cs = name.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) if c.is_ascii_lowercase() && c != 'k' => Ok(c),
        _ => Err(format!("bad grid symbol '{name}'")),
    }
}

/// `lhs <= c`, `lhs >= c` or `lhs == c` with a linear left side.
fn parse_constraint(s: &str) -> Result<(LinearForm, std::cmp::Ordering, bool), String> {
    use std::cmp::Ordering::*;
    for (op, ord, eq) in [("<=", Less, true), (">=", Greater, true), ("==", Equal, true), ("<", Less, false), (">", Greater, false)] {
        if let Some((l, r)) = s.split_once(op) {
            let l = parse_linear(l).map_err(err)?;
            let r = parse_linear(r).map_err(err)?;
            return Ok((l.sub(&r), ord, eq));
        }
    }
    Err(format!("bad constraint '{s}'"))
}

fn points(
    grid: &std::collections::BTreeMap<String, [i64; 2]>,
    constraints: &[String],
) -> Result<Vec<Env>, String> {
    let ranges = grid
        .iter()
        .map(|(k, [lo, hi])| Ok((sym(k)?, *lo, *hi)))
        .collect::<Result<Vec<_>, String>>()?;
    let cons = constraints.iter().map(|c| parse_constraint(c)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for p in grid_points(&ranges) {
        let mut env = Env::default();
        for (c, v) in p {
            env.set(c, v).map_err(err)?;
        }
        let mut keep = true;
        for (l, ord, eq) in &cons {
            let v = env.eval(l).map_err(err)?;
            keep &= v.cmp(&0) == *ord || (*eq && v == 0);
        }
        if keep {
            out.push(env);
        }
    }
    Ok(out)
}

fn describe(env: &Env) -> String {
    let mut parts = vec![format!("n={}", env.n)];
    parts.extend(env.binding.iter().map(|(s, v)| format!("{s}={v}")));
    parts.join(",")
}

fn describe_params(env: &Env) -> String {
    env.binding.to_string()
}

fn sequences(spec: &CaseSpec) -> Result<Vec<SequenceSpec>, String> {
    let mut out = Vec::new();
    for s in &spec.sequences {
        match s.as_str() {
            "catalan" => out.push(SequenceSpec::Catalan),
            "binom_row" => out.push(SequenceSpec::BinomRow),
            "symbolic" => out.push(SequenceSpec::Symbolic),
            other => {
                let seeds = other
                    .strip_prefix("random:")
                    .ok_or_else(|| format!("unknown sequence '{other}'"))?;
                let (a, b) = seeds.split_once("..").unwrap_or((seeds, seeds));
                let parse = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("bad seed in '{other}'"));
                for seed in parse(a)?..=parse(b)? {
                    out.push(SequenceSpec::random(seed, spec.sequence_length));
                }
            }
        }
    }
    Ok(out)
}

fn parse_side(parts: &[String]) -> Result<Vec<SumExpr>, String> {
    parts.iter().map(|s| SumExpr::parse(s).map_err(err)).collect()
}

fn q_of(s: &str) -> Result<Q, String> {
    parse_q(s.trim()).ok_or_else(|| format!("bad rational '{s}'"))
}

fn run_case(spec: &CaseSpec) -> CaseReport {
    let mut checks = Checks(Vec::new());
    let grid = points(&spec.grid, &spec.constraints);
    let has_identity = !spec.lhs.is_empty() || !spec.rhs.is_empty();
    let grid_size = match &grid {
        Ok(g) if has_identity || spec.gosper.is_some() => g.len(),
        _ => 0,
    };
    match grid {
        Err(e) => checks.push("grid", Err(e)),
        Ok(grid) => {
            if has_identity {
                check_identity(spec, &grid, &mut checks);
            }
            if let Some(g) = &spec.gosper {
                check_gosper(g, &grid, &mut checks);
            }
        }
    }
    if let Some(z) = &spec.zeilberger {
        check_zeilberger(z, &mut checks);
    }
    if let Some(r) = &spec.recurrence {
        check_rec(spec, r, &mut checks);
    }
    if let Some(w) = &spec.wz {
        check_wz(w, &mut checks);
    }
    let first_failure = checks
        .0
        .iter()
        .find(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail.as_deref().unwrap_or("failed")));
    CaseReport {
        id: spec.id.clone(),
        status: if first_failure.is_none() && !checks.0.is_empty() { "pass" } else { "fail" },
        grid_size,
        first_failure: first_failure.or_else(|| checks.0.is_empty().then(|| "no checks".to_string())),
        checks: checks.0,
    }
}

fn check_identity(spec: &CaseSpec, grid: &[Env], checks: &mut Checks) {
    let sides = (|| {
        let mut sides = vec![("lhs".to_string(), parse_side(&spec.lhs)?), ("rhs".to_string(), parse_side(&spec.rhs)?)];
        for (i, a) in spec.also.iter().enumerate() {
            sides.push((format!("also{i}"), parse_side(a)?));
        }
        Ok::<_, String>(sides)
    })();
    let seqs = sequences(spec);
    let (sides, seqs) = match (sides, seqs) {
        (Ok(s), Ok(q)) => (s, q),
        (Err(e), _) | (_, Err(e)) => return checks.push("parse", Err(e)),
    };
    let labels: Vec<String> = if seqs.is_empty() {
        vec!["identity".into()]
    } else {
        seqs.iter().map(|s| format!("identity[{}]", s.name())).collect()
    };
    let mut failures: Vec<Option<String>> = vec![None; labels.len()];
    for env in grid {
        let values: Result<Vec<LinComb>, _> = sides.iter().map(|(_, s)| eval_side(s, env)).collect();
        let values = match values {
            Ok(v) => v,
            Err(e) => {
                for f in failures.iter_mut().filter(|f| f.is_none()) {
                    *f = Some(format!("{}: {e}", describe(env)));
                }
                continue;
            }
        };
        let mismatch = |i: usize| format!("{}: {} = {} but {} = {}", describe(env), sides[0].0, values[0], sides[i].0, values[i]);
        if seqs.is_empty() {
            if failures[0].is_none() {
                if let Some(i) = (1..values.len()).find(|&i| values[i] != values[0]) {
                    failures[0] = Some(mismatch(i));
                }
            }
            continue;
        }
        for (slot, seq) in failures.iter_mut().zip(&seqs) {
            if slot.is_some() {
                continue;
            }
            let inst: Result<Vec<Option<Q>>, _> = values.iter().map(|v| v.instantiate(seq, env.n)).collect();
            match inst {
                Err(e) => *slot = Some(format!("{}: {e}", describe(env))),
                Ok(xs) if xs.iter().any(Option::is_none) => {
                    if let Some(i) = (1..values.len()).find(|&i| values[i] != values[0]) {
                        *slot = Some(mismatch(i));
                    }
                }
                Ok(xs) => {
                    if let Some(i) = (1..xs.len()).find(|&i| xs[i] != xs[0]) {
                        *slot = Some(format!(
                            "{} {}: {} = {} but {} = {}",
                            describe(env),
                            seq.name(),
                            sides[0].0,
                            xs[0].as_ref().map_or("?".into(), Q::to_string),
                            sides[i].0,
                            xs[i].as_ref().map_or("?".into(), Q::to_string)
                        ));
                    }
                }
            }
        }
    }
    for (label, f) in labels.into_iter().zip(failures) {
        checks.push(label, f.map_or(Ok(()), Err));
    }
}

fn check_gosper(spec: &GosperSpec, grid: &[Env], checks: &mut Checks) {
    let parsed = (|| {
        let f = parse_term(&spec.term).map_err(err)?;
        let lo = parse_linear(&spec.lower).map_err(err)?;
        let hi = parse_linear(&spec.upper).map_err(err)?;
        let g = spec.antidifference.as_deref().map(parse_term).transpose().map_err(err)?;
        Ok::<_, String>((f, lo, hi, g))
    })();
    let (f, lo, hi, expected) = match parsed {
        Ok(p) => p,
        Err(e) => return checks.push("gosper.parse", Err(e)),
    };
    let binding = ParamBinding::new();
    let cert = match gosper_antidifference(&f, &binding) {
        Ok(GosperResult::Summable(c)) => c,
        Ok(GosperResult::NotSummable) => return checks.push("gosper.certificate", Err("not Gosper-summable".into())),
        Err(e) => return checks.push("gosper.certificate", Err(err(e))),
    };
    checks.push(
        "gosper.certificate",
        match cert.verify(&f, &binding) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("identity fails for {}", cert.text())),
            Err(e) => Err(err(e)),
        },
    );
    if let Some(g) = expected {
        let ours = cert.antidifference(&f);
        checks.push(
            "gosper.antidifference",
            match term_ratio_is_one(&ours, &g, &binding) {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("derived G = {ours} differs from {g}")),
                Err(e) => Err(err(e)),
            },
        );
    }
    let mut failure = None;
    for env in grid {
        let run = || -> Result<Option<String>, String> {
            let (a, b) = (env.eval(&lo).map_err(err)?, env.eval(&hi).map_err(err)?);
            let t = telescope_sum(&f, &cert, env.n, a, b, &env.binding).map_err(err)?;
            let o = oracle_sum(&f, env.n, &lo, &hi, &env.binding).map_err(err)?;
            Ok((t != o).then(|| format!("{}: telescoped {t} but oracle {o}", describe(env))))
        };
        match run() {
            Ok(None) => {}
            Ok(Some(m)) | Err(m) => {
                failure = Some(m);
                break;
            }
        }
    }
    checks.push("gosper.telescoping", failure.map_or(Ok(()), Err));
}

fn check_zeilberger(spec: &ZeilSpec, checks: &mut Checks) {
    let binding = ParamBinding::new();
    let expected: Recurrence = match spec.operator.parse() {
        Ok(r) => r,
        Err(e) => return checks.push("zeilberger.parse", Err(err(e))),
    };
    let expected = expected.normalized();
    let mut terms = Vec::new();
    for (i, src) in spec.terms.iter().enumerate() {
        let f = match parse_term(src) {
            Ok(f) => f,
            Err(e) => {
                checks.push(format!("zeilberger[{i}].parse"), Err(err(e)));
                continue;
            }
        };
        let derived = creative_telescope(&f, spec.jmax, &binding)
            .map_err(err)
            .and_then(|cert| match cert.verify(&f, &binding) {
                Ok(true) => sum_recurrence_natural(&f, &cert, &binding).map_err(err),
                Ok(false) => Err("certificate identity fails".into()),
                Err(e) => Err(err(e)),
            });
        checks.push(
            format!("zeilberger[{i}].recurrence"),
            match derived {
                Ok(rec) if operator_equal(&rec, &expected) => Ok(()),
                Ok(rec) => Err(format!("derived {rec}, expected {expected}")),
                Err(e) => Err(e),
            },
        );
        terms.push(f);
    }
    let sums: Result<Vec<Vec<Q>>, String> = terms
        .iter()
        .map(|f| {
            (0..=spec.check_upto + expected.order() as i64)
                .map(|n| natural_sum(f, n, &binding).map_err(err))
                .collect()
        })
        .collect();
    let sums = match sums {
        Ok(s) => s,
        Err(e) => return checks.push("zeilberger.oracle", Err(e)),
    };
    let mut failure = None;
    for (i, s) in sums.iter().enumerate() {
        match check_recurrence(&expected, |m| s.get(m as usize).cloned(), 0, spec.check_upto, &binding) {
            Ok(true) => {}
            Ok(false) => failure = failure.or(Some(format!("sums of term {i} violate {expected}"))),
            Err(e) => failure = failure.or(Some(err(e))),
        }
    }
    checks.push("zeilberger.oracle", failure.map_or(Ok(()), Err));
    if spec.initial.is_empty() {
        return;
    }
    let mut failure = None;
    if spec.initial.len() < expected.order() {
        failure = Some(format!("need {} initial values", expected.order()));
    }
    for (n, v) in spec.initial.iter().enumerate() {
        let v = match q_of(v) {
            Ok(v) => v,
            Err(e) => {
                failure = failure.or(Some(e));
                continue;
            }
        };
        for (i, s) in sums.iter().enumerate() {
            if s.get(n) != Some(&v) {
                failure = failure.or(Some(format!("term {i}: w({n}) = {:?}, expected {v}", s.get(n).map(Q::to_string))));
            }
        }
    }
    checks.push("zeilberger.initial", failure.map_or(Ok(()), Err));
}

fn check_rec(case: &CaseSpec, spec: &RecurrenceSpec, checks: &mut Checks) {
    let binding = ParamBinding::new();
    let rec: Recurrence = match spec.recurrence.parse() {
        Ok(r) => r,
        Err(e) => return checks.push("recurrence.parse", Err(err(e))),
    };
    let names: Vec<String> = if spec.sides.is_empty() {
        vec!["lhs".into(), "rhs".into()]
    } else {
        spec.sides.clone()
    };
    let [lo, hi] = spec.n;
    for name in &names {
        let src = match name.as_str() {
            "lhs" => Some(&case.lhs),
            "rhs" => Some(&case.rhs),
            other => other
                .strip_prefix("also")
                .and_then(|i| i.parse::<usize>().ok())
                .and_then(|i| case.also.get(i)),
        };
        let result = src
            .ok_or_else(|| format!("unknown side '{name}'"))
            .and_then(|s| parse_side(s))
            .and_then(|side| {
                let values = (lo..=hi + rec.order() as i64)
                    .map(|n| {
                        let v = eval_side(&side, &Env::new(n)).map_err(err)?;
                        if v.coeffs.is_empty() {
                            Ok(v.constant)
                        } else {
                            Err(format!("side '{name}' depends on a sequence"))
                        }
                    })
                    .collect::<Result<Vec<Q>, String>>()?;
                let w = |m: i64| values.get((m - lo) as usize).cloned();
                for n in lo..=hi {
                    if !check_recurrence(&rec, w, n, n, &binding).map_err(err)? {
                        return Err(format!(
                            "n={n}: left side {} but right side {}",
                            rec.apply(n, w).map_or("?".into(), |v| v.to_string()),
                            rec.rhs_at(n, &binding).map_or_else(err, |v| v.to_string())
                        ));
                    }
                }
                Ok(())
            });
        checks.push(format!("recurrence[{name}]"), result);
    }
    if let Some(form) = &spec.rhs_form {
        let result = parse_term(form).map_err(err).and_then(|t| {
            let ours = rec.rhs.clone().unwrap_or_else(|| HyperTerm::from_prefactor(KFrac::zero()));
            match term_ratio_is_one(&ours, &t, &binding) {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("{ours} and {t} differ")),
                Err(e) => Err(err(e)),
            }
        });
        checks.push("recurrence.rhs_form", result);
    }
    if let Some((n, value)) = &spec.instance {
        let result = q_of(value).and_then(|v| {
            let side = parse_side(&case.lhs)?;
            let w = |m: i64| eval_side(&side, &Env::new(m)).ok().map(|c| c.constant);
            let left = rec.apply(*n, w).ok_or_else(|| format!("no value near n={n}"))?;
            let right = rec.rhs_at(*n, &binding).map_err(err)?;
            if left == v && right == v {
                Ok(())
            } else {
                Err(format!("n={n}: left {left}, right {right}, expected {v}"))
            }
        });
        checks.push("recurrence.instance", result);
    }
    if let Some(src) = &spec.summand {
        let result = parse_term(src).map_err(err).and_then(|f| {
            let cert = creative_telescope(&f, spec.jmax, &binding).map_err(err)?;
            match cert.verify(&f, &binding) {
                Ok(true) => Ok(()),
                Ok(false) => Err("certificate identity fails".into()),
                Err(e) => Err(err(e)),
            }
        });
        checks.push("recurrence.certificate", result);
    }
}

fn check_wz(spec: &WzSpec, checks: &mut Checks) {
    let parsed = (|| {
        let op: Recurrence = spec.operator.parse().map_err(err)?;
        let diff: Recurrence = spec.difference.parse().map_err(err)?;
        let pairs = spec
            .pairs
            .iter()
            .map(|p| {
                let pair = WzPair {
                    f: parse_term(&p.f).map_err(err)?,
                    g: parse_term(&p.g).map_err(err)?,
                    operator: op.clone(),
                };
                Ok::<_, String>((pair, parse_linear(&p.top).map_err(err)?))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let initial = match &spec.initial {
            Some((n, t)) => Some((*n, parse_term(t).map_err(err)?)),
            None => None,
        };
        let grid = points(&spec.grid, &[])?;
        Ok::<_, String>((op, diff.normalized(), pairs, initial, grid))
    })();
    let (op, diff, pairs, initial, grid) = match parsed {
        Ok(p) => p,
        Err(e) => return checks.push("wz.parse", Err(e)),
    };
    checks.push(
        "wz.operator",
        if diff.coeffs == op.coeffs {
            Ok(())
        } else {
            Err(format!("difference equation normalizes to {diff}, operator is {op}"))
        },
    );
    let mut fail = vec![None::<String>; 5];
    let note = |slot: &mut Option<String>, msg: String| {
        if slot.is_none() {
            *slot = Some(msg);
        }
    };
    for env in &grid {
        let b = &env.binding;
        let at = describe_params(env);
        let mut tops = Vec::new();
        for (i, (pair, top)) in pairs.iter().enumerate() {
            match wz_identity_holds(pair, b) {
                Ok(true) => {}
                Ok(false) => note(&mut fail[0], format!("{at}: pair {i} fails")),
                Err(e) => note(&mut fail[0], format!("{at}: pair {i}: {e}")),
            }
            match lower_boundary_vanishes(pair, b) {
                Ok(true) => {}
                Ok(false) => note(&mut fail[1], format!("{at}: G{i}(n,0) is not zero")),
                Err(e) => note(&mut fail[1], format!("{at}: {e}")),
            }
            let edge = env
                .eval(top)
                .map_err(err)
                .and_then(|t| Ok((t, pair.g.concrete(b).and_then(|g| g.at_k(t)).map_err(err)?)));
            match edge {
                Ok(e) => tops.push(e),
                Err(e) => note(&mut fail[2], format!("{at}: {e}")),
            }
        }
        if let Some(rhs) = diff.rhs.as_ref() {
            for (i, (_, g_top)) in tops.iter().enumerate() {
                match term_ratio_is_one(g_top, rhs, b) {
                    Ok(true) => {}
                    Ok(false) => note(&mut fail[2], format!("{at}: G{i}(n,top) = {g_top} differs from {rhs}")),
                    Err(e) => note(&mut fail[2], format!("{at}: {e}")),
                }
            }
        } else {
            note(&mut fail[2], "difference equation has no right side".into());
        }
        // the sums f_i(n) themselves
        let [lo, hi] = spec.check_n;
        for (i, ((pair, _), (t, _))) in pairs.iter().zip(&tops).enumerate() {
            let upper = LinearForm::constant(t - 1);
            let f = |m: i64| oracle_sum(&pair.f, m, &LinearForm::constant(0), &upper, b).ok();
            match check_recurrence(&diff, f, lo, hi, b) {
                Ok(true) => {}
                Ok(false) => note(&mut fail[3], format!("{at}: f{i} violates the difference equation")),
                Err(e) => note(&mut fail[3], format!("{at}: {e}")),
            }
            if let Some((n0, init)) = &initial {
                let want = init.eval(*n0, 0, b);
                let got = f(*n0);
                if want.as_ref().ok() != got.as_ref() {
                    note(&mut fail[4], format!("{at}: f{i}({n0}) = {got:?}, expected {want:?}"));
                }
            }
        }
    }
    for (name, f) in ["wz.pairs", "wz.lower_boundary", "wz.upper_boundary", "wz.difference", "wz.initial"]
        .into_iter()
        .zip(fail)
    {
        if name == "wz.initial" && initial.is_none() {
            continue;
        }
        checks.push(name, f.map_or(Ok(()), Err));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> SuiteReport {
        run_identity_suite(&Manifest::from_toml(src).unwrap())
    }

    #[test]
    fn simple_identity_passes_and_mutation_fails() {
        let r = run(r#"
[[case]]
id = "row"
grid = { n = [0, 12] }
lhs = ["sum(k=0..n) binom(n,k)"]
rhs = ["2^n"]

[[case]]
id = "row-bad"
grid = { n = [0, 12] }
lhs = ["sum(k=0..n) binom(n,k)"]
rhs = ["2^(n+1)"]
"#);
        assert!(r.cases[0].passed(), "{:?}", r.cases[0]);
        assert!(!r.cases[1].passed());
        assert_eq!(r.cases[0].grid_size, 13);
        assert!(r.cases[1].first_failure.as_deref().unwrap().contains("n=0"));
        assert!(r.table().contains("1 passed, 1 failed"));
        let lines: Vec<serde_json::Value> =
            r.json_lines().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines[1]["status"], "fail");
    }

    #[test]
    fn sequences_and_constraints() {
        let r = run(r#"
[[case]]
id = "binomial-transform"
grid = { n = [0, 6], m = [0, 6] }
constraints = ["n+m<=6"]
sequences = ["symbolic", "catalan", "random:1..3"]
lhs = ["sum(i=0..n) sum(j=0..m) binom(n,i)*binom(m,j)*a[i+j]"]
rhs = ["sum(l=0..n+m) binom(n+m,l)*a[l]"]
"#);
        let c = &r.cases[0];
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.grid_size, 28);
        assert_eq!(c.checks.len(), 5);
    }

    #[test]
    fn empty_case_fails() {
        let r = run("[[case]]\nid = 'nothing'\n");
        assert!(!r.all_passed());
    }

    #[test]
    fn gosper_block() {
        let r = run(r#"
[[case]]
id = "k-sum"
grid = { n = [0, 10] }
lhs = ["sum(k=0..n) k*binom(n,k)"]
rhs = ["n*2^(n-1)"]

[case.gosper]
term = "k"
lower = "0"
upper = "n"
antidifference = "k*(k-1)/2"
"#);
        assert!(r.cases[0].passed(), "{:?}", r.cases[0]);
    }
}
