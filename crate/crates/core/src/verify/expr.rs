//! Nested finite sums of hypergeometric terms, optionally weighted by a
//! sequence entry: `sum(i=0..n) sum(j=0..m) binom(n,i)*binom(m,j)*a[i+j]`.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{q, Q};
use crate::hyperterm::{parse_linear, parse_term, HyperTerm, LinearForm, ParamBinding};

use super::{is_zero, SequenceSpec, VerifyError};

/// Values of `n`, `k` and every other bound symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    pub n: i64,
    pub k: i64,
    pub binding: ParamBinding,
}

impl Env {
    pub fn new(n: i64) -> Self {
        Env {
            n,
            ..Env::default()
        }
    }

    pub fn set(&mut self, sym: char, value: i64) -> Result<(), VerifyError> {
        match sym {
            'n' => self.n = value,
            'k' => self.k = value,
            _ => self.binding.insert(sym, value)?,
        }
        Ok(())
    }

    pub fn eval(&self, l: &LinearForm) -> Result<i64, VerifyError> {
        Ok(l.eval(self.n, self.k, &self.binding)?)
    }
}

/// `constant + sum_i coeffs[i] * a_i`, with no zero coefficients stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinComb {
    pub constant: Q,
    pub coeffs: BTreeMap<i64, Q>,
}

impl LinComb {
    pub fn add_assign(&mut self, other: &LinComb) {
        self.constant += &other.constant;
        for (i, c) in &other.coeffs {
            self.add_coeff(*i, c.clone());
        }
    }

    fn add_coeff(&mut self, i: i64, c: Q) {
        let slot = self.coeffs.entry(i).or_insert_with(|| q(0));
        *slot += c;
        if is_zero(slot) {
            self.coeffs.remove(&i);
        }
    }

    /// Substitute the sequence; `None` for the symbolic table.
    pub fn instantiate(&self, seq: &SequenceSpec, n: i64) -> Result<Option<Q>, VerifyError> {
        let mut acc = self.constant.clone();
        for (i, c) in &self.coeffs {
            match seq.value(*i, n)? {
                Some(v) => acc += c * v,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !is_zero(&self.constant) || self.coeffs.is_empty() {
            parts.push(self.constant.to_string());
        }
        for (i, c) in &self.coeffs {
            parts.push(format!("{c}*a[{i}]"));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// One summand string of a manifest side.
#[derive(Debug, Clone, PartialEq)]
pub struct SumExpr {
    /// Outermost first: `(variable, lower, upper)`, both bounds inclusive.
    pub sums: Vec<(char, LinearForm, LinearForm)>,
    pub negate: bool,
    pub term: HyperTerm,
    pub index: Option<LinearForm>,
}

fn syntax(s: &str, msg: &str) -> VerifyError {
    VerifyError::Syntax(format!("{msg} in '{s}'"))
}

impl SumExpr {
    pub fn parse(src: &str) -> Result<Self, VerifyError> {
        let mut rest = src.trim();
        let mut negate = false;
        if let Some(r) = rest.strip_prefix('-') {
            if r.trim_start().starts_with("sum(") {
                negate = true;
                rest = r.trim_start();
            }
        }
        let mut sums = Vec::new();
        while let Some(r) = rest.strip_prefix("sum(") {
            let close = r.find(')').ok_or_else(|| syntax(src, "unclosed sum("))?;
            let (var, range) = r[..close]
                .split_once('=')
                .ok_or_else(|| syntax(src, "expected sum(v=lo..hi)"))?;
            let (lo, hi) = range
                .split_once("..")
                .ok_or_else(|| syntax(src, "expected lo..hi"))?;
            let mut chars = var.trim().chars();
            let v = match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() && c != 'n' && c != 'a' => c,
                _ => return Err(syntax(src, "bad summation variable")),
            };
            let lin = |s: &str| parse_linear(s).map_err(|e| syntax(src, &e.to_string()));
            sums.push((v, lin(lo)?, lin(hi)?));
            rest = r[close + 1..].trim_start();
        }
        let (body, index) = match rest.rfind("a[") {
            Some(at) if rest.ends_with(']') && !rest[..at].ends_with(|c: char| c.is_alphanumeric()) => {
                let idx = parse_linear(&rest[at + 2..rest.len() - 1])
                    .map_err(|e| syntax(src, &e.to_string()))?;
                let head = rest[..at].trim_end();
                let head = head.strip_suffix('*').unwrap_or(head).trim();
                (if head.is_empty() { "1" } else { head }, Some(idx))
            }
            _ => (rest, None),
        };
        let term = parse_term(body).map_err(|e| syntax(src, &e.to_string()))?;
        Ok(SumExpr {
            sums,
            negate,
            term,
            index,
        })
    }

    pub fn eval(&self, env: &Env) -> Result<LinComb, VerifyError> {
        let mut env = env.clone();
        let mut acc = LinComb::default();
        self.accumulate(0, &mut env, &mut acc)?;
        if self.negate {
            acc.constant = -acc.constant;
            for c in acc.coeffs.values_mut() {
                *c = -c.clone();
            }
        }
        Ok(acc)
    }

    fn accumulate(&self, depth: usize, env: &mut Env, acc: &mut LinComb) -> Result<(), VerifyError> {
        let Some((v, lo, hi)) = self.sums.get(depth) else {
            let value = self.term.eval(env.n, env.k, &env.binding)?;
            if is_zero(&value) {
                return Ok(());
            }
            match &self.index {
                None => acc.constant += value,
                Some(l) => acc.add_coeff(env.eval(l)?, value),
            }
            return Ok(());
        };
        let (a, b) = (env.eval(lo)?, env.eval(hi)?);
        for x in a..=b {
            env.set(*v, x)?;
            self.accumulate(depth + 1, env, acc)?;
        }
        Ok(())
    }
}

/// Sum of several summand strings.
pub(crate) fn eval_side(side: &[SumExpr], env: &Env) -> Result<LinComb, VerifyError> {
    let mut acc = LinComb::default();
    for e in side {
        acc.add_assign(&e.eval(env)?);
    }
    Ok(acc)
}
