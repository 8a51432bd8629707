use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{q, KPoly, QFrac, QPoly, Ring};

use super::{ParamBinding, TermError, Var};

/// Integer-linear expression `coeff_n*n + coeff_k*k + sum(c_p * p) + constant`
/// where `p` ranges over auxiliary parameter symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    pub coeff_n: i64,
    pub coeff_k: i64,
    pub constant: i64,
    pub params: BTreeMap<char, i64>,
}

impl LinearForm {
    pub fn constant(c: i64) -> Self {
        LinearForm {
            constant: c,
            ..Default::default()
        }
    }

    pub fn new(coeff_n: i64, coeff_k: i64, constant: i64) -> Self {
        LinearForm {
            coeff_n,
            coeff_k,
            constant,
            params: BTreeMap::new(),
        }
    }

    pub fn param(sym: char) -> Self {
        let mut params = BTreeMap::new();
        params.insert(sym, 1);
        LinearForm {
            params,
            ..Default::default()
        }
    }

    pub fn coeff(&self, var: Var) -> i64 {
        match var {
            Var::N => self.coeff_n,
            Var::K => self.coeff_k,
        }
    }

    /// No dependence on `n`, `k` or any parameter.
    pub fn is_constant(&self) -> bool {
        self.coeff_n == 0 && self.coeff_k == 0 && self.params.is_empty()
    }

    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut params = self.params.clone();
        for (s, c) in &other.params {
            *params.entry(*s).or_insert(0) += c;
        }
        params.retain(|_, c| *c != 0);
        LinearForm {
            coeff_n: self.coeff_n + other.coeff_n,
            coeff_k: self.coeff_k + other.coeff_k,
            constant: self.constant + other.constant,
            params,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, s: i64) -> Self {
        if s == 0 {
            return LinearForm::default();
        }
        LinearForm {
            coeff_n: self.coeff_n * s,
            coeff_k: self.coeff_k * s,
            constant: self.constant * s,
            params: self.params.iter().map(|(p, c)| (*p, c * s)).collect(),
        }
    }

    pub fn offset(&self, delta: i64) -> Self {
        LinearForm {
            constant: self.constant + delta,
            ..self.clone()
        }
    }

    /// Substitute bound parameters; unbound ones stay symbolic.
    pub fn bind(&self, binding: &ParamBinding) -> Self {
        let mut out = self.clone();
        out.params.clear();
        for (s, c) in &self.params {
            match binding.get(*s) {
                Some(v) => out.constant += c * v,
                None => {
                    out.params.insert(*s, *c);
                }
            }
        }
        out
    }

    /// Substitute `k -> value`.
    pub fn at_k(&self, value: i64) -> Self {
        LinearForm {
            coeff_k: 0,
            constant: self.constant + self.coeff_k * value,
            ..self.clone()
        }
    }

    pub fn eval(&self, n: i64, k: i64, binding: &ParamBinding) -> Result<i64, TermError> {
        let mut v = self.coeff_n * n + self.coeff_k * k + self.constant;
        for (s, c) in &self.params {
            let pv = binding.get(*s).ok_or(TermError::UnboundParameter(*s))?;
            v += c * pv;
        }
        Ok(v)
    }

    /// The form as a polynomial in `k` over `Q(n)`; parameters must be bound.
    pub fn to_kpoly(&self) -> Result<KPoly, TermError> {
        if let Some(s) = self.params.keys().next() {
            return Err(TermError::UnboundParameter(*s));
        }
        let c0 = QFrac::from_poly(QPoly::new(vec![q(self.constant), q(self.coeff_n)]));
        Ok(KPoly::new(vec![c0, QFrac::from_i64(self.coeff_k)]))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut push = |c: i64, sym: String| {
            if c == 0 {
                return;
            }
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = c.unsigned_abs();
            let body = if sym.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                sym
            } else {
                format!("{mag}{sym}")
            };
            out.push_str(sign);
            out.push_str(&body);
        };
        push(self.coeff_n, "n".into());
        push(self.coeff_k, "k".into());
        for (s, c) in &self.params {
            push(*c, s.to_string());
        }
        push(self.constant, String::new());
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(LinearForm::new(2, -2, 2).to_string(), "2n-2k+2");
        assert_eq!(LinearForm::new(0, 1, 0).to_string(), "k");
        assert_eq!(LinearForm::new(-1, 0, -3).to_string(), "-n-3");
        assert_eq!(LinearForm::constant(0).to_string(), "0");
        assert_eq!(LinearForm::param('r').offset(-1).to_string(), "r-1");
    }

    #[test]
    fn binding_and_eval() {
        let f = LinearForm::new(1, 1, 0).add(&LinearForm::param('s').scale(2));
        let mut b = ParamBinding::default();
        assert!(matches!(f.eval(1, 1, &b), Err(TermError::UnboundParameter('s'))));
        b.insert('s', 3).unwrap();
        assert_eq!(f.eval(1, 1, &b).unwrap(), 8);
        assert_eq!(f.bind(&b), LinearForm::new(1, 1, 6));
        assert_eq!(f.bind(&b).at_k(4), LinearForm::new(1, 0, 10));
    }
}
