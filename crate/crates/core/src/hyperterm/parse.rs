//! Text syntax for terms.
//!
//! ```text
//! expr    := ['+'|'-'] product (('+'|'-') product)*
//! product := seq ['/' seq]            everything after '/' is the denominator
//! seq     := power (['*'] power)*     multiplication may be implicit
//! power   := atom ['^' (int | '-' int | sym | '(' expr ')')]
//! atom    := int | sym | 'binom(' expr ',' expr ')' | 'fact(' expr ')' | '(' expr ')'
//! ```
//!
//! Letter runs other than the keywords are read one symbol per letter, so
//! `nk` is `n*k`. Symbols other than `n` and `k` are parameters.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{Factor, HyperTerm, LinearForm, TermError};
use crate::arith::{q, KFrac, KPoly, QFrac, QPoly, Ring, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Sym(char),
    Binom,
    Fact,
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), start));
        } else if c.is_ascii_alphabetic() {
            let rest: String = chars[i..].iter().take(5).collect();
            if rest.starts_with("binom") {
                out.push((Tok::Binom, i));
                i += 5;
            } else if rest.starts_with("fact") {
                out.push((Tok::Fact, i));
                i += 4;
            } else {
                out.push((Tok::Sym(c), i));
                i += 1;
            }
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return err(i, format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

type Monomial = BTreeMap<char, u32>;

/// Sparse multivariate polynomial over `Q` in single-letter symbols.
#[derive(Debug, Clone, PartialEq)]
struct MPoly(BTreeMap<Monomial, Q>);

impl MPoly {
    fn constant(c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !Zero::is_zero(&c) {
            m.insert(Monomial::new(), c);
        }
        MPoly(m)
    }

    fn sym(s: char) -> Self {
        let mut mono = Monomial::new();
        mono.insert(s, 1);
        MPoly(BTreeMap::from([(mono, q(1))]))
    }

    fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(q(0)),
            1 => self.0.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    fn has_params(&self) -> bool {
        self.0.keys().any(|m| m.keys().any(|s| *s != 'n' && *s != 'k'))
    }

    fn add(&self, other: &Self, sign: i64) -> Self {
        let mut m = self.0.clone();
        for (mono, c) in &other.0 {
            let e = m.entry(mono.clone()).or_insert_with(|| q(0));
            *e += c * q(sign);
        }
        m.retain(|_, c| !Zero::is_zero(c));
        MPoly(m)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = MPoly(BTreeMap::new());
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let mut mono = ma.clone();
                for (s, e) in mb {
                    *mono.entry(*s).or_insert(0) += e;
                }
                out = out.add(&MPoly(BTreeMap::from([(mono, ca * cb)])), 1);
            }
        }
        out
    }

    fn pow(&self, e: u32) -> Self {
        (0..e).fold(MPoly::constant(q(1)), |acc, _| acc.mul(self))
    }

    fn to_linear(&self, pos: usize) -> Result<LinearForm, ParseError> {
        let mut out = LinearForm::default();
        for (mono, c) in &self.0 {
            if !c.is_integer() {
                return err(pos, "non-integer linear-form coefficient");
            }
            let Some(v) = c.to_integer().to_i64() else {
                return err(pos, "coefficient out of range");
            };
            let degree: u32 = mono.values().sum();
            match (degree, mono.keys().next()) {
                (0, _) => out.constant = v,
                (1, Some('n')) => out.coeff_n = v,
                (1, Some('k')) => out.coeff_k = v,
                (1, Some(s)) => {
                    out.params.insert(*s, v);
                }
                _ => return err(pos, "nonlinear argument"),
            }
        }
        Ok(out)
    }

    /// A parameter-free polynomial as an element of `Q(n)[k]`.
    fn to_kpoly(&self) -> KPoly {
        let mut rows: Vec<BTreeMap<u32, Q>> = Vec::new();
        for (mono, c) in &self.0 {
            let dk = mono.get(&'k').copied().unwrap_or(0) as usize;
            let dn = mono.get(&'n').copied().unwrap_or(0);
            if rows.len() <= dk {
                rows.resize(dk + 1, BTreeMap::new());
            }
            rows[dk].insert(dn, c.clone());
        }
        KPoly::new(
            rows.into_iter()
                .map(|row| {
                    let top = row.keys().max().copied().map_or(0, |d| d as usize + 1);
                    let mut cs = vec![q(0); top];
                    for (d, c) in row {
                        cs[d as usize] = c;
                    }
                    QFrac::from_poly(QPoly::new(cs))
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone)]
enum Val {
    Poly(MPoly),
    Term(HyperTerm),
}

fn term_err(pos: usize, e: TermError) -> ParseError {
    ParseError {
        pos,
        msg: e.to_string(),
    }
}

impl Val {
    fn into_term(self, pos: usize) -> Result<HyperTerm, ParseError> {
        match self {
            Val::Term(t) => Ok(t),
            Val::Poly(p) if p.has_params() && p.as_constant().is_none() => {
                let l = p.to_linear(pos)?;
                HyperTerm::new(vec![(Factor::Linear(l), 1)], KFrac::one()).map_err(|e| term_err(pos, e))
            }
            Val::Poly(p) => Ok(HyperTerm::from_prefactor(KFrac::from_poly(p.to_kpoly()))),
        }
    }

    fn as_constant(&self) -> Option<Q> {
        match self {
            Val::Poly(p) => p.as_constant(),
            Val::Term(t) if t.factors().is_empty() => {
                t.prefactor().as_constant().and_then(|c| c.as_constant())
            }
            Val::Term(_) => None,
        }
    }

    fn mul(self, other: Val, pos: usize) -> Result<Val, ParseError> {
        match (self, other) {
            (Val::Poly(a), Val::Poly(b))
                if !(a.has_params() || b.has_params())
                    || a.as_constant().is_some()
                    || b.as_constant().is_some() =>
            {
                Ok(Val::Poly(a.mul(&b)))
            }
            (a, b) => Ok(Val::Term(a.into_term(pos)?.mul(&b.into_term(pos)?))),
        }
    }

    fn div(self, other: Val, pos: usize) -> Result<Val, ParseError> {
        if let (Val::Poly(a), Some(c)) = (&self, other.as_constant()) {
            if Zero::is_zero(&c) {
                return err(pos, "division by zero");
            }
            return Ok(Val::Poly(a.mul(&MPoly::constant(c.recip()))));
        }
        let den = other.into_term(pos)?;
        let num = self.into_term(pos)?;
        num.div(&den).map(Val::Term).map_err(|e| term_err(pos, e))
    }

    fn powi(self, e: i64, pos: usize) -> Result<Val, ParseError> {
        match self {
            Val::Poly(p) if e >= 0 && (!p.has_params() || p.as_constant().is_some()) => {
                Ok(Val::Poly(p.pow(e as u32)))
            }
            Val::Poly(p) if p.has_params() => {
                let l = p.to_linear(pos)?;
                HyperTerm::new(vec![(Factor::Linear(l), e)], KFrac::one())
                    .map(Val::Term)
                    .map_err(|e| term_err(pos, e))
            }
            v => {
                let t = v.into_term(pos)?;
                let t = if e < 0 {
                    t.inv().map_err(|e| term_err(pos, e))?
                } else {
                    t
                };
                let n = e.unsigned_abs();
                let mut acc = HyperTerm::one();
                for _ in 0..n {
                    acc = acc.mul(&t);
                }
                Ok(Val::Term(acc))
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(_, p)| *p)
    }

    fn is_op(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Op(c))
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.is_op(c) {
            self.i += 1;
            Ok(())
        } else {
            err(self.pos(), format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let start = self.pos();
        let mut sign = 1;
        if self.is_op('-') || self.is_op('+') {
            if self.is_op('-') {
                sign = -1;
            }
            self.i += 1;
        }
        let mut acc = self.product()?;
        if sign < 0 {
            acc = acc.mul(Val::Poly(MPoly::constant(q(-1))), start)?;
        }
        while self.is_op('+') || self.is_op('-') {
            let at = self.pos();
            let s = if self.is_op('-') { -1 } else { 1 };
            self.i += 1;
            let rhs = self.product()?;
            acc = match (acc, rhs) {
                (Val::Poly(a), Val::Poly(b)) => Val::Poly(a.add(&b, s)),
                _ => return err(at, "only polynomials can be added"),
            };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Val, ParseError> {
        let num = self.seq()?;
        if self.is_op('/') {
            let at = self.pos();
            self.i += 1;
            let den = self.seq()?;
            return num.div(den, at);
        }
        Ok(num)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_) | Tok::Sym(_) | Tok::Binom | Tok::Fact | Tok::Op('('))
        )
    }

    fn seq(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.power()?;
        loop {
            let at = self.pos();
            if self.is_op('*') {
                self.i += 1;
            } else if !self.starts_atom() {
                return Ok(acc);
            }
            let rhs = self.power()?;
            acc = acc.mul(rhs, at)?;
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let at = self.pos();
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.to_i64().ok_or(ParseError {
                    pos: at,
                    msg: "exponent out of range".into(),
                })?;
                self.i += 1;
                Ok(v)
            }
            _ => err(at, "expected an integer"),
        }
    }

    fn power(&mut self) -> Result<Val, ParseError> {
        let base = self.atom()?;
        if !self.is_op('^') {
            return Ok(base);
        }
        self.i += 1;
        let at = self.pos();
        let exponent = match self.peek() {
            Some(Tok::Int(_)) => return base.powi(self.int()?, at),
            Some(Tok::Op('-')) => {
                self.i += 1;
                return base.powi(-self.int()?, at);
            }
            Some(Tok::Sym(s)) => {
                let s = *s;
                self.i += 1;
                MPoly::sym(s)
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                match e {
                    Val::Poly(p) => p,
                    Val::Term(_) => return err(at, "exponent must be linear"),
                }
            }
            _ => return err(at, "expected an exponent"),
        };
        if let Some(c) = exponent.as_constant() {
            if !c.is_integer() {
                return err(at, "non-integer exponent");
            }
            let e = c.to_integer().to_i64().ok_or(ParseError {
                pos: at,
                msg: "exponent out of range".into(),
            })?;
            return base.powi(e, at);
        }
        let l = exponent.to_linear(at)?;
        let Some(b) = base.as_constant() else {
            return err(at, "symbolic exponent needs a constant base");
        };
        if Zero::is_zero(&b) {
            return err(at, "zero base with symbolic exponent");
        }
        HyperTerm::new(vec![(Factor::Power(b, l), 1)], KFrac::one())
            .map(Val::Term)
            .map_err(|e| term_err(at, e))
    }

    fn linear_arg(&mut self) -> Result<LinearForm, ParseError> {
        let at = self.pos();
        match self.expr()? {
            Val::Poly(p) => p.to_linear(at),
            Val::Term(_) => err(at, "nonlinear argument"),
        }
    }

    fn atom(&mut self) -> Result<Val, ParseError> {
        let at = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return err(at, "unexpected end of input");
        };
        self.i += 1;
        match tok {
            Tok::Int(v) => Ok(Val::Poly(MPoly::constant(Q::from_integer(v)))),
            Tok::Sym(s) => Ok(Val::Poly(MPoly::sym(s))),
            Tok::Binom => {
                self.expect('(')?;
                let a = self.linear_arg()?;
                self.expect(',')?;
                let b = self.linear_arg()?;
                self.expect(')')?;
                HyperTerm::new(vec![(Factor::Binomial(a, b), 1)], KFrac::one())
                    .map(Val::Term)
                    .map_err(|e| term_err(at, e))
            }
            Tok::Fact => {
                self.expect('(')?;
                let a = self.linear_arg()?;
                self.expect(')')?;
                HyperTerm::new(vec![(Factor::Factorial(a), 1)], KFrac::one())
                    .map(Val::Term)
                    .map_err(|e| term_err(at, e))
            }
            Tok::Op('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Op(c) => err(at, format!("unexpected '{c}'")),
        }
    }
}

fn parse_val(src: &str) -> Result<Val, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return err(0, "empty input");
    }
    let mut p = Parser {
        toks,
        i: 0,
        end: src.chars().count(),
    };
    let v = p.expr()?;
    if p.i < p.toks.len() {
        return err(p.pos(), "trailing input");
    }
    Ok(v)
}

/// Parse a hypergeometric term, e.g. `binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)`.
pub fn parse_term(src: &str) -> Result<HyperTerm, ParseError> {
    parse_val(src)?.into_term(0)
}

/// Parse an integer-linear form in `n`, `k` and parameters.
pub fn parse_linear(src: &str) -> Result<LinearForm, ParseError> {
    match parse_val(src)? {
        Val::Poly(p) => p.to_linear(0),
        Val::Term(_) => err(0, "nonlinear argument"),
    }
}

/// Parse a polynomial in `n` alone.
pub fn parse_npoly(src: &str) -> Result<QPoly, ParseError> {
    let Val::Poly(p) = parse_val(src)? else {
        return err(0, "expected a polynomial in n");
    };
    if p.0.keys().any(|m| m.keys().any(|s| *s != 'n')) {
        return err(0, "expected a polynomial in n");
    }
    let top = p.0.keys().map(|m| m.get(&'n').copied().unwrap_or(0)).max().unwrap_or(0);
    let mut cs = vec![q(0); top as usize + 1];
    for (m, c) in p.0 {
        cs[m.get(&'n').copied().unwrap_or(0) as usize] = c;
    }
    Ok(QPoly::new(cs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperterm::ParamBinding;

    #[test]
    fn parse_examples() {
        let t = parse_term("binom(2k,k)*binom(2n-2k+2,n-k+1)*1/(k+1)").unwrap();
        assert_eq!(t.factors().len(), 2);
        assert!(matches!(
            &t.factors()[0].0,
            Factor::Binomial(a, b) if *a == LinearForm::new(2, -2, 2) && *b == LinearForm::new(1, -1, 1)
        ) || matches!(
            &t.factors()[1].0,
            Factor::Binomial(a, b) if *a == LinearForm::new(2, -2, 2) && *b == LinearForm::new(1, -1, 1)
        ));
        let e = parse_term("binom(k/2,k)").unwrap_err();
        assert_eq!(e.msg, "non-integer linear-form coefficient");
        assert_eq!(parse_term("binom(k^2,k)").unwrap_err().msg, "nonlinear argument");
        assert_eq!(parse_term("binom(n k,k)").unwrap_err().msg, "nonlinear argument");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_term("binom(n,k) $").unwrap_err();
        assert_eq!(e.pos, 11);
        let e = parse_term("binom(n,k").unwrap_err();
        assert_eq!(e.pos, 9);
        assert!(parse_term("binom(n,k)+fact(k)").is_err());
        assert!(parse_term("").is_err());
    }

    #[test]
    fn implicit_multiplication_and_letters() {
        let a = parse_term("2nk").unwrap();
        let b = parse_term("2*n*k").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_npoly("2n^2+5n+3").unwrap(), QPoly::new(vec![q(3), q(5), q(2)]));
        assert_eq!(parse_linear("r-1+2n").unwrap(), LinearForm::new(2, 0, -1).add(&LinearForm::param('r')));
    }

    #[test]
    fn denominator_takes_everything_after_slash() {
        let b = ParamBinding::new();
        let t = parse_term("1/(k+1)*(k+2)").unwrap();
        assert_eq!(t.eval(0, 1, &b).unwrap(), crate::arith::q_frac(1, 6));
    }

    #[test]
    fn parameters_in_linear_factors() {
        let t = parse_term("binom(n+r,n)*s*r/(n+1)").unwrap();
        assert!(t.has_params());
        let b = ParamBinding::new().with('r', 2).unwrap().with('s', 3).unwrap();
        assert_eq!(t.eval(1, 0, &b).unwrap(), q(9));
        assert_eq!(parse_term("binom(n,r k)").unwrap_err().msg, "nonlinear argument");
    }
}
