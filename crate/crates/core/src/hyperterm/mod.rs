//! Proper hypergeometric terms `F(n, k)`: products of binomials, factorials
//! and geometric powers with integer-linear arguments, times a rational
//! prefactor in `Q(n)(k)`.

mod linear;
mod parse;

pub use linear::LinearForm;
pub use parse::{parse_linear, parse_npoly, parse_term, ParseError};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{
    binomial, clear_kfrac, eval_bipoly, factorial, q, BiPoly, Field, KFrac, KPoly, QFrac, Ring, Q,
};

/// Shift variable of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    N,
    K,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("parameter '{0}' is not bound")]
    UnboundParameter(char),
    #[error("'{0}' cannot be used as a parameter")]
    ReservedSymbol(char),
    #[error("parameter '{0}' must be bound to a nonnegative integer, got {1}")]
    NegativeParameter(char, i64),
    #[error("pole at n={n}, k={k}")]
    Pole { n: i64, k: i64 },
    #[error("pole at k={0}")]
    PoleInK(i64),
    #[error("division by the zero term")]
    ZeroDivision,
    #[error("no non-degenerate sample point found")]
    DegenerateSample,
}

/// Values for the auxiliary symbols of a term (anything other than `n`, `k`).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamBinding(BTreeMap<char, i64>);

impl ParamBinding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sym: char, value: i64) -> Result<(), TermError> {
        if sym == 'n' || sym == 'k' {
            return Err(TermError::ReservedSymbol(sym));
        }
        if value < 0 {
            return Err(TermError::NegativeParameter(sym, value));
        }
        self.0.insert(sym, value);
        Ok(())
    }

    pub fn with(mut self, sym: char, value: i64) -> Result<Self, TermError> {
        self.insert(sym, value)?;
        Ok(self)
    }

    pub fn get(&self, sym: char) -> Option<i64> {
        self.0.get(&sym).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, i64)> + '_ {
        self.0.iter().map(|(s, v)| (*s, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ParamBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(s, v)| format!("{s}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Building block of a hypergeometric term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Binomial(LinearForm, LinearForm),
    Factorial(LinearForm),
    /// `base^L`
    Power(Q, LinearForm),
    /// A linear factor that still mentions an unbound parameter; bound
    /// ones are folded into the prefactor.
    Linear(LinearForm),
}

impl Factor {
    fn forms(&self) -> Vec<&LinearForm> {
        match self {
            Factor::Binomial(a, b) => vec![a, b],
            Factor::Factorial(l) | Factor::Power(_, l) | Factor::Linear(l) => vec![l],
        }
    }

    fn map_forms(&self, f: impl Fn(&LinearForm) -> LinearForm) -> Factor {
        match self {
            Factor::Binomial(a, b) => Factor::Binomial(f(a), f(b)),
            Factor::Factorial(l) => Factor::Factorial(f(l)),
            Factor::Power(b, l) => Factor::Power(b.clone(), f(l)),
            Factor::Linear(l) => Factor::Linear(f(l)),
        }
    }
}

/// `fact(L + delta) / fact(L)` as a rational function of `k` over `Q(n)`.
fn factorial_ratio(l: &LinearForm, delta: i64) -> Result<KFrac, TermError> {
    let mut out = KFrac::one();
    if delta > 0 {
        for i in 1..=delta {
            out = out.mul_ref(&KFrac::from_poly(l.offset(i).to_kpoly()?));
        }
    } else {
        for i in 0..-delta {
            let p = l.offset(-i).to_kpoly()?;
            if p.is_zero() {
                return Err(TermError::ZeroDivision);
            }
            out = out.div_ref(&KFrac::from_poly(p));
        }
    }
    Ok(out)
}

/// A proper hypergeometric term in canonical form.
///
/// Factors are sorted with equal factors merged, constant arguments are
/// folded into the prefactor, and geometric powers carry exponent 1 (one
/// per base). Two canonical terms are structurally equal iff they have the
/// same factor list and prefactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperTerm {
    factors: Vec<(Factor, i64)>,
    prefactor: KFrac,
    cleared: (BiPoly, BiPoly),
}

impl HyperTerm {
    pub fn new(factors: Vec<(Factor, i64)>, prefactor: KFrac) -> Result<Self, TermError> {
        let mut pre = prefactor;
        let mut kept: BTreeMap<Factor, i64> = BTreeMap::new();
        let mut powers: BTreeMap<Q, LinearForm> = BTreeMap::new();
        for (f, e) in factors {
            if e == 0 {
                continue;
            }
            match f {
                Factor::Power(base, l) => {
                    if One::is_one(&base) {
                        continue;
                    }
                    assert!(!Ring::is_zero(&base), "zero base in a power factor");
                    let acc = powers.entry(base).or_default();
                    *acc = acc.add(&l.scale(e));
                }
                Factor::Factorial(l) if l.is_constant() && l.constant >= 0 => {
                    pre = pre.mul_ref(&KFrac::from_q(&Q::from_integer(factorial(l.constant as u64))).powi(e));
                }
                Factor::Binomial(a, b) if a.is_constant() && b.is_constant() => {
                    let v = binomial(a.constant, b.constant);
                    if v.is_zero() {
                        if e > 0 {
                            pre = KFrac::zero();
                        } else {
                            return Err(TermError::ZeroDivision);
                        }
                    } else {
                        pre = pre.mul_ref(&KFrac::from_q(&Q::from_integer(v)).powi(e));
                    }
                }
                Factor::Linear(l) if !l.has_params() => {
                    let p = l.to_kpoly()?;
                    if p.is_zero() {
                        if e > 0 {
                            pre = KFrac::zero();
                            continue;
                        }
                        return Err(TermError::ZeroDivision);
                    }
                    pre = pre.mul_ref(&KFrac::from_poly(p).powi(e));
                }
                other => *kept.entry(other).or_insert(0) += e,
            }
        }
        for (base, l) in powers {
            if l.is_constant() {
                pre = pre.mul_ref(&KFrac::from_q(&base.powi(l.constant)));
            } else {
                kept.insert(Factor::Power(base, l), 1);
            }
        }
        let factors: Vec<(Factor, i64)> = if Ring::is_zero(&pre) {
            Vec::new()
        } else {
            kept.into_iter().filter(|(_, e)| *e != 0).collect()
        };
        let cleared = clear_kfrac(&pre);
        Ok(HyperTerm {
            factors,
            prefactor: pre,
            cleared,
        })
    }

    pub fn from_prefactor(prefactor: KFrac) -> Self {
        Self::new(Vec::new(), prefactor).expect("prefactor-only term")
    }

    pub fn one() -> Self {
        Self::from_prefactor(KFrac::one())
    }

    pub fn binomial(a: LinearForm, b: LinearForm) -> Self {
        Self::new(vec![(Factor::Binomial(a, b), 1)], KFrac::one()).expect("binomial term")
    }

    pub fn factors(&self) -> &[(Factor, i64)] {
        &self.factors
    }

    pub fn prefactor(&self) -> &KFrac {
        &self.prefactor
    }

    pub fn is_zero(&self) -> bool {
        Ring::is_zero(&self.prefactor)
    }

    /// True when the term vanishes for every `n` (and `k`): a zero
    /// prefactor, or a binomial/factorial that is zero by convention.
    pub fn is_identically_zero(&self) -> bool {
        self.is_zero()
            || self.factors.iter().any(|(f, e)| {
                *e > 0
                    && match f {
                        Factor::Binomial(_, b) => b.is_constant() && b.constant < 0,
                        Factor::Factorial(l) => l.is_constant() && l.constant < 0,
                        _ => false,
                    }
            })
    }

    pub fn has_params(&self) -> bool {
        self.factors
            .iter()
            .any(|(f, _)| f.forms().iter().any(|l| l.has_params()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut fs = self.factors.clone();
        fs.extend(other.factors.iter().cloned());
        Self::new(fs, self.prefactor.mul_ref(&other.prefactor)).expect("product of terms")
    }

    pub fn inv(&self) -> Result<Self, TermError> {
        if self.is_zero() {
            return Err(TermError::ZeroDivision);
        }
        let fs = self
            .factors
            .iter()
            .map(|(f, e)| match f {
                Factor::Power(b, l) => (Factor::Power(b.clone(), l.scale(-1)), *e),
                other => (other.clone(), -e),
            })
            .collect();
        Self::new(fs, self.prefactor.inv_ref())
    }

    pub fn div(&self, other: &Self) -> Result<Self, TermError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, s: &KFrac) -> Self {
        Self::new(self.factors.clone(), self.prefactor.mul_ref(s)).expect("scaled term")
    }

    pub fn neg(&self) -> Self {
        self.scale(&KFrac::from_i64(-1))
    }

    /// Substitute bound parameters and re-canonicalize.
    pub fn bind(&self, binding: &ParamBinding) -> Result<Self, TermError> {
        let fs = self
            .factors
            .iter()
            .map(|(f, e)| (f.map_forms(|l| l.bind(binding)), *e))
            .collect();
        Self::new(fs, self.prefactor.clone())
    }

    /// Bind and insist that no parameter is left.
    pub fn concrete(&self, binding: &ParamBinding) -> Result<Self, TermError> {
        let t = self.bind(binding)?;
        for (f, _) in &t.factors {
            for l in f.forms() {
                if let Some(s) = l.params.keys().next() {
                    return Err(TermError::UnboundParameter(*s));
                }
            }
        }
        Ok(t)
    }

    /// Substitute the integer `value` for `k`.
    pub fn at_k(&self, value: i64) -> Result<Self, TermError> {
        let at = QFrac::from_i64(value);
        let den = self.prefactor.den().eval(&at);
        if Ring::is_zero(&den) {
            return Err(TermError::PoleInK(value));
        }
        let pre = KFrac::constant(self.prefactor.num().eval(&at).div_ref(&den));
        let fs = self
            .factors
            .iter()
            .map(|(f, e)| (f.map_forms(|l| l.at_k(value)), *e))
            .collect();
        Self::new(fs, pre)
    }

    /// `F(n+1,k)/F(n,k)` or `F(n,k+1)/F(n,k)` as an exact rational function,
    /// using Gamma-quotient rules for every factor.
    pub fn shift_quotient(&self, var: Var, binding: &ParamBinding) -> Result<KFrac, TermError> {
        let t = self.concrete(binding)?;
        let mut out = match var {
            Var::K => t.prefactor.shift_by(1).div_ref(&t.prefactor),
            Var::N => crate::arith::shift_param(&t.prefactor, 1).div_ref(&t.prefactor),
        };
        for (f, e) in &t.factors {
            let ratio = match f {
                Factor::Factorial(l) => factorial_ratio(l, l.coeff(var))?,
                Factor::Binomial(a, b) => {
                    let (da, db) = (a.coeff(var), b.coeff(var));
                    let diff = a.sub(b);
                    factorial_ratio(a, da)?
                        .div_ref(&factorial_ratio(b, db)?)
                        .div_ref(&factorial_ratio(&diff, da - db)?)
                }
                Factor::Power(base, l) => KFrac::from_q(&base.powi(l.coeff(var))),
                Factor::Linear(l) => {
                    return Err(TermError::UnboundParameter(*l.params.keys().next().unwrap()))
                }
            };
            out = out.mul_ref(&ratio.powi(*e));
        }
        Ok(out)
    }

    /// `F(n+j, k) / F(n, k)` for `j >= 0`.
    pub fn n_shift_ratio(&self, j: usize, binding: &ParamBinding) -> Result<KFrac, TermError> {
        let step = self.shift_quotient(Var::N, binding)?;
        let mut acc = KFrac::one();
        for i in 0..j {
            acc = acc.mul_ref(&crate::arith::shift_param(&step, i as i64));
        }
        Ok(acc)
    }

    /// Exact value at integer `(n, k)`.
    ///
    /// Binomials follow the zero-outside-range convention, a factorial of a
    /// negative integer makes the term zero, and a vanishing prefactor
    /// denominator is a pole.
    pub fn eval(&self, n: i64, k: i64, binding: &ParamBinding) -> Result<Q, TermError> {
        let (nq, kq) = (q(n), q(k));
        let den = eval_bipoly(&self.cleared.1, &nq, &kq);
        if Ring::is_zero(&den) {
            return Err(TermError::Pole { n, k });
        }
        let mut acc = eval_bipoly(&self.cleared.0, &nq, &kq) / den;
        if Ring::is_zero(&acc) {
            return Ok(acc);
        }
        for (f, e) in &self.factors {
            let v = match f {
                Factor::Binomial(a, b) => {
                    Q::from_integer(binomial(a.eval(n, k, binding)?, b.eval(n, k, binding)?))
                }
                Factor::Factorial(l) => {
                    let x = l.eval(n, k, binding)?;
                    if x < 0 {
                        return Ok(q(0));
                    }
                    Q::from_integer(factorial(x as u64))
                }
                Factor::Power(base, l) => base.powi(l.eval(n, k, binding)?),
                Factor::Linear(l) => q(l.eval(n, k, binding)?),
            };
            if Ring::is_zero(&v) {
                if *e < 0 {
                    return Err(TermError::Pole { n, k });
                }
                acc = q(0);
            } else {
                acc *= v.powi(*e);
            }
        }
        Ok(acc)
    }

    /// The term as a rational function when its factors cancel up to
    /// rational factors (e.g. `fact(k)/fact(k+1) = 1/(k+1)`), else `None`.
    pub fn as_rational(&self, binding: &ParamBinding) -> Result<Option<KFrac>, TermError> {
        let t = self.concrete(binding)?;
        // factorial classes keyed by direction (coeff_n, coeff_k)
        let mut classes: BTreeMap<(i64, i64), Vec<(i64, i64)>> = BTreeMap::new();
        let mut push = |l: &LinearForm, e: i64| {
            classes
                .entry((l.coeff_n, l.coeff_k))
                .or_default()
                .push((l.constant, e))
        };
        for (f, e) in &t.factors {
            match f {
                Factor::Factorial(l) => push(l, *e),
                Factor::Binomial(a, b) => {
                    push(a, *e);
                    push(b, -e);
                    push(&a.sub(b), -e);
                }
                Factor::Power(..) | Factor::Linear(_) => return Ok(None),
            }
        }
        let mut out = t.prefactor.clone();
        for ((cn, ck), members) in classes {
            if members.iter().map(|(_, e)| e).sum::<i64>() != 0 {
                return Ok(None);
            }
            let lo = members.iter().map(|(c, _)| *c).min().unwrap();
            let base = LinearForm::new(cn, ck, lo);
            for (c, e) in members {
                out = out.mul_ref(&factorial_ratio(&base, c - lo)?.powi(e));
            }
        }
        Ok(Some(out))
    }

    /// Integer-cleared prefactor `(numerator, denominator)`.
    pub fn cleared_prefactor(&self) -> &(BiPoly, BiPoly) {
        &self.cleared
    }
}

const SAMPLE_POINTS: [(i64, i64); 12] = [
    (37, 11),
    (41, 13),
    (53, 17),
    (29, 7),
    (61, 23),
    (47, 19),
    (73, 31),
    (83, 3),
    (97, 41),
    (59, 2),
    (101, 50),
    (113, 57),
];

/// True iff `t1 / t2` is identically one: both shift quotients of the ratio
/// are 1 and the two terms agree at a sample point where neither vanishes
/// nor has a pole.
pub fn term_ratio_is_one(
    t1: &HyperTerm,
    t2: &HyperTerm,
    binding: &ParamBinding,
) -> Result<bool, TermError> {
    let a = t1.concrete(binding)?;
    let b = t2.concrete(binding)?;
    if a.is_zero() || b.is_zero() {
        return Ok(a.is_zero() && b.is_zero());
    }
    let ratio = a.div(&b)?;
    for var in [Var::N, Var::K] {
        if !ratio.shift_quotient(var, binding)?.is_one() {
            return Ok(false);
        }
    }
    for (n, k) in SAMPLE_POINTS {
        let (Ok(va), Ok(vb)) = (a.eval(n, k, binding), b.eval(n, k, binding)) else {
            continue;
        };
        if Ring::is_zero(&va) || Ring::is_zero(&vb) {
            continue;
        }
        return Ok(va == vb);
    }
    Err(TermError::DegenerateSample)
}

fn fmt_factor(f: &Factor, e: i64) -> String {
    let pow = |s: String| if e == 1 { s } else { format!("{s}^{e}") };
    match f {
        Factor::Binomial(a, b) => pow(format!("binom({a},{b})")),
        Factor::Factorial(l) => pow(format!("fact({l})")),
        Factor::Linear(l) => pow(format!("({l})")),
        Factor::Power(base, l) => {
            let b = if base.is_integer() && !base.is_negative() {
                base.to_string()
            } else {
                format!("({base})")
            };
            format!("{b}^({l})")
        }
    }
}

fn split_content(p: &BiPoly) -> (BigInt, Option<String>) {
    if p.is_constant() && p.coeff(0).is_constant() {
        let c = p.coeff(0).coeff(0);
        return (c.numer().clone(), None);
    }
    let mut g = BigInt::zero();
    for c in p.coeffs() {
        for v in c.coeffs() {
            g = num_integer::Integer::gcd(&g, v.numer());
        }
    }
    let lead_neg = p.leading().leading().is_negative();
    if lead_neg {
        g = -g;
    }
    let inner = p.map_coeffs(|c| c.scale(&Q::from_integer(g.clone()).recip()));
    (g, Some(format!("({})", crate::arith::display_bipoly(&inner))))
}

impl fmt::Display for HyperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let (num_c, num_p) = split_content(&self.cleared.0);
        let (den_c, den_p) = split_content(&self.cleared.1);
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        let neg = num_c.is_negative() != den_c.is_negative();
        let (num_c, den_c) = (num_c.abs(), den_c.abs());
        if !num_c.is_one() {
            num.push(num_c.to_string());
        }
        num.extend(num_p);
        if !den_c.is_one() {
            den.push(den_c.to_string());
        }
        den.extend(den_p);
        for (fac, e) in &self.factors {
            if matches!(fac, Factor::Power(..)) || *e > 0 {
                num.push(fmt_factor(fac, *e));
            } else {
                den.push(fmt_factor(fac, -e));
            }
        }
        if neg {
            f.write_str("-")?;
        }
        if num.is_empty() {
            f.write_str("1")?;
        } else {
            f.write_str(&num.join("*"))?;
        }
        if !den.is_empty() {
            write!(f, "/{}", den.join("*"))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for HyperTerm {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_term(s)
    }
}

/// Lift a `k`-polynomial over `Q(n)` into a term prefactor.
pub fn kfrac_term(p: KPoly) -> HyperTerm {
    HyperTerm::from_prefactor(KFrac::from_poly(p))
}
