use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Ring};
use super::ArithError;

/// Dense univariate polynomial; `coeffs[i]` is the coefficient of `x^i`.
///
/// Trailing zeros are never stored, so the zero polynomial has no
/// coefficients and `degree()` returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Polynomial<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn monomial(c: R, degree: usize) -> Self {
        let mut coeffs = vec![R::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `x + c`
    pub fn linear(c: R) -> Self {
        Self::new(vec![c, R::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn eval(&self, at: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc.mul_ref(at).add_ref(c))
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> Polynomial<S> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// `p(x + c)`
    pub fn shift(&self, c: &R) -> Self {
        if c.is_zero() || self.is_constant() {
            return self.clone();
        }
        let step = Self::linear(c.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| &(&acc * &step) + &Self::constant(a.clone()))
    }

    /// `p(x + delta)` for an integer shift.
    pub fn shift_by(&self, delta: i64) -> Self {
        self.shift(&R::from_i64(delta))
    }

    /// Substitute a polynomial for the indeterminate.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| &(&acc * inner) + &Self::constant(a.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_ref(&R::from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl<F: Field> Polynomial<F> {
    /// Euclidean division; `p = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self), ArithError> {
        let dd = divisor.degree().ok_or(ArithError::DivisionByZero)?;
        let lead_inv = divisor.leading().inv_ref();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].mul_ref(&lead_inv);
            let shift = top - dd;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[shift + i] = rem[shift + i].sub_ref(&c.mul_ref(d));
                }
            }
            quot[shift] = c;
            rem.pop();
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, ArithError> {
        self.divrem(divisor).map(|(_, r)| r)
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor).expect("exact_div by zero polynomial");
        debug_assert!(r.is_zero(), "exact_div left a remainder");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        match other.divrem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().inv_ref())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        (self * &other.exact_div(&g)).monic()
    }
}

impl<'a, R: Ring> Add<&'a Polynomial<R>> for &'a Polynomial<R> {
    type Output = Polynomial<R>;
    fn add(self, rhs: &'a Polynomial<R>) -> Polynomial<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.add_ref(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => R::zero(),
                })
                .collect(),
        )
    }
}

impl<'a, R: Ring> Sub<&'a Polynomial<R>> for &'a Polynomial<R> {
    type Output = Polynomial<R>;
    fn sub(self, rhs: &'a Polynomial<R>) -> Polynomial<R> {
        self + &(-rhs)
    }
}

impl<'a, R: Ring> Mul<&'a Polynomial<R>> for &'a Polynomial<R> {
    type Output = Polynomial<R>;
    fn mul(self, rhs: &'a Polynomial<R>) -> Polynomial<R> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Polynomial::new(out)
    }
}

impl<R: Ring> Neg for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn neg(self) -> Polynomial<R> {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<R: Ring> $tr<Polynomial<R>> for Polynomial<R> {
            type Output = Polynomial<R>;
            fn $method(self, rhs: Polynomial<R>) -> Polynomial<R> {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<R: Ring> Ring for Polynomial<R> {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        Polynomial::constant(R::from_i64(v))
    }
    fn from_q(q: &super::Q) -> Self {
        Polynomial::constant(R::from_q(q))
    }
}

impl<R: Ring + fmt::Display> Polynomial<R> {
    /// Human-readable form in the named variable, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let atomic = !cs.contains(['+', ' ']) && !cs[1..].contains('-');
            let cs = if atomic { cs } else { format!("({cs})") };
            let term = match i {
                0 => cs,
                _ => {
                    let mono = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    match cs.as_str() {
                        "1" => mono,
                        "-1" => format!("-{mono}"),
                        _ => format!("{cs}*{mono}"),
                    }
                }
            };
            if out.is_empty() {
                out = term;
            } else if let Some(stripped) = term.strip_prefix('-') {
                out = format!("{out} - {stripped}");
            } else {
                out = format!("{out} + {term}");
            }
        }
        out
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}
