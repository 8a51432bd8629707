//! Truncated formal power series over `Q`.
//!
//! A series of order `N` stores the coefficients of `x^0 .. x^N`. Results of
//! binary operations carry the smaller order. Division by `x` (needed for
//! the `1/x` and `1/(2x)` prefactors of the Catalan-type closed forms) is
//! done by [`PowerSeries::div_x`], which drops the constant term — it must be
//! zero — and lowers the order by one.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::{binomial, q, Field, Ring, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series has zero constant term")]
    ZeroConstant,
    #[error("square root needs constant term 1")]
    SqrtConstant,
    #[error("division by x needs a zero constant term")]
    NotDivisibleByX,
    #[error("unknown series '{0}'")]
    UnknownName(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Q>,
}

impl PowerSeries {
    /// Coefficients `0..=order`; missing ones are zero, extra ones dropped.
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, q(0));
        PowerSeries { coeffs }
    }

    pub fn from_ints(c: &[i64], order: usize) -> Self {
        Self::new(c.iter().map(|&v| q(v)).collect(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(q(1), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(|| q(0))
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(), n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(), n)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), self.order())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect(), self.order())
    }

    /// Cauchy product: coefficient `n` is `sum_{s+t=n} a_s b_t`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![q(0); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if Ring::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out, n)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.order()), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse by the coefficient recurrence
    /// `g_n = -(1/f_0) sum_{i=1}^{n} f_i g_{n-i}`.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let f0 = &self.coeffs[0];
        if Ring::is_zero(f0) {
            return Err(SeriesError::ZeroConstant);
        }
        let inv0 = f0.inv_ref();
        let mut g: Vec<Q> = vec![inv0.clone()];
        for n in 1..=self.order() {
            let mut acc = q(0);
            for i in 1..=n {
                acc += &self.coeffs[i] * &g[n - i];
            }
            g.push(-acc * &inv0);
        }
        Ok(Self::new(g, self.order()))
    }

    /// Square root with `g_0 = 1`, from `2 g_n = f_n - sum_{i=1}^{n-1} g_i g_{n-i}`.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::SqrtConstant);
        }
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        let mut g: Vec<Q> = vec![q(1)];
        for n in 1..=self.order() {
            let mut acc = self.coeffs[n].clone();
            for i in 1..n {
                acc -= &g[i] * &g[n - i];
            }
            g.push(acc * &half);
        }
        Ok(Self::new(g, self.order()))
    }

    /// `f / x`; the constant term must vanish. Order drops by one.
    pub fn div_x(&self) -> Result<Self, SeriesError> {
        if !Ring::is_zero(&self.coeffs[0]) {
            return Err(SeriesError::NotDivisibleByX);
        }
        let n = self.order().saturating_sub(1);
        Ok(Self::new(self.coeffs[1..].to_vec(), n))
    }

    /// `index: value` lines.
    pub fn dump(&self) -> String {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{i}: {c}\n"))
            .collect()
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// `1 - 4x` to the given order.
fn one_minus_4x(order: usize) -> PowerSeries {
    PowerSeries::from_ints(&[1, -4], order)
}

/// `(1 - sqrt(1-4x)) / (2x)`. Computed one order higher so that the
/// division by `x` still leaves `order` coefficients.
pub fn catalan(order: usize) -> PowerSeries {
    let s = one_minus_4x(order + 1).sqrt().expect("constant 1");
    PowerSeries::one(order + 1)
        .sub(&s)
        .div_x()
        .expect("constant term cancels")
        .scale(&Q::new(BigInt::from(1), BigInt::from(2)))
}

/// `1 / sqrt(1-4x)`.
pub fn central_binomial(order: usize) -> PowerSeries {
    one_minus_4x(order).sqrt().and_then(|s| s.inv()).expect("constant 1")
}

/// `central_binomial * catalan^k`; coefficient `n` is `binom(2n+k, n)`.
pub fn ballot(k: u32, order: usize) -> PowerSeries {
    central_binomial(order).mul(&catalan(order).pow(k))
}

/// Named generating functions: `catalan`, `central_binomial`, `ballot(k)`.
pub fn known_gf(name: &str, order: usize) -> Result<PowerSeries, SeriesError> {
    let name = name.trim();
    match name {
        "catalan" => Ok(catalan(order)),
        "central_binomial" => Ok(central_binomial(order)),
        _ => {
            let k = name
                .strip_prefix("ballot(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.trim().parse::<u32>().ok())
                .ok_or_else(|| SeriesError::UnknownName(name.to_string()))?;
            Ok(ballot(k, order))
        }
    }
}

/// `sum_j binom(2j+2, j+1) x^j = (1 - sqrt(1-4x)) / (x sqrt(1-4x))`, built
/// as `(1/sqrt(1-4x) - 1) / x`.
pub fn shifted_central_binomial(order: usize) -> PowerSeries {
    central_binomial(order + 1)
        .sub(&PowerSeries::one(order + 1))
        .div_x()
        .expect("constant term cancels")
}

/// Coefficients `j = 0..order-1` of the closed form equal `binom(2j+2, j+1)`.
pub fn check_shifted_central_binomial(order: usize) -> bool {
    let s = shifted_central_binomial(order);
    (0..order).all(|j| s.coeff(j) == Q::from_integer(binomial(2 * j as i64 + 2, j as i64 + 1)))
}

/// Coefficient `n` of `catalan * (shifted central binomial series)` — the convolution
/// `sum_{k+l=n} C(k) binom(2l+2, l+1)` — equals `2 binom(2n+2, n)` for
/// `n = 0..=order`.
pub fn check_catalan_convolution_gf(order: usize) -> bool {
    let prod = catalan(order).mul(&shifted_central_binomial(order));
    (0..=order).all(|n| prod.coeff(n) == Q::from_integer(binomial(2 * n as i64 + 2, n as i64) * 2))
}

/// The same product assembled as `2 * ballot(2)`, i.e. `2 / sqrt(1-4x) * catalan^2`.
pub fn check_catalan_convolution_via_ballot(order: usize) -> bool {
    let prod = ballot(2, order).scale(&q(2));
    (0..=order).all(|n| prod.coeff(n) == Q::from_integer(binomial(2 * n as i64 + 2, n as i64) * 2))
}
