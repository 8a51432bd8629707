use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always held in lowest terms with a positive denominator.
pub type Q = BigRational;

/// A commutative ring with exact arithmetic.
///
/// Methods take references so that big-number coefficients are never cloned
/// implicitly.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_q(q: &Q) -> Self;

    fn pow_ref(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Panics when `other` is zero.
    fn div_ref(&self, other: &Self) -> Self;

    fn inv_ref(&self) -> Self {
        Self::one().div_ref(self)
    }

    /// `self^exp` for a signed exponent.
    fn powi(&self, exp: i64) -> Self {
        let p = self.pow_ref(exp.unsigned_abs() as u32);
        if exp < 0 {
            p.inv_ref()
        } else {
            p
        }
    }
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
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
        Q::from_integer(BigInt::from(v))
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
}

impl Field for Q {
    fn div_ref(&self, other: &Self) -> Self {
        assert!(!Zero::is_zero(other), "rational division by zero");
        self / other
    }
}

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// The rational as an `i64` when it is an integer that fits.
pub fn q_to_i64(v: &Q) -> Option<i64> {
    if !v.is_integer() {
        return None;
    }
    i64::try_from(v.numer()).ok()
}

pub fn q_is_nonneg_integer(v: &Q) -> bool {
    v.is_integer() && !v.is_negative()
}

/// Binomial coefficient with the summation-friendly convention:
/// zero when `b < 0` or `0 <= a < b`, and `(-1)^b * C(b-a-1, b)` for negative `a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 {
        return BigInt::zero();
    }
    if a < 0 {
        let v = binomial(b - a - 1, b);
        return if b % 2 == 0 { v } else { -v };
    }
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(a: u64) -> BigInt {
    (1..=a).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_convention_matches_factorial_formula() {
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                let v = binomial(a, b);
                if b < 0 || (a >= 0 && b > a) {
                    assert!(v.is_zero(), "binom({a},{b})");
                } else if a >= 0 {
                    let f = factorial(a as u64)
                        / (factorial(b as u64) * factorial((a - b) as u64));
                    assert_eq!(v, f, "binom({a},{b})");
                }
            }
        }
    }

    #[test]
    fn negative_upper_index_follows_pascal() {
        for a in -10i64..0 {
            for b in 1i64..10 {
                assert_eq!(
                    binomial(a + 1, b),
                    binomial(a, b) + binomial(a, b - 1),
                    "pascal at ({a},{b})"
                );
            }
        }
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
    }

    #[test]
    fn powi_inverts_for_negative_exponents() {
        assert_eq!(q(2).powi(-3), q_frac(1, 8));
        assert_eq!(q_frac(-2, 3).powi(2), q_frac(4, 9));
        assert_eq!(q(5).powi(0), q(1));
    }
}
