use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::{Field, Ring, Q};
use super::poly::Polynomial;
use super::ArithError;

/// Quotient of two polynomials over a field, kept in canonical form:
/// coprime numerator and denominator, denominator monic, zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction<F> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Polynomial::zero()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lc = den.leading().inv_ref();
        Ok(RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    /// Builds from parts already known to be canonical.
    fn from_canonical(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        debug_assert!(den.leading().is_one());
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Polynomial<F>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// The indeterminate.
    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn num(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The value as an element of the coefficient field, when constant.
    pub fn as_constant(&self) -> Option<F> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    /// `None` at a pole.
    pub fn eval(&self, at: &F) -> Option<F> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(at).div_ref(&d))
    }

    /// `f(x + c)`
    pub fn shift(&self, c: &F) -> Self {
        let num = self.num.shift(c);
        let den = self.den.shift(c);
        Self::from_canonical(num, den)
    }

    pub fn shift_by(&self, delta: i64) -> Self {
        self.shift(&F::from_i64(delta))
    }

    /// Apply a field map to every coefficient and re-canonicalize.
    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> RationalFunction<G> {
        RationalFunction::new(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
            .expect("coefficient map sent the denominator to zero")
    }
}

impl<F: Field> Ring for RationalFunction<F> {
    fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }
    fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone()).expect("nonzero den");
        }
        let g = self.den.gcd(&other.den);
        let ds = self.den.exact_div(&g);
        let dother = other.den.exact_div(&g);
        let num = &(&self.num * &dother) + &(&other.num * &ds);
        let den = &self.den * &dother;
        Self::new(num, den).expect("nonzero den")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1) * &other.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &other.den.exact_div(&g1);
        let lc = den.leading().inv_ref();
        Self::from_canonical(num.scale(&lc), den.scale(&lc))
    }
    fn neg_ref(&self) -> Self {
        Self::from_canonical(-&self.num, self.den.clone())
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(F::from_i64(v))
    }
    fn from_q(q: &Q) -> Self {
        Self::constant(F::from_q(q))
    }
}

impl<F: Field> Field for RationalFunction<F> {
    fn div_ref(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "rational function division by zero");
        self.mul_ref(&other.inv_ref())
    }
    fn inv_ref(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        let lc = self.num.leading().inv_ref();
        Self::from_canonical(self.den.scale(&lc), self.num.scale(&lc))
    }
}

macro_rules! ratfunc_binop {
    ($tr:ident, $method:ident, $impl_fn:ident) => {
        impl<'a, F: Field> $tr<&'a RationalFunction<F>> for &'a RationalFunction<F> {
            type Output = RationalFunction<F>;
            fn $method(self, rhs: &'a RationalFunction<F>) -> RationalFunction<F> {
                self.$impl_fn(rhs)
            }
        }
        impl<F: Field> $tr<RationalFunction<F>> for RationalFunction<F> {
            type Output = RationalFunction<F>;
            fn $method(self, rhs: RationalFunction<F>) -> RationalFunction<F> {
                self.$impl_fn(&rhs)
            }
        }
    };
}
ratfunc_binop!(Add, add, add_ref);
ratfunc_binop!(Sub, sub, sub_ref);
ratfunc_binop!(Mul, mul, mul_ref);
ratfunc_binop!(Div, div, div_ref);

impl<F: Field> Neg for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        self.neg_ref()
    }
}

impl<F: Field + fmt::Display> RationalFunction<F> {
    pub fn display_in(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.display_in(var);
        }
        format!("({})/({})", self.num.display_in(var), self.den.display_in(var))
    }
}

impl<F: Field + fmt::Display> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, QFrac, QPoly};

    fn p(c: &[i64]) -> QPoly {
        Polynomial::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn canonical_form_cancels_and_normalizes() {
        // (2x^2 - 2) / (4x - 4) = (x + 1)/2
        let f = QFrac::new(p(&[-2, 0, 2]), p(&[-4, 4])).unwrap();
        assert_eq!(f.den(), &p(&[1]));
        assert_eq!(f.num(), &QPoly::new(vec![crate::arith::q_frac(1, 2); 2]));
        assert!(QFrac::new(p(&[1]), p(&[])).is_err());
    }

    #[test]
    fn field_identities() {
        let a = QFrac::new(p(&[1, 1]), p(&[0, 2, 1])).unwrap();
        let b = QFrac::new(p(&[3, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&(&a * &b) / &b, a);
        assert!((&a * &a.inv_ref()).is_one());
        assert_eq!(a.shift_by(1).shift_by(-1), a);
        assert_eq!(a.eval(&q(-2)), None);
    }
}
