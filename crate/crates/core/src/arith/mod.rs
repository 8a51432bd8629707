//! Exact arithmetic substrate: rationals, dense polynomials over a field,
//! canonical rational functions, and the two-variable tower `Q(n)[k]`.
//!
//! The tower is built from the generic types: [`QFrac`] is the parameter
//! field `Q(n)`, [`KPoly`] the polynomials in `k` over it and [`KFrac`] the
//! rational functions in `k` over it. [`BiPoly`] (polynomials in `k` whose
//! coefficients are polynomials in `n`) is the cleared, integer-coefficient
//! form used for evaluation and display.

mod field;
mod linalg;
mod poly;
mod ratfunc;
mod roots;

pub use field::{binomial, factorial, q, q_frac, q_is_nonneg_integer, q_to_i64, Field, Ring, Q};
pub use linalg::solve_linear_system;
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;
pub use roots::{integer_roots, primitive_integer_coeffs, resultant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type QPoly = Polynomial<Q>;
pub type QFrac = RationalFunction<Q>;
pub type KPoly = Polynomial<QFrac>;
pub type KFrac = RationalFunction<QFrac>;
pub type BiPoly = Polynomial<QPoly>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Positive rational `c` with `p / c` a primitive integer polynomial.
pub fn rational_content(p: &QPoly) -> Q {
    if p.is_zero() {
        return <Q as Ring>::one();
    }
    let num_gcd = p
        .coeffs()
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
    let den_lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    Q::new(num_gcd, den_lcm)
}

/// The scale `s` in `Q(n)` such that every `s * c_i` is a polynomial in `n`
/// with integer coefficients and the family has no common factor (neither a
/// polynomial in `n` nor an integer). The sign is left positive; callers fix
/// their own sign convention.
pub fn normalizing_scale(coeffs: &[QFrac]) -> QFrac {
    let nonzero: Vec<&QFrac> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return QFrac::one();
    }
    let den_lcm = nonzero
        .iter()
        .fold(QPoly::one(), |acc, c| acc.lcm(c.den()));
    let polys: Vec<QPoly> = nonzero
        .iter()
        .map(|c| c.num() * &den_lcm.exact_div(c.den()))
        .collect();
    let g = polys.iter().fold(QPoly::zero(), |acc, p| acc.gcd(p));
    let content = polys
        .iter()
        .map(|p| rational_content(&p.exact_div(&g)))
        .fold(None::<Q>, |acc, c| {
            Some(match acc {
                None => c,
                Some(a) => Q::new(a.numer().gcd(c.numer()), a.denom().lcm(c.denom())),
            })
        })
        .unwrap();
    let poly_part = QFrac::new(den_lcm, g).expect("nonzero gcd");
    poly_part.mul_ref(&QFrac::constant(content.recip()))
}

/// Lift a polynomial in `n` into the parameter field.
pub fn qfrac_of(p: QPoly) -> QFrac {
    QFrac::from_poly(p)
}

/// Clear a `Q(n)(k)` fraction into integer bivariate numerator and
/// denominator with no common content; the denominator's leading
/// coefficient (highest `k`, then highest `n`) is positive.
pub fn clear_kfrac(f: &KFrac) -> (BiPoly, BiPoly) {
    let all: Vec<QFrac> = f
        .num()
        .coeffs()
        .iter()
        .chain(f.den().coeffs())
        .cloned()
        .collect();
    let s = normalizing_scale(&all);
    let to_bi = |p: &KPoly| -> BiPoly {
        BiPoly::new(
            p.coeffs()
                .iter()
                .map(|c| {
                    let v = c.mul_ref(&s);
                    debug_assert!(v.is_polynomial());
                    v.num().clone()
                })
                .collect(),
        )
    };
    let (mut num, mut den) = (to_bi(f.num()), to_bi(f.den()));
    if den.leading().leading().is_negative() {
        num = -&num;
        den = -&den;
    }
    (num, den)
}

pub fn kpoly_of_bipoly(p: &BiPoly) -> KPoly {
    p.map_coeffs(|c| QFrac::from_poly(c.clone()))
}

pub fn kfrac_of_bipolys(num: &BiPoly, den: &BiPoly) -> Result<KFrac, ArithError> {
    KFrac::new(kpoly_of_bipoly(num), kpoly_of_bipoly(den))
}

pub fn eval_bipoly(p: &BiPoly, n: &Q, k: &Q) -> Q {
    p.coeffs()
        .iter()
        .rev()
        .fold(<Q as Ring>::zero(), |acc, c| acc * k + c.eval(n))
}

/// Substitute `n -> n + delta` inside every coefficient of a `Q(n)(k)` fraction.
pub fn shift_param(f: &KFrac, delta: i64) -> KFrac {
    if delta == 0 {
        return f.clone();
    }
    f.map_coeffs(|c| c.shift_by(delta))
}

/// Specialize the parameter `n` to a rational value; `None` if a
/// coefficient has a pole there.
pub fn specialize_kpoly(p: &KPoly, n: &Q) -> Option<QPoly> {
    p.coeffs()
        .iter()
        .map(|c| c.eval(n))
        .collect::<Option<Vec<Q>>>()
        .map(QPoly::new)
}

fn fmt_coeff_monomial(c: &Q, mono: &str, out: &mut String) {
    let first = out.is_empty();
    let neg = c.is_negative();
    let abs = c.abs();
    if !first {
        out.push_str(if neg { " - " } else { " + " });
    } else if neg {
        out.push('-');
    }
    if mono.is_empty() {
        out.push_str(&abs.to_string());
    } else if One::is_one(&abs) {
        out.push_str(mono);
    } else {
        out.push_str(&format!("{abs}*{mono}"));
    }
}

fn mono_name(var: char, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

/// Expanded text of a bivariate polynomial, e.g. `2*k^2 - 2*n*k - k - 2*n - 3`.
pub fn display_bipoly(p: &BiPoly) -> String {
    let mut out = String::new();
    for (dk, coeff) in p.coeffs().iter().enumerate().rev() {
        for (dn, c) in coeff.coeffs().iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let mono = [mono_name('n', dn), mono_name('k', dk)]
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect::<Vec<_>>()
                .join("*");
            fmt_coeff_monomial(c, &mono, &mut out);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Expanded text of a polynomial in `n` (integer coefficients expected).
pub fn display_npoly(p: &QPoly) -> String {
    display_bipoly(&BiPoly::constant(p.clone()))
}

/// Coefficients as decimal strings, `k`-major then ascending `n`.
pub fn bipoly_to_strings(p: &BiPoly) -> Vec<Vec<String>> {
    p.coeffs()
        .iter()
        .map(|c| c.coeffs().iter().map(|v| v.to_string()).collect())
        .collect()
}

/// Parse `"p"` or `"p/q"` as an exact rational.
pub fn parse_q(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((a, b)) => {
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Q::new(a.trim().parse().ok()?, den))
        }
        None => Some(Q::from_integer(s.trim().parse().ok()?)),
    }
}

pub fn bipoly_from_strings(rows: &[Vec<String>]) -> Option<BiPoly> {
    let coeffs = rows
        .iter()
        .map(|row| row.iter().map(|s| parse_q(s)).collect::<Option<Vec<Q>>>().map(QPoly::new))
        .collect::<Option<Vec<QPoly>>>()?;
    Some(BiPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qp(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn clear_kfrac_gives_integer_primitive_parts() {
        // (2k - 2n - 3)(k + 1) / (n + 2), built through Q(n) coefficients
        let n = QFrac::x();
        let kpoly = |cs: Vec<QFrac>| KPoly::new(cs);
        let lin = kpoly(vec![QFrac::from_i64(-3).sub_ref(&n.mul_ref(&QFrac::from_i64(2))), QFrac::from_i64(2)]);
        let kp1 = kpoly(vec![QFrac::one(), QFrac::one()]);
        let den = QFrac::from_poly(qp(&[2, 1]));
        let r = KFrac::new((&lin * &kp1).scale(&den.inv_ref()), KPoly::one()).unwrap();
        let (num, den) = clear_kfrac(&r);
        assert_eq!(display_bipoly(&num), "2*k^2 - 2*n*k - k - 2*n - 3");
        assert_eq!(display_bipoly(&den), "n + 2");
        let back = kfrac_of_bipolys(&num, &den).unwrap();
        assert_eq!(back, r);
        assert_eq!(eval_bipoly(&num, &q(0), &q(0)), q(-3));
    }

    #[test]
    fn normalizing_scale_removes_common_polynomial_factor() {
        let a = QFrac::new(qp(&[2, 2]), qp(&[0, 3])).unwrap(); // (2n+2)/(3n)
        let b = QFrac::new(qp(&[-4, -4]), qp(&[0, 1])).unwrap(); // -(4n+4)/n
        let s = normalizing_scale(&[a.clone(), b.clone()]);
        assert_eq!(a.mul_ref(&s), QFrac::from_i64(1));
        assert_eq!(b.mul_ref(&s), QFrac::from_i64(-6));
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-6i64..=6, 0..5).prop_map(|v| qp(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(p in small_poly(), q_ in small_poly(), r in small_poly()) {
            prop_assert_eq!(&(&p + &q_) * &r, &(&p * &r) + &(&q_ * &r));
            prop_assert_eq!(&(&p - &q_) + &q_, p.clone());
        }

        #[test]
        fn gcd_contains_common_factor(p in small_poly(), q_ in small_poly(), g in small_poly()) {
            prop_assume!(!g.is_zero() && !(p.is_zero() && q_.is_zero()));
            let d = (&p * &g).gcd(&(&q_ * &g));
            prop_assert!(g.monic().divides(&d));
        }

        #[test]
        fn divrem_reconstructs(p in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            let (quot, rem) = p.divrem(&d).unwrap();
            prop_assert_eq!(&(&quot * &d) + &rem, p);
            prop_assert!(rem.degree() < d.degree() || rem.is_zero());
        }

        #[test]
        fn integer_roots_match_scan(roots in prop::collection::vec(-9i64..=9, 1..4), extra in small_poly()) {
            let mut f = roots.iter().fold(QPoly::one(), |acc, &r| &acc * &qp(&[-r, 1]));
            if !extra.is_zero() { f = &f * &extra; }
            let bound = f.coeffs().iter().map(|c| c.numer().abs()).max().unwrap() + BigInt::one();
            let b = i64::try_from(bound).unwrap().min(2000);
            let scan: Vec<BigInt> = (-b..=b).filter(|&z| Zero::is_zero(&f.eval(&q(z)))).map(BigInt::from).collect();
            prop_assert_eq!(integer_roots(&f), scan);
        }

        #[test]
        fn resultant_vanishes_iff_common_factor(p in small_poly(), q_ in small_poly()) {
            prop_assume!(!p.is_zero() && !q_.is_zero());
            let shares = p.gcd(&q_).degree().unwrap_or(0) > 0;
            prop_assert_eq!(Zero::is_zero(&resultant(&p, &q_)), shares);
        }

        #[test]
        fn rationals_stay_canonical(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
            let x = q_frac(a, b);
            let y = q_frac(c, d);
            let mut outs = vec![&x + &y, &x - &y, &x * &y];
            if c != 0 { outs.push(&x / &y); }
            for v in outs {
                prop_assert!(v.denom().is_positive());
                prop_assert!(v.numer().gcd(v.denom()).is_one());
                prop_assert_eq!(Q::new(v.numer().clone(), v.denom().clone()), v);
            }
        }
    }
}
