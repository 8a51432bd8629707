//! Integer roots of rational polynomials and resultants over any field.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::poly::Polynomial;
use super::QPoly;

/// Integer coefficients of a nonzero polynomial, scaled to be primitive.
pub fn primitive_integer_coeffs(p: &QPoly) -> Vec<BigInt> {
    let den_lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_int(coeffs: &[BigInt], z: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c)
}

fn eval_mod(coeffs: &[BigInt], z: &BigInt, m: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * z + c).mod_floor(m))
}

fn reduce_mod_p(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = coeffs
        .iter()
        .map(|c| u64::try_from(c.mod_floor(&pb)).expect("residue fits"))
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Degree of gcd(f, f') over GF(p); `None` when f' vanishes identically.
fn gcd_with_derivative_degree_mod_p(f: &[u64], p: u64) -> Option<usize> {
    let mut a = f.to_vec();
    let mut b: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * (i as u64 % p) % p)
        .collect();
    while b.last() == Some(&0) {
        b.pop();
    }
    if b.is_empty() {
        return None;
    }
    while !b.is_empty() {
        // a mod b
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let c = a.last().unwrap() * inv % p;
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - c * bi % p) % p;
            }
            a.pop();
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    Some(a.len() - 1)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&c| (3..).step_by(2).take_while(|d| d * d <= c).all(|d| c % d != 0))
}

/// All integer zeros of a nonzero rational polynomial, ascending.
///
/// Candidates come from simple roots modulo a prime lifted p-adically past
/// the root bound; every candidate is confirmed by exact evaluation.
pub fn integer_roots(p: &QPoly) -> Vec<BigInt> {
    assert!(!p.is_zero(), "integer_roots of the zero polynomial");
    let mut roots = BTreeSet::new();
    let low = p.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.insert(BigInt::zero());
    }
    let p = Polynomial::new(p.coeffs()[low..].to_vec());
    if p.degree() == Some(0) {
        return roots.into_iter().collect();
    }
    let sf = p.exact_div(&p.gcd(&p.derivative()));
    let f = primitive_integer_coeffs(&sf);
    let lead = f.last().unwrap().abs();
    // Integer roots divide the constant term and respect the Cauchy bound.
    let cauchy = f[..f.len() - 1]
        .iter()
        .map(|c| c.abs().div_ceil(&lead))
        .max()
        .unwrap_or_else(BigInt::zero)
        + 1;
    let bound = f[0].abs().min(cauchy);

    let prime = small_primes()
        .find(|&pr| {
            let fp = reduce_mod_p(&f, pr);
            fp.len() == f.len() && gcd_with_derivative_degree_mod_p(&fp, pr) == Some(0)
        })
        .expect("a prime of good reduction exists");
    let fp = reduce_mod_p(&f, prime);
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let limit = &bound * 2 + 1;
    for r in 0..prime {
        let val = fp.iter().rev().fold(0u64, |acc, c| (acc * r + c) % prime);
        if val != 0 {
            continue;
        }
        let mut modulus = BigInt::from(prime);
        let mut z = BigInt::from(r);
        while modulus < limit {
            modulus = &modulus * &modulus;
            let fz = eval_mod(&f, &z, &modulus);
            let dfz = eval_mod(&df, &z, &modulus);
            let inv = dfz.extended_gcd(&modulus).x.mod_floor(&modulus);
            z = (&z - fz * inv).mod_floor(&modulus);
        }
        if &z * 2 > modulus {
            z -= &modulus;
        }
        if z.abs() <= bound && eval_int(&f, &z).is_zero() {
            roots.insert(z);
        }
    }
    roots.into_iter().collect()
}

/// Resultant of two polynomials over a field (Euclidean remainder sequence).
///
/// Zero iff the inputs share a nonconstant factor (or one of them is zero).
pub fn resultant<F: Field>(p: &Polynomial<F>, q: &Polynomial<F>) -> F {
    let (Some(_), Some(_)) = (p.degree(), q.degree()) else {
        return F::zero();
    };
    let mut a = p.clone();
    let mut b = q.clone();
    let mut acc = F::one();
    loop {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        if n == 0 {
            return acc.mul_ref(&b.leading().pow_ref(m as u32));
        }
        let r = a.rem(&b).expect("nonzero divisor");
        let Some(d) = r.degree() else {
            return F::zero();
        };
        // res(a, b) = (-1)^{mn} lc(b)^{m-d} res(b, r)
        let mut factor = b.leading().pow_ref((m - d) as u32);
        if (m * n) % 2 == 1 {
            factor = factor.neg_ref();
        }
        acc = acc.mul_ref(&factor);
        a = b;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, Polynomial, QFrac, Ring};

    fn p(c: &[i64]) -> QPoly {
        Polynomial::new(c.iter().map(|&v| q(v)).collect())
    }

    fn scan_oracle(poly: &QPoly, bound: i64) -> Vec<BigInt> {
        (-bound..=bound)
            .filter(|&z| Ring::is_zero(&poly.eval(&q(z))))
            .map(BigInt::from)
            .collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn integer_root_examples() {
        assert_eq!(integer_roots(&p(&[2, -3, 1])), ints(&[1, 2]));
        assert_eq!(integer_roots(&p(&[1, 0, 1])), ints(&[]));
        let cubic = p(&[2, -3, -3, 2]);
        assert_eq!(integer_roots(&cubic), scan_oracle(&cubic, 10));
        assert_eq!(integer_roots(&cubic), ints(&[-1, 2]));
    }

    #[test]
    fn integer_roots_handle_multiplicity_zero_and_large_roots() {
        // x^2 (x - 1000003)^3 (2x + 1)
        let f = &(&p(&[0, 0, 1]) * &p(&[-1000003, 1]).pow(3)) * &p(&[1, 2]);
        assert_eq!(integer_roots(&f), ints(&[0, 1000003]));
        let g = &p(&[7, 1]) * &p(&[-5, 1]);
        assert_eq!(integer_roots(&g.scale(&crate::arith::q_frac(3, 7))), ints(&[-7, 5]));
        assert_eq!(integer_roots(&p(&[5])), ints(&[]));
    }

    #[test]
    fn resultant_examples() {
        // Over Q(j): Res_k(k - 1, k - j) = 1 - j up to sign.
        let j = QFrac::x();
        let a = Polynomial::new(vec![QFrac::from_i64(-1), QFrac::one()]);
        let b = Polynomial::new(vec![j.neg_ref(), QFrac::one()]);
        let r = resultant(&a, &b);
        let expect = QFrac::from_poly(p(&[1, -1]));
        assert!(r == expect || r == expect.neg_ref());
        // Res_k(k, k) = 0
        assert!(Ring::is_zero(&resultant(&p(&[0, 1]), &p(&[0, 1]))));
        // Res_k(k^2 - 2, k + j) = j^2 - 2
        let c = Polynomial::new(vec![QFrac::from_i64(-2), QFrac::zero(), QFrac::one()]);
        let d = Polynomial::new(vec![j.clone(), QFrac::one()]);
        assert_eq!(resultant(&c, &d), QFrac::from_poly(p(&[-2, 0, 1])));
    }

    #[test]
    fn resultant_matches_sylvester_for_quadratics() {
        // det of the 4x4 Sylvester matrix of a0+a1x+a2x^2 and b0+b1x+b2x^2
        let (a, b) = (p(&[3, -1, 2]), p(&[-4, 5, 1]));
        let (a0, a1, a2) = (3i64, -1i64, 2i64);
        let (b0, b1, b2) = (-4i64, 5i64, 1i64);
        let syl = (a2 * b0 - a0 * b2).pow(2) - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1);
        assert_eq!(resultant(&a, &b), q(syl));
    }
}
