//! Gosper's decision procedure for indefinite hypergeometric summation.
//!
//! All polynomial work happens in `Q(n)[k]`; a term without `n` simply has
//! constant coefficients.

use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    bipoly_from_strings, bipoly_to_strings, clear_kfrac, display_bipoly, integer_roots,
    kfrac_of_bipolys, q, q_frac, q_to_i64, resultant, solve_linear_system, specialize_kpoly, Field,
    KFrac, KPoly, QFrac, QPoly, Ring, Q,
};
use crate::hyperterm::{HyperTerm, ParamBinding, TermError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GosperError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("the zero term has no shift quotient")]
    ZeroTerm,
}

/// `r(k) = z * a(k)/b(k) * c(k+1)/c(k)` with `gcd(a(k), b(k+j)) = 1` for all
/// `j >= 0`; `a`, `b`, `c` monic.
#[derive(Debug, Clone, PartialEq)]
pub struct GosperNormalForm {
    pub z: QFrac,
    pub a: KPoly,
    pub b: KPoly,
    pub c: KPoly,
}

impl GosperNormalForm {
    /// `z * a/b * c(k+1)/c(k)`.
    pub fn ratio(&self) -> KFrac {
        let ab = KFrac::new(self.a.clone(), self.b.clone()).expect("b nonzero");
        let cc = KFrac::new(self.c.shift_by(1), self.c.clone()).expect("c nonzero");
        ab.mul_ref(&cc).mul_ref(&KFrac::constant(self.z.clone()))
    }
}

/// Rational sample values for `n` used to make dispersion candidates
/// computable over `Q`. Any true dispersion survives specialization; false
/// candidates are removed by an exact gcd over `Q(n)`.
fn generic_points() -> [Q; 4] {
    [q_frac(7919, 13), q_frac(-1543, 17), q_frac(104_729, 31), q_frac(3, 1_000_003)]
}

fn specialize_pair(f: &KPoly, g: &KPoly) -> (QPoly, QPoly) {
    for n0 in generic_points() {
        let (Some(f0), Some(g0)) = (specialize_kpoly(f, &n0), specialize_kpoly(g, &n0)) else {
            continue;
        };
        if f0.degree() == f.degree() && g0.degree() == g.degree() {
            return (f0, g0);
        }
    }
    unreachable!("no admissible specialization point among the generic samples")
}

/// Nonnegative integers `h` with `Res_k(f(k), g(k+h)) = 0`, ascending.
pub fn dispersion_set(f: &KPoly, g: &KPoly) -> Vec<i64> {
    if f.degree().unwrap_or(0) == 0 || g.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let (f0, g0) = specialize_pair(f, g);
    // Work over Q(h): f0 has constant coefficients, g0(k + h) has coefficients in Q[h].
    let fh: KPoly = f0.map_coeffs(|c| QFrac::constant(c.clone()));
    let gh: KPoly = g0.map_coeffs(|c| QFrac::constant(c.clone())).shift(&QFrac::x());
    let res = resultant(&fh, &gh);
    if Ring::is_zero(&res) {
        // Shares a factor for every h: impossible for coprime inputs at h = 0
        // unless the inputs are degenerate; fall back to a scan-free empty set.
        return Vec::new();
    }
    integer_roots(res.num())
        .into_iter()
        .filter(|h| !h.is_negative())
        .filter_map(|h| h.to_i64())
        .collect()
}

/// Gosper–Petkovšek normal form of a nonzero rational function in `k`.
pub fn gpnf(r: &KFrac) -> GosperNormalForm {
    assert!(!Ring::is_zero(r), "gpnf of zero");
    let z = r.num().leading().div_ref(&r.den().leading());
    let mut a = r.num().monic();
    let mut b = r.den().monic();
    let mut c = KPoly::one();
    for h in dispersion_set(&a, &b) {
        loop {
            let s = a.gcd(&b.shift_by(h));
            if s.degree().unwrap_or(0) == 0 {
                break;
            }
            a = a.exact_div(&s);
            b = b.exact_div(&s.shift_by(-h));
            for i in 1..=h {
                c = &c * &s.shift_by(-i);
            }
        }
    }
    GosperNormalForm { z, a, b, c }
}

fn degree_of(p: &KPoly) -> Option<i64> {
    p.degree().map(|d| d as i64)
}

/// Upper bound on `deg x` for `p1(k) x(k+1) - p2(k) x(k) = c(k)` when
/// `c` has degree at most `deg_c`; `None` when no polynomial solution fits.
pub fn degree_bound_for(p1: &KPoly, p2: &KPoly, deg_c: i64) -> Option<i64> {
    let plus = p1 + p2;
    let minus = p1 - p2;
    let lp = degree_of(&plus);
    let lm = degree_of(&minus);
    let bound = match (lp, lm) {
        (None, None) => return None,
        (_, Some(dm)) if lp.is_none_or(|dp| dm >= dp) => deg_c - dm,
        (Some(dp), dm) => {
            // the estimate assumes deg x >= 1; a constant x leaves only minus*x
            let mut d = (deg_c - dp + 1).max(if dm.is_some_and(|m| m <= deg_c) { 0 } else { -1 });
            if dm == Some(dp - 1) {
                // leading terms can cancel when d = -2 lc(minus) / lc(plus)
                let cand = minus.leading().mul_ref(&QFrac::from_i64(-2)).div_ref(&plus.leading());
                if let Some(v) = cand.as_constant().as_ref().and_then(q_to_i64) {
                    d = d.max(v);
                }
            }
            d
        }
        (None, Some(_)) => unreachable!(),
    };
    (bound >= 0).then_some(bound)
}

/// Degree bound for the Gosper equation `z a(k) x(k+1) - b(k-1) x(k) = c(k)`.
pub fn degree_bound(nf: &GosperNormalForm) -> Option<i64> {
    let p1 = nf.a.scale(&nf.z);
    let p2 = nf.b.shift_by(-1);
    degree_bound_for(&p1, &p2, degree_of(&nf.c).unwrap_or(0))
}

/// Solve `p1 x(k+1) - p2 x(k) - sum_j s_j cs[j] = fixed` for a polynomial
/// `x` and constants `s_j` in `Q(n)`.
pub(crate) fn solve_parametric(
    p1: &KPoly,
    p2: &KPoly,
    cs: &[KPoly],
    fixed: &KPoly,
) -> Option<(KPoly, Vec<QFrac>)> {
    let deg_c = cs
        .iter()
        .chain(std::iter::once(fixed))
        .filter_map(degree_of)
        .max()
        .unwrap_or(0);
    let d = degree_bound_for(p1, p2, deg_c)?;
    let d = d as usize;
    // column i <= d: contribution of k^i in x; column d+1+j: s_j
    let basis: Vec<KPoly> = (0..=d)
        .map(|i| {
            let m = KPoly::monomial(QFrac::one(), i);
            &(p1 * &m.shift_by(1)) - &(p2 * &m)
        })
        .chain(cs.iter().map(|c| -c))
        .collect();
    let rows = basis
        .iter()
        .chain(std::iter::once(fixed))
        .filter_map(KPoly::degree)
        .max()
        .unwrap_or(0)
        + 1;
    let matrix: Vec<Vec<QFrac>> = (0..rows)
        .map(|r| basis.iter().map(|col| col.coeff(r)).collect())
        .collect();
    let rhs: Vec<QFrac> = (0..rows).map(|r| fixed.coeff(r)).collect();
    let sol = solve_linear_system(&matrix, &rhs)?;
    let x = KPoly::new(sol[..=d].to_vec());
    Some((x, sol[d + 1..].to_vec()))
}

/// Antidifference certificate: `G(k) = R(k) F(k)` with `G(k+1) - G(k) = F(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GosperCertificate {
    pub nf: GosperNormalForm,
    pub x: KPoly,
    pub r: KFrac,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GosperResult {
    Summable(GosperCertificate),
    NotSummable,
}

/// Decide indefinite summability in `k` and build the certificate.
pub fn gosper_antidifference(
    f: &HyperTerm,
    binding: &ParamBinding,
) -> Result<GosperResult, GosperError> {
    if f.is_zero() {
        return Err(GosperError::ZeroTerm);
    }
    let ratio = f.shift_quotient(Var::K, binding)?;
    Ok(gosper_from_ratio(&ratio))
}

/// Gosper's algorithm on a term given by its shift quotient.
pub fn gosper_from_ratio(ratio: &KFrac) -> GosperResult {
    let nf = gpnf(ratio);
    let p1 = nf.a.scale(&nf.z);
    let p2 = nf.b.shift_by(-1);
    let Some((x, _)) = solve_parametric(&p1, &p2, &[], &nf.c) else {
        return GosperResult::NotSummable;
    };
    let r = KFrac::new(&p2 * &x, nf.c.clone()).expect("c nonzero");
    let cert = GosperCertificate { nf, x, r };
    debug_assert!(certificate_holds(&cert.r, ratio));
    GosperResult::Summable(cert)
}

/// `R(k+1) r(k) - R(k) = 1`, i.e. `G(k+1) - G(k) = F(k)` divided by `F(k)`.
pub fn certificate_holds(r: &KFrac, ratio: &KFrac) -> bool {
    r.shift_by(1).mul_ref(ratio).sub_ref(r).is_one()
}

impl GosperCertificate {
    /// The antidifference `G = R F` as a term.
    pub fn antidifference(&self, f: &HyperTerm) -> HyperTerm {
        f.scale(&self.r)
    }

    pub fn verify(&self, f: &HyperTerm, binding: &ParamBinding) -> Result<bool, TermError> {
        Ok(certificate_holds(&self.r, &f.shift_quotient(Var::K, binding)?))
    }

    /// `R(n,k) = (num) / (den)` with integer-coefficient polynomials.
    pub fn text(&self) -> String {
        format_r(&self.r)
    }

    pub fn record(&self) -> CertificateRecord {
        let poly = |p: &KPoly| FracRecord::of(&KFrac::from_poly(p.clone()));
        CertificateRecord {
            x: poly(&self.x),
            a: poly(&self.nf.a),
            b: poly(&self.nf.b),
            c: poly(&self.nf.c),
            z: FracRecord::of(&KFrac::constant(self.nf.z.clone())),
            r: FracRecord::of(&self.r),
        }
    }
}

pub fn format_r(r: &KFrac) -> String {
    let (num, den) = clear_kfrac(r);
    format!("R(n,k) = ({}) / ({})", display_bipoly(&num), display_bipoly(&den))
}

/// A rational function in `(n, k)` as cleared integer coefficient rows:
/// `num[i][j]` is the coefficient of `k^i n^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracRecord {
    pub num: Vec<Vec<String>>,
    pub den: Vec<Vec<String>>,
}

impl FracRecord {
    pub fn of(f: &KFrac) -> Self {
        let (num, den) = clear_kfrac(f);
        FracRecord {
            num: bipoly_to_strings(&num),
            den: bipoly_to_strings(&den),
        }
    }

    pub fn to_kfrac(&self) -> Option<KFrac> {
        let num = bipoly_from_strings(&self.num)?;
        let den = bipoly_from_strings(&self.den)?;
        kfrac_of_bipolys(&num, &den).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub x: FracRecord,
    pub a: FracRecord,
    pub b: FracRecord,
    pub c: FracRecord,
    pub z: FracRecord,
    #[serde(rename = "R")]
    pub r: FracRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TelescopeError {
    #[error(transparent)]
    Term(#[from] TermError),
}

/// `sum_{k=lo}^{hi} F(n, k) = G(n, hi+1) - G(n, lo)` at a concrete `n`.
pub fn telescope_sum(
    f: &HyperTerm,
    cert: &GosperCertificate,
    n: i64,
    lo: i64,
    hi: i64,
    binding: &ParamBinding,
) -> Result<Q, TelescopeError> {
    if lo > hi {
        return Ok(q(0));
    }
    let g = cert.antidifference(f);
    Ok(g.eval(n, hi + 1, binding)? - g.eval(n, lo, binding)?)
}

impl fmt::Display for GosperCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{kpoly_of_bipoly, BiPoly};
    use crate::hyperterm::{parse_term, term_ratio_is_one};

    fn kp(c: &[i64]) -> KPoly {
        KPoly::new(c.iter().map(|&v| QFrac::from_i64(v)).collect())
    }

    fn frac(n: &[i64], d: &[i64]) -> KFrac {
        KFrac::new(kp(n), kp(d)).unwrap()
    }

    fn t(s: &str) -> HyperTerm {
        parse_term(s).unwrap()
    }

    fn summable(s: &str) -> GosperCertificate {
        match gosper_antidifference(&t(s), &ParamBinding::new()).unwrap() {
            GosperResult::Summable(c) => c,
            GosperResult::NotSummable => panic!("{s} should be summable"),
        }
    }

    fn check_gp_condition(nf: &GosperNormalForm) {
        for j in 0..=20 {
            assert_eq!(nf.a.gcd(&nf.b.shift_by(j)).degree().unwrap_or(0), 0, "j={j}");
        }
    }

    #[test]
    fn gpnf_examples() {
        let nf = gpnf(&frac(&[1, 1], &[3, 1]));
        assert_eq!(nf.ratio(), frac(&[1, 1], &[3, 1]));
        assert_eq!((nf.a.clone(), nf.b.clone(), nf.c.clone()), (kp(&[1, 1]), kp(&[3, 1]), kp(&[1])));
        check_gp_condition(&nf);

        let nf = gpnf(&frac(&[2], &[1]));
        assert_eq!(nf.z, QFrac::from_i64(2));
        assert_eq!((nf.a, nf.b, nf.c), (kp(&[1]), kp(&[1]), kp(&[1])));

        let nf = gpnf(&frac(&[2, 1], &[1, 1]));
        assert_eq!(nf.z, QFrac::one());
        assert_eq!((nf.a.clone(), nf.b.clone(), nf.c.clone()), (kp(&[1]), kp(&[1]), kp(&[1, 1])));
        assert_eq!(nf.ratio(), frac(&[2, 1], &[1, 1]));
    }

    #[test]
    fn gpnf_handles_repeated_and_multiple_shifts() {
        // (k+5)^2 (k+1) / ((k+1)^2 (2k+7))
        let num = &(&kp(&[5, 1]) * &kp(&[5, 1])) * &kp(&[1, 1]);
        let den = &(&kp(&[1, 1]) * &kp(&[1, 1])) * &kp(&[7, 2]);
        let r = KFrac::new(num, den).unwrap();
        let nf = gpnf(&r);
        assert_eq!(nf.ratio(), r);
        check_gp_condition(&nf);
    }

    #[test]
    fn degree_bounds() {
        let f = t("binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)");
        let nf = gpnf(&f.shift_quotient(Var::K, &ParamBinding::new()).unwrap());
        // The (k+1) factor of R comes from b(k-1), so x itself is constant.
        assert_eq!(degree_bound(&nf), Some(0));
        let pow2 = GosperNormalForm {
            z: QFrac::from_i64(2),
            a: kp(&[1]),
            b: kp(&[1]),
            c: kp(&[1]),
        };
        assert_eq!(degree_bound(&pow2), Some(0));
        let fact = gpnf(&frac(&[1, 1], &[1]));
        assert!(solve_parametric(&fact.a.scale(&fact.z), &fact.b.shift_by(-1), &[], &fact.c).is_none());
    }

    #[test]
    fn catalan_convolution_certificate() {
        let cert = summable("binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)");
        let (num, den) = clear_kfrac(&cert.r);
        // (2k - 2n - 3)(k + 1) / (n + 2)
        let n = |c: &[i64]| QPoly::new(c.iter().map(|&v| q(v)).collect());
        let expect_num = BiPoly::new(vec![n(&[-3, -2]), n(&[-1, -2]), n(&[2])]);
        let expect_den = BiPoly::new(vec![n(&[2, 1])]);
        assert_eq!((num, den), (expect_num, expect_den));
        assert_eq!(cert.text(), "R(n,k) = (2*k^2 - 2*n*k - k - 2*n - 3) / (n + 2)");

        let f = t("binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)");
        let g = cert.antidifference(&f);
        let verbatim = t("(2k-2n-3)*(k+1)*binom(2k,k)*binom(2n-2k+2,n-k+1)*fact(k)/(fact(k+1)*(n+2))");
        assert!(term_ratio_is_one(&g, &verbatim, &ParamBinding::new()).unwrap());
        let b = ParamBinding::new();
        assert_eq!(telescope_sum(&f, &cert, 0, 0, 0, &b).unwrap(), q(2));
        assert_eq!(telescope_sum(&f, &cert, 1, 0, 1, &b).unwrap(), q(8));
        assert_eq!(telescope_sum(&f, &cert, 1, 3, 2, &b).unwrap(), q(0));
        assert_eq!(g.eval(0, 0, &b).unwrap(), q(-3));
        assert_eq!(g.eval(0, 1, &b).unwrap(), q(-1));
    }

    #[test]
    fn trivial_antidifferences() {
        let b = ParamBinding::new();
        let cert = summable("k*fact(k)");
        let g = cert.antidifference(&t("k*fact(k)"));
        assert!(term_ratio_is_one(&g, &t("fact(k)"), &b).unwrap());

        let cert = summable("1/(k*(k+1))");
        assert_eq!(cert.r, frac(&[-1, -1], &[1]));
        let g = cert.antidifference(&t("1/(k*(k+1))"));
        assert!(term_ratio_is_one(&g, &t("-1/k"), &b).unwrap());

        let cert = summable("2^(k)");
        assert_eq!(cert.r, frac(&[1], &[1]));
    }

    #[test]
    fn not_summable_fixtures() {
        for s in ["binom(n,k)", "fact(k)", "1/k", "2^(k)/k"] {
            let r = gosper_antidifference(&t(s), &ParamBinding::new()).unwrap();
            assert_eq!(r, GosperResult::NotSummable, "{s}");
        }
    }

    #[test]
    fn record_round_trips() {
        let cert = summable("binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)");
        let rec = cert.record();
        let json = serde_json::to_string(&rec).unwrap();
        let back: CertificateRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.r.to_kfrac().unwrap(), cert.r);
        assert_eq!(kpoly_of_bipoly(&bipoly_from_strings(&back.c.num).unwrap()).degree(), cert.nf.c.degree());
    }
}
