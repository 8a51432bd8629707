//! Creative telescoping: `sum_j sigma_j(n) F(n+j,k) = G(n,k+1) - G(n,k)`
//! with `G = R F`, and the recurrences it yields for definite sums.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    display_npoly, normalizing_scale, q, Field, KFrac, KPoly, QFrac, QPoly, Ring, Q,
};
use crate::gosper::{format_r, gpnf, solve_parametric, FracRecord};
use crate::hyperterm::{parse_linear, parse_npoly, parse_term, HyperTerm, ParamBinding, TermError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeilError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("no recurrence found up to order {0}")]
    NoRecurrenceFound(usize),
    #[error("boundary check failed: certificate or summand nonzero at n={n}, k={k}")]
    Boundary { n: i64, k: i64 },
    #[error("recurrence check failed at n={0}")]
    OracleMismatch(i64),
    #[error("the zero term has no recurrence")]
    ZeroTerm,
}

/// `sum_j coeffs[j](n) * w(n+j) = rhs(n)`; a missing `rhs` is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Recurrence {
    pub coeffs: Vec<QPoly>,
    pub rhs: Option<HyperTerm>,
}

impl Recurrence {
    pub fn homogeneous(coeffs: Vec<QPoly>) -> Self {
        Recurrence { coeffs, rhs: None }.normalized()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Integer coefficients, no common polynomial or integer factor, and a
    /// positive leading coefficient on the top-order term.
    pub fn normalized(&self) -> Self {
        let fracs: Vec<QFrac> = self.coeffs.iter().map(|c| QFrac::from_poly(c.clone())).collect();
        let mut scale = normalizing_scale(&fracs);
        let top = self
            .coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .map(|c| QFrac::from_poly(c.clone()).mul_ref(&scale));
        if let Some(t) = top {
            if t.num().leading().is_negative() {
                scale = scale.neg_ref();
            }
        }
        let coeffs = fracs
            .iter()
            .map(|c| {
                let v = c.mul_ref(&scale);
                debug_assert!(v.is_polynomial());
                v.num().clone()
            })
            .collect();
        let rhs = self
            .rhs
            .as_ref()
            .map(|t| t.scale(&KFrac::constant(scale.clone())))
            .filter(|t| !t.is_zero());
        Recurrence { coeffs, rhs }
    }

    /// Left side `sum_j sigma_j(n) w(n+j)` for values supplied by `w`.
    pub fn apply(&self, n: i64, w: impl Fn(i64) -> Option<Q>) -> Option<Q> {
        let nq = q(n);
        let mut acc = q(0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let cv = c.eval(&nq);
            if Ring::is_zero(&cv) {
                continue;
            }
            acc += cv * w(n + j as i64)?;
        }
        Some(acc)
    }

    pub fn rhs_at(&self, n: i64, binding: &ParamBinding) -> Result<Q, TermError> {
        match &self.rhs {
            None => Ok(q(0)),
            Some(t) => t.eval(n, 0, binding),
        }
    }

    pub fn record(&self) -> RecurrenceRecord {
        RecurrenceRecord {
            order: self.order(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.coeffs().iter().map(|v| v.to_string()).collect())
                .collect(),
            rhs: self.rhs.as_ref().map_or_else(|| "0".to_string(), |t| t.to_string()),
            text: self.to_string(),
        }
    }
}

/// Same order and identical normalized coefficient lists.
pub fn operator_equal(r1: &Recurrence, r2: &Recurrence) -> bool {
    let (a, b) = (r1.normalized(), r2.normalized());
    a.coeffs == b.coeffs
}

fn shift_label(j: usize) -> String {
    if j == 0 {
        "w(n)".into()
    } else {
        format!("w(n+{j})")
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.leading().is_negative();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = display_npoly(&mag);
            if mag.is_one() {
                out.push_str(&shift_label(j));
            } else if !body.contains(' ') {
                out.push_str(&format!("{body}*{}", shift_label(j)));
            } else {
                out.push_str(&format!("({body})*{}", shift_label(j)));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        match &self.rhs {
            None => write!(f, "{out} = 0"),
            Some(t) => write!(f, "{out} = {t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("recurrence syntax: {0}")]
pub struct RecurrenceParseError(pub String);

fn split_top_level(s: &str) -> Vec<(bool, String)> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (c == '+' || c == '-') && !cur.trim().is_empty() && !cur.trim_end().ends_with('^') {
            parts.push((neg, std::mem::take(&mut cur)));
            neg = c == '-';
            continue;
        }
        if depth == 0 && (c == '+' || c == '-') && cur.trim().is_empty() {
            neg ^= c == '-';
            continue;
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        parts.push((neg, cur));
    }
    parts
}

impl FromStr for Recurrence {
    type Err = RecurrenceParseError;

    /// Parse `(2n^2+5n+3)*w(n+1) - (32n^2+64n+30)*w(n) = <term or 0>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| RecurrenceParseError(m);
        let (lhs, rhs) = s.split_once('=').ok_or_else(|| bad("missing '='".into()))?;
        let mut coeffs: Vec<QPoly> = Vec::new();
        for (neg, part) in split_top_level(lhs) {
            let at = part.rfind("w(").ok_or_else(|| bad(format!("no w(...) in '{}'", part.trim())))?;
            let close = part[at..].find(')').ok_or_else(|| bad("unclosed w(".into()))? + at;
            let idx = parse_linear(&part[at + 2..close]).map_err(|e| bad(e.to_string()))?;
            if idx.coeff_n != 1 || idx.coeff_k != 0 || idx.has_params() || idx.constant < 0 {
                return Err(bad(format!("index must be n+j, got {idx}")));
            }
            if !part[close + 1..].trim().is_empty() {
                return Err(bad(format!("unexpected text after w(...): '{}'", &part[close + 1..])));
            }
            let head = part[..at].trim().trim_end_matches('*').trim();
            let mut c = if head.is_empty() {
                QPoly::one()
            } else {
                parse_npoly(head).map_err(|e| bad(e.to_string()))?
            };
            if neg {
                c = -&c;
            }
            let j = idx.constant as usize;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, QPoly::zero());
            }
            coeffs[j] = &coeffs[j] + &c;
        }
        if coeffs.last().is_none_or(|c| c.is_zero()) {
            return Err(bad("empty operator".into()));
        }
        let rhs = rhs.trim();
        let rhs = if rhs == "0" {
            None
        } else {
            let t = parse_term(rhs).map_err(|e| bad(e.to_string()))?;
            (!t.is_zero()).then_some(t)
        };
        Ok(Recurrence { coeffs, rhs })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceRecord {
    pub order: usize,
    /// Ascending coefficient lists of `sigma_0 .. sigma_J` in `n`.
    pub coeffs: Vec<Vec<String>>,
    pub rhs: String,
    pub text: String,
}

impl RecurrenceRecord {
    pub fn to_recurrence(&self) -> Option<Recurrence> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| crate::arith::parse_q(s))
                    .collect::<Option<Vec<Q>>>()
                    .map(QPoly::new)
            })
            .collect::<Option<Vec<QPoly>>>()?;
        let rhs = if self.rhs == "0" {
            None
        } else {
            Some(parse_term(&self.rhs).ok()?)
        };
        Some(Recurrence { coeffs, rhs })
    }
}

/// Proof object for a homogeneous telescoping relation.
#[derive(Debug, Clone, PartialEq)]
pub struct TelescopingCertificate {
    pub recurrence: Recurrence,
    pub r: KFrac,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TelescopingRecord {
    pub recurrence: RecurrenceRecord,
    #[serde(rename = "R")]
    pub r: FracRecord,
}

impl TelescopingCertificate {
    pub fn record(&self) -> TelescopingRecord {
        TelescopingRecord {
            recurrence: self.recurrence.record(),
            r: FracRecord::of(&self.r),
        }
    }

    pub fn certificate_text(&self) -> String {
        format_r(&self.r)
    }

    /// `sum_j sigma_j F(n+j,k)/F(n,k) = R(n,k+1) F(n,k+1)/F(n,k) - R(n,k)`.
    pub fn verify(&self, f: &HyperTerm, binding: &ParamBinding) -> Result<bool, TermError> {
        let ratio_k = f.shift_quotient(Var::K, binding)?;
        let step = f.shift_quotient(Var::N, binding)?;
        let mut lhs = KFrac::zero();
        let mut qj = KFrac::one();
        for (j, c) in self.recurrence.coeffs.iter().enumerate() {
            if j > 0 {
                qj = qj.mul_ref(&crate::arith::shift_param(&step, j as i64 - 1));
            }
            let cj = KFrac::constant(QFrac::from_poly(c.clone()));
            lhs = lhs.add_ref(&cj.mul_ref(&qj));
        }
        let rhs = self.r.shift_by(1).mul_ref(&ratio_k).sub_ref(&self.r);
        Ok(lhs == rhs)
    }
}

/// Parameterized Gosper at a fixed order `J`, with `sigma_J = 1`.
pub fn telescope_at_order(
    f: &HyperTerm,
    order: usize,
    binding: &ParamBinding,
) -> Result<Option<TelescopingCertificate>, ZeilError> {
    if f.is_zero() {
        return Err(ZeilError::ZeroTerm);
    }
    let ratio_k = f.shift_quotient(Var::K, binding)?;
    let step = f.shift_quotient(Var::N, binding)?;
    let mut ratios = vec![KFrac::one()];
    for j in 1..=order {
        let next = ratios[j - 1].mul_ref(&crate::arith::shift_param(&step, j as i64 - 1));
        ratios.push(next);
    }
    let d = ratios.iter().fold(KPoly::one(), |acc, r| acc.lcm(r.den()));
    let p: Vec<KPoly> = ratios
        .iter()
        .map(|r| r.num() * &d.exact_div(r.den()))
        .collect();
    // sum_j sigma_j F(n+j,k) = (F(n,k)/D(k)) * sum_j sigma_j P_j(k)
    let reduced = ratio_k
        .mul_ref(&KFrac::from_poly(d.clone()))
        .div_ref(&KFrac::from_poly(d.shift_by(1)));
    let nf = gpnf(&reduced);
    let p1 = nf.a.scale(&nf.z);
    let p2 = nf.b.shift_by(-1);
    let cs: Vec<KPoly> = p[..order].iter().map(|pj| &nf.c * pj).collect();
    let fixed = &nf.c * &p[order];
    let Some((x, sigmas)) = solve_parametric(&p1, &p2, &cs, &fixed) else {
        return Ok(None);
    };
    let mut sig: Vec<QFrac> = sigmas;
    sig.push(QFrac::one());
    let r = KFrac::new(&p2 * &x, &nf.c * &d).expect("nonzero denominator");
    // normalize sigma and scale R by the same factor
    let mut lambda = normalizing_scale(&sig);
    if sig[order].mul_ref(&lambda).num().leading().is_negative() {
        lambda = lambda.neg_ref();
    }
    let coeffs: Vec<QPoly> = sig
        .iter()
        .map(|s| {
            let v = s.mul_ref(&lambda);
            debug_assert!(v.is_polynomial());
            v.num().clone()
        })
        .collect();
    let cert = TelescopingCertificate {
        recurrence: Recurrence { coeffs, rhs: None },
        r: r.mul_ref(&KFrac::constant(lambda)),
    };
    debug_assert!(cert.verify(f, binding).unwrap_or(false));
    Ok(Some(cert))
}

/// Lowest-order certificate with `1 <= J <= jmax`.
pub fn creative_telescope(
    f: &HyperTerm,
    jmax: usize,
    binding: &ParamBinding,
) -> Result<TelescopingCertificate, ZeilError> {
    let f = f.concrete(binding)?;
    for order in 1..=jmax {
        if let Some(cert) = telescope_at_order(&f, order, binding)? {
            return Ok(cert);
        }
    }
    Err(ZeilError::NoRecurrenceFound(jmax))
}

/// Number of `n` values on which boundaries and the oracle are checked.
const CHECK_N: i64 = 12;

fn window(f: &HyperTerm, n: i64) -> i64 {
    let mut w = 0i64;
    for (fac, _) in f.factors() {
        let forms = match fac {
            crate::hyperterm::Factor::Binomial(a, b) => vec![a.clone(), b.clone()],
            crate::hyperterm::Factor::Factorial(l)
            | crate::hyperterm::Factor::Power(_, l)
            | crate::hyperterm::Factor::Linear(l) => vec![l.clone()],
        };
        for l in forms {
            w = w.max(l.coeff_n.abs() * n + l.constant.abs());
        }
    }
    w + 8
}

/// Windowed exact sum `sum_k F(n, k)` for a term with finite support in `k`.
pub fn natural_sum(f: &HyperTerm, n: i64, binding: &ParamBinding) -> Result<Q, TermError> {
    let w = window(f, n);
    let mut acc = q(0);
    for k in -w..=w {
        acc += f.eval(n, k, binding)?;
    }
    Ok(acc)
}

/// The homogeneous recurrence for `w(n) = sum_k F(n,k)` over all `k`,
/// emitted only after checking that `F` and `G = R F` vanish at the edges
/// of the summation window for `n = 0..12`, and that windowed oracle sums
/// satisfy it.
pub fn sum_recurrence_natural(
    f: &HyperTerm,
    cert: &TelescopingCertificate,
    binding: &ParamBinding,
) -> Result<Recurrence, ZeilError> {
    let f = f.concrete(binding)?;
    let g = f.scale(&cert.r);
    let order = cert.recurrence.order() as i64;
    for n in 0..=CHECK_N {
        let w = window(&f, n + order);
        for k in [-w - 1, w + 1] {
            for j in 0..=order {
                if !Ring::is_zero(&f.eval(n + j, k, binding)?) {
                    return Err(ZeilError::Boundary { n: n + j, k });
                }
            }
            match g.eval(n, k, binding) {
                Ok(v) if Ring::is_zero(&v) => {}
                _ => return Err(ZeilError::Boundary { n, k }),
            }
        }
    }
    let sums: Vec<Q> = (0..=CHECK_N + order)
        .map(|n| natural_sum(&f, n, binding))
        .collect::<Result<_, _>>()?;
    let rec = cert.recurrence.normalized();
    for n in 0..=CHECK_N {
        let v = rec
            .apply(n, |m| sums.get(m as usize).cloned())
            .expect("window covers the order");
        if !Ring::is_zero(&v) {
            return Err(ZeilError::OracleMismatch(n));
        }
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> HyperTerm {
        parse_term(s).unwrap()
    }

    fn np(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&v| q(v)).collect())
    }

    fn none() -> ParamBinding {
        ParamBinding::new()
    }

    fn franel() -> Recurrence {
        Recurrence::homogeneous(vec![np(&[-8, -16, -8]), np(&[-16, -21, -7]), np(&[4, 4, 1])])
    }

    #[test]
    fn binomial_row_sum() {
        let f = t("binom(n,k)");
        let cert = creative_telescope(&f, 6, &none()).unwrap();
        assert!(cert.verify(&f, &none()).unwrap());
        assert_eq!(cert.recurrence.coeffs, vec![np(&[-2]), np(&[1])]);
        assert_eq!(cert.recurrence.to_string(), "w(n+1) - 2*w(n) = 0");
        let rec = sum_recurrence_natural(&f, &cert, &none()).unwrap();
        assert_eq!(rec, cert.recurrence);
    }

    #[test]
    fn squares_give_central_binomials() {
        let f = t("binom(n,k)^2");
        let cert = creative_telescope(&f, 6, &none()).unwrap();
        assert_eq!(cert.recurrence.coeffs, vec![np(&[-2, -4]), np(&[1, 1])]);
    }

    #[test]
    fn franel_operators_agree() {
        let a = creative_telescope(&t("binom(n,k)^3"), 6, &none()).unwrap();
        let b = creative_telescope(&t("binom(n,k)^2*binom(2k,n)"), 6, &none()).unwrap();
        assert!(a.verify(&t("binom(n,k)^3"), &none()).unwrap());
        assert!(b.verify(&t("binom(n,k)^2*binom(2k,n)"), &none()).unwrap());
        assert_eq!(a.recurrence, franel());
        assert!(operator_equal(&a.recurrence, &b.recurrence));
        assert_eq!(
            a.recurrence.to_string(),
            "(n^2 + 4*n + 4)*w(n+2) - (7*n^2 + 21*n + 16)*w(n+1) - (8*n^2 + 16*n + 8)*w(n) = 0"
        );
        sum_recurrence_natural(&t("binom(n,k)^3"), &a, &none()).unwrap();
        sum_recurrence_natural(&t("binom(n,k)^2*binom(2k,n)"), &b, &none()).unwrap();
    }

    #[test]
    fn franel_values_satisfy_operator() {
        let vals = [1, 2, 10, 56, 346, 2252];
        let rec = franel();
        for n in 0..4 {
            let v = rec.apply(n, |m| vals.get(m as usize).map(|&x| q(x))).unwrap();
            assert_eq!(v, q(0));
        }
    }

    #[test]
    fn operator_equality_and_normalization() {
        let a: Recurrence = "w(n+1) - 2w(n) = 0".parse().unwrap();
        let b: Recurrence = "2*w(n+1) - 4*w(n) = 0".parse().unwrap();
        assert!(operator_equal(&a, &b));
        assert!(!operator_equal(&a, &franel()));
        let once = b.normalized();
        assert_eq!(once.normalized(), once);
        let c: Recurrence = "-(n+1)*w(n+1) + (n+1)*w(n) = 0".parse().unwrap();
        assert_eq!(c.normalized().coeffs, vec![np(&[-1]), np(&[1])]);
    }

    #[test]
    fn parse_round_trip() {
        let s = "(2n^2+5n+3)*w(n+1) - (32n^2+64n+30)*w(n) = -(16n^2+38n+18)*binom(2n,n)^2/(n+1)";
        let r: Recurrence = s.parse().unwrap();
        assert_eq!(r.order(), 1);
        let back: Recurrence = r.to_string().parse().unwrap();
        assert_eq!(back, r);
        let rec = r.record();
        assert_eq!(rec.to_recurrence().unwrap(), r);
        assert!("w(n+1) = ".parse::<Recurrence>().is_err());
        assert!("3 = 0".parse::<Recurrence>().is_err());
    }

    #[test]
    fn non_natural_boundary_is_rejected() {
        // binom(n+k, k) has unbounded support in k
        let f = t("binom(n+k,k)*(1/2)^(k)");
        match creative_telescope(&f, 3, &none()) {
            Ok(cert) => assert!(matches!(
                sum_recurrence_natural(&f, &cert, &none()),
                Err(ZeilError::Boundary { .. })
            )),
            Err(e) => panic!("{e}"),
        }
    }
}
