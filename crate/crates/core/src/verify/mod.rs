//! Exact checking: brute-force sums, WZ pairs, recurrences, and the
//! manifest-driven identity suite.

mod expr;
mod manifest;
mod suite;

pub use expr::{Env, LinComb, SumExpr};
pub use manifest::{
    CaseSpec, GosperSpec, Manifest, ManifestError, RecurrenceSpec, WzPairSpec, WzSpec, ZeilSpec,
};
pub use suite::{run_identity_suite, CaseReport, CheckOutcome, SuiteReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{binomial, q, q_frac, Ring, Q};
use crate::hyperterm::{HyperTerm, LinearForm, ParamBinding, TermError};
use crate::zeilberger::{Recurrence, TelescopingCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("sequence '{name}' has no value at index {index}")]
    SequenceOverrun { name: String, index: i64 },
    #[error("missing value w({0})")]
    MissingValue(i64),
    #[error("{0}")]
    Syntax(String),
}

/// `sum_{k=lo}^{hi} F(n, k)` by direct evaluation; empty when `lo > hi`.
pub fn oracle_sum(
    f: &HyperTerm,
    n: i64,
    lo: &LinearForm,
    hi: &LinearForm,
    binding: &ParamBinding,
) -> Result<Q, TermError> {
    let a = lo.eval(n, 0, binding)?;
    let b = hi.eval(n, 0, binding)?;
    let mut acc = q(0);
    for k in a..=b {
        acc += f.eval(n, k, binding)?;
    }
    Ok(acc)
}

/// Values of a sequence `<a_i>` referenced as `a[...]` in sum expressions.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    Catalan,
    /// `a_i = binom(i, n)` for the current `n`.
    BinomRow,
    Custom { name: String, values: Vec<Q> },
    /// Keep `a_i` as formal symbols and compare coefficient by coefficient.
    Symbolic,
}

impl SequenceSpec {
    /// `random:<seed>` sequences: reproducible rationals `p/q`, `|p| <= 50`, `1 <= q <= 20`.
    pub fn random(seed: u64, len: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..len)
            .map(|_| q_frac(rng.random_range(-50..=50), rng.random_range(1..=20)))
            .collect();
        SequenceSpec::Custom {
            name: format!("random:{seed}"),
            values,
        }
    }

    pub fn name(&self) -> String {
        match self {
            SequenceSpec::Catalan => "catalan".into(),
            SequenceSpec::BinomRow => "binom_row".into(),
            SequenceSpec::Custom { name, .. } => name.clone(),
            SequenceSpec::Symbolic => "symbolic".into(),
        }
    }

    /// `a_i` at grid point `n`; `None` for the symbolic table.
    pub fn value(&self, i: i64, n: i64) -> Result<Option<Q>, VerifyError> {
        let overrun = || VerifyError::SequenceOverrun {
            name: self.name(),
            index: i,
        };
        match self {
            SequenceSpec::Symbolic => Ok(None),
            SequenceSpec::Catalan if i >= 0 => Ok(Some(Q::new(binomial(2 * i, i), (i + 1).into()))),
            SequenceSpec::Catalan => Err(overrun()),
            SequenceSpec::BinomRow => Ok(Some(Q::from_integer(binomial(i, n)))),
            SequenceSpec::Custom { values, .. } => usize::try_from(i)
                .ok()
                .and_then(|i| values.get(i))
                .cloned()
                .map(Some)
                .ok_or_else(overrun),
        }
    }
}

/// An operator relation `sum_j op_j(n) F(n+j,k) = G(n,k+1) - G(n,k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WzPair {
    pub f: HyperTerm,
    pub g: HyperTerm,
    /// Operator coefficients; the right side of the recurrence is ignored.
    pub operator: Recurrence,
}

/// The pair's equation divided by `F(n,k)`, as an exact identity in `Q(n)(k)`.
pub fn wz_identity_holds(pair: &WzPair, binding: &ParamBinding) -> Result<bool, TermError> {
    let f = pair.f.concrete(binding)?;
    let g = pair.g.concrete(binding)?;
    let Some(r) = g.div(&f)?.as_rational(binding)? else {
        return Ok(false);
    };
    let cert = TelescopingCertificate {
        recurrence: pair.operator.clone(),
        r,
    };
    cert.verify(&f, binding)
}

/// `G(n, 0)` vanishes for every `n`.
pub fn lower_boundary_vanishes(pair: &WzPair, binding: &ParamBinding) -> Result<bool, TermError> {
    Ok(pair.g.concrete(binding)?.at_k(0)?.is_identically_zero())
}

/// Symbolic WZ identity and `G(n,0) = 0` at every binding of the grid.
pub fn check_wz_pair(pair: &WzPair, grid: &[ParamBinding]) -> bool {
    grid.iter().all(|b| {
        matches!(wz_identity_holds(pair, b), Ok(true))
            && matches!(lower_boundary_vanishes(pair, b), Ok(true))
    })
}

/// `sum_j sigma_j(n) w(n+j) = rhs(n)` for every `n` in `lo..=hi`.
pub fn check_recurrence(
    rec: &Recurrence,
    w: impl Fn(i64) -> Option<Q>,
    lo: i64,
    hi: i64,
    binding: &ParamBinding,
) -> Result<bool, VerifyError> {
    for n in lo..=hi {
        for j in 0..=rec.order() as i64 {
            if w(n + j).is_none() {
                return Err(VerifyError::MissingValue(n + j));
            }
        }
        let lhs = rec.apply(n, &w).expect("values present");
        if lhs != rec.rhs_at(n, binding)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Catalan number as an exact rational, for tests and examples.
pub fn catalan_number(i: i64) -> Q {
    Q::new(binomial(2 * i, i), (i + 1).into())
}

/// Every integer point of the grid `name -> [lo, hi]`, in lexicographic
/// order of the sorted names.
pub fn grid_points(ranges: &[(char, i64, i64)]) -> Vec<Vec<(char, i64)>> {
    let mut out: Vec<Vec<(char, i64)>> = vec![Vec::new()];
    for &(name, lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |v| {
                    let mut p = p.clone();
                    p.push((name, v));
                    p
                })
            })
            .collect();
    }
    out
}

/// `true` when `x` is exactly zero; small helper for readable checks.
pub(crate) fn is_zero(x: &Q) -> bool {
    Ring::is_zero(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gosper::{gosper_antidifference, telescope_sum, GosperResult};
    use crate::hyperterm::{parse_linear, parse_term};

    fn t(s: &str) -> HyperTerm {
        parse_term(s).unwrap()
    }

    fn lin(s: &str) -> LinearForm {
        parse_linear(s).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let b = ParamBinding::new();
        let f = t("binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)");
        assert_eq!(oracle_sum(&f, 2, &lin("0"), &lin("n"), &b).unwrap(), q(30));
        let g = t("2*binom(2n,k)*binom(2n+1,k)");
        assert_eq!(oracle_sum(&g, 1, &lin("0"), &lin("n"), &b).unwrap(), q(14));
        assert_eq!(oracle_sum(&g, 1, &lin("3"), &lin("n"), &b).unwrap(), q(0));
    }

    #[test]
    fn oracle_agrees_with_telescoping() {
        let b = ParamBinding::new();
        let f = t("binom(2k,k)*binom(2n-2k+2,n-k+1)/(k+1)");
        let GosperResult::Summable(cert) = gosper_antidifference(&f, &b).unwrap() else {
            panic!("summable");
        };
        for n in 0..=15 {
            for hi in 0..=n {
                let o = oracle_sum(&f, n, &lin("0"), &LinearForm::constant(hi), &b).unwrap();
                assert_eq!(telescope_sum(&f, &cert, n, 0, hi, &b).unwrap(), o);
            }
        }
    }

    fn wz_pair(g: &str) -> WzPair {
        WzPair {
            f: t("binom(n+r,n)*binom(r+k,r-1)*binom(n+k,n)"),
            g: t(g),
            operator: "(n+1)*w(n+1) - n*w(n) = 0".parse().unwrap(),
        }
    }

    fn rs_grid(max: i64) -> Vec<ParamBinding> {
        grid_points(&[('r', 1, max), ('s', 1, max)])
            .into_iter()
            .map(|p| {
                let mut b = ParamBinding::new();
                for (c, v) in p {
                    b.insert(c, v).unwrap();
                }
                b
            })
            .collect()
    }

    #[test]
    fn wz_pair_examples() {
        let pair = wz_pair("binom(n+r,n)*binom(r+k,r-1)*binom(n+k,n)*(k+1)*k/(n+1)");
        assert!(check_wz_pair(&pair, &rs_grid(8)));
        let b = ParamBinding::new().with('r', 2).unwrap();
        assert!(lower_boundary_vanishes(&pair, &b).unwrap());
        let perturbed = wz_pair("binom(n+r,n)*binom(r+k,r-1)*binom(n+k,n)*(k+2)*k/(n+1)");
        assert!(!check_wz_pair(&perturbed, &rs_grid(2)));
        // the opposite sign convention does not hold
        let mut flipped = pair.clone();
        flipped.operator = "n*w(n) - (n+1)*w(n+1) = 0".parse().unwrap();
        assert!(!wz_identity_holds(&flipped, &b).unwrap());
    }

    #[test]
    fn recurrence_checks() {
        let b = ParamBinding::new();
        let rec: Recurrence =
            "(2n^2+5n+3)*w(n+1) - (32n^2+64n+30)*w(n) = -(16n^2+38n+18)*binom(2n,n)^2/(n+1)"
                .parse()
                .unwrap();
        let lhs = t("2*binom(2n,k)*binom(2n+1,k)");
        let w = |n: i64| oracle_sum(&lhs, n, &lin("0"), &lin("n"), &b).ok();
        assert_eq!(w(0), Some(q(2)));
        assert_eq!(w(1), Some(q(14)));
        assert_eq!(rec.apply(0, w).unwrap(), q(-18));
        assert_eq!(rec.rhs_at(0, &b).unwrap(), q(-18));
        assert!(check_recurrence(&rec, w, 0, 40, &b).unwrap());
        let closed = |n: i64| {
            Some(Q::from_integer(binomial(4 * n + 1, 2 * n) + binomial(2 * n, n) * binomial(2 * n, n)))
        };
        assert!(check_recurrence(&rec, closed, 1, 40, &b).unwrap());

        let franel: Recurrence = "(n+2)^2*w(n+2) - (7n^2+21n+16)*w(n+1) - 8(n+1)^2*w(n) = 0"
            .parse()
            .unwrap();
        let vals = [1, 2, 10, 56, 346, 2252];
        let fw = |n: i64| vals.get(n as usize).map(|&v| q(v));
        assert!(check_recurrence(&franel, fw, 0, 3, &b).unwrap());
        assert_eq!(check_recurrence(&franel, fw, 0, 4, &b), Err(VerifyError::MissingValue(6)));
    }

    #[test]
    fn sequences() {
        assert_eq!(SequenceSpec::Catalan.value(4, 0).unwrap(), Some(q(14)));
        assert_eq!(SequenceSpec::BinomRow.value(5, 2).unwrap(), Some(q(10)));
        assert!(SequenceSpec::Catalan.value(-1, 0).is_err());
        let r1 = SequenceSpec::random(7, 10);
        assert_eq!(r1, SequenceSpec::random(7, 10));
        assert_ne!(r1, SequenceSpec::random(8, 10));
        assert!(matches!(r1.value(10, 0), Err(VerifyError::SequenceOverrun { .. })));
        assert_eq!(catalan_number(3), q(5));
    }
}
