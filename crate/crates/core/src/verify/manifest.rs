//! TOML identity manifests: a list of `[[case]]` tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("case '{id}': {msg}")]
    Case { id: String, msg: String },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub case: Vec<CaseSpec>,
}

/// One identity `lhs = rhs (= also...)` checked on an integer grid, with
/// optional symbolic certificates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub id: String,
    #[serde(default)]
    pub description: String,
    /// Inclusive ranges per symbol, e.g. `{ n = [0, 40] }`.
    #[serde(default)]
    pub grid: BTreeMap<String, [i64; 2]>,
    /// Extra linear constraints such as `"n+m<=20"`.
    #[serde(default)]
    pub constraints: Vec<String>,
    /// `catalan`, `binom_row`, `symbolic`, `random:<seed>` or `random:<a>..<b>`.
    #[serde(default)]
    pub sequences: Vec<String>,
    #[serde(default = "default_seq_len")]
    pub sequence_length: usize,
    #[serde(default)]
    pub lhs: Vec<String>,
    #[serde(default)]
    pub rhs: Vec<String>,
    /// Further forms that must equal `lhs`.
    #[serde(default)]
    pub also: Vec<Vec<String>>,
    pub gosper: Option<GosperSpec>,
    pub zeilberger: Option<ZeilSpec>,
    pub recurrence: Option<RecurrenceSpec>,
    pub wz: Option<WzSpec>,
}

fn default_seq_len() -> usize {
    64
}

fn default_jmax() -> usize {
    6
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GosperSpec {
    pub term: String,
    pub lower: String,
    pub upper: String,
    /// Expected antidifference `G`, compared as a term.
    pub antidifference: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeilSpec {
    /// Summands whose natural-boundary sums all satisfy `operator`.
    pub terms: Vec<String>,
    /// Expected recurrence, e.g. `"(n+1)*w(n+1) - 2(2n+1)*w(n) = 0"`.
    pub operator: String,
    /// `w(0), w(1), ...`; the first `order` values pin the solution.
    #[serde(default)]
    pub initial: Vec<String>,
    #[serde(default = "default_jmax")]
    pub jmax: usize,
    #[serde(default = "default_check_upto")]
    pub check_upto: i64,
}

fn default_check_upto() -> i64 {
    25
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceSpec {
    pub recurrence: String,
    /// Inclusive `n` range on which each listed side must satisfy it.
    pub n: [i64; 2],
    /// `lhs`, `rhs` or `also<i>`; default both sides.
    #[serde(default)]
    pub sides: Vec<String>,
    /// An equivalent form of the inhomogeneous part, compared as a term.
    pub rhs_form: Option<String>,
    /// A single instance `(n, value)` where both sides of the recurrence
    /// must evaluate to `value`.
    pub instance: Option<(i64, String)>,
    /// Summand whose telescoping certificate must be derivable.
    pub summand: Option<String>,
    #[serde(default = "default_jmax")]
    pub jmax: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WzPairSpec {
    pub f: String,
    pub g: String,
    /// `f(n) = sum_{k=0}^{top-1} F(n,k)`.
    pub top: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WzSpec {
    /// Operator in normalized form, e.g. `"(n+1)*w(n+1) - n*w(n) = 0"`.
    pub operator: String,
    /// Difference equation satisfied by each `f`; must normalize to
    /// `operator` and its right side must equal `G(n, top)`.
    pub difference: String,
    pub pairs: Vec<WzPairSpec>,
    pub grid: BTreeMap<String, [i64; 2]>,
    /// `f(n0) = value` for every pair.
    pub initial: Option<(i64, String)>,
    #[serde(default = "default_wz_check")]
    pub check_n: [i64; 2],
}

fn default_wz_check() -> [i64; 2] {
    [1, 8]
}

impl Manifest {
    pub fn from_toml(src: &str) -> Result<Self, ManifestError> {
        let m: Manifest = toml::from_str(src)?;
        let mut seen = std::collections::BTreeSet::new();
        for c in &m.case {
            if !seen.insert(c.id.clone()) {
                return Err(ManifestError::Case {
                    id: c.id.clone(),
                    msg: "duplicate id".into(),
                });
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cases() {
        let m = Manifest::from_toml(
            r#"
[[case]]
id = "row-sum"
grid = { n = [0, 10] }
lhs = ["sum(k=0..n) binom(n,k)"]
rhs = ["2^n"]

[case.gosper]
term = "binom(n,k)"
lower = "0"
upper = "n"

[[case]]
id = "other"
"#,
        )
        .unwrap();
        assert_eq!(m.case.len(), 2);
        assert_eq!(m.case[0].grid["n"], [0, 10]);
        assert_eq!(m.case[0].sequence_length, 64);
        assert!(m.case[0].gosper.is_some());
        assert!(m.case[1].lhs.is_empty());
    }

    #[test]
    fn rejects_duplicates_and_typos() {
        assert!(Manifest::from_toml("[[case]]\nid='a'\n[[case]]\nid='a'\n").is_err());
        assert!(Manifest::from_toml("[[case]]\nid='a'\nlsh=['1']\n").is_err());
    }
}
