//! Verification reports: named checks with exact witnesses.
//!
//! Witnesses are integers or rationals printed as `"p/q"`; no floating-point
//! value ever enters a report.

use num_traits::Zero;
use serde::Serialize;

use crate::linalg::Mat;
use crate::parabolic::ParabolicContext;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextInfo {
    pub n: usize,
    pub alpha: Vec<usize>,
}

impl From<&ParabolicContext> for ContextInfo {
    fn from(ctx: &ParabolicContext) -> Self {
        ContextInfo {
            n: ctx.n(),
            alpha: ctx.alpha().to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// An exact certificate attached to a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A rank or dimension observed at every trial.
    Dimension { value: usize },
    /// An exact value observed at every trial.
    Value { value: String },
    /// A property that holds with no numeric certificate.
    Holds,
    /// A nonzero entry where zero was required (1-based cell).
    Cell {
        trial: usize,
        row: usize,
        col: usize,
        value: String,
    },
    Mismatch {
        trial: usize,
        expected: String,
        found: String,
    },
}

impl Witness {
    pub fn mismatch(trial: usize, expected: impl ToString, found: impl ToString) -> Self {
        Witness::Mismatch {
            trial,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// The mathematical statement the check witnesses.
    pub claim: String,
    pub status: Status,
    pub witness: Witness,
    pub trials_passed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub context: ContextInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<Vec<usize>>,
    /// Support index of `j` for defective strata.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aprime: Option<Vec<usize>>,
    pub regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub trials: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: &str, ctx: &ParabolicContext, seed: Option<u64>, trials: usize) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            context: ctx.into(),
            component: None,
            aprime: None,
            regime: regime_label(ctx).to_string(),
            seed,
            trials,
            checks: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

pub fn regime_label(ctx: &ParabolicContext) -> &'static str {
    if ctx.is_conjecture_regime() {
        "conjecture regime"
    } else {
        "proven"
    }
}

/// A check to be evaluated once per trial.
pub struct CheckSpec {
    pub name: &'static str,
    pub claim: &'static str,
    /// Reported when every trial passes.
    pub success: Witness,
}

/// Outcome of one check at one trial.
pub type Outcome = Result<(), Witness>;

/// Folds per-trial outcomes (`outcomes[trial][check]`) into checks. The
/// witness of a failing check is its first failure in trial order.
pub fn tally(specs: Vec<CheckSpec>, outcomes: &[Vec<Outcome>]) -> Vec<Check> {
    specs
        .into_iter()
        .enumerate()
        .map(|(k, spec)| {
            let mut passed = 0;
            let mut failure = None;
            for trial in outcomes {
                match &trial[k] {
                    Ok(()) => passed += 1,
                    Err(w) => {
                        failure.get_or_insert_with(|| w.clone());
                    }
                }
            }
            Check {
                name: spec.name.to_string(),
                claim: spec.claim.to_string(),
                status: if failure.is_none() {
                    Status::Pass
                } else {
                    Status::Fail
                },
                witness: failure.unwrap_or(spec.success),
                trials_passed: passed,
            }
        })
        .collect()
}

/// `Ok` when `found == expected`, a mismatch witness otherwise.
pub fn expect_eq<T: PartialEq + ToString>(trial: usize, expected: T, found: T) -> Outcome {
    if found == expected {
        Ok(())
    } else {
        Err(Witness::mismatch(trial, expected, found))
    }
}

/// `Ok` when `m` vanishes, otherwise its first nonzero cell (row-major).
pub fn expect_zero(trial: usize, m: &Mat) -> Outcome {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m[(r, c)].is_zero() {
                return Err(Witness::Cell {
                    trial,
                    row: r + 1,
                    col: c + 1,
                    value: m[(r, c)].to_string(),
                });
            }
        }
    }
    Ok(())
}
