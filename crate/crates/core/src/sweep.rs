//! Verification suites and the sweep over every composition of `n`.

use serde::Serialize;

use crate::calogero::verify_cm;
use crate::components::{
    defective_pairs, enumerate_components, verify_component, verify_defective,
};
use crate::error::Error;
use crate::exec::{trial_rng, Exec};
use crate::linalg::Rat;
use crate::moment::{random_group, random_p};
use crate::parabolic::{compositions, ParabolicContext, Region};
use crate::report::{
    expect_eq, regime_label, tally, CheckSpec, Outcome, VerificationReport, Witness, SCHEMA_VERSION,
};
use crate::semicanonical::{is_semicanonical, random_semicanonical, semicanonicalize, spec};

/// Round trips `r = b m b^-1` for random semicanonical `m` and random `b`.
pub fn verify_semicanonical(
    ctx: &ParabolicContext,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> VerificationReport {
    let specs = vec![
        CheckSpec {
            name: "semicanonicalize",
            claim: "every r in p with rational spectrum is P-conjugate to a semicanonical form",
            success: Witness::Holds,
        },
        CheckSpec {
            name: "conjugation",
            claim: "the returned b lies in P and m = b r b^-1",
            success: Witness::Holds,
        },
        CheckSpec {
            name: "is_semicanonical",
            claim: "the returned m satisfies the semicanonical conditions",
            success: Witness::Holds,
        },
        CheckSpec {
            name: "spec_preserved",
            claim: "the per-block spectrum is constant on P-orbits",
            success: Witness::Holds,
        },
    ];
    let outcomes = exec.map(trials, |t| semicanonical_trial(ctx, seed, t));
    let mut report = VerificationReport::new("semicanonical", ctx, Some(seed), trials);
    report.checks = tally(specs, &outcomes);
    report
}

fn semicanonical_trial(ctx: &ParabolicContext, seed: u64, trial: usize) -> Vec<Outcome> {
    let mut rng = trial_rng(seed, &format!("semicanonical/{:?}", ctx.alpha()), trial);
    let known = random_semicanonical(ctx, &mut rng, 2, 4);
    let b = random_group(ctx, &mut rng, 4);
    let r = b.conjugate(&known);
    let res = match semicanonicalize(ctx, &r) {
        Ok(res) => res,
        Err(e) => {
            let w = Witness::mismatch(trial, "a semicanonical form", e.name());
            return vec![Err(w.clone()), Err(w.clone()), Err(w.clone()), Err(w)];
        }
    };
    let in_group = ctx.check_region(res.b.matrix(), Region::P).is_ok()
        && ctx.diagonal_blocks_invertible(res.b.matrix())
        && res.m == res.b.conjugate(&r);
    let conjugation = if in_group {
        Ok(())
    } else {
        Err(Witness::mismatch(
            trial,
            "m = b r b^-1 with b in P",
            "violated",
        ))
    };
    let accepted = match is_semicanonical(ctx, &res.m) {
        Ok(_) => Ok(()),
        Err(v) => {
            let (row, col) = v.cell();
            Err(Witness::Cell {
                trial,
                row: row + 1,
                col: col + 1,
                value: res.m[(row, col)].to_string(),
            })
        }
    };
    let spec_before = spec(ctx, &known).map(|s| format!("{:?}", s.0));
    let spec_after = spec(ctx, &res.m).map(|s| format!("{:?}", s.0));
    vec![
        Ok(()),
        conjugation,
        accepted,
        expect_eq(
            trial,
            spec_before.unwrap_or_else(|e| e.name().into()),
            spec_after.unwrap_or_else(|e| e.name().into()),
        ),
    ]
}

/// The diagonal-block power traces `g_{k,iota}` are invariant under the
/// coadjoint action and under the limit `t -> 0` of `lambda(t)`.
pub fn verify_invariants(
    ctx: &ParabolicContext,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> VerificationReport {
    let specs = vec![
        CheckSpec {
            name: "conjugation_invariance",
            claim: "g_{k,iota}(b r b^-1) = g_{k,iota}(r) for b in P",
            success: Witness::Holds,
        },
        CheckSpec {
            name: "lambda_limit",
            claim: "g_{k,iota} of the lambda(t) -> 0 limit equals g_{k,iota}",
            success: Witness::Holds,
        },
    ];
    let outcomes = exec.map(trials, |t| {
        let mut rng = trial_rng(seed, &format!("invariants/{:?}", ctx.alpha()), t);
        let r = random_p(ctx, &mut rng, 5);
        let b = random_group(ctx, &mut rng, 4);
        let conj = b.conjugate(&r);
        let limit = ctx.lambda_limit(&r);
        let values = |m| -> Vec<Rat> {
            (0..ctx.num_blocks())
                .flat_map(|k| (1..=ctx.alpha()[k]).map(move |iota| (k, iota)))
                .map(|(k, iota)| ctx.invariant_g(k, iota, m).expect("argument lies in p"))
                .collect()
        };
        let base = values(&r);
        vec![
            expect_eq(t, format!("{base:?}"), format!("{:?}", values(&conj))),
            expect_eq(t, format!("{base:?}"), format!("{:?}", values(&limit))),
        ]
    });
    let mut report = VerificationReport::new("invariants", ctx, Some(seed), trials);
    report.checks = tally(specs, &outcomes);
    report
}

/// Every suite for one composition.
#[derive(Clone, Debug, Serialize)]
pub struct ContextSweep {
    pub alpha: Vec<usize>,
    pub regime: String,
    pub component_count: usize,
    pub components: Vec<VerificationReport>,
    pub defective: Vec<VerificationReport>,
    pub cm: VerificationReport,
    pub semicanonical: VerificationReport,
    pub invariants: VerificationReport,
}

impl ContextSweep {
    pub fn reports(&self) -> impl Iterator<Item = &VerificationReport> {
        self.components.iter().chain(&self.defective).chain([
            &self.cm,
            &self.semicanonical,
            &self.invariants,
        ])
    }

    pub fn all_passed(&self) -> bool {
        self.reports().all(VerificationReport::all_passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub alpha: Vec<usize>,
    pub error: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub allow_conjecture: bool,
    pub skipped: Vec<Skipped>,
    pub contexts: Vec<ContextSweep>,
    /// Whether every check in the proven regime passed. Contexts in the
    /// conjecture regime are reported but carry no claim.
    pub all_passed: bool,
}

pub fn sweep_context(ctx: &ParabolicContext, trials: usize, seed: u64, exec: Exec) -> ContextSweep {
    let components = enumerate_components(ctx);
    let component_reports = components
        .iter()
        .map(|a| verify_component(ctx, a, trials, seed, exec).expect("enumerated index fits"))
        .collect();
    let defective = defective_pairs(ctx)
        .iter()
        .map(|(a, ap)| verify_defective(ctx, a, ap, trials, seed, exec).expect("admissible pair"))
        .collect();
    ContextSweep {
        alpha: ctx.alpha().to_vec(),
        regime: regime_label(ctx).to_string(),
        component_count: components.len(),
        components: component_reports,
        defective,
        cm: verify_cm(ctx, trials, seed, exec),
        semicanonical: verify_semicanonical(ctx, trials, seed, exec),
        invariants: verify_invariants(ctx, trials, seed, exec),
    }
}

/// Runs every suite on every composition of `n`. Compositions with more than
/// five blocks are skipped unless `allow_conjecture` is set.
pub fn cmd_sweep(
    n: usize,
    trials: usize,
    seed: u64,
    allow_conjecture: bool,
    exec: Exec,
) -> SweepReport {
    let mut skipped = Vec::new();
    let mut contexts = Vec::new();
    for alpha in compositions(n) {
        match ParabolicContext::new(n, &alpha, allow_conjecture) {
            Ok(ctx) => contexts.push(ctx),
            Err(e @ Error::TooManyBlocks { .. }) => skipped.push(Skipped {
                alpha,
                error: e.name(),
                message: e.to_string(),
            }),
            Err(e) => unreachable!("compositions of n are valid contexts: {e}"),
        }
    }
    let contexts: Vec<ContextSweep> = exec.map(contexts.len(), |k| {
        sweep_context(&contexts[k], trials, seed, exec)
    });
    let all_passed = contexts
        .iter()
        .filter(|c| c.regime == "proven")
        .all(ContextSweep::all_passed);
    SweepReport {
        schema_version: SCHEMA_VERSION,
        n,
        trials,
        seed,
        allow_conjecture,
        skipped,
        contexts,
        all_passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_two() {
        let report = cmd_sweep(2, 4, 1, false, Exec::default());
        assert!(report.all_passed);
        assert!(report.skipped.is_empty());
        let counts: Vec<usize> = report.contexts.iter().map(|c| c.component_count).collect();
        assert_eq!(counts, vec![4, 3]);
        assert_eq!(report.contexts[0].alpha, vec![1, 1]);
    }

    #[test]
    fn six_blocks_are_skipped_without_the_flag() {
        let report = cmd_sweep(6, 1, 1, false, Exec::default());
        assert_eq!(report.skipped.len(), 1);
        assert_eq!(report.skipped[0].alpha, vec![1; 6]);
        assert_eq!(report.skipped[0].error, "TooManyBlocks");
        assert_eq!(report.contexts.len(), 31);
        assert!(report.contexts.iter().all(|c| c.regime == "proven"));
    }

    #[test]
    fn sweep_is_deterministic_across_modes() {
        let a = serde_json::to_string(&cmd_sweep(3, 3, 9, false, Exec::Sequential)).unwrap();
        let b = serde_json::to_string(&cmd_sweep(3, 3, 9, false, Exec::Parallel)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn suites_pass_on_small_contexts() {
        for alpha in [vec![1, 2], vec![3], vec![1, 1, 1]] {
            let ctx = ParabolicContext::new(3, &alpha, false).unwrap();
            assert!(verify_semicanonical(&ctx, 20, 4, Exec::default()).all_passed());
            assert!(verify_invariants(&ctx, 20, 4, Exec::default()).all_passed());
        }
    }
}
