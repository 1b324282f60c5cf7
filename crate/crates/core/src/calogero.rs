//! The Calogero-Moser fiber `mu^-1(-I)`.
//!
//! Points with diagonalizable `r` are normalized to `r = diag(-rho)`,
//! `i = (-1, ..., -1)`, `j = (1, ..., 1)` and a block lower Calogero-Moser
//! matrix `s`. Then `tr s^2` is the Hamiltonian of a particle system in which
//! only particles in a common block interact.

use num_traits::{One, Zero};
use rand::Rng;

use crate::components::{random_distinct, random_integers};
use crate::error::{Error, Result};
use crate::exec::{trial_rng, Exec};
use crate::linalg::{outer, rank_one_factor, ColVec, Mat, Rat, RowVec};
use crate::moment::{
    commutant_dimension, isotropy_dimension, moment_differential_rank, Quad, DEFAULT_SAMPLE_BOUND,
};
use crate::parabolic::{ParabolicContext, Region};
use crate::report::{
    expect_eq, expect_zero, tally, CheckSpec, Outcome, VerificationReport, Witness,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMParams {
    pub rho: Vec<Rat>,
    pub sigma: Vec<Rat>,
}

impl CMParams {
    pub fn random<R: Rng>(ctx: &ParabolicContext, rng: &mut R) -> Self {
        CMParams {
            rho: random_distinct(rng, ctx.n(), DEFAULT_SAMPLE_BOUND),
            sigma: random_integers(rng, ctx.n(), DEFAULT_SAMPLE_BOUND),
        }
    }

    fn check(&self, ctx: &ParabolicContext) -> Result<()> {
        let n = ctx.n();
        if self.rho.len() != n || self.sigma.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "rho and sigma must have length {n}"
            )));
        }
        for p in 0..n {
            if self.rho[..p].contains(&self.rho[p]) {
                return Err(Error::DegenerateSpectrum);
            }
        }
        Ok(())
    }
}

/// `proj([r, s] + I + ij)` onto `PSTAR_REGION`; zero on the fiber.
pub fn cm_residual(ctx: &ParabolicContext, q: &Quad) -> Mat {
    let full = &(&Mat::commutator(q.r(), q.s()) + &ctx.identity()) + &outer(q.i(), q.j());
    ctx.project(&full, Region::PStar)
}

/// The normalized point of the fiber with spectrum `rho` and diagonal `sigma`.
pub fn cm_representative(ctx: &ParabolicContext, p: &CMParams) -> Result<Quad> {
    p.check(ctx)?;
    let n = ctx.n();
    let r = Mat::diag(&p.rho.iter().map(|x| -x).collect::<Vec<_>>());
    let mut s = Mat::diag(&p.sigma);
    for (a, b) in ctx.region_cells(Region::PStar) {
        if a != b {
            s[(a, b)] = (&p.rho[b] - &p.rho[a]).recip();
        }
    }
    let i = ColVec(vec![-Rat::one(); n]);
    let j = RowVec(vec![Rat::one(); n]);
    let q = Quad::new(ctx, r, s, i, j).expect("entries placed inside their regions");
    assert!(
        cm_residual(ctx, &q).is_zero(),
        "representative must satisfy [r,s] + I = -ij mod u"
    );
    Ok(q)
}

/// `tr s^2` split into the free part and one interaction term per block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hamiltonian {
    /// `sum_p sigma_p^2`.
    pub free: Rat,
    /// `-2 sum_{p<q in I_k} (rho_p - rho_q)^-2` for each block `k`.
    pub interactions: Vec<Rat>,
    pub total: Rat,
}

/// The closed form of `tr s^2`.
pub fn hamiltonian(ctx: &ParabolicContext, p: &CMParams) -> Result<Hamiltonian> {
    p.check(ctx)?;
    let free = p.sigma.iter().fold(Rat::zero(), |acc, x| acc + x * x);
    let two = Rat::from_integer(2.into());
    let interactions: Vec<Rat> = (0..ctx.num_blocks())
        .map(|k| {
            let range = ctx.block_range(k);
            let mut sum = Rat::zero();
            for a in range.clone() {
                for b in a + 1..range.end {
                    let d = &p.rho[a] - &p.rho[b];
                    sum += (&d * &d).recip();
                }
            }
            -(&two * sum)
        })
        .collect();
    let total = interactions.iter().fold(free.clone(), |acc, x| acc + x);
    Ok(Hamiltonian {
        free,
        interactions,
        total,
    })
}

/// `tr s^2` of the representative's `s`, checked against the closed form.
pub fn cm_trace_square(ctx: &ParabolicContext, p: &CMParams) -> Result<Rat> {
    let q = cm_representative(ctx, p)?;
    let trace = (q.s() * q.s()).trace();
    assert_eq!(
        trace,
        hamiltonian(ctx, p)?.total,
        "tr s^2 disagrees with its closed form"
    );
    Ok(trace)
}

fn cm_checks(ctx: &ParabolicContext) -> Vec<CheckSpec> {
    let d = ctx.dim_p();
    let n = ctx.n();
    vec![
        CheckSpec {
            name: "fiber_equation",
            claim: "[r,s] + I + ij vanishes modulo u",
            success: Witness::Holds,
        },
        CheckSpec {
            name: "rank_one",
            claim: "[r,s] + I completed by -ij on u has rank 1 and factors as -ij",
            success: Witness::Dimension { value: 1 },
        },
        CheckSpec {
            name: "differential_rank",
            claim: "d mu is surjective at every point of the fiber",
            success: Witness::Dimension { value: d },
        },
        CheckSpec {
            name: "free_action",
            claim: "P acts freely on the fiber",
            success: Witness::Dimension { value: 0 },
        },
        CheckSpec {
            name: "commutant",
            claim: "only scalars in p commute with r and with s modulo u",
            success: Witness::Dimension { value: 1 },
        },
        CheckSpec {
            name: "quotient_dimension",
            claim: "the quotient of the fiber by P is smooth of dimension 2n",
            success: Witness::Dimension { value: 2 * n },
        },
        CheckSpec {
            name: "hamiltonian",
            claim: "tr s^2 = sum sigma_p^2 - 2 sum_k sum_{p<q in I_k} (rho_p - rho_q)^-2",
            success: Witness::Holds,
        },
    ]
}

/// Outcomes of the six point checks plus the trace identity.
fn cm_point_outcomes(ctx: &ParabolicContext, p: &CMParams, trial: usize) -> Result<Vec<Outcome>> {
    let q = cm_representative(ctx, p)?;
    let d = ctx.dim_p();
    let n = ctx.n();

    let completed = &ctx.project(
        &(&Mat::commutator(q.r(), q.s()) + &ctx.identity()),
        Region::PStar,
    ) + &ctx.project(&-&outer(q.i(), q.j()), Region::U);
    let rank = completed.rank();
    let rank_one = if rank != 1 {
        Err(Witness::mismatch(trial, 1, rank))
    } else {
        let (u, v) = rank_one_factor(&completed)?;
        if u.is_parallel_to(q.i()) && v.is_parallel_to(q.j()) {
            Ok(())
        } else {
            Err(Witness::mismatch(
                trial,
                "factors parallel to (i, j)",
                "other factors",
            ))
        }
    };

    let dmu_rank = moment_differential_rank(ctx, &q);
    let iso = isotropy_dimension(ctx, &q);
    // tangent space of the fiber minus the tangent space of the orbit
    let quotient = (2 * d + 2 * n - dmu_rank) as i64 - (d - iso) as i64;
    let trace = (q.s() * q.s()).trace();
    Ok(vec![
        expect_zero(trial, &cm_residual(ctx, &q)),
        rank_one,
        expect_eq(trial, d, dmu_rank),
        expect_eq(trial, 0, iso),
        expect_eq(trial, 1, commutant_dimension(ctx, q.r(), q.s())),
        expect_eq(trial, 2 * n as i64, quotient),
        expect_eq(trial, hamiltonian(ctx, p)?.total, trace),
    ])
}

/// All checks at the single point `cm_representative(p)`.
pub fn verify_cm_point(ctx: &ParabolicContext, p: &CMParams) -> Result<VerificationReport> {
    let outcomes = cm_point_outcomes(ctx, p, 0)?;
    let mut report = VerificationReport::new("cm", ctx, None, 1);
    report.checks = tally(cm_checks(ctx), &[outcomes]);
    Ok(report)
}

/// The point checks at `trials` random representatives.
pub fn verify_cm(
    ctx: &ParabolicContext,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> VerificationReport {
    let outcomes = exec.map(trials, |t| {
        let tag = format!("cm/{:?}", ctx.alpha());
        let params = CMParams::random(ctx, &mut trial_rng(seed, &tag, t));
        cm_point_outcomes(ctx, &params, t).expect("sampled parameters are valid")
    });
    let mut report = VerificationReport::new("cm", ctx, Some(seed), trials);
    report.checks = tally(cm_checks(ctx), &outcomes);
    report
}
