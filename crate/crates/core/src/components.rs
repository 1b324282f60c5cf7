//! Components of the zero fiber `mu^-1(0)`.
//!
//! For each `0 <= a <= alpha` the open stratum `M'_a` has representatives with
//! `r = diag(rho)` (distinct `rho`), `supp(i) = a_down` and
//! `supp(j) = (alpha - a)_up`. Replacing `alpha - a` by a smaller `a'` leaves
//! some index unused and gives the defective strata `M''_a`, whose points have
//! positive-dimensional stabilizers.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::{trial_rng, Exec};
use crate::linalg::{rat, ColVec, Mat, Rat, RowVec};
use crate::moment::{
    group_act, isotropy_dimension, moment_differential_rank, moment_map, random_group, Quad,
    DEFAULT_SAMPLE_BOUND,
};
use crate::parabolic::{ComponentIndex, ParabolicContext, Region};
use crate::report::{
    expect_eq, expect_zero, tally, CheckSpec, Outcome, VerificationReport, Witness,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentParams {
    pub a: ComponentIndex,
    pub rho: Vec<Rat>,
    pub sigma: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectiveParams {
    pub a: ComponentIndex,
    pub aprime: ComponentIndex,
    pub rho: Vec<Rat>,
    pub sigma: Vec<Rat>,
}

/// Every `a` with `0 <= a <= alpha`, lexicographic.
pub fn enumerate_components(ctx: &ParabolicContext) -> Vec<ComponentIndex> {
    bounded_indices(ctx.alpha())
}

fn bounded_indices(bound: &[usize]) -> Vec<ComponentIndex> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(ComponentIndex).collect()
}

/// Admissible defective pairs: `a + a' <= alpha` with `a + a' != alpha`.
pub fn defective_pairs(ctx: &ParabolicContext) -> Vec<(ComponentIndex, ComponentIndex)> {
    let alpha = ctx.alpha();
    enumerate_components(ctx)
        .into_iter()
        .flat_map(|a| {
            let rest = a.complement(alpha);
            bounded_indices(&rest.0)
                .into_iter()
                .filter(move |ap| *ap != rest)
                .map(move |ap| (a.clone(), ap))
        })
        .collect()
}

fn check_params(ctx: &ParabolicContext, rho: &[Rat], sigma: &[Rat]) -> Result<()> {
    let n = ctx.n();
    if rho.len() != n || sigma.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rho and sigma must have length {n}"
        )));
    }
    for p in 0..n {
        if rho[..p].contains(&rho[p]) {
            return Err(Error::DegenerateSpectrum);
        }
    }
    Ok(())
}

fn check_index(ctx: &ParabolicContext, a: &ComponentIndex) -> Result<()> {
    if a.fits(ctx.alpha()) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "component index {:?} is not bounded by {:?}",
            a.0,
            ctx.alpha()
        )))
    }
}

/// Solves `mu = 0` for `s` given `r = diag(rho)`, the supports of `i` and `j`,
/// and the diagonal `sigma`.
fn zero_fiber_quad(
    ctx: &ParabolicContext,
    rho: &[Rat],
    sigma: &[Rat],
    i_support: &[usize],
    j_support: &[usize],
) -> Quad {
    let n = ctx.n();
    let i = ColVec::indicator(n, i_support);
    let j = RowVec::indicator(n, j_support);
    let mut s = Mat::diag(sigma);
    for (p, q) in ctx.region_cells(Region::PStar) {
        if p != q && !i[p].is_zero() && !j[q].is_zero() {
            s[(p, q)] = -(&i[p] * &j[q]) / (&rho[p] - &rho[q]);
        }
    }
    let q = Quad::new(ctx, Mat::diag(rho), s, i, j).expect("entries placed inside their regions");
    assert!(
        moment_map(ctx, &q).is_zero(),
        "representative must lie in the zero fiber"
    );
    q
}

/// A representative of the stratum `M'_a`.
pub fn component_representative(ctx: &ParabolicContext, p: &ComponentParams) -> Result<Quad> {
    check_index(ctx, &p.a)?;
    check_params(ctx, &p.rho, &p.sigma)?;
    let up = p.a.complement(ctx.alpha());
    Ok(zero_fiber_quad(
        ctx,
        &p.rho,
        &p.sigma,
        &ctx.support_down(&p.a),
        &ctx.support_up(&up),
    ))
}

/// A point of the defective stratum: `j` supported on `a'_up` with
/// `a + a' < alpha`, so some index is in neither support.
pub fn defective_representative(ctx: &ParabolicContext, p: &DefectiveParams) -> Result<Quad> {
    check_index(ctx, &p.a)?;
    let sum = p.a.add(&p.aprime);
    check_index(ctx, &sum)?;
    if sum.0 == ctx.alpha() {
        return Err(Error::NotDefective);
    }
    check_params(ctx, &p.rho, &p.sigma)?;
    Ok(zero_fiber_quad(
        ctx,
        &p.rho,
        &p.sigma,
        &ctx.support_down(&p.a),
        &ctx.support_up(&p.aprime),
    ))
}

/// `n` pairwise distinct integers from `[-bound, bound]`, by rejection.
pub fn random_distinct<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rat> {
    assert!(
        2 * bound + 1 >= n as i64,
        "range too small for {n} distinct values"
    );
    let mut out: Vec<Rat> = Vec::with_capacity(n);
    while out.len() < n {
        let x = rat(rng.gen_range(-bound..=bound));
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn random_integers<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rat> {
    (0..n).map(|_| rat(rng.gen_range(-bound..=bound))).collect()
}

pub fn random_component_params<R: Rng>(
    ctx: &ParabolicContext,
    a: &ComponentIndex,
    rng: &mut R,
) -> ComponentParams {
    ComponentParams {
        a: a.clone(),
        rho: random_distinct(rng, ctx.n(), DEFAULT_SAMPLE_BOUND),
        sigma: random_integers(rng, ctx.n(), DEFAULT_SAMPLE_BOUND),
    }
}

pub fn random_defective_params<R: Rng>(
    ctx: &ParabolicContext,
    a: &ComponentIndex,
    aprime: &ComponentIndex,
    rng: &mut R,
) -> DefectiveParams {
    DefectiveParams {
        a: a.clone(),
        aprime: aprime.clone(),
        rho: random_distinct(rng, ctx.n(), DEFAULT_SAMPLE_BOUND),
        sigma: random_integers(rng, ctx.n(), DEFAULT_SAMPLE_BOUND),
    }
}

/// Indices covered by neither `supp(i)` nor `supp(j)`.
pub fn unused_indices(q: &Quad) -> usize {
    (0..q.i().len())
        .filter(|&p| q.i()[p].is_zero() && q.j()[p].is_zero())
        .count()
}

fn component_checks(ctx: &ParabolicContext) -> Vec<CheckSpec> {
    let d = ctx.dim_p();
    let n = ctx.n();
    vec![
        CheckSpec {
            name: "zero_fiber",
            claim: "the representative satisfies mu(r,s,i,j) = 0",
            success: Witness::Holds,
        },
        CheckSpec {
            name: "supports",
            claim: "supp(i) = a_down and supp(j) = (alpha - a)_up",
            success: Witness::Holds,
        },
        CheckSpec {
            name: "free_action",
            claim: "the stabilizer in p of the representative is trivial",
            success: Witness::Dimension { value: 0 },
        },
        CheckSpec {
            name: "differential_rank",
            claim: "d mu is surjective onto p*, rank d_p",
            success: Witness::Dimension { value: d },
        },
        CheckSpec {
            name: "local_dimension",
            claim: "the zero fiber has tangent dimension d_p + 2n at the representative",
            success: Witness::Dimension { value: d + 2 * n },
        },
        CheckSpec {
            name: "orbit_invariance",
            claim: "the P-action preserves the zero fiber",
            success: Witness::Holds,
        },
    ]
}

/// Checks one random representative of `M'_a`; outcomes follow `component_checks`.
pub fn component_trial(
    ctx: &ParabolicContext,
    a: &ComponentIndex,
    seed: u64,
    trial: usize,
) -> Vec<Outcome> {
    let tag = format!("components/{:?}/{:?}", ctx.alpha(), a.0);
    let mut rng = trial_rng(seed, &tag, trial);
    let params = random_component_params(ctx, a, &mut rng);
    let q = component_representative(ctx, &params).expect("sampled parameters are valid");
    let d = ctx.dim_p();
    let n = ctx.n();

    let supports = expect_eq(
        trial,
        format!(
            "{:?}/{:?}",
            ctx.support_down(a),
            ctx.support_up(&a.complement(ctx.alpha()))
        ),
        format!("{:?}/{:?}", q.i().support(), q.j().support()),
    );
    let rank = moment_differential_rank(ctx, &q);
    let b = random_group(ctx, &mut rng, 3);
    vec![
        expect_zero(trial, &moment_map(ctx, &q)),
        supports,
        expect_eq(trial, 0, isotropy_dimension(ctx, &q)),
        expect_eq(trial, d, rank),
        expect_eq(trial, d + 2 * n, 2 * d + 2 * n - rank),
        expect_zero(trial, &moment_map(ctx, &group_act(ctx, &b, &q))),
    ]
}

/// Runs `trials` random representatives of `M'_a` through every check.
pub fn verify_component(
    ctx: &ParabolicContext,
    a: &ComponentIndex,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<VerificationReport> {
    check_index(ctx, a)?;
    let outcomes = exec.map(trials, |t| component_trial(ctx, a, seed, t));
    let mut report = VerificationReport::new("components", ctx, Some(seed), trials);
    report.component = Some(a.0.clone());
    report.checks = tally(component_checks(ctx), &outcomes);
    Ok(report)
}

/// Checks one random defective representative: zero fiber, at least one
/// unused index, and isotropy at least the number of unused indices.
pub fn defective_trial(
    ctx: &ParabolicContext,
    a: &ComponentIndex,
    aprime: &ComponentIndex,
    seed: u64,
    trial: usize,
) -> Vec<Outcome> {
    let tag = format!("defective/{:?}/{:?}/{:?}", ctx.alpha(), a.0, aprime.0);
    let mut rng = trial_rng(seed, &tag, trial);
    let params = random_defective_params(ctx, a, aprime, &mut rng);
    let q = defective_representative(ctx, &params).expect("sampled parameters are valid");
    let unused = unused_indices(&q);
    let iso = isotropy_dimension(ctx, &q);
    let bound = if iso >= unused.max(1) {
        Ok(())
    } else {
        Err(Witness::mismatch(
            trial,
            format!(">= {}", unused.max(1)),
            iso,
        ))
    };
    vec![expect_zero(trial, &moment_map(ctx, &q)), bound]
}

pub fn verify_defective(
    ctx: &ParabolicContext,
    a: &ComponentIndex,
    aprime: &ComponentIndex,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<VerificationReport> {
    check_index(ctx, &a.add(aprime))?;
    if a.add(aprime).0 == ctx.alpha() {
        return Err(Error::NotDefective);
    }
    let outcomes = exec.map(trials, |t| defective_trial(ctx, a, aprime, seed, t));
    let mut report = VerificationReport::new("defective", ctx, Some(seed), trials);
    report.component = Some(a.0.clone());
    report.aprime = Some(aprime.0.clone());
    report.checks = tally(
        vec![
            CheckSpec {
                name: "zero_fiber",
                claim: "the defective representative satisfies mu = 0",
                success: Witness::Holds,
            },
            CheckSpec {
                name: "positive_isotropy",
                claim: "each index outside supp(i) and supp(j) adds a stabilizer direction",
                success: Witness::Holds,
            },
        ],
        &outcomes,
    );
    Ok(report)
}
