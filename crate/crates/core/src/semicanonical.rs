//! Jordan P-semicanonical forms.
//!
//! A matrix `M` in `p` is semicanonical for a set partition of `{1..n}` when
//! entries coupling different cells vanish, every diagonal block is in Jordan
//! form, and indices with different diagonal entries lie in different cells.
//! [`semicanonicalize`] reaches such a form inside the `P`-orbit in two
//! phases: a Levi conjugation putting each diagonal block in Jordan form, then
//! a sweep of elementary unipotent conjugations clearing every entry that
//! couples two distinct eigenvalues.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{char_poly_rational_roots, kernel_basis, rat, ColVec, Mat, Rat};
use crate::moment::GroupElem;
use crate::parabolic::{ParabolicContext, Region};

/// Set partition of `{0..n}`; cells sorted and ordered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PBlockPartition(pub Vec<Vec<usize>>);

impl PBlockPartition {
    /// Groups indices by their diagonal entry in `m`.
    pub fn by_diagonal(m: &Mat) -> Self {
        let mut cells: Vec<(Rat, Vec<usize>)> = Vec::new();
        for p in 0..m.rows() {
            let d = &m[(p, p)];
            match cells.iter_mut().find(|(v, _)| v == d) {
                Some((_, cell)) => cell.push(p),
                None => cells.push((d.clone(), vec![p])),
            }
        }
        PBlockPartition(cells.into_iter().map(|(_, c)| c).collect())
    }

    /// Cells with 1-based indices, as used in external formats.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.0
            .iter()
            .map(|cell| cell.iter().map(|p| p + 1).collect())
            .collect()
    }
}

/// One elementary conjugation `b_{row,col}(x)` applied during the sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepStep {
    pub row: usize,
    pub col: usize,
    pub x: Rat,
}

#[derive(Clone, Debug)]
pub struct SemicanonicalResult {
    /// The semicanonical form, `m = b r b^-1`.
    pub m: Mat,
    pub b: GroupElem,
    pub partition: PBlockPartition,
    pub steps: Vec<SweepStep>,
}

/// Per-block sorted eigenvalue multisets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecValue(pub Vec<Vec<Rat>>);

/// Why a matrix fails to be semicanonical. Cells are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotInP {
        row: usize,
        col: usize,
    },
    /// Condition (1): a nonzero entry couples two different eigenvalues.
    Separation {
        row: usize,
        col: usize,
    },
    /// Condition (2): a diagonal block is not in Jordan form.
    NotJordan {
        block: usize,
        row: usize,
        col: usize,
    },
}

impl Violation {
    /// Which defining condition failed; 0 means `m` is not in `p`.
    pub fn condition(&self) -> u8 {
        match self {
            Violation::NotInP { .. } => 0,
            Violation::Separation { .. } => 1,
            Violation::NotJordan { .. } => 2,
        }
    }

    pub fn cell(&self) -> (usize, usize) {
        match *self {
            Violation::NotInP { row, col }
            | Violation::Separation { row, col }
            | Violation::NotJordan { row, col, .. } => (row, col),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, c) = self.cell();
        match self {
            Violation::NotInP { .. } => write!(f, "entry ({},{}) lies outside p", r + 1, c + 1),
            Violation::Separation { .. } => write!(
                f,
                "condition (1): entry ({},{}) couples distinct eigenvalues",
                r + 1,
                c + 1
            ),
            Violation::NotJordan { block, .. } => write!(
                f,
                "condition (2): diagonal block {} is not in Jordan form at ({},{})",
                block + 1,
                r + 1,
                c + 1
            ),
        }
    }
}

/// Columns `Q` with `Q^-1 a Q` in Jordan form: eigenvalues ascending, chain
/// lengths descending within each eigenvalue, ones on the superdiagonal.
pub fn jordan_basis(a: &Mat) -> Result<Mat> {
    let m = a.rows();
    let mut columns: Vec<ColVec> = Vec::with_capacity(m);
    for (lambda, mult) in char_poly_rational_roots(a)? {
        let nil = &(a - &Mat::scalar(m, &lambda));
        // kernels[k] spans ker(nil^k)
        let mut kernels: Vec<Vec<ColVec>> = vec![Vec::new()];
        let mut power = Mat::identity(m);
        while kernels.last().unwrap().len() < mult {
            power = &power * nil;
            kernels.push(kernel_basis(&power));
        }
        let depth = kernels.len() - 1;

        let mut tops: Vec<(ColVec, usize)> = Vec::new();
        let mut carried: Vec<ColVec> = Vec::new();
        for level in (1..=depth).rev() {
            let mut span: Vec<ColVec> = kernels[level - 1].clone();
            span.extend(carried.iter().cloned());
            let mut span_rank = columns_rank(&span, m);
            let mut fresh = Vec::new();
            for v in &kernels[level] {
                span.push(v.clone());
                let extended = columns_rank(&span, m);
                if extended > span_rank {
                    span_rank = extended;
                    fresh.push(v.clone());
                    tops.push((v.clone(), level));
                } else {
                    span.pop();
                }
            }
            carried.extend(fresh);
            carried = carried.iter().map(|v| nil.mul_col(v)).collect();
        }

        for (top, len) in tops {
            let mut chain = vec![top];
            for _ in 1..len {
                let next = nil.mul_col(chain.last().unwrap());
                chain.push(next);
            }
            columns.extend(chain.into_iter().rev());
        }
    }
    let rows = (0..m)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    Mat::from_rows(rows)
}

fn columns_rank(cols: &[ColVec], m: usize) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let rows = (0..m)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    Mat::from_rows(rows).expect("columns share a length").rank()
}

fn is_jordan_cell(ctx: &ParabolicContext, m: &Mat, p: usize, q: usize) -> bool {
    q == p + 1 && ctx.same_block(p, q) && m[(p, p)] == m[(q, q)]
}

/// Brings `r` in `p` to a Jordan P-semicanonical form inside its `P`-orbit.
pub fn semicanonicalize(ctx: &ParabolicContext, r: &Mat) -> Result<SemicanonicalResult> {
    ctx.check_region(r, Region::P)?;
    let n = ctx.n();

    // Levi step: Jordan form on every diagonal block
    let mut bases = Vec::with_capacity(ctx.num_blocks());
    let mut inverses = Vec::with_capacity(ctx.num_blocks());
    for k in 0..ctx.num_blocks() {
        let q = jordan_basis(&r.principal_block(ctx.block_range(k)))?;
        inverses.push(q.inverse().expect("Jordan basis is a basis"));
        bases.push(q);
    }
    let mut b = ctx.block_diag(&inverses);
    let mut b_inv = ctx.block_diag(&bases);
    let mut m = &(&b * r) * &b_inv;

    // Sweep rows bottom-to-top, each row left-to-right.
    let mut steps = Vec::new();
    for a in (0..n.saturating_sub(1)).rev() {
        for a2 in a + 1..n {
            if m[(a, a)] == m[(a2, a2)] || m[(a, a2)].is_zero() {
                continue;
            }
            let x = -&m[(a, a2)] / (&m[(a2, a2)] - &m[(a, a)]);
            let before = m.clone();
            conjugate_elementary(&mut m, a, a2, &x);
            assert_sweep_step(ctx, &before, &m, a, a2);
            // b <- (I + x E) b,  b^-1 <- b^-1 (I - x E)
            add_row_multiple(&mut b, a, a2, &x);
            add_col_multiple(&mut b_inv, a2, a, &-&x);
            steps.push(SweepStep { row: a, col: a2, x });
        }
    }
    debug_assert_eq!(&b * &b_inv, Mat::identity(n));

    let partition = PBlockPartition::by_diagonal(&m);
    Ok(SemicanonicalResult {
        m,
        b: GroupElem::new(ctx, b).expect("product of parabolic elements"),
        partition,
        steps,
    })
}

/// `m <- (I + x E_{a,a2}) m (I - x E_{a,a2})`.
fn conjugate_elementary(m: &mut Mat, a: usize, a2: usize, x: &Rat) {
    add_row_multiple(m, a, a2, x);
    add_col_multiple(m, a2, a, &-x);
}

/// `row[dst] += x * row[src]`.
fn add_row_multiple(m: &mut Mat, dst: usize, src: usize, x: &Rat) {
    for c in 0..m.cols() {
        if !m[(src, c)].is_zero() {
            let delta = x * &m[(src, c)];
            m[(dst, c)] += delta;
        }
    }
}

/// `col[dst] += x * col[src]`.
fn add_col_multiple(m: &mut Mat, dst: usize, src: usize, x: &Rat) {
    for r in 0..m.rows() {
        if !m[(r, src)].is_zero() {
            let delta = x * &m[(r, src)];
            m[(r, dst)] += delta;
        }
    }
}

/// The step at `(a, a2)` must clear its target and leave every previously
/// swept cell and every Jordan cell untouched.
fn assert_sweep_step(ctx: &ParabolicContext, before: &Mat, after: &Mat, a: usize, a2: usize) {
    assert!(
        after[(a, a2)].is_zero(),
        "sweep step ({a},{a2}) did not clear its target"
    );
    for p in 0..ctx.n() {
        for q in 0..ctx.n() {
            if before[(p, q)] == after[(p, q)] || (p, q) == (a, a2) {
                continue;
            }
            let swept = p > a || (p == a && q < a2);
            assert!(
                !swept,
                "sweep step ({a},{a2}) modified swept cell ({p},{q})"
            );
            assert!(
                !is_jordan_cell(ctx, before, p, q),
                "sweep step ({a},{a2}) modified Jordan cell ({p},{q})"
            );
        }
    }
}

/// Checks the three defining conditions against the eigenvalue partition,
/// which is the coarsest partition condition (3) allows.
pub fn is_semicanonical(
    ctx: &ParabolicContext,
    m: &Mat,
) -> std::result::Result<PBlockPartition, Violation> {
    let n = ctx.n();
    for p in 0..n {
        for q in 0..n {
            if !m[(p, q)].is_zero() && !ctx.in_region(Region::P, p, q) {
                return Err(Violation::NotInP { row: p, col: q });
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            if p != q && !m[(p, q)].is_zero() && m[(p, p)] != m[(q, q)] {
                return Err(Violation::Separation { row: p, col: q });
            }
        }
    }
    for k in 0..ctx.num_blocks() {
        for p in ctx.block_range(k) {
            for q in ctx.block_range(k) {
                let x = &m[(p, q)];
                let ok = if p == q {
                    true
                } else if q == p + 1 {
                    x.is_zero() || (x.is_one() && m[(p, p)] == m[(q, q)])
                } else {
                    x.is_zero()
                };
                if !ok {
                    return Err(Violation::NotJordan {
                        block: k,
                        row: p,
                        col: q,
                    });
                }
            }
        }
    }
    Ok(PBlockPartition::by_diagonal(m))
}

/// Eigenvalues of each diagonal block, sorted ascending.
pub fn spec(ctx: &ParabolicContext, r: &Mat) -> Result<SpecValue> {
    ctx.check_region(r, Region::P)?;
    let blocks = (0..ctx.num_blocks())
        .map(|k| {
            let roots = char_poly_rational_roots(&r.principal_block(ctx.block_range(k)))?;
            Ok(roots
                .into_iter()
                .flat_map(|(root, mult)| std::iter::repeat_n(root, mult))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(SpecValue(blocks))
}

/// A random matrix already in semicanonical form.
///
/// Eigenvalues come from `[-eigen_bound, eigen_bound]` so repeats are common;
/// off-block entries between equal eigenvalues are free integers in
/// `[-entry_bound, entry_bound]`.
pub fn random_semicanonical<R: Rng>(
    ctx: &ParabolicContext,
    rng: &mut R,
    eigen_bound: i64,
    entry_bound: i64,
) -> Mat {
    let n = ctx.n();
    let mut m = Mat::zeros(n, n);
    for k in 0..ctx.num_blocks() {
        let range = ctx.block_range(k);
        let mut start = range.start;
        while start < range.end {
            let len = rng.gen_range(1..=range.end - start);
            let lambda = rat(rng.gen_range(-eigen_bound..=eigen_bound));
            for p in start..start + len {
                m[(p, p)] = lambda.clone();
                if p + 1 < start + len {
                    m[(p, p + 1)] = Rat::one();
                }
            }
            start += len;
        }
    }
    for p in 0..n {
        for q in p + 1..n {
            if !ctx.same_block(p, q) && m[(p, p)] == m[(q, q)] {
                m[(p, q)] = rat(rng.gen_range(-entry_bound..=entry_bound));
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::moment::random_group;
    use crate::parabolic::compositions;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(alpha: &[usize]) -> ParabolicContext {
        ParabolicContext::new(alpha.iter().sum(), alpha, false).unwrap()
    }

    #[test]
    fn distinct_eigenvalues_two_by_two() {
        let c = ctx(&[1, 1]);
        let r = Mat::from_ints(&[[1, 5], [0, 2]]);
        let res = semicanonicalize(&c, &r).unwrap();
        assert_eq!(res.m, Mat::diag(&[rat(1), rat(2)]));
        assert_eq!(res.b.matrix(), &Mat::from_ints(&[[1, -5], [0, 1]]));
        assert_eq!(
            res.steps,
            vec![SweepStep {
                row: 0,
                col: 1,
                x: rat(-5)
            }]
        );
        assert_eq!(res.partition, PBlockPartition(vec![vec![0], vec![1]]));
    }

    #[test]
    fn already_semicanonical_inputs_are_fixed() {
        let c = ctx(&[1, 1]);
        let r = Mat::diag(&[rat(3), rat(3)]);
        let res = semicanonicalize(&c, &r).unwrap();
        assert_eq!(res.m, r);
        assert_eq!(res.b.matrix(), &Mat::identity(2));
        assert_eq!(res.partition, PBlockPartition(vec![vec![0, 1]]));

        let c = ctx(&[2]);
        let r = Mat::from_ints(&[[0, 1], [0, 0]]);
        let res = semicanonicalize(&c, &r).unwrap();
        assert_eq!(res.m, r);
        assert_eq!(res.partition, PBlockPartition(vec![vec![0, 1]]));
    }

    #[test]
    fn jordan_convention_inside_a_block() {
        // eigenvalue 2 with chains of length 2 and 1, eigenvalue -1 simple
        let j = Mat::from_ints(&[[-1, 0, 0, 0], [0, 2, 1, 0], [0, 0, 2, 0], [0, 0, 0, 2]]);
        let c = ctx(&[4]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_group(&c, &mut rng, 3);
        let res = semicanonicalize(&c, &g.conjugate(&j)).unwrap();
        assert_eq!(res.m, j);
    }

    #[test]
    fn irrational_spectrum_is_rejected() {
        let c = ctx(&[2]);
        let r = Mat::from_ints(&[[0, 1], [-1, 0]]);
        assert_eq!(
            semicanonicalize(&c, &r).unwrap_err(),
            Error::IrrationalEigenvalue
        );
        assert_eq!(spec(&c, &r).unwrap_err(), Error::IrrationalEigenvalue);
    }

    #[test]
    fn region_violation_is_rejected() {
        let c = ctx(&[1, 1]);
        let r = Mat::from_ints(&[[1, 0], [1, 1]]);
        assert!(matches!(
            semicanonicalize(&c, &r),
            Err(Error::NotInRegion {
                region: Region::P,
                row: 2,
                col: 1
            })
        ));
        assert_eq!(
            is_semicanonical(&c, &r),
            Err(Violation::NotInP { row: 1, col: 0 })
        );
    }

    #[test]
    fn borel_example_matrices() {
        let m = Mat::from_ints(&[[0, 1, 1, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]);
        let m2 = Mat::from_ints(&[[0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 0]]);
        // one diagonal block: neither matrix is a Jordan matrix
        let whole = ctx(&[4]);
        assert_eq!(
            is_semicanonical(&whole, &m),
            Err(Violation::NotJordan {
                block: 0,
                row: 0,
                col: 2
            })
        );
        assert_eq!(is_semicanonical(&whole, &m2).unwrap_err().condition(), 2);
        // Borel: 1x1 diagonal blocks, one P-block, both accepted
        let borel = ctx(&[1, 1, 1, 1]);
        let single = PBlockPartition(vec![vec![0, 1, 2, 3]]);
        assert_eq!(is_semicanonical(&borel, &m), Ok(single.clone()));
        assert_eq!(is_semicanonical(&borel, &m2), Ok(single));
        // and they lie in one B-orbit
        let g = GroupElem::new(
            &borel,
            Mat::from_ints(&[[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        )
        .unwrap();
        assert_eq!(g.conjugate(&m), m2);

        let c = ctx(&[1, 1]);
        assert_eq!(
            is_semicanonical(&c, &Mat::diag(&[rat(1), rat(2)])),
            Ok(PBlockPartition(vec![vec![0], vec![1]]))
        );
        assert_eq!(
            is_semicanonical(&c, &Mat::from_ints(&[[1, 1], [0, 2]])),
            Err(Violation::Separation { row: 0, col: 1 })
        );
    }

    #[test]
    fn spec_examples() {
        let c = ctx(&[2, 1]);
        assert_eq!(
            spec(&c, &Mat::diag(&[rat(2), rat(1), rat(5)])).unwrap(),
            SpecValue(vec![vec![rat(1), rat(2)], vec![rat(5)]])
        );
        let c = ctx(&[1, 1]);
        assert_eq!(
            spec(&c, &Mat::from_ints(&[[1, 5], [0, 2]])).unwrap(),
            SpecValue(vec![vec![rat(1)], vec![rat(2)]])
        );
    }

    #[test]
    fn distinct_diagonal_gives_diagonal_form() {
        let c = ctx(&[1, 1, 1]);
        let r = Mat::from_ints(&[[1, 4, -2], [0, 3, 7], [0, 0, -5]]);
        let res = semicanonicalize(&c, &r).unwrap();
        assert_eq!(res.m, Mat::diag(&[rat(1), rat(3), rat(-5)]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn roundtrip_soundness(alpha in prop::sample::select(compositions(5)), seed in any::<u64>()) {
            let c = ctx(&alpha);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let known = random_semicanonical(&c, &mut rng, 2, 4);
            prop_assert!(is_semicanonical(&c, &known).is_ok());
            let g = random_group(&c, &mut rng, 4);
            let r = g.conjugate(&known);
            let res = semicanonicalize(&c, &r).unwrap();
            prop_assert_eq!(&res.m, &res.b.conjugate(&r));
            prop_assert!(c.check_region(res.b.matrix(), Region::P).is_ok());
            prop_assert_eq!(is_semicanonical(&c, &res.m), Ok(res.partition.clone()));
            prop_assert_eq!(spec(&c, &res.m).unwrap(), spec(&c, &r).unwrap());
            prop_assert_eq!(spec(&c, &known).unwrap(), spec(&c, &r).unwrap());
        }

        #[test]
        fn spec_is_orbit_invariant(alpha in prop::sample::select(compositions(4)), seed in any::<u64>()) {
            let c = ctx(&alpha);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = random_semicanonical(&c, &mut rng, 3, 5);
            let g = random_group(&c, &mut rng, 6);
            prop_assert_eq!(spec(&c, &g.conjugate(&r)).unwrap(), spec(&c, &r).unwrap());
        }
    }
}
