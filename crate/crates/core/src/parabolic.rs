//! Block combinatorics of a standard parabolic subalgebra of `gl_n`.
//!
//! All indices are 0-based internally; external formats shift them by one.

use std::fmt;
use std::ops::Range;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Rat};

/// Largest number of blocks for which the parabolic has finitely many orbits
/// on its nilradical; past this the results are conjectural.
pub const MAX_PROVEN_BLOCKS: usize = 5;

/// Coordinate regions of an `n x n` matrix relative to the block structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Block upper triangular, diagonal blocks included: the subalgebra `p`.
    #[serde(rename = "P_REGION")]
    P,
    /// Strictly block upper triangular: the nilradical `u`.
    #[serde(rename = "U_REGION")]
    U,
    /// Complement of `U`: canonical representatives of `g/u`.
    #[serde(rename = "PSTAR_REGION")]
    PStar,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::P => "P_REGION",
            Region::U => "U_REGION",
            Region::PStar => "PSTAR_REGION",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicContext {
    n: usize,
    alpha: Vec<usize>,
    boundaries: Vec<usize>,
    block_of: Vec<usize>,
    allow_conjecture: bool,
}

impl ParabolicContext {
    pub fn new(n: usize, alpha: &[usize], allow_conjecture: bool) -> Result<Self> {
        if alpha.contains(&0) || alpha.iter().sum::<usize>() != n {
            return Err(Error::BadComposition {
                n,
                alpha: alpha.to_vec(),
            });
        }
        if alpha.len() > MAX_PROVEN_BLOCKS && !allow_conjecture {
            return Err(Error::TooManyBlocks { len: alpha.len() });
        }
        let mut boundaries = vec![0];
        let mut block_of = Vec::with_capacity(n);
        for (k, &a) in alpha.iter().enumerate() {
            boundaries.push(boundaries[k] + a);
            block_of.extend(std::iter::repeat_n(k, a));
        }
        Ok(ParabolicContext {
            n,
            alpha: alpha.to_vec(),
            boundaries,
            block_of,
            allow_conjecture,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// Number of diagonal blocks.
    pub fn num_blocks(&self) -> usize {
        self.alpha.len()
    }

    /// Prefix sums `(0, a_1, a_1 + a_2, ..., n)`.
    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn block_range(&self, k: usize) -> Range<usize> {
        self.boundaries[k]..self.boundaries[k + 1]
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.block_of[index]
    }

    pub fn allow_conjecture(&self) -> bool {
        self.allow_conjecture
    }

    /// True when the block count exceeds the proven range.
    pub fn is_conjecture_regime(&self) -> bool {
        self.alpha.len() > MAX_PROVEN_BLOCKS
    }

    pub fn same_block(&self, p: usize, q: usize) -> bool {
        self.block_of[p] == self.block_of[q]
    }

    pub fn in_region(&self, region: Region, row: usize, col: usize) -> bool {
        let (br, bc) = (self.block_of[row], self.block_of[col]);
        match region {
            Region::P => br <= bc,
            Region::U => br < bc,
            Region::PStar => br >= bc,
        }
    }

    /// Cells of a region in row-major order.
    pub fn region_cells(&self, region: Region) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|r| (0..self.n).map(move |c| (r, c)))
            .filter(|&(r, c)| self.in_region(region, r, c))
            .collect()
    }

    /// `dim p = C(n+1, 2) + sum_k C(alpha_k, 2)`.
    pub fn dim_p(&self) -> usize {
        let choose2 = |m: usize| m * m.saturating_sub(1) / 2;
        choose2(self.n + 1) + self.alpha.iter().map(|&a| choose2(a)).sum::<usize>()
    }

    /// Zero every entry outside `region`.
    pub fn project(&self, m: &Mat, region: Region) -> Mat {
        let mut out = m.clone();
        for r in 0..self.n {
            for c in 0..self.n {
                if !self.in_region(region, r, c) {
                    out[(r, c)] = Rat::zero();
                }
            }
        }
        out
    }

    /// Rejects matrices of the wrong shape or with support outside `region`.
    pub fn check_region(&self, m: &Mat, region: Region) -> Result<()> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n} matrix, got {}x{}",
                m.rows(),
                m.cols(),
                n = self.n
            )));
        }
        for r in 0..self.n {
            for c in 0..self.n {
                if !m[(r, c)].is_zero() && !self.in_region(region, r, c) {
                    return Err(Error::NotInRegion {
                        region,
                        row: r + 1,
                        col: c + 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// First `a_k` indices of each block.
    pub fn support_down(&self, a: &ComponentIndex) -> Vec<usize> {
        self.check_index(a);
        (0..self.num_blocks())
            .flat_map(|k| {
                let start = self.boundaries[k];
                start..start + a.0[k]
            })
            .collect()
    }

    /// Last `a_k` indices of each block.
    pub fn support_up(&self, a: &ComponentIndex) -> Vec<usize> {
        self.check_index(a);
        (0..self.num_blocks())
            .flat_map(|k| {
                let end = self.boundaries[k + 1];
                end - a.0[k]..end
            })
            .collect()
    }

    fn check_index(&self, a: &ComponentIndex) {
        assert!(
            a.fits(&self.alpha),
            "component index {:?} is not bounded by {:?}",
            a.0,
            self.alpha
        );
    }

    /// `tr(r_k^iota)` for the `k`-th diagonal block (0-based `k`, `1 <= iota <= alpha_k`).
    pub fn invariant_g(&self, k: usize, iota: usize, r: &Mat) -> Result<Rat> {
        if k >= self.num_blocks() {
            return Err(Error::OutOfRange(format!(
                "block {k} of {}",
                self.num_blocks()
            )));
        }
        if iota == 0 || iota > self.alpha[k] {
            return Err(Error::OutOfRange(format!(
                "power {iota} outside 1..={}",
                self.alpha[k]
            )));
        }
        self.check_region(r, Region::P)?;
        Ok(r.principal_block(self.block_range(k))
            .pow(iota as u32)
            .trace())
    }

    /// `lambda(t) r lambda(t)^{-1}` for the one-parameter subgroup
    /// `lambda(t) = diag(t^{l-1} I, t^{l-2} I, ..., I)`: the `(k, k')` block is
    /// scaled by `t^{k'-k}`.
    pub fn lambda_conjugate(&self, t: &Rat, r: &Mat) -> Mat {
        assert!(!t.is_zero(), "lambda(t) needs t != 0");
        let mut out = r.clone();
        for p in 0..self.n {
            for q in 0..self.n {
                let shift = self.block_of[q] as i32 - self.block_of[p] as i32;
                if shift != 0 && !out[(p, q)].is_zero() {
                    out[(p, q)] *= t.pow(shift);
                }
            }
        }
        out
    }

    /// The `t -> 0` limit of `lambda(t).r`: the block-diagonal part of `r`.
    pub fn lambda_limit(&self, r: &Mat) -> Mat {
        let mut out = Mat::zeros(self.n, self.n);
        for k in 0..self.num_blocks() {
            let range = self.block_range(k);
            out.set_principal_block(range.start, &r.principal_block(range));
        }
        out
    }

    /// Block-diagonal matrix whose `k`-th block is `blocks[k]`.
    pub fn block_diag(&self, blocks: &[Mat]) -> Mat {
        assert_eq!(blocks.len(), self.num_blocks());
        let mut out = Mat::zeros(self.n, self.n);
        for (k, b) in blocks.iter().enumerate() {
            assert_eq!(b.rows(), self.alpha[k]);
            out.set_principal_block(self.boundaries[k], b);
        }
        out
    }

    /// Every diagonal block of `b` is invertible (with `b` block upper
    /// triangular this is the same as `b` lying in the parabolic group).
    pub fn diagonal_blocks_invertible(&self, b: &Mat) -> bool {
        (0..self.num_blocks()).all(|k| {
            let block = b.principal_block(self.block_range(k));
            block.rank() == block.rows()
        })
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.n)
    }

    pub fn scalar(&self, value: &Rat) -> Mat {
        Mat::scalar(self.n, value)
    }
}

/// A tuple `a` with `0 <= a_k <= alpha_k`, indexing a component of the zero fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentIndex(pub Vec<usize>);

impl ComponentIndex {
    pub fn fits(&self, alpha: &[usize]) -> bool {
        self.0.len() == alpha.len() && self.0.iter().zip(alpha).all(|(a, b)| a <= b)
    }

    pub fn zero(len: usize) -> Self {
        ComponentIndex(vec![0; len])
    }

    /// `alpha - self`, componentwise.
    pub fn complement(&self, alpha: &[usize]) -> Self {
        ComponentIndex(alpha.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        ComponentIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// All compositions of `n`, ordered lexicographically by parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use proptest::prelude::*;

    fn ctx(alpha: &[usize]) -> ParabolicContext {
        ParabolicContext::new(alpha.iter().sum(), alpha, false).unwrap()
    }

    #[test]
    fn new_context_examples() {
        assert_eq!(ctx(&[2, 1]).boundaries(), &[0, 2, 3]);
        assert_eq!(
            ParabolicContext::new(6, &[1; 6], false),
            Err(Error::TooManyBlocks { len: 6 })
        );
        assert!(ParabolicContext::new(6, &[1; 6], true)
            .unwrap()
            .is_conjecture_regime());
        assert!(matches!(
            ParabolicContext::new(3, &[2, 2], false),
            Err(Error::BadComposition { .. })
        ));
        assert!(matches!(
            ParabolicContext::new(2, &[2, 0], false),
            Err(Error::BadComposition { .. })
        ));
    }

    #[test]
    fn dim_p_examples() {
        assert_eq!(ctx(&[1, 1, 1, 1]).dim_p(), 10);
        assert_eq!(ctx(&[2, 1]).dim_p(), 7);
        assert_eq!(ctx(&[3]).dim_p(), 9);
    }

    #[test]
    fn dim_p_counts_cells() {
        for n in 1..=8 {
            for alpha in compositions(n) {
                let c = ParabolicContext::new(n, &alpha, true).unwrap();
                assert_eq!(c.dim_p(), c.region_cells(Region::P).len(), "{alpha:?}");
                assert_eq!(c.dim_p(), c.region_cells(Region::PStar).len(), "{alpha:?}");
            }
        }
    }

    #[test]
    fn project_examples() {
        let m = Mat::from_ints(&[[1, 2], [3, 4]]);
        assert!(ctx(&[2]).project(&m, Region::U).is_zero());
        assert_eq!(
            ctx(&[1, 1]).project(&m, Region::PStar),
            Mat::from_ints(&[[1, 0], [3, 4]])
        );
        let ones = Mat::from_ints(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]]);
        assert_eq!(
            ctx(&[2, 1]).project(&ones, Region::U),
            Mat::from_ints(&[[0, 0, 1], [0, 0, 1], [0, 0, 0]])
        );
    }

    #[test]
    fn support_examples() {
        let c = ctx(&[2, 3]);
        let a = ComponentIndex(vec![1, 2]);
        // 1-based {1,3,4} and {2,4,5}
        assert_eq!(c.support_down(&a), vec![0, 2, 3]);
        assert_eq!(c.support_up(&a), vec![1, 3, 4]);
        let full = ComponentIndex(vec![2, 3]);
        assert_eq!(c.support_down(&full), (0..5).collect::<Vec<_>>());
        assert_eq!(c.support_up(&full), (0..5).collect::<Vec<_>>());
        assert!(c.support_down(&ComponentIndex::zero(2)).is_empty());
        assert!(c.support_up(&ComponentIndex::zero(2)).is_empty());
    }

    #[test]
    fn invariant_examples() {
        let c = ctx(&[1, 1]);
        let r = Mat::from_ints(&[[1, 2], [0, 3]]);
        assert_eq!(c.invariant_g(0, 1, &r).unwrap(), rat(1));
        assert_eq!(c.invariant_g(1, 1, &r).unwrap(), rat(3));
        let conj = Mat::from_ints(&[[1, 4], [0, 3]]);
        assert_eq!(c.invariant_g(0, 1, &conj).unwrap(), rat(1));
        assert_eq!(c.invariant_g(1, 1, &conj).unwrap(), rat(3));
        assert!(matches!(c.invariant_g(0, 2, &r), Err(Error::OutOfRange(_))));
        assert!(matches!(c.invariant_g(2, 1, &r), Err(Error::OutOfRange(_))));

        let c = ctx(&[2]);
        let nil = Mat::from_ints(&[[0, 1], [0, 0]]);
        assert_eq!(c.invariant_g(0, 1, &nil).unwrap(), rat(0));
        assert_eq!(c.invariant_g(0, 2, &nil).unwrap(), rat(0));
    }

    #[test]
    fn lambda_examples() {
        let c = ctx(&[1, 1]);
        let r = Mat::from_ints(&[[1, 5], [0, 2]]);
        assert_eq!(c.lambda_limit(&r), Mat::diag(&[rat(1), rat(2)]));
        assert_eq!(
            c.lambda_conjugate(&ratio(1, 2), &r),
            Mat::from_rows(vec![vec![rat(1), ratio(5, 2)], vec![rat(0), rat(2)]]).unwrap()
        );
        let d = Mat::diag(&[rat(4), rat(-1)]);
        assert_eq!(c.lambda_conjugate(&rat(7), &d), d);
    }

    #[test]
    fn lambda_conjugate_matches_explicit_product() {
        let c = ctx(&[2, 1, 2]);
        let t = ratio(-3, 2);
        let ell = c.num_blocks() as i32;
        let diag: Vec<Rat> = (0..c.n())
            .map(|p| t.pow(ell - 1 - c.block_of(p) as i32))
            .collect();
        let lambda = Mat::diag(&diag);
        let mut r = Mat::zeros(5, 5);
        for (k, (p, q)) in c.region_cells(Region::P).into_iter().enumerate() {
            r[(p, q)] = rat(k as i64 - 7);
        }
        let explicit = &(&lambda * &r) * &lambda.inverse().unwrap();
        assert_eq!(c.lambda_conjugate(&t, &r), explicit);
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(2), vec![vec![1, 1], vec![2]]);
        assert_eq!(compositions(5).len(), 16);
        assert_eq!(
            compositions(3),
            vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]
        );
    }

    fn alpha_and_pair() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>)> {
        prop::collection::vec(1usize..4, 1..5).prop_flat_map(|alpha| {
            let a = alpha.iter().map(|&x| 0..=x).collect::<Vec<_>>();
            (Just(alpha), a).prop_flat_map(|(alpha, a)| {
                let rest = alpha
                    .iter()
                    .zip(&a)
                    .map(|(&x, &y)| 0..=x - y)
                    .collect::<Vec<_>>();
                (Just(alpha), Just(a), rest)
            })
        })
    }

    proptest! {
        #[test]
        fn support_partition_identities((alpha, a, b) in alpha_and_pair()) {
            let c = ctx(&alpha);
            let a = ComponentIndex(a);
            let b = ComponentIndex(b);
            let down = c.support_down(&a);
            // a + b <= alpha implies disjointness
            prop_assert!(c.support_up(&b).iter().all(|x| !down.contains(x)));
            let mut union = down.clone();
            union.extend(c.support_up(&a.complement(&alpha)));
            union.sort();
            prop_assert_eq!(union, (0..c.n()).collect::<Vec<_>>());
        }

        #[test]
        fn projection_laws(
            alpha in prop::collection::vec(1usize..3, 1..4),
            cells in prop::collection::vec(-9i64..=9, 49),
        ) {
            let c = ctx(&alpha);
            let n = c.n();
            let mut m = Mat::zeros(n, n);
            for r in 0..n {
                for col in 0..n {
                    m[(r, col)] = rat(cells[r * 7 + col]);
                }
            }
            for region in [Region::P, Region::U, Region::PStar] {
                let once = c.project(&m, region);
                prop_assert_eq!(c.project(&once, region), once.clone());
                let doubled = c.project(&(&m + &m), region);
                prop_assert_eq!(doubled, &once + &once);
            }
            let split = &c.project(&m, Region::U) + &c.project(&m, Region::PStar);
            prop_assert_eq!(split, m);
        }
    }
}
