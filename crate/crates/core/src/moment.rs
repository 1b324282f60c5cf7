//! The moment map `(r, s, i, j) -> [r, s] + ij  (mod u)` and the parabolic
//! group and Lie algebra actions on `T*(p x Q^n)`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{outer, rat, ColVec, Mat, Rat, RowVec};
use crate::parabolic::{ParabolicContext, Region};

/// Default magnitude bound for sampled integer entries.
pub const DEFAULT_SAMPLE_BOUND: i64 = 10;

/// A point `(r, s, i, j)` with `r` in `p` and `s` the `PSTAR_REGION`
/// representative of its class in `g/u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quad {
    r: Mat,
    s: Mat,
    i: ColVec,
    j: RowVec,
}

impl Quad {
    pub fn new(ctx: &ParabolicContext, r: Mat, s: Mat, i: ColVec, j: RowVec) -> Result<Self> {
        ctx.check_region(&r, Region::P)?;
        ctx.check_region(&s, Region::PStar)?;
        if i.len() != ctx.n() || j.len() != ctx.n() {
            return Err(Error::DimensionMismatch(format!(
                "vectors must have length {}",
                ctx.n()
            )));
        }
        Ok(Quad { r, s, i, j })
    }

    pub fn zero(ctx: &ParabolicContext) -> Self {
        let n = ctx.n();
        Quad {
            r: Mat::zeros(n, n),
            s: Mat::zeros(n, n),
            i: ColVec::zeros(n),
            j: RowVec::zeros(n),
        }
    }

    pub fn r(&self) -> &Mat {
        &self.r
    }

    pub fn s(&self) -> &Mat {
        &self.s
    }

    pub fn i(&self) -> &ColVec {
        &self.i
    }

    pub fn j(&self) -> &RowVec {
        &self.j
    }
}

/// An element of the parabolic group, stored with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElem {
    b: Mat,
    inv: Mat,
}

impl GroupElem {
    pub fn new(ctx: &ParabolicContext, b: Mat) -> Result<Self> {
        ctx.check_region(&b, Region::P)?;
        if !ctx.diagonal_blocks_invertible(&b) {
            return Err(Error::NotInvertible);
        }
        let inv = b.inverse().ok_or(Error::NotInvertible)?;
        Ok(GroupElem { b, inv })
    }

    pub fn identity(ctx: &ParabolicContext) -> Self {
        GroupElem {
            b: ctx.identity(),
            inv: ctx.identity(),
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.b
    }

    pub fn inverse(&self) -> &Mat {
        &self.inv
    }

    pub fn compose(&self, other: &GroupElem) -> GroupElem {
        GroupElem {
            b: &self.b * &other.b,
            inv: &other.inv * &self.inv,
        }
    }

    /// `b m b^{-1}`.
    pub fn conjugate(&self, m: &Mat) -> Mat {
        &(&self.b * m) * &self.inv
    }
}

/// Tangent vector `(X, Y, a, b)` at a point of `T*(p x Q^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentQuad {
    pub x: Mat,
    pub y: Mat,
    pub a: ColVec,
    pub b: RowVec,
}

impl TangentQuad {
    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.a.is_zero() && self.b.is_zero()
    }
}

/// `mu(q) = [r, s] + ij`, projected to the `PSTAR_REGION` representative.
pub fn moment_map(ctx: &ParabolicContext, q: &Quad) -> Mat {
    let full = &Mat::commutator(&q.r, &q.s) + &outer(&q.i, &q.j);
    ctx.project(&full, Region::PStar)
}

/// `b.(r, s, i, j) = (b r b^-1, b s b^-1 mod u, b i, j b^-1)`.
pub fn group_act(ctx: &ParabolicContext, b: &GroupElem, q: &Quad) -> Quad {
    Quad {
        r: b.conjugate(&q.r),
        s: ctx.project(&b.conjugate(&q.s), Region::PStar),
        i: b.b.mul_col(&q.i),
        j: q.j.mul_mat(&b.inv),
    }
}

/// Infinitesimal action of `v` in `p`: the derivative of `group_act` along
/// `exp(tv)`, i.e. `([v, r], [v, s] mod u, v i, -j v)`.
pub fn algebra_act(ctx: &ParabolicContext, v: &Mat, q: &Quad) -> TangentQuad {
    TangentQuad {
        x: Mat::commutator(v, &q.r),
        y: ctx.project(&Mat::commutator(v, &q.s), Region::PStar),
        a: v.mul_col(&q.i),
        b: -&q.j.mul_mat(v),
    }
}

/// `[E_pq, m]` for the matrix unit `E_pq`.
fn unit_commutator(p: usize, q: usize, m: &Mat) -> Mat {
    let n = m.rows();
    let mut out = Mat::zeros(n, n);
    for c in 0..n {
        out[(p, c)] = m[(q, c)].clone();
    }
    for r in 0..n {
        let x = &m[(r, p)];
        if !x.is_zero() {
            out[(r, q)] -= x;
        }
    }
    out
}

/// Places the listed cells of each column matrix into rows of a stacked system.
struct SystemBuilder {
    columns: Vec<Vec<Rat>>,
}

impl SystemBuilder {
    fn new() -> Self {
        SystemBuilder {
            columns: Vec::new(),
        }
    }

    fn push(&mut self, column: Vec<Rat>) {
        self.columns.push(column);
    }

    fn into_matrix(self) -> Mat {
        let rows = self.columns.first().map_or(0, Vec::len);
        let mut m = Mat::zeros(rows, self.columns.len());
        for (c, col) in self.columns.into_iter().enumerate() {
            for (r, x) in col.into_iter().enumerate() {
                m[(r, c)] = x;
            }
        }
        m
    }
}

fn cells_of(m: &Mat, cells: &[(usize, usize)]) -> Vec<Rat> {
    cells.iter().map(|&(r, c)| m[(r, c)].clone()).collect()
}

/// The differential of `mu` at `q` as an exact matrix from
/// `p x PSTAR x Q^n x (Q^n)*` (dimension `2 d_p + 2n`) to `PSTAR` (`d_p`).
///
/// Column order: the `X` coordinates over `P_REGION` cells, then `Y` over
/// `PSTAR_REGION` cells, then `a`, then `b`. Direction `(X, Y, a, b)` maps to
/// `[X, s] + [r, Y] + a j + i b  (mod u)`.
pub fn moment_differential(ctx: &ParabolicContext, q: &Quad) -> Mat {
    let n = ctx.n();
    let p_cells = ctx.region_cells(Region::P);
    let star_cells = ctx.region_cells(Region::PStar);
    let mut sys = SystemBuilder::new();
    for &(p, c) in &p_cells {
        sys.push(cells_of(&unit_commutator(p, c, &q.s), &star_cells));
    }
    for &(p, c) in &star_cells {
        sys.push(cells_of(&(-&unit_commutator(p, c, &q.r)), &star_cells));
    }
    for k in 0..n {
        let mut unit = ColVec::zeros(n);
        unit.0[k] = rat(1);
        sys.push(cells_of(&outer(&unit, &q.j), &star_cells));
    }
    for k in 0..n {
        let mut unit = RowVec::zeros(n);
        unit.0[k] = rat(1);
        sys.push(cells_of(&outer(&q.i, &unit), &star_cells));
    }
    sys.into_matrix()
}

/// Rank of `d mu` at `q`; equal to `d_p` exactly when `d mu` is surjective.
pub fn moment_differential_rank(ctx: &ParabolicContext, q: &Quad) -> usize {
    moment_differential(ctx, q).rank()
}

/// Dimension of the stabilizer `{v in p : v . q = 0}`.
pub fn isotropy_dimension(ctx: &ParabolicContext, q: &Quad) -> usize {
    let n = ctx.n();
    let p_cells = ctx.region_cells(Region::P);
    let star_cells = ctx.region_cells(Region::PStar);
    let mut sys = SystemBuilder::new();
    for &(p, c) in &p_cells {
        let mut col = cells_of(&unit_commutator(p, c, &q.r), &p_cells);
        col.extend(cells_of(&unit_commutator(p, c, &q.s), &star_cells));
        // E_pc i = i_c e_p and j E_pc = j_p e_c
        col.extend((0..n).map(|k| if k == p { q.i[c].clone() } else { Rat::zero() }));
        col.extend((0..n).map(|k| if k == c { q.j[p].clone() } else { Rat::zero() }));
        sys.push(col);
    }
    p_cells.len() - sys.into_matrix().rank()
}

/// Dimension of `{v in p : [v, r] = 0 and [v, s] = 0 mod u}`.
pub fn commutant_dimension(ctx: &ParabolicContext, r: &Mat, s: &Mat) -> usize {
    let p_cells = ctx.region_cells(Region::P);
    let star_cells = ctx.region_cells(Region::PStar);
    let mut sys = SystemBuilder::new();
    for &(p, c) in &p_cells {
        let mut col = cells_of(&unit_commutator(p, c, r), &p_cells);
        col.extend(cells_of(&unit_commutator(p, c, s), &star_cells));
        sys.push(col);
    }
    p_cells.len() - sys.into_matrix().rank()
}

fn random_entry<R: Rng>(rng: &mut R, bound: i64) -> Rat {
    rat(rng.gen_range(-bound..=bound))
}

/// Random element of `p` with integer entries in `[-bound, bound]`.
pub fn random_p<R: Rng>(ctx: &ParabolicContext, rng: &mut R, bound: i64) -> Mat {
    let n = ctx.n();
    let mut m = Mat::zeros(n, n);
    for (r, c) in ctx.region_cells(Region::P) {
        m[(r, c)] = random_entry(rng, bound);
    }
    m
}

/// Random parabolic group element; each diagonal block is resampled until
/// it is invertible.
pub fn random_group<R: Rng>(ctx: &ParabolicContext, rng: &mut R, bound: i64) -> GroupElem {
    let mut b = random_p(ctx, rng, bound);
    for k in 0..ctx.num_blocks() {
        let range = ctx.block_range(k);
        loop {
            let block = b.principal_block(range.clone());
            if block.rank() == block.rows() {
                break;
            }
            for r in range.clone() {
                for c in range.clone() {
                    b[(r, c)] = random_entry(rng, bound);
                }
            }
        }
    }
    GroupElem::new(ctx, b).expect("diagonal blocks were resampled to invertibility")
}

pub fn sample_group(ctx: &ParabolicContext, seed: u64, bound: i64) -> GroupElem {
    random_group(ctx, &mut ChaCha8Rng::seed_from_u64(seed), bound)
}

pub fn sample_p(ctx: &ParabolicContext, seed: u64, bound: i64) -> Mat {
    random_p(ctx, &mut ChaCha8Rng::seed_from_u64(seed), bound)
}

/// Random quadruple (not necessarily in the zero fiber).
pub fn random_quad<R: Rng>(ctx: &ParabolicContext, rng: &mut R, bound: i64) -> Quad {
    let n = ctx.n();
    let r = random_p(ctx, rng, bound);
    let mut s = Mat::zeros(n, n);
    for (a, b) in ctx.region_cells(Region::PStar) {
        s[(a, b)] = random_entry(rng, bound);
    }
    let i = ColVec((0..n).map(|_| random_entry(rng, bound)).collect());
    let j = RowVec((0..n).map(|_| random_entry(rng, bound)).collect());
    Quad { r, s, i, j }
}
