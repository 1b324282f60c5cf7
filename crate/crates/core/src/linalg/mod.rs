//! Dense exact-rational matrices and vectors.
//!
//! Everything here is pure: no shared state, no rounding. Matrices are small
//! (a few dozen rows at most), so storage is a plain row-major `Vec`.

mod elim;
mod poly;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use elim::{kernel_basis, rank};
pub use poly::{char_poly, char_poly_rational_roots, rational_roots};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Rat::one();
        }
        m
    }

    pub fn scalar(n: usize, value: &Rat) -> Self {
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = value.clone();
        }
        m
    }

    pub fn diag(entries: &[Rat]) -> Self {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (k, e) in entries.iter().enumerate() {
            m[(k, k)] = e.clone();
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Mat {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for tests and examples. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| rat(x)).collect())
            .collect();
        Mat::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, k: &Rat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols))
            .map(|k| &self[(k, k)])
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &Mat, b: &Mat) -> Mat {
        &(a * b) - &(b * a)
    }

    /// Square submatrix on the index range `range x range`.
    pub fn principal_block(&self, range: std::ops::Range<usize>) -> Mat {
        let k = range.len();
        let mut out = Mat::zeros(k, k);
        for (i, r) in range.clone().enumerate() {
            for (j, c) in range.clone().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Writes `block` into the principal position starting at `offset`.
    pub fn set_principal_block(&mut self, offset: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(offset + i, offset + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn pow(&self, e: u32) -> Mat {
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact inverse via Gauss-Jordan elimination, or `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        elim::inverse(self)
    }

    pub fn mul_col(&self, v: &ColVec) -> ColVec {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        ColVec((0..self.rows).map(|r| dot(self.row(r), &v.0)).collect())
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

impl Index<(usize, usize)> for Mat {
    type Output = Rat;

    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &Mat {
    type Output = Mat;

    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;

    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;

    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;

    fn neg(self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Column vector in `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColVec(pub Vec<Rat>);

/// Row vector in the dual `(Q^n)*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowVec(pub Vec<Rat>);

macro_rules! vec_common {
    ($t:ident) => {
        impl $t {
            pub fn zeros(n: usize) -> Self {
                $t(vec![Rat::zero(); n])
            }

            pub fn from_ints(xs: &[i64]) -> Self {
                $t(xs.iter().map(|&x| rat(x)).collect())
            }

            /// Indicator vector of an index set (0-based).
            pub fn indicator(n: usize, support: &[usize]) -> Self {
                let mut v = Self::zeros(n);
                for &k in support {
                    v.0[k] = Rat::one();
                }
                v
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            /// 0-based indices of the nonzero entries.
            pub fn support(&self) -> Vec<usize> {
                (0..self.0.len())
                    .filter(|&k| !self.0[k].is_zero())
                    .collect()
            }

            pub fn scale(&self, k: &Rat) -> Self {
                $t(self.0.iter().map(|x| x * k).collect())
            }

            /// True when `self = k * other` for some nonzero `k`.
            pub fn is_parallel_to(&self, other: &Self) -> bool {
                if self.len() != other.len() || self.is_zero() || other.is_zero() {
                    return false;
                }
                let pivot = other.support()[0];
                if self.0[pivot].is_zero() {
                    return false;
                }
                let k = &self.0[pivot] / &other.0[pivot];
                other.scale(&k) == *self
            }
        }

        impl std::ops::Deref for $t {
            type Target = [Rat];

            fn deref(&self) -> &[Rat] {
                &self.0
            }
        }

        impl Neg for &$t {
            type Output = $t;

            fn neg(self) -> $t {
                $t(self.0.iter().map(|x| -x).collect())
            }
        }

        impl Sub for &$t {
            type Output = $t;

            fn sub(self, rhs: &$t) -> $t {
                $t(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }
    };
}

vec_common!(ColVec);
vec_common!(RowVec);

impl RowVec {
    pub fn mul_mat(&self, m: &Mat) -> RowVec {
        assert_eq!(self.len(), m.rows(), "vector-matrix dimension mismatch");
        RowVec((0..m.cols()).map(|c| dot(&self.0, &m.column(c))).collect())
    }
}

/// The outer product `i * j`, an `n x n` matrix of rank at most one.
pub fn outer(i: &ColVec, j: &RowVec) -> Mat {
    let mut m = Mat::zeros(i.len(), j.len());
    for (r, a) in i.0.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (c, b) in j.0.iter().enumerate() {
            m[(r, c)] = a * b;
        }
    }
    m
}

/// Factor a rank-one square matrix as `i * j`.
///
/// The scalar freedom `(i, j) -> (k i, j / k)` is fixed by making the first
/// nonzero entry of `j` equal to one.
pub fn rank_one_factor(m: &Mat) -> Result<(ColVec, RowVec)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let rk = rank(m);
    if rk != 1 {
        return Err(Error::NotRankOne { rank: rk });
    }
    let (r0, c0) = (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| !m[(r, c)].is_zero())
        .expect("rank one matrix has a nonzero entry");
    let pivot = m[(r0, c0)].clone();
    let j = RowVec(m.row(r0).iter().map(|x| x / &pivot).collect());
    let i = ColVec(m.column(c0));
    debug_assert_eq!(&outer(&i, &j), m);
    Ok((i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Mat::zeros(2, 2)), 0);
        assert_eq!(rank(&Mat::identity(4)), 4);
        assert_eq!(rank(&Mat::from_ints(&[[1, 2], [2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Mat::identity(3)).is_empty());

        let k = kernel_basis(&Mat::from_ints(&[[1, -1]]));
        assert_eq!(k.len(), 1);
        assert!(k[0].is_parallel_to(&ColVec::from_ints(&[1, 1])));

        let k = kernel_basis(&Mat::from_ints(&[[1, 2], [2, 4]]));
        assert_eq!(k.len(), 1);
        assert!(k[0].is_parallel_to(&ColVec::from_ints(&[2, -1])));
    }

    #[test]
    fn rank_one_examples() {
        let m = Mat::from_ints(&[[1, 2], [2, 4]]);
        let (i, j) = rank_one_factor(&m).unwrap();
        assert_eq!(i, ColVec::from_ints(&[1, 2]));
        assert_eq!(j, RowVec::from_ints(&[1, 2]));
        assert_eq!(outer(&i, &j), m);

        assert_eq!(
            rank_one_factor(&Mat::zeros(2, 2)),
            Err(Error::NotRankOne { rank: 0 })
        );
        assert_eq!(
            rank_one_factor(&Mat::identity(2)),
            Err(Error::NotRankOne { rank: 2 })
        );
    }

    #[test]
    fn rank_one_canonical_j() {
        // first nonzero of j is 1 even when the first row vanishes
        let m = Mat::from_ints(&[[0, 0, 0], [0, 3, -6], [0, 1, -2]]);
        let (i, j) = rank_one_factor(&m).unwrap();
        assert_eq!(j, RowVec::from_ints(&[0, 1, -2]));
        assert_eq!(i, ColVec::from_ints(&[0, 3, 1]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_ints(&[[2, 1, 0], [0, 1, 3], [1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(3));
        assert!(Mat::from_ints(&[[1, 2], [2, 4]]).inverse().is_none());
    }

    #[test]
    fn row_vector_product() {
        let j = RowVec::from_ints(&[1, 2]);
        let m = Mat::from_ints(&[[1, 1], [0, 3]]);
        assert_eq!(j.mul_mat(&m), RowVec::from_ints(&[1, 7]));
        assert_eq!(
            m.mul_col(&ColVec::from_ints(&[1, 1])),
            ColVec::from_ints(&[2, 3])
        );
    }
}
