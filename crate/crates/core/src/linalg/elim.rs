//! Exact elimination: fraction-free rank, rational RREF kernels, inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{ColVec, Mat, Rat};

/// Rank over Q.
///
/// Each row is scaled to integers by the lcm of its denominators (row scaling
/// does not change rank), then reduced with Bareiss fraction-free elimination.
/// Entries stay in `i128` while they fit and the whole reduction restarts in
/// `BigInt` on the first overflow.
pub fn rank(m: &Mat) -> usize {
    let rows = integer_rows(m);
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(ToPrimitive::to_i128).collect())
        .collect();
    if let Some(small) = small {
        if let Some(rk) = bareiss_rank_i128(small) {
            return rk;
        }
    }
    bareiss_rank_big(rows)
}

fn integer_rows(m: &Mat) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

fn bareiss_rank_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut rk = 0;
    for c in 0..ncols {
        if rk == nrows {
            break;
        }
        let Some(p) = (rk..nrows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rk, p);
        let (top, rest) = a.split_at_mut(rk + 1);
        let pivot_row = &top[rk];
        let pivot = pivot_row[c];
        for row in rest.iter_mut() {
            let lead = row[c];
            for j in c + 1..ncols {
                let lhs = pivot.checked_mul(row[j])?;
                let rhs = lead.checked_mul(pivot_row[j])?;
                let num = lhs.checked_sub(rhs)?;
                debug_assert_eq!(num % prev, 0, "Bareiss division must be exact");
                row[j] = num / prev;
            }
            row[c] = 0;
        }
        prev = pivot;
        rk += 1;
    }
    Some(rk)
}

pub(crate) fn bareiss_rank_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rk = 0;
    for c in 0..ncols {
        if rk == nrows {
            break;
        }
        let Some(p) = (rk..nrows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rk, p);
        let (top, rest) = a.split_at_mut(rk + 1);
        let pivot_row = &top[rk];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                if row[j].is_zero() && (lead.is_zero() || pivot_row[j].is_zero()) {
                    continue;
                }
                let num = &pivot * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
        }
        prev = pivot;
        rk += 1;
    }
    rk
}

/// Reduced row echelon form over Q; returns the pivot columns.
fn rref(a: &mut [Vec<Rat>]) -> Vec<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for i in 0..nrows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone();
            let pivot_row = a[r].clone();
            for (x, p) in a[i][c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space `{v : m v = 0}`, one vector per free column.
pub fn kernel_basis(m: &Mat) -> Vec<ColVec> {
    let mut a = m.to_rows();
    let pivots = rref(&mut a);
    let ncols = m.cols();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            ColVec(v)
        })
        .collect()
}

pub(crate) fn inverse(m: &Mat) -> Option<Mat> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.extend((0..n).map(|c| if c == r { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let rows = a.into_iter().map(|row| row[n..].to_vec()).collect();
    Mat::from_rows(rows).ok()
}

/// Rank by rational RREF; an independent route used to cross-check `rank`.
#[cfg(test)]
pub(crate) fn rank_rref(m: &Mat) -> usize {
    rref(&mut m.to_rows()).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use num_traits::Signed;
    use proptest::prelude::*;

    fn max_abs(rows: &[Vec<BigInt>]) -> BigInt {
        rows.iter()
            .flatten()
            .map(Signed::abs)
            .max()
            .unwrap_or_default()
    }

    fn small_matrix() -> impl Strategy<Value = Mat> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec((-4i64..=4, 1i64..=3), r * c).prop_map(move |cells| {
                let rows = cells
                    .chunks(c)
                    .map(|ch| ch.iter().map(|&(n, d)| ratio(n, d)).collect())
                    .collect();
                Mat::from_rows(rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let kernel = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + kernel.len(), m.cols());
            for v in &kernel {
                prop_assert!(m.mul_col(v).is_zero());
            }
        }

        #[test]
        fn bareiss_matches_rref(m in small_matrix()) {
            prop_assert_eq!(rank(&m), rank_rref(&m));
            prop_assert_eq!(bareiss_rank_big(integer_rows(&m)), rank_rref(&m));
        }
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        // entries near 2^100 overflow the i128 products immediately
        let big = Rat::from_integer(BigInt::from(2).pow(100u32));
        let m = Mat::from_rows(vec![
            vec![big.clone(), rat(1), rat(0)],
            vec![rat(1), big.clone(), rat(1)],
            vec![big.clone() + rat(1), big.clone() + rat(1), rat(1)],
        ])
        .unwrap();
        assert_eq!(rank(&m), 2);
        assert_eq!(rank_rref(&m), 2);
        assert!(max_abs(&integer_rows(&m)) > BigInt::from(i64::MAX));
    }
}
