//! Characteristic polynomials and exact rational root finding.
//!
//! Polynomials are coefficient vectors, lowest degree first, with no trailing
//! zeros. Rational roots are isolated with a Sturm sequence on the square-free
//! part and then recovered as the simplest fraction in a narrow interval, so no
//! integer factorization is needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Mat, Rat};
use crate::error::{Error, Result};

type Poly = Vec<Rat>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Rat]) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
            .collect(),
    )
}

/// Polynomial long division `a = q b + r`.
fn divmod(a: &[Rat], b: &[Rat]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![Rat::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let k = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &k * c;
        }
        q[shift] = k;
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: Poly) -> Poly {
    match p.last() {
        Some(lead) => {
            let lead = lead.clone();
            p.into_iter().map(|c| c / &lead).collect()
        }
        None => p,
    }
}

fn gcd(a: &[Rat], b: &[Rat]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn sturm_sequence(p: &[Rat]) -> Vec<Poly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    while !seq.last().unwrap().is_empty() {
        let k = seq.len();
        let (_, r) = divmod(&seq[k - 2], &seq[k - 1]);
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq.pop();
    seq
}

fn sign_changes(seq: &[Poly], x: &Rat) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// The fraction with the smallest denominator in the closed interval `[lo, hi]`.
fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Rat::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let ceil = lo.ceil();
    if &ceil <= hi {
        return ceil;
    }
    let whole = lo.floor();
    let lo_frac = lo - &whole;
    let hi_frac = hi - &whole;
    whole + simplest_between(&hi_frac.recip(), &lo_frac.recip()).recip()
}

/// Leading coefficient of the primitive integer polynomial proportional to `p`.
fn integer_leading_coefficient(p: &[Rat]) -> BigInt {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    (ints.last().unwrap() / content).abs()
}

/// Distinct rational roots of a square-free polynomial, ascending.
fn squarefree_rational_roots(h: &[Rat]) -> Vec<Rat> {
    let deg = h.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = h.last().unwrap();
    // Cauchy bound: every root satisfies |x| < bound
    let bound = h[..deg]
        .iter()
        .map(|c| (c / lead).abs())
        .fold(Rat::zero(), |acc, c| if c > acc { c } else { acc })
        + Rat::one();
    // two distinct fractions with denominators dividing `a` differ by >= 1/a^2
    let a = integer_leading_coefficient(h);
    let width = Rat::new(BigInt::one(), &a * &a);

    let seq = sturm_sequence(h);
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 && &hi - &lo < width {
            let candidate = simplest_between(&lo, &hi);
            if eval(h, &candidate).is_zero() {
                roots.push(candidate);
            }
            continue;
        }
        // split at a point that is not itself a root
        let span = &hi - &lo;
        let denom = Rat::from_integer(BigInt::from(deg + 2));
        let split = std::iter::once(Rat::new(BigInt::one(), BigInt::from(2)))
            .chain((1..=deg + 1).map(|k| Rat::from_integer(BigInt::from(k)) / &denom))
            .map(|t| &lo + &span * t)
            .find(|x| !eval(h, x).is_zero())
            .expect("a square-free polynomial has at most deg roots");
        stack.push((lo, split.clone()));
        stack.push((split, hi));
    }
    roots.sort();
    roots
}

/// All rational roots of `p` with multiplicity, ascending by root.
pub fn rational_roots(p: &[Rat]) -> Vec<(Rat, usize)> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let squarefree = monic(divmod(&p, &gcd(&p, &derivative(&p))).0);
    squarefree_rational_roots(&squarefree)
        .into_iter()
        .map(|root| {
            let linear = vec![-root.clone(), Rat::one()];
            let mut rest = p.clone();
            let mut mult = 0;
            loop {
                let (q, r) = divmod(&rest, &linear);
                if !r.is_empty() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            (root, mult)
        })
        .collect()
}

/// `det(t I - m)` by Faddeev-LeVerrier, lowest degree first (monic).
pub fn char_poly(m: &Mat) -> Result<Vec<Rat>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut aux = Mat::zeros(n, n);
    for k in 1..=n {
        aux = &(m * &aux) + &Mat::scalar(n, &coeffs[n - k + 1]);
        let t = (m * &aux).trace();
        coeffs[n - k] = -t / Rat::from_integer(BigInt::from(k));
    }
    Ok(coeffs)
}

/// Eigenvalues of `m` with multiplicity, provided they are all rational.
pub fn char_poly_rational_roots(m: &Mat) -> Result<Vec<(Rat, usize)>> {
    let p = char_poly(m)?;
    let roots = rational_roots(&p);
    let found: usize = roots.iter().map(|(_, k)| k).sum();
    if found == m.rows() {
        Ok(roots)
    } else {
        Err(Error::IrrationalEigenvalue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use proptest::prelude::*;

    fn poly_from_roots(roots: &[Rat]) -> Poly {
        roots.iter().fold(vec![Rat::one()], |acc, r| {
            let mut out = vec![Rat::zero(); acc.len() + 1];
            for (k, c) in acc.iter().enumerate() {
                out[k + 1] += c;
                out[k] -= c * r;
            }
            out
        })
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            char_poly_rational_roots(&Mat::diag(&[rat(3), rat(3)])).unwrap(),
            vec![(rat(3), 2)]
        );
        assert_eq!(
            char_poly_rational_roots(&Mat::from_ints(&[[1, 5], [0, 2]])).unwrap(),
            vec![(rat(1), 1), (rat(2), 1)]
        );
        assert_eq!(
            char_poly_rational_roots(&Mat::from_ints(&[[0, 1], [1, 0]])).unwrap(),
            vec![(rat(-1), 1), (rat(1), 1)]
        );
        assert_eq!(
            char_poly_rational_roots(&Mat::from_ints(&[[0, 1], [-1, 0]])),
            Err(Error::IrrationalEigenvalue)
        );
        assert_eq!(
            char_poly_rational_roots(&Mat::from_ints(&[[1, 2]])),
            Err(Error::NotSquare { rows: 1, cols: 2 })
        );
    }

    #[test]
    fn partial_split_is_rejected() {
        // (t - 1/2)(t^2 - 2): one rational root, two irrational
        let p = vec![ratio(1, 1), rat(-2), ratio(-1, 2), rat(1)];
        assert_eq!(rational_roots(&p), vec![(ratio(1, 2), 1)]);
    }

    #[test]
    fn close_fractions_are_separated() {
        let roots = [ratio(1, 7), ratio(1, 6), ratio(-100, 3), ratio(1, 6)];
        assert_eq!(
            rational_roots(&poly_from_roots(&roots)),
            vec![(ratio(-100, 3), 1), (ratio(1, 7), 1), (ratio(1, 6), 2)]
        );
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&ratio(3, 10), &ratio(4, 10)), ratio(1, 3));
        assert_eq!(
            simplest_between(&ratio(-4, 10), &ratio(-3, 10)),
            ratio(-1, 3)
        );
        assert_eq!(simplest_between(&ratio(-1, 2), &ratio(1, 2)), rat(0));
        assert_eq!(simplest_between(&ratio(5, 2), &ratio(7, 2)), rat(3));
    }

    proptest! {
        #[test]
        fn roots_of_products_are_recovered(
            raw in prop::collection::vec((-12i64..=12, 1i64..=5), 1..7)
        ) {
            let roots: Vec<Rat> = raw.iter().map(|&(n, d)| ratio(n, d)).collect();
            let found = rational_roots(&poly_from_roots(&roots));
            let mut expanded: Vec<Rat> = found
                .iter()
                .flat_map(|(r, k)| std::iter::repeat_n(r.clone(), *k))
                .collect();
            let mut expected = roots.clone();
            expected.sort();
            expanded.sort();
            prop_assert_eq!(expanded, expected);
        }

        #[test]
        fn eigenvalue_sum_is_trace(
            cells in prop::collection::vec(-5i64..=5, 9),
            diag in prop::collection::vec(-4i64..=4, 3),
        ) {
            // upper triangular matrices always have a rational spectrum
            let mut m = Mat::zeros(3, 3);
            for r in 0..3 {
                m[(r, r)] = rat(diag[r]);
                for c in r + 1..3 {
                    m[(r, c)] = rat(cells[3 * r + c]);
                }
            }
            let roots = char_poly_rational_roots(&m).unwrap();
            let sum = roots
                .iter()
                .fold(Rat::zero(), |acc, (r, k)| acc + r * rat(*k as i64));
            prop_assert_eq!(sum, m.trace());
        }
    }
}
