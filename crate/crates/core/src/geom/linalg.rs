//! Exact integer and rational linear algebra for small dimensions.

// Index loops read closer to the matrix/table notation here.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn reduce_row(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Rank of the row set, by division-free elimination with gcd reduction.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let (pivot, factor) = (m[r][c].clone(), m[i][c].clone());
            for j in c..cols {
                m[i][j] = &pivot * &m[i][j] - &factor * &m[r][j];
            }
            reduce_row(&mut m[i]);
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant of a square matrix (Bareiss).
pub fn det(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// A vector orthogonal to the `d - 1` given vectors of `R^d` (generalised
/// cross product); zero when they are linearly dependent.
pub fn normal(vectors: &[Vec<BigInt>], d: usize) -> Vec<BigInt> {
    debug_assert_eq!(vectors.len() + 1, d);
    (0..d)
        .map(|k| {
            let minor: Vec<Vec<BigInt>> = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let m = det(&minor);
            if k % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

/// Solves `A x = b` for `A` with full column rank; `None` if inconsistent.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::with_capacity(cols);
    let mut r = 0;
    for c in 0..cols {
        let p = (r..rows).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| m[i][cols].clone()).collect())
}

pub fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det(&m(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            det(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])),
            BigInt::from(-3)
        );
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            det(&m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])),
            BigInt::from(-1)
        );
    }

    #[test]
    fn rank_small() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&m(&[&[0, 1, 0], &[0, 0, 1], &[0, 1, 1]])), 2);
        assert_eq!(rank(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
    }

    #[test]
    fn normal_is_orthogonal() {
        let vs = m(&[&[1, 2, 3], &[-4, 0, 5]]);
        let n = normal(&vs, 3);
        assert!(vs.iter().all(|v| dot(v, &n).is_zero()));
        assert!(n.iter().any(|x| !x.is_zero()));
        assert_eq!(normal(&[], 1), vec![BigInt::one()]);
    }

    #[test]
    fn solve_small() {
        let r = |x: i64| BigRational::from_integer(x.into());
        let a = vec![vec![r(1), r(1)], vec![r(1), r(-1)], vec![r(2), r(0)]];
        assert_eq!(solve(&a, &[r(3), r(1), r(4)]), Some(vec![r(2), r(1)]));
        assert_eq!(solve(&a, &[r(3), r(1), r(5)]), None);
    }
}
