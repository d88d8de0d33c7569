//! Planar fast paths: orientation and strict convex hulls.

use num_bigint::BigInt;
use std::cmp::Ordering;

use super::linalg::sign;

/// Sign of `(b - a) x (c - a)`: `+1` for a left turn.
pub fn orient(a: &[BigInt], b: &[BigInt], c: &[BigInt]) -> i8 {
    let v = (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
    sign(&v)
}

/// Indices of the hull vertices in counter-clockwise order, starting at the
/// lexicographically smallest point. Points on hull edges (and duplicates)
/// are not vertices.
pub fn hull(points: &[&[BigInt]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| points[i].cmp(points[j]));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in &idx {
        while lower.len() >= 2
            && orient(
                points[lower[lower.len() - 2]],
                points[lower[lower.len() - 1]],
                points[i],
            ) <= 0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && orient(
                points[upper[upper.len() - 2]],
                points[upper[upper.len() - 1]],
                points[i],
            ) <= 0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && points[lower[0]] == points[lower[1]] {
        lower.pop();
    }
    lower
}

/// `p` strictly inside the convex polygon with CCW vertices `poly`.
pub fn strictly_inside(p: &[BigInt], poly: &[&[BigInt]]) -> bool {
    if poly.len() < 3 {
        return false;
    }
    (0..poly.len()).all(|k| orient(poly[k], poly[(k + 1) % poly.len()], p) > 0)
}

/// `p` in the closed convex hull of the CCW vertex list `poly`.
pub fn inside_closed(p: &[BigInt], poly: &[&[BigInt]]) -> bool {
    match poly.len() {
        0 => false,
        1 => poly[0] == p,
        2 => {
            orient(poly[0], poly[1], p) == 0
                && (0..2).all(|k| {
                    let lo = poly[0][k].clone().min(poly[1][k].clone());
                    let hi = poly[0][k].clone().max(poly[1][k].clone());
                    lo <= p[k] && p[k] <= hi
                })
        }
        n => (0..n).all(|k| orient(poly[k], poly[(k + 1) % n], p) >= 0),
    }
}

/// Angular order of `a` and `b` around `origin`, both assumed in the
/// half-plane above `origin` (or on its rightward ray).
pub fn angular_cmp(origin: &[BigInt], a: &[BigInt], b: &[BigInt]) -> Ordering {
    match orient(origin, a, b) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Vec<BigInt>> {
        v.iter().map(|&(x, y)| vec![x.into(), y.into()]).collect()
    }

    #[test]
    fn hull_skips_interior_and_collinear() {
        let p = pts(&[(0, 0), (2, 0), (1, 0), (2, 2), (0, 2), (1, 1)]);
        let refs: Vec<&[BigInt]> = p.iter().map(Vec::as_slice).collect();
        let h = hull(&refs);
        assert_eq!(h, vec![0, 1, 3, 4]);
    }

    #[test]
    fn degenerate_hulls() {
        let p = pts(&[(0, 0), (1, 1), (2, 2)]);
        let refs: Vec<&[BigInt]> = p.iter().map(Vec::as_slice).collect();
        assert_eq!(hull(&refs).len(), 2);
        let p = pts(&[(3, 3), (3, 3)]);
        let refs: Vec<&[BigInt]> = p.iter().map(Vec::as_slice).collect();
        assert_eq!(hull(&refs).len(), 1);
    }

    #[test]
    fn inside_tests() {
        let sq = pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        let poly: Vec<&[BigInt]> = sq.iter().map(Vec::as_slice).collect();
        let c = pts(&[(1, 1), (1, 0), (3, 1)]);
        assert!(strictly_inside(&c[0], &poly));
        assert!(!strictly_inside(&c[1], &poly));
        assert!(inside_closed(&c[1], &poly));
        assert!(!inside_closed(&c[2], &poly));
    }
}
