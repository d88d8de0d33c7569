//! Exact predicates over integer and rational points in small dimension.
//!
//! Everything is decided with arbitrary-precision integers; rational input
//! is first scaled by the common denominator, which preserves every
//! predicate here (they are invariant under positive scaling).

pub mod linalg;
pub mod plane;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use linalg::{dot, normal, rank, sign, sub};

/// A point of `Q^d` with canonical (reduced, positive-denominator) entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RationalPoint(Vec<BigRational>);

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint(coords)
    }

    pub fn from_integers<I: Into<BigInt>>(coords: impl IntoIterator<Item = I>) -> Self {
        RationalPoint(
            coords
                .into_iter()
                .map(|x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n =
        BigInt::from_str(n.trim()).map_err(|e| Error::parse("rational", format!("{s:?}: {e}")))?;
    let d =
        BigInt::from_str(d.trim()).map_err(|e| Error::parse("rational", format!("{s:?}: {e}")))?;
    if d.is_zero() {
        return Err(Error::parse("rational", format!("{s:?}: zero denominator")));
    }
    Ok(BigRational::new(n, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Negative,
    Degenerate,
    Positive,
}

impl Orientation {
    pub fn from_sign(s: i8) -> Self {
        match s.signum() {
            1 => Orientation::Positive,
            -1 => Orientation::Negative,
            _ => Orientation::Degenerate,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Orientation::Negative => -1,
            Orientation::Degenerate => 0,
            Orientation::Positive => 1,
        }
    }
}

/// A finite point set stored in a common integer frame.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    dim: usize,
    coords: Vec<Vec<BigInt>>,
}

impl PointSet {
    pub fn from_integers(dim: usize, coords: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(bad) = coords.iter().position(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "point {bad} has {} coordinates, expected {dim}",
                coords[bad].len()
            )));
        }
        Ok(PointSet { dim, coords })
    }

    pub fn from_rationals(points: &[RationalPoint]) -> Result<Self> {
        let dim = points.first().map_or(0, RationalPoint::dim);
        if let Some(bad) = points.iter().position(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "point {bad} has {} coordinates, expected {dim}",
                points[bad].dim()
            )));
        }
        let lcm = points
            .iter()
            .flat_map(|p| p.0.iter())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let coords = points
            .iter()
            .map(|p| p.0.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
            .collect();
        Ok(PointSet { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[BigInt] {
        &self.coords[i]
    }

    pub fn refs(&self, idx: &[usize]) -> Vec<&[BigInt]> {
        idx.iter().map(|&i| self.coords[i].as_slice()).collect()
    }

    pub fn all_refs(&self) -> Vec<&[BigInt]> {
        self.coords.iter().map(Vec::as_slice).collect()
    }
}

/// Dimension of the affine hull.
pub fn affine_rank_int(points: &[&[BigInt]]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let rows: Vec<Vec<BigInt>> = rest.iter().map(|p| sub(p, first)).collect();
    rank(&rows)
}

/// Sign of the affine determinant of `d + 1` points in `R^d`.
pub fn orientation_int(points: &[&[BigInt]]) -> Orientation {
    let d = points[0].len();
    assert_eq!(points.len(), d + 1, "orientation needs d + 1 points");
    if d == 2 {
        return Orientation::from_sign(plane::orient(points[0], points[1], points[2]));
    }
    let rows: Vec<Vec<BigInt>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    Orientation::from_sign(sign(&linalg::det(&rows)))
}

/// `p` in the interior of `conv(s)`, decided as infeasibility of a nonzero
/// `c` with `<c, x - p> >= 0` for all `x` in `s`.
///
/// If the differences `x - p` span `R^d`, the cone of such `c` is pointed,
/// so it is nontrivial iff it has an extreme ray, i.e. a normal to `d - 1`
/// independent differences that weakly separates.
pub fn strict_interior_int(p: &[BigInt], s: &[&[BigInt]]) -> bool {
    let d = p.len();
    if s.is_empty() {
        return false;
    }
    let diffs: Vec<Vec<BigInt>> = s.iter().map(|x| sub(x, p)).collect();
    if rank(&diffs) < d {
        return false;
    }
    for combo in (0..diffs.len()).combinations(d - 1) {
        let vs: Vec<Vec<BigInt>> = combo.iter().map(|&k| diffs[k].clone()).collect();
        let c = normal(&vs, d);
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let signs: Vec<i8> = diffs.iter().map(|v| sign(&dot(&c, v))).collect();
        if signs.iter().all(|&x| x >= 0) || signs.iter().all(|&x| x <= 0) {
            return false;
        }
    }
    true
}

/// `p` in the closed convex hull of `s` (Carathéodory: some affinely
/// independent subset of `s` holds `p` with nonnegative barycentric weights).
pub fn in_hull_int(p: &[BigInt], s: &[&[BigInt]]) -> bool {
    if s.is_empty() {
        return false;
    }
    let r = affine_rank_int(s);
    let mut with_p = s.to_vec();
    with_p.push(p);
    if affine_rank_int(&with_p) > r {
        return false;
    }
    if r == p.len() {
        return Hull::new(s).contains(p);
    }
    let to_q = |x: &BigInt| BigRational::from_integer(x.clone());
    for combo in (0..s.len()).combinations(r + 1) {
        let base = s[combo[0]];
        let cols: Vec<Vec<BigInt>> = combo[1..].iter().map(|&k| sub(s[k], base)).collect();
        if rank(&cols) < r {
            continue;
        }
        let a: Vec<Vec<BigRational>> = (0..p.len())
            .map(|row| cols.iter().map(|c| to_q(&c[row])).collect())
            .collect();
        let b: Vec<BigRational> = sub(p, base).iter().map(to_q).collect();
        if let Some(mu) = linalg::solve(&a, &b) {
            let total: BigRational = mu.iter().cloned().sum();
            if mu.iter().all(|x| !x.is_negative()) && total <= BigRational::one() {
                return true;
            }
        }
    }
    false
}

/// Every point of `s` is a vertex of `conv(s)`.
pub fn convex_position_int(s: &[&[BigInt]]) -> bool {
    if s.is_empty() {
        return true;
    }
    if s[0].len() == 2 {
        return plane::hull(s).len() == s.len();
    }
    (0..s.len()).all(|k| {
        let rest: Vec<&[BigInt]> = s
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, x)| *x)
            .collect();
        !in_hull_int(s[k], &rest)
    })
}

/// The supporting halfspaces of `conv(s)`, precomputed for repeated
/// containment queries against one polytope.
pub struct Hull<'a> {
    kind: HullKind<'a>,
}

enum HullKind<'a> {
    /// Affine hull is not full-dimensional: the interior is empty.
    Flat,
    Polygon(Vec<&'a [BigInt]>),
    /// Pairs `(c, b)` with `<c, x> >= b` on all of `s`, one per supporting
    /// hyperplane spanned by `d` points of `s`.
    Halfspaces(Vec<(Vec<BigInt>, BigInt)>),
}

impl<'a> Hull<'a> {
    pub fn new(s: &[&'a [BigInt]]) -> Self {
        let Some(first) = s.first() else {
            return Hull {
                kind: HullKind::Flat,
            };
        };
        let d = first.len();
        if affine_rank_int(s) < d {
            return Hull {
                kind: HullKind::Flat,
            };
        }
        if d == 2 {
            let poly = plane::hull(s).into_iter().map(|i| s[i]).collect();
            return Hull {
                kind: HullKind::Polygon(poly),
            };
        }
        let mut halfspaces = Vec::new();
        for combo in (0..s.len()).combinations(d) {
            let base = s[combo[0]];
            let vs: Vec<Vec<BigInt>> = combo[1..].iter().map(|&k| sub(s[k], base)).collect();
            let c = normal(&vs, d);
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            let b = dot(&c, base);
            let signs: Vec<i8> = s.iter().map(|x| sign(&(dot(&c, x) - &b))).collect();
            if signs.iter().all(|&x| x >= 0) {
                halfspaces.push((c, b));
            } else if signs.iter().all(|&x| x <= 0) {
                halfspaces.push((c.iter().map(|x| -x).collect(), -b));
            }
        }
        Hull {
            kind: HullKind::Halfspaces(halfspaces),
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        !matches!(self.kind, HullKind::Flat)
    }

    pub fn strictly_contains(&self, p: &[BigInt]) -> bool {
        match &self.kind {
            HullKind::Flat => false,
            HullKind::Polygon(poly) => plane::strictly_inside(p, poly),
            HullKind::Halfspaces(hs) => hs.iter().all(|(c, b)| &dot(c, p) > b),
        }
    }

    /// Closed containment; only meaningful for full-dimensional hulls.
    fn contains(&self, p: &[BigInt]) -> bool {
        match &self.kind {
            HullKind::Flat => false,
            HullKind::Polygon(poly) => plane::inside_closed(p, poly),
            HullKind::Halfspaces(hs) => hs.iter().all(|(c, b)| &dot(c, p) >= b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneralPosition {
    Pass,
    /// Indices of `k + 2` points lying in a `k`-flat.
    Violation(Vec<usize>),
}

impl GeneralPosition {
    pub fn is_pass(&self) -> bool {
        matches!(self, GeneralPosition::Pass)
    }
}

impl PointSet {
    pub fn affine_rank(&self, idx: &[usize]) -> usize {
        affine_rank_int(&self.refs(idx))
    }

    /// No `k`-flat with `k < d` holds more than `k + 1` points; checked on
    /// all subsets of size `2..=d+1`, smallest first.
    pub fn general_position(&self) -> GeneralPosition {
        let d = self.dim;
        for size in 2..=(d + 1).min(self.len()) {
            for combo in (0..self.len()).combinations(size) {
                let refs = self.refs(&combo);
                let independent = if size == d + 1 {
                    orientation_int(&refs) != Orientation::Degenerate
                } else {
                    affine_rank_int(&refs) == size - 1
                };
                if !independent {
                    return GeneralPosition::Violation(combo);
                }
            }
        }
        GeneralPosition::Pass
    }

    pub fn strict_interior(&self, p: &[BigInt], idx: &[usize]) -> bool {
        strict_interior_int(p, &self.refs(idx))
    }

    pub fn convex_position(&self, idx: &[usize]) -> bool {
        convex_position_int(&self.refs(idx))
    }

    pub fn hull(&self, idx: &[usize]) -> Hull<'_> {
        Hull::new(&self.refs(idx))
    }
}

fn frame_with(p: Option<&RationalPoint>, s: &[RationalPoint]) -> PointSet {
    let mut all: Vec<RationalPoint> = p.into_iter().cloned().collect();
    all.extend_from_slice(s);
    PointSet::from_rationals(&all).expect("points share one dimension")
}

pub fn affine_rank(s: &[RationalPoint]) -> usize {
    affine_rank_int(&frame_with(None, s).all_refs())
}

pub fn general_position(a: &[RationalPoint], d: usize) -> GeneralPosition {
    let ps = frame_with(None, a);
    assert!(a.is_empty() || ps.dim() == d, "points are not in R^{d}");
    ps.general_position()
}

pub fn strict_interior(p: &RationalPoint, s: &[RationalPoint]) -> bool {
    let ps = frame_with(Some(p), s);
    let refs = ps.all_refs();
    strict_interior_int(refs[0], &refs[1..])
}

pub fn in_hull(p: &RationalPoint, s: &[RationalPoint]) -> bool {
    let ps = frame_with(Some(p), s);
    let refs = ps.all_refs();
    in_hull_int(refs[0], &refs[1..])
}

pub fn convex_position(s: &[RationalPoint]) -> bool {
    convex_position_int(&frame_with(None, s).all_refs())
}

pub fn orientation(points: &[RationalPoint]) -> Orientation {
    orientation_int(&frame_with(None, points).all_refs())
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RationalPoint {
        RationalPoint::from_integers(c.iter().copied())
    }

    fn square() -> Vec<RationalPoint> {
        vec![p(&[0, 0]), p(&[2, 0]), p(&[2, 2]), p(&[0, 2])]
    }

    #[test]
    fn affine_rank_examples() {
        assert_eq!(affine_rank(&[p(&[1, 1])]), 0);
        assert_eq!(affine_rank(&[p(&[0, 0]), p(&[1, 1]), p(&[3, 3])]), 1);
        assert_eq!(
            affine_rank(&[p(&[0, 0, 0]), p(&[1, 0, 0]), p(&[0, 1, 0]), p(&[0, 0, 1])]),
            3
        );
    }

    #[test]
    fn general_position_examples() {
        assert!(general_position(&square(), 2).is_pass());
        let mut with_center = square();
        with_center.push(p(&[1, 3]));
        assert!(general_position(&with_center, 2).is_pass());
        let line: Vec<_> = (0..4).map(|t| p(&[t, 2 * t, 3 * t])).collect();
        assert!(matches!(
            general_position(&line, 3),
            GeneralPosition::Violation(w) if w.len() == 3
        ));
        let dup = vec![p(&[1, 1]), p(&[1, 1]), p(&[5, 0])];
        assert_eq!(
            general_position(&dup, 2),
            GeneralPosition::Violation(vec![0, 1])
        );
    }

    #[test]
    fn square_with_center_has_collinear_diagonal() {
        let mut pts = square();
        pts.push(p(&[1, 1]));
        assert_eq!(
            general_position(&pts, 2),
            GeneralPosition::Violation(vec![0, 2, 4])
        );
        let mut pts = vec![p(&[0, 0]), p(&[4, 0]), p(&[4, 4]), p(&[0, 4]), p(&[1, 2])];
        assert!(general_position(&pts, 2).is_pass());
        pts.push(p(&[2, 2]));
        assert!(!general_position(&pts, 2).is_pass());
    }

    #[test]
    fn strict_interior_examples() {
        let sq = square();
        assert!(strict_interior(&p(&[1, 1]), &sq));
        assert!(!strict_interior(&p(&[0, 0]), &sq));
        assert!(!strict_interior(&p(&[1, 0]), &sq));
        assert!(!strict_interior(&p(&[3, 1]), &sq));
        let flat = vec![p(&[0, 0, 0]), p(&[2, 0, 0]), p(&[0, 2, 0])];
        assert!(!strict_interior(&p(&[0, 0, 0]), &flat));
    }

    #[test]
    fn convex_position_examples() {
        assert!(convex_position(&square()));
        let mut sq = square();
        sq.push(p(&[1, 1]));
        assert!(!convex_position(&sq));
        assert!(convex_position(&[p(&[0, 0]), p(&[5, 7])]));
        let cube: Vec<_> = (0..8)
            .map(|b| p(&[b & 1, (b >> 1) & 1, (b >> 2) & 1]))
            .collect();
        assert!(convex_position(&cube));
        let mut cube_c: Vec<_> = cube
            .iter()
            .map(|q| {
                RationalPoint::new(
                    q.coords()
                        .iter()
                        .map(|x| x * BigRational::from_integer(2.into()))
                        .collect(),
                )
            })
            .collect();
        cube_c.push(p(&[1, 1, 1]));
        assert!(!convex_position(&cube_c));
    }

    #[test]
    fn hull_membership_3d() {
        let tet = vec![p(&[0, 0, 0]), p(&[4, 0, 0]), p(&[0, 4, 0]), p(&[0, 0, 4])];
        assert!(in_hull(&p(&[1, 1, 1]), &tet));
        assert!(in_hull(&p(&[2, 2, 0]), &tet));
        assert!(!in_hull(&p(&[2, 2, 1]), &tet));
        assert!(strict_interior(&p(&[1, 1, 1]), &tet));
        assert!(!strict_interior(&p(&[2, 1, 0]), &tet));
        let seg = vec![p(&[0, 0, 0]), p(&[2, 2, 2])];
        assert!(in_hull(&p(&[1, 1, 1]), &seg));
        assert!(!in_hull(&p(&[3, 3, 3]), &seg));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("6/4").unwrap(),
            BigRational::new(3.into(), 2.into())
        );
        assert_eq!(format_rational(&parse_rational("-7").unwrap()), "-7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
