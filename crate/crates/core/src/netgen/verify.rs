use rayon::prelude::*;

use super::{AlmostNetParams, NetPoint};
use crate::error::{Error, Result};

/// `prod_i [b_i 2^-k_i, (b_i + 1) 2^-k_i)`, stored as `(k_i, b_i)` per axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicBox {
    pub axes: Vec<(u32, u64)>,
}

impl DyadicBox {
    pub fn new(axes: Vec<(u32, u64)>) -> Result<Self> {
        for &(k, b) in &axes {
            if k >= 64 || b >> k != 0 {
                return Err(Error::Precondition(format!(
                    "box offset {b} out of range for level {k}"
                )));
            }
        }
        Ok(DyadicBox { axes })
    }

    /// `-log2(volume)`.
    pub fn level(&self) -> u32 {
        self.axes.iter().map(|&(k, _)| k).sum()
    }

    pub fn contains(&self, p: &NetPoint) -> bool {
        self.axes
            .iter()
            .enumerate()
            .all(|(i, &(k, b))| p.prefix_uint(i, k as usize) == b)
    }
}

/// Weak compositions of `total` into `parts` nonnegative parts, in
/// lexicographic order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=rest {
            cur.push(k);
            rec(rest - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Every dyadic box of `[0,1)^s` with `sum k_i = level`.
pub fn dyadic_boxes(s: usize, level: u32) -> impl Iterator<Item = DyadicBox> {
    compositions(level, s)
        .into_iter()
        .flat_map(move |ks| (0..1u64 << level).map(move |idx| box_from_index(&ks, idx)))
}

/// Splits a packed index (axis 1 in the high bits) into per-axis offsets.
fn box_from_index(ks: &[u32], idx: u64) -> DyadicBox {
    let mut shift: u32 = ks.iter().sum();
    let axes = ks
        .iter()
        .map(|&k| {
            shift -= k;
            (k, (idx >> shift) & ((1u64 << k) - 1))
        })
        .collect();
    DyadicBox { axes }
}

fn packed_index(p: &NetPoint, ks: &[u32]) -> u64 {
    ks.iter().enumerate().fold(0u64, |acc, (i, &k)| {
        (acc << k) | p.prefix_uint(i, k as usize)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetVerdict {
    Pass { boxes_checked: u64 },
    Violation { dyadic_box: DyadicBox, count: u64 },
}

impl NetVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, NetVerdict::Pass { .. })
    }
}

/// Checks that every box of the given level holds between `lo` and `hi`
/// points (inclusive). Boxes are visited composition by composition, and
/// the first offending box in that order is reported.
pub(crate) fn check_level(
    points: &[NetPoint],
    s: usize,
    level: u32,
    lo: u64,
    hi: u64,
) -> NetVerdict {
    let comps = compositions(level, s);
    let per_comp: Vec<std::result::Result<u64, (DyadicBox, u64)>> = comps
        .par_iter()
        .map(|ks| {
            let mut idx: Vec<u64> = points.iter().map(|p| packed_index(p, ks)).collect();
            idx.sort_unstable();
            let total = 1u64 << level;
            let mut expected = 0u64;
            let mut i = 0;
            while i < idx.len() {
                let cur = idx[i];
                let run = idx[i..].iter().take_while(|&&v| v == cur).count() as u64;
                if cur > expected && lo > 0 {
                    return Err((box_from_index(ks, expected), 0));
                }
                if run < lo || run > hi {
                    return Err((box_from_index(ks, cur), run));
                }
                expected = cur + 1;
                i += run as usize;
            }
            if expected < total && lo > 0 {
                return Err((box_from_index(ks, expected), 0));
            }
            Ok(total)
        })
        .collect();
    let mut boxes_checked = 0;
    for r in per_comp {
        match r {
            Ok(n) => boxes_checked += n,
            Err((dyadic_box, count)) => return NetVerdict::Violation { dyadic_box, count },
        }
    }
    NetVerdict::Pass { boxes_checked }
}

fn check_shape(points: &[NetPoint], s: usize, digits: usize) -> Result<()> {
    for (index, p) in points.iter().enumerate() {
        if p.dim() != s {
            return Err(Error::DimensionMismatch(format!(
                "point {index} has {} coordinates, expected {s}",
                p.dim()
            )));
        }
        for (coord, c) in p.coords().iter().enumerate() {
            if c.len() < digits {
                return Err(Error::InsufficientDigits {
                    index,
                    coord,
                    have: c.len(),
                    need: digits,
                });
            }
        }
    }
    Ok(())
}

/// Decides whether `points` is a `(t, m, s)`-net in base 2.
pub fn verify_net(points: &[NetPoint], t: u32, m: u32, s: usize) -> Result<NetVerdict> {
    if t > m {
        return Err(Error::Precondition(format!("t = {t} exceeds m = {m}")));
    }
    if m >= 63 || points.len() as u64 != 1u64 << m {
        return Err(Error::SizeMismatch {
            expected: format!("2^{m}"),
            found: points.len(),
        });
    }
    let level = m - t;
    check_shape(points, s, level as usize)?;
    let exact = 1u64 << t;
    Ok(check_level(points, s, level, exact, exact))
}

/// Smallest `t` for which `points` is a `(t, m, s)`-net.
pub fn minimal_t(points: &[NetPoint], m: u32, s: usize) -> Result<Option<u32>> {
    for t in 0..=m {
        if verify_net(points, t, m, s)?.is_pass() {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Decides whether `points` is a `(T, eps)`-almost net of size `2^n T`.
pub fn verify_almost_net(points: &[NetPoint], params: &AlmostNetParams) -> Result<NetVerdict> {
    if points.len() as u64 != params.size() {
        return Err(Error::SizeMismatch {
            expected: format!("2^{} * {}", params.n, params.t_count),
            found: points.len(),
        });
    }
    let s = points.first().map_or(1, NetPoint::dim);
    check_shape(points, s, params.n as usize)?;
    let (lo, hi) = params.count_bounds();
    Ok(check_level(points, s, params.n, lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::netgen::vdc_points;
    use std::collections::HashSet;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn box_enumeration_is_exhaustive_and_distinct() {
        for s in 1..=4usize {
            for level in 0..=5u32 {
                let boxes: Vec<_> = dyadic_boxes(s, level).collect();
                let expected = binomial(level as u64 + s as u64 - 1, s as u64 - 1) << level;
                assert_eq!(boxes.len() as u64, expected);
                let distinct: HashSet<_> = boxes.iter().cloned().collect();
                assert_eq!(distinct.len(), boxes.len());
                assert!(boxes.iter().all(|b| b.level() == level));
            }
        }
    }

    #[test]
    fn pass_reports_box_count() {
        let pts = vdc_points(4);
        match verify_net(&pts, 0, 4, 1).unwrap() {
            NetVerdict::Pass { boxes_checked } => assert_eq!(boxes_checked, 16),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn degenerate_multiset_is_rejected() {
        let origin = NetPoint::new(vec![BitString::from_uint(0, 3)]);
        let pts = vec![origin; 8];
        match verify_net(&pts, 0, 3, 1).unwrap() {
            NetVerdict::Violation { dyadic_box, count } => {
                assert_eq!(count, 8);
                assert_eq!(dyadic_box.axes, vec![(3, 0)]);
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(minimal_t(&pts, 3, 1).unwrap(), Some(3));
    }

    #[test]
    fn t_equal_m_is_single_box() {
        let origin = NetPoint::new(vec![BitString::empty(), BitString::empty()]);
        let pts = vec![origin; 4];
        assert!(verify_net(&pts, 2, 2, 2).unwrap().is_pass());
        assert!(verify_net(&pts[..3], 2, 2, 2).is_err());
    }

    #[test]
    fn missing_box_reports_zero_count() {
        let mut pts = vdc_points(3);
        pts[1] = pts[0].clone();
        match verify_net(&pts, 0, 3, 1).unwrap() {
            NetVerdict::Violation { count, .. } => assert!(count == 0 || count == 2),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn box_contains_agrees_with_packing() {
        let pts = vdc_points(4);
        for b in dyadic_boxes(1, 2) {
            assert_eq!(pts.iter().filter(|p| b.contains(p)).count(), 4);
        }
    }
}
