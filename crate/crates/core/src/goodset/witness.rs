//! Descent from a large subset `U` to prefixes `(a^2, ..., a^d)` and a
//! witness key strictly between the extremes of the surviving subset.

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, PointKey};
use crate::error::{Error, Result};

/// Choice of the split bit when both halves are equally large.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiePolicy {
    #[default]
    Zero,
    One,
}

/// One level of the descent, on 0-based axis `axis >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    pub axis: usize,
    /// Longest common prefix of the axis components of `U_i`.
    pub b: BitString,
    pub alpha: bool,
    /// Extension of `b alpha` shared by every member of `U_{i-1}`.
    pub c: BitString,
    /// `b alpha c beta` with `beta = 1 - alpha`.
    pub a: BitString,
    /// Indices (into the key slice) of `U_i` and `U_{i-1}`.
    pub before: Vec<usize>,
    pub after: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTrace {
    /// From the last axis down to axis 1.
    pub steps: Vec<DescentStep>,
    /// `(a^2, ..., a^d)` in axis order.
    pub prefixes: Vec<BitString>,
    /// `U_1`.
    pub z: Vec<usize>,
}

/// Runs the descent on `u` (indices into `keys`) and returns the index of a
/// key `y` with `a^i ⊑ y^i` for every axis `i >= 1` and `y^0` strictly
/// between the smallest and largest first components over `U_1`.
///
/// Requires `|U| > 2^(d-1) q`; every step keeps at least half of its input.
pub fn find_interior_witness(
    keys: &[PointKey],
    q: u64,
    u: &[usize],
    tie: TiePolicy,
) -> Result<(usize, WitnessTrace)> {
    let d = keys.first().map_or(0, PointKey::dim);
    if d == 0 {
        return Err(Error::Precondition("empty key set".into()));
    }
    let need = (q as u128) << (d - 1);
    if (u.len() as u128) <= need {
        return Err(Error::Precondition(format!(
            "|U| = {} must exceed 2^(d-1) q = {need}",
            u.len()
        )));
    }
    if let Some(&bad) = u.iter().find(|&&i| i >= keys.len()) {
        return Err(Error::Precondition(format!("index {bad} out of range")));
    }

    let mut current: Vec<usize> = u.to_vec();
    current.sort_unstable();
    current.dedup();
    if current.len() != u.len() {
        return Err(Error::Precondition("U has repeated indices".into()));
    }

    let mut steps = Vec::with_capacity(d - 1);
    for axis in (1..d).rev() {
        let comp = |k: usize| keys[k].component(axis);
        let b = BitString::longest_common_prefix(current.iter().map(|&k| comp(k)));
        let split = b.len();
        if split >= keys[current[0]].width() {
            return Err(Error::Descent(format!(
                "axis {axis}: {} keys share one component",
                current.len()
            )));
        }
        let ones = current
            .iter()
            .filter(|&&k| comp(k).get(split) == Some(true))
            .count();
        let zeros = current.len() - ones;
        let alpha = match ones.cmp(&zeros) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => tie == TiePolicy::One,
        };
        let after: Vec<usize> = current
            .iter()
            .copied()
            .filter(|&k| comp(k).get(split) == Some(alpha))
            .collect();
        debug_assert!(2 * after.len() >= current.len());
        let shared = BitString::longest_common_prefix(after.iter().map(|&k| comp(k)));
        if shared.len() >= keys[after[0]].width() {
            return Err(Error::Descent(format!(
                "axis {axis}: U_(i-1) has {} key(s) sharing one component",
                after.len()
            )));
        }
        let c = BitString::new(shared.bits()[split + 1..].to_vec());
        let mut a = shared.clone();
        a.push(!alpha);
        steps.push(DescentStep {
            axis,
            b,
            alpha,
            c,
            a,
            before: std::mem::take(&mut current),
            after: after.clone(),
        });
        current = after;
    }

    if current.len() as u64 <= q {
        return Err(Error::Descent(format!(
            "|U_1| = {} does not exceed q = {q}",
            current.len()
        )));
    }
    let prefixes: Vec<BitString> = steps.iter().rev().map(|s| s.a.clone()).collect();
    let lo = current
        .iter()
        .map(|&k| keys[k].component(0))
        .min()
        .expect("nonempty");
    let hi = current
        .iter()
        .map(|&k| keys[k].component(0))
        .max()
        .expect("nonempty");
    let y = (0..keys.len())
        .find(|&k| {
            let first = keys[k].component(0);
            lo < first
                && first < hi
                && prefixes
                    .iter()
                    .enumerate()
                    .all(|(i, a)| a.is_prefix_of(keys[k].component(i + 1)))
        })
        .ok_or(Error::NoWitness)?;
    Ok((
        y,
        WitnessTrace {
            steps,
            prefixes,
            z: current,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goodset::to_binary_almost_net;
    use crate::netgen::{sequence_to_net, vdc_points, AlmostNetParams};
    use itertools::Itertools;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn vdc_keys(n: u32) -> Vec<PointKey> {
        let net = sequence_to_net(&vdc_points(n), 0, n).unwrap();
        let params = AlmostNetParams::new(1, BigRational::zero(), n).unwrap();
        to_binary_almost_net(&net, &params, 2)
            .unwrap()
            .keys()
            .to_vec()
    }

    fn check(keys: &[PointKey], q: u64, u: &[usize], tie: TiePolicy) {
        let (y, trace) = find_interior_witness(keys, q, u, tie).unwrap();
        for s in &trace.steps {
            assert!(2 * s.after.len() >= s.before.len());
            assert!(s.a.is_prefix_of(keys[y].component(s.axis)));
            let parent = s.a.parent().unwrap();
            assert!(s
                .after
                .iter()
                .all(|&k| parent.is_prefix_of(keys[k].component(s.axis))));
        }
        assert!(trace.z.len() as u64 > q);
        let firsts: Vec<_> = trace.z.iter().map(|&k| keys[k].component(0)).collect();
        let (lo, hi) = (firsts.iter().min().unwrap(), firsts.iter().max().unwrap());
        assert!(*lo < keys[y].component(0) && keys[y].component(0) < *hi);
    }

    #[test]
    fn every_large_subset_of_the_toy_sets() {
        for n in [3, 4] {
            let keys = vdc_keys(n);
            let q = crate::goodset::minimal_good_q(&keys, &Default::default())
                .unwrap()
                .unwrap();
            for size in 2 * q as usize + 1..=keys.len().min(2 * q as usize + 3) {
                for u in (0..keys.len()).combinations(size) {
                    check(&keys, q, &u, TiePolicy::Zero);
                    check(&keys, q, &u, TiePolicy::One);
                }
            }
        }
    }

    #[test]
    fn too_small_u_is_rejected() {
        let keys = vdc_keys(3);
        assert!(matches!(
            find_interior_witness(&keys, 4, &[0, 1, 2, 3], TiePolicy::Zero),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn missing_witness_reported() {
        let keys: Vec<PointKey> = ["00", "11"]
            .iter()
            .zip(["01", "00"])
            .map(|(a, b)| PointKey::new(vec![a.parse().unwrap(), b.parse().unwrap()]).unwrap())
            .collect();
        assert!(matches!(
            find_interior_witness(&keys, 0, &[0, 1], TiePolicy::Zero),
            Err(Error::NoWitness) | Err(Error::Descent(_))
        ));
    }
}
