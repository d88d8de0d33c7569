//! Binary almost nets and q-good key sets.
//!
//! A key set `Y` is q-good when its keys are pairwise distinct in every
//! coordinate and, for every tuple of nonempty prefixes `(a^2, ..., a^d)` and
//! every `(q+1)`-subset `Z` whose members all satisfy `parent(a^i) ⊑ z^i`
//! (condition (C)), some `y` in `Y` has `a^i ⊑ y^i` for `i >= 2` and a first
//! component strictly between the smallest and largest first components of
//! `Z`.

mod witness;

pub use witness::{find_interior_witness, DescentStep, TiePolicy, WitnessTrace};

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{BitString, PointKey};
use crate::error::{Error, Result};
use crate::holes::binomial;
use crate::netgen::{check_level, verify_almost_net, AlmostNetParams, NetPoint, NetVerdict};

/// Smallest `e` with `2^e >= x`.
pub fn ceil_log2(x: u64) -> u32 {
    assert!(x > 0);
    64 - (x - 1).leading_zeros()
}

/// Key width `m = n + ceil(log2 T) + 1` for a `(T, eps)`-almost net of size
/// `2^n T`.
pub fn key_width(params: &AlmostNetParams) -> usize {
    (params.n + ceil_log2(params.t_count) + 1) as usize
}

/// A key set together with the almost-net parameters it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryAlmostNet {
    keys: Vec<PointKey>,
    params: AlmostNetParams,
    d: usize,
}

/// First reason a key set fails the binary almost net invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeySetDefect {
    /// Two keys agree in coordinate `coord`.
    Collision {
        coord: usize,
        first: PointKey,
        second: PointKey,
    },
    /// A prefix class outside `[2^(n-k)(1-eps)T, 2^(n-k)(1+eps)T]`.
    PrefixCount {
        prefixes: Vec<BitString>,
        count: u64,
    },
}

impl BinaryAlmostNet {
    /// Wraps keys without checking the counting invariants; shapes are checked.
    pub fn new(keys: Vec<PointKey>, params: AlmostNetParams, d: usize) -> Result<Self> {
        let m = key_width(&params);
        if keys.len() as u64 != params.size() {
            return Err(Error::SizeMismatch {
                expected: format!("2^{} * {}", params.n, params.t_count),
                found: keys.len(),
            });
        }
        check_key_shape(&keys, d, m)?;
        Ok(BinaryAlmostNet { keys, params, d })
    }

    pub fn keys(&self) -> &[PointKey] {
        &self.keys
    }

    pub fn params(&self) -> &AlmostNetParams {
        &self.params
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        key_width(&self.params)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn prefix_set(&self, prefixes: &[BitString]) -> Vec<&PointKey> {
        prefix_set(&self.keys, prefixes)
    }

    /// Checks distinctness and every prefix-class count with `sum len <= n`.
    pub fn check_invariants(&self) -> Option<KeySetDefect> {
        if let Some((coord, a, b)) = first_collision(&self.keys) {
            return Some(KeySetDefect::Collision {
                coord,
                first: self.keys[a].clone(),
                second: self.keys[b].clone(),
            });
        }
        let points: Vec<NetPoint> = self
            .keys
            .iter()
            .map(|k| NetPoint::new(k.components().to_vec()))
            .collect();
        let t = BigRational::from_integer(BigInt::from(self.params.t_count));
        let one = BigRational::one();
        for k in 0..=self.params.n {
            let scale = BigRational::from_integer(BigInt::one() << (self.params.n - k) as usize);
            let lo = ((&one - &self.params.eps) * &t * &scale)
                .ceil()
                .to_integer();
            let hi = ((&one + &self.params.eps) * &t * &scale)
                .floor()
                .to_integer();
            let (lo, hi) = (lo.to_u64().unwrap_or(0), hi.to_u64().unwrap_or(u64::MAX));
            if let NetVerdict::Violation { dyadic_box, count } =
                check_level(&points, self.d, k, lo, hi)
            {
                let prefixes = dyadic_box
                    .axes
                    .iter()
                    .map(|&(len, idx)| BitString::from_uint(idx, len as usize))
                    .collect();
                return Some(KeySetDefect::PrefixCount { prefixes, count });
            }
        }
        None
    }
}

fn check_key_shape(keys: &[PointKey], d: usize, m: usize) -> Result<()> {
    for (i, k) in keys.iter().enumerate() {
        if k.dim() != d || k.width() != m {
            return Err(Error::DimensionMismatch(format!(
                "key {i} has {} components of length {}, expected {d} of length {m}",
                k.dim(),
                k.width()
            )));
        }
    }
    Ok(())
}

/// `(coord, i, j)` for the first pair of keys agreeing in some coordinate.
pub fn first_collision(keys: &[PointKey]) -> Option<(usize, usize, usize)> {
    let d = keys.first().map_or(0, PointKey::dim);
    for coord in 0..d {
        let mut seen: HashMap<&BitString, usize> = HashMap::with_capacity(keys.len());
        for (j, k) in keys.iter().enumerate() {
            if let Some(&i) = seen.get(k.component(coord)) {
                return Some((coord, i, j));
            }
            seen.insert(k.component(coord), j);
        }
    }
    None
}

/// `I(a^1, ..., a^d)`: keys whose components extend the given prefixes.
/// Missing trailing prefixes count as empty.
pub fn prefix_set<'a>(keys: &'a [PointKey], prefixes: &[BitString]) -> Vec<&'a PointKey> {
    keys.iter().filter(|k| k.matches(prefixes)).collect()
}

/// Maps an almost net to keys of width `m = n + ceil(log2 T) + 1`.
///
/// Coordinate `i` of a point becomes its first `m` digits (zero-padded when
/// fewer are stored). Within each `n`-prefix class of a coordinate that
/// contains repeated words, points are ordered by (that coordinate's digits,
/// all digits, input index) and receive the tails `0, 1, 2, ...`.
pub fn to_binary_almost_net(
    points: &[NetPoint],
    params: &AlmostNetParams,
    d: usize,
) -> Result<BinaryAlmostNet> {
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {d}",
            p.dim()
        )));
    }
    match verify_almost_net(points, params)? {
        NetVerdict::Pass { .. } => {}
        NetVerdict::Violation { dyadic_box, count } => {
            return Err(Error::Precondition(format!(
                "input is not a ({}, {})-almost net: box {:?} holds {count} points",
                params.t_count, params.eps, dyadic_box.axes
            )))
        }
    }
    let n = params.n as usize;
    let m = key_width(params);
    let tail = m - n;
    let mut words: Vec<Vec<BitString>> = points
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .map(|c| {
                    let mut bits = c.bits()[..c.len().min(m)].to_vec();
                    bits.resize(m, false);
                    BitString::new(bits)
                })
                .collect()
        })
        .collect();

    for coord in 0..d {
        let mut classes: HashMap<BitString, Vec<usize>> = HashMap::new();
        for (idx, w) in words.iter().enumerate() {
            classes.entry(w[coord].prefix(n)).or_default().push(idx);
        }
        let mut classes: Vec<(BitString, Vec<usize>)> = classes.into_iter().collect();
        classes.sort();
        for (prefix, mut members) in classes {
            let distinct = members.iter().map(|&i| &words[i][coord]).unique().count();
            if distinct == members.len() {
                continue;
            }
            if tail < 64 && members.len() as u64 > 1u64 << tail {
                return Err(Error::TailOverflow {
                    coord,
                    prefix_len: n,
                    class_size: members.len(),
                    slots: 1usize << tail,
                });
            }
            members.sort_by(|&a, &b| {
                points[a]
                    .coord(coord)
                    .cmp(points[b].coord(coord))
                    .then_with(|| points[a].cmp(&points[b]))
                    .then(a.cmp(&b))
            });
            for (rank, &idx) in members.iter().enumerate() {
                words[idx][coord] = prefix.concat(&BitString::from_uint(rank as u64, tail));
            }
        }
    }

    let keys = words
        .into_iter()
        .map(PointKey::new)
        .collect::<Result<Vec<_>>>()?;
    BinaryAlmostNet::new(keys, params.clone(), d)
}

/// `floor(2^d (1+eps) T - 2 (1-eps) T + 2)`.
pub fn good_bound(t_count: &BigInt, eps: &BigRational, d: u32) -> BigInt {
    let t = BigRational::from_integer(t_count.clone());
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let pow = BigRational::from_integer(BigInt::one() << d as usize);
    (pow * (&one + eps) * &t - &two * (&one - eps) * &t + &two)
        .floor()
        .to_integer()
}

/// Budgets for [`verify_good`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodCaps {
    /// Largest admissible `d * m`.
    pub max_dm: usize,
    /// Largest `C(|class|, q+1)` examined by [`GoodStrategy::Subsets`].
    pub max_subsets_per_class: u64,
}

impl Default for GoodCaps {
    fn default() -> Self {
        GoodCaps {
            max_dm: 24,
            max_subsets_per_class: 10_000_000,
        }
    }
}

/// How each prefix class is searched for a violating `Z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoodStrategy {
    /// Sort the class by first component; a violating `Z` exists iff some
    /// stretch between consecutive candidate witnesses (ends included) holds
    /// `q + 1` keys.
    #[default]
    Sweep,
    /// Enumerate every `(q+1)`-subset of the class.
    Subsets,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoodVerdict {
    Pass {
        tuples_checked: u64,
    },
    /// Prefixes `(a^2, ..., a^d)` and a `(q+1)`-set `Z` with no witness.
    Violation {
        prefixes: Vec<BitString>,
        z: Vec<PointKey>,
    },
    /// Keys agreeing in a coordinate; goodness is not examined.
    NotDistinct {
        coord: usize,
        first: PointKey,
        second: PointKey,
    },
    CapExceeded {
        reason: String,
    },
}

impl GoodVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, GoodVerdict::Pass { .. })
    }
}

/// Every tuple of `parts` nonempty words of length at most `m`, by total
/// length and then lexicographically.
pub fn prefix_tuples(parts: usize, m: usize) -> Vec<Vec<BitString>> {
    let mut out = Vec::new();
    if parts == 0 {
        out.push(Vec::new());
        return out;
    }
    for total in parts..=parts * m {
        for lens in length_splits(total, parts, m) {
            let choices: Vec<Vec<BitString>> = lens
                .iter()
                .map(|&l| BitString::all_of_len(l).collect())
                .collect();
            for combo in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
                out.push(combo.into_iter().cloned().collect());
            }
        }
    }
    out
}

/// Length vectors with entries in `1..=m` summing to `total`, lexicographic.
fn length_splits(total: usize, parts: usize, m: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return if (1..=m).contains(&total) {
            vec![vec![total]]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..=m.min(total.saturating_sub(parts - 1)) {
        for mut rest in length_splits(total - first, parts - 1, m) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

enum ClassOutcome {
    Fine,
    Bad(Vec<usize>),
    Capped(String),
}

/// Keys of `class` (indices into `keys`) sorted by first component, with the
/// flag "is a candidate witness for `prefixes`".
fn sorted_class(keys: &[PointKey], prefixes: &[BitString]) -> (Vec<usize>, Vec<bool>) {
    let parents: Vec<BitString> = prefixes
        .iter()
        .map(|a| a.parent().expect("prefixes are nonempty"))
        .collect();
    let mut class: Vec<usize> = (0..keys.len())
        .filter(|&k| {
            parents
                .iter()
                .enumerate()
                .all(|(i, p)| p.is_prefix_of(keys[k].component(i + 1)))
        })
        .collect();
    class.sort_by(|&a, &b| keys[a].component(0).cmp(keys[b].component(0)));
    let witness = class
        .iter()
        .map(|&k| {
            prefixes
                .iter()
                .enumerate()
                .all(|(i, a)| a.is_prefix_of(keys[k].component(i + 1)))
        })
        .collect();
    (class, witness)
}

/// Longest run of the sorted class containing no candidate strictly inside,
/// as a range of class positions.
fn longest_unwitnessed(witness: &[bool]) -> (usize, usize) {
    let mut best = (0, 0);
    let mut start = 0;
    for (pos, &w) in witness.iter().enumerate() {
        if pos + 1 - start > best.1 - best.0 {
            best = (start, pos + 1);
        }
        if w {
            start = pos;
        }
    }
    best
}

fn check_class(
    keys: &[PointKey],
    prefixes: &[BitString],
    q: u64,
    strategy: GoodStrategy,
    caps: &GoodCaps,
) -> ClassOutcome {
    let (class, witness) = sorted_class(keys, prefixes);
    let need = q as usize + 1;
    if class.len() < need {
        return ClassOutcome::Fine;
    }
    match strategy {
        GoodStrategy::Sweep => {
            let (lo, hi) = longest_unwitnessed(&witness);
            if hi - lo >= need {
                ClassOutcome::Bad(class[lo..lo + need].to_vec())
            } else {
                ClassOutcome::Fine
            }
        }
        GoodStrategy::Subsets => {
            let required = binomial(class.len() as u64, need as u64);
            if required > caps.max_subsets_per_class as u128 {
                return ClassOutcome::Capped(format!(
                    "class of {} keys needs C({}, {need}) = {required} subsets (cap {})",
                    class.len(),
                    class.len(),
                    caps.max_subsets_per_class
                ));
            }
            let wpos: Vec<usize> = (0..class.len()).filter(|&p| witness[p]).collect();
            for z in (0..class.len()).combinations(need) {
                let (lo, hi) = (z[0], z[need - 1]);
                if !wpos.iter().any(|&w| lo < w && w < hi) {
                    return ClassOutcome::Bad(z.iter().map(|&p| class[p]).collect());
                }
            }
            ClassOutcome::Fine
        }
    }
}

/// Decides q-goodness exhaustively over prefix tuples.
pub fn verify_good(
    keys: &[PointKey],
    q: u64,
    strategy: GoodStrategy,
    caps: &GoodCaps,
) -> Result<GoodVerdict> {
    let Some(first) = keys.first() else {
        return Ok(GoodVerdict::Pass { tuples_checked: 0 });
    };
    let (d, m) = (first.dim(), first.width());
    check_key_shape(keys, d, m)?;
    if d == 0 {
        return Err(Error::Precondition(
            "keys need at least one component".into(),
        ));
    }
    if let Some((coord, a, b)) = first_collision(keys) {
        return Ok(GoodVerdict::NotDistinct {
            coord,
            first: keys[a].clone(),
            second: keys[b].clone(),
        });
    }
    if d * m > caps.max_dm {
        return Ok(GoodVerdict::CapExceeded {
            reason: format!("d*m = {} exceeds cap {}", d * m, caps.max_dm),
        });
    }
    let tuples = prefix_tuples(d - 1, m);
    let hit = tuples.par_iter().find_map_first(|prefixes| {
        match check_class(keys, prefixes, q, strategy, caps) {
            ClassOutcome::Fine => None,
            ClassOutcome::Bad(z) => Some(GoodVerdict::Violation {
                prefixes: prefixes.clone(),
                z: z.into_iter().map(|k| keys[k].clone()).collect(),
            }),
            ClassOutcome::Capped(reason) => Some(GoodVerdict::CapExceeded { reason }),
        }
    });
    Ok(hit.unwrap_or(GoodVerdict::Pass {
        tuples_checked: tuples.len() as u64,
    }))
}

/// Smallest `q` for which `keys` is q-good: the longest unwitnessed run over
/// all prefix tuples. `None` if the keys collide or exceed `caps.max_dm`.
pub fn minimal_good_q(keys: &[PointKey], caps: &GoodCaps) -> Result<Option<u64>> {
    let Some(first) = keys.first() else {
        return Ok(Some(0));
    };
    let (d, m) = (first.dim(), first.width());
    check_key_shape(keys, d, m)?;
    if first_collision(keys).is_some() || d * m > caps.max_dm {
        return Ok(None);
    }
    let worst = prefix_tuples(d - 1, m)
        .par_iter()
        .map(|prefixes| {
            let (_, witness) = sorted_class(keys, prefixes);
            let (lo, hi) = longest_unwitnessed(&witness);
            (hi - lo) as u64
        })
        .max()
        .unwrap_or(0);
    Ok(Some(worst))
}

/// `2^(d-1) q + 1`, the hole size excluded by a q-good embedding.
pub fn hole_free_size(q: &BigInt, d: u32) -> BigInt {
    assert!(d >= 1);
    (q << (d - 1) as usize) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{sequence_to_net, vdc_points};
    use num_traits::Zero;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn key(parts: &[&str]) -> PointKey {
        PointKey::new(parts.iter().map(|p| bs(p)).collect()).unwrap()
    }

    fn vdc_pipeline(n: u32) -> BinaryAlmostNet {
        let net = sequence_to_net(&vdc_points(n), 0, n).unwrap();
        let params = AlmostNetParams::new(1, BigRational::zero(), n).unwrap();
        to_binary_almost_net(&net, &params, 2).unwrap()
    }

    #[test]
    fn good_bound_examples() {
        let zero = BigRational::zero();
        assert_eq!(good_bound(&BigInt::one(), &zero, 2), BigInt::from(4));
        assert_eq!(good_bound(&BigInt::one(), &zero, 3), BigInt::from(8));
        assert_eq!(good_bound(&BigInt::from(2), &zero, 4), BigInt::from(30));
    }

    #[test]
    fn two_point_example() {
        let half = NetPoint::new(vec![bs("1"), bs("1")]);
        let origin = NetPoint::new(vec![bs("0"), bs("0")]);
        let params = AlmostNetParams::new(1, BigRational::zero(), 1).unwrap();
        let y = to_binary_almost_net(&[origin, half], &params, 2).unwrap();
        assert_eq!(y.m(), 2);
        assert_eq!(y.keys(), &[key(&["00", "00"]), key(&["10", "10"])]);
        assert_eq!(y.check_invariants(), None);
    }

    #[test]
    fn tail_fix_separates_repeated_values() {
        // T = 2, n = 0: two points with equal first coordinates.
        let a = NetPoint::new(vec![bs("01"), bs("00")]);
        let b = NetPoint::new(vec![bs("01"), bs("10")]);
        let params = AlmostNetParams::new(2, BigRational::zero(), 0).unwrap();
        let y = to_binary_almost_net(&[b, a], &params, 2).unwrap();
        assert_eq!(y.m(), 2);
        assert_eq!(first_collision(y.keys()), None);
        // sorted by full digits: a before b
        assert_eq!(y.keys()[1].component(0), &bs("00"));
        assert_eq!(y.keys()[0].component(0), &bs("01"));
        assert_eq!(y.check_invariants(), None);
    }

    #[test]
    fn vdc_pipeline_invariants() {
        let y = vdc_pipeline(3);
        assert_eq!(y.len(), 8);
        assert_eq!(y.m(), 4);
        assert_eq!(y.check_invariants(), None);
        assert_eq!(y.prefix_set(&[]).len(), 8);
        let full = y.keys()[5].component(0).clone();
        assert_eq!(y.prefix_set(&[full]), vec![&y.keys()[5]]);
    }

    #[test]
    fn prefix_tuple_order() {
        let t = prefix_tuples(1, 2);
        let s: Vec<String> = t.iter().map(|v| v[0].to_string()).collect();
        assert_eq!(s, ["0", "1", "00", "01", "10", "11"]);
        let t = prefix_tuples(2, 2);
        assert_eq!(t.len(), 36);
        assert_eq!(t[0], vec![bs("0"), bs("0")]);
        assert!(t.windows(2).all(|w| {
            let l = |v: &Vec<BitString>| v.iter().map(BitString::len).sum::<usize>();
            l(&w[0]) <= l(&w[1])
        }));
        assert_eq!(prefix_tuples(0, 3), vec![Vec::<BitString>::new()]);
    }

    #[test]
    fn vdc_pipeline_is_4_good_and_not_1_good() {
        let y = vdc_pipeline(3);
        let caps = GoodCaps::default();
        for strategy in [GoodStrategy::Sweep, GoodStrategy::Subsets] {
            assert!(verify_good(y.keys(), 4, strategy, &caps).unwrap().is_pass());
            assert!(matches!(
                verify_good(y.keys(), 1, strategy, &caps).unwrap(),
                GoodVerdict::Violation { .. }
            ));
        }
        let q = minimal_good_q(y.keys(), &caps).unwrap().unwrap();
        assert!((2..=4).contains(&q));
        assert!(verify_good(y.keys(), q, GoodStrategy::Subsets, &caps)
            .unwrap()
            .is_pass());
        assert!(!verify_good(y.keys(), q - 1, GoodStrategy::Subsets, &caps)
            .unwrap()
            .is_pass());
    }

    #[test]
    fn two_keys_are_not_1_good() {
        let keys = vec![key(&["00", "01"]), key(&["11", "00"])];
        let v = verify_good(&keys, 1, GoodStrategy::Sweep, &GoodCaps::default()).unwrap();
        match v {
            GoodVerdict::Violation { prefixes, z } => {
                assert_eq!(prefixes, vec![bs("0")]);
                assert_eq!(z.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn collisions_reported_first() {
        let keys = vec![key(&["00", "01"]), key(&["00", "10"])];
        assert!(matches!(
            verify_good(&keys, 5, GoodStrategy::Sweep, &GoodCaps::default()).unwrap(),
            GoodVerdict::NotDistinct { coord: 0, .. }
        ));
    }

    #[test]
    fn caps_reported() {
        let y = vdc_pipeline(3);
        let caps = GoodCaps {
            max_dm: 4,
            ..GoodCaps::default()
        };
        assert!(matches!(
            verify_good(y.keys(), 4, GoodStrategy::Sweep, &caps).unwrap(),
            GoodVerdict::CapExceeded { .. }
        ));
    }

    #[test]
    fn unwitnessed_runs() {
        assert_eq!(longest_unwitnessed(&[false, false, false]), (0, 3));
        assert_eq!(longest_unwitnessed(&[false, true, false]), (0, 2));
        assert_eq!(longest_unwitnessed(&[false, false, true, false]), (0, 3));
        assert_eq!(longest_unwitnessed(&[true]), (0, 1));
    }
}
