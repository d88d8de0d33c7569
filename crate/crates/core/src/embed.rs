//! Horton-like embedding `P(a) = sum a^i_j t_(i,j) e_i` with a geometric
//! scale schedule, certification by the hole-freeness oracle, and a seeded
//! perturbation into general position.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::PointKey;
use crate::error::{Error, Result};
use crate::geom::{GeneralPosition, PointSet, RationalPoint};
use crate::holes::{decide_hole_free, Caps, HoleFreeMethod, HoleFreeVerdict};

/// Exponent of `B` as a function of the rank `r(i,j) = i m + (m - j)`
/// (0-based `i`, `j`; ranks run from 1 to `d m`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    /// `t = B^r`. Axis `i+1` repeats axis `i` scaled by `B^m`, which leaves
    /// exact collinearities that no choice of `B` removes.
    Geometric,
    /// `t = B^(r(r+1)/2)`: successive ratios `B^(r+1)` keep growing.
    #[default]
    Triangular,
}

impl ScheduleKind {
    pub fn exponent(self, rank: usize) -> usize {
        match self {
            ScheduleKind::Geometric => rank,
            ScheduleKind::Triangular => rank * (rank + 1) / 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleSchedule {
    kind: ScheduleKind,
    d: usize,
    m: usize,
    base: BigInt,
    t: Vec<Vec<BigInt>>,
}

/// `2^(2m)`.
pub fn default_base(m: usize) -> BigInt {
    BigInt::one() << (2 * m)
}

/// Geometric schedule `t_(i,j) = B^r(i,j)`.
pub fn build_schedule(d: usize, m: usize, base: BigInt) -> Result<ScaleSchedule> {
    build_schedule_kind(ScheduleKind::Geometric, d, m, base)
}

pub fn build_schedule_kind(
    kind: ScheduleKind,
    d: usize,
    m: usize,
    base: BigInt,
) -> Result<ScaleSchedule> {
    if base < BigInt::from(2) || d == 0 || m == 0 {
        return Err(Error::Precondition(format!(
            "schedule needs B >= 2, d >= 1, m >= 1 (got B = {base}, d = {d}, m = {m})"
        )));
    }
    let t = (0..d)
        .map(|i| {
            (0..m)
                .map(|j| num_traits::pow(base.clone(), kind.exponent(ScaleSchedule::rank(m, i, j))))
                .collect()
        })
        .collect();
    Ok(ScaleSchedule {
        kind,
        d,
        m,
        base,
        t,
    })
}

impl ScaleSchedule {
    fn rank(m: usize, i: usize, j: usize) -> usize {
        i * m + (m - j)
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> &BigInt {
        &self.base
    }

    /// Weight of digit `j` on axis `i` (both 0-based).
    pub fn t(&self, i: usize, j: usize) -> &BigInt {
        &self.t[i][j]
    }

    /// All weights sorted by rank, smallest first.
    pub fn by_rank(&self) -> Vec<&BigInt> {
        let mut out = vec![&self.t[0][0]; self.d * self.m];
        for i in 0..self.d {
            for j in 0..self.m {
                out[Self::rank(self.m, i, j) - 1] = &self.t[i][j];
            }
        }
        out
    }

    /// Every weight at least doubles its predecessor in rank order.
    pub fn is_doubling_chain(&self) -> bool {
        let ranked = self.by_rank();
        ranked[0].is_positive() && ranked.windows(2).all(|w| w[1] >= &(w[0] * 2u32))
    }

    /// The same shape with `B` replaced by `B^2`.
    pub fn squared(&self) -> ScaleSchedule {
        build_schedule_kind(self.kind, self.d, self.m, &self.base * &self.base).expect("B^2 >= 4")
    }
}

/// An embedded key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub coords: Vec<BigInt>,
    pub key: PointKey,
}

pub fn embed_key(key: &PointKey, sched: &ScaleSchedule) -> Result<LatticePoint> {
    if key.dim() != sched.d || key.width() != sched.m {
        return Err(Error::DimensionMismatch(format!(
            "key has {} components of length {}, schedule is {} x {}",
            key.dim(),
            key.width(),
            sched.d,
            sched.m
        )));
    }
    let coords = (0..sched.d)
        .map(|i| {
            key.component(i)
                .bits()
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(j, _)| sched.t(i, j))
                .sum()
        })
        .collect();
    Ok(LatticePoint {
        coords,
        key: key.clone(),
    })
}

pub fn embed(keys: &[PointKey], sched: &ScaleSchedule) -> Result<Vec<LatticePoint>> {
    keys.par_iter().map(|k| embed_key(k, sched)).collect()
}

pub fn to_point_set(points: &[LatticePoint], d: usize) -> PointSet {
    PointSet::from_integers(d, points.iter().map(|p| p.coords.clone()).collect())
        .expect("lattice points share the schedule dimension")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified {
        ell: usize,
        method: HoleFreeMethod,
        predicate_calls: u64,
    },
    /// An `l`-subset with nothing inside; retry with `B' = B^2`.
    Escalate {
        next_base: BigInt,
        subset: Vec<usize>,
    },
    CapExceeded {
        subsets_required: u128,
    },
}

/// Runs the oracle for `(2^(d-1) q + 1)`-hole-freeness of `P(Y)`.
pub fn certify_embedding(
    keys: &[PointKey],
    q: u64,
    sched: &ScaleSchedule,
    caps: &Caps,
) -> Result<Certification> {
    let ell = ((q as u128) << (sched.d - 1)) + 1;
    let ell = usize::try_from(ell)
        .map_err(|_| Error::Precondition(format!("hole size {ell} is too large")))?;
    let points = embed(keys, sched)?;
    let set = to_point_set(&points, sched.d);
    Ok(match decide_hole_free(&set, ell, caps) {
        (
            HoleFreeVerdict::Pass {
                predicate_calls, ..
            },
            method,
        ) => Certification::Certified {
            ell,
            method,
            predicate_calls,
        },
        (HoleFreeVerdict::Violation { subset, .. }, _) => Certification::Escalate {
            next_base: sched.base() * sched.base(),
            subset,
        },
        (HoleFreeVerdict::CapExceeded { subsets_required }, _) => {
            Certification::CapExceeded { subsets_required }
        }
    })
}

/// One certification attempt per schedule, squaring `B` after each
/// violation, at most `max_rounds` attempts.
pub fn certify_with_escalation(
    keys: &[PointKey],
    q: u64,
    sched: ScaleSchedule,
    caps: &Caps,
    max_rounds: usize,
) -> Result<(ScaleSchedule, Vec<(BigInt, Certification)>)> {
    let mut rounds = Vec::new();
    let mut sched = sched;
    for round in 0..max_rounds {
        let outcome = certify_embedding(keys, q, &sched, caps)?;
        let escalate = matches!(outcome, Certification::Escalate { .. });
        rounds.push((sched.base().clone(), outcome));
        if !escalate || round + 1 == max_rounds {
            break;
        }
        sched = sched.squared();
    }
    Ok((sched, rounds))
}

/// Smallest positive gap between distinct coordinate values, over all axes.
pub fn min_coordinate_gap(a: &PointSet) -> Option<BigInt> {
    (0..a.dim())
        .filter_map(|axis| {
            let mut vals: Vec<&BigInt> = (0..a.len()).map(|i| &a.point(i)[axis]).collect();
            vals.sort();
            vals.dedup();
            vals.windows(2).map(|w| w[1] - w[0]).min()
        })
        .min()
}

#[derive(Clone, Debug)]
pub struct PerturbOptions {
    /// Total attempts across reseeds and shrinks.
    pub max_attempts: usize,
    /// Re-verify `l`-hole-freeness after each draw, shrinking on failure.
    pub recheck: Option<(usize, Caps)>,
}

impl Default for PerturbOptions {
    fn default() -> Self {
        PerturbOptions {
            max_attempts: 32,
            recheck: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbAttempt {
    pub sub_seed: u64,
    pub shrink: u32,
    pub general_position: bool,
    pub hole_free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbReport {
    pub seed: u64,
    pub min_gap: BigInt,
    /// `g / (4 n^2)`; every offset is strictly smaller in absolute value.
    pub bound: BigRational,
    pub max_offset: BigRational,
    pub attempts: Vec<PerturbAttempt>,
    pub hole_free_method: Option<HoleFreeMethod>,
}

const OFFSET_BITS: u32 = 31;

fn offset(sub_seed: u64, index: usize, axis: usize, scale: &BigRational) -> BigRational {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&sub_seed.to_le_bytes());
    key[8..16].copy_from_slice(&(index as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(axis as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    let limit = (1i64 << OFFSET_BITS) - 1;
    let r: i64 = rng.gen_range(-limit..=limit);
    scale * BigRational::from_integer(BigInt::from(r))
}

/// Adds seeded rational offsets of magnitude below `g / (4 n^2)`, where `g`
/// is the smallest nonzero coordinate gap, redrawing until the result is in
/// general position. With `recheck`, a draw that loses hole-freeness is
/// replaced by one at half the magnitude.
pub fn perturb_to_general_position(
    a: &PointSet,
    seed: u64,
    opts: &PerturbOptions,
) -> Result<(Vec<RationalPoint>, PerturbReport)> {
    let n = a.len();
    let distinct: std::collections::HashSet<&[BigInt]> = (0..n).map(|i| a.point(i)).collect();
    if distinct.len() != n {
        return Err(Error::Precondition("points must be distinct".into()));
    }
    let min_gap = min_coordinate_gap(a).unwrap_or_else(BigInt::one);
    let bound = BigRational::new(min_gap.clone(), BigInt::from(4 * n.max(1) * n.max(1)));
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = Vec::new();
    let mut shrink = 0u32;
    let mut method = None;
    for _ in 0..opts.max_attempts {
        let sub_seed = master.next_u64();
        let denom = BigInt::one() << (OFFSET_BITS + shrink) as usize;
        let scale = &bound / BigRational::from_integer(denom);
        let mut max_offset = BigRational::zero();
        let points: Vec<RationalPoint> = (0..n)
            .map(|i| {
                RationalPoint::new(
                    a.point(i)
                        .iter()
                        .enumerate()
                        .map(|(axis, x)| {
                            let delta = offset(sub_seed, i, axis, &scale);
                            if delta.abs() > max_offset {
                                max_offset = delta.abs();
                            }
                            BigRational::from_integer(x.clone()) + delta
                        })
                        .collect(),
                )
            })
            .collect();
        let frame = PointSet::from_rationals(&points)?;
        let gp = frame.general_position() == GeneralPosition::Pass;
        let mut attempt = PerturbAttempt {
            sub_seed,
            shrink,
            general_position: gp,
            hole_free: None,
        };
        if !gp {
            attempts.push(attempt);
            continue;
        }
        if let Some((ell, caps)) = &opts.recheck {
            let (verdict, how) = decide_hole_free(&frame, *ell, caps);
            method = Some(how);
            match verdict {
                HoleFreeVerdict::Pass { .. } => attempt.hole_free = Some(true),
                HoleFreeVerdict::Violation { .. } => {
                    attempt.hole_free = Some(false);
                    attempts.push(attempt);
                    shrink += 1;
                    continue;
                }
                HoleFreeVerdict::CapExceeded { .. } => {}
            }
        }
        attempts.push(attempt);
        return Ok((
            points,
            PerturbReport {
                seed,
                min_gap,
                bound,
                max_offset,
                attempts,
                hole_free_method: method,
            },
        ));
    }
    Err(Error::PerturbationExhausted {
        attempts: attempts.len(),
        seeds: attempts.iter().map(|t| t.sub_seed).collect(),
    })
}

/// Least common denominator of a rational point list (for reporting).
pub fn common_denominator(points: &[RationalPoint]) -> BigInt {
    points
        .iter()
        .flat_map(|p| p.coords().iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::geom::orientation;
    use crate::geom::Orientation;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn schedule_examples() {
        let s = build_schedule(1, 2, BigInt::from(2)).unwrap();
        assert_eq!(s.t(0, 1), &BigInt::from(2));
        assert_eq!(s.t(0, 0), &BigInt::from(4));
        let s = build_schedule(2, 2, BigInt::from(16)).unwrap();
        let ranked: Vec<BigInt> = s.by_rank().into_iter().cloned().collect();
        assert_eq!(ranked, [16, 256, 4096, 65536].map(BigInt::from).to_vec());
        assert!(s.is_doubling_chain());
        assert!(build_schedule(2, 2, BigInt::one()).is_err());
        let s = build_schedule_kind(ScheduleKind::Triangular, 2, 2, BigInt::from(2)).unwrap();
        let ranked: Vec<BigInt> = s.by_rank().into_iter().cloned().collect();
        assert_eq!(ranked, [2, 8, 64, 1024].map(BigInt::from).to_vec());
        assert!(s.is_doubling_chain());
        assert_eq!(s.squared().t(0, 1), &BigInt::from(4));
    }

    #[test]
    fn one_dimensional_embedding_is_binary_value_times_two() {
        let s = build_schedule(1, 2, BigInt::from(2)).unwrap();
        let xs: Vec<BigInt> = ["00", "01", "10", "11"]
            .iter()
            .map(|w| {
                embed_key(&PointKey::new(vec![bs(w)]).unwrap(), &s)
                    .unwrap()
                    .coords[0]
                    .clone()
            })
            .collect();
        assert_eq!(xs, [0, 2, 4, 6].map(BigInt::from).to_vec());
    }

    #[test]
    fn dimension_mismatch() {
        let s = build_schedule(2, 3, BigInt::from(4)).unwrap();
        let k = PointKey::new(vec![bs("01"), bs("10")]).unwrap();
        assert!(embed_key(&k, &s).is_err());
    }

    #[test]
    fn collinear_triple_is_broken() {
        let a = PointSet::from_integers(
            2,
            vec![
                vec![0.into(), 0.into()],
                vec![1.into(), 1.into()],
                vec![2.into(), 2.into()],
            ],
        )
        .unwrap();
        let (pts, report) = perturb_to_general_position(&a, 7, &PerturbOptions::default()).unwrap();
        assert_ne!(orientation(&pts), Orientation::Degenerate);
        assert!(report.max_offset < report.bound);
        assert_eq!(report.bound, BigRational::new(1.into(), 36.into()));
        let again = perturb_to_general_position(&a, 7, &PerturbOptions::default()).unwrap();
        assert_eq!(again.0, pts);
    }

    #[test]
    fn duplicates_rejected() {
        let a = PointSet::from_integers(1, vec![vec![1.into()], vec![1.into()]]).unwrap();
        assert!(perturb_to_general_position(&a, 0, &PerturbOptions::default()).is_err());
    }

    /// A 3-good set whose embedding at `B = 2` has an empty 7-gon; one
    /// squaring fixes it.
    #[test]
    fn escalation_squares_the_base() {
        let keys: Vec<PointKey> = [
            "100:110", "001:100", "011:011", "000:111", "101:010", "111:001", "110:101",
        ]
        .iter()
        .map(|s| {
            let (x, y) = s.split_once(':').unwrap();
            PointKey::new(vec![bs(x), bs(y)]).unwrap()
        })
        .collect();
        let caps = Caps::default();
        let good = crate::goodset::verify_good(
            &keys,
            3,
            crate::goodset::GoodStrategy::Subsets,
            &Default::default(),
        )
        .unwrap();
        assert!(good.is_pass());
        let sched = build_schedule(2, 3, BigInt::from(2)).unwrap();
        let (fin, rounds) = certify_with_escalation(&keys, 3, sched, &caps, 4).unwrap();
        assert_eq!(rounds.len(), 2);
        assert!(
            matches!(&rounds[0].1, Certification::Escalate { next_base, .. } if *next_base == BigInt::from(4))
        );
        assert!(matches!(
            rounds[1].1,
            Certification::Certified { ell: 7, .. }
        ));
        assert_eq!(fin.base(), &BigInt::from(4));
    }
}
