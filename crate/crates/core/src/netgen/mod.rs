//! Base-2 digital nets and sequences.
//!
//! Points carry explicit binary digit arrays per coordinate, so truncation
//! `[x]_m` never depends on how a real number happens to be expanded.

mod sobol;
mod verify;

pub use sobol::{sobol_points, sobol_prefix, SOBOL_MAX_DIM};
pub(crate) use verify::check_level;
pub use verify::{
    compositions, dyadic_boxes, minimal_t, verify_almost_net, verify_net, DyadicBox, NetVerdict,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// A point of `[0,1)^s`; coordinate `i` is `sum_j y_j 2^-j` over its digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetPoint {
    coords: Vec<BitString>,
}

impl NetPoint {
    pub fn new(coords: Vec<BitString>) -> Self {
        NetPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, i: usize) -> &BitString {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[BitString] {
        &self.coords
    }

    /// Fewest digits stored in any coordinate.
    pub fn min_digits(&self) -> usize {
        self.coords.iter().map(BitString::len).min().unwrap_or(0)
    }

    /// Exact value of coordinate `i` as a dyadic rational.
    pub fn value(&self, i: usize) -> BigRational {
        let digits = self.coords[i].bits();
        let mut num = BigInt::zero();
        for &b in digits {
            num = (num << 1usize) + if b { 1 } else { 0 };
        }
        BigRational::new(num, BigInt::one() << digits.len())
    }

    /// First `len` digits of coordinate `i` as an integer (`floor(y * 2^len)`).
    pub(crate) fn prefix_uint(&self, i: usize, len: usize) -> u64 {
        let bits = self.coords[i].bits();
        bits[..len]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }
}

/// Parameters of a `(t, m, s)`-net.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetParams {
    pub t: u32,
    pub m: u32,
    pub s: usize,
}

impl NetParams {
    pub fn new(t: u32, m: u32, s: usize) -> Result<Self> {
        if t > m {
            return Err(Error::Precondition(format!("t = {t} exceeds m = {m}")));
        }
        if s == 0 {
            return Err(Error::Precondition("dimension s must be positive".into()));
        }
        Ok(NetParams { t, m, s })
    }
}

/// Parameters of a `(T, eps)`-almost net of size `2^n T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostNetParams {
    pub t_count: u64,
    pub eps: BigRational,
    pub n: u32,
}

impl AlmostNetParams {
    pub fn new(t_count: u64, eps: BigRational, n: u32) -> Result<Self> {
        if t_count == 0 {
            return Err(Error::Precondition("T must be positive".into()));
        }
        if eps < BigRational::zero() || eps >= BigRational::one() {
            return Err(Error::Precondition(format!("eps = {eps} outside [0, 1)")));
        }
        if n >= 63 || (t_count as u128) << n > u64::MAX as u128 {
            return Err(Error::Precondition("2^n T does not fit in 64 bits".into()));
        }
        Ok(AlmostNetParams { t_count, eps, n })
    }

    /// The parameters under which a `(t, m, s)`-net is an almost net.
    pub fn from_net(t: u32, m: u32) -> Result<Self> {
        Self::new(1u64 << t, BigRational::zero(), m - t)
    }

    pub fn size(&self) -> u64 {
        self.t_count << self.n
    }

    /// Inclusive integer bounds `[ceil((1-eps)T), floor((1+eps)T)]`.
    pub fn count_bounds(&self) -> (u64, u64) {
        let t = BigRational::from_integer(BigInt::from(self.t_count));
        let one = BigRational::one();
        let lo = ((&one - &self.eps) * &t).ceil().to_integer();
        let hi = ((&one + &self.eps) * &t).floor().to_integer();
        (
            u64::try_from(lo).expect("lower bound fits u64"),
            u64::try_from(hi).expect("upper bound fits u64"),
        )
    }
}

/// The van der Corput points `i / 2^m` bit-reversed, `0 <= i < 2^m`.
pub fn vdc_points(m: u32) -> Vec<NetPoint> {
    let m = m as usize;
    assert!(m < 63, "m too large");
    (0..1u64 << m)
        .map(|i| {
            let digits = (0..m).map(|j| (i >> j) & 1 == 1).collect();
            NetPoint::new(vec![BitString::new(digits)])
        })
        .collect()
}

/// Coordinatewise truncation `[x]_m`.
pub fn truncate(p: &NetPoint, m: usize) -> Result<NetPoint> {
    p.coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.len() < m {
                Err(Error::InsufficientDigits {
                    index: 0,
                    coord: i,
                    have: c.len(),
                    need: m,
                })
            } else {
                Ok(c.prefix(m))
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(NetPoint::new)
}

/// Lifts a `(t, s)`-sequence prefix to the `(s+1)`-dimensional net
/// `{([x_n]_m, n 2^-m) : 0 <= n < 2^m}`.
pub fn sequence_to_net(seq: &[NetPoint], t: u32, m: u32) -> Result<Vec<NetPoint>> {
    if m <= t {
        return Err(Error::Precondition(format!(
            "sequence lifting needs m > t (m = {m}, t = {t})"
        )));
    }
    let count = 1usize << m;
    if seq.len() < count {
        return Err(Error::SizeMismatch {
            expected: format!("at least {count}"),
            found: seq.len(),
        });
    }
    seq[..count]
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let mut p = truncate(x, m as usize).map_err(|e| match e {
                Error::InsufficientDigits {
                    coord, have, need, ..
                } => Error::InsufficientDigits {
                    index: n,
                    coord,
                    have,
                    need,
                },
                e => e,
            })?;
            p.coords.push(BitString::from_uint(n as u64, m as usize));
            Ok(p)
        })
        .collect()
}
