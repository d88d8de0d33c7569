use super::NetPoint;
use crate::bits::BitString;
use crate::error::{Error, Result};

/// Primitive-polynomial initialisation for coordinates 2..=10 as
/// `(a, m_1..m_deg)`, taken from the Joe–Kuo `new-joe-kuo-6.21201` table.
/// Coordinate 1 is the van der Corput sequence.
const DIRECTIONS: [(u32, &[u64]); 9] = [
    (0, &[1]),
    (1, &[1, 3]),
    (1, &[1, 3, 1]),
    (2, &[1, 1, 1]),
    (1, &[1, 1, 3, 3]),
    (4, &[1, 3, 5, 13]),
    (2, &[1, 1, 5, 5, 17]),
    (4, &[1, 1, 5, 5, 5]),
    (7, &[1, 1, 7, 11, 19]),
];

pub const SOBOL_MAX_DIM: usize = DIRECTIONS.len() + 1;

const WORD: usize = 64;

/// Direction words `v_k` with the binary point at bit 63.
fn direction_words(coord: usize, count: usize) -> Vec<u64> {
    if coord == 0 {
        return (0..count).map(|k| 1u64 << (WORD - 1 - k)).collect();
    }
    let (a, init) = DIRECTIONS[coord - 1];
    let deg = init.len();
    let mut v = vec![0u64; count.max(deg)];
    for (k, &mk) in init.iter().enumerate() {
        v[k] = mk << (WORD - 1 - k);
    }
    for i in deg..count {
        let j = i - deg;
        let mut w = v[j] ^ (v[j] >> deg);
        for k in 0..deg - 1 {
            if (a >> k) & 1 == 1 {
                w ^= v[j + 1 + k];
            }
        }
        v[i] = w;
    }
    v.truncate(count);
    v
}

/// The first `count` points of the `s`-dimensional Sobol' sequence in
/// natural (non-Gray) index order, each coordinate with `digits` digits.
pub fn sobol_prefix(s: usize, count: usize, digits: usize) -> Result<Vec<NetPoint>> {
    if s == 0 || s > SOBOL_MAX_DIM {
        return Err(Error::UnsupportedDimension {
            s,
            max: SOBOL_MAX_DIM,
        });
    }
    if digits > WORD {
        return Err(Error::Precondition(format!(
            "at most {WORD} digits per coordinate"
        )));
    }
    let index_bits = (usize::BITS - count.saturating_sub(1).leading_zeros()) as usize;
    if index_bits >= WORD {
        return Err(Error::Precondition("sequence prefix too long".into()));
    }
    let words: Vec<Vec<u64>> = (0..s).map(|c| direction_words(c, index_bits)).collect();
    Ok((0..count)
        .map(|i| {
            let coords = words
                .iter()
                .map(|v| {
                    let x = v
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| (i >> k) & 1 == 1)
                        .fold(0u64, |acc, (_, w)| acc ^ w);
                    let bits = (0..digits)
                        .map(|j| (x >> (WORD - 1 - j)) & 1 == 1)
                        .collect();
                    BitString::new(bits)
                })
                .collect();
            NetPoint::new(coords)
        })
        .collect())
}

/// The first `2^m` Sobol' points with `m` digits per coordinate.
pub fn sobol_points(s: usize, m: u32) -> Result<Vec<NetPoint>> {
    if m >= 63 {
        return Err(Error::Precondition("m too large".into()));
    }
    sobol_prefix(s, 1usize << m, m as usize)
}
