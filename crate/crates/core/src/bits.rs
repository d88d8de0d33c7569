//! Finite binary words and d-tuples of them.
//!
//! A [`BitString`] is compared lexicographically with `0 < 1`; on words of
//! equal length this is the order of the integers they spell in binary.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn empty() -> Self {
        BitString(Vec::new())
    }

    /// The `len`-bit big-endian binary representation of `value`.
    pub fn from_uint(value: u64, len: usize) -> Self {
        BitString(
            (0..len)
                .map(|j| (value >> (len - 1 - j)) & 1 == 1)
                .collect(),
        )
    }

    /// Reads the word as an unsigned integer; requires `len() <= 64`.
    pub fn to_uint(&self) -> u64 {
        assert!(self.0.len() <= 64, "bit string too long for u64");
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, j: usize) -> Option<bool> {
        self.0.get(j).copied()
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.0.len() <= other.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Drops the last bit; `None` on the empty word.
    pub fn parent(&self) -> Option<BitString> {
        if self.0.is_empty() {
            None
        } else {
            Some(BitString(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn prefix(&self, len: usize) -> BitString {
        BitString(self.0[..len].to_vec())
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    pub fn longest_common_prefix<'a, I>(words: I) -> BitString
    where
        I: IntoIterator<Item = &'a BitString>,
    {
        let mut iter = words.into_iter();
        let Some(first) = iter.next() else {
            return BitString::empty();
        };
        let mut len = first.len();
        for w in iter {
            len = len.min(w.len());
            len = (0..len).find(|&j| w.0[j] != first.0[j]).unwrap_or(len);
        }
        first.prefix(len)
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64);
        (0..1u64 << len).map(move |v| BitString::from_uint(v, len))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(
                    "bitstring",
                    format!("unexpected character {other:?} in {s:?}"),
                )),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

/// A combinatorial address `(a^1, ..., a^d)`: one bit string per axis, all of
/// the same length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PointKey(Vec<BitString>);

impl PointKey {
    pub fn new(components: Vec<BitString>) -> Result<Self, Error> {
        if let Some(first) = components.first() {
            if components.iter().any(|c| c.len() != first.len()) {
                return Err(Error::DimensionMismatch(
                    "point key components must share one length".into(),
                ));
            }
        }
        Ok(PointKey(components))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Common component length `m`.
    pub fn width(&self) -> usize {
        self.0.first().map_or(0, BitString::len)
    }

    pub fn component(&self, i: usize) -> &BitString {
        &self.0[i]
    }

    pub fn components(&self) -> &[BitString] {
        &self.0
    }

    /// True when every supplied prefix is a prefix of the matching component.
    pub fn matches(&self, prefixes: &[BitString]) -> bool {
        prefixes.iter().zip(&self.0).all(|(a, y)| a.is_prefix_of(y))
    }
}
