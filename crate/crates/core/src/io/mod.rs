//! On-disk formats. Every number is written as an exact string: bit strings
//! for net digits and keys, decimal integers or `p/q` for coordinates.

pub mod decimal;

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bits::{BitString, PointKey};
use crate::embed::{LatticePoint, ScaleSchedule, ScheduleKind};
use crate::error::{Error, Result};
use crate::geom::{format_rational, parse_rational, PointSet, RationalPoint};
use crate::goodset::BinaryAlmostNet;
use crate::netgen::{AlmostNetParams, NetPoint};

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::parse(what, e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

fn parse_bits(s: &str, field: String) -> Result<BitString> {
    s.parse::<BitString>()
        .map_err(|e| Error::parse(field, e.to_string()))
}

/// `{ s, m, digits_per_coord, points: [[bitstring; s]] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetFile {
    pub s: usize,
    pub m: u32,
    pub digits_per_coord: usize,
    pub points: Vec<Vec<String>>,
}

impl NetFile {
    pub fn new(s: usize, m: u32, points: &[NetPoint]) -> Self {
        let digits_per_coord = points.iter().map(NetPoint::min_digits).min().unwrap_or(0);
        NetFile {
            s,
            m,
            digits_per_coord,
            points: points
                .iter()
                .map(|p| p.coords().iter().map(BitString::to_string).collect())
                .collect(),
        }
    }

    pub fn to_points(&self) -> Result<Vec<NetPoint>> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.s {
                    return Err(Error::parse(
                        format!("points[{i}]"),
                        format!("{} coordinates, expected s = {}", row.len(), self.s),
                    ));
                }
                row.iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let b = parse_bits(c, format!("points[{i}][{j}]"))?;
                        if b.len() < self.digits_per_coord {
                            return Err(Error::parse(
                                format!("points[{i}][{j}]"),
                                format!(
                                    "{} digits, expected digits_per_coord = {}",
                                    b.len(),
                                    self.digits_per_coord
                                ),
                            ));
                        }
                        Ok(b)
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(NetPoint::new)
            })
            .collect()
    }
}

/// `{ d, m, T, eps: "p/q", n, keys: [[bitstring; d]] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodFile {
    pub d: usize,
    pub m: usize,
    #[serde(rename = "T")]
    pub t_count: u64,
    pub eps: String,
    pub n: u32,
    pub keys: Vec<Vec<String>>,
}

fn keys_to_strings(keys: &[PointKey]) -> Vec<Vec<String>> {
    keys.iter()
        .map(|k| k.components().iter().map(BitString::to_string).collect())
        .collect()
}

fn parse_keys(rows: &[Vec<String>], d: usize, m: usize, field: &str) -> Result<Vec<PointKey>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != d {
                return Err(Error::parse(
                    format!("{field}[{i}]"),
                    format!("{} components, expected d = {d}", row.len()),
                ));
            }
            let comps = row
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let b = parse_bits(c, format!("{field}[{i}][{j}]"))?;
                    if b.len() != m {
                        return Err(Error::parse(
                            format!("{field}[{i}][{j}]"),
                            format!("length {}, expected m = {m}", b.len()),
                        ));
                    }
                    Ok(b)
                })
                .collect::<Result<Vec<_>>>()?;
            PointKey::new(comps)
        })
        .collect()
}

impl GoodFile {
    pub fn new(y: &BinaryAlmostNet) -> Self {
        let p = y.params();
        GoodFile {
            d: y.d(),
            m: y.m(),
            t_count: p.t_count,
            eps: format_rational(&p.eps),
            n: p.n,
            keys: keys_to_strings(y.keys()),
        }
    }

    pub fn params(&self) -> Result<AlmostNetParams> {
        let eps = parse_rational(&self.eps).map_err(|e| Error::parse("eps", e.to_string()))?;
        AlmostNetParams::new(self.t_count, eps, self.n)
    }

    /// The keys alone, checked against `d` and `m`.
    pub fn keys(&self) -> Result<Vec<PointKey>> {
        parse_keys(&self.keys, self.d, self.m, "keys")
    }

    pub fn to_binary_almost_net(&self) -> Result<BinaryAlmostNet> {
        BinaryAlmostNet::new(self.keys()?, self.params()?, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleInfo {
    #[serde(rename = "B")]
    pub base: String,
    pub m: usize,
    #[serde(default = "geometric")]
    pub kind: ScheduleKind,
}

fn geometric() -> ScheduleKind {
    ScheduleKind::Geometric
}

/// `{ d, coords: [[string; d]], schedule?: { B, m, kind }, source_keys? }`.
/// Coordinates are decimal integers or `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFile {
    pub d: usize,
    pub coords: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_keys: Option<Vec<Vec<String>>>,
}

impl PointFile {
    pub fn from_lattice(points: &[LatticePoint], sched: &ScaleSchedule) -> Self {
        PointFile {
            d: sched.d(),
            coords: points
                .iter()
                .map(|p| p.coords.iter().map(BigInt::to_string).collect())
                .collect(),
            schedule: Some(ScheduleInfo {
                base: sched.base().to_string(),
                m: sched.m(),
                kind: sched.kind(),
            }),
            source_keys: Some(
                points
                    .iter()
                    .map(|p| {
                        p.key
                            .components()
                            .iter()
                            .map(BitString::to_string)
                            .collect()
                    })
                    .collect(),
            ),
        }
    }

    pub fn from_rationals(d: usize, points: &[RationalPoint]) -> Self {
        PointFile {
            d,
            coords: points
                .iter()
                .map(|p| p.coords().iter().map(format_rational).collect())
                .collect(),
            schedule: None,
            source_keys: None,
        }
    }

    pub fn from_point_set(a: &PointSet) -> Self {
        PointFile {
            d: a.dim(),
            coords: (0..a.len())
                .map(|i| a.point(i).iter().map(BigInt::to_string).collect())
                .collect(),
            schedule: None,
            source_keys: None,
        }
    }

    pub fn rationals(&self) -> Result<Vec<RationalPoint>> {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.d {
                    return Err(Error::parse(
                        format!("coords[{i}]"),
                        format!("{} entries, expected d = {}", row.len(), self.d),
                    ));
                }
                row.iter()
                    .enumerate()
                    .map(|(j, c)| {
                        parse_rational(c)
                            .map_err(|e| Error::parse(format!("coords[{i}][{j}]"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(RationalPoint::new)
            })
            .collect()
    }

    /// All points scaled into one integer frame.
    pub fn point_set(&self) -> Result<PointSet> {
        let pts = self.rationals()?;
        if pts.is_empty() {
            return PointSet::from_integers(self.d, Vec::new());
        }
        PointSet::from_rationals(&pts)
    }

    pub fn source_keys(&self) -> Result<Option<Vec<PointKey>>> {
        let (Some(rows), Some(s)) = (&self.source_keys, &self.schedule) else {
            return Ok(None);
        };
        parse_keys(rows, self.d, s.m, "source_keys").map(Some)
    }

    pub fn schedule_base(&self) -> Result<Option<BigInt>> {
        self.schedule
            .as_ref()
            .map(|s| {
                s.base
                    .parse::<BigInt>()
                    .map_err(|e| Error::parse("schedule.B", e.to_string()))
            })
            .transpose()
    }

    /// `x1,...,xd` header, one row per point.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = (1..=self.d).map(|i| format!("x{i}")).collect();
        let mut out = header.join(",");
        out.push('\n');
        for row in &self.coords {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
