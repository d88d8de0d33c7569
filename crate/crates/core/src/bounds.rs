//! Closed-form upper bounds on `h(d)`, evaluated in exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Published value for `d = 5`; the net formula with `t = 1` gives 992.
pub const PUBLISHED_H5: u64 = 988;
/// Valtr's special-case bound for `d = 3`.
pub const VALTR_H3: u64 = 22;

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// `2^d (2^(t+d-1) - 2^t + 1)`: no holes larger than this in the set built
/// from a `(t, m, d)`-net.
pub fn hd_upper_from_net(t: u32, d: u32) -> BigInt {
    assert!(d >= 2, "d must be at least 2");
    pow2(d) * (pow2(t + d - 1) - pow2(t) + 1)
}

/// `floor(2^d (2^(d-1)(1+eps)T - (1-eps)T + 1))` for a `(T, eps)`-almost net.
pub fn hd_upper_from_almost_net(t_count: &BigInt, eps: &BigRational, d: u32) -> BigInt {
    assert!(d >= 2, "d must be at least 2");
    let t = BigRational::from_integer(t_count.clone());
    let one = BigRational::one();
    let inner =
        BigRational::from_integer(pow2(d - 1)) * (&one + eps) * &t - (&one - eps) * &t + &one;
    (BigRational::from_integer(pow2(d)) * inner)
        .floor()
        .to_integer()
}

/// `floor(5s - 8 sqrt((s-1)/3) - 3)`, with the square root bracketed
/// exactly: the result is `5s - 3 - c` for the least `c` with
/// `3c^2 >= 64(s-1)`.
pub fn xn_t_bound(s: u64) -> i64 {
    assert!(s >= 1);
    let target = BigInt::from(64u64) * (s - 1);
    let mut c = (&target / 3u32).sqrt();
    while BigInt::from(3u32) * &c * &c < target {
        c += 1u32;
    }
    5 * s as i64 - 3 - i64::try_from(c).expect("small")
}

/// Product of the first `k` primes.
pub fn primorial(k: usize) -> BigInt {
    let mut primes: Vec<u64> = Vec::with_capacity(k);
    let mut candidate = 2u64;
    while primes.len() < k {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes.iter().map(|&p| BigInt::from(p)).product()
}

/// `2^(d-1) (P(d-1) + 1)`.
pub fn valtr_upper(d: u32) -> BigInt {
    assert!(d >= 2);
    pow2(d - 1) * (primorial(d as usize - 1) + 1)
}

/// Known base-2 `(t, s)`-sequences for small `s`.
pub fn known_sequence_t(s: u32) -> Option<u32> {
    match s {
        1 | 2 => Some(0),
        3 | 4 => Some(1),
        5 => Some(2),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Net,
    Sequence,
    AlmostNet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub d: u32,
    pub t_used: u32,
    pub source: BoundSource,
    #[serde(with = "crate::io::decimal")]
    pub h_upper: BigInt,
    #[serde(with = "crate::io::decimal")]
    pub valtr_upper: BigInt,
    #[serde(with = "crate::io::decimal")]
    pub two_pow_7d: BigInt,
    pub pass: bool,
    pub note: Option<String>,
}

/// One row per `d`: `t` from a known `(t, d-1)`-sequence when one is
/// tabulated, otherwise from [`xn_t_bound`].
pub fn bound_row(d: u32) -> BoundRow {
    let s = d - 1;
    let t = known_sequence_t(s).unwrap_or_else(|| xn_t_bound(s as u64) as u32);
    let h_upper = hd_upper_from_net(t, d);
    let two_pow_7d = pow2(7 * d);
    let note = match d {
        3 => Some(format!("Valtr's special-case bound is {VALTR_H3}")),
        5 if h_upper != BigInt::from(PUBLISHED_H5) => Some(format!(
            "published value is {PUBLISHED_H5}; the net formula with t=1 gives {h_upper}"
        )),
        _ => None,
    };
    BoundRow {
        d,
        t_used: t,
        source: BoundSource::Sequence,
        pass: h_upper < two_pow_7d,
        h_upper,
        valtr_upper: valtr_upper(d),
        two_pow_7d,
        note,
    }
}

pub fn bound_table(ds: impl IntoIterator<Item = u32>) -> Vec<BoundRow> {
    ds.into_iter().map(bound_row).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentCheck {
    pub d: u32,
    pub t: i64,
    #[serde(with = "crate::io::decimal")]
    pub h_upper: BigInt,
    /// `h < 2^(7d)`.
    pub below_2_pow_7d: bool,
    /// `h < 2^(7d - 8 sqrt((d-2)/3))`, established by exact bracketing.
    pub below_refined: bool,
}

impl ExponentCheck {
    pub fn pass(&self) -> bool {
        self.below_2_pow_7d && self.below_refined
    }
}

/// Smallest `e` with `h <= 2^e`.
fn ceil_log2(h: &BigInt) -> u64 {
    assert!(h > &BigInt::zero());
    (h - 1u32).bits()
}

/// Sweeps `3 <= d <= d_max` with `t = xn_t_bound(d - 1)`.
pub fn exponent_check(d_max: u32) -> Vec<ExponentCheck> {
    (3..=d_max)
        .map(|d| {
            let t = xn_t_bound(d as u64 - 1);
            let h = hd_upper_from_net(u32::try_from(t).expect("t is nonnegative"), d);
            let below_2_pow_7d = h < pow2(7 * d);
            // log2 h <= e; e + 8 sqrt((d-2)/3) < 7d  <=>  64(d-2) < 3 (7d - e)^2
            let e = ceil_log2(&h) as i64;
            let gap = 7 * d as i64 - e;
            let below_refined = gap > 0 && 64 * (d as i64 - 2) < 3 * gap * gap;
            ExponentCheck {
                d,
                t,
                h_upper: h,
                below_2_pow_7d,
                below_refined,
            }
        })
        .collect()
}

pub fn render_table_text(rows: &[BoundRow]) -> String {
    let header = ["d", "t", "net_bound", "valtr_bound", "2^{7d}", "pass"];
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.d.to_string(),
                r.t_used.to_string(),
                r.h_upper.to_string(),
                r.valtr_upper.to_string(),
                r.two_pow_7d.to_string(),
                r.pass.to_string(),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..6)
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |fields: Vec<&str>| {
        fields
            .iter()
            .zip(&widths)
            .map(|(f, w)| format!("{f:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    out.push_str(&line(header.to_vec()));
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    for r in rows {
        if let Some(note) = &r.note {
            out.push_str(&format!("* d={}: {note}\n", r.d));
        }
    }
    out
}

pub fn render_table_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from("d,t,net_bound,valtr_bound,2^{7d},pass,note\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.d,
            r.t_used,
            r.h_upper,
            r.valtr_upper,
            r.two_pow_7d,
            r.pass,
            r.note.as_deref().unwrap_or("")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn net_bounds_match_published_values() {
        assert_eq!(hd_upper_from_net(0, 3), BigInt::from(32));
        assert_eq!(hd_upper_from_net(1, 4), BigInt::from(240));
        assert_eq!(hd_upper_from_net(2, 6), BigInt::from(8000));
        assert_eq!(hd_upper_from_net(1, 5), BigInt::from(992));
    }

    #[test]
    fn almost_net_bound_small() {
        let zero = BigRational::zero();
        assert_eq!(
            hd_upper_from_almost_net(&BigInt::one(), &zero, 2),
            BigInt::from(8)
        );
        // T=3, eps=1/3, d=2: 4 * (2*(4/3)*3 - (2/3)*3 + 1) = 4 * 7 = 28
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(
            hd_upper_from_almost_net(&BigInt::from(3), &third, 2),
            BigInt::from(28)
        );
        // T=1, eps=1/3, d=2: 4 * (8/3 - 2/3 + 1) = 4 * 3 = 12
        assert_eq!(
            hd_upper_from_almost_net(&BigInt::one(), &third, 2),
            BigInt::from(12)
        );
        // T=1, eps=1/5, d=2: 4 * (12/5 - 4/5 + 1) = 4 * 13/5 = 52/5 -> 10
        let fifth = BigRational::new(1.into(), 5.into());
        assert_eq!(
            hd_upper_from_almost_net(&BigInt::one(), &fifth, 2),
            BigInt::from(10)
        );
    }

    #[test]
    fn xn_examples() {
        assert_eq!(xn_t_bound(1), 2);
        assert_eq!(xn_t_bound(4), 9);
        assert_eq!(xn_t_bound(13), 46);
        // s=2: sqrt(64/3) ~ 4.62, 10 - 3 - 4.62 = 2.38
        assert_eq!(xn_t_bound(2), 2);
    }

    #[test]
    fn xn_matches_float_away_from_integers() {
        for s in 1..2000u64 {
            let exact = 5.0 * s as f64 - 8.0 * ((s - 1) as f64 / 3.0).sqrt() - 3.0;
            if (exact - exact.round()).abs() > 1e-9 {
                assert_eq!(xn_t_bound(s), exact.floor() as i64, "s = {s}");
            }
        }
    }

    #[test]
    fn valtr_examples() {
        assert_eq!(valtr_upper(2), BigInt::from(6));
        assert_eq!(valtr_upper(3), BigInt::from(28));
        assert_eq!(valtr_upper(4), BigInt::from(248));
        assert_eq!(primorial(5), BigInt::from(2310));
    }

    #[test]
    fn table_flags_d5() {
        let rows = bound_table(3..=6);
        let h: Vec<BigInt> = rows.iter().map(|r| r.h_upper.clone()).collect();
        assert_eq!(h, [32, 240, 992, 8000].map(BigInt::from).to_vec());
        assert!(rows[2].note.as_deref().unwrap().contains("988"));
        assert!(rows[0].note.as_deref().unwrap().contains("22"));
        let text = render_table_text(&rows);
        assert!(text.contains("992") && text.contains("988"));
        assert_eq!(render_table_csv(&rows).lines().count(), 5);
    }

    #[test]
    fn exponent_sweep() {
        let rows = exponent_check(64);
        assert_eq!(rows.len(), 62);
        assert!(rows.iter().all(ExponentCheck::pass));
        // d = 3: t = xn_t_bound(2) = 2, h = 8 * (16 - 4 + 1) = 104 < 2^21
        assert_eq!(rows[0].t, 2);
        assert_eq!(rows[0].h_upper, BigInt::from(104));
    }
}
