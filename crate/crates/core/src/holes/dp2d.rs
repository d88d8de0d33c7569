//! Largest empty convex polygon in the plane, `O(n^4)` overall.
//!
//! For each anchor `p` taken as the lowest vertex, the other candidate
//! vertices are sorted by angle around `p`; an empty convex polygon with
//! lowest vertex `p` is a fan of empty triangles `(p, q_i, q_j)` whose chain
//! turns left at every vertex. `best[i][j]` is the largest such chain
//! ending with the edge `q_i -> q_j`.

// Index loops read closer to the matrix/table notation here.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;

use crate::geom::plane::{angular_cmp, orient};
use crate::geom::PointSet;

/// Returns a largest hole (as indices) and the number of orientation tests.
/// Assumes general position; sets with fewer than three points have none.
pub fn largest_empty_polygon(a: &PointSet) -> (Vec<usize>, u64) {
    let mut calls = 0u64;
    let mut best: Vec<usize> = Vec::new();
    for anchor in 0..a.len() {
        let p = a.point(anchor);
        let above = |q: &[BigInt]| (&q[1], &q[0]) > (&p[1], &p[0]);
        let mut cand: Vec<usize> = (0..a.len()).filter(|&i| above(a.point(i))).collect();
        cand.sort_by(|&i, &j| angular_cmp(p, a.point(i), a.point(j)));
        let k = cand.len();
        if k < 2 {
            continue;
        }
        let q = |i: usize| a.point(cand[i]);

        let mut empty = vec![vec![false; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let mut ok = true;
                for m in i + 1..j {
                    calls += 1;
                    if orient(q(i), q(j), q(m)) > 0 {
                        ok = false;
                        break;
                    }
                }
                empty[i][j] = ok;
            }
        }

        // size[i][j]: vertices in the best chain p, ..., q_i, q_j (0 = none)
        let mut size = vec![vec![0usize; k]; k];
        let mut prev = vec![vec![usize::MAX; k]; k];
        for j in 0..k {
            for i in 0..j {
                if !empty[i][j] {
                    continue;
                }
                size[i][j] = 3;
                for h in 0..i {
                    if size[h][i] == 0 {
                        continue;
                    }
                    calls += 1;
                    if orient(q(h), q(i), q(j)) > 0 && size[h][i] + 1 > size[i][j] {
                        size[i][j] = size[h][i] + 1;
                        prev[i][j] = h;
                    }
                }
            }
        }

        for j in 0..k {
            for i in 0..j {
                if size[i][j] <= best.len() {
                    continue;
                }
                calls += 1;
                if orient(q(i), q(j), p) <= 0 {
                    continue;
                }
                let mut chain = vec![cand[j], cand[i]];
                let (mut x, mut y) = (i, j);
                while prev[x][y] != usize::MAX {
                    let h = prev[x][y];
                    chain.push(cand[h]);
                    y = x;
                    x = h;
                }
                chain.push(anchor);
                chain.sort_unstable();
                best = chain;
            }
        }
    }
    (best, calls)
}
