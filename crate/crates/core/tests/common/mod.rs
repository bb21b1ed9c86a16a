//! Naive reference implementations shared by the integration tests. Nothing
//! here calls into the clique or encoder code under test.
#![allow(dead_code)]

use ramsey_core::graph::{Color, EdgeColoring};

/// All k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Every k-subset whose pairs all carry `color`.
pub fn naive_cliques(c: &EdgeColoring, k: usize, color: Color) -> Vec<Vec<usize>> {
    subsets(c.n(), k)
        .into_iter()
        .filter(|sub| {
            sub.iter()
                .enumerate()
                .all(|(a, &u)| sub[a + 1..].iter().all(|&v| c.get(u, v) == Some(color)))
        })
        .collect()
}

pub fn naive_valid(c: &EdgeColoring, s: usize, t: usize) -> bool {
    naive_cliques(c, s, Color::One).is_empty() && naive_cliques(c, t, Color::Two).is_empty()
}

/// Coloring whose edges, in lexicographic order, take Color One where the
/// matching bit of `mask` is set.
pub fn mask_coloring(n: usize, mask: u64) -> EdgeColoring {
    let mut bit = 0;
    let mut cells = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            cells.push((i, j, mask >> bit & 1 == 1));
            bit += 1;
        }
    }
    let mut c = EdgeColoring::undecided(n).unwrap();
    for (i, j, one) in cells {
        c.set(i, j, Some(if one { Color::One } else { Color::Two }));
    }
    c
}

/// Largest monochromatic clique in each color, by brute force.
pub fn clique_numbers(c: &EdgeColoring) -> (usize, usize) {
    let largest = |color| (1..=c.n()).rev().find(|&k| !naive_cliques(c, k, color).is_empty()).unwrap_or(0);
    (largest(Color::One), largest(Color::Two))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
