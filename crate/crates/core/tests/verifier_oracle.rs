mod common;

use common::{mask_coloring, naive_cliques, naive_valid};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use ramsey_core::clique::{
    enumerate_violations, find_monochromatic_clique, find_monochromatic_clique_par, is_ramsey_coloring, verify_ramsey,
};
use ramsey_core::graph::{Color, EdgeColoring};

fn expected_violations(c: &EdgeColoring, s: usize, t: usize) -> Vec<(Color, Vec<usize>)> {
    let ones = naive_cliques(c, s, Color::One).into_iter().map(|v| (Color::One, v));
    let twos = naive_cliques(c, t, Color::Two).into_iter().map(|v| (Color::Two, v));
    ones.chain(twos).collect()
}

fn check(c: &EdgeColoring, s: usize, t: usize) {
    let expected = expected_violations(c, s, t);
    let report = enumerate_violations(c, s, t, usize::MAX).unwrap();
    let got: Vec<(Color, Vec<usize>)> = report.violations.iter().map(|v| (v.color, v.vertices.clone())).collect();
    assert_eq!(got, expected, "n={} s={s} t={t} coloring={c:?}", c.n());
    assert!(!report.truncated);
    assert_eq!(report.valid, expected.is_empty());

    // Limits apply per color.
    let first = verify_ramsey(c, s, t).unwrap();
    assert_eq!(first.valid, expected.is_empty());
    let mut per_color = Vec::new();
    for color in [Color::One, Color::Two] {
        let of_color: Vec<_> = expected.iter().filter(|(k, _)| *k == color).cloned().collect();
        per_color.extend(of_color.first().cloned());
    }
    let got_first: Vec<_> = first.violations.iter().map(|v| (v.color, v.vertices.clone())).collect();
    assert_eq!(got_first, per_color);
    assert_eq!(first.truncated, expected.len() > per_color.len());
    assert_eq!(is_ramsey_coloring(c, s, t).unwrap(), naive_valid(c, s, t));

    for (k, color) in [(s, Color::One), (t, Color::Two)] {
        let naive_first = naive_cliques(c, k, color).into_iter().next();
        assert_eq!(find_monochromatic_clique(c, k, color).unwrap(), naive_first);
        assert_eq!(find_monochromatic_clique_par(c, k, color).unwrap(), naive_first);
    }
}

#[test]
fn exhaustive_up_to_five_vertices() {
    for n in 1..=5usize {
        let edges = n * (n - 1) / 2;
        for mask in 0u64..1 << edges {
            let c = mask_coloring(n, mask);
            for s in 1..=n + 1 {
                for t in 1..=n + 1 {
                    check(&c, s, t);
                }
            }
        }
    }
}

#[test]
fn random_colorings_six_to_nine_vertices() {
    const SAMPLES_PER_N: usize = 25_000;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for n in 6..=9usize {
        let edges = n * (n - 1) / 2;
        for _ in 0..SAMPLES_PER_N {
            let mask = rng.random::<u64>() & ((1u64 << edges) - 1);
            let s = rng.random_range(2..=5);
            let t = rng.random_range(2..=6);
            check(&mask_coloring(n, mask), s, t);
            checked += 1;
        }
    }
    assert!(checked >= 100_000);
}

#[test]
fn limits_truncate_in_order() {
    let c = EdgeColoring::uniform(6, Color::One).unwrap();
    let all = enumerate_violations(&c, 3, 3, usize::MAX).unwrap();
    assert_eq!(all.violations.len(), 20);
    let some = enumerate_violations(&c, 3, 3, 5).unwrap();
    assert!(some.truncated);
    assert_eq!(some.violations[..], all.violations[..5]);
    // Color Two gets its own allowance.
    let mixed = enumerate_violations(&c.complement().embed(6).unwrap(), 7, 3, 2).unwrap();
    assert_eq!(mixed.violations.len(), 2);
    assert!(mixed.violations.iter().all(|v| v.color == Color::Two));
    assert!(enumerate_violations(&c, 3, 3, 0).is_err());
    assert!(verify_ramsey(&c, 0, 3).is_err());
}
