//! Monochromatic clique detection and Ramsey-witness certification.
//!
//! Searches walk vertices in increasing order over per-color neighbor
//! bitsets, so the first clique found is the lexicographically smallest one
//! and enumeration order is stable.

use crate::graph::{Color, EdgeColoring, GraphError, VertexSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("clique size must be at least 1")]
    ZeroSize,
    #[error("violation limit must be at least 1")]
    ZeroLimit,
}

/// A monochromatic clique that makes a coloring fail the Ramsey property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub color: Color,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub s: usize,
    pub t: usize,
    pub n: usize,
    /// Color One `K_s` cliques first, then Color Two `K_t`, each lexicographic.
    pub violations: Vec<Violation>,
    /// More violations exist than were listed.
    pub truncated: bool,
}

impl VerificationReport {
    /// Re-checks every listed violation edge by edge.
    pub fn violations_hold(&self, coloring: &EdgeColoring) -> bool {
        self.violations.iter().all(|v| {
            let size = match v.color {
                Color::One => self.s,
                Color::Two => self.t,
            };
            v.vertices.len() == size
                && v.vertices.windows(2).all(|w| w[0] < w[1])
                && v.vertices.iter().enumerate().all(|(a, &x)| {
                    v.vertices[a + 1..].iter().all(|&y| coloring.get(x, y) == Some(v.color))
                })
        })
    }
}

/// Lexicographic k-clique enumeration over an adjacency given as bitsets.
struct CliqueWalker<'a> {
    adj: &'a [VertexSet],
    k: usize,
    stack: Vec<usize>,
}

impl<'a> CliqueWalker<'a> {
    fn new(adj: &'a [VertexSet], k: usize) -> Self {
        CliqueWalker { adj, k, stack: Vec::with_capacity(k) }
    }

    /// Visits cliques that extend the current stack using `candidates`;
    /// `visit` returns `false` to stop the walk. Returns `false` if stopped.
    fn walk<F: FnMut(&[usize]) -> bool>(&mut self, candidates: VertexSet, visit: &mut F) -> bool {
        let need = self.k - self.stack.len();
        if need == 0 {
            return visit(&self.stack);
        }
        if candidates.len() < need {
            return true;
        }
        let mut rest = candidates;
        while let Some(v) = rest.first() {
            if rest.len() < need {
                break;
            }
            rest.remove(v);
            self.stack.push(v);
            let keep_going = self.walk(rest.intersection(&self.adj[v]), visit);
            self.stack.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Visits k-cliques of the graph `adj` in lexicographic order until `visit`
/// returns `false`.
pub fn for_each_clique<F>(adj: &[VertexSet], k: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    let all = VertexSet::prefix(adj.len());
    CliqueWalker::new(adj, k).walk(all, &mut visit);
}

/// Whether the graph `adj` restricted to `within` contains a k-clique.
pub fn has_clique_within(adj: &[VertexSet], within: VertexSet, k: usize) -> bool {
    let mut found = false;
    CliqueWalker::new(adj, k).walk(within, &mut |_| {
        found = true;
        false
    });
    found
}

/// Number of k-cliques of `adj` inside `within`.
pub fn count_cliques(adj: &[VertexSet], within: VertexSet, k: usize) -> u64 {
    fn go(adj: &[VertexSet], candidates: VertexSet, need: usize) -> u64 {
        match need {
            0 => 1,
            1 => candidates.len() as u64,
            _ => {
                let mut total = 0;
                let mut rest = candidates;
                while let Some(v) = rest.first() {
                    if rest.len() < need {
                        break;
                    }
                    rest.remove(v);
                    total += go(adj, rest.intersection(&adj[v]), need - 1);
                }
                total
            }
        }
    }
    go(adj, within, k)
}

fn check_inputs(coloring: &EdgeColoring, k: usize) -> Result<(), VerifyError> {
    if k == 0 {
        return Err(VerifyError::ZeroSize);
    }
    coloring.require_total()?;
    Ok(())
}

/// Lexicographically smallest k-clique in `color`, if any.
pub fn find_monochromatic_clique(
    coloring: &EdgeColoring,
    k: usize,
    color: Color,
) -> Result<Option<Vec<usize>>, VerifyError> {
    check_inputs(coloring, k)?;
    let adj = coloring.adjacency(color);
    let mut found = None;
    for_each_clique(&adj, k, |c| {
        found = Some(c.to_vec());
        false
    });
    Ok(found)
}

/// Same result as [`find_monochromatic_clique`], with the search split by
/// lowest clique vertex across the rayon pool.
pub fn find_monochromatic_clique_par(
    coloring: &EdgeColoring,
    k: usize,
    color: Color,
) -> Result<Option<Vec<usize>>, VerifyError> {
    check_inputs(coloring, k)?;
    let adj = coloring.adjacency(color);
    let n = coloring.n();
    Ok((0..n).into_par_iter().find_map_first(|v| {
        let mut walker = CliqueWalker::new(&adj, k);
        walker.stack.push(v);
        let mut found = None;
        walker.walk(adj[v].intersection(&VertexSet::above(v)), &mut |c| {
            found = Some(c.to_vec());
            false
        });
        found
    }))
}

/// Up to `limit` lexicographically first k-cliques in `color`, plus whether
/// more exist.
pub fn list_monochromatic_cliques(
    coloring: &EdgeColoring,
    k: usize,
    color: Color,
    limit: usize,
) -> Result<(Vec<Vec<usize>>, bool), VerifyError> {
    check_inputs(coloring, k)?;
    let adj = coloring.adjacency(color);
    let mut out = Vec::new();
    let mut truncated = false;
    for_each_clique(&adj, k, |c| {
        if out.len() == limit {
            truncated = true;
            return false;
        }
        out.push(c.to_vec());
        true
    });
    Ok((out, truncated))
}

/// Up to `limit` violating cliques per color.
pub fn enumerate_violations(
    coloring: &EdgeColoring,
    s: usize,
    t: usize,
    limit: usize,
) -> Result<VerificationReport, VerifyError> {
    if limit == 0 {
        return Err(VerifyError::ZeroLimit);
    }
    let (ones, trunc_one) = list_monochromatic_cliques(coloring, s, Color::One, limit)?;
    let (twos, trunc_two) = list_monochromatic_cliques(coloring, t, Color::Two, limit)?;
    let violations: Vec<Violation> = ones
        .into_iter()
        .map(|vertices| Violation { color: Color::One, vertices })
        .chain(twos.into_iter().map(|vertices| Violation { color: Color::Two, vertices }))
        .collect();
    Ok(VerificationReport {
        valid: violations.is_empty(),
        s,
        t,
        n: coloring.n(),
        violations,
        truncated: trunc_one || trunc_two,
    })
}

/// Certifies that `coloring` has no Color One `K_s` and no Color Two `K_t`.
///
/// At most one violation per color is listed.
pub fn verify_ramsey(coloring: &EdgeColoring, s: usize, t: usize) -> Result<VerificationReport, VerifyError> {
    enumerate_violations(coloring, s, t, 1)
}

/// Boolean form of [`verify_ramsey`] without building a report.
pub fn is_ramsey_coloring(coloring: &EdgeColoring, s: usize, t: usize) -> Result<bool, VerifyError> {
    Ok(find_monochromatic_clique(coloring, s, Color::One)?.is_none()
        && find_monochromatic_clique(coloring, t, Color::Two)?.is_none())
}
