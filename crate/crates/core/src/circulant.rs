//! Direct search over distance vectors.
//!
//! A circulant coloring is fixed by `z_1 ..= z_{n-1}`, so a depth-first search
//! over those bits explores every circulant coloring of `K_n`. After each
//! decision the search looks for a monochromatic clique made only of edges
//! whose distance is already decided and prunes the branch if one exists.
//! In symmetric mode `z_k` and `z_{n-k}` are decided together.

use crate::clique::{has_clique_within, verify_ramsey};
use crate::graph::{GraphError, VertexSet, ZVector, MAX_VERTICES};
use rayon::prelude::*;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CirculantMode {
    Full,
    /// Adds `z_{n-k} = z_k`.
    Symmetric,
}

impl CirculantMode {
    /// Number of independent bits for `K_n`.
    pub fn free_vars(self, n: usize) -> usize {
        match self {
            CirculantMode::Full => n - 1,
            CirculantMode::Symmetric => n / 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CirculantMode::Full => "full",
            CirculantMode::Symmetric => "symmetric",
        }
    }
}

impl fmt::Display for CirculantMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Want {
    First,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub want: Want,
    /// Cap on visited search nodes across all workers.
    pub node_limit: Option<u64>,
    /// The first `split_bits` decisions enumerate independent subtrees that
    /// run in parallel.
    pub split_bits: u32,
    /// At most this many solutions are stored; all are counted.
    pub keep: usize,
}

impl SearchOptions {
    pub fn all() -> Self {
        SearchOptions { want: Want::All, node_limit: None, split_bits: 8, keep: usize::MAX }
    }

    pub fn first() -> Self {
        SearchOptions { want: Want::First, ..SearchOptions::all() }
    }

    pub fn with_node_limit(self, limit: u64) -> Self {
        SearchOptions { node_limit: Some(limit), ..self }
    }

    pub fn with_split_bits(self, bits: u32) -> Self {
        SearchOptions { split_bits: bits, ..self }
    }

    pub fn with_keep(self, keep: usize) -> Self {
        SearchOptions { keep, ..self }
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions::all()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSearchResult {
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub mode: CirculantMode,
    /// Solutions in search order (z_1 first, false before true).
    pub solutions: Vec<ZVector>,
    /// Whether `count` is the exact number of valid vectors.
    pub exhaustive: bool,
    pub count: u64,
    pub nodes: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZSearchError {
    #[error("clique sizes must be at least 2 (got s={s}, t={t})")]
    BadSizes { s: usize, t: usize },
    #[error("vertex count {0} outside 2..={MAX_VERTICES}")]
    BadVertexCount(usize),
    #[error("node budget exhausted after {} nodes with {} solutions", .0.nodes, .0.count)]
    BudgetExceeded(Box<ZSearchResult>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Color index into the per-color adjacency arrays.
fn slot(color_one: bool) -> usize {
    if color_one {
        0
    } else {
        1
    }
}

struct Shared {
    nodes: AtomicU64,
    limit: Option<u64>,
    out_of_budget: AtomicBool,
    /// Lowest subtree index holding a solution (first-solution mode).
    best: AtomicUsize,
}

struct State<'a> {
    s: usize,
    t: usize,
    n: usize,
    mode: CirculantMode,
    z: ZVector,
    /// Adjacency over decided edges, Color One then Color Two.
    adj: [Vec<VertexSet>; 2],
    shared: &'a Shared,
    local_nodes: u64,
    subtree: usize,
    want: Want,
    keep: usize,
    solutions: Vec<ZVector>,
    count: u64,
}

const FLUSH_EVERY: u64 = 1024;

impl<'a> State<'a> {
    fn new(s: usize, t: usize, n: usize, mode: CirculantMode, shared: &'a Shared, opts: &SearchOptions) -> Self {
        let mut z = ZVector::unassigned(n);
        if mode == CirculantMode::Symmetric {
            z = z.into_symmetric().expect("unassigned vector is symmetric");
        }
        State {
            s,
            t,
            n,
            mode,
            z,
            adj: [vec![VertexSet::EMPTY; n], vec![VertexSet::EMPTY; n]],
            shared,
            local_nodes: 0,
            subtree: 0,
            want: opts.want,
            keep: opts.keep,
            solutions: Vec::new(),
            count: 0,
        }
    }

    /// Distances decided by free variable `z_k`: `k` and, in symmetric mode,
    /// its mirror.
    fn distances(&self, k: usize) -> (usize, Option<usize>) {
        let mirror = self.n - k;
        match self.mode {
            CirculantMode::Symmetric if mirror != k => (k, Some(mirror)),
            _ => (k, None),
        }
    }

    fn link(&mut self, d: usize, color_one: bool, on: bool) {
        let adj = &mut self.adj[slot(color_one)];
        for v in 0..self.n - d {
            if on {
                adj[v].insert(v + d);
                adj[v + d].insert(v);
            } else {
                adj[v].remove(v + d);
                adj[v + d].remove(v);
            }
        }
    }

    /// A monochromatic clique through the edge `(0, d)` in the decided part.
    fn closes_clique(&self, d: usize, color_one: bool) -> bool {
        let need = if color_one { self.s } else { self.t };
        if need <= 2 {
            return true;
        }
        let adj = &self.adj[slot(color_one)];
        let common = adj[0].intersection(&adj[d]);
        common.len() >= need - 2 && has_clique_within(adj, common, need - 2)
    }

    /// Decides `z_k` (and its mirror); returns `false` if the branch dies.
    fn assign(&mut self, k: usize, value: bool) -> bool {
        self.tick();
        let (d, mirror) = self.distances(k);
        self.z.set(k, Some(value));
        self.link(d, value, true);
        if let Some(m) = mirror {
            self.link(m, value, true);
        }
        !(self.closes_clique(d, value) || mirror.is_some_and(|m| self.closes_clique(m, value)))
    }

    fn unassign(&mut self, k: usize) {
        let value = self.z.get(k).expect("assigned");
        let (d, mirror) = self.distances(k);
        self.link(d, value, false);
        if let Some(m) = mirror {
            self.link(m, value, false);
        }
        self.z.set(k, None);
    }

    fn tick(&mut self) {
        self.local_nodes += 1;
        if self.local_nodes >= FLUSH_EVERY {
            self.flush();
        }
    }

    fn flush(&mut self) {
        let add = std::mem::take(&mut self.local_nodes);
        let total = self.shared.nodes.fetch_add(add, Ordering::Relaxed) + add;
        if self.shared.limit.is_some_and(|l| total > l) {
            self.shared.out_of_budget.store(true, Ordering::Relaxed);
        }
    }

    fn should_stop(&self) -> bool {
        if self.shared.out_of_budget.load(Ordering::Relaxed) {
            return true;
        }
        self.want == Want::First && (self.count > 0 || self.shared.best.load(Ordering::Relaxed) < self.subtree)
    }

    fn dfs(&mut self, depth: usize, free: usize) {
        if depth == free {
            self.leaf();
            return;
        }
        let k = depth + 1;
        for value in [false, true] {
            if self.should_stop() {
                return;
            }
            if self.assign(k, value) {
                self.dfs(depth + 1, free);
            }
            self.unassign(k);
        }
    }

    fn leaf(&mut self) {
        let coloring = self.z.to_coloring().expect("leaf is complete");
        let valid = verify_ramsey(&coloring, self.s, self.t).is_ok_and(|r| r.valid);
        debug_assert!(valid, "pruned search reached an invalid leaf");
        if !valid {
            return;
        }
        self.count += 1;
        if self.solutions.len() < self.keep {
            self.solutions.push(self.z.clone());
        }
        if self.want == Want::First {
            self.shared.best.fetch_min(self.subtree, Ordering::Relaxed);
        }
    }
}

struct SubResult {
    solutions: Vec<ZVector>,
    count: u64,
}

/// Searches the circulant colorings of `K_n` for (s,t)-witnesses.
pub fn search_z(s: usize, t: usize, n: usize, mode: CirculantMode, opts: &SearchOptions) -> Result<ZSearchResult, ZSearchError> {
    if s < 2 || t < 2 {
        return Err(ZSearchError::BadSizes { s, t });
    }
    if !(2..=MAX_VERTICES).contains(&n) {
        return Err(ZSearchError::BadVertexCount(n));
    }
    let free = mode.free_vars(n);
    let bits = (opts.split_bits as usize).min(free).min(20);
    let shared = Shared {
        nodes: AtomicU64::new(0),
        limit: opts.node_limit,
        out_of_budget: AtomicBool::new(false),
        best: AtomicUsize::new(usize::MAX),
    };

    let subtrees: Vec<SubResult> = (0..1usize << bits)
        .into_par_iter()
        .map(|prefix| {
            let mut st = State::new(s, t, n, mode, &shared, opts);
            st.subtree = prefix;
            let mut alive = true;
            let mut assigned = 0;
            for depth in 0..bits {
                if st.should_stop() {
                    alive = false;
                    break;
                }
                // Most significant bit is z_1, so prefix order is search order.
                let value = prefix >> (bits - 1 - depth) & 1 == 1;
                assigned += 1;
                if !st.assign(depth + 1, value) {
                    alive = false;
                    break;
                }
            }
            if alive {
                st.dfs(bits, free);
            }
            for k in (1..=assigned).rev() {
                st.unassign(k);
            }
            st.flush();
            SubResult { solutions: st.solutions, count: st.count }
        })
        .collect();

    let mut result = ZSearchResult {
        s,
        t,
        n,
        mode,
        solutions: Vec::new(),
        exhaustive: true,
        count: 0,
        nodes: shared.nodes.load(Ordering::Relaxed),
    };
    // A tripped budget may have cut any subtree short.
    let aborted = shared.out_of_budget.load(Ordering::Relaxed);
    for sub in subtrees {
        if opts.want == Want::First && result.count > 0 {
            break;
        }
        result.count += sub.count;
        let room = opts.keep.saturating_sub(result.solutions.len());
        result.solutions.extend(sub.solutions.into_iter().take(room));
    }
    if opts.want == Want::First {
        result.count = result.count.min(1);
        result.solutions.truncate(1);
        // Stopping at a solution proves nothing about the rest.
        result.exhaustive = result.count == 0 && !aborted;
        if result.count == 0 && aborted {
            return Err(ZSearchError::BudgetExceeded(Box::new(result)));
        }
        return Ok(result);
    }
    if aborted {
        result.exhaustive = false;
        return Err(ZSearchError::BudgetExceeded(Box::new(result)));
    }
    Ok(result)
}

/// The largest `n <= n_max` with a circulant (s,t)-witness, with the exact
/// number of witnesses at that `n`. `None` if even `n = 2` has none.
///
/// In full mode the scan stops at the first empty `n`: dropping the last
/// vertex of a circulant witness leaves a circulant witness, so no larger
/// `n` can succeed. Symmetric witnesses lack that property and every `n` up
/// to `n_max` is searched.
pub fn largest_z(
    s: usize,
    t: usize,
    n_max: usize,
    mode: CirculantMode,
    opts: &SearchOptions,
) -> Result<Option<ZSearchResult>, ZSearchError> {
    let opts = SearchOptions { want: Want::All, ..*opts };
    let mut best = None;
    for n in 2..=n_max {
        let r = search_z(s, t, n, mode, &opts)?;
        if r.count > 0 {
            best = Some(r);
        } else if mode == CirculantMode::Full {
            break;
        }
    }
    Ok(best)
}

/// Expands every stored solution of `result` into its coloring.
pub fn expand(result: &ZSearchResult) -> Vec<crate::graph::EdgeColoring> {
    result.solutions.iter().map(|z| z.to_coloring().expect("solutions are complete")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: usize, t: usize, n: usize, mode: CirculantMode) -> u64 {
        search_z(s, t, n, mode, &SearchOptions::all()).unwrap().count
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(3, 3, 4, CirculantMode::Full), 4);
        assert_eq!(count(3, 3, 5, CirculantMode::Full), 2);
        assert_eq!(count(3, 3, 6, CirculantMode::Full), 0);
        assert_eq!(count(3, 4, 8, CirculantMode::Full), 2);
        assert_eq!(count(3, 4, 9, CirculantMode::Full), 0);
    }

    #[test]
    fn five_cycle_is_first() {
        let r = search_z(3, 3, 5, CirculantMode::Full, &SearchOptions::first()).unwrap();
        assert_eq!(r.solutions.len(), 1);
        assert_eq!(r.solutions[0].to_bit_string(), "0110");
        assert!(!r.exhaustive);
    }

    #[test]
    fn split_does_not_change_counts() {
        for bits in [0, 1, 3, 20] {
            let r = search_z(3, 5, 13, CirculantMode::Full, &SearchOptions::all().with_split_bits(bits)).unwrap();
            assert_eq!(r.count, 3, "split_bits={bits}");
        }
    }

    #[test]
    fn node_budget_reports_partial() {
        let opts = SearchOptions::all().with_node_limit(10).with_split_bits(0);
        match search_z(3, 5, 13, CirculantMode::Full, &opts) {
            Err(ZSearchError::BudgetExceeded(partial)) => assert!(!partial.exhaustive),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(search_z(1, 3, 5, CirculantMode::Full, &SearchOptions::all()), Err(ZSearchError::BadSizes { .. })));
        assert!(matches!(search_z(3, 3, 1, CirculantMode::Full, &SearchOptions::all()), Err(ZSearchError::BadVertexCount(1))));
    }

    #[test]
    fn largest_small_rows() {
        let r = largest_z(3, 3, 8, CirculantMode::Full, &SearchOptions::all()).unwrap().unwrap();
        assert_eq!((r.n, r.count), (5, 2));
        let r = largest_z(3, 4, 10, CirculantMode::Full, &SearchOptions::all()).unwrap().unwrap();
        assert_eq!((r.n, r.count), (8, 2));
    }
}
