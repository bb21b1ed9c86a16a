//! Two-colorings of the edges of a complete graph.
//!
//! Vertices are `0..n`. Each unordered pair `{i, j}` carries [`Color::One`],
//! [`Color::Two`] or is undecided. The propositional reading used by the
//! encoder is: edge variable true means Color One.

mod bitset;
pub mod format;
mod zvector;

pub use bitset::{VertexSet, MAX_VERTICES};
pub use zvector::{coloring_from_z, ZVector};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Serialized as the numbers `1` and `2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Color {
    One,
    Two,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::One => Color::Two,
            Color::Two => Color::One,
        }
    }

    /// `1` or `2`, as used in reports and on the wire.
    pub fn number(self) -> u8 {
        match self {
            Color::One => 1,
            Color::Two => 2,
        }
    }

    pub fn from_bool(color_one: bool) -> Color {
        if color_one {
            Color::One
        } else {
            Color::Two
        }
    }
}

impl From<Color> for u8 {
    fn from(c: Color) -> u8 {
        c.number()
    }
}

impl TryFrom<u8> for Color {
    type Error = String;
    fn try_from(v: u8) -> Result<Color, String> {
        match v {
            1 => Ok(Color::One),
            2 => Ok(Color::Two),
            other => Err(format!("color must be 1 or 2, got {other}")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({i}, {j}) is not a pair 0 <= i < j < {n}")]
    BadEdge { i: usize, j: usize, n: usize },
    #[error("edge index {index} out of range 1..={max}")]
    BadIndex { index: u64, max: u64 },
    #[error("{n} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices { n: usize },
    #[error("cannot take {m} vertices of a {n}-vertex coloring")]
    BadSubsetSize { m: usize, n: usize },
    #[error("edge ({i}, {j}) is undecided")]
    Undecided { i: usize, j: usize },
    #[error("coloring has {count} undecided edges")]
    Incomplete { count: usize },
    #[error("z_{k} is unassigned")]
    UnassignedZ { k: usize },
    #[error("z-vector for {n} vertices needs {expected} entries, got {got}")]
    ZLength { n: usize, expected: usize, got: usize },
    #[error("symmetric z-vector violates z_{k} = z_{mirror}")]
    ZAsymmetric { k: usize, mirror: usize },
}

/// Number of unordered pairs on `n` vertices.
#[inline]
pub fn num_edges(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

#[inline]
fn raw_index(i: usize, j: usize, n: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i)
}

/// 1-based lexicographic index of the pair `(i, j)`, `i < j < n`.
///
/// This is also the DIMACS variable of the edge.
pub fn edge_index(i: usize, j: usize, n: usize) -> Result<u64, GraphError> {
    if i >= j || j >= n {
        return Err(GraphError::BadEdge { i, j, n });
    }
    Ok(raw_index(i, j, n) as u64)
}

/// Inverse of [`edge_index`].
pub fn edge_from_index(index: u64, n: usize) -> Result<(usize, usize), GraphError> {
    let max = num_edges(n);
    if index == 0 || index > max {
        return Err(GraphError::BadIndex { index, max });
    }
    // Row i covers indices (start_i, start_i + n - 1 - i].
    let mut remaining = index;
    for i in 0..n {
        let row = (n - 1 - i) as u64;
        if remaining <= row {
            return Ok((i, i + remaining as usize));
        }
        remaining -= row;
    }
    unreachable!("index bounded by num_edges")
}

/// A symmetric, loop-free assignment of colors to the pairs of `K_n`.
///
/// Only pairs `i < j` are stored, in [`edge_index`] order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    n: usize,
    cells: Vec<Option<Color>>,
}

impl std::fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EdgeColoring(n={}, ", self.n)?;
        f.write_str(&format::emit_triangle_matrix(self).replace('\n', "/"))?;
        f.write_str(")")
    }
}

impl EdgeColoring {
    fn check_n(n: usize) -> Result<(), GraphError> {
        if n > MAX_VERTICES {
            Err(GraphError::TooManyVertices { n })
        } else {
            Ok(())
        }
    }

    /// Every edge undecided.
    pub fn undecided(n: usize) -> Result<Self, GraphError> {
        Self::check_n(n)?;
        Ok(EdgeColoring { n, cells: vec![None; num_edges(n) as usize] })
    }

    /// Every edge in `color`.
    pub fn uniform(n: usize, color: Color) -> Result<Self, GraphError> {
        Self::check_n(n)?;
        Ok(EdgeColoring { n, cells: vec![Some(color); num_edges(n) as usize] })
    }

    /// Builds a coloring from a function of `(i, j)` with `i < j`.
    pub fn from_fn<F>(n: usize, mut f: F) -> Result<Self, GraphError>
    where
        F: FnMut(usize, usize) -> Option<Color>,
    {
        Self::check_n(n)?;
        let mut cells = Vec::with_capacity(num_edges(n) as usize);
        for i in 0..n {
            for j in i + 1..n {
                cells.push(f(i, j));
            }
        }
        Ok(EdgeColoring { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        assert!(a != b && b < self.n, "edge ({i}, {j}) outside K_{}", self.n);
        raw_index(a, b, self.n) - 1
    }

    /// Color of the pair; argument order does not matter.
    ///
    /// Panics on a self-loop or an out-of-range vertex.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<Color> {
        self.cells[self.slot(i, j)]
    }

    /// Checked variant of [`get`](Self::get).
    pub fn try_get(&self, i: usize, j: usize) -> Result<Option<Color>, GraphError> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        edge_index(a, b, self.n)?;
        Ok(self.get(a, b))
    }

    /// Sets the pair's state. Panics on a self-loop or an out-of-range vertex.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, color: Option<Color>) {
        let slot = self.slot(i, j);
        self.cells[slot] = color;
    }

    /// Edge states in [`edge_index`] order.
    pub fn cells(&self) -> &[Option<Color>] {
        &self.cells
    }

    /// All pairs `(i, j, state)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Option<Color>)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.cells.iter().copied())
            .map(|((i, j), c)| (i, j, c))
    }

    pub fn undecided_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }

    pub fn count(&self, color: Color) -> usize {
        self.cells.iter().filter(|&&c| c == Some(color)).count()
    }

    pub fn is_total(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    pub fn require_total(&self) -> Result<(), GraphError> {
        match self.undecided_count() {
            0 => Ok(()),
            count => Err(GraphError::Incomplete { count }),
        }
    }

    /// Vertices joined to `v` by an edge of `color`.
    pub fn neighbors(&self, v: usize, color: Color) -> VertexSet {
        let mut set = VertexSet::EMPTY;
        for u in 0..self.n {
            if u != v && self.get(u, v) == Some(color) {
                set.insert(u);
            }
        }
        set
    }

    /// Per-vertex neighbor sets in `color`.
    pub fn adjacency(&self, color: Color) -> Vec<VertexSet> {
        let mut rows = vec![VertexSet::EMPTY; self.n];
        for (i, j, c) in self.edges() {
            if c == Some(color) {
                rows[i].insert(j);
                rows[j].insert(i);
            }
        }
        rows
    }

    /// Restriction to vertices `0..m`.
    pub fn induced_subcoloring(&self, m: usize) -> Result<EdgeColoring, GraphError> {
        if m > self.n {
            return Err(GraphError::BadSubsetSize { m, n: self.n });
        }
        EdgeColoring::from_fn(m, |i, j| self.get(i, j))
    }

    /// Copy of `self` on `n` vertices; pairs touching the new vertices are undecided.
    pub fn embed(&self, n: usize) -> Result<EdgeColoring, GraphError> {
        if n < self.n {
            return Err(GraphError::BadSubsetSize { m: self.n, n });
        }
        let m = self.n;
        EdgeColoring::from_fn(n, |i, j| if j < m { self.get(i, j) } else { None })
    }

    /// Copy with the color of a decided edge swapped.
    pub fn flip_edge(&self, i: usize, j: usize) -> Result<EdgeColoring, GraphError> {
        let current = self.try_get(i, j)?.ok_or(GraphError::Undecided { i, j })?;
        let mut out = self.clone();
        out.set(i, j, Some(current.other()));
        Ok(out)
    }

    /// Swaps the two colors on every decided edge.
    pub fn complement(&self) -> EdgeColoring {
        EdgeColoring {
            n: self.n,
            cells: self.cells.iter().map(|c| c.map(Color::other)).collect(),
        }
    }
}
