//! The published (4,8)-coloring of `K_57`, as its Color One adjacency list.
//!
//! Its restriction to vertices `0..48` is a (4,7)-coloring; swapping the
//! three edges in [`HAND_FLIPS`] gives the other (4,7)-coloring it came from.

use crate::graph::{format::parse_adjacency_list, EdgeColoring};

/// Adjacency list text, byte-for-byte.
pub const R4_8_57_ADJACENCY: &str = include_str!("../data/r4_8_57.adj");

/// Edges whose colors differ between the two 48-vertex (4,7)-colorings.
pub const HAND_FLIPS: [(usize, usize); 3] = [(0, 10), (9, 13), (12, 16)];

/// Vertex count of the prefix that forms the (4,7)-coloring.
pub const BASE_VERTICES: usize = 48;

pub fn r4_8_57() -> EdgeColoring {
    parse_adjacency_list(R4_8_57_ADJACENCY).expect("bundled witness parses")
}

/// The 48-vertex (4,7)-coloring underlying the `K_57` witness.
pub fn r4_7_48() -> EdgeColoring {
    r4_8_57().induced_subcoloring(BASE_VERTICES).expect("57 >= 48")
}
