//! Distance (Z) clauses tying each edge variable to a per-distance variable.
//!
//! Variable layout: `z_k` of block `b` is `C(n,2) + b*(n-1) + k`. Only the
//! partitioned mode uses more than one block.

use super::{ClauseSink, EncodeError, Lit, StreamError};
use crate::graph::{edge_index, num_edges, EdgeColoring};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Assigns each matrix cell `(row, column)`, `row > column`, to a Z block.
#[derive(Clone)]
pub struct PartitionFn {
    name: String,
    rule: Arc<dyn Fn(usize, usize) -> usize + Send + Sync>,
}

impl PartitionFn {
    pub fn new<F>(name: impl Into<String>, rule: F) -> Self
    where
        F: Fn(usize, usize) -> usize + Send + Sync + 'static,
    {
        PartitionFn { name: name.into(), rule: Arc::new(rule) }
    }

    /// Block 0 for rows `lo..=hi`, block 1 elsewhere.
    pub fn row_band(lo: usize, hi: usize) -> Self {
        PartitionFn::new(format!("band:{lo}-{hi}"), move |row, _| usize::from(!(lo..=hi).contains(&row)))
    }

    /// Looks up a named preset. `band:LO-HI` is [`row_band`](Self::row_band);
    /// `rows24-33` is the band used for the 48-vertex (4,7) search.
    pub fn preset(name: &str) -> Option<Self> {
        if name == "rows24-33" {
            return Some(PartitionFn::row_band(24, 33));
        }
        let (lo, hi) = name.strip_prefix("band:")?.split_once('-')?;
        let (lo, hi) = (lo.parse().ok()?, hi.parse().ok()?);
        (lo <= hi).then(|| PartitionFn::row_band(lo, hi))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn block(&self, row: usize, column: usize) -> usize {
        (self.rule)(row, column)
    }

    /// Number of blocks used on `K_n`: one more than the largest id.
    pub fn blocks(&self, n: usize) -> usize {
        let mut max = None;
        for row in 1..n {
            for column in 0..row {
                max = max.max(Some(self.block(row, column)));
            }
        }
        max.map_or(0, |m| m + 1)
    }
}

impl std::fmt::Debug for PartitionFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PartitionFn({})", self.name)
    }
}

#[derive(Clone, Debug, Default)]
pub enum ZMode {
    #[default]
    None,
    /// `e_ij <-> z_{j-i}` for every edge.
    Full,
    /// Full plus `z_k <-> z_{n-k}`.
    Symmetric,
    /// Full minus the edges at the listed distances.
    Imperfect(BTreeSet<usize>),
    /// `e_ij <-> z_{p(j,i), j-i}` with one Z family per block.
    Partitioned(PartitionFn),
}

impl ZMode {
    pub(crate) fn validate(&self, n: usize) -> Result<(), EncodeError> {
        if let ZMode::Imperfect(omit) = self {
            if let Some(&k) = omit.iter().find(|&&k| k == 0 || k >= n) {
                return Err(EncodeError::BadDistance { k, n });
            }
        }
        Ok(())
    }

    fn blocks(&self, n: usize) -> u64 {
        match self {
            ZMode::None => 0,
            ZMode::Partitioned(p) => p.blocks(n) as u64,
            _ => 1,
        }
    }

    /// Declared Z variables on `K_n`.
    pub fn num_vars(&self, n: usize) -> u64 {
        self.blocks(n) * n.saturating_sub(1) as u64
    }
}

fn z_var(n: usize, block: usize, k: usize) -> u32 {
    (num_edges(n) + (block * (n - 1) + k) as u64) as u32
}

pub(super) fn stream<S: ClauseSink>(
    n: usize,
    mode: &ZMode,
    fixed: Option<&EdgeColoring>,
    sink: &mut S,
) -> Result<u64, S::Error> {
    if matches!(mode, ZMode::None) {
        return Ok(0);
    }
    let mut emitted = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if fixed.is_some_and(|c| c.get(i, j).is_some()) {
                continue;
            }
            let k = j - i;
            let block = match mode {
                ZMode::Imperfect(omit) if omit.contains(&k) => continue,
                ZMode::Partitioned(p) => p.block(j, i),
                _ => 0,
            };
            let e = edge_index(i, j, n).expect("i < j < n") as u32;
            let z = z_var(n, block, k);
            sink.add_clause(&[Lit::neg(e), Lit::pos(z)])?;
            sink.add_clause(&[Lit::pos(e), Lit::neg(z)])?;
            emitted += 2;
        }
    }
    if matches!(mode, ZMode::Symmetric) {
        for k in 1..n {
            let mirror = n - k;
            if k >= mirror {
                break;
            }
            let (a, b) = (z_var(n, 0, k), z_var(n, 0, mirror));
            sink.add_clause(&[Lit::neg(a), Lit::pos(b)])?;
            sink.add_clause(&[Lit::pos(a), Lit::neg(b)])?;
            emitted += 2;
        }
    }
    Ok(emitted)
}

/// Streams the Z-clauses of `mode` on `K_n` and returns how many were emitted.
pub fn stream_z_clauses<S: ClauseSink>(
    n: usize,
    mode: &ZMode,
    sink: &mut S,
) -> Result<u64, StreamError<S::Error>> {
    if n < 2 {
        return Err(EncodeError::BadParams { s: 2, t: 2, n }.into());
    }
    mode.validate(n)?;
    stream(n, mode, None, sink).map_err(StreamError::Sink)
}
