//! CNF encoding of the Ramsey property.
//!
//! Edge `(i, j)` is variable [`edge_index`]; true means Color One. Every
//! `s`-subset of vertices yields a clause forbidding a Color One `K_s`, every
//! `t`-subset one forbidding a Color Two `K_t`. Subsets are visited in
//! lexicographic order, and within a clause literals are grouped by the larger
//! endpoint: `(a,b), (a,c), (b,c), (a,d), ...`.
//!
//! Hard clauses are streamed into a [`ClauseSink`] and never held in memory;
//! distance (Z) clauses are small enough to materialize.

mod dimacs;
mod zclauses;

pub use dimacs::{emit_dimacs, model_text, parse_model, DecodedModel, DimacsWriter, ModelError, ZInconsistency};
pub use zclauses::{stream_z_clauses, PartitionFn, ZMode};

use crate::clique::{count_cliques, for_each_clique};
use crate::graph::{edge_index, num_edges, Color, EdgeColoring, GraphError, VertexSet, MAX_VERTICES};
use std::convert::Infallible;
use thiserror::Error;

/// A DIMACS literal: nonzero, sign is polarity, magnitude is the variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn pos(var: u32) -> Lit {
        debug_assert!(var > 0 && var <= i32::MAX as u32);
        Lit(var as i32)
    }

    pub fn neg(var: u32) -> Lit {
        debug_assert!(var > 0 && var <= i32::MAX as u32);
        Lit(-(var as i32))
    }

    pub fn new(var: u32, positive: bool) -> Lit {
        if positive {
            Lit::pos(var)
        } else {
            Lit::neg(var)
        }
    }

    pub fn from_dimacs(value: i32) -> Option<Lit> {
        (value != 0 && value != i32::MIN).then_some(Lit(value))
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl std::fmt::Debug for Lit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for Lit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Consumer of a clause stream. Returning an error stops the stream.
pub trait ClauseSink {
    type Error;
    fn add_clause(&mut self, lits: &[Lit]) -> Result<(), Self::Error>;
}

/// Counts clauses and literals.
#[derive(Default, Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClauseCounter {
    pub clauses: u64,
    pub literals: u64,
}

impl ClauseSink for ClauseCounter {
    type Error = Infallible;
    fn add_clause(&mut self, lits: &[Lit]) -> Result<(), Infallible> {
        self.clauses += 1;
        self.literals += lits.len() as u64;
        Ok(())
    }
}

impl ClauseSink for Vec<Vec<Lit>> {
    type Error = Infallible;
    fn add_clause(&mut self, lits: &[Lit]) -> Result<(), Infallible> {
        self.push(lits.to_vec());
        Ok(())
    }
}

impl<S: ClauseSink + ?Sized> ClauseSink for &mut S {
    type Error = S::Error;
    fn add_clause(&mut self, lits: &[Lit]) -> Result<(), S::Error> {
        (**self).add_clause(lits)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("need 2 <= s, t <= n (got s={s}, t={t}, n={n})")]
    BadParams { s: usize, t: usize, n: usize },
    #[error("n={n} exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices { n: usize },
    #[error("clause count overflows 64 bits")]
    Overflow,
    #[error("omitted distance {k} is outside 1..{n}")]
    BadDistance { k: usize, n: usize },
    #[error("fixed coloring has {got} vertices, instance has {expected}")]
    FixedSize { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Validated `(s, t, n)`: forbid Color One `K_s` and Color Two `K_t` in `K_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RamseyParams {
    s: usize,
    t: usize,
    n: usize,
}

impl RamseyParams {
    pub fn new(s: usize, t: usize, n: usize) -> Result<Self, EncodeError> {
        if n > MAX_VERTICES {
            return Err(EncodeError::TooManyVertices { n });
        }
        if s < 2 || t < 2 || s > n || t > n {
            return Err(EncodeError::BadParams { s, t, n });
        }
        Ok(RamseyParams { s, t, n })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceCounts {
    pub variables: u64,
    pub clauses: u64,
}

/// Size of the plain Ramsey instance: `C(n,2)` variables and
/// `C(n,s) + C(n,t)` clauses.
pub fn ramsey_counts(s: usize, t: usize, n: usize) -> Result<InstanceCounts, EncodeError> {
    let p = RamseyParams::new(s, t, n)?;
    let n = p.n as u64;
    let cs = binomial(n, p.s as u64).ok_or(EncodeError::Overflow)?;
    let ct = binomial(n, p.t as u64).ok_or(EncodeError::Overflow)?;
    Ok(InstanceCounts {
        variables: num_edges(p.n),
        clauses: cs.checked_add(ct).ok_or(EncodeError::Overflow)?,
    })
}

/// Per-vertex sets of partners allowed in an unsettled clause of the given
/// forbidden color: pairs fixed to the other color settle the clause.
fn allowed_partners(n: usize, fixed: Option<&EdgeColoring>, forbidden: Color) -> Vec<VertexSet> {
    let all = VertexSet::prefix(n);
    match fixed {
        None => (0..n)
            .map(|v| {
                let mut row = all;
                row.remove(v);
                row
            })
            .collect(),
        Some(c) => {
            let settling = c.adjacency(forbidden.other());
            (0..n)
                .map(|v| {
                    let mut row = all.difference(&settling[v]);
                    row.remove(v);
                    row
                })
                .collect()
        }
    }
}

fn stream_clique_clauses<S: ClauseSink>(
    n: usize,
    k: usize,
    fixed: Option<&EdgeColoring>,
    forbidden: Color,
    sink: &mut S,
) -> Result<u64, S::Error> {
    let allowed = allowed_partners(n, fixed, forbidden);
    let positive = forbidden == Color::Two;
    let mut lits: Vec<Lit> = Vec::with_capacity(k * (k - 1) / 2);
    let mut emitted = 0u64;
    let mut failure = None;
    for_each_clique(&allowed, k, |subset| {
        lits.clear();
        for (b, &j) in subset.iter().enumerate() {
            for &i in &subset[..b] {
                let open = fixed.is_none_or(|c| c.get(i, j).is_none());
                if open {
                    let var = edge_index(i, j, n).expect("i < j < n") as u32;
                    lits.push(Lit::new(var, positive));
                }
            }
        }
        match sink.add_clause(&lits) {
            Ok(()) => {
                emitted += 1;
                true
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(emitted),
    }
}

fn count_clique_clauses(n: usize, k: usize, fixed: Option<&EdgeColoring>, forbidden: Color) -> u64 {
    let allowed = allowed_partners(n, fixed, forbidden);
    count_cliques(&allowed, VertexSet::prefix(n), k)
}

/// Streams `C(s, t, n)`: Color One `K_s` clauses, then Color Two `K_t` clauses.
pub fn stream_ramsey_clauses<S: ClauseSink>(params: &RamseyParams, sink: &mut S) -> Result<u64, S::Error> {
    let a = stream_clique_clauses(params.n, params.s, None, Color::One, sink)?;
    let b = stream_clique_clauses(params.n, params.t, None, Color::Two, sink)?;
    Ok(a + b)
}

/// Outcome of a residual pass over a partially fixed coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidualCounts {
    /// Undecided edges.
    pub unsettled_vars: u64,
    /// Clauses not satisfied by the fixed edges.
    pub unsettled_clauses: u64,
}

/// Failure of a residual stream: bad parameters or a sink error.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StreamError<E> {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("clause sink failed")]
    Sink(E),
}

/// Streams the Ramsey clauses not already satisfied by `fixed`.
///
/// A `K_s` clause is settled when one of its pairs is fixed Color Two, a `K_t`
/// clause when one is fixed Color One. Surviving clauses keep only literals of
/// undecided edges; the fixed ones are false there.
pub fn residual_clauses<S: ClauseSink>(
    fixed: &EdgeColoring,
    s: usize,
    t: usize,
    sink: &mut S,
) -> Result<ResidualCounts, StreamError<S::Error>> {
    let p = RamseyParams::new(s, t, fixed.n())?;
    let a = stream_clique_clauses(p.n, p.s, Some(fixed), Color::One, sink).map_err(StreamError::Sink)?;
    let b = stream_clique_clauses(p.n, p.t, Some(fixed), Color::Two, sink).map_err(StreamError::Sink)?;
    Ok(ResidualCounts { unsettled_vars: fixed.undecided_count() as u64, unsettled_clauses: a + b })
}

/// Counting-only form of [`residual_clauses`]; never builds a clause.
pub fn residual_counts(fixed: &EdgeColoring, s: usize, t: usize) -> Result<ResidualCounts, EncodeError> {
    let p = RamseyParams::new(s, t, fixed.n())?;
    Ok(ResidualCounts {
        unsettled_vars: fixed.undecided_count() as u64,
        unsettled_clauses: count_clique_clauses(p.n, p.s, Some(fixed), Color::One)
            + count_clique_clauses(p.n, p.t, Some(fixed), Color::Two),
    })
}

/// A complete instance description: Ramsey clauses (optionally residual to a
/// fixed partial coloring) plus a Z-clause family.
#[derive(Clone, Debug)]
pub struct ClauseSource {
    params: RamseyParams,
    fixed: Option<EdgeColoring>,
    z_mode: ZMode,
}

impl ClauseSource {
    pub fn new(params: RamseyParams) -> Self {
        ClauseSource { params, fixed: None, z_mode: ZMode::None }
    }

    /// Plain `C(s, t, n)` without Z-clauses.
    pub fn ramsey(s: usize, t: usize, n: usize) -> Result<Self, EncodeError> {
        Ok(ClauseSource::new(RamseyParams::new(s, t, n)?))
    }

    /// Restricts the hard clauses to those unsettled by `fixed`.
    pub fn with_fixed(mut self, fixed: EdgeColoring) -> Result<Self, EncodeError> {
        if fixed.n() != self.params.n {
            return Err(EncodeError::FixedSize { expected: self.params.n, got: fixed.n() });
        }
        self.fixed = Some(fixed);
        Ok(self)
    }

    pub fn with_z(mut self, mode: ZMode) -> Result<Self, EncodeError> {
        mode.validate(self.params.n)?;
        self.z_mode = mode;
        Ok(self)
    }

    pub fn params(&self) -> &RamseyParams {
        &self.params
    }

    pub fn fixed(&self) -> Option<&EdgeColoring> {
        self.fixed.as_ref()
    }

    pub fn z_mode(&self) -> &ZMode {
        &self.z_mode
    }

    pub fn num_edge_vars(&self) -> u64 {
        num_edges(self.params.n)
    }

    pub fn num_z_vars(&self) -> u64 {
        self.z_mode.num_vars(self.params.n)
    }

    /// Declared variable count: edges first, Z blocks after.
    pub fn num_vars(&self) -> u64 {
        self.num_edge_vars() + self.num_z_vars()
    }

    /// Hard clause count, computed without building clauses.
    pub fn count_hard(&self) -> u64 {
        let p = &self.params;
        let f = self.fixed.as_ref();
        count_clique_clauses(p.n, p.s, f, Color::One) + count_clique_clauses(p.n, p.t, f, Color::Two)
    }

    /// Streams the hard Ramsey clauses. Two calls yield identical streams.
    pub fn stream_hard<S: ClauseSink>(&self, sink: &mut S) -> Result<u64, S::Error> {
        let p = &self.params;
        let f = self.fixed.as_ref();
        let a = stream_clique_clauses(p.n, p.s, f, Color::One, sink)?;
        let b = stream_clique_clauses(p.n, p.t, f, Color::Two, sink)?;
        Ok(a + b)
    }

    /// Streams the Z-clauses; with a fixed coloring only undecided edges are tied.
    pub fn stream_z<S: ClauseSink>(&self, sink: &mut S) -> Result<u64, S::Error> {
        zclauses::stream(self.params.n, &self.z_mode, self.fixed.as_ref(), sink)
    }

    pub fn z_clauses(&self) -> Vec<Vec<Lit>> {
        let mut out = Vec::new();
        let Ok(_) = self.stream_z(&mut out);
        out
    }

    /// Rebuilds the coloring from a variable valuation (`value(var)`),
    /// taking fixed edges from the fixed coloring.
    pub fn decode<F: Fn(u32) -> bool>(&self, value: F) -> EdgeColoring {
        let n = self.params.n;
        EdgeColoring::from_fn(n, |i, j| {
            let fixed = self.fixed.as_ref().and_then(|c| c.get(i, j));
            fixed.or_else(|| {
                let var = edge_index(i, j, n).expect("i < j < n") as u32;
                Some(Color::from_bool(value(var)))
            })
        })
        .expect("n validated")
    }
}

/// Checks that a valuation satisfies every hard clause of `source`, streaming.
pub fn check_model<F: Fn(u32) -> bool>(source: &ClauseSource, value: F) -> bool {
    struct Checker<F>(F);
    impl<F: Fn(u32) -> bool> ClauseSink for Checker<F> {
        type Error = ();
        fn add_clause(&mut self, lits: &[Lit]) -> Result<(), ()> {
            if lits.iter().any(|l| (self.0)(l.var()) == l.is_positive()) {
                Ok(())
            } else {
                Err(())
            }
        }
    }
    source.stream_hard(&mut Checker(value)).is_ok()
}
