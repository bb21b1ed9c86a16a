//! In-process SAT search over hard clauses plus penalized soft clauses.
//!
//! A soft clause is enforced while active. When it is falsified during
//! search it is deactivated for the rest of the call and its penalty counter
//! increases; soft clauses that serve as reasons in conflict analysis also
//! collect penalty. A returned model satisfies every hard clause and every
//! soft clause still active at the end.
//!
//! Decisions prefer variables marked with [`Solver::prefer`] (the distance
//! variables, for Ramsey instances), then VSIDS activity; phases are saved,
//! restarts follow the Luby sequence.

mod engine;
mod heap;

use crate::cnf::{ClauseSink, ClauseSource, Lit};
use engine::{Engine, RawStatus};
use std::convert::Infallible;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("literal {lit} refers to variable outside 1..={max}")]
    LiteralOutOfRange { lit: i32, max: u32 },
    #[error("a budget needs a conflict limit or a time limit")]
    Unbounded,
}

/// Limits for one solve call. At least one bound is finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveBudget {
    pub max_conflicts: Option<u64>,
    pub max_seconds: Option<f64>,
    pub seed: u64,
}

impl SolveBudget {
    pub fn new(max_conflicts: Option<u64>, max_seconds: Option<f64>, seed: u64) -> Result<Self, SolveError> {
        if max_conflicts.is_none() && max_seconds.is_none() {
            return Err(SolveError::Unbounded);
        }
        Ok(SolveBudget { max_conflicts, max_seconds, seed })
    }

    pub fn conflicts(max_conflicts: u64, seed: u64) -> Self {
        SolveBudget { max_conflicts: Some(max_conflicts), max_seconds: None, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SolveBudget { seed, ..self }
    }
}

/// Per-soft-clause conflict counters, indexed by soft clause id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PenaltyLedger {
    counts: Vec<u64>,
}

impl PenaltyLedger {
    pub fn new(len: usize) -> Self {
        PenaltyLedger { counts: vec![0; len] }
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        PenaltyLedger { counts }
    }

    pub fn get(&self, id: usize) -> u64 {
        self.counts.get(id).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Adds `other`'s counters pointwise.
    pub fn accumulate(&mut self, other: &PenaltyLedger) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Pointwise `self >= other`.
    pub fn dominates(&self, other: &PenaltyLedger) -> bool {
        self.counts.len() >= other.counts.len() && self.counts.iter().zip(&other.counts).all(|(a, b)| a >= b)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Hard and soft conflicts together; this is what the budget counts.
    pub conflicts: u64,
    pub soft_conflicts: u64,
    pub soft_deactivated: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

/// Values of variables `1..=V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn from_values(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Value of DIMACS variable `var`; variables past the end read false.
    pub fn value(&self, var: u32) -> bool {
        var >= 1 && self.values.get(var as usize - 1).copied().unwrap_or(false)
    }

    pub fn satisfies(&self, clause: &[Lit]) -> bool {
        clause.iter().any(|l| self.value(l.var()) == l.is_positive())
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Model(Assignment),
    /// The hard clauses alone are unsatisfiable.
    HardUnsat,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub penalties: PenaltyLedger,
    /// Which soft clauses were still active when the call ended.
    pub active_soft: Vec<bool>,
    pub stats: SolveStats,
}

/// Incremental front end: add clauses, then call [`solve`](Solver::solve) once.
pub struct Solver<'a> {
    engine: Engine<'a>,
    num_vars: u32,
    soft_count: usize,
}

impl<'a> Solver<'a> {
    pub fn new(num_vars: u32) -> Self {
        Solver { engine: Engine::new(num_vars as usize), num_vars, soft_count: 0 }
    }

    fn internal(&self, lits: &[Lit]) -> Result<Vec<u32>, SolveError> {
        lits.iter()
            .map(|l| {
                if l.var() == 0 || l.var() > self.num_vars {
                    Err(SolveError::LiteralOutOfRange { lit: l.to_dimacs(), max: self.num_vars })
                } else {
                    Ok(((l.var() - 1) << 1) | u32::from(!l.is_positive()))
                }
            })
            .collect()
    }

    pub fn add_clause(&mut self, lits: &[Lit]) -> Result<(), SolveError> {
        let lits = self.internal(lits)?;
        self.engine.add_clause(lits, false);
        Ok(())
    }

    /// Adds a soft clause and returns its id (ids count from 0).
    pub fn add_soft(&mut self, lits: &[Lit]) -> Result<usize, SolveError> {
        let lits = self.internal(lits)?;
        self.engine.add_clause(lits, true);
        self.soft_count += 1;
        Ok(self.soft_count - 1)
    }

    /// Decide this variable before unmarked ones.
    pub fn prefer(&mut self, var: u32) {
        if var >= 1 && var <= self.num_vars {
            self.engine.prefer(var as usize - 1);
        }
    }

    /// Called at every restart with the running stats and penalties.
    pub fn on_restart<F: FnMut(&SolveStats, &PenaltyLedger) + 'a>(&mut self, hook: F) {
        self.engine.restart_hook = Some(Box::new(hook));
    }

    pub fn solve(mut self, budget: &SolveBudget) -> SolveOutcome {
        let status = match self.engine.solve(budget) {
            RawStatus::Model => {
                debug_assert!(self.engine.assignment_satisfies_live());
                SolveStatus::Model(self.engine.assignment())
            }
            RawStatus::HardUnsat => SolveStatus::HardUnsat,
            RawStatus::Exhausted => SolveStatus::Exhausted,
        };
        SolveOutcome {
            status,
            penalties: self.engine.penalties(),
            active_soft: self.engine.soft_active().to_vec(),
            stats: self.engine.stats(),
        }
    }
}

struct Loader<'s, 'a>(&'s mut Solver<'a>);

impl ClauseSink for Loader<'_, '_> {
    type Error = SolveError;
    fn add_clause(&mut self, lits: &[Lit]) -> Result<(), SolveError> {
        self.0.add_clause(lits)
    }
}

/// Loads `hard`'s Ramsey clauses and the given soft clauses into a solver
/// with the distance variables preferred.
pub fn load<'a>(hard: &ClauseSource, soft: &[Vec<Lit>]) -> Result<Solver<'a>, SolveError> {
    let num_vars = u32::try_from(hard.num_vars()).map_err(|_| SolveError::LiteralOutOfRange {
        lit: i32::MAX,
        max: u32::MAX,
    })?;
    let mut solver = Solver::new(num_vars);
    hard.stream_hard(&mut Loader(&mut solver))?;
    for clause in soft {
        solver.add_soft(clause)?;
    }
    for var in hard.num_edge_vars() as u32 + 1..=num_vars {
        solver.prefer(var);
    }
    Ok(solver)
}

/// Solves `hard` with `soft` as penalized clauses.
pub fn solve(hard: &ClauseSource, soft: &[Vec<Lit>], budget: &SolveBudget) -> Result<SolveOutcome, SolveError> {
    Ok(load(hard, soft)?.solve(budget))
}

/// Streams `hard` and checks every Ramsey clause against `assignment`.
pub fn check_model(hard: &ClauseSource, assignment: &Assignment) -> bool {
    crate::cnf::check_model(hard, |var| assignment.value(var))
}

/// Collects clauses into a plain list; handy for soft sets.
pub fn collect_clauses<F>(stream: F) -> Vec<Vec<Lit>>
where
    F: FnOnce(&mut Vec<Vec<Lit>>) -> Result<u64, Infallible>,
{
    let mut out = Vec::new();
    let Ok(_) = stream(&mut out);
    out
}
