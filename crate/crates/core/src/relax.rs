//! Relax-and-restart over soft distance clauses.
//!
//! Each round solves the hard clauses with the currently active soft set.
//! If the attempt runs out of budget, the highest-penalty soft clauses are
//! removed and a new attempt starts. The loop ends with a model, a hard
//! refutation, total relaxation, or the round limit.

use crate::cnf::{ClauseSource, Lit};
use crate::graph::EdgeColoring;
use crate::solver::{self, Assignment, PenaltyLedger, SolveBudget, SolveError, SolveStats, SolveStatus};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelaxError {
    #[error("drop fraction must lie in (0, 1], got {0}")]
    BadFraction(f64),
    #[error("at least one round is required")]
    NoRounds,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelaxPolicy {
    /// Share of the active soft set removed after a failed round.
    pub drop_fraction: f64,
    pub max_rounds: usize,
    /// Per-attempt budget; round `r` uses seed `budget.seed + r - 1`.
    pub budget: SolveBudget,
    /// Rank victims by penalties summed over all rounds so far instead of the
    /// last round alone.
    pub cumulative_penalties: bool,
}

impl RelaxPolicy {
    pub fn new(drop_fraction: f64, max_rounds: usize, budget: SolveBudget) -> Result<Self, RelaxError> {
        if !(drop_fraction > 0.0 && drop_fraction <= 1.0) {
            return Err(RelaxError::BadFraction(drop_fraction));
        }
        if max_rounds == 0 {
            return Err(RelaxError::NoRounds);
        }
        Ok(RelaxPolicy { drop_fraction, max_rounds, budget, cumulative_penalties: false })
    }

    pub fn cumulative(self) -> Self {
        RelaxPolicy { cumulative_penalties: true, ..self }
    }
}

/// The `ceil(fraction * |active|)` active clauses with the highest penalty,
/// ties going to the lower id. Returned in ascending id order.
pub fn pick_victims(ledger: &PenaltyLedger, active: &[usize], fraction: f64) -> Vec<usize> {
    if active.is_empty() {
        return Vec::new();
    }
    let want = ((fraction * active.len() as f64).ceil() as usize).clamp(1, active.len());
    let mut ranked = active.to_vec();
    ranked.sort_by(|&a, &b| ledger.get(b).cmp(&ledger.get(a)).then(a.cmp(&b)));
    ranked.truncate(want);
    ranked.sort_unstable();
    ranked
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttemptStatus {
    Model,
    HardUnsat,
    Exhausted,
}

impl AttemptStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            AttemptStatus::Model => "model",
            AttemptStatus::HardUnsat => "hard-unsat",
            AttemptStatus::Exhausted => "exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub round: usize,
    pub status: AttemptStatus,
    pub active: usize,
    pub dropped: usize,
    /// Active soft clauses after this round's drop, over the original count.
    pub kept_fraction: f64,
    pub stats: SolveStats,
}

impl fmt::Display for RoundRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "round={} status={} active={} dropped={} kept={:.4} conflicts={} soft_conflicts={} decisions={} restarts={}",
            self.round,
            self.status.as_str(),
            self.active,
            self.dropped,
            self.kept_fraction,
            self.stats.conflicts,
            self.stats.soft_conflicts,
            self.stats.decisions,
            self.stats.restarts
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelaxOutcome {
    Model,
    HardUnsat,
    /// Every soft clause was removed and the last attempt still failed.
    TotallyRelaxedFailure,
    /// `max_rounds` attempts failed with soft clauses still active.
    RoundLimit,
}

impl RelaxOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            RelaxOutcome::Model => "model",
            RelaxOutcome::HardUnsat => "hard-unsat",
            RelaxOutcome::TotallyRelaxedFailure => "totally-relaxed-failure",
            RelaxOutcome::RoundLimit => "round-limit",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxTrace {
    pub original_soft: usize,
    pub rounds: Vec<RoundRecord>,
    pub outcome: RelaxOutcome,
    /// Soft clauses (of the original set) the final model satisfies.
    pub satisfied_soft: Option<usize>,
    /// Original soft ids still active when the loop ended.
    pub active: Vec<usize>,
}

impl fmt::Display for RelaxTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rounds {
            writeln!(f, "{r}")?;
        }
        write!(
            f,
            "outcome={} rounds={} soft={} active={}",
            self.outcome.as_str(),
            self.rounds.len(),
            self.original_soft,
            self.active.len()
        )?;
        if let Some(sat) = self.satisfied_soft {
            write!(f, " satisfied={sat}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RelaxResult {
    pub coloring: Option<EdgeColoring>,
    pub assignment: Option<Assignment>,
    pub trace: RelaxTrace,
}

/// Runs the relax-and-restart loop.
pub fn relax_solve(hard: &ClauseSource, soft: &[Vec<Lit>], policy: &RelaxPolicy) -> Result<RelaxResult, RelaxError> {
    let total = soft.len();
    let mut active: Vec<usize> = (0..total).collect();
    let mut cumulative = PenaltyLedger::new(total);
    let mut rounds = Vec::new();

    for round in 1..=policy.max_rounds {
        let subset: Vec<Vec<Lit>> = active.iter().map(|&id| soft[id].clone()).collect();
        let budget = policy.budget.with_seed(policy.budget.seed.wrapping_add(round as u64 - 1));
        let outcome = solver::solve(hard, &subset, &budget)?;

        // Penalties come back indexed by position in `subset`.
        let mut ledger = PenaltyLedger::new(total);
        let mut counts = vec![0u64; total];
        for (pos, &id) in active.iter().enumerate() {
            counts[id] = outcome.penalties.get(pos);
        }
        ledger.accumulate(&PenaltyLedger::from_counts(counts));
        cumulative.accumulate(&ledger);

        let mut record = RoundRecord {
            round,
            status: AttemptStatus::Exhausted,
            active: active.len(),
            dropped: 0,
            kept_fraction: if total == 0 { 1.0 } else { active.len() as f64 / total as f64 },
            stats: outcome.stats,
        };
        match outcome.status {
            SolveStatus::Model(assignment) => {
                record.status = AttemptStatus::Model;
                rounds.push(record);
                let satisfied = soft.iter().filter(|c| assignment.satisfies(c)).count();
                let coloring = hard.decode(|v| assignment.value(v));
                return Ok(RelaxResult {
                    coloring: Some(coloring),
                    assignment: Some(assignment),
                    trace: RelaxTrace {
                        original_soft: total,
                        rounds,
                        outcome: RelaxOutcome::Model,
                        satisfied_soft: Some(satisfied),
                        active,
                    },
                });
            }
            SolveStatus::HardUnsat => {
                record.status = AttemptStatus::HardUnsat;
                rounds.push(record);
                return Ok(finish(total, rounds, RelaxOutcome::HardUnsat, active));
            }
            SolveStatus::Exhausted => {
                if active.is_empty() {
                    rounds.push(record);
                    return Ok(finish(total, rounds, RelaxOutcome::TotallyRelaxedFailure, active));
                }
                if round == policy.max_rounds {
                    rounds.push(record);
                    break;
                }
                let basis = if policy.cumulative_penalties { &cumulative } else { &ledger };
                let victims = pick_victims(basis, &active, policy.drop_fraction);
                active.retain(|id| victims.binary_search(id).is_err());
                record.dropped = victims.len();
                record.kept_fraction = active.len() as f64 / total as f64;
                rounds.push(record);
            }
        }
    }
    Ok(finish(total, rounds, RelaxOutcome::RoundLimit, active))
}

fn finish(total: usize, rounds: Vec<RoundRecord>, outcome: RelaxOutcome, active: Vec<usize>) -> RelaxResult {
    RelaxResult {
        coloring: None,
        assignment: None,
        trace: RelaxTrace { original_soft: total, rounds, outcome, satisfied_soft: None, active },
    }
}
