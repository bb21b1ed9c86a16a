//! Growing a witness on `m` vertices into one on `n_target > m` vertices.
//!
//! The base coloring is fixed on vertices `0..m` and the new vertices
//! `m..n_target` start undecided. The hard clauses are the Ramsey clauses not
//! settled by the base; the soft clauses tie every undecided edge to its
//! distance variable. The pair goes through [`relax_solve`].

use crate::clique::{verify_ramsey, VerifyError};
use crate::cnf::{residual_counts, ClauseSource, EncodeError, ZMode};
use crate::graph::{EdgeColoring, GraphError};
use crate::relax::{relax_solve, RelaxError, RelaxOutcome, RelaxPolicy, RelaxTrace};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtendError {
    #[error("base has {base} vertices; the target must be larger, got {target}")]
    NotLarger { base: usize, target: usize },
    #[error("base coloring is not a ({s},{t})-witness: {reason}")]
    InvalidBase { s: usize, t: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Relax(#[from] RelaxError),
}

/// Size of the residual instance behind an extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidualStats {
    pub unsettled_vars: u64,
    pub unsettled_clauses: u64,
    pub z_vars: u64,
    /// Two per undecided edge.
    pub z_clauses: u64,
}

impl fmt::Display for ResidualStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unsettled_vars={} unsettled_clauses={} z_vars={} z_clauses={}",
            self.unsettled_vars, self.unsettled_clauses, self.z_vars, self.z_clauses
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExtendOutcome {
    /// A verified witness on `n_target` vertices that restricts to the base.
    Extended(EdgeColoring),
    /// The residual Ramsey clauses are unsatisfiable: no completion exists.
    NoExtension,
    /// The relaxation loop ended without a model or a proof.
    GaveUp(RelaxOutcome),
}

#[derive(Clone, Debug)]
pub struct ExtendResult {
    pub outcome: ExtendOutcome,
    pub stats: ResidualStats,
    pub trace: RelaxTrace,
}

impl ExtendResult {
    pub fn coloring(&self) -> Option<&EdgeColoring> {
        match &self.outcome {
            ExtendOutcome::Extended(c) => Some(c),
            _ => None,
        }
    }
}

/// The base embedded into `K_{n_target}` with every new edge undecided.
pub fn embed_base(base: &EdgeColoring, n_target: usize) -> Result<EdgeColoring, ExtendError> {
    if n_target <= base.n() {
        return Err(ExtendError::NotLarger { base: base.n(), target: n_target });
    }
    base.require_total()?;
    Ok(base.embed(n_target)?)
}

/// Residual sizes for extending `base` to a (s,t)-witness on `n_target`
/// vertices, without solving. A base that is already as large as the target
/// is allowed here and yields an empty residual.
pub fn unsettled_counts(base: &EdgeColoring, s: usize, t: usize, n_target: usize) -> Result<ResidualStats, ExtendError> {
    if n_target < base.n() {
        return Err(ExtendError::NotLarger { base: base.n(), target: n_target });
    }
    let fixed = base.embed(n_target)?;
    let r = residual_counts(&fixed, s, t)?;
    let undecided = fixed.undecided_count() as u64;
    Ok(ResidualStats {
        unsettled_vars: r.unsettled_vars,
        unsettled_clauses: r.unsettled_clauses,
        z_vars: (n_target - 1) as u64,
        z_clauses: 2 * undecided,
    })
}

/// Checks that `base` is a total (s,t)-witness.
pub fn check_base(base: &EdgeColoring, s: usize, t: usize) -> Result<(), ExtendError> {
    base.require_total()?;
    let report = verify_ramsey(base, s, t)?;
    if let Some(v) = report.violations.first() {
        return Err(ExtendError::InvalidBase {
            s,
            t,
            reason: format!("Color {} clique on {:?}", v.color.number(), v.vertices),
        });
    }
    Ok(())
}

/// Extends `base` (an (s,t)-witness itself) to `n_target` vertices.
pub fn extend(
    base: &EdgeColoring,
    s: usize,
    t: usize,
    n_target: usize,
    policy: &RelaxPolicy,
) -> Result<ExtendResult, ExtendError> {
    check_base(base, s, t)?;
    let fixed = embed_base(base, n_target)?;
    let stats = unsettled_counts(base, s, t, n_target)?;
    let source = ClauseSource::ramsey(s, t, n_target)?.with_fixed(fixed)?.with_z(ZMode::Full)?;
    let soft = source.z_clauses();
    let relaxed = relax_solve(&source, &soft, policy)?;
    let outcome = match (relaxed.trace.outcome, relaxed.coloring) {
        (RelaxOutcome::Model, Some(coloring)) => {
            debug_assert_eq!(coloring.induced_subcoloring(base.n()).as_ref(), Ok(base));
            if !verify_ramsey(&coloring, s, t)?.valid {
                // The solver only reports models of the hard clauses.
                unreachable!("solver model violates the residual clauses");
            }
            ExtendOutcome::Extended(coloring)
        }
        (RelaxOutcome::HardUnsat, _) => ExtendOutcome::NoExtension,
        (other, _) => ExtendOutcome::GaveUp(other),
    };
    Ok(ExtendResult { outcome, stats, trace: relaxed.trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Color, ZVector};
    use crate::solver::SolveBudget;

    fn policy() -> RelaxPolicy {
        RelaxPolicy::new(0.5, 10, SolveBudget::conflicts(20_000, 1)).unwrap()
    }

    #[test]
    fn pentagon_to_eight_vertices() {
        let base = ZVector::parse("1001").unwrap().to_coloring().unwrap();
        let r = extend(&base, 3, 4, 8, &policy()).unwrap();
        let c = r.coloring().expect("an extension exists");
        assert_eq!(c.n(), 8);
        assert_eq!(c.induced_subcoloring(5).unwrap(), base);
        assert!(verify_ramsey(c, 3, 4).unwrap().valid);
    }

    #[test]
    fn edge_to_five_vertices() {
        let base = EdgeColoring::uniform(2, Color::Two).unwrap();
        let r = extend(&base, 3, 3, 5, &policy()).unwrap();
        assert!(r.coloring().is_some());
    }

    #[test]
    fn no_extension_beyond_the_ramsey_number() {
        let base = ZVector::parse("1001").unwrap().to_coloring().unwrap();
        let r = extend(&base, 3, 3, 6, &policy()).unwrap();
        assert_eq!(r.outcome, ExtendOutcome::NoExtension);
    }

    #[test]
    fn rejects_bad_bases() {
        let mono = EdgeColoring::uniform(3, Color::One).unwrap();
        assert!(matches!(extend(&mono, 3, 3, 5, &policy()), Err(ExtendError::InvalidBase { .. })));
        let partial = EdgeColoring::undecided(3).unwrap();
        assert!(matches!(extend(&partial, 3, 3, 5, &policy()), Err(ExtendError::Graph(_))));
        let base = EdgeColoring::uniform(2, Color::Two).unwrap();
        assert!(matches!(extend(&base, 3, 3, 2, &policy()), Err(ExtendError::NotLarger { .. })));
    }

    #[test]
    fn counts_for_total_and_empty_bases() {
        let total = ZVector::parse("1001").unwrap().to_coloring().unwrap();
        let r = unsettled_counts(&total, 3, 3, 5).unwrap();
        assert_eq!((r.unsettled_vars, r.unsettled_clauses, r.z_clauses), (0, 0, 0));
        // A violated clique leaves an empty clause behind.
        let mono = EdgeColoring::uniform(4, Color::Two).unwrap();
        assert_eq!(unsettled_counts(&mono, 3, 4, 4).unwrap().unsettled_clauses, 1);
        let empty = EdgeColoring::undecided(0).unwrap();
        let r = unsettled_counts(&empty, 5, 5, 43).unwrap();
        assert_eq!((r.unsettled_vars, r.unsettled_clauses), (903, 1_925_196));
        assert_eq!((r.z_vars, r.z_clauses), (42, 1806));
    }
}
