use ramsey_core::clique::verify_ramsey;
use ramsey_core::cnf::{ClauseSource, Lit, ZMode};
use ramsey_core::relax::{relax_solve, AttemptStatus, RelaxOutcome, RelaxPolicy, RelaxResult};
use ramsey_core::solver::{self, SolveBudget, SolveStatus};

/// Soft set: the distance clauses plus units pulling every distance variable
/// both ways, so something has to give.
fn conflicting_soft(source: &ClauseSource) -> Vec<Vec<Lit>> {
    let mut soft = source.z_clauses();
    let first_z = source.num_edge_vars() as u32 + 1;
    for v in first_z..=source.num_vars() as u32 {
        soft.push(vec![Lit::pos(v)]);
        soft.push(vec![Lit::neg(v)]);
    }
    soft
}

fn check_invariants(source: &ClauseSource, soft: &[Vec<Lit>], r: &RelaxResult) {
    let rounds = &r.trace.rounds;
    assert!(!rounds.is_empty());
    assert_eq!(rounds[0].active, soft.len());
    for pair in rounds.windows(2) {
        assert_eq!(pair[0].status, AttemptStatus::Exhausted);
        assert!(pair[1].active < pair[0].active, "active set must shrink: {}", r.trace);
        assert_eq!(pair[1].active, pair[0].active - pair[0].dropped);
    }
    match r.trace.outcome {
        RelaxOutcome::Model => {
            let c = r.coloring.as_ref().unwrap();
            let p = source.params();
            assert!(verify_ramsey(c, p.s(), p.t()).unwrap().valid);
            let a = r.assignment.as_ref().unwrap();
            assert!(solver::check_model(source, a));
            let satisfied = soft.iter().filter(|c| a.satisfies(c)).count();
            assert_eq!(r.trace.satisfied_soft, Some(satisfied));
        }
        RelaxOutcome::HardUnsat => assert!(r.coloring.is_none()),
        RelaxOutcome::TotallyRelaxedFailure => assert!(r.trace.active.is_empty()),
        RelaxOutcome::RoundLimit => assert!(!r.trace.active.is_empty()),
    }
}

#[test]
fn invariants_across_policies() {
    let fixtures = [(3, 4, 8), (3, 4, 7), (3, 5, 12), (4, 4, 13), (3, 3, 6)];
    for (s, t, n) in fixtures {
        let source = ClauseSource::ramsey(s, t, n).unwrap().with_z(ZMode::Full).unwrap();
        let soft = conflicting_soft(&source);
        for fraction in [0.1, 0.25, 0.5, 1.0] {
            for conflicts in [1, 5, 50, 5000] {
                for seed in 0..3 {
                    let policy = RelaxPolicy::new(fraction, 12, SolveBudget::conflicts(conflicts, seed)).unwrap();
                    for policy in [policy, policy.cumulative()] {
                        let r = relax_solve(&source, &soft, &policy).unwrap();
                        check_invariants(&source, &soft, &r);
                    }
                }
            }
        }
    }
}

#[test]
fn unsatisfiable_hard_part_is_reported() {
    let source = ClauseSource::ramsey(3, 3, 6).unwrap().with_z(ZMode::Full).unwrap();
    let soft = source.z_clauses();
    let policy = RelaxPolicy::new(0.5, 20, SolveBudget::conflicts(100_000, 0)).unwrap();
    let r = relax_solve(&source, &soft, &policy).unwrap();
    assert_eq!(r.trace.outcome, RelaxOutcome::HardUnsat);
}

#[test]
fn satisfiable_distance_set_needs_no_relaxation() {
    let source = ClauseSource::ramsey(3, 3, 5).unwrap().with_z(ZMode::Full).unwrap();
    let soft = source.z_clauses();
    let policy = RelaxPolicy::new(0.5, 5, SolveBudget::conflicts(10_000, 0)).unwrap();
    let r = relax_solve(&source, &soft, &policy).unwrap();
    assert_eq!(r.trace.outcome, RelaxOutcome::Model);
    assert_eq!(r.trace.rounds.len(), 1);
    assert_eq!(r.trace.active.len(), soft.len());
    assert_eq!(r.trace.satisfied_soft, Some(soft.len()));
    // All distance clauses hold, so the model is circulant.
    let c = r.coloring.unwrap();
    for (i, j, color) in c.edges() {
        assert_eq!(color, c.get(0, j - i).into());
    }
}

#[test]
fn full_drop_makes_round_two_a_plain_solve() {
    for (s, t, n) in [(3, 4, 8), (3, 5, 12), (4, 4, 12)] {
        let source = ClauseSource::ramsey(s, t, n).unwrap().with_z(ZMode::Full).unwrap();
        let soft = conflicting_soft(&source);
        for seed in 0..5u64 {
            let budget = SolveBudget::conflicts(2, seed);
            let policy = RelaxPolicy::new(1.0, 2, budget).unwrap();
            let r = relax_solve(&source, &soft, &policy).unwrap();
            assert_eq!(r.trace.rounds[0].status, AttemptStatus::Exhausted);
            assert_eq!(r.trace.rounds[0].dropped, soft.len());
            let plain = solver::solve(&source, &[], &budget.with_seed(seed + 1)).unwrap();
            assert_eq!(plain.stats, r.trace.rounds[1].stats);
            match plain.status {
                SolveStatus::Model(a) => assert_eq!(r.assignment, Some(a)),
                SolveStatus::HardUnsat => assert_eq!(r.trace.outcome, RelaxOutcome::HardUnsat),
                SolveStatus::Exhausted => assert_eq!(r.trace.outcome, RelaxOutcome::TotallyRelaxedFailure),
            }
        }
    }
}

#[test]
fn trace_lines_parse_as_key_values() {
    let source = ClauseSource::ramsey(3, 4, 8).unwrap().with_z(ZMode::Full).unwrap();
    let soft = conflicting_soft(&source);
    let policy = RelaxPolicy::new(0.5, 6, SolveBudget::conflicts(3, 1)).unwrap();
    let r = relax_solve(&source, &soft, &policy).unwrap();
    let text = r.trace.to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), r.trace.rounds.len() + 1);
    for (line, round) in lines.iter().zip(&r.trace.rounds) {
        let fields: Vec<(&str, &str)> = line.split(' ').map(|kv| kv.split_once('=').unwrap()).collect();
        let keys: Vec<&str> = fields.iter().map(|f| f.0).collect();
        assert_eq!(
            keys,
            ["round", "status", "active", "dropped", "kept", "conflicts", "soft_conflicts", "decisions", "restarts"]
        );
        assert_eq!(fields[0].1.parse::<usize>().unwrap(), round.round);
        assert_eq!(fields[2].1.parse::<usize>().unwrap(), round.active);
    }
    assert!(lines.last().unwrap().starts_with("outcome="));
}
