//! Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
//! fails. Expected values and time limits are pinned below.

mod common;

use common::{binomial, clique_numbers, mask_coloring, naive_cliques};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use ramsey_core::circulant::{largest_z, search_z, CirculantMode, SearchOptions};
use ramsey_core::clique::{enumerate_violations, verify_ramsey};
use ramsey_core::cnf::{ramsey_counts, stream_ramsey_clauses, stream_z_clauses, ClauseCounter, ClauseSource, Lit, RamseyParams, ZMode};
use ramsey_core::extension::unsettled_counts;
use ramsey_core::graph::format::parse_adjacency_list;
use ramsey_core::graph::Color;
use ramsey_core::relax::{relax_solve, AttemptStatus, RelaxOutcome, RelaxPolicy};
use ramsey_core::solver::{self, SolveBudget, SolveStatus};
use ramsey_core::witness::{self, HAND_FLIPS, R4_8_57_ADJACENCY};
use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

const WITNESS_LIMIT: Duration = Duration::from_secs(5);
const RESIDUAL_LIMIT: Duration = Duration::from_secs(30 * 60);
const TABLE_ROW_LIMIT: Duration = Duration::from_secs(2 * 60);
const SYMMETRIC_LIMIT: Duration = Duration::from_secs(30 * 60);
const RANDOM_SAMPLES: usize = 100_000;
const SOLVER_BUDGET: u64 = 1_000_000;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    ensure(took < limit, || format!("{what} took {took:.2?}, limit {limit:?}"))
}

fn witness_k57() -> Check {
    let started = Instant::now();
    let c = parse_adjacency_list(R4_8_57_ADJACENCY).map_err(|e| e.to_string())?;
    ensure(c.n() == 57 && c.is_total(), || format!("parsed n={} total={}", c.n(), c.is_total()))?;
    let report = verify_ramsey(&c, 4, 8).map_err(|e| e.to_string())?;
    within(WITNESS_LIMIT, started, "verification")?;
    ensure(report.valid, || format!("violations: {:?}", report.violations))?;
    Ok(format!("n=57 valid (4,8) in {:.2?}", started.elapsed()))
}

fn witness_k48_and_flips() -> Check {
    let base = witness::r4_7_48();
    ensure(verify_ramsey(&base, 4, 7).unwrap().valid, || "48-vertex prefix is not a (4,7)-coloring".into())?;
    let mut flipped = base.clone();
    for (i, j) in HAND_FLIPS {
        flipped = flipped.flip_edge(i, j).map_err(|e| e.to_string())?;
    }
    let report = verify_ramsey(&flipped, 4, 7).unwrap();
    ensure(report.valid, || format!("flipped coloring violates: {:?}", report.violations))?;
    ensure(flipped != base, || "flips changed nothing".into())?;
    Ok("prefix and flipped prefix both valid (4,7)".into())
}

fn encoder_counts() -> Check {
    let c = ramsey_counts(5, 5, 43).unwrap();
    ensure((c.variables, c.clauses) == (903, 1_925_196), || format!("(5,5,43) gave {c:?}"))?;
    let c = ramsey_counts(4, 7, 48).unwrap();
    ensure((c.variables, c.clauses) == (1128, 73_823_652), || format!("(4,7,48) gave {c:?}"))?;
    let z = stream_z_clauses(48, &ZMode::Full, &mut ClauseCounter::default()).unwrap();
    ensure(z == 2256, || format!("Z clauses at n=48: {z}"))?;
    for n in 2..=20usize {
        for s in 2..=n {
            for t in 2..=n {
                let streamed = stream_ramsey_clauses(&RamseyParams::new(s, t, n).unwrap(), &mut ClauseCounter::default()).unwrap();
                let closed = binomial(n as u64, s as u64) + binomial(n as u64, t as u64);
                ensure(streamed == closed && ramsey_counts(s, t, n).unwrap().clauses == closed, || {
                    format!("({s},{t},{n}): streamed {streamed}, closed form {closed}")
                })?;
            }
        }
    }
    Ok("published sizes exact; streamed = closed form for n <= 20".into())
}

fn residual_statistics() -> Check {
    const EXPECTED: (u64, u64, u64, u64) = (468, 3_480_171, 56, 936);
    let started = Instant::now();
    let r = unsettled_counts(&witness::r4_7_48(), 4, 8, 57).map_err(|e| e.to_string())?;
    within(RESIDUAL_LIMIT, started, "residual count")?;
    let got = (r.unsettled_vars, r.unsettled_clauses, r.z_vars, r.z_clauses);
    ensure(got == EXPECTED, || format!("expected {EXPECTED:?}, got {got:?}"))?;
    Ok(format!("{r}"))
}

fn table_small_rows() -> Check {
    let rows = [((3, 3), 8, (5, 2)), ((3, 4), 10, (8, 2)), ((3, 5), 15, (13, 3)), ((3, 6), 18, (16, 7)), ((4, 4), 19, (17, 2))];
    let mut summary = Vec::new();
    for ((s, t), n_max, expected) in rows {
        let started = Instant::now();
        let r = largest_z(s, t, n_max, CirculantMode::Full, &SearchOptions::all())
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("({s},{t}): no circulant witness at all"))?;
        within(TABLE_ROW_LIMIT, started, &format!("row ({s},{t})"))?;
        ensure(r.exhaustive && (r.n, r.count) == expected, || {
            format!("({s},{t}): expected {expected:?}, got ({}, {})", r.n, r.count)
        })?;
        summary.push(format!("({s},{t})->{}/{}", r.n, r.count));
    }
    Ok(summary.join(" "))
}

fn symmetric_witness() -> Check {
    let started = Instant::now();
    let r = search_z(4, 7, 46, CirculantMode::Symmetric, &SearchOptions::first()).map_err(|e| e.to_string())?;
    within(SYMMETRIC_LIMIT, started, "symmetric search")?;
    let z = r.solutions.first().ok_or("no symmetric solution")?;
    let c = z.to_coloring().unwrap();
    ensure(verify_ramsey(&c, 4, 7).unwrap().valid, || "expansion is not a (4,7)-coloring".into())?;
    Ok(format!("z={} in {:.2?}", z.to_bit_string(), started.elapsed()))
}

fn solver_oracle() -> Check {
    let mut instances = 0;
    for n in 2..=6usize {
        let edges = n * (n - 1) / 2;
        let achievable: HashSet<(usize, usize)> = (0u64..1 << edges).map(|m| clique_numbers(&mask_coloring(n, m))).collect();
        for s in 2..=n {
            for t in 2..=n {
                let expected = achievable.iter().any(|&(a, b)| a < s && b < t);
                let source = ClauseSource::ramsey(s, t, n).unwrap();
                let out = solver::solve(&source, &[], &SolveBudget::conflicts(SOLVER_BUDGET, 0)).unwrap();
                match out.status {
                    SolveStatus::Model(a) => {
                        ensure(expected, || format!("({s},{t},{n}): model where none exists"))?;
                        let c = source.decode(|v| a.value(v));
                        ensure(verify_ramsey(&c, s, t).unwrap().valid, || format!("({s},{t},{n}): invalid model"))?;
                    }
                    SolveStatus::HardUnsat => ensure(!expected, || format!("({s},{t},{n}): missed a model"))?,
                    SolveStatus::Exhausted => return Err(format!("({s},{t},{n}): budget exhausted")),
                }
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances agree with enumeration"))
}

fn relaxation_properties() -> Check {
    let mut runs = 0;
    for (s, t, n) in [(3, 4, 8), (3, 5, 12), (4, 4, 13)] {
        let source = ClauseSource::ramsey(s, t, n).unwrap().with_z(ZMode::Full).unwrap();
        let mut soft = source.z_clauses();
        for v in source.num_edge_vars() as u32 + 1..=source.num_vars() as u32 {
            soft.push(vec![Lit::pos(v)]);
            soft.push(vec![Lit::neg(v)]);
        }
        for fraction in [0.25, 0.5, 1.0] {
            for seed in 0..4 {
                let budget = SolveBudget::conflicts(4, seed);
                let r = relax_solve(&source, &soft, &RelaxPolicy::new(fraction, 10, budget).unwrap()).unwrap();
                for w in r.trace.rounds.windows(2) {
                    ensure(w[1].active < w[0].active, || format!("soft set did not shrink:\n{}", r.trace))?;
                }
                if let Some(c) = &r.coloring {
                    ensure(verify_ramsey(c, s, t).unwrap().valid, || "model is not a witness".into())?;
                }
                if fraction == 1.0 {
                    let first = &r.trace.rounds[0];
                    ensure(first.status == AttemptStatus::Exhausted && first.dropped == soft.len(), || {
                        "round one did not drop everything".into()
                    })?;
                    let plain = solver::solve(&source, &[], &budget.with_seed(seed + 1)).unwrap();
                    ensure(r.trace.rounds.get(1).map(|x| x.stats) == Some(plain.stats), || {
                        "round two differs from a plain solve".into()
                    })?;
                    let same = match plain.status {
                        SolveStatus::Model(a) => r.assignment == Some(a),
                        SolveStatus::HardUnsat => r.trace.outcome == RelaxOutcome::HardUnsat,
                        SolveStatus::Exhausted => r.trace.outcome == RelaxOutcome::TotallyRelaxedFailure,
                    };
                    ensure(same, || "round two outcome differs from a plain solve".into())?;
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} relaxation runs"))
}

fn verifier_oracle() -> Check {
    let agree = |c: &ramsey_core::graph::EdgeColoring, s: usize, t: usize| -> Result<(), String> {
        let report = enumerate_violations(c, s, t, usize::MAX).unwrap();
        let got: Vec<(Color, Vec<usize>)> = report.violations.into_iter().map(|v| (v.color, v.vertices)).collect();
        let mut expected: Vec<(Color, Vec<usize>)> = naive_cliques(c, s, Color::One).into_iter().map(|v| (Color::One, v)).collect();
        expected.extend(naive_cliques(c, t, Color::Two).into_iter().map(|v| (Color::Two, v)));
        ensure(got == expected, || format!("mismatch at n={} s={s} t={t}: {c:?}", c.n()))?;
        ensure(verify_ramsey(c, s, t).unwrap().valid == expected.is_empty(), || "verdict mismatch".into())
    };
    let mut exhaustive = 0;
    for n in 1..=5usize {
        for mask in 0u64..1 << (n * (n - 1) / 2) {
            let c = mask_coloring(n, mask);
            for s in 1..=n + 1 {
                for t in 1..=n + 1 {
                    agree(&c, s, t)?;
                    exhaustive += 1;
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0xacce);
    for sample in 0..RANDOM_SAMPLES {
        let n = 6 + sample % 4;
        let mask = rng.random::<u64>() & ((1u64 << (n * (n - 1) / 2)) - 1);
        agree(&mask_coloring(n, mask), rng.random_range(2..=5), rng.random_range(2..=6))?;
    }
    Ok(format!("{exhaustive} exhaustive + {RANDOM_SAMPLES} random cases, 0 mismatches"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("witness-k57-r48", witness_k57),
        ("witness-k48-and-flips", witness_k48_and_flips),
        ("encoder-counts", encoder_counts),
        ("residual-statistics", residual_statistics),
        ("circulant-table-small-rows", table_small_rows),
        ("symmetric-circulant-k46", symmetric_witness),
        ("solver-vs-enumeration", solver_oracle),
        ("relaxation-properties", relaxation_properties),
        ("verifier-vs-naive", verifier_oracle),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = started.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{took:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{took:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
