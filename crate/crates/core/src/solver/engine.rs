//! Conflict-driven clause learning with penalized soft clauses.
//!
//! Hard clauses behave as in any CDCL solver. A soft clause propagates while
//! active; when it is falsified it is deactivated for the rest of the solve
//! call, its penalty goes up, and propagation carries on. Soft clauses used
//! as reasons during conflict analysis also collect a penalty.
//!
//! Every learnt clause records which soft clauses its derivation rests on. A
//! level-0 refutation with an empty record refutes the hard clauses; one with
//! a nonempty record deactivates those soft clauses, discards learnt clauses
//! that depended on any inactive soft clause, and restarts from scratch.

use super::heap::VarHeap;
use super::{Assignment, PenaltyLedger, SolveBudget, SolveStats};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use std::time::Instant;

const NO_REASON: u32 = u32::MAX;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RESTART_BASE: u64 = 100;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Hard,
    Soft(u32),
    Learnt,
}

struct Clause {
    lits: Vec<u32>,
    kind: Kind,
    /// Sorted soft ids the clause was derived from (learnt clauses only).
    deps: Vec<u32>,
    activity: f64,
    removed: bool,
}

#[derive(Clone, Copy)]
struct Watch {
    cref: u32,
    blocker: u32,
}

#[inline]
fn var_of(l: u32) -> usize {
    (l >> 1) as usize
}

#[inline]
fn neg(l: u32) -> u32 {
    l ^ 1
}

pub(super) enum RawStatus {
    Model,
    HardUnsat,
    Exhausted,
}

pub(super) type RestartHook<'a> = Box<dyn FnMut(&SolveStats, &PenaltyLedger) + 'a>;

pub(super) struct Engine<'a> {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watch>>,
    /// Clauses of length one, reapplied whenever level 0 is rebuilt.
    units: Vec<u32>,
    hard_empty: bool,

    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    level0_deps: Vec<Vec<u32>>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,

    activity: Vec<f64>,
    tier: Vec<u8>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,

    soft_cref: Vec<u32>,
    soft_active: Vec<bool>,
    penalties: Vec<u64>,

    learnt_count: usize,
    max_learnts: f64,
    stats: SolveStats,
    pub(super) restart_hook: Option<RestartHook<'a>>,
}

impl<'a> Engine<'a> {
    pub fn new(num_vars: usize) -> Self {
        Engine {
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            units: Vec::new(),
            hard_empty: false,
            assigns: vec![0; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            level0_deps: vec![Vec::new(); num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            tier: vec![0; num_vars],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::with_vars(num_vars),
            phase: vec![false; num_vars],
            seen: vec![false; num_vars],
            soft_cref: Vec::new(),
            soft_active: Vec::new(),
            penalties: Vec::new(),
            learnt_count: 0,
            max_learnts: 0.0,
            stats: SolveStats::default(),
            restart_hook: None,
        }
    }

    pub fn prefer(&mut self, var: usize) {
        self.tier[var] = 1;
    }

    pub fn penalties(&self) -> PenaltyLedger {
        PenaltyLedger { counts: self.penalties.clone() }
    }

    pub fn soft_active(&self) -> &[bool] {
        &self.soft_active
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    pub fn assignment(&self) -> Assignment {
        Assignment { values: self.assigns.iter().map(|&a| a > 0).collect() }
    }

    #[inline]
    fn value(&self, l: u32) -> i8 {
        let a = self.assigns[var_of(l)];
        if l & 1 == 1 {
            -a
        } else {
            a
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Adds a clause of internal literals. Duplicate literals are removed;
    /// tautologies are kept out of the watch lists (they can never propagate).
    pub fn add_clause(&mut self, mut lits: Vec<u32>, soft: bool) -> Option<u32> {
        lits.sort_unstable();
        lits.dedup();
        let tautology = lits.windows(2).any(|w| w[0] ^ 1 == w[1]);
        let kind = if soft { Kind::Soft(self.soft_cref.len() as u32) } else { Kind::Hard };
        let cref = self.clauses.len() as u32;
        let len = lits.len();
        self.clauses.push(Clause { lits, kind, deps: Vec::new(), activity: 0.0, removed: false });
        if soft {
            self.soft_cref.push(cref);
            self.soft_active.push(true);
            self.penalties.push(0);
        }
        if tautology {
            return soft.then(|| self.soft_cref.len() as u32 - 1);
        }
        match len {
            0 if soft => {
                // Unsatisfiable on its own: inactive from the outset.
                let id = self.soft_cref.len() - 1;
                self.deactivate_soft(id as u32);
            }
            0 => self.hard_empty = true,
            1 => self.units.push(cref),
            _ => self.attach(cref),
        }
        soft.then(|| self.soft_cref.len() as u32 - 1)
    }

    fn attach(&mut self, cref: u32) {
        let c = &self.clauses[cref as usize];
        let (a, b) = (c.lits[0], c.lits[1]);
        self.watches[a as usize].push(Watch { cref, blocker: b });
        self.watches[b as usize].push(Watch { cref, blocker: a });
    }

    fn is_live(&self, cref: u32) -> bool {
        let c = &self.clauses[cref as usize];
        !c.removed
            && match c.kind {
                Kind::Soft(id) => self.soft_active[id as usize],
                _ => true,
            }
    }

    fn deactivate_soft(&mut self, id: u32) {
        let id = id as usize;
        if self.soft_active[id] {
            self.soft_active[id] = false;
            self.penalties[id] += 1;
            self.stats.soft_deactivated += 1;
        }
    }

    fn clause_deps(&self, cref: u32, out: &mut Vec<u32>) {
        let c = &self.clauses[cref as usize];
        match c.kind {
            Kind::Soft(id) => out.push(id),
            Kind::Learnt => out.extend_from_slice(&c.deps),
            Kind::Hard => {}
        }
    }

    fn enqueue(&mut self, l: u32, reason: u32) {
        let v = var_of(l);
        debug_assert_eq!(self.assigns[v], 0);
        self.assigns[v] = if l & 1 == 1 { -1 } else { 1 };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        if reason != NO_REASON && self.decision_level() == 0 {
            let mut deps = Vec::new();
            self.clause_deps(reason, &mut deps);
            for &q in &self.clauses[reason as usize].lits[1..] {
                deps.extend_from_slice(&self.level0_deps[var_of(q)]);
            }
            deps.sort_unstable();
            deps.dedup();
            self.level0_deps[v] = deps;
        }
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                if !self.is_live(w.cref) {
                    continue;
                }
                let cref = w.cref as usize;
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == 1 {
                    ws[j] = Watch { cref: w.cref, blocker: first };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != -1 {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l as usize].push(Watch { cref: w.cref, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value(first) == -1 {
                    if let Kind::Soft(id) = self.clauses[cref].kind {
                        // Falsified soft clause: drop it and keep going.
                        self.deactivate_soft(id);
                        self.stats.conflicts += 1;
                        self.stats.soft_conflicts += 1;
                        continue;
                    }
                    ws[j] = w;
                    j += 1;
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    ws[j] = Watch { cref: w.cref, blocker: first };
                    j += 1;
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            debug_assert!(self.watches[false_lit as usize].is_empty());
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v as u32, &self.tier, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if c.kind != Kind::Learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.kind == Kind::Learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal first),
    /// the backjump level and the soft ids the clause rests on.
    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, usize, Vec<u32>) {
        let mut out = vec![0u32];
        let mut deps = Vec::new();
        let mut path = 0usize;
        let mut p: Option<u32> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            self.bump_clause(confl);
            self.clause_deps(confl, &mut deps);
            if let Kind::Soft(id) = self.clauses[confl as usize].kind {
                self.penalties[id as usize] += 1;
            }
            let start = usize::from(p.is_some());
            let len = self.clauses[confl as usize].lits.len();
            for k in start..len {
                let q = self.clauses[confl as usize].lits[k];
                let v = var_of(q);
                if self.seen[v] {
                    continue;
                }
                if self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        out.push(q);
                    }
                } else {
                    deps.extend_from_slice(&self.level0_deps[v]);
                }
            }
            loop {
                idx -= 1;
                if self.seen[var_of(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            let v = var_of(lit);
            self.seen[v] = false;
            p = Some(lit);
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[v];
            debug_assert_ne!(confl, NO_REASON);
        }
        out[0] = neg(p.expect("conflict has a current-level literal"));
        for &q in &out[1..] {
            self.seen[var_of(q)] = false;
        }
        let mut back = 0;
        if out.len() > 1 {
            let mut best = 1;
            for k in 2..out.len() {
                if self.level[var_of(out[k])] > self.level[var_of(out[best])] {
                    best = k;
                }
            }
            out.swap(1, best);
            back = self.level[var_of(out[1])] as usize;
        }
        deps.sort_unstable();
        deps.dedup();
        (out, back, deps)
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level];
        for k in (keep..self.trail.len()).rev() {
            let v = var_of(self.trail[k]);
            self.phase[v] = self.trail[k] & 1 == 0;
            self.assigns[v] = 0;
            self.reason[v] = NO_REASON;
            self.heap.insert(v as u32, &self.tier, &self.activity);
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level);
        self.qhead = keep;
    }

    /// Clears every assignment, level 0 included, and reapplies unit clauses.
    /// Returns a conflicting unit clause if one is found.
    fn rebuild_level0(&mut self) -> Option<u32> {
        self.cancel_until(0);
        for &l in &self.trail {
            let v = var_of(l);
            self.assigns[v] = 0;
            self.reason[v] = NO_REASON;
            self.level0_deps[v].clear();
        }
        for v in 0..self.num_vars {
            self.heap.insert(v as u32, &self.tier, &self.activity);
        }
        self.trail.clear();
        self.qhead = 0;
        let units = self.units.clone();
        for cref in units {
            if !self.is_live(cref) {
                continue;
            }
            let l = self.clauses[cref as usize].lits[0];
            match self.value(l) {
                1 => {}
                0 => self.enqueue(l, cref),
                _ => match self.clauses[cref as usize].kind {
                    Kind::Soft(id) => {
                        self.deactivate_soft(id);
                        self.stats.conflicts += 1;
                        self.stats.soft_conflicts += 1;
                    }
                    _ => return Some(cref),
                },
            }
        }
        None
    }

    /// Handles a conflict found at decision level 0. Returns `true` when the
    /// hard clauses alone are refuted.
    fn refute_at_root(&mut self, confl: u32) -> bool {
        let mut deps = Vec::new();
        self.clause_deps(confl, &mut deps);
        for &q in &self.clauses[confl as usize].lits {
            deps.extend_from_slice(&self.level0_deps[var_of(q)]);
        }
        if let Kind::Soft(id) = self.clauses[confl as usize].kind {
            self.penalties[id as usize] += 1;
        }
        deps.sort_unstable();
        deps.dedup();
        if deps.is_empty() {
            return true;
        }
        for id in deps {
            self.deactivate_soft(id);
        }
        let inactive = &self.soft_active;
        let mut purged = 0;
        for c in self.clauses.iter_mut() {
            if c.kind == Kind::Learnt && !c.removed && c.deps.iter().any(|&d| !inactive[d as usize]) {
                c.removed = true;
                purged += 1;
            }
        }
        self.learnt_count -= purged;
        self.units.retain(|&cref| !self.clauses[cref as usize].removed);
        false
    }

    fn reduce_learnts(&mut self) {
        let mut candidates: Vec<(f64, u32)> = Vec::new();
        for (cref, c) in self.clauses.iter().enumerate() {
            if c.kind != Kind::Learnt || c.removed || c.lits.len() <= 2 {
                continue;
            }
            let implied = c.lits[0];
            let locked = self.value(implied) == 1 && self.reason[var_of(implied)] == cref as u32;
            if !locked {
                candidates.push((c.activity, cref as u32));
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let drop = candidates.len() / 2;
        for &(_, cref) in &candidates[..drop] {
            self.clauses[cref as usize].removed = true;
        }
        self.learnt_count -= drop;
    }

    fn learn(&mut self, lits: Vec<u32>, deps: Vec<u32>) {
        let cref = self.clauses.len() as u32;
        let unit = lits.len() == 1;
        self.clauses.push(Clause { lits, kind: Kind::Learnt, deps, activity: 0.0, removed: false });
        self.bump_clause(cref);
        self.learnt_count += 1;
        if unit {
            self.units.push(cref);
        } else {
            self.attach(cref);
        }
        let first = self.clauses[cref as usize].lits[0];
        self.enqueue(first, cref);
    }

    fn luby(mut x: u64) -> u64 {
        // Luby sequence with base 2, 0-indexed.
        let (mut size, mut seq) = (1u64, 0u32);
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) >> 1;
            seq -= 1;
            x %= size;
        }
        1u64 << seq
    }

    fn pick_branch(&mut self) -> Option<u32> {
        loop {
            let v = self.heap.pop(&self.tier, &self.activity)?;
            if self.assigns[v as usize] == 0 {
                let negative = !self.phase[v as usize];
                return Some((v << 1) | u32::from(negative));
            }
        }
    }

    fn out_of_budget(&self, budget: &SolveBudget, started: Instant) -> bool {
        if budget.max_conflicts.is_some_and(|m| self.stats.conflicts >= m) {
            return true;
        }
        budget.max_seconds.is_some_and(|s| started.elapsed().as_secs_f64() >= s)
    }

    pub fn solve(&mut self, budget: &SolveBudget) -> RawStatus {
        let started = Instant::now();
        if self.hard_empty {
            return RawStatus::HardUnsat;
        }
        if self.out_of_budget(budget, started) {
            return RawStatus::Exhausted;
        }
        let mut rng = StdRng::seed_from_u64(budget.seed);
        for v in 0..self.num_vars {
            self.activity[v] = rng.random::<f64>() * 1e-5;
        }
        let live_clauses = self.clauses.iter().filter(|c| !c.removed).count();
        self.max_learnts = (live_clauses as f64 / 3.0).max(2000.0);

        let mut pending = self.rebuild_level0();
        let mut restart_no = 0u64;
        let mut until_restart = RESTART_BASE * Self::luby(restart_no);
        let mut ticks = 0u64;
        loop {
            let confl = match pending.take() {
                Some(c) => Some(c),
                None => self.propagate(),
            };
            if let Some(confl) = confl {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    if self.refute_at_root(confl) {
                        return RawStatus::HardUnsat;
                    }
                    pending = self.rebuild_level0();
                    continue;
                }
                let (lits, back, deps) = self.analyze(confl);
                self.cancel_until(back);
                self.learn(lits, deps);
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                until_restart = until_restart.saturating_sub(1);
                if self.out_of_budget(budget, started) {
                    return RawStatus::Exhausted;
                }
                continue;
            }
            // Soft clauses dropped during propagation also spend budget.
            if budget.max_conflicts.is_some_and(|m| self.stats.conflicts >= m) {
                return RawStatus::Exhausted;
            }
            ticks += 1;
            if ticks % 1024 == 0 && self.out_of_budget(budget, started) {
                return RawStatus::Exhausted;
            }
            if until_restart == 0 {
                restart_no += 1;
                self.stats.restarts += 1;
                until_restart = RESTART_BASE * Self::luby(restart_no);
                self.cancel_until(0);
                if let Some(hook) = self.restart_hook.as_mut() {
                    let ledger = PenaltyLedger { counts: self.penalties.clone() };
                    hook(&self.stats, &ledger);
                }
            }
            if self.learnt_count as f64 >= self.max_learnts + self.trail.len() as f64 {
                self.reduce_learnts();
                self.max_learnts *= 1.1;
            }
            match self.pick_branch() {
                None => return RawStatus::Model,
                Some(lit) => {
                    self.stats.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(lit, NO_REASON);
                }
            }
        }
    }

    /// Every live clause is satisfied by the current assignment.
    pub fn assignment_satisfies_live(&self) -> bool {
        (0..self.clauses.len() as u32)
            .filter(|&c| self.is_live(c))
            .all(|c| self.clauses[c as usize].lits.iter().any(|&l| self.value(l) == 1))
    }
}
