//! Conflict-driven clause-learning SAT solver.
//!
//! Two watched literals per clause, first-UIP learning with local
//! minimisation, VSIDS branching with phase saving, Luby restarts and
//! LBD-based learnt clause reduction. Clauses may be added between calls to
//! [`Solver::solve`]; learnt clauses are kept since added constraints only
//! shrink the solution space.

use std::time::Instant;

use super::cnf::{CnfFormula, Limits, Lit, Model, SolveOutcome, Var};

const NO_REASON: u32 = u32::MAX;
const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

#[derive(Debug, Clone, Default)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
}

/// Binary max-heap of variables keyed by activity; ties go to the lower
/// variable index so that runs are reproducible.
#[derive(Debug, Clone, Default)]
struct VarHeap {
    heap: Vec<u32>,
    index: Vec<i32>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.index.resize(n, -1);
    }

    fn contains(&self, v: u32) -> bool {
        self.index[v as usize] >= 0
    }

    fn better(act: &[f64], a: u32, b: u32) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn up(&mut self, act: &[f64], mut i: usize) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.index[self.heap[i] as usize] = i as i32;
            i = parent;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as i32;
    }

    fn down(&mut self, act: &[f64], mut i: usize) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let child = if r < self.heap.len() && Self::better(act, self.heap[r], self.heap[l]) { r } else { l };
            if !Self::better(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.index[self.heap[i] as usize] = i as i32;
            i = child;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as i32;
    }

    fn insert(&mut self, act: &[f64], v: u32) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.index[v as usize] = i as i32;
        self.up(act, i);
    }

    fn increased(&mut self, act: &[f64], v: u32) {
        if self.contains(v) {
            let i = self.index[v as usize] as usize;
            self.up(act, i);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().expect("non-empty");
        self.index[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = 0;
            self.down(act, 0);
        }
        Some(top)
    }
}

enum SearchResult {
    Sat,
    Unsat,
    Restart,
    Budget,
}

#[derive(Debug, Clone)]
pub struct Solver {
    num_vars: usize,
    clauses: Vec<ClauseData>,
    original: Vec<u32>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    ok: bool,
    max_learnts: f64,
    model: Vec<bool>,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver {
            num_vars: 0,
            clauses: Vec::new(),
            original: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: Vec::new(),
            ok: true,
            max_learnts: 0.0,
            model: Vec::new(),
            stats: SolverStats::default(),
        }
    }

    pub fn from_formula(f: &CnfFormula) -> Solver {
        let mut s = Solver::new();
        s.reserve_vars(f.num_vars() as usize);
        for c in f.clauses() {
            s.add_clause(c);
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    pub fn new_var(&mut self) -> Var {
        self.reserve_vars(self.num_vars + 1);
        Var::new(self.num_vars as u32)
    }

    /// Makes variables `1..=n` available.
    pub fn reserve_vars(&mut self, n: usize) {
        if n <= self.num_vars {
            return;
        }
        self.watches.resize(2 * n, Vec::new());
        self.assigns.resize(n, UNDEF);
        self.level.resize(n, 0);
        self.reason.resize(n, NO_REASON);
        self.polarity.resize(n, false);
        self.activity.resize(n, 0.0);
        self.seen.resize(n, false);
        self.heap.grow(n);
        for v in self.num_vars..n {
            self.heap.insert(&self.activity, v as u32);
        }
        self.num_vars = n;
    }

    fn value(&self, l: Lit) -> i8 {
        let a = self.assigns[l.var().pos()];
        if l.is_positive() {
            a
        } else {
            -a
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause at the root level. Returns `false` once the formula is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        if let Some(max) = lits.iter().map(|l| l.var().index() as usize).max() {
            self.reserve_vars(max);
        }
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        for w in c.windows(2) {
            if w[0] == !w[1] {
                return true;
            }
        }
        if c.iter().any(|&l| self.value(l) == TRUE) {
            return true;
        }
        c.retain(|&l| self.value(l) != FALSE);
        match c.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                let cref = self.attach(c, false, 0);
                self.original.push(cref);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[(!lits[0]).code()].push(Watcher { cref, blocker: lits[1] });
        self.watches[(!lits[1]).code()].push(Watcher { cref, blocker: lits[0] });
        self.clauses.push(ClauseData { lits, learnt, deleted: false, lbd, activity: 0.0 });
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var().pos();
        self.assigns[v] = if l.is_positive() { TRUE } else { FALSE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().pos();
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.polarity[v] = l.is_positive();
            self.heap.insert(&self.activity, v as u32);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    /// Unit propagation; returns a conflicting clause if one is found.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == TRUE {
                    ws[j] = Watcher { cref: w.cref, blocker: first };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != FALSE {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[(!l).code()].push(Watcher { cref: w.cref, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher { cref: w.cref, blocker: first };
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
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
        self.heap.increased(&self.activity, v as u32);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &r in &self.learnts {
                self.clauses[r as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![Lit::from_dimacs(1)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        loop {
            self.bump_clause(confl);
            let lits = self.clauses[confl as usize].lits.clone();
            let start = if p.is_some() { 1 } else { 0 };
            for &q in &lits[start..] {
                let v = q.var().pos();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().pos()] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var().pos()];
            self.seen[lit.var().pos()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = !p.expect("UIP");

        // local minimisation: drop literals implied by others in the clause
        let mut keep = vec![learnt[0]];
        for &l in &learnt[1..] {
            let r = self.reason[l.var().pos()];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..].iter().all(|q| {
                    let v = q.var().pos();
                    self.seen[v] || self.level[v] == 0
                });
            if !redundant {
                keep.push(l);
            }
        }
        for &l in &learnt {
            self.seen[l.var().pos()] = false;
        }
        let mut learnt = keep;

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().pos()] > self.level[learnt[max_i].var().pos()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var().pos()]
        };
        (learnt, bt)
    }

    fn lbd(&self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var().pos()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn locked(&self, cref: u32) -> bool {
        let l = self.clauses[cref as usize].lits[0];
        self.value(l) == TRUE && self.reason[l.var().pos()] == cref
    }

    fn reduce_db(&mut self) {
        let mut candidates: Vec<u32> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| !self.clauses[c as usize].deleted)
            .collect();
        candidates.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd
                .cmp(&ca.lbd)
                .then(ca.activity.partial_cmp(&cb.activity).unwrap_or(std::cmp::Ordering::Equal))
                .then(a.cmp(&b))
        });
        let target = candidates.len() / 2;
        let mut removed = 0;
        for &c in &candidates {
            if removed >= target {
                break;
            }
            let data = &self.clauses[c as usize];
            if data.lits.len() > 2 && data.lbd > 2 && !self.locked(c) {
                self.clauses[c as usize].deleted = true;
                self.clauses[c as usize].lits.shrink_to_fit();
                removed += 1;
            }
        }
        self.learnts.retain(|&c| !self.clauses[c as usize].deleted);
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v as usize] == UNDEF {
                return Some(Var::new(v + 1).lit(self.polarity[v as usize]));
            }
        }
        None
    }

    fn search(&mut self, nof_conflicts: u64, limits: &mut Limits) -> SearchResult {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if let Some(left) = &mut limits.conflicts_left {
                    *left = left.saturating_sub(1);
                }
                if self.decision_level() == 0 {
                    return SearchResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let lbd = self.lbd(&learnt);
                    let first = learnt[0];
                    let cref = self.attach(learnt, true, lbd);
                    self.learnts.push(cref);
                    self.bump_clause(cref);
                    self.enqueue(first, cref);
                }
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;
                if limits.conflicts_left == Some(0)
                    || (conflicts.is_multiple_of(64) && limits.deadline.is_some_and(|d| Instant::now() >= d))
                {
                    return SearchResult::Budget;
                }
            } else {
                if conflicts >= nof_conflicts {
                    return SearchResult::Restart;
                }
                if self.learnts.len() as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                self.stats.decisions += 1;
                if self.stats.decisions.is_multiple_of(1024) && limits.deadline.is_some_and(|d| Instant::now() >= d) {
                    return SearchResult::Budget;
                }
                match self.pick_branch() {
                    None => return SearchResult::Sat,
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }

    /// Decides the current clause set within `limits`, charging consumed
    /// conflicts to it.
    pub fn solve(&mut self, limits: &mut Limits) -> SolveOutcome {
        if !self.ok {
            return SolveOutcome::Unsat;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return SolveOutcome::Unsat;
        }
        self.max_learnts = (self.original.len() as f64 / 3.0).max(1000.0);
        let mut restart = 0u32;
        loop {
            if limits.expired() {
                self.cancel_until(0);
                return SolveOutcome::Unknown;
            }
            let budget = (luby(2.0, restart) * 100.0) as u64;
            match self.search(budget, limits) {
                SearchResult::Sat => {
                    self.model = (0..self.num_vars).map(|v| self.assigns[v] == TRUE).collect();
                    let model = Model::new(self.model.clone());
                    debug_assert!(self.check_model(&model), "model violates a clause");
                    self.cancel_until(0);
                    return SolveOutcome::Sat(model);
                }
                SearchResult::Unsat => {
                    self.ok = false;
                    return SolveOutcome::Unsat;
                }
                SearchResult::Budget => {
                    self.cancel_until(0);
                    return SolveOutcome::Unknown;
                }
                SearchResult::Restart => {
                    self.stats.restarts += 1;
                    restart += 1;
                    self.cancel_until(0);
                }
            }
        }
    }

    fn check_model(&self, model: &Model) -> bool {
        self.original.iter().all(|&c| model.satisfies(&self.clauses[c as usize].lits))
    }
}

/// The Luby restart sequence scaled by `y`.
fn luby(y: f64, mut x: u32) -> f64 {
    let mut size = 1u32;
    let mut seq = 0u32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq as i32)
}

/// Decides `f` within `budget`.
pub fn sat_solve(f: &CnfFormula, budget: super::Budget) -> SolveOutcome {
    let mut limits = budget.start();
    let outcome = Solver::from_formula(f).solve(&mut limits);
    if let SolveOutcome::Sat(m) = &outcome {
        debug_assert!(f.is_satisfied_by(m));
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::Budget;

    fn cnf(clauses: &[&[i32]]) -> CnfFormula {
        let mut f = CnfFormula::new();
        for c in clauses {
            f.add_clause(c.iter().map(|&l| Lit::from_dimacs(l)));
        }
        f
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<f64> = (0..7).map(|i| luby(2.0, i)).collect();
        assert_eq!(seq, vec![1.0, 1.0, 2.0, 1.0, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn contradiction_is_unsat() {
        assert_eq!(sat_solve(&cnf(&[&[1], &[-1]]), Budget::UNLIMITED), SolveOutcome::Unsat);
    }

    #[test]
    fn simple_sat() {
        match sat_solve(&cnf(&[&[1, 2]]), Budget::UNLIMITED) {
            SolveOutcome::Sat(m) => assert!(m.value(Var::new(1)) || m.value(Var::new(2))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unit_propagation_forces_values() {
        match sat_solve(&cnf(&[&[-1, 2], &[1]]), Budget::UNLIMITED) {
            SolveOutcome::Sat(m) => {
                assert!(m.value(Var::new(1)));
                assert!(m.value(Var::new(2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_clause_is_unsat() {
        let mut f = CnfFormula::with_vars(2);
        f.add_clause([]);
        assert_eq!(sat_solve(&f, Budget::UNLIMITED), SolveOutcome::Unsat);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 5 pigeons, 4 holes
        let (p, h) = (5, 4);
        let var = |i: i32, j: i32| i * h + j + 1;
        let mut f = CnfFormula::new();
        for i in 0..p {
            f.add_clause((0..h).map(|j| Lit::from_dimacs(var(i, j))));
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    f.add_clause([Lit::from_dimacs(-var(a, j)), Lit::from_dimacs(-var(b, j))]);
                }
            }
        }
        assert_eq!(sat_solve(&f, Budget::UNLIMITED), SolveOutcome::Unsat);
    }

    #[test]
    fn conflict_budget_yields_unknown() {
        let (p, h) = (9, 8);
        let var = |i: i32, j: i32| i * h + j + 1;
        let mut f = CnfFormula::new();
        for i in 0..p {
            f.add_clause((0..h).map(|j| Lit::from_dimacs(var(i, j))));
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    f.add_clause([Lit::from_dimacs(-var(a, j)), Lit::from_dimacs(-var(b, j))]);
                }
            }
        }
        assert_eq!(sat_solve(&f, Budget::conflicts(10)), SolveOutcome::Unknown);
    }

    #[test]
    fn incremental_clauses() {
        let mut s = Solver::from_formula(&cnf(&[&[1, 2, 3]]));
        let mut lim = Limits::unlimited();
        assert!(matches!(s.solve(&mut lim), SolveOutcome::Sat(_)));
        s.add_clause(&[Lit::from_dimacs(-1)]);
        s.add_clause(&[Lit::from_dimacs(-2)]);
        match s.solve(&mut lim) {
            SolveOutcome::Sat(m) => assert!(m.value(Var::new(3))),
            other => panic!("{other:?}"),
        }
        s.add_clause(&[Lit::from_dimacs(-3)]);
        assert_eq!(s.solve(&mut lim), SolveOutcome::Unsat);
    }
}
