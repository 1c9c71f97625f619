//! A small conflict-driven clause-learning SAT solver.
//!
//! Two watched literals, first-UIP learning with local minimization, VSIDS
//! with phase saving, Luby restarts and activity-based clause deletion.
//! Clauses may be added between calls; assumptions are supported. The
//! search is fully deterministic.

use std::time::Instant;

use serde::Serialize;

/// Literal in DIMACS convention: `v` or `-v` with `v >= 1`.
pub type DimacsLit = i32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Lit(u32);

impl Lit {
    fn new(var: usize, neg: bool) -> Lit {
        Lit(((var as u32) << 1) | u32::from(neg))
    }

    fn from_dimacs(x: DimacsLit) -> Lit {
        debug_assert!(x != 0);
        Lit::new(x.unsigned_abs() as usize - 1, x < 0)
    }

    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn neg(self) -> bool {
        self.0 & 1 == 1
    }

    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LBool {
    True,
    False,
    Undef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// Satisfiable; `model[v - 1]` is the value of DIMACS variable `v`.
    Sat(Vec<bool>),
    Unsat,
    /// The conflict budget ran out before an answer was found.
    Unknown,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnts: u64,
    pub solves: u64,
    pub wall_micros: u64,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

/// Max-heap of variables keyed by activity; ties go to the lower index.
#[derive(Default)]
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn better(act: &[f64], a: usize, b: usize) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn contains(&self, v: usize) -> bool {
        self.pos.get(v).is_some_and(|p| p.is_some())
    }

    fn grow(&mut self, n: usize) {
        if self.pos.len() < n {
            self.pos.resize(n, None);
        }
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let child = if r < self.heap.len() && Self::better(act, self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if !Self::better(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        self.grow(v + 1);
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.up(i, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos.get(v).copied().flatten() {
            self.up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let (mut size, mut seq) = (1u64, 0i32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

const RESTART_BASE: f64 = 100.0;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;

pub struct Solver {
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    order: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    n_learnts: usize,
    max_learnts: f64,
    budget: Option<u64>,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            order: VarHeap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            ok: true,
            n_learnts: 0,
            max_learnts: 0.0,
            budget: None,
            stats: SolverStats::default(),
        }
    }

    /// Conflicts allowed per `solve` call; `None` means unlimited.
    pub fn set_budget(&mut self, budget: Option<u64>) {
        self.budget = budget;
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn n_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses
            .iter()
            .filter(|c| !c.deleted && !c.learnt)
            .count()
    }

    /// Allocates a fresh variable and returns its DIMACS index.
    pub fn new_var(&mut self) -> DimacsLit {
        let v = self.assigns.len();
        self.assigns.push(LBool::Undef);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.phase.push(true);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.insert(v, &self.activity);
        v as DimacsLit + 1
    }

    fn ensure_var(&mut self, v: usize) {
        while self.assigns.len() <= v {
            self.new_var();
        }
    }

    fn value(&self, l: Lit) -> LBool {
        match self.assigns[l.var()] {
            LBool::Undef => LBool::Undef,
            LBool::True if l.neg() => LBool::False,
            LBool::False if l.neg() => LBool::True,
            v => v,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        let v = l.var();
        self.assigns[v] = if l.neg() { LBool::False } else { LBool::True };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause at decision level 0. Returns `false` once the formula is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[DimacsLit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        let mut ls: Vec<Lit> = lits.iter().map(|&x| Lit::from_dimacs(x)).collect();
        if let Some(max) = ls.iter().map(|l| l.var()).max() {
            self.ensure_var(max);
        }
        ls.sort_unstable();
        ls.dedup();
        let mut out = Vec::with_capacity(ls.len());
        for (k, &l) in ls.iter().enumerate() {
            if k + 1 < ls.len() && ls[k + 1] == !l {
                return true;
            }
            match self.value(l) {
                LBool::True => return true,
                LBool::False => {}
                LBool::Undef => out.push(l),
            }
        }
        match out.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(out[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(out, false);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0].idx()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].idx()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        if learnt {
            self.n_learnts += 1;
            self.stats.learnts += 1;
        }
        cref
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.idx()]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let c = &mut self.clauses[cref].lits;
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == LBool::True {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != LBool::False {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l.idx()].push(Watcher {
                            cref: w.cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = w;
                j += 1;
                if self.value(first) == LBool::False {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.idx()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let dl = self.decision_level();
        loop {
            self.bump_clause(confl as usize);
            let lits = self.clauses[confl as usize].lits.clone();
            let start = usize::from(p.is_some());
            for &q in &lits[start..] {
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            self.seen[lit.var()] = false;
            p = Some(lit);
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[lit.var()].expect("implied literal has a reason");
        }
        learnt[0] = !p.unwrap();

        // Local minimization: drop literals implied by others in the clause.
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(k, &l)| {
                k == 0
                    || match self.reason[l.var()] {
                        None => true,
                        Some(r) => self.clauses[r as usize].lits[1..]
                            .iter()
                            .any(|&q| !self.seen[q.var()] && self.level[q.var()] > 0),
                    }
            })
            .collect();
        for &l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let mut out: Vec<Lit> = learnt
            .into_iter()
            .zip(keep)
            .filter(|&(_, k)| k)
            .map(|(l, _)| l)
            .collect();

        let bt = if out.len() == 1 {
            0
        } else {
            let (k, _) = out[1..]
                .iter()
                .enumerate()
                .max_by_key(|&(k, l)| (self.level[l.var()], std::cmp::Reverse(k)))
                .unwrap();
            out.swap(1, k + 1);
            self.level[out[1].var()]
        };
        (out, bt)
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var();
            self.phase[v] = !l.neg();
            self.assigns[v] = LBool::Undef;
            self.reason[v] = None;
            self.order.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn locked(&self, cref: usize) -> bool {
        let l0 = self.clauses[cref].lits[0];
        self.value(l0) == LBool::True && self.reason[l0.var()] == Some(cref as u32)
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&k| {
                let c = &self.clauses[k];
                c.learnt && !c.deleted && c.lits.len() > 2 && !self.locked(k)
            })
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .total_cmp(&self.clauses[b].activity)
                .then(a.cmp(&b))
        });
        for &k in &cands[..cands.len() / 2] {
            self.clauses[k].deleted = true;
            self.clauses[k].lits.clear();
            self.clauses[k].lits.shrink_to_fit();
            self.n_learnts -= 1;
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.order.pop(&self.activity) {
            if self.assigns[v] == LBool::Undef {
                return Some(Lit::new(v, !self.phase[v]));
            }
        }
        None
    }

    pub fn solve(&mut self) -> SolveResult {
        self.solve_with(&[])
    }

    /// Solves under temporary unit assumptions.
    pub fn solve_with(&mut self, assumptions: &[DimacsLit]) -> SolveResult {
        let t0 = Instant::now();
        self.stats.solves += 1;
        let res = self.search_all(assumptions);
        self.cancel_until(0);
        self.stats.wall_micros += t0.elapsed().as_micros() as u64;
        res
    }

    fn search_all(&mut self, assumptions: &[DimacsLit]) -> SolveResult {
        if !self.ok {
            return SolveResult::Unsat;
        }
        let assumps: Vec<Lit> = assumptions.iter().map(|&x| Lit::from_dimacs(x)).collect();
        if let Some(max) = assumps.iter().map(|l| l.var()).max() {
            self.ensure_var(max);
        }
        if self.propagate().is_some() {
            self.ok = false;
            return SolveResult::Unsat;
        }
        self.max_learnts = (self.n_clauses() as f64 / 3.0).max(2000.0);
        let start_conflicts = self.stats.conflicts;
        let mut restart = 0u64;
        loop {
            let limit = (luby(2.0, restart) * RESTART_BASE) as u64;
            match self.search(limit, &assumps, start_conflicts) {
                Some(r) => return r,
                None => {
                    restart += 1;
                    self.stats.restarts += 1;
                    self.max_learnts *= 1.05;
                }
            }
        }
    }

    /// `None` asks for a restart.
    fn search(&mut self, limit: u64, assumps: &[Lit], start: u64) -> Option<SolveResult> {
        let mut local = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                local += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(SolveResult::Unsat);
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref as usize);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                continue;
            }
            if let Some(b) = self.budget {
                if self.stats.conflicts - start >= b {
                    return Some(SolveResult::Unknown);
                }
            }
            if local >= limit {
                self.cancel_until(0);
                return None;
            }
            if self.n_learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                self.reduce_db();
            }
            let mut next = None;
            while (self.decision_level() as usize) < assumps.len() {
                let a = assumps[self.decision_level() as usize];
                match self.value(a) {
                    LBool::True => self.trail_lim.push(self.trail.len()),
                    LBool::False => return Some(SolveResult::Unsat),
                    LBool::Undef => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let lit = match next {
                Some(a) => a,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => {
                        let model = self.assigns.iter().map(|&v| v == LBool::True).collect();
                        return Some(SolveResult::Sat(model));
                    }
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(lit, None);
        }
    }
}

/// Runs a fresh solver on a clause list.
pub fn solve_clauses(
    n_vars: usize,
    clauses: &[Vec<DimacsLit>],
    budget: Option<u64>,
) -> (SolveResult, SolverStats) {
    let mut s = Solver::new();
    s.set_budget(budget);
    for _ in 0..n_vars {
        s.new_var();
    }
    for c in clauses {
        if !s.add_clause(c) {
            break;
        }
    }
    let r = s.solve();
    (r, s.stats())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn satisfies(model: &[bool], clauses: &[Vec<i32>]) -> bool {
        clauses.iter().all(|c| {
            c.iter()
                .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    fn brute_force(n: usize, clauses: &[Vec<i32>]) -> bool {
        (0..1u32 << n).any(|m| {
            let model: Vec<bool> = (0..n).map(|v| m >> v & 1 == 1).collect();
            satisfies(&model, clauses)
        })
    }

    #[test]
    fn contradiction() {
        let (r, _) = solve_clauses(1, &[vec![1], vec![-1]], None);
        assert_eq!(r, SolveResult::Unsat);
    }

    #[test]
    fn unit_propagation() {
        let (r, st) = solve_clauses(2, &[vec![1, 2], vec![-1]], None);
        match r {
            SolveResult::Sat(m) => assert!(!m[0] && m[1]),
            other => panic!("{other:?}"),
        }
        assert_eq!(st.conflicts, 0);
    }

    #[test]
    fn empty_formula_is_sat() {
        assert!(solve_clauses(0, &[], None).0.is_sat());
        assert_eq!(solve_clauses(1, &[vec![]], None).0, SolveResult::Unsat);
    }

    #[test]
    fn agrees_with_truth_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(0..=8);
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    let len = rng.gen_range(1..=3);
                    (0..len)
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen() {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let (r, _) = solve_clauses(n, &clauses, None);
            match r {
                SolveResult::Sat(model) => {
                    assert!(satisfies(&model, &clauses), "{clauses:?}");
                }
                SolveResult::Unsat => assert!(!brute_force(n, &clauses), "{clauses:?}"),
                SolveResult::Unknown => panic!("no budget set"),
            }
        }
    }

    fn pigeonhole(holes: usize) -> (usize, Vec<Vec<i32>>) {
        let pigeons = holes + 1;
        let var = |p: usize, h: usize| (p * holes + h + 1) as i32;
        let mut cls = Vec::new();
        for p in 0..pigeons {
            cls.push((0..holes).map(|h| var(p, h)).collect());
        }
        for h in 0..holes {
            for a in 0..pigeons {
                for b in a + 1..pigeons {
                    cls.push(vec![-var(a, h), -var(b, h)]);
                }
            }
        }
        (pigeons * holes, cls)
    }

    #[test]
    fn pigeonhole_unsat() {
        let (n, cls) = pigeonhole(6);
        let (r, st) = solve_clauses(n, &cls, None);
        assert_eq!(r, SolveResult::Unsat);
        assert!(st.conflicts > 0);
    }

    #[test]
    fn budget_gives_unknown() {
        let (n, cls) = pigeonhole(8);
        let (r, st) = solve_clauses(n, &cls, Some(20));
        assert_eq!(r, SolveResult::Unknown);
        assert_eq!(st.conflicts, 20);
    }

    #[test]
    fn incremental_and_assumptions() {
        let mut s = Solver::new();
        let a = s.new_var();
        let b = s.new_var();
        s.add_clause(&[a, b]);
        assert_eq!(s.solve_with(&[-a, -b]), SolveResult::Unsat);
        assert!(s.solve_with(&[-a]).is_sat());
        s.add_clause(&[-b]);
        match s.solve() {
            SolveResult::Sat(m) => assert!(m[0] && !m[1]),
            r => panic!("{r:?}"),
        }
        s.add_clause(&[-a]);
        assert_eq!(s.solve(), SolveResult::Unsat);
    }

    #[test]
    fn deterministic_counters() {
        let (n, cls) = pigeonhole(5);
        let a = solve_clauses(n, &cls, None).1;
        let b = solve_clauses(n, &cls, None).1;
        assert_eq!((a.conflicts, a.decisions), (b.conflicts, b.decisions));
    }

    #[test]
    fn random_3sat_models_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = 60;
            let clauses: Vec<Vec<i32>> = (0..250)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen() {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            if let (SolveResult::Sat(m), _) = solve_clauses(n, &clauses, None) {
                assert!(satisfies(&m, &clauses));
            }
        }
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<f64> = (0..15).map(|k| luby(2.0, k)).collect();
        assert_eq!(
            seq,
            vec![1., 1., 2., 1., 1., 2., 4., 1., 1., 2., 1., 1., 2., 4., 8.]
        );
    }
}
