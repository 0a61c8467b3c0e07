//! Complete SAT solving with assumption literals and core extraction, plus a
//! brute-force model enumerator used as a testing oracle.
//!
//! The solver is conflict-driven clause learning with two-literal watching,
//! first-UIP learning, Luby restarts (base 64), variable activity with decay
//! and phase saving. Assumptions are handled incremental-SAT style: they
//! occupy the first decision levels, and when one fails the involved
//! assumptions are read off the trail as an unsatisfiable core. Cores are
//! sound but not necessarily minimal. All tie-breaking is by lowest index
//! and all randomization is seeded, so identical `(formula, assumptions,
//! seed)` triples yield identical results.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::assign::Assignment;
use crate::cnf::Cnf;
use crate::lit::{Literal, Var};

const RESTART_BASE: u64 = 64;
const ACTIVITY_DECAY: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub enum SatResult {
    Sat { model: Assignment },
    Unsat { core: Vec<Literal> },
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat { .. })
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SatResult::Sat { model } => Some(model),
            SatResult::Unsat { .. } => None,
        }
    }

    pub fn core(&self) -> Option<&[Literal]> {
        match self {
            SatResult::Sat { .. } => None,
            SatResult::Unsat { core } => Some(core),
        }
    }
}

/// Raised only by the deadline-aware entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("solver deadline expired")]
pub struct DeadlineExpired;

/// One-shot convenience wrapper.
pub fn solve(cnf: &Cnf, assumptions: &[Literal]) -> SatResult {
    Solver::new(cnf).solve(assumptions)
}

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<u32>>,
    watches: Vec<Vec<u32>>,
    values: Vec<Option<bool>>,
    levels: Vec<u32>,
    reasons: Vec<Option<u32>>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    act_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    base_unsat: bool,
    conflicts: u64,
}

fn ilit(lit: Literal) -> u32 {
    (lit.var() - 1) * 2 + u32::from(!lit.is_positive())
}

fn elit(lit: u32) -> Literal {
    Literal::new((lit >> 1) + 1, lit & 1 == 0)
}

impl Solver {
    pub fn new(cnf: &Cnf) -> Self {
        Solver::with_seed(cnf, 0)
    }

    /// The seed only varies branching phases and initial variable order;
    /// every seed gives a complete, deterministic solver.
    pub fn with_seed(cnf: &Cnf, seed: u64) -> Self {
        let nv = cnf.num_vars() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phase: Vec<bool> = (0..nv).map(|_| rng.random_bool(0.5)).collect();
        let activity: Vec<f64> = (0..nv).map(|_| rng.random::<f64>() * 1e-6).collect();
        let mut solver = Solver {
            num_vars: nv,
            clauses: Vec::with_capacity(cnf.len()),
            watches: vec![Vec::new(); nv * 2],
            values: vec![None; nv],
            levels: vec![0; nv],
            reasons: vec![None; nv],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            act_inc: 1.0,
            phase,
            seen: vec![false; nv],
            base_unsat: false,
            conflicts: 0,
        };
        for clause in cnf.clauses() {
            if clause.is_tautological() {
                continue;
            }
            let lits: Vec<u32> = clause.literals().iter().map(|&l| ilit(l)).collect();
            match lits.len() {
                0 => solver.base_unsat = true,
                1 => match solver.lit_value(lits[0]) {
                    Some(false) => solver.base_unsat = true,
                    Some(true) => {}
                    None => solver.enqueue(lits[0], None),
                },
                _ => {
                    let ci = solver.clauses.len() as u32;
                    solver.watches[lits[0] as usize].push(ci);
                    solver.watches[lits[1] as usize].push(ci);
                    solver.clauses.push(lits);
                }
            }
        }
        solver
    }

    /// Seeds the saved phases from an assignment, so search gravitates
    /// toward models agreeing with it. Purely heuristic; results stay
    /// deterministic per `(formula, assumptions, seed, hint)`.
    pub fn with_phase_hint(cnf: &Cnf, seed: u64, hint: &Assignment) -> Self {
        let mut solver = Solver::with_seed(cnf, seed);
        for var in hint.assigned_vars() {
            if var as usize <= solver.num_vars {
                solver.phase[(var - 1) as usize] = hint.value(var).expect("assigned");
            }
        }
        solver
    }

    pub fn solve(self, assumptions: &[Literal]) -> SatResult {
        self.solve_with_deadline(assumptions, None)
            .expect("no deadline was set")
    }

    pub fn solve_with_deadline(
        mut self,
        assumptions: &[Literal],
        deadline: Option<Instant>,
    ) -> Result<SatResult, DeadlineExpired> {
        if self.base_unsat {
            return Ok(SatResult::Unsat { core: Vec::new() });
        }
        debug_assert!(assumptions.iter().all(|l| l.var() <= self.num_vars as Var));

        // Deduplicate assumptions, keeping first occurrences; a
        // complementary pair is already a sound core.
        let mut assumed: Vec<u32> = Vec::with_capacity(assumptions.len());
        for &lit in assumptions {
            let l = ilit(lit);
            if assumed.contains(&(l ^ 1)) {
                let mut core = vec![lit, lit.negated()];
                core.sort();
                return Ok(SatResult::Unsat { core });
            }
            if !assumed.contains(&l) {
                assumed.push(l);
            }
        }

        let mut restart_idx = 1u64;
        let mut budget = RESTART_BASE * luby(restart_idx);
        let mut conflicts_since_restart = 0u64;

        loop {
            if let Some(confl) = self.propagate() {
                if self.current_level() == 0 {
                    return Ok(SatResult::Unsat { core: Vec::new() });
                }
                self.conflicts += 1;
                conflicts_since_restart += 1;
                if self.conflicts % 512 == 0 {
                    if let Some(d) = deadline {
                        if Instant::now() >= d {
                            return Err(DeadlineExpired);
                        }
                    }
                }
                let (learnt, bt_level) = self.analyze(confl);
                self.backtrack(bt_level);
                if learnt.len() == 1 {
                    match self.lit_value(learnt[0]) {
                        Some(false) => return Ok(SatResult::Unsat { core: Vec::new() }),
                        Some(true) => {}
                        None => self.enqueue(learnt[0], None),
                    }
                } else {
                    let ci = self.clauses.len() as u32;
                    self.watches[learnt[0] as usize].push(ci);
                    self.watches[learnt[1] as usize].push(ci);
                    let asserting = learnt[0];
                    self.clauses.push(learnt);
                    self.enqueue(asserting, Some(ci));
                }
                self.act_inc /= ACTIVITY_DECAY;
                if self.act_inc > 1e100 {
                    for a in &mut self.activity {
                        *a *= 1e-100;
                    }
                    self.act_inc *= 1e-100;
                }
            } else if conflicts_since_restart >= budget {
                restart_idx += 1;
                budget = RESTART_BASE * luby(restart_idx);
                conflicts_since_restart = 0;
                self.backtrack(0);
            } else if (self.current_level() as usize) < assumed.len() {
                let p = assumed[self.current_level() as usize];
                match self.lit_value(p) {
                    Some(true) => self.trail_lim.push(self.trail.len()),
                    Some(false) => {
                        let core = self.analyze_final(p);
                        return Ok(SatResult::Unsat { core });
                    }
                    None => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(p, None);
                    }
                }
            } else if let Some(v) = self.pick_branch_var() {
                self.trail_lim.push(self.trail.len());
                let lit = (v as u32) * 2 + u32::from(!self.phase[v]);
                self.enqueue(lit, None);
            } else {
                return Ok(SatResult::Sat { model: self.extract_model() });
            }
        }
    }

    fn current_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn lit_value(&self, lit: u32) -> Option<bool> {
        self.values[(lit >> 1) as usize].map(|v| v == (lit & 1 == 0))
    }

    fn enqueue(&mut self, lit: u32, reason: Option<u32>) {
        let v = (lit >> 1) as usize;
        debug_assert!(self.values[v].is_none());
        let value = lit & 1 == 0;
        self.values[v] = Some(value);
        self.levels[v] = self.current_level();
        self.reasons[v] = reason;
        self.phase[v] = value;
        self.trail.push(lit);
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i] as usize;
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.lit_value(first) == Some(true) {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    let cand = self.clauses[ci][k];
                    if self.lit_value(cand) != Some(false) {
                        self.clauses[ci].swap(1, k);
                        self.watches[cand as usize].push(ci as u32);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    ws.swap_remove(i);
                    continue;
                }
                if self.lit_value(first) == Some(false) {
                    self.watches[false_lit as usize] = ws;
                    self.qhead = self.trail.len();
                    return Some(ci as u32);
                }
                self.enqueue(first, Some(ci as u32));
                i += 1;
            }
            self.watches[false_lit as usize] = ws;
        }
        None
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, u32) {
        let current = self.current_level();
        let mut learnt: Vec<u32> = vec![0];
        let mut path = 0usize;
        let mut resolved: Option<u32> = None;
        let mut index = self.trail.len();

        loop {
            for &q in &self.clauses[confl as usize] {
                if Some(q) == resolved {
                    continue;
                }
                let v = (q >> 1) as usize;
                if !self.seen[v] && self.levels[v] > 0 {
                    self.seen[v] = true;
                    self.activity[v] += self.act_inc;
                    if self.levels[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[(self.trail[index] >> 1) as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = (lit >> 1) as usize;
            self.seen[v] = false;
            path -= 1;
            if path == 0 {
                learnt[0] = lit ^ 1;
                break;
            }
            confl = self.reasons[v].expect("resolved literal must be propagated");
            resolved = Some(lit);
        }

        for &q in &learnt[1..] {
            self.seen[(q >> 1) as usize] = false;
        }

        let bt_level = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.levels[(learnt[i] >> 1) as usize] > self.levels[(learnt[max_i] >> 1) as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.levels[(learnt[1] >> 1) as usize]
        };
        (learnt, bt_level)
    }

    /// Collects the assumptions responsible for the failing assumption `p`.
    fn analyze_final(&mut self, p: u32) -> Vec<Literal> {
        let mut core = vec![elit(p)];
        if self.current_level() == 0 {
            return core;
        }
        self.seen[(p >> 1) as usize] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let x = self.trail[i];
            let v = (x >> 1) as usize;
            if !self.seen[v] {
                continue;
            }
            match self.reasons[v] {
                None => core.push(elit(x)),
                Some(ci) => {
                    for k in 0..self.clauses[ci as usize].len() {
                        let q = self.clauses[ci as usize][k];
                        let qv = (q >> 1) as usize;
                        if qv != v && self.levels[qv] > 0 {
                            self.seen[qv] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[(p >> 1) as usize] = false;
        core.sort();
        core.dedup();
        core
    }

    fn backtrack(&mut self, level: u32) {
        while self.trail_lim.len() > level as usize {
            let lim = self.trail_lim.pop().expect("level checked");
            while self.trail.len() > lim {
                let lit = self.trail.pop().expect("trail above limit");
                let v = (lit >> 1) as usize;
                self.values[v] = None;
                self.reasons[v] = None;
            }
        }
        self.qhead = self.trail.len();
    }

    fn pick_branch_var(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.num_vars {
            if self.values[v].is_some() {
                continue;
            }
            match best {
                None => best = Some(v),
                Some(b) if self.activity[v] > self.activity[b] => best = Some(v),
                _ => {}
            }
        }
        best
    }

    fn extract_model(&self) -> Assignment {
        let mut model = Assignment::new();
        for v in 0..self.num_vars {
            model.assign(v as Var + 1, self.values[v].expect("model is total"));
        }
        model
    }
}

fn luby(mut i: u64) -> u64 {
    loop {
        let mut k = 1u32;
        while (1u64 << (k + 1)) - 1 <= i {
            k += 1;
        }
        if i == (1u64 << k) - 1 {
            return 1u64 << (k - 1);
        }
        i -= (1u64 << k) - 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("model enumeration refused: {0} variables exceed the budget of 24")]
    TooManyVars(usize),
    #[error("variable {0} occurs in the formula but not in the enumeration set")]
    UnlistedVar(Var),
}

/// Exactly the satisfying total assignments over `vars`, in lexicographic
/// order (earlier variables most significant, false before true). Brute
/// force by design: this is the oracle the solver is checked against.
pub fn enumerate_models(cnf: &Cnf, vars: &[Var]) -> Result<Vec<Assignment>, EnumerateError> {
    let mut vars: Vec<Var> = vars.to_vec();
    vars.sort();
    vars.dedup();
    if vars.len() > 24 {
        return Err(EnumerateError::TooManyVars(vars.len()));
    }
    let pos_of = |v: Var| vars.binary_search(&v).ok();
    let mut compiled: Vec<Vec<(usize, bool)>> = Vec::with_capacity(cnf.len());
    for clause in cnf.clauses() {
        let mut lits = Vec::with_capacity(clause.len());
        for &lit in clause.literals() {
            let pos = pos_of(lit.var()).ok_or(EnumerateError::UnlistedVar(lit.var()))?;
            lits.push((pos, lit.is_positive()));
        }
        compiled.push(lits);
    }

    let k = vars.len();
    let mut models = Vec::new();
    let mut bits = vec![false; k];
    for mask in 0..(1u64 << k) {
        for (j, bit) in bits.iter_mut().enumerate() {
            *bit = mask & (1 << (k - 1 - j)) != 0;
        }
        let ok = compiled
            .iter()
            .all(|clause| clause.iter().any(|&(pos, positive)| bits[pos] == positive));
        if ok {
            let mut a = Assignment::new();
            for (j, &v) in vars.iter().enumerate() {
                a.assign(v, bits[j]);
            }
            models.push(a);
        }
    }
    Ok(models)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;

    fn cnf_of(num_vars: Var, clauses: &[&[i64]]) -> Cnf {
        let mut cnf = Cnf::new(num_vars);
        for c in clauses {
            cnf.push(Clause::from_dimacs(c).unwrap());
        }
        cnf
    }

    fn lit(code: i64) -> Literal {
        Literal::from_dimacs(code).unwrap()
    }

    #[test]
    fn unit_clause_is_sat() {
        let result = solve(&cnf_of(1, &[&[1]]), &[]);
        assert_eq!(result.model().unwrap().value(1), Some(true));
    }

    #[test]
    fn assumptions_force_unsat_with_core() {
        let result = solve(&cnf_of(2, &[&[1, 2]]), &[lit(-1), lit(-2)]);
        let core = result.core().expect("unsat").to_vec();
        assert!(!core.is_empty());
        assert!(core.iter().all(|l| [lit(-1), lit(-2)].contains(l)));
    }

    #[test]
    fn contradictory_units_give_empty_core() {
        let result = solve(&cnf_of(1, &[&[1], &[-1]]), &[]);
        assert_eq!(result.core(), Some(&[][..]));
    }

    #[test]
    fn complementary_assumptions_are_a_core() {
        let result = solve(&cnf_of(2, &[&[1, 2]]), &[lit(1), lit(-1)]);
        assert_eq!(result.core(), Some(&[lit(1), lit(-1)][..]));
    }

    #[test]
    fn tautological_clauses_are_ignored() {
        let result = solve(&cnf_of(2, &[&[1, -1], &[2]]), &[]);
        assert!(result.is_sat());
    }

    #[test]
    fn enumerate_examples() {
        let models = enumerate_models(&cnf_of(2, &[&[1, 2]]), &[1, 2]).unwrap();
        assert_eq!(models.len(), 3);
        let models = enumerate_models(&cnf_of(1, &[]), &[1]).unwrap();
        assert_eq!(models.len(), 2);
        let models = enumerate_models(&cnf_of(1, &[&[1], &[-1]]), &[1]).unwrap();
        assert!(models.is_empty());
        assert!(matches!(
            enumerate_models(&cnf_of(1, &[&[1]]), &(1..=25).collect::<Vec<_>>()),
            Err(EnumerateError::TooManyVars(25))
        ));
    }

    #[test]
    fn enumerate_order_is_lexicographic() {
        let models = enumerate_models(&cnf_of(2, &[]), &[1, 2]).unwrap();
        let rendered: Vec<String> = models.iter().map(|m| m.to_text()).collect();
        assert_eq!(rendered, vec!["-1 -2", "-1 2", "1 -2", "1 2"]);
    }

    fn random_cnf(rng: &mut impl Rng, max_vars: Var, max_clauses: usize) -> Cnf {
        let nv = rng.random_range(1..=max_vars);
        let mut cnf = Cnf::new(nv);
        for _ in 0..rng.random_range(1..=max_clauses) {
            let len = rng.random_range(1..=3);
            let lits: Vec<Literal> =
                (0..len).map(|_| Literal::new(rng.random_range(1..=nv), rng.random_bool(0.5))).collect();
            cnf.push(Clause::new(lits));
        }
        cnf
    }

    /// Solve status agrees with brute-force enumeration on 500 random CNFs.
    #[test]
    fn agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..500 {
            let cnf = random_cnf(&mut rng, 10, 20);
            let vars: Vec<Var> = (1..=cnf.num_vars()).collect();
            let expected = !enumerate_models(&cnf, &vars).unwrap().is_empty();
            let result = solve(&cnf, &[]);
            assert_eq!(result.is_sat(), expected, "round {round}: {cnf:?}");
            if let SatResult::Sat { model } = &result {
                assert_eq!(cnf.eval(model), Some(true), "round {round}: bogus model");
            }
        }
    }

    /// Unsat cores are subsets of the assumptions and re-solving with only
    /// the core stays unsat; supersets of an unsat assumption set stay unsat.
    #[test]
    fn cores_are_sound_and_assumptions_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut unsat_seen = 0;
        for _ in 0..400 {
            let cnf = random_cnf(&mut rng, 8, 16);
            let mut assumptions = Vec::new();
            for v in 1..=cnf.num_vars() {
                if rng.random_bool(0.6) {
                    assumptions.push(Literal::new(v, rng.random_bool(0.5)));
                }
            }
            let result = solve(&cnf, &assumptions);
            if let SatResult::Unsat { core } = result {
                unsat_seen += 1;
                assert!(core.iter().all(|l| assumptions.contains(l)), "core must come from assumptions");
                assert!(!solve(&cnf, &core).is_sat(), "core must keep the formula unsat");
                // monotonicity: adding more assumptions cannot recover sat
                let mut extended = assumptions.clone();
                for v in 1..=cnf.num_vars() {
                    let l = Literal::new(v, rng.random_bool(0.5));
                    if !extended.contains(&l.negated()) && !extended.contains(&l) {
                        extended.push(l);
                    }
                }
                assert!(!solve(&cnf, &extended).is_sat());
            }
        }
        assert!(unsat_seen > 20, "test should exercise unsat instances, saw {unsat_seen}");
    }

    #[test]
    fn identical_inputs_identical_results() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let cnf = random_cnf(&mut rng, 9, 18);
            let assumptions = vec![Literal::new(1, rng.random_bool(0.5))];
            for seed in [0u64, 1, 99] {
                let a = Solver::with_seed(&cnf, seed).solve(&assumptions);
                let b = Solver::with_seed(&cnf, seed).solve(&assumptions);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn luby_sequence_prefix() {
        let seq: Vec<u64> = (1..=15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}
