//! Exact minimum covers by branch and bound.
//!
//! A cover instance asks for a smallest candidate subset meeting every
//! target (set cover and hitting set are both this shape). Branching is on
//! the unmet target with the fewest usable candidates, the upper bound comes
//! from a greedy cover and the lower bound from counting pairwise-disjoint
//! unmet targets. On top of the cardinality optimum there is a second,
//! lexicographic phase that realizes the crate-wide tie-break: prefer covers
//! drawn from the `preferred` candidates only, then the lexicographically
//! least index set.

use std::time::Instant;

#[derive(Debug, Clone)]
pub(crate) struct CoverInstance {
    pub n_candidates: usize,
    /// Candidates that avoid the De Morgan negation for the current mode.
    pub preferred: Vec<bool>,
    /// Per target, the ascending candidate indices that meet it.
    pub targets: Vec<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub(crate) enum CoverFailure {
    /// Some target has no candidate at all.
    Infeasible,
    Expired { lower_bound: usize, incumbent: Option<Vec<u32>> },
}

/// Minimum-cardinality cover, any witness.
pub(crate) fn min_cover_any(
    inst: &CoverInstance,
    deadline: Option<Instant>,
) -> Result<Vec<u32>, CoverFailure> {
    let mut ctx = Ctx::new(inst, false, deadline);
    let Some(greedy_sol) = greedy(&mut ctx) else {
        return Err(CoverFailure::Infeasible);
    };
    let root_lb = ctx.lower_bound().unwrap_or(0);
    let mut best_len = greedy_sol.len();
    let mut best = greedy_sol;
    let mut chosen = Vec::new();
    match optimize(&mut ctx, &mut chosen, &mut best, &mut best_len) {
        Ok(()) => Ok(best),
        Err(Expired) => Err(CoverFailure::Expired { lower_bound: root_lb, incumbent: Some(best) }),
    }
}

/// The preference-least minimum cover: smallest cardinality, then covers
/// using preferred candidates only when one exists at that cardinality, then
/// the lexicographically least index set.
pub(crate) fn preferred_min_cover(
    inst: &CoverInstance,
    deadline: Option<Instant>,
) -> Result<Vec<u32>, CoverFailure> {
    let any = min_cover_any(inst, deadline)?;
    let cardinality = any.len();
    refine_at_cardinality(inst, cardinality, &any, deadline)
}

/// The lexicographic phase alone, for callers that already know the optimal
/// cardinality (`fallback` must be a cover of that size).
pub(crate) fn refine_at_cardinality(
    inst: &CoverInstance,
    cardinality: usize,
    fallback: &[u32],
    deadline: Option<Instant>,
) -> Result<Vec<u32>, CoverFailure> {
    let expired = |_| CoverFailure::Expired { lower_bound: cardinality, incumbent: Some(fallback.to_vec()) };
    if !inst.preferred.iter().all(|&b| b) {
        if let Some(sol) = lex_min_cover(inst, cardinality, true, deadline).map_err(expired)? {
            return Ok(sol);
        }
    }
    let sol = lex_min_cover(inst, cardinality, false, deadline)
        .map_err(expired)?
        .expect("a cover of the optimal cardinality exists");
    Ok(sol)
}

struct Expired;

struct Ctx<'a> {
    inst: &'a CoverInstance,
    covers_of: Vec<Vec<u32>>,
    cover_count: Vec<u32>,
    uncovered: usize,
    banned: Vec<bool>,
    restrict_preferred: bool,
    min_idx: u32,
    deadline: Option<Instant>,
    nodes: u64,
    scratch: Vec<bool>,
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a CoverInstance, restrict_preferred: bool, deadline: Option<Instant>) -> Self {
        let mut covers_of = vec![Vec::new(); inst.n_candidates];
        for (t, cands) in inst.targets.iter().enumerate() {
            for &c in cands {
                covers_of[c as usize].push(t as u32);
            }
        }
        Ctx {
            inst,
            covers_of,
            cover_count: vec![0; inst.targets.len()],
            uncovered: inst.targets.len(),
            banned: vec![false; inst.n_candidates],
            restrict_preferred,
            min_idx: 0,
            deadline,
            nodes: 0,
            scratch: vec![false; inst.n_candidates],
        }
    }

    fn available(&self, c: u32) -> bool {
        c >= self.min_idx
            && !self.banned[c as usize]
            && (!self.restrict_preferred || self.inst.preferred[c as usize])
    }

    fn choose(&mut self, c: u32) {
        for &t in &self.covers_of[c as usize] {
            self.cover_count[t as usize] += 1;
            if self.cover_count[t as usize] == 1 {
                self.uncovered -= 1;
            }
        }
    }

    fn unchoose(&mut self, c: u32) {
        for &t in &self.covers_of[c as usize] {
            self.cover_count[t as usize] -= 1;
            if self.cover_count[t as usize] == 0 {
                self.uncovered += 1;
            }
        }
    }

    fn covers_something_new(&self, c: u32) -> bool {
        self.covers_of[c as usize].iter().any(|&t| self.cover_count[t as usize] == 0)
    }

    /// Count of pairwise-disjoint unmet targets; `None` when some unmet
    /// target has no available candidate (the branch is infeasible).
    fn lower_bound(&mut self) -> Option<usize> {
        self.scratch.fill(false);
        let mut lb = 0;
        for (t, cands) in self.inst.targets.iter().enumerate() {
            if self.cover_count[t] > 0 {
                continue;
            }
            let mut any = false;
            let mut disjoint = true;
            for &c in cands {
                if self.available(c) {
                    any = true;
                    if self.scratch[c as usize] {
                        disjoint = false;
                    }
                }
            }
            if !any {
                return None;
            }
            if disjoint {
                lb += 1;
                for &c in cands {
                    if self.available(c) {
                        self.scratch[c as usize] = true;
                    }
                }
            }
        }
        Some(lb)
    }

    /// Unmet target with the fewest available candidates.
    fn pick_target(&self) -> usize {
        let mut best = usize::MAX;
        let mut best_count = usize::MAX;
        for (t, cands) in self.inst.targets.iter().enumerate() {
            if self.cover_count[t] > 0 {
                continue;
            }
            let count = cands.iter().filter(|&&c| self.available(c)).count();
            if count < best_count {
                best_count = count;
                best = t;
            }
        }
        best
    }

    fn tick(&mut self) -> Result<(), Expired> {
        self.nodes += 1;
        if self.nodes % 1024 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Expired);
                }
            }
        }
        Ok(())
    }
}

fn greedy(ctx: &mut Ctx) -> Option<Vec<u32>> {
    let mut chosen = Vec::new();
    while ctx.uncovered > 0 {
        let mut best: Option<(usize, u32)> = None;
        for c in 0..ctx.inst.n_candidates as u32 {
            if !ctx.available(c) {
                continue;
            }
            let gain = ctx.covers_of[c as usize]
                .iter()
                .filter(|&&t| ctx.cover_count[t as usize] == 0)
                .count();
            if gain > 0 && best.map_or(true, |(g, _)| gain > g) {
                best = Some((gain, c));
            }
        }
        match best {
            Some((_, c)) => {
                ctx.choose(c);
                chosen.push(c);
            }
            None => {
                for &c in &chosen {
                    ctx.unchoose(c);
                }
                return None;
            }
        }
    }
    for &c in &chosen {
        ctx.unchoose(c);
    }
    chosen.sort();
    Some(chosen)
}

fn optimize(
    ctx: &mut Ctx,
    chosen: &mut Vec<u32>,
    best: &mut Vec<u32>,
    best_len: &mut usize,
) -> Result<(), Expired> {
    ctx.tick()?;
    if ctx.uncovered == 0 {
        if chosen.len() < *best_len {
            *best_len = chosen.len();
            *best = chosen.clone();
            best.sort();
        }
        return Ok(());
    }
    let Some(lb) = ctx.lower_bound() else {
        return Ok(());
    };
    if chosen.len() + lb >= *best_len {
        return Ok(());
    }
    let t = ctx.pick_target();
    let cands: Vec<u32> = ctx.inst.targets[t].iter().copied().filter(|&c| ctx.available(c)).collect();
    let mut banned_here = Vec::new();
    for c in cands {
        ctx.choose(c);
        chosen.push(c);
        let r = optimize(ctx, chosen, best, best_len);
        chosen.pop();
        ctx.unchoose(c);
        r?;
        ctx.banned[c as usize] = true;
        banned_here.push(c);
    }
    for c in banned_here {
        ctx.banned[c as usize] = false;
    }
    Ok(())
}

fn exists_cover(ctx: &mut Ctx, budget: usize) -> Result<bool, Expired> {
    ctx.tick()?;
    if ctx.uncovered == 0 {
        return Ok(true);
    }
    if budget == 0 {
        return Ok(false);
    }
    let Some(lb) = ctx.lower_bound() else {
        return Ok(false);
    };
    if lb > budget {
        return Ok(false);
    }
    let t = ctx.pick_target();
    let cands: Vec<u32> = ctx.inst.targets[t].iter().copied().filter(|&c| ctx.available(c)).collect();
    let mut banned_here = Vec::new();
    let mut found = false;
    for c in cands {
        ctx.choose(c);
        let r = exists_cover(ctx, budget - 1);
        ctx.unchoose(c);
        match r {
            Ok(true) => {
                found = true;
                break;
            }
            Ok(false) => {
                ctx.banned[c as usize] = true;
                banned_here.push(c);
            }
            Err(e) => {
                for b in banned_here {
                    ctx.banned[b as usize] = false;
                }
                return Err(e);
            }
        }
    }
    for c in banned_here {
        ctx.banned[c as usize] = false;
    }
    Ok(found)
}

/// The lexicographically least cover of size at most `limit`, drawn from
/// preferred candidates only when `preferred_only` is set; `None` when no
/// such cover exists. `limit` must be the optimal cardinality of the
/// unrestricted problem, which guarantees every element of a qualifying
/// cover meets a new target.
fn lex_min_cover(
    inst: &CoverInstance,
    limit: usize,
    preferred_only: bool,
    deadline: Option<Instant>,
) -> Result<Option<Vec<u32>>, Expired> {
    let mut ctx = Ctx::new(inst, preferred_only, deadline);
    let mut fixed: Vec<u32> = Vec::new();
    while ctx.uncovered > 0 {
        if fixed.len() >= limit {
            return Ok(None);
        }
        let start = ctx.min_idx;
        let mut advanced = false;
        for c in start..inst.n_candidates as u32 {
            if !ctx.available(c) || !ctx.covers_something_new(c) {
                continue;
            }
            ctx.choose(c);
            ctx.min_idx = c + 1;
            let feasible = exists_cover(&mut ctx, limit - fixed.len() - 1)?;
            if feasible {
                fixed.push(c);
                advanced = true;
                break;
            }
            ctx.min_idx = start;
            ctx.unchoose(c);
        }
        if !advanced {
            return Ok(None);
        }
    }
    Ok(Some(fixed))
}
