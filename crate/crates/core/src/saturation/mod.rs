//! The given-clause saturation loop (DISCOUNT style: only processed
//! clauses take part in inferences and simplify each other; passive
//! clauses are simplified when they are selected).

mod proof;
mod queue;

pub use proof::{extract_proof, Proof, ReplayError};
pub use queue::{PassiveQueue, Priority};

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::calculus::{
    apply_rewrite, clause_is_ground, clause_max_var, clause_weight, equational_factoring,
    instance_of, is_deletable, is_tautology, normalize, paramodulation_step, reflection, simplify,
    strictly_maximal_candidate, Clause, ClauseId, Conclusion, Inference, Literal,
    CutStep, ParamodulationStep, RewriteStep, Side,
};
use crate::orderings::{Scheme, TermOrdering};
use crate::terms::{match_with, unify, Substitution, SymbolId, Var};

/// Clause selection heuristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchPlan {
    /// Select input clauses before generated ones.
    pub prefer_initial: bool,
    /// Select ground clauses before non-ground ones.
    pub prefer_ground: bool,
    /// Every n-th selection takes the oldest passive clause (0 disables).
    pub pick_oldest_every: usize,
}

impl SearchPlan {
    pub fn good_lpo() -> SearchPlan {
        SearchPlan {
            prefer_initial: true,
            prefer_ground: false,
            pick_oldest_every: 5,
        }
    }

    pub fn std_kbo() -> SearchPlan {
        SearchPlan {
            prefer_initial: false,
            prefer_ground: true,
            pick_oldest_every: 5,
        }
    }

    pub fn for_scheme(s: Scheme) -> SearchPlan {
        match s {
            Scheme::GoodLpo => Self::good_lpo(),
            Scheme::StdKbo => Self::std_kbo(),
        }
    }
}

/// Selection key: smaller keys are selected first. Weight counts 2 per
/// symbol occurrence and 1 per variable occurrence; ties go to the older
/// clause.
pub fn clause_priority(lits: &[Literal], initial: bool, id: ClauseId, plan: &SearchPlan) -> Priority {
    (
        (plan.prefer_initial && !initial) as u8,
        (plan.prefer_ground && !clause_is_ground(lits)) as u8,
        clause_weight(lits),
        id,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub timeout: Option<Duration>,
    /// Cap on clauses retained (processed plus passive).
    pub max_clauses: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            timeout: None,
            max_clauses: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    Timeout,
    ClauseCap,
}

impl LimitKind {
    pub fn name(self) -> &'static str {
        match self {
            LimitKind::Timeout => "timeout",
            LimitKind::ClauseCap => "clause-cap",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Unsatisfiable,
    /// Saturated without the empty clause.
    Satisfiable,
    ResourceOut(LimitKind),
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Unsatisfiable => "UNSAT",
            Verdict::Satisfiable => "SAT",
            Verdict::ResourceOut(_) => "FAIL",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub initial: usize,
    pub generated: usize,
    pub processed: usize,
    pub remaining: usize,
    /// Non-input steps of the proof, when one was found.
    pub proof_steps: usize,
    pub elapsed: Duration,
}

impl Stats {
    /// Percentage of generated clauses that the proof does not use.
    pub fn unnecessary_pct(&self) -> f64 {
        if self.generated == 0 {
            return 0.0;
        }
        let used = self.proof_steps.min(self.generated);
        100.0 * (self.generated - used) as f64 / self.generated as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Passive,
    Active,
    Removed,
}

/// Result of a saturation run. Keeps every clause ever created so that
/// proofs and inference logs can be inspected afterwards.
pub struct Outcome {
    pub verdict: Verdict,
    pub stats: Stats,
    pub clauses: Vec<Clause>,
    pub status: Vec<Status>,
    pub empty: Option<ClauseId>,
}

impl Outcome {
    pub fn proof(&self) -> Option<Proof> {
        self.empty.map(|id| extract_proof(&self.clauses, id))
    }

    /// Clauses processed and never removed: the saturated set when the
    /// verdict is `Satisfiable`.
    pub fn persistent(&self) -> impl Iterator<Item = &Clause> {
        self.clauses
            .iter()
            .zip(&self.status)
            .filter(|(_, s)| **s == Status::Active)
            .map(|(c, _)| c)
    }
}

#[derive(Clone, Debug)]
struct IntoEntry {
    id: ClauseId,
    lit: usize,
    side: Side,
    pos: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct FromEntry {
    id: ClauseId,
    lit: usize,
    side: Side,
}

fn symbol_mask(lits: &[Literal]) -> u64 {
    let mut m = 0u64;
    for l in lits {
        for t in [&l.lhs, &l.rhs] {
            t.for_each_symbol(&mut |s| m |= 1 << (s.0 % 64));
        }
    }
    m
}

struct Saturation<'o> {
    ord: &'o TermOrdering,
    plan: SearchPlan,
    limits: Limits,
    start: Instant,
    clauses: Vec<Clause>,
    status: Vec<Status>,
    masks: Vec<u64>,
    n_initial: usize,
    passive: PassiveQueue,
    n_passive: usize,
    active: Vec<ClauseId>,
    n_active: usize,
    into_index: HashMap<SymbolId, Vec<IntoEntry>>,
    from_index: HashMap<SymbolId, Vec<FromEntry>>,
    from_var: Vec<FromEntry>,
    demods: HashMap<SymbolId, Vec<(ClauseId, Side)>>,
    ground_units: HashMap<Literal, ClauseId>,
    removed_since_compact: usize,
    stats: Stats,
}

/// Saturates `inputs`. The clause ids of the inputs are `0..inputs.len()`.
pub fn saturate(inputs: Vec<Vec<Literal>>, ord: &TermOrdering, plan: &SearchPlan, limits: &Limits) -> Outcome {
    let mut s = Saturation {
        ord,
        plan: plan.clone(),
        limits: limits.clone(),
        start: Instant::now(),
        clauses: Vec::new(),
        status: Vec::new(),
        masks: Vec::new(),
        n_initial: inputs.len(),
        passive: PassiveQueue::new(plan.pick_oldest_every),
        n_passive: 0,
        active: Vec::new(),
        n_active: 0,
        into_index: HashMap::new(),
        from_index: HashMap::new(),
        from_var: Vec::new(),
        demods: HashMap::new(),
        ground_units: HashMap::new(),
        removed_since_compact: 0,
        stats: Stats::default(),
    };
    let mut empty = None;
    let verdict = s.run(inputs, &mut empty);
    s.stats.elapsed = s.start.elapsed();
    s.stats.remaining = s.n_passive;
    let mut out = Outcome {
        verdict,
        stats: s.stats,
        clauses: s.clauses,
        status: s.status,
        empty,
    };
    if let Some(p) = out.proof() {
        out.stats.proof_steps = p.inferences();
    }
    out
}

impl Saturation<'_> {
    fn store(&mut self, lits: Vec<Literal>, inference: Inference, status: Status) -> ClauseId {
        let id = self.clauses.len();
        self.masks.push(symbol_mask(&lits));
        self.clauses.push(Clause { id, literals: lits, inference });
        self.status.push(status);
        if status == Status::Passive {
            let p = clause_priority(&self.clauses[id].literals, id < self.n_initial, id, &self.plan);
            self.passive.push(p);
            self.n_passive += 1;
        }
        id
    }

    fn out_of_time(&self) -> bool {
        self.limits.timeout.is_some_and(|t| self.start.elapsed() >= t)
    }

    fn run(&mut self, inputs: Vec<Vec<Literal>>, empty: &mut Option<ClauseId>) -> Verdict {
        for (i, lits) in inputs.into_iter().enumerate() {
            let id = self.store(normalize(lits), Inference::Input { index: i }, Status::Passive);
            self.stats.initial += 1;
            if self.clauses[id].literals.is_empty() {
                *empty = Some(id);
                return Verdict::Unsatisfiable;
            }
        }
        loop {
            if self.out_of_time() {
                return Verdict::ResourceOut(LimitKind::Timeout);
            }
            if self.n_passive + self.n_active > self.limits.max_clauses {
                return Verdict::ResourceOut(LimitKind::ClauseCap);
            }
            let status = &self.status;
            let Some(picked) = self.passive.pop(|id| status[id] == Status::Passive) else {
                return Verdict::Satisfiable;
            };
            self.status[picked] = Status::Removed;
            self.n_passive -= 1;

            let gid = self.forward_simplify(picked);
            let lits = &self.clauses[gid].literals;
            if lits.is_empty() {
                *empty = Some(gid);
                return Verdict::Unsatisfiable;
            }
            if is_deletable(lits) || is_tautology(lits) || self.forward_subsumed(gid) {
                continue;
            }
            if self.clauses[gid].is_unit() && self.clauses[gid].literals[0].positive {
                self.backward_simplify(gid);
            }
            self.backward_subsume(gid);
            let (g_into, g_from) = self.activate(gid);
            if self.clauses[gid].is_unit() && self.clauses[gid].is_ground() {
                self.backward_cut(gid);
            }
            self.stats.processed += 1;

            let conclusions = self.generate(gid, &g_into, &g_from);
            for c in conclusions {
                self.stats.generated += 1;
                if c.literals.is_empty() {
                    let id = self.store(c.literals, c.inference, Status::Removed);
                    *empty = Some(id);
                    return Verdict::Unsatisfiable;
                }
                if is_deletable(&c.literals) || is_tautology(&c.literals) {
                    continue;
                }
                self.store(c.literals, c.inference, Status::Passive);
            }
            if self.removed_since_compact > 64 && self.removed_since_compact > self.n_active {
                self.compact();
            }
        }
    }

    fn remove_active(&mut self, id: ClauseId) {
        debug_assert_eq!(self.status[id], Status::Active);
        self.status[id] = Status::Removed;
        self.n_active -= 1;
        self.removed_since_compact += 1;
        let c = &self.clauses[id];
        if c.is_unit() && c.is_ground() && self.ground_units.get(&c.literals[0]) == Some(&id) {
            self.ground_units.remove(&c.literals[0]);
        }
    }

    fn compact(&mut self) {
        let st = &self.status;
        let live = |id: ClauseId| st[id] == Status::Active;
        self.active.retain(|&id| live(id));
        for v in self.into_index.values_mut() {
            v.retain(|e| live(e.id));
        }
        for v in self.from_index.values_mut() {
            v.retain(|e| live(e.id));
        }
        self.from_var.retain(|e| live(e.id));
        for v in self.demods.values_mut() {
            v.retain(|e| live(e.0));
        }
        self.removed_since_compact = 0;
    }

    /// Finds one rewrite of `lits` by a processed unit equation.
    fn find_demod_rewrite(&self, lits: &[Literal], offset: u32) -> Option<(RewriteStep, Vec<Literal>)> {
        for (li, lit) in lits.iter().enumerate() {
            for side in Side::BOTH {
                let t = lit.side(side);
                for pos in t.positions() {
                    let u = t.subterm_at(&pos).unwrap();
                    let Some(cands) = self.demods.get(&u.symbol().unwrap()) else { continue };
                    for &(rid, rside) in cands {
                        if self.status[rid] != Status::Active {
                            continue;
                        }
                        let rule = self.clauses[rid].literals[0].shift_vars(offset);
                        let mut m = Substitution::new();
                        if !match_with(rule.side(rside), u, &mut m) {
                            continue;
                        }
                        let step = RewriteStep {
                            rule: rid,
                            rule_side: rside,
                            literal: li,
                            side,
                            position: pos.clone(),
                            matcher: m,
                        };
                        if let Some(next) = apply_rewrite(lits, &rule, &step, self.ord) {
                            let matcher = Substitution::from_pairs(
                                step.matcher
                                    .pairs()
                                    .iter()
                                    .map(|(v, t)| (Var { id: v.id - offset, sort: v.sort }, t.clone()))
                                    .collect(),
                            );
                            return Some((RewriteStep { matcher, ..step }, next));
                        }
                    }
                }
            }
        }
        None
    }

    /// Rewrites the selected clause to normal form with the processed unit
    /// equations. Returns the id of the result (a new clause if anything
    /// changed).
    fn forward_simplify(&mut self, id: ClauseId) -> ClauseId {
        let mut cur = self.clauses[id].literals.clone();
        let offset = clause_max_var(&cur).map_or(0, |m| m + 1);
        let mut steps = Vec::new();
        while let Some((step, next)) = self.find_demod_rewrite(&cur, offset) {
            steps.push(step);
            cur = next;
        }
        let id = if steps.is_empty() {
            id
        } else {
            self.store(normalize(cur), Inference::Simplification { parent: id, steps }, Status::Removed)
        };
        self.cut_literals(id)
    }

    /// Removes `t ≄ t` literals and literals complementary to a processed
    /// ground unit.
    fn cut_literals(&mut self, id: ClauseId) -> ClauseId {
        let mut cur = self.clauses[id].literals.clone();
        let mut steps = Vec::new();
        loop {
            let found = cur.iter().enumerate().find_map(|(i, l)| {
                if !l.positive && l.lhs == l.rhs {
                    return Some(CutStep { literal: i, unit: None });
                }
                if l.is_ground() {
                    if let Some(&u) = self.ground_units.get(&l.negated()) {
                        if self.status[u] == Status::Active {
                            return Some(CutStep { literal: i, unit: Some(u) });
                        }
                    }
                }
                None
            });
            let Some(step) = found else { break };
            cur.remove(step.literal);
            steps.push(step);
        }
        if steps.is_empty() {
            return id;
        }
        self.store(normalize(cur), Inference::Cut { parent: id, steps }, Status::Removed)
    }

    /// Cuts the complement of the new ground unit `id` out of processed
    /// clauses; the results go back to the passive set.
    fn backward_cut(&mut self, id: ClauseId) {
        let comp = self.clauses[id].literals[0].negated();
        let cands: Vec<ClauseId> = self
            .active
            .iter()
            .copied()
            .filter(|&a| a != id && self.status[a] == Status::Active && self.clauses[a].literals.contains(&comp))
            .collect();
        for a in cands {
            self.remove_active(a);
            self.stats.generated += 1;
            self.status[a] = Status::Removed;
            let c = self.cut_literals(a);
            if c != a {
                self.status[c] = Status::Passive;
                let p = clause_priority(&self.clauses[c].literals, false, c, &self.plan);
                self.passive.push(p);
                self.n_passive += 1;
            }
        }
    }

    fn forward_subsumed(&self, id: ClauseId) -> bool {
        let g = &self.clauses[id];
        if g.literals.iter().any(|l| self.ground_units.contains_key(l)) {
            return true;
        }
        let gm = self.masks[id];
        self.active.iter().any(|&a| {
            self.status[a] == Status::Active
                && self.clauses[a].literals.len() <= g.literals.len()
                && self.masks[a] & !gm == 0
                && instance_of(&self.clauses[a].literals, &g.literals)
        })
    }

    fn backward_subsume(&mut self, id: ClauseId) {
        let gm = self.masks[id];
        let glen = self.clauses[id].literals.len();
        let victims: Vec<ClauseId> = self
            .active
            .iter()
            .copied()
            .filter(|&a| {
                self.status[a] == Status::Active
                    && self.clauses[a].literals.len() >= glen
                    && gm & !self.masks[a] == 0
                    && instance_of(&self.clauses[id].literals, &self.clauses[a].literals)
                    && !instance_of(&self.clauses[a].literals, &self.clauses[id].literals)
            })
            .collect();
        for a in victims {
            self.remove_active(a);
        }
    }

    fn backward_simplify(&mut self, id: ClauseId) {
        let rule = self.clauses[id].clone();
        let lit = &rule.literals[0];
        let mut keys = 0u64;
        for s in [&lit.lhs, &lit.rhs] {
            if let Some(f) = s.symbol() {
                keys |= 1 << (f.0 % 64);
            }
        }
        let cands: Vec<ClauseId> = self
            .active
            .iter()
            .copied()
            .filter(|&a| self.status[a] == Status::Active && self.masks[a] & keys != 0)
            .collect();
        for a in cands {
            if let Some(c) = simplify(&self.clauses[a], &rule, self.ord) {
                self.remove_active(a);
                self.stats.generated += 1;
                if is_deletable(&c.literals) || is_tautology(&c.literals) {
                    continue;
                }
                self.store(c.literals, c.inference, Status::Passive);
            }
        }
    }

    /// Makes `id` a processed clause and indexes it. Returns its own index
    /// entries.
    fn activate(&mut self, id: ClauseId) -> (Vec<IntoEntry>, Vec<FromEntry>) {
        let mut own_into = Vec::new();
        let mut own_from = Vec::new();
        self.status[id] = Status::Active;
        self.n_active += 1;
        self.active.push(id);
        let c = &self.clauses[id];
        let lits = &c.literals;
        let ord = self.ord;
        if c.is_unit() && c.is_ground() {
            self.ground_units.entry(lits[0].clone()).or_insert(id);
        }
        for (i, l) in lits.iter().enumerate() {
            if !strictly_maximal_candidate(lits, i, ord) {
                continue;
            }
            for side in Side::BOTH {
                let s = l.side(side);
                if ord.compare(s, l.side(side.flip())).is_less_or_equal() {
                    continue;
                }
                for pos in s.positions() {
                    let f = s.subterm_at(&pos).unwrap().symbol().unwrap();
                    let e = IntoEntry { id, lit: i, side, pos };
                    own_into.push(e.clone());
                    self.into_index.entry(f).or_default().push(e);
                }
                if l.positive {
                    let e = FromEntry { id, lit: i, side };
                    own_from.push(e);
                    match s.symbol() {
                        Some(f) => self.from_index.entry(f).or_default().push(e),
                        None => self.from_var.push(e),
                    }
                    if lits.len() == 1 {
                        if let Some(f) = s.symbol() {
                            self.demods.entry(f).or_default().push((id, side));
                        }
                    }
                }
            }
        }
        (own_into, own_from)
    }

    fn generate(&self, gid: ClauseId, g_into: &[IntoEntry], g_from: &[FromEntry]) -> Vec<Conclusion> {
        let g = &self.clauses[gid];
        let ord = self.ord;
        let mut out = reflection(g, ord);
        out.extend(equational_factoring(g, ord));
        let offset_of = |c: &Clause| clause_max_var(&c.literals).map_or(0, |m| m + 1);
        let shifted = |c: &Clause, off: u32| -> Vec<Literal> { c.literals.iter().map(|l| l.shift_vars(off)).collect() };
        let push = |into: &Clause, from_lits: &[Literal], step: ParamodulationStep, out: &mut Vec<Conclusion>| {
            if let Some(lits) = paramodulation_step(&into.literals, from_lits, &step, ord) {
                let inference = if into.literals[step.into_literal].positive {
                    Inference::Superposition(Box::new(step))
                } else {
                    Inference::Paramodulation(Box::new(step))
                };
                out.push(Conclusion { literals: lits, inference });
            }
        };

        // g as the equation being used
        let mut g_shift_cache: HashMap<u32, Vec<Literal>> = HashMap::new();
        for fe in g_from {
            let u = g.literals[fe.lit].side(fe.side);
            let cands: Box<dyn Iterator<Item = &IntoEntry>> = match u.symbol() {
                Some(f) => Box::new(self.into_index.get(&f).into_iter().flatten()),
                None => Box::new(self.into_index.values().flatten()),
            };
            for ie in cands {
                if self.status[ie.id] != Status::Active {
                    continue;
                }
                let into = &self.clauses[ie.id];
                let up = into.literals[ie.lit].side(ie.side).subterm_at(&ie.pos).unwrap();
                if up.sort() != u.sort() {
                    continue;
                }
                let off = offset_of(into);
                let from_lits = g_shift_cache.entry(off).or_insert_with(|| shifted(g, off));
                let us = from_lits[fe.lit].side(fe.side);
                let Some(unifier) = unify(us, up) else { continue };
                let step = ParamodulationStep {
                    into: ie.id,
                    into_literal: ie.lit,
                    into_side: ie.side,
                    position: ie.pos.clone(),
                    from: gid,
                    from_literal: fe.lit,
                    from_side: fe.side,
                    offset: off,
                    unifier,
                };
                push(into, from_lits, step, &mut out);
            }
        }

        // g as the clause rewritten
        let off = offset_of(g);
        let mut from_cache: HashMap<ClauseId, Vec<Literal>> = HashMap::new();
        for ie in g_into {
            let up = g.literals[ie.lit].side(ie.side).subterm_at(&ie.pos).unwrap();
            let f = up.symbol().unwrap();
            let cands = self.from_index.get(&f).into_iter().flatten().chain(&self.from_var);
            for fe in cands {
                if fe.id == gid || self.status[fe.id] != Status::Active {
                    continue;
                }
                let from = &self.clauses[fe.id];
                if from.literals[fe.lit].sort() != up.sort() {
                    continue;
                }
                let from_lits = from_cache.entry(fe.id).or_insert_with(|| shifted(from, off));
                let us = from_lits[fe.lit].side(fe.side);
                let Some(unifier) = unify(us, up) else { continue };
                let step = ParamodulationStep {
                    into: gid,
                    into_literal: ie.lit,
                    into_side: ie.side,
                    position: ie.pos.clone(),
                    from: fe.id,
                    from_literal: fe.lit,
                    from_side: fe.side,
                    offset: off,
                    unifier,
                };
                push(g, from_lits, step, &mut out);
            }
        }
        out
    }
}
