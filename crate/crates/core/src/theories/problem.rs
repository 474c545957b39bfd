//! Combining presentations and turning ground literals into saturation
//! problems.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use super::reduce::{a_reduce, i_reduce, r_reduce};
use super::{install, Presentation, Symbols, Theory, TheoryError};
use crate::calculus::Literal;
use crate::orderings::{build_precedence, ordering_for, Requirement, Scheme, TermOrdering};
use crate::saturation::{saturate, Limits, Outcome, SearchPlan, Stats, Verdict};
use crate::terms::{flatten, FlattenError, Origin, Signature, SymbolId};

/// Presentations installed into one signature. Constants are declared
/// directly on `signature`.
#[derive(Clone, Debug)]
pub struct Combination {
    pub signature: Signature,
    pub presentations: Vec<Presentation>,
}

impl Combination {
    pub fn new(theories: &[Theory]) -> Result<Combination, TheoryError> {
        Combination::extend(Signature::new(), theories)
    }

    /// Installs `theories` into an existing signature. Fails when a
    /// function symbol would belong to two theories, or to a theory and
    /// the signature already given.
    pub fn extend(mut signature: Signature, theories: &[Theory]) -> Result<Combination, TheoryError> {
        let mut presentations = Vec::new();
        for t in theories {
            presentations.push(install(t, &mut signature)?);
        }
        Ok(Combination { signature, presentations })
    }

    pub fn tags(&self) -> Vec<String> {
        self.presentations.iter().map(|p| p.theory.tag()).collect()
    }

    pub fn owner(&self, sym: SymbolId) -> Option<usize> {
        self.presentations.iter().position(|p| p.owned().contains(&sym))
    }
}

#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// Add `sk1 ≄ sk2` for every sort, excluding trivial models.
    pub nontrivial: bool,
    /// Overrides the computed `n` of `Ac(n)` for unbounded offsets.
    pub ac_bound: Option<usize>,
    /// Extra clauses added to every branch.
    pub lemmas: Vec<Vec<Literal>>,
}

/// One disjunct of the reduced problem.
#[derive(Clone, Debug)]
pub struct Branch {
    /// Reduced, flat ground literals.
    pub literals: Vec<Literal>,
    pub axioms: Vec<Vec<Literal>>,
    /// `n` used for `Ac(n)`, when offsets are present.
    pub ac_bound: Option<usize>,
    /// `|C_S|` after I-reduction.
    pub cs: Option<usize>,
}

impl Branch {
    /// Input clauses for the prover: axioms, then the literals as units.
    pub fn clauses(&self) -> Vec<Vec<Literal>> {
        let mut out = self.axioms.clone();
        out.extend(self.literals.iter().map(|l| vec![l.clone()]));
        out
    }
}

/// A reduced problem: the input is unsatisfiable iff every branch is.
#[derive(Clone, Debug)]
pub struct Problem {
    pub signature: Signature,
    pub presentations: Vec<Presentation>,
    pub branches: Vec<Branch>,
    pub ordering: TermOrdering,
    pub scheme: Scheme,
}

/// Verdict over all branches.
pub struct Solution {
    pub verdict: Verdict,
    pub stats: Stats,
    pub outcomes: Vec<Outcome>,
}

fn check_safety(sig: &Signature, pres: &[Presentation]) -> Result<(), TheoryError> {
    for p in pres.iter().filter(|p| p.is_extensional()) {
        let sort = match p.symbols {
            Symbols::Records { rec, .. } => rec,
            Symbols::Arrays { array, .. } => array,
            _ => continue,
        };
        let owned = p.owned();
        for s in sig.symbols() {
            let d = sig.symbol(s);
            if !owned.contains(&s) && d.args.contains(&sort) {
                return Err(TheoryError::UnsafeFreeSymbol(d.name.clone()));
            }
        }
    }
    Ok(())
}

/// Reduces, flattens and assembles `literals` over the combination:
/// R-reduction (may branch), A-reduction, flattening, I-reduction, then
/// the axioms and an ordering built by `scheme` over the final signature.
pub fn build_problem(
    combination: &Combination,
    literals: &[Literal],
    scheme: Scheme,
    options: &BuildOptions,
) -> Result<Problem, TheoryError> {
    if let Some(i) = literals.iter().position(|l| !l.is_ground()) {
        return Err(TheoryError::NonGround(i));
    }
    let mut sig = combination.signature.clone();
    let pres = &combination.presentations;
    check_safety(&sig, pres)?;

    let mut start = literals.to_vec();
    if options.nontrivial {
        let sorts: Vec<_> = sig.sorts().collect();
        for s in sorts {
            let a = sig.fresh_constant(s, Origin::Skolem);
            let b = sig.fresh_constant(s, Origin::Skolem);
            start.push(Literal::neq(sig.constant(a), sig.constant(b)));
        }
    }

    let mut sets = vec![start];
    for p in pres.iter().filter(|p| p.is_extensional()) {
        if let Symbols::Records { .. } = p.symbols {
            sets = sets.iter().flat_map(|s| r_reduce(s, p)).collect();
        }
    }

    let mut branches = Vec::with_capacity(sets.len());
    for mut lits in sets {
        for p in pres.iter().filter(|p| p.is_extensional()) {
            if let Symbols::Arrays { .. } = p.symbols {
                lits = a_reduce(&lits, p, &mut sig);
            }
        }
        let flat = flatten(&lits, &mut sig).map_err(|FlattenError::NonGround(i)| TheoryError::NonGround(i))?;
        let mut lits = flat.literals;
        let mut axioms = Vec::new();
        let mut ac_bound = None;
        let mut cs = None;
        for p in pres {
            let mut n = 0;
            if let Theory::Offsets { reduced, modulus, .. } = p.theory {
                if reduced {
                    let (reduced_lits, c) = i_reduce(&lits, p);
                    lits = reduced_lits;
                    cs = Some(c);
                    n = c;
                }
                n = match modulus {
                    Some(k) => k - 1,
                    None => options.ac_bound.unwrap_or(n),
                };
                ac_bound = Some(n);
            }
            axioms.extend(p.axioms(n));
        }
        axioms.extend(options.lemmas.iter().cloned());
        let mut seen = std::collections::HashSet::new();
        lits.retain(|l| seen.insert(l.clone()));
        branches.push(Branch { literals: lits, axioms, ac_bound, cs });
    }

    let all = branches
        .iter()
        .flat_map(|b| b.literals.iter().chain(b.axioms.iter().flatten()));
    let mut ordering = build_precedence(&sig, all, scheme)?;
    if scheme == Scheme::GoodLpo {
        // theory constants (nil) go below the other constants of their sort,
        // so an equation c ≃ nil never rewrites inside the axioms
        let owned: Vec<SymbolId> =
            pres.iter().flat_map(|p| p.owned()).filter(|&f| sig.symbol(f).arity() == 0).collect();
        if !owned.is_empty() {
            let mut order = ordering.precedence();
            for c in owned {
                let sort = sig.symbol(c).result;
                order.retain(|&f| f != c);
                let pos = order
                    .iter()
                    .rposition(|&f| sig.symbol(f).arity() == 0 && sig.symbol(f).result == sort)
                    .map_or(order.len(), |p| p + 1);
                order.insert(pos, c);
            }
            ordering = ordering_for(&sig, &order, scheme)?;
        }
    }
    Ok(Problem {
        signature: sig,
        presentations: pres.clone(),
        branches,
        ordering,
        scheme,
    })
}

impl Problem {
    /// Ordering requirements of all presentations.
    pub fn requirements(&self) -> Vec<Requirement> {
        let mut out: Vec<Requirement> = Vec::new();
        for r in self.presentations.iter().flat_map(|p| p.requirements()) {
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    pub fn owner(&self, sym: SymbolId) -> Option<usize> {
        self.presentations.iter().position(|p| p.owned().contains(&sym))
    }

    pub fn symbol_owners(&self) -> HashMap<SymbolId, usize> {
        let mut m = HashMap::new();
        for (i, p) in self.presentations.iter().enumerate() {
            for s in p.owned() {
                m.insert(s, i);
            }
        }
        m
    }

    /// Saturates the branches one after the other under one shared
    /// timeout. Stops at the first satisfiable branch.
    pub fn solve(&self, plan: &SearchPlan, limits: &Limits) -> Solution {
        let start = Instant::now();
        let mut stats = Stats::default();
        let mut outcomes = Vec::new();
        let mut verdict = Verdict::Unsatisfiable;
        for b in &self.branches {
            let remaining = limits.timeout.map(|t| t.saturating_sub(start.elapsed()));
            if remaining == Some(Duration::ZERO) {
                verdict = Verdict::ResourceOut(crate::saturation::LimitKind::Timeout);
                break;
            }
            let lim = Limits { timeout: remaining, max_clauses: limits.max_clauses };
            let out = saturate(b.clauses(), &self.ordering, plan, &lim);
            stats.initial += out.stats.initial;
            stats.generated += out.stats.generated;
            stats.processed += out.stats.processed;
            stats.remaining += out.stats.remaining;
            stats.proof_steps += out.stats.proof_steps;
            let v = out.verdict;
            outcomes.push(out);
            match v {
                Verdict::Satisfiable => {
                    verdict = v;
                    break;
                }
                Verdict::ResourceOut(_) => verdict = v,
                Verdict::Unsatisfiable => {}
            }
        }
        stats.elapsed = start.elapsed();
        Solution { verdict, stats, outcomes }
    }
}
