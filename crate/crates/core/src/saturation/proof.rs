//! Proof extraction and independent replay.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::calculus::{
    apply_cut, apply_rewrite, equational_factoring_step, normalize, paramodulation_step, reflection_step,
    Clause, ClauseDisplay, ClauseId, Inference, Literal,
};
use crate::orderings::TermOrdering;
use crate::terms::Signature;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("replay failed at clause {clause}: {reason}")]
pub struct ReplayError {
    pub clause: ClauseId,
    pub reason: String,
}

/// The clauses needed to derive the empty clause, parents before children.
#[derive(Clone, Debug)]
pub struct Proof {
    pub steps: Vec<Clause>,
}

/// Collects the ancestors of `root` in dependency order.
pub fn extract_proof(clauses: &[Clause], root: ClauseId) -> Proof {
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut stack = vec![(root, false)];
    while let Some((id, expanded)) = stack.pop() {
        if expanded {
            order.push(id);
            continue;
        }
        if !seen.insert(id) {
            continue;
        }
        stack.push((id, true));
        for p in clauses[id].inference.parents().into_iter().rev() {
            if !seen.contains(&p) {
                stack.push((p, false));
            }
        }
    }
    Proof {
        steps: order.into_iter().map(|id| clauses[id].clone()).collect(),
    }
}

impl Proof {
    /// Number of non-input steps.
    pub fn inferences(&self) -> usize {
        self.steps
            .iter()
            .filter(|c| !matches!(c.inference, Inference::Input { .. }))
            .count()
    }

    pub fn root(&self) -> Option<&Clause> {
        self.steps.last()
    }

    /// Recomputes every step from its recorded parents and parameters,
    /// re-checking all ordering side conditions. `inputs`, when given, are
    /// the original input clauses indexed by input number.
    pub fn replay(&self, ord: &TermOrdering, inputs: Option<&[Vec<Literal>]>) -> Result<(), ReplayError> {
        let mut known: HashMap<ClauseId, &Clause> = HashMap::new();
        let err = |c: &Clause, r: &str| ReplayError { clause: c.id, reason: r.to_string() };
        for c in &self.steps {
            let get = |id: ClauseId| known.get(&id).copied().ok_or_else(|| err(c, &format!("parent {id} not derived earlier")));
            let recomputed: Vec<Literal> = match &c.inference {
                Inference::Input { index } => match inputs {
                    Some(inp) => {
                        let orig = inp.get(*index).ok_or_else(|| err(c, "unknown input index"))?;
                        normalize(orig.clone())
                    }
                    None => c.literals.clone(),
                },
                Inference::Superposition(step) | Inference::Paramodulation(step) => {
                    let into = get(step.into)?;
                    let from = get(step.from)?;
                    let max_into = crate::calculus::clause_max_var(&into.literals);
                    if max_into.is_some_and(|m| step.offset <= m) && !crate::calculus::clause_is_ground(&from.literals) {
                        return Err(err(c, "premises not renamed apart"));
                    }
                    let want_positive = matches!(c.inference, Inference::Superposition(_));
                    let il = into.literals.get(step.into_literal).ok_or_else(|| err(c, "bad literal index"))?;
                    if il.positive != want_positive {
                        return Err(err(c, "rule does not match sign of target literal"));
                    }
                    let from_lits: Vec<Literal> = from.literals.iter().map(|l| l.shift_vars(step.offset)).collect();
                    paramodulation_step(&into.literals, &from_lits, step, ord)
                        .ok_or_else(|| err(c, "side conditions of superposition/paramodulation fail"))?
                }
                Inference::Reflection { parent, literal, unifier } => {
                    let p = get(*parent)?;
                    reflection_step(&p.literals, *literal, unifier, ord)
                        .ok_or_else(|| err(c, "side conditions of reflection fail"))?
                }
                Inference::EqualityFactoring { parent, literal, side, other, other_side, unifier } => {
                    let p = get(*parent)?;
                    equational_factoring_step(&p.literals, *literal, *side, *other, *other_side, unifier, ord)
                        .ok_or_else(|| err(c, "side conditions of equational factoring fail"))?
                }
                Inference::Simplification { parent, steps } => {
                    let mut cur = get(*parent)?.literals.clone();
                    for s in steps {
                        let rule = get(s.rule)?;
                        if rule.literals.len() != 1 {
                            return Err(err(c, "simplifier is not a unit clause"));
                        }
                        cur = apply_rewrite(&cur, &rule.literals[0], s, ord)
                            .ok_or_else(|| err(c, "rewrite step not allowed"))?;
                    }
                    normalize(cur)
                }
                Inference::Cut { parent, steps } => {
                    let mut cur = get(*parent)?.literals.clone();
                    for s in steps {
                        let unit = match s.unit {
                            Some(u) => {
                                let uc = get(u)?;
                                if uc.literals.len() != 1 {
                                    return Err(err(c, "cutting clause is not a unit clause"));
                                }
                                Some(&uc.literals[0])
                            }
                            None => None,
                        };
                        cur = apply_cut(&cur, s, unit).ok_or_else(|| err(c, "literal cannot be cut"))?;
                    }
                    normalize(cur)
                }
            };
            if recomputed != c.literals {
                return Err(err(c, "recomputed conclusion differs from the recorded one"));
            }
            known.insert(c.id, c);
        }
        match self.root() {
            Some(r) if r.literals.is_empty() => Ok(()),
            Some(r) => Err(err(r, "proof does not end in the empty clause")),
            None => Err(ReplayError { clause: 0, reason: "empty proof".into() }),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ProofDisplay<'a> {
        ProofDisplay { proof: self, sig }
    }
}

pub struct ProofDisplay<'a> {
    proof: &'a Proof,
    sig: &'a Signature,
}

impl fmt::Display for ProofDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.proof.steps {
            let parents = c.inference.parents();
            let ps: Vec<String> = parents.iter().map(|p| p.to_string()).collect();
            writeln!(
                f,
                "{:>6}. {}  [{}{}{}]",
                c.id,
                ClauseDisplay { sig: self.sig, lits: &c.literals },
                c.inference.rule().name(),
                if ps.is_empty() { "" } else { " " },
                ps.join(",")
            )?;
        }
        Ok(())
    }
}
