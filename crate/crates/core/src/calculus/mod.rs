//! Literals, clauses and the inference rules of the superposition calculus.

mod classify;
mod contraction;
mod rules;

pub use classify::{is_cardinality_constraint, is_variable_inactive, maximal_literals};
pub use contraction::{
    apply_cut, apply_rewrite, find_rewrite, instance_of, is_deletable, is_tautology, simplify, subsumes,
    variants,
};
pub use rules::{
    equational_factoring, equational_factoring_step, expansion_between, maximal_candidate,
    paramodulation, paramodulation_step, reflection, reflection_step,
    strictly_maximal_candidate, superposition,
};

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::terms::{Signature, SortId, Substitution, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// An equational literal. Equality is symmetric: `a ≃ b` and `b ≃ a` are
/// the same literal.
#[derive(Clone, Debug)]
pub struct Literal {
    pub lhs: Term,
    pub rhs: Term,
    pub positive: bool,
}

impl Literal {
    pub fn new(lhs: Term, rhs: Term, positive: bool) -> Literal {
        debug_assert_eq!(lhs.sort(), rhs.sort());
        Literal { lhs, rhs, positive }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Literal {
        Literal::new(lhs, rhs, true)
    }

    pub fn neq(lhs: Term, rhs: Term) -> Literal {
        Literal::new(lhs, rhs, false)
    }

    pub fn negated(&self) -> Literal {
        Literal::new(self.lhs.clone(), self.rhs.clone(), !self.positive)
    }

    pub fn side(&self, s: Side) -> &Term {
        match s {
            Side::Left => &self.lhs,
            Side::Right => &self.rhs,
        }
    }

    pub fn sort(&self) -> SortId {
        self.lhs.sort()
    }

    pub fn is_ground(&self) -> bool {
        self.lhs.is_ground() && self.rhs.is_ground()
    }

    pub fn depth(&self) -> u32 {
        self.lhs.depth() + self.rhs.depth()
    }

    /// Positive literals of depth at most one, negative ones of depth zero.
    pub fn is_flat(&self) -> bool {
        if self.positive {
            self.depth() <= 1
        } else {
            self.depth() == 0
        }
    }

    /// `t ≃ t`.
    pub fn is_trivial(&self) -> bool {
        self.positive && self.lhs == self.rhs
    }

    pub fn apply(&self, s: &Substitution) -> Literal {
        Literal::new(s.apply(&self.lhs), s.apply(&self.rhs), self.positive)
    }

    pub fn shift_vars(&self, offset: u32) -> Literal {
        Literal::new(self.lhs.shift_vars(offset), self.rhs.shift_vars(offset), self.positive)
    }

    pub fn max_var(&self) -> Option<u32> {
        self.lhs.max_var().max(self.rhs.max_var())
    }

    pub fn weight(&self) -> u64 {
        (2 * (self.lhs.symbol_count() + self.rhs.symbol_count()) + self.lhs.var_count() + self.rhs.var_count())
            as u64
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> LiteralDisplay<'a> {
        LiteralDisplay { sig, lit: self }
    }
}

impl PartialEq for Literal {
    fn eq(&self, o: &Self) -> bool {
        self.positive == o.positive
            && ((self.lhs == o.lhs && self.rhs == o.rhs) || (self.lhs == o.rhs && self.rhs == o.lhs))
    }
}

impl Eq for Literal {}

impl Hash for Literal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let (a, b) = (self.lhs.hash_value(), self.rhs.hash_value());
        state.write_u64(a.min(b));
        state.write_u64(a.max(b));
        state.write_u8(self.positive as u8);
    }
}

pub struct LiteralDisplay<'a> {
    sig: &'a Signature,
    lit: &'a Literal,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.lit.positive { "=" } else { "!=" };
        write!(f, "{} {} {}", self.sig.display(&self.lit.lhs), op, self.sig.display(&self.lit.rhs))
    }
}

pub type ClauseId = usize;

/// Removes duplicate literals and renames variables to `0, 1, ..` in order
/// of first occurrence. Every rule applies this to its conclusion.
pub fn normalize(lits: Vec<Literal>) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
    for l in lits {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    if out.iter().all(|l| l.is_ground()) {
        return out;
    }
    let mut map: HashMap<Var, Term> = HashMap::new();
    let mut order = Vec::new();
    for l in &out {
        for t in [&l.lhs, &l.rhs] {
            collect_vars_in_order(t, &mut order);
        }
    }
    for v in order {
        let n = map.len() as u32;
        map.entry(v).or_insert_with(|| Term::var(n, v.sort));
    }
    let sub = Substitution::from_pairs(map.into_iter().collect());
    out.iter().map(|l| l.apply(&sub)).collect()
}

fn collect_vars_in_order(t: &Term, out: &mut Vec<Var>) {
    if let Some(v) = t.as_var() {
        out.push(v);
    } else if !t.is_ground() {
        for a in t.args() {
            collect_vars_in_order(a, out);
        }
    }
}

pub fn clause_weight(lits: &[Literal]) -> u64 {
    lits.iter().map(|l| l.weight()).sum()
}

pub fn clause_is_ground(lits: &[Literal]) -> bool {
    lits.iter().all(|l| l.is_ground())
}

pub fn clause_max_var(lits: &[Literal]) -> Option<u32> {
    lits.iter().filter_map(|l| l.max_var()).max()
}

/// Names of the inference rules, for logs and proof output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Input,
    Superposition,
    Paramodulation,
    Reflection,
    EqualityFactoring,
    Simplification,
    Cut,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Input => "input",
            Rule::Superposition => "superposition",
            Rule::Paramodulation => "paramodulation",
            Rule::Reflection => "reflection",
            Rule::EqualityFactoring => "equational-factoring",
            Rule::Simplification => "simplification",
            Rule::Cut => "literal-cutting",
        }
    }
}

/// Everything needed to recompute a superposition or paramodulation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamodulationStep {
    pub into: ClauseId,
    pub into_literal: usize,
    pub into_side: Side,
    pub position: Vec<usize>,
    pub from: ClauseId,
    pub from_literal: usize,
    pub from_side: Side,
    /// Added to every variable of `from` before unification.
    pub offset: u32,
    pub unifier: Substitution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: ClauseId,
    /// Side of the unit rule used as left-hand side.
    pub rule_side: Side,
    pub literal: usize,
    pub side: Side,
    pub position: Vec<usize>,
    pub matcher: Substitution,
}

/// Removal of one literal: `t ≄ t` when `unit` is `None`, otherwise a
/// literal whose complement is the ground unit clause `unit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutStep {
    pub literal: usize,
    pub unit: Option<ClauseId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inference {
    Input {
        index: usize,
    },
    Superposition(Box<ParamodulationStep>),
    Paramodulation(Box<ParamodulationStep>),
    Reflection {
        parent: ClauseId,
        literal: usize,
        unifier: Substitution,
    },
    EqualityFactoring {
        parent: ClauseId,
        literal: usize,
        side: Side,
        other: usize,
        other_side: Side,
        unifier: Substitution,
    },
    Simplification {
        parent: ClauseId,
        steps: Vec<RewriteStep>,
    },
    Cut {
        parent: ClauseId,
        steps: Vec<CutStep>,
    },
}

impl Inference {
    pub fn rule(&self) -> Rule {
        match self {
            Inference::Input { .. } => Rule::Input,
            Inference::Superposition(_) => Rule::Superposition,
            Inference::Paramodulation(_) => Rule::Paramodulation,
            Inference::Reflection { .. } => Rule::Reflection,
            Inference::EqualityFactoring { .. } => Rule::EqualityFactoring,
            Inference::Simplification { .. } => Rule::Simplification,
            Inference::Cut { .. } => Rule::Cut,
        }
    }

    pub fn parents(&self) -> Vec<ClauseId> {
        match self {
            Inference::Input { .. } => vec![],
            Inference::Superposition(s) | Inference::Paramodulation(s) => vec![s.into, s.from],
            Inference::Reflection { parent, .. } | Inference::EqualityFactoring { parent, .. } => vec![*parent],
            Inference::Simplification { parent, steps } => {
                let mut v = vec![*parent];
                for s in steps {
                    if !v.contains(&s.rule) {
                        v.push(s.rule);
                    }
                }
                v
            }
            Inference::Cut { parent, steps } => {
                let mut v = vec![*parent];
                for u in steps.iter().filter_map(|s| s.unit) {
                    if !v.contains(&u) {
                        v.push(u);
                    }
                }
                v
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Clause {
    pub id: ClauseId,
    pub literals: Vec<Literal>,
    pub inference: Inference,
}

impl Clause {
    pub fn input(id: ClauseId, literals: Vec<Literal>) -> Clause {
        Clause {
            id,
            literals: normalize(literals),
            inference: Inference::Input { index: id },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.literals.len() == 1
    }

    pub fn is_ground(&self) -> bool {
        clause_is_ground(&self.literals)
    }

    pub fn weight(&self) -> u64 {
        clause_weight(&self.literals)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ClauseDisplay<'a> {
        ClauseDisplay { sig, lits: &self.literals }
    }
}

/// The result of an inference, before it is given an id.
#[derive(Clone, Debug)]
pub struct Conclusion {
    pub literals: Vec<Literal>,
    pub inference: Inference,
}

pub struct ClauseDisplay<'a> {
    pub sig: &'a Signature,
    pub lits: &'a [Literal],
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "$false");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}", l.display(self.sig))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Origin;

    #[test]
    fn literal_equality_is_symmetric() {
        let mut sig = Signature::new();
        let u = sig.declare_sort("U").unwrap();
        let a ={ let s = sig.declare_constant("a", u).unwrap(); sig.constant(s) };
        let b = { let s = sig.declare_constant("b", u).unwrap(); sig.constant(s) };
        assert_eq!(Literal::eq(a.clone(), b.clone()), Literal::eq(b.clone(), a.clone()));
        assert_ne!(Literal::eq(a.clone(), b.clone()), Literal::neq(a, b));
    }

    #[test]
    fn weight_counts_symbols_twice() {
        let mut sig = Signature::new();
        let ar = sig.declare_sort("ARRAY").unwrap();
        let i = sig.declare_sort("INDEX").unwrap();
        let e = sig.declare_sort("ELEM").unwrap();
        sig.declare("select", &[ar, i], e, Origin::Input).unwrap();
        for (n, s) in [("a", ar), ("i", i), ("e", e)] {
            sig.declare_constant(n, s).unwrap();
        }
        let c = |n: &str| sig.term(n, vec![]).unwrap();
        let l = Literal::eq(sig.term("select", vec![c("a"), c("i")]).unwrap(), c("e"));
        assert_eq!(clause_weight(&[l]), 8);
        let x = Literal::eq(Term::var(0, e), Term::var(1, e));
        assert_eq!(clause_weight(&[x]), 2);
    }

    #[test]
    fn normalize_dedups_and_renames() {
        let mut sig = Signature::new();
        let u = sig.declare_sort("U").unwrap();
        let a = { let s = sig.declare_constant("a", u).unwrap(); sig.constant(s) };
        let x7 = Term::var(7, u);
        let lits = vec![
            Literal::eq(x7.clone(), a.clone()),
            Literal::eq(a.clone(), x7.clone()),
        ];
        let n = normalize(lits);
        assert_eq!(n.len(), 1);
        assert_eq!(n[0].lhs.as_var().unwrap().id, 0);
    }
}
