//! Flattening of ground literal sets.
//!
//! Every distinct non-constant subterm that must be named receives one fresh
//! constant `c` together with a defining equation `f(c1,..,cn) ≃ c`. Fresh
//! constants are numbered in the order they are introduced, so the output is
//! deterministic.

use std::collections::HashMap;

use thiserror::Error;

use super::{Origin, Signature, SymbolId, Term};
use crate::calculus::Literal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlattenError {
    #[error("cannot flatten non-ground literal #{0}")]
    NonGround(usize),
}

#[derive(Clone, Debug)]
pub struct Flattened {
    pub literals: Vec<Literal>,
    /// Constants introduced, in order of creation.
    pub fresh: Vec<SymbolId>,
}

struct Namer<'a> {
    sig: &'a mut Signature,
    names: HashMap<Term, Term>,
    defs: Vec<Literal>,
    fresh: Vec<SymbolId>,
}

impl Namer<'_> {
    /// Returns a constant equal to `t`, introducing definitions bottom-up.
    fn name(&mut self, t: &Term) -> Term {
        if t.is_constant() {
            return t.clone();
        }
        if let Some(c) = self.names.get(t) {
            return c.clone();
        }
        let flat = self.flat_args(t);
        if let Some(c) = self.names.get(&flat) {
            let c = c.clone();
            self.names.insert(t.clone(), c.clone());
            return c;
        }
        let sym = self.sig.fresh_constant(t.sort(), Origin::Flattening);
        self.fresh.push(sym);
        let c = self.sig.constant(sym);
        self.defs.push(Literal::eq(flat.clone(), c.clone()));
        self.names.insert(flat, c.clone());
        self.names.insert(t.clone(), c.clone());
        c
    }

    /// `f(t1..tn)` with every argument replaced by its name.
    fn flat_args(&mut self, t: &Term) -> Term {
        if t.depth() <= 1 {
            return t.clone();
        }
        let args = t.args().iter().map(|a| self.name(a)).collect();
        t.with_args(args)
    }
}

/// Flattens a set of ground literals, extending `sig` with fresh constants.
/// Already flat literals are kept as they are.
pub fn flatten(literals: &[Literal], sig: &mut Signature) -> Result<Flattened, FlattenError> {
    for (i, l) in literals.iter().enumerate() {
        if !l.is_ground() {
            return Err(FlattenError::NonGround(i));
        }
    }
    let mut namer = Namer {
        sig,
        names: HashMap::new(),
        defs: Vec::new(),
        fresh: Vec::new(),
    };
    let mut out = Vec::new();
    for l in literals {
        if l.is_flat() {
            namer.defs.push(l.clone());
        } else if l.positive && (l.lhs.is_constant() || l.rhs.is_constant()) {
            // f(...) ≃ c: only the arguments need names.
            let (t, c) = if l.rhs.is_constant() { (&l.lhs, &l.rhs) } else { (&l.rhs, &l.lhs) };
            let flat = namer.flat_args(t);
            namer.defs.push(Literal::eq(flat, c.clone()));
        } else {
            let a = namer.name(&l.lhs);
            let b = namer.name(&l.rhs);
            namer.defs.push(Literal::new(a, b, l.positive));
        }
        out.append(&mut namer.defs);
    }
    Ok(Flattened {
        literals: out,
        fresh: namer.fresh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{Origin, SortId};

    fn sig() -> (Signature, SortId, SortId, SortId) {
        let mut sig = Signature::new();
        let a = sig.declare_sort("ARRAY").unwrap();
        let e = sig.declare_sort("ELEM").unwrap();
        let i = sig.declare_sort("INDEX").unwrap();
        sig.declare("store", &[a, i, e], a, Origin::Input).unwrap();
        sig.declare("select", &[a, i], e, Origin::Input).unwrap();
        for (n, s) in [("a", a), ("a1", a), ("a2", a), ("i1", i), ("i2", i), ("e1", e), ("e2", e)] {
            sig.declare_constant(n, s).unwrap();
        }
        (sig, a, e, i)
    }

    fn c(sig: &Signature, n: &str) -> Term {
        sig.term(n, vec![]).unwrap()
    }

    #[test]
    fn flat_literals_unchanged() {
        let (mut sig, ..) = sig();
        let l = Literal::eq(
            sig.term("select", vec![c(&sig, "a"), c(&sig, "i1")]).unwrap(),
            c(&sig, "e1"),
        );
        let f = flatten(&[l.clone()], &mut sig).unwrap();
        assert_eq!(f.literals, vec![l]);
        assert!(f.fresh.is_empty());
    }

    #[test]
    fn store_equation_three_literals() {
        let (mut sig, ..) = sig();
        let s1 = sig.term("store", vec![c(&sig, "a1"), c(&sig, "i1"), c(&sig, "e1")]).unwrap();
        let s2 = sig.term("store", vec![c(&sig, "a2"), c(&sig, "i2"), c(&sig, "e2")]).unwrap();
        let f = flatten(&[Literal::eq(s1, s2)], &mut sig).unwrap();
        assert_eq!(f.literals.len(), 3);
        assert_eq!(f.fresh.len(), 2);
        assert!(f.literals.iter().all(|l| l.is_flat()));
    }

    #[test]
    fn nested_store_disequality() {
        let (mut sig, ..) = sig();
        let st = |sig: &Signature, a: Term, i: &str, e: &str| {
            sig.term("store", vec![a, c(sig, i), c(sig, e)]).unwrap()
        };
        let l = st(&sig, st(&sig, c(&sig, "a"), "i1", "e1"), "i2", "e2");
        let r = st(&sig, st(&sig, c(&sig, "a"), "i2", "e2"), "i1", "e1");
        let f = flatten(&[Literal::neq(l, r)], &mut sig).unwrap();
        assert_eq!(f.literals.len(), 5);
        assert_eq!(f.fresh.len(), 4);
        let last = f.literals.last().unwrap();
        assert!(!last.positive && last.lhs.is_constant() && last.rhs.is_constant());
    }

    #[test]
    fn shared_subterms_named_once() {
        let (mut sig, ..) = sig();
        let inner = sig.term("store", vec![c(&sig, "a"), c(&sig, "i1"), c(&sig, "e1")]).unwrap();
        let t1 = sig.term("select", vec![inner.clone(), c(&sig, "i1")]).unwrap();
        let t2 = sig.term("select", vec![inner, c(&sig, "i2")]).unwrap();
        let f = flatten(&[Literal::eq(t1, c(&sig, "e1")), Literal::eq(t2, c(&sig, "e2"))], &mut sig).unwrap();
        assert_eq!(f.fresh.len(), 1);
        assert_eq!(f.literals.len(), 3);
    }

    #[test]
    fn rejects_non_ground() {
        let (mut sig, a, ..) = sig();
        let l = Literal::eq(Term::var(0, a), c(&sig, "a"));
        assert_eq!(flatten(&[l], &mut sig).unwrap_err(), FlattenError::NonGround(0));
    }
}
