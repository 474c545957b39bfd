//! Substitutions, syntactic unification and matching.

use std::fmt;

use super::{Head, Term, Var};

/// A finite map from variables to terms. Kept as a small vector: clauses in
/// this prover rarely carry more than a handful of variables.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: Vec<(Var, Term)>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: Vec<(Var, Term)>) -> Self {
        Substitution { bindings: pairs }
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.bindings.iter().find(|(w, _)| *w == v).map(|(_, t)| t)
    }

    pub fn bind(&mut self, v: Var, t: Term) {
        debug_assert!(self.get(v).is_none());
        self.bindings.push((v, t));
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn pairs(&self) -> &[(Var, Term)] {
        &self.bindings
    }

    fn truncate(&mut self, n: usize) {
        self.bindings.truncate(n);
    }

    /// Applies the substitution once (no chasing of bindings).
    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() || t.is_ground() {
            return t.clone();
        }
        match t.head() {
            Head::Var(v) => self.get(v).cloned().unwrap_or_else(|| t.clone()),
            Head::Sym(_) => {
                if !t.vars().iter().any(|v| self.get(*v).is_some()) {
                    return t.clone();
                }
                t.with_args(t.args().iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// Applies a triangular substitution, following chains of bindings.
    fn resolve(&self, t: &Term) -> Term {
        if self.bindings.is_empty() || t.is_ground() {
            return t.clone();
        }
        match t.head() {
            Head::Var(v) => match self.get(v) {
                Some(b) => self.resolve(b),
                None => t.clone(),
            },
            Head::Sym(_) => {
                if !t.vars().iter().any(|v| self.get(*v).is_some()) {
                    return t.clone();
                }
                t.with_args(t.args().iter().map(|a| self.resolve(a)).collect())
            }
        }
    }

    /// Turns a triangular substitution into an idempotent one.
    fn solved(self) -> Substitution {
        let bindings = self
            .bindings
            .iter()
            .map(|(v, t)| (*v, self.resolve(t)))
            .collect();
        Substitution { bindings }
    }

    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Head::Var(v) = t.head() {
            match self.get(v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: Var, t: &Term) -> bool {
        let t = self.walk(t);
        match t.head() {
            Head::Var(w) => w == v,
            Head::Sym(_) => {
                !t.is_ground() && t.args().iter().any(|a| self.occurs(v, a))
            }
        }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "X{} -> {:?}", v.id, t)?;
        }
        write!(f, "}}")
    }
}

/// Most general unifier of `s` and `t`, idempotent.
pub fn unify(s: &Term, t: &Term) -> Option<Substitution> {
    let mut sub = Substitution::new();
    if unify_with(s, t, &mut sub) {
        Some(sub.solved())
    } else {
        None
    }
}

/// Extends a triangular substitution so that `s` and `t` become equal.
/// On failure the substitution is restored.
pub fn unify_with(s: &Term, t: &Term, sub: &mut Substitution) -> bool {
    let mark = sub.len();
    if unify_rec(s, t, sub) {
        true
    } else {
        sub.truncate(mark);
        false
    }
}

fn unify_rec(s: &Term, t: &Term, sub: &mut Substitution) -> bool {
    let s = sub.walk(s).clone();
    let t = sub.walk(t).clone();
    if s == t {
        return true;
    }
    if s.sort() != t.sort() {
        return false;
    }
    match (s.head(), t.head()) {
        (Head::Var(x), _) => {
            if sub.occurs(x, &t) {
                return false;
            }
            sub.bind(x, t);
            true
        }
        (_, Head::Var(y)) => {
            if sub.occurs(y, &s) {
                return false;
            }
            sub.bind(y, s);
            true
        }
        (Head::Sym(f), Head::Sym(g)) => {
            f == g && s.args().iter().zip(t.args()).all(|(a, b)| unify_rec(a, b, sub))
        }
    }
}

/// Finds `σ` with `pattern σ == target`. Variables of `target` are treated
/// as constants.
pub fn match_term(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut sub = Substitution::new();
    if match_with(pattern, target, &mut sub) {
        Some(sub)
    } else {
        None
    }
}

/// Extends `sub` so that `pattern sub == target`; restores it on failure.
pub fn match_with(pattern: &Term, target: &Term, sub: &mut Substitution) -> bool {
    let mark = sub.len();
    if match_rec(pattern, target, sub) {
        true
    } else {
        sub.truncate(mark);
        false
    }
}

fn match_rec(p: &Term, t: &Term, sub: &mut Substitution) -> bool {
    if p.sort() != t.sort() {
        return false;
    }
    match p.head() {
        Head::Var(x) => match sub.get(x) {
            Some(b) => b == t,
            None => {
                sub.bind(x, t.clone());
                true
            }
        },
        Head::Sym(f) => {
            if p.is_ground() {
                return p == t;
            }
            t.symbol() == Some(f)
                && p.depth() <= t.depth()
                && p.args().iter().zip(t.args()).all(|(a, b)| match_rec(a, b, sub))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{Origin, Signature, SortId};

    fn sig() -> (Signature, SortId) {
        let mut sig = Signature::new();
        let s = sig.declare_sort("U").unwrap();
        sig.declare("f", &[s, s], s, Origin::Input).unwrap();
        sig.declare("g", &[s], s, Origin::Input).unwrap();
        sig.declare_constant("a", s).unwrap();
        sig.declare_constant("b", s).unwrap();
        (sig, s)
    }

    #[test]
    fn unify_basic() {
        let (sig, s) = sig();
        let x = Term::var(0, s);
        let y = Term::var(1, s);
        let a = sig.term("a", vec![]).unwrap();
        let t1 = sig.term("f", vec![x.clone(), sig.term("g", vec![y.clone()]).unwrap()]).unwrap();
        let t2 = sig.term("f", vec![a.clone(), sig.term("g", vec![x.clone()]).unwrap()]).unwrap();
        let mgu = unify(&t1, &t2).unwrap();
        assert_eq!(mgu.apply(&t1), mgu.apply(&t2));
        assert_eq!(mgu.apply(&y), a);
    }

    #[test]
    fn occurs_check() {
        let (sig, s) = sig();
        let x = Term::var(0, s);
        let gx = sig.term("g", vec![x.clone()]).unwrap();
        assert!(unify(&x, &gx).is_none());
    }

    #[test]
    fn matching_is_one_sided() {
        let (sig, s) = sig();
        let x = Term::var(0, s);
        let a = sig.term("a", vec![]).unwrap();
        let b = sig.term("b", vec![]).unwrap();
        let p = sig.term("f", vec![x.clone(), x.clone()]).unwrap();
        let t = sig.term("f", vec![a.clone(), b.clone()]).unwrap();
        assert!(match_term(&p, &t).is_none());
        let t2 = sig.term("f", vec![a.clone(), a.clone()]).unwrap();
        assert_eq!(match_term(&p, &t2).unwrap().apply(&p), t2);
        // target variables are rigid
        assert!(match_term(&a, &x).is_none());
    }
}
