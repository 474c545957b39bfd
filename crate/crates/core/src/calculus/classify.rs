//! Syntactic clause properties used by the combination results.

use super::Literal;
use crate::orderings::{Comparison, TermOrdering};
use crate::terms::{unify_with, Substitution, Term};

/// Indices of literals not smaller than any other literal.
pub fn maximal_literals(lits: &[Literal], ord: &TermOrdering) -> Vec<usize> {
    (0..lits.len())
        .filter(|&i| {
            lits.iter()
                .enumerate()
                .all(|(j, k)| j == i || ord.compare_literals(&lits[i], k) != Comparison::Less)
        })
        .collect()
}

/// No maximal literal has the form `t ≃ x` with `x` a variable not
/// occurring in `t`.
pub fn is_variable_inactive(lits: &[Literal], ord: &TermOrdering) -> bool {
    maximal_literals(lits, ord).into_iter().all(|i| {
        let l = &lits[i];
        if !l.positive {
            return true;
        }
        let bad = |x: &Term, t: &Term| x.as_var().is_some_and(|v| !t.contains_var(v));
        !(bad(&l.lhs, &l.rhs) || bad(&l.rhs, &l.lhs))
    })
}

/// A clause made only of equations between variables, whose positive part
/// (after unifying the sides of every negative literal) is nonempty and
/// contains no trivial `x ≃ x`.
pub fn is_cardinality_constraint(lits: &[Literal]) -> bool {
    if lits.is_empty() || !lits.iter().all(|l| l.lhs.is_var() && l.rhs.is_var()) {
        return false;
    }
    let mut mu = Substitution::new();
    for l in lits.iter().filter(|l| !l.positive) {
        if !unify_with(&l.lhs, &l.rhs, &mut mu) {
            return false;
        }
    }
    let mu = solve(&mu);
    let pos: Vec<&Literal> = lits.iter().filter(|l| l.positive).collect();
    !pos.is_empty() && pos.iter().all(|l| mu.apply(&l.lhs) != mu.apply(&l.rhs))
}

fn solve(s: &Substitution) -> Substitution {
    let mut out = s.clone();
    // variable-to-variable chains are short; iterate to a fixpoint
    loop {
        let next = Substitution::from_pairs(
            out.pairs().iter().map(|(v, t)| (*v, out.apply(t))).collect(),
        );
        if next == out {
            return out;
        }
        out = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{Origin, Signature};

    #[test]
    fn cardinality_constraints() {
        let mut sig = Signature::new();
        let u = sig.declare_sort("U").unwrap();
        let (x, y, z) = (Term::var(0, u), Term::var(1, u), Term::var(2, u));
        assert!(is_cardinality_constraint(&[Literal::eq(y.clone(), x.clone()), Literal::eq(y.clone(), z.clone())]));
        assert!(!is_cardinality_constraint(&[Literal::eq(x.clone(), y.clone()), Literal::neq(x.clone(), y.clone())]));
        assert!(!is_cardinality_constraint(&[Literal::neq(x, z)]));
    }

    #[test]
    fn variable_inactivity() {
        let mut sig = Signature::new();
        let u = sig.declare_sort("U").unwrap();
        let f = sig.declare("f", &[u], u, Origin::Input).unwrap();
        let a = sig.declare_constant("a", u).unwrap();
        let ord = TermOrdering::lpo(&[f, a]);
        let x = Term::var(0, u);
        let ta = sig.constant(a);
        assert!(!is_variable_inactive(&[Literal::eq(x.clone(), ta.clone())], &ord));
        let fx = sig.app(f, vec![x.clone()]).unwrap();
        assert!(is_variable_inactive(&[Literal::eq(fx, x.clone())], &ord));
        // x = a is not maximal next to f(x) != a
        let fx = sig.app(f, vec![x.clone()]).unwrap();
        assert!(is_variable_inactive(&[Literal::neq(fx, ta.clone()), Literal::eq(x, ta)], &ord));
    }
}
