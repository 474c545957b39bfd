//! Expansion rules: superposition, paramodulation, reflection and
//! equational factoring.
//!
//! All ordering side conditions are evaluated on the instantiated
//! literals. An incomparable pair satisfies any "not smaller" condition.

use super::{normalize, Clause, Conclusion, Inference, Literal, ParamodulationStep, Side};
use crate::orderings::{Comparison, TermOrdering};
use crate::terms::{unify, Substitution};

/// Literal `i` could still be strictly maximal after instantiation: no
/// other literal is already greater or equal.
pub fn strictly_maximal_candidate(lits: &[Literal], i: usize, ord: &TermOrdering) -> bool {
    lits.iter().enumerate().all(|(j, l)| {
        j == i || !ord.compare_literals(&lits[i], l).is_less_or_equal()
    })
}

/// Literal `i` could still be maximal after instantiation.
pub fn maximal_candidate(lits: &[Literal], i: usize, ord: &TermOrdering) -> bool {
    lits.iter()
        .enumerate()
        .all(|(j, l)| j == i || ord.compare_literals(&lits[i], l) != Comparison::Less)
}

/// Checks all side conditions of one superposition or paramodulation step
/// and builds its conclusion. `from_lits` must already be shifted by
/// `step.offset`. Returns `None` if the step is not a valid inference.
pub fn paramodulation_step(
    into_lits: &[Literal],
    from_lits: &[Literal],
    step: &ParamodulationStep,
    ord: &TermOrdering,
) -> Option<Vec<Literal>> {
    let flit = from_lits.get(step.from_literal)?;
    let ilit = into_lits.get(step.into_literal)?;
    if !flit.positive {
        return None;
    }
    let u = flit.side(step.from_side);
    let t = flit.side(step.from_side.flip());
    let l = ilit.side(step.into_side);
    let r = ilit.side(step.into_side.flip());
    let u_prime = l.subterm_at(&step.position)?;
    if u_prime.is_var() {
        return None;
    }
    let s = &step.unifier;
    let us = s.apply(u);
    if us != s.apply(u_prime) {
        return None;
    }
    let ts = s.apply(t);
    // (i)
    if ord.compare(&us, &ts).is_less_or_equal() {
        return None;
    }
    // (ii)
    let eq_s = Literal::eq(us.clone(), ts.clone());
    let d: Vec<Literal> = from_lits
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != step.from_literal)
        .map(|(_, k)| k.apply(s))
        .collect();
    if d.iter().any(|k| ord.compare_literals(&eq_s, k).is_less_or_equal()) {
        return None;
    }
    // (iii)
    let ls = s.apply(l);
    let rs = s.apply(r);
    if ord.compare(&ls, &rs).is_less_or_equal() {
        return None;
    }
    // (iv)
    let into_s = Literal::new(ls.clone(), rs.clone(), ilit.positive);
    let c: Vec<Literal> = into_lits
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != step.into_literal)
        .map(|(_, k)| k.apply(s))
        .collect();
    if c.iter().any(|k| ord.compare_literals(&into_s, k).is_less_or_equal()) {
        return None;
    }
    let new = Literal::new(ls.replace_at(&step.position, &ts), rs, ilit.positive);
    let mut out = Vec::with_capacity(1 + c.len() + d.len());
    out.push(new);
    out.extend(c);
    out.extend(d);
    Some(normalize(out))
}

fn shifted(c: &Clause, offset: u32) -> Vec<Literal> {
    c.literals.iter().map(|l| l.shift_vars(offset)).collect()
}

pub(crate) fn offset_for(into: &Clause) -> u32 {
    super::clause_max_var(&into.literals).map_or(0, |m| m + 1)
}

/// All superposition (`sign == Some(true)`), paramodulation
/// (`Some(false)`) or both (`None`) conclusions from `from` into `into`.
fn generate(
    into: &Clause,
    from: &Clause,
    ord: &TermOrdering,
    sign: Option<bool>,
    out: &mut Vec<Conclusion>,
) {
    let offset = offset_for(into);
    let from_lits = shifted(from, offset);
    for (fl, flit) in from_lits.iter().enumerate() {
        if !flit.positive || !strictly_maximal_candidate(&from_lits, fl, ord) {
            continue;
        }
        for fside in Side::BOTH {
            let u = flit.side(fside);
            let t = flit.side(fside.flip());
            if ord.compare(u, t).is_less_or_equal() {
                continue;
            }
            for (il, ilit) in into.literals.iter().enumerate() {
                if sign.is_some_and(|p| p != ilit.positive)
                    || !strictly_maximal_candidate(&into.literals, il, ord)
                {
                    continue;
                }
                for iside in Side::BOTH {
                    let l = ilit.side(iside);
                    if ord.compare(l, ilit.side(iside.flip())).is_less_or_equal() {
                        continue;
                    }
                    for pos in l.positions() {
                        let up = l.subterm_at(&pos).unwrap();
                        if up.sort() != u.sort() || (!u.is_var() && up.symbol() != u.symbol()) {
                            continue;
                        }
                        let Some(unifier) = unify(u, up) else { continue };
                        let step = ParamodulationStep {
                            into: into.id,
                            into_literal: il,
                            into_side: iside,
                            position: pos,
                            from: from.id,
                            from_literal: fl,
                            from_side: fside,
                            offset,
                            unifier,
                        };
                        if let Some(lits) = paramodulation_step(&into.literals, &from_lits, &step, ord) {
                            let inference = if ilit.positive {
                                Inference::Superposition(Box::new(step))
                            } else {
                                Inference::Paramodulation(Box::new(step))
                            };
                            out.push(Conclusion { literals: lits, inference });
                        }
                    }
                }
            }
        }
    }
}

/// Superposition of `from` into positive literals of `into`.
pub fn superposition(into: &Clause, from: &Clause, ord: &TermOrdering) -> Vec<Conclusion> {
    let mut out = Vec::new();
    generate(into, from, ord, Some(true), &mut out);
    out
}

/// Paramodulation of `from` into negative literals of `into`.
pub fn paramodulation(into: &Clause, from: &Clause, ord: &TermOrdering) -> Vec<Conclusion> {
    let mut out = Vec::new();
    generate(into, from, ord, Some(false), &mut out);
    out
}

/// Both rules, from `from` into `into`.
pub fn expansion_between(into: &Clause, from: &Clause, ord: &TermOrdering, out: &mut Vec<Conclusion>) {
    generate(into, from, ord, None, out);
}

/// Checks and performs reflection on literal `literal` with `unifier`.
pub fn reflection_step(
    lits: &[Literal],
    literal: usize,
    unifier: &Substitution,
    ord: &TermOrdering,
) -> Option<Vec<Literal>> {
    let l = lits.get(literal)?;
    if l.positive {
        return None;
    }
    let s = unifier;
    if s.apply(&l.lhs) != s.apply(&l.rhs) {
        return None;
    }
    let ls = l.apply(s);
    let rest: Vec<Literal> = lits
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != literal)
        .map(|(_, k)| k.apply(s))
        .collect();
    if rest.iter().any(|k| ord.compare_literals(&ls, k) == Comparison::Less) {
        return None;
    }
    Some(normalize(rest))
}

pub fn reflection(c: &Clause, ord: &TermOrdering) -> Vec<Conclusion> {
    let mut out = Vec::new();
    for (i, l) in c.literals.iter().enumerate() {
        if l.positive || !maximal_candidate(&c.literals, i, ord) {
            continue;
        }
        let Some(unifier) = unify(&l.lhs, &l.rhs) else { continue };
        if let Some(lits) = reflection_step(&c.literals, i, &unifier, ord) {
            out.push(Conclusion {
                literals: lits,
                inference: Inference::Reflection { parent: c.id, literal: i, unifier },
            });
        }
    }
    out
}

/// Checks and performs equational factoring of `u ≃ t` (literal `i`, `u`
/// on `side`) with `u' ≃ t'` (literal `j`, `u'` on `side_j`).
pub fn equational_factoring_step(
    lits: &[Literal],
    i: usize,
    side: Side,
    j: usize,
    side_j: Side,
    unifier: &Substitution,
    ord: &TermOrdering,
) -> Option<Vec<Literal>> {
    if i == j {
        return None;
    }
    let (li, lj) = (lits.get(i)?, lits.get(j)?);
    if !li.positive || !lj.positive {
        return None;
    }
    let s = unifier;
    let us = s.apply(li.side(side));
    if us != s.apply(lj.side(side_j)) {
        return None;
    }
    let ts = s.apply(li.side(side.flip()));
    let tps = s.apply(lj.side(side_j.flip()));
    if ord.compare(&us, &ts).is_less_or_equal() {
        return None;
    }
    let max = Literal::eq(us.clone(), ts.clone());
    let c: Vec<Literal> = lits
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i && *k != j)
        .map(|(_, k)| k.apply(s))
        .collect();
    let other = Literal::eq(us.clone(), tps.clone());
    if std::iter::once(&other)
        .chain(c.iter())
        .any(|k| ord.compare_literals(&max, k) == Comparison::Less)
    {
        return None;
    }
    let mut out = vec![Literal::neq(ts, tps.clone()), Literal::eq(us, tps)];
    out.extend(c);
    Some(normalize(out))
}

pub fn equational_factoring(c: &Clause, ord: &TermOrdering) -> Vec<Conclusion> {
    let mut out = Vec::new();
    let lits = &c.literals;
    for (i, li) in lits.iter().enumerate() {
        if !li.positive || !maximal_candidate(lits, i, ord) {
            continue;
        }
        for side in Side::BOTH {
            if ord.compare(li.side(side), li.side(side.flip())).is_less_or_equal() {
                continue;
            }
            for (j, lj) in lits.iter().enumerate() {
                if j == i || !lj.positive {
                    continue;
                }
                for side_j in Side::BOTH {
                    let Some(unifier) = unify(li.side(side), lj.side(side_j)) else { continue };
                    if let Some(lits2) = equational_factoring_step(lits, i, side, j, side_j, &unifier, ord) {
                        out.push(Conclusion {
                            literals: lits2,
                            inference: Inference::EqualityFactoring {
                                parent: c.id,
                                literal: i,
                                side,
                                other: j,
                                other_side: side_j,
                                unifier,
                            },
                        });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{Origin, Signature, SortId, Term};

    fn sig() -> (Signature, SortId, TermOrdering) {
        let mut sig = Signature::new();
        let u = sig.declare_sort("U").unwrap();
        sig.declare("f", &[u], u, Origin::Input).unwrap();
        for n in ["a", "b", "c"] {
            sig.declare_constant(n, u).unwrap();
        }
        let order: Vec<_> = ["f", "a", "b", "c"].iter().map(|n| sig.lookup(n).unwrap()).collect();
        (sig, u, TermOrdering::lpo(&order))
    }

    fn k(sig: &Signature, n: &str) -> Term {
        sig.term(n, vec![]).unwrap()
    }

    #[test]
    fn superposition_ground() {
        let (sig, _, ord) = sig();
        let fa = sig.term("f", vec![k(&sig, "a")]).unwrap();
        // f(a) = b, a = c  => f(c) = b
        let c1 = Clause::input(0, vec![Literal::eq(fa, k(&sig, "b"))]);
        let c2 = Clause::input(1, vec![Literal::eq(k(&sig, "a"), k(&sig, "c"))]);
        let out = superposition(&c1, &c2, &ord);
        assert_eq!(out.len(), 1);
        let fc = sig.term("f", vec![k(&sig, "c")]).unwrap();
        assert_eq!(out[0].literals, vec![Literal::eq(fc, k(&sig, "b"))]);
        // c is smallest: nothing rewrites with c = a reversed
        assert!(superposition(&c2, &c1, &ord).is_empty());
    }

    #[test]
    fn paramodulation_into_negative() {
        let (sig, _, ord) = sig();
        let c1 = Clause::input(0, vec![Literal::neq(k(&sig, "a"), k(&sig, "b"))]);
        let c2 = Clause::input(1, vec![Literal::eq(k(&sig, "a"), k(&sig, "b"))]);
        let out = paramodulation(&c1, &c2, &ord);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].literals, vec![Literal::neq(k(&sig, "b"), k(&sig, "b"))]);
        let c3 = Clause::input(2, out[0].literals.clone());
        let r = reflection(&c3, &ord);
        assert_eq!(r.len(), 1);
        assert!(r[0].literals.is_empty());
    }

    #[test]
    fn reflection_non_ground() {
        let (sig, u, ord) = sig();
        let x = Term::var(0, u);
        let fx = sig.term("f", vec![x.clone()]).unwrap();
        let fa = sig.term("f", vec![k(&sig, "a")]).unwrap();
        let c = Clause::input(0, vec![Literal::neq(fx, fa), Literal::eq(x, k(&sig, "b"))]);
        let r = reflection(&c, &ord);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].literals, vec![Literal::eq(k(&sig, "a"), k(&sig, "b"))]);
    }

    #[test]
    fn factoring() {
        let (sig, u, ord) = sig();
        let x = Term::var(0, u);
        // f(x) = a | f(b) = c  => a != c | f(b) = c
        let fx = sig.term("f", vec![x]).unwrap();
        let fb = sig.term("f", vec![k(&sig, "b")]).unwrap();
        let c = Clause::input(0, vec![Literal::eq(fx, k(&sig, "a")), Literal::eq(fb.clone(), k(&sig, "c"))]);
        let out = equational_factoring(&c, &ord);
        assert!(out.iter().any(|c| c.literals
            == vec![Literal::neq(k(&sig, "a"), k(&sig, "c")), Literal::eq(fb.clone(), k(&sig, "c"))]));
    }

    #[test]
    fn no_inference_into_smaller_side() {
        let (sig, _, ord) = sig();
        // a = b cannot rewrite inside the smaller side of f(c) = a? a is the smaller side.
        let fc = sig.term("f", vec![k(&sig, "c")]).unwrap();
        let into = Clause::input(0, vec![Literal::eq(fc, k(&sig, "a"))]);
        let from = Clause::input(1, vec![Literal::eq(k(&sig, "a"), k(&sig, "b"))]);
        assert!(superposition(&into, &from, &ord).is_empty());
    }
}
