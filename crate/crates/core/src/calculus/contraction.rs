//! Contraction rules: subsumption, simplification by unit equations and
//! deletion.

use super::{normalize, Clause, Conclusion, CutStep, Inference, Literal, RewriteStep, Side};
use crate::orderings::{Comparison, TermOrdering};
use crate::terms::{match_with, Substitution, Term};

/// `∃σ. general σ ⊆ specific` as multisets.
pub fn instance_of(general: &[Literal], specific: &[Literal]) -> bool {
    if general.len() > specific.len() {
        return false;
    }
    let mut used = vec![false; specific.len()];
    let mut order: Vec<usize> = (0..general.len()).collect();
    // ground and deep literals first: they prune fastest
    order.sort_by_key(|&i| {
        let l = &general[i];
        (!l.is_ground(), std::cmp::Reverse(l.lhs.size() + l.rhs.size()))
    });
    let mut sub = Substitution::new();
    subsume_rec(general, specific, &order, 0, &mut used, &mut sub)
}

fn subsume_rec(
    general: &[Literal],
    specific: &[Literal],
    order: &[usize],
    k: usize,
    used: &mut [bool],
    sub: &mut Substitution,
) -> bool {
    let Some(&gi) = order.get(k) else { return true };
    let g = &general[gi];
    for (j, s) in specific.iter().enumerate() {
        if used[j] || s.positive != g.positive || s.sort() != g.sort() {
            continue;
        }
        for flip in [false, true] {
            let (sl, sr) = if flip { (&s.rhs, &s.lhs) } else { (&s.lhs, &s.rhs) };
            let mut trial = sub.clone();
            if match_with(&g.lhs, sl, &mut trial) && match_with(&g.rhs, sr, &mut trial) {
                used[j] = true;
                if subsume_rec(general, specific, order, k + 1, used, &mut trial) {
                    *sub = trial;
                    return true;
                }
                used[j] = false;
            }
        }
    }
    false
}

/// Strict subsumption `D ⋗ C`: `C` subsumes `D` and `D` does not subsume
/// `C`.
pub fn subsumes(d: &[Literal], c: &[Literal]) -> bool {
    instance_of(c, d) && !instance_of(d, c)
}

/// Each clause subsumes the other.
pub fn variants(a: &[Literal], b: &[Literal]) -> bool {
    a.len() == b.len() && instance_of(a, b) && instance_of(b, a)
}

/// Contains `t ≃ t`.
pub fn is_deletable(lits: &[Literal]) -> bool {
    lits.iter().any(|l| l.is_trivial())
}

/// Contains a literal and its complement.
pub fn is_tautology(lits: &[Literal]) -> bool {
    lits.iter().enumerate().any(|(i, l)| {
        l.positive && lits[i + 1..].iter().chain(&lits[..i]).any(|k| !k.positive && k.lhs_rhs_eq(l))
    })
}

impl Literal {
    fn lhs_rhs_eq(&self, o: &Literal) -> bool {
        (self.lhs == o.lhs && self.rhs == o.rhs) || (self.lhs == o.rhs && self.rhs == o.lhs)
    }
}

/// Whether rewriting the subterm at (`li`, `side`, `pos`) with the
/// instance `l ≃ r` is allowed: `l ≻ r` and the clause is greater than the
/// instance.
fn rewrite_allowed(
    lits: &[Literal],
    li: usize,
    side: Side,
    pos: &[usize],
    l: &Term,
    r: &Term,
    ord: &TermOrdering,
) -> bool {
    if !ord.gt(l, r) {
        return false;
    }
    let k = &lits[li];
    // strictly inside a side, or a side of a negative literal: that literal
    // alone is already greater
    if !pos.is_empty() || !k.positive {
        return true;
    }
    if ord.gt(k.side(side.flip()), r) {
        return true;
    }
    let unit = Literal::eq(l.clone(), r.clone());
    if lits.contains(&unit) {
        return lits.len() > 1;
    }
    lits.iter().any(|k2| ord.compare_literals(k2, &unit) == Comparison::Greater)
}

/// Checks one rewrite step against the unit rule `rule` and applies it.
pub fn apply_rewrite(
    lits: &[Literal],
    rule: &Literal,
    step: &RewriteStep,
    ord: &TermOrdering,
) -> Option<Vec<Literal>> {
    if !rule.positive {
        return None;
    }
    let target = lits.get(step.literal)?;
    let u = target.side(step.side).subterm_at(&step.position)?;
    let l = step.matcher.apply(rule.side(step.rule_side));
    let r = step.matcher.apply(rule.side(step.rule_side.flip()));
    if &l != u || !rewrite_allowed(lits, step.literal, step.side, &step.position, &l, &r, ord) {
        return None;
    }
    let mut out = lits.to_vec();
    let lit = &mut out[step.literal];
    match step.side {
        Side::Left => lit.lhs = lit.lhs.replace_at(&step.position, &r),
        Side::Right => lit.rhs = lit.rhs.replace_at(&step.position, &r),
    }
    Some(out)
}

/// First position (literal order, left side first, outermost first) that
/// the unit `rule` can rewrite.
pub fn find_rewrite(
    lits: &[Literal],
    rule: &Literal,
    rule_id: usize,
    ord: &TermOrdering,
) -> Option<(RewriteStep, Vec<Literal>)> {
    if !rule.positive {
        return None;
    }
    for (li, lit) in lits.iter().enumerate() {
        for side in Side::BOTH {
            let t = lit.side(side);
            for pos in t.positions() {
                let u = t.subterm_at(&pos).unwrap();
                for rule_side in Side::BOTH {
                    let pat = rule.side(rule_side);
                    if pat.is_var() || pat.symbol() != u.symbol() {
                        continue;
                    }
                    let mut m = Substitution::new();
                    if !match_with(pat, u, &mut m) {
                        continue;
                    }
                    let step = RewriteStep {
                        rule: rule_id,
                        rule_side,
                        literal: li,
                        side,
                        position: pos.clone(),
                        matcher: m,
                    };
                    if let Some(out) = apply_rewrite(lits, rule, &step, ord) {
                        return Some((step, out));
                    }
                }
            }
        }
    }
    None
}

/// Rewrites `target` with the unit positive clause `rule` until no more
/// rewriting applies. Returns `None` if nothing changed.
pub fn simplify(target: &Clause, rule: &Clause, ord: &TermOrdering) -> Option<Conclusion> {
    if !rule.is_unit() || !rule.literals[0].positive {
        return None;
    }
    // rename the rule apart from the target
    let offset = super::clause_max_var(&target.literals).map_or(0, |m| m + 1);
    let rlit = rule.literals[0].shift_vars(offset);
    let mut lits = target.literals.clone();
    let mut steps = Vec::new();
    while let Some((mut step, next)) = find_rewrite(&lits, &rlit, rule.id, ord) {
        step.matcher = unshift(&step.matcher, offset);
        steps.push(step);
        lits = next;
    }
    if steps.is_empty() {
        return None;
    }
    Some(Conclusion {
        literals: normalize(lits),
        inference: Inference::Simplification { parent: target.id, steps },
    })
}

/// Checks one cut step and removes the literal. `unit` is the literal of
/// the unit clause named by the step.
pub fn apply_cut(lits: &[Literal], step: &CutStep, unit: Option<&Literal>) -> Option<Vec<Literal>> {
    let target = lits.get(step.literal)?;
    let ok = match unit {
        None => step.unit.is_none() && !target.positive && target.lhs == target.rhs,
        Some(u) => step.unit.is_some() && u.is_ground() && *u == target.negated(),
    };
    if !ok {
        return None;
    }
    let mut out = lits.to_vec();
    out.remove(step.literal);
    Some(out)
}

/// Re-expresses a matcher of a shifted rule in terms of the rule's own
/// variables.
pub(crate) fn unshift(m: &Substitution, offset: u32) -> Substitution {
    Substitution::from_pairs(
        m.pairs()
            .iter()
            .map(|(v, t)| (crate::terms::Var { id: v.id - offset, sort: v.sort }, t.clone()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{Origin, Signature, SortId};

    fn sig() -> (Signature, SortId, TermOrdering) {
        let mut sig = Signature::new();
        let u = sig.declare_sort("U").unwrap();
        sig.declare("f", &[u], u, Origin::Input).unwrap();
        for n in ["a", "b", "c", "d"] {
            sig.declare_constant(n, u).unwrap();
        }
        let order: Vec<_> = ["f", "a", "b", "c", "d"].iter().map(|n| sig.lookup(n).unwrap()).collect();
        (sig, u, TermOrdering::lpo(&order))
    }

    fn k(sig: &Signature, n: &str) -> Term {
        sig.term(n, vec![]).unwrap()
    }

    #[test]
    fn strict_subsumption() {
        let (sig, u, _) = sig();
        let ab = Literal::eq(k(&sig, "a"), k(&sig, "b"));
        let cd = Literal::eq(k(&sig, "c"), k(&sig, "d"));
        assert!(subsumes(&[ab.clone(), cd.clone()], &[ab.clone()]));
        assert!(!subsumes(&[ab.clone()], &[ab.clone()]));
        assert!(variants(&[ab.clone()], &[Literal::eq(k(&sig, "b"), k(&sig, "a"))]));
        let x = Term::var(0, u);
        let xb = Literal::eq(x, k(&sig, "b"));
        assert!(subsumes(&[ab.clone()], &[xb.clone()]));
        assert!(!instance_of(&[ab], &[xb]));
    }

    #[test]
    fn multiset_subsumption() {
        let (sig, u, _) = sig();
        let x = Term::var(0, u);
        let y = Term::var(1, u);
        // x=a | y=a does not subsume b=a (needs two literals)
        let g = vec![Literal::eq(x, k(&sig, "a")), Literal::eq(y, k(&sig, "a"))];
        assert!(!instance_of(&g, &[Literal::eq(k(&sig, "b"), k(&sig, "a"))]));
    }

    #[test]
    fn simplification_rewrites_to_normal_form() {
        let (sig, _, ord) = sig();
        let fa = sig.term("f", vec![k(&sig, "a")]).unwrap();
        let target = Clause::input(0, vec![Literal::neq(fa.clone(), k(&sig, "c"))]);
        let rule = Clause::input(1, vec![Literal::eq(fa, k(&sig, "b"))]);
        let out = simplify(&target, &rule, &ord).unwrap();
        assert_eq!(out.literals, vec![Literal::neq(k(&sig, "b"), k(&sig, "c"))]);
    }

    #[test]
    fn simplification_respects_clause_ordering() {
        let (sig, _, ord) = sig();
        let fa = sig.term("f", vec![k(&sig, "a")]).unwrap();
        // the rule cannot rewrite a copy of itself
        let unit = Clause::input(0, vec![Literal::eq(fa.clone(), k(&sig, "b"))]);
        assert!(simplify(&unit, &unit, &ord).is_none());
        // but rewrites f(a) = d when d < b? (f(a)=d) vs (f(a)=b): b > d so not greater
        let t = Clause::input(1, vec![Literal::eq(fa.clone(), k(&sig, "d"))]);
        assert!(simplify(&t, &unit, &ord).is_none());
        // f(a) = a is greater than f(a) = b
        let t2 = Clause::input(2, vec![Literal::eq(fa, k(&sig, "a"))]);
        assert!(simplify(&t2, &unit, &ord).is_some());
    }

    #[test]
    fn deletion_and_tautology() {
        let (sig, _, _) = sig();
        let a = k(&sig, "a");
        assert!(is_deletable(&[Literal::eq(a.clone(), a.clone())]));
        let ab = Literal::eq(a.clone(), k(&sig, "b"));
        assert!(is_tautology(&[ab.clone(), Literal::neq(k(&sig, "b"), a)]));
        assert!(!is_tautology(&[ab]));
    }

    #[test]
    fn cutting_literals() {
        let (sig, _, _) = sig();
        let (a, b, c) = (k(&sig, "a"), k(&sig, "b"), k(&sig, "c"));
        let lits = vec![Literal::neq(a.clone(), a.clone()), Literal::eq(b.clone(), c.clone())];
        let out = apply_cut(&lits, &CutStep { literal: 0, unit: None }, None).unwrap();
        assert_eq!(out, vec![Literal::eq(b.clone(), c.clone())]);
        let unit = Literal::neq(c.clone(), b.clone());
        assert_eq!(apply_cut(&out, &CutStep { literal: 0, unit: Some(9) }, Some(&unit)), Some(vec![]));
        // a literal equal to the unit is not cut
        assert!(apply_cut(&out, &CutStep { literal: 0, unit: Some(9) }, Some(&unit.negated())).is_none());
        assert!(apply_cut(&lits, &CutStep { literal: 1, unit: None }, None).is_none());
    }
}
