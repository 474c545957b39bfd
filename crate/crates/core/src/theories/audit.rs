//! Clause-class audit: checks that saturated clauses have one of the
//! shapes predicted by the termination lemma of their theory.

use std::collections::{BTreeMap, BTreeSet};

use super::{iterate, Presentation, Symbols, Theory};
use crate::calculus::{variants, Clause, ClauseId, Inference, Literal};
use crate::terms::{SortId, SymbolId, Term, Var};

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub checked: usize,
    /// Number of clauses per class name (`"iv.a"`, ...).
    pub classes: BTreeMap<&'static str, usize>,
    pub violations: Vec<ClauseId>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn is_const(t: &Term) -> bool {
    t.is_constant()
}

fn rooted<'t>(t: &'t Term, f: SymbolId) -> Option<&'t [Term]> {
    (t.symbol() == Some(f)).then(|| t.args())
}

/// `f(c1..cn)` with constant arguments.
fn flat_app(t: &Term, f: SymbolId) -> bool {
    rooted(t, f).is_some_and(|a| a.iter().all(is_const))
}

/// Either orientation of a literal satisfies `p`.
fn either(l: &Literal, p: impl Fn(&Term, &Term) -> bool) -> bool {
    p(&l.lhs, &l.rhs) || p(&l.rhs, &l.lhs)
}

fn const_lit(l: &Literal) -> bool {
    is_const(&l.lhs) && is_const(&l.rhs)
}

/// Ground literals all of whose sides are constants of `sort`.
fn const_lit_of(l: &Literal, sort: SortId) -> bool {
    const_lit(l) && l.sort() == sort
}

/// Finds a literal satisfying `head` such that all others satisfy `rest`.
fn head_and_rest(lits: &[Literal], head: impl Fn(&Literal) -> bool, rest: impl Fn(&Literal) -> bool) -> bool {
    (0..lits.len()).any(|i| head(&lits[i]) && lits.iter().enumerate().all(|(j, l)| j == i || rest(l)))
}

/// The class of `lits` in the case-analysis lemma for `pres`, or `None`
/// if it fits none. `ac_bound` is the `n` of `Ac(n)` for offsets.
pub fn classify_clause(pres: &Presentation, lits: &[Literal], ac_bound: usize) -> Option<&'static str> {
    if lits.is_empty() {
        return Some("i");
    }
    if pres.axioms(ac_bound).iter().any(|a| variants(a, lits)) {
        return Some("ii");
    }
    let ground = lits.iter().all(|l| l.is_ground());
    match &pres.symbols {
        Symbols::Equality => (ground && lits.len() == 1 && lits[0].is_flat()).then_some("iii"),
        Symbols::Records { fields, .. } => {
            if !ground || lits.len() != 1 {
                return None;
            }
            let l = &lits[0];
            if const_lit(l) {
                return Some("iii");
            }
            if !l.positive {
                return None;
            }
            for f in fields {
                if either(l, |a, b| flat_app(a, f.select) && is_const(b))
                    || either(l, |a, b| flat_app(a, f.store) && is_const(b))
                {
                    return Some("iii");
                }
                if flat_app(&l.lhs, f.select) && flat_app(&l.rhs, f.select) {
                    return Some("iv");
                }
            }
            None
        }
        Symbols::Lists { car, cdr, cons, .. } => {
            if !ground {
                return None;
            }
            if lits.len() == 1 {
                let l = &lits[0];
                if const_lit(l) {
                    return Some("iii");
                }
                if l.positive
                    && either(l, |a, b| is_const(b) && [*car, *cdr, *cons].iter().any(|&f| flat_app(a, f)))
                {
                    return Some("iii");
                }
            }
            let cons_of = |t: &Term, first: Option<SymbolId>, second: Option<SymbolId>| {
                let Some(a) = rooted(t, *cons) else { return false };
                let ok = |u: &Term, g: Option<SymbolId>| match g {
                    None => is_const(u),
                    Some(g) => flat_app(u, g),
                };
                ok(&a[0], first) && ok(&a[1], second)
            };
            let shapes: [(&'static str, Box<dyn Fn(&Literal) -> bool>); 8] = [
                ("iv.a", Box::new(|l: &Literal| l.positive && either(l, |a, b| is_const(b) && cons_of(a, None, Some(*cdr))))),
                ("iv.b", Box::new(|l: &Literal| l.positive && either(l, |a, b| is_const(b) && cons_of(a, Some(*car), None)))),
                ("iv.c", Box::new(|l: &Literal| l.positive && either(l, |a, b| is_const(b) && cons_of(a, Some(*car), Some(*cdr))))),
                ("iv.d", Box::new(|l: &Literal| l.positive && either(l, |a, b| is_const(b) && cons_of(a, None, None)))),
                ("iv.e", Box::new(|l: &Literal| l.positive && flat_app(&l.lhs, *car) && flat_app(&l.rhs, *car))),
                ("iv.f", Box::new(|l: &Literal| l.positive && flat_app(&l.lhs, *cdr) && flat_app(&l.rhs, *cdr))),
                ("iv.g", Box::new(|l: &Literal| l.positive && either(l, |a, b| is_const(b) && flat_app(a, *car)))),
                ("iv.h", Box::new(|l: &Literal| l.positive && either(l, |a, b| is_const(b) && flat_app(a, *cdr)))),
            ];
            for (name, shape) in &shapes {
                if head_and_rest(lits, shape, const_lit) {
                    return Some(name);
                }
            }
            lits.iter().all(const_lit).then_some("iv.i")
        }
        Symbols::Arrays { array, index, elem, select, store } => {
            let idx = |l: &Literal| const_lit_of(l, *index);
            if ground && lits.len() == 1 {
                let l = &lits[0];
                if const_lit(l) && (l.positive || l.sort() != *array) {
                    return Some("iii");
                }
                if l.positive && either(l, |a, b| is_const(b) && (flat_app(a, *store) || flat_app(a, *select))) {
                    return Some("iii");
                }
            }
            if !ground {
                // iv.a: select(a,x) ≃ select(a',x) ∨ x ≃ i.. ∨ index literals
                let Some(x) = single_var(lits) else {
                    return None;
                };
                let xt = Term::from_var(x);
                let sel_x = |t: &Term| rooted(t, *select).is_some_and(|a| is_const(&a[0]) && a[1] == xt);
                let head = |l: &Literal| l.positive && sel_x(&l.lhs) && sel_x(&l.rhs);
                let rest = |l: &Literal| {
                    idx(l) || (l.positive && either(l, |a, b| *a == xt && is_const(b) && b.sort() == *index))
                };
                return (x.sort == *index && head_and_rest(lits, head, rest)).then_some("iv.a");
            }
            let sel = |l: &Literal| l.positive && either(l, |a, b| flat_app(a, *select) && is_const(b));
            let elit = |pos: bool| move |l: &Literal| l.positive == pos && const_lit_of(l, *elem);
            let arr = |l: &Literal| {
                l.positive && either(l, |a, b| is_const(b) && b.sort() == *array && (is_const(a) || flat_app(a, *store)))
            };
            if head_and_rest(lits, sel, idx) {
                return Some("iv.b");
            }
            if head_and_rest(lits, elit(true), idx) {
                return Some("iv.c");
            }
            if head_and_rest(lits, elit(false), idx) {
                return Some("iv.d");
            }
            if head_and_rest(lits, arr, idx) {
                return Some("iv.g");
            }
            if lits.iter().all(idx) {
                return Some(if lits.iter().any(|l| l.positive) { "iv.e" } else { "iv.f" });
            }
            None
        }
        Symbols::Offsets { succ, pred, .. } => {
            let (modulus, reduced) = match pres.theory {
                Theory::Offsets { modulus, reduced, .. } => (modulus, reduced),
                _ => (None, true),
            };
            if !reduced {
                return classify_unreduced(lits, *succ, *pred, modulus.unwrap_or(1));
            }
            let n = modulus.map_or(ac_bound, |k| k - 1);
            let neg_c = |l: &Literal| !l.positive && const_lit(l);
            let s_c = |t: &Term| flat_app(t, *succ);
            if !ground {
                // iv.a: s(x) ≄ d ∨ x ≃ c ∨ ⋁ d_i ≄ b_i
                let sx = |t: &Term| rooted(t, *succ).is_some_and(|a| a[0].is_var());
                let head = |l: &Literal| !l.positive && either(l, |a, b| sx(a) && is_const(b));
                let ok = (0..lits.len()).any(|i| {
                    head(&lits[i]) && {
                        let Some(x) = single_var(lits) else { return false };
                        let xt = Term::from_var(x);
                        let mut eqs = 0;
                        lits.iter().enumerate().all(|(j, l)| {
                            if j == i || neg_c(l) {
                                return true;
                            }
                            let hit = l.positive && either(l, |a, b| *a == xt && is_const(b));
                            eqs += hit as usize;
                            hit
                        }) && eqs == 1
                    }
                });
                return ok.then_some("iv.a");
            }
            if lits.len() == 1 {
                let l = &lits[0];
                if const_lit(l) {
                    return Some("iii");
                }
                if l.positive && either(l, |a, b| s_c(a) && is_const(b)) {
                    return Some("iii");
                }
                if modulus.is_some() && l.positive {
                    let v = (2..=n).any(|j| {
                        either(l, |a, b| {
                            is_const(b) && {
                                let base = innermost(a, *succ, j);
                                base.is_some_and(|c| is_const(&c) && iterate(*succ, a.sort(), j, c) == *a)
                            }
                        })
                    });
                    if v {
                        return Some("v");
                    }
                }
            }
            if lits.iter().all(neg_c) {
                return Some("iv.c");
            }
            if head_and_rest(lits, |l| l.positive && const_lit(l), neg_c) {
                return Some("iv.b");
            }
            if head_and_rest(lits, |l| l.positive && either(l, |a, b| s_c(a) && is_const(b)), neg_c) {
                return Some("iv.d");
            }
            let sj = |l: &Literal| {
                !l.positive
                    && (1..n).any(|j| {
                        either(l, |a, b| {
                            is_const(b) && innermost(a, *succ, j).is_some_and(|c| is_const(&c))
                        })
                    })
            };
            head_and_rest(lits, sj, neg_c).then_some("iv.e")
        }
    }
}

/// The only variable of a clause.
fn single_var(lits: &[Literal]) -> Option<Var> {
    let mut vs: Vec<Var> = Vec::new();
    for l in lits {
        for v in l.lhs.vars().iter().chain(l.rhs.vars()) {
            if !vs.contains(v) {
                vs.push(*v);
            }
        }
    }
    (vs.len() == 1).then(|| vs[0])
}

/// The argument under exactly `j` applications of `f`, if `t` has that
/// shape.
fn innermost(t: &Term, f: SymbolId, j: usize) -> Option<Term> {
    let mut cur = t.clone();
    for _ in 0..j {
        let next = rooted(&cur, f)?.first()?.clone();
        cur = next;
    }
    (cur.symbol() != Some(f)).then_some(cur)
}

/// Offsets with `p` and no reduction: persistent clauses are units whose
/// sides are `s^j(u)` or `p^j(u)` with `j < k` and `u` a constant or
/// variable.
fn classify_unreduced(lits: &[Literal], succ: SymbolId, pred: SymbolId, k: usize) -> Option<&'static str> {
    if lits.len() != 1 {
        return None;
    }
    let side_ok = |t: &Term| {
        (0..k).any(|j| {
            [succ, pred].iter().any(|&f| {
                innermost(t, f, j).is_some_and(|u| u.is_var() || u.is_constant())
            })
        })
    };
    (side_ok(&lits[0].lhs) && side_ok(&lits[0].rhs)).then_some("unit")
}

/// Audits `clauses` (normally the persistent clauses of a saturation of
/// a single theory) against the lemma for `pres`.
pub fn clause_class_audit<'c>(
    pres: &Presentation,
    clauses: impl IntoIterator<Item = &'c Clause>,
    ac_bound: usize,
) -> AuditReport {
    let mut r = AuditReport::default();
    for c in clauses {
        r.checked += 1;
        match classify_clause(pres, &c.literals, ac_bound) {
            Some(name) => *r.classes.entry(name).or_default() += 1,
            None => r.violations.push(c.id),
        }
    }
    r
}

/// Non-constant theory symbols of a clause, mapped to their owners.
fn theories_of(lits: &[Literal], owner: &impl Fn(SymbolId) -> Option<usize>, arity: &impl Fn(SymbolId) -> usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for l in lits {
        for t in [&l.lhs, &l.rhs] {
            t.for_each_symbol(&mut |s| {
                if arity(s) > 0 {
                    if let Some(o) = owner(s) {
                        out.insert(o);
                    }
                }
            });
        }
    }
    out
}

/// Superposition and paramodulation steps between clauses of different
/// theories whose rewritten side is not a constant. `owner` maps a symbol
/// to the index of its theory, `arity` gives symbol arities.
pub fn cross_theory_violations(
    clauses: &[Clause],
    owner: impl Fn(SymbolId) -> Option<usize>,
    arity: impl Fn(SymbolId) -> usize,
) -> Vec<ClauseId> {
    let mut out = Vec::new();
    for c in clauses {
        let (Inference::Superposition(step) | Inference::Paramodulation(step)) = &c.inference else {
            continue;
        };
        let into = theories_of(&clauses[step.into].literals, &owner, &arity);
        let from = theories_of(&clauses[step.from].literals, &owner, &arity);
        if into.is_empty() || from.is_empty() || into == from {
            continue;
        }
        let u = clauses[step.from].literals[step.from_literal].side(step.from_side);
        if !u.is_constant() {
            out.push(c.id);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Signature;
    use crate::theories::install;

    #[test]
    fn array_iv_a_example() {
        let mut sig = Signature::new();
        let p = install(&Theory::arrays(false), &mut sig).unwrap();
        let (arr, idx) = (sig.sort("ARRAY").unwrap(), sig.sort("INDEX").unwrap());
        let a = sig.declare_constant("a", arr).unwrap();
        let a2 = sig.declare_constant("a2", arr).unwrap();
        let i = sig.declare_constant("i", idx).unwrap();
        let w = Term::var(0, idx);
        let sel = |x: SymbolId| sig.term("select", vec![sig.constant(x), w.clone()]).unwrap();
        let c = vec![Literal::eq(sel(a2), sel(a)), Literal::eq(sig.constant(i), w.clone())];
        assert_eq!(classify_clause(&p, &c, 0), Some("iv.a"));
        let bad = vec![Literal::eq(sel(a2), sel(a)), Literal::eq(sel(a), sel(a2))];
        assert_eq!(classify_clause(&p, &bad, 0), None);
    }

    #[test]
    fn record_iv_and_ios_iv_a() {
        let mut sig = Signature::new();
        let p = install(&Theory::records(2, false), &mut sig).unwrap();
        let rec = sig.sort("REC").unwrap();
        let r = sig.declare_constant("r", rec).unwrap();
        let r2 = sig.declare_constant("r2", rec).unwrap();
        let l = Literal::eq(
            sig.term("rselect_1", vec![sig.constant(r)]).unwrap(),
            sig.term("rselect_1", vec![sig.constant(r2)]).unwrap(),
        );
        assert_eq!(classify_clause(&p, &[l], 0), Some("iv"));

        let mut sig = Signature::new();
        let p = install(&Theory::offsets("INT"), &mut sig).unwrap();
        let int = sig.sort("INT").unwrap();
        let c = sig.declare_constant("c", int).unwrap();
        let d = sig.declare_constant("d", int).unwrap();
        let x = Term::var(0, int);
        let lits = [
            Literal::neq(sig.term("s", vec![x.clone()]).unwrap(), sig.constant(d)),
            Literal::eq(x, sig.constant(c)),
        ];
        assert_eq!(classify_clause(&p, &lits, 1), Some("iv.a"));
    }
}
