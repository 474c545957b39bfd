//! Theory-specific reductions of ground literal sets.

use std::collections::HashMap;

use super::{Presentation, Symbols};
use crate::calculus::Literal;
use crate::terms::{Origin, Signature, Term};

/// Replaces every array disequality `l ≄ r` by
/// `select(l, sk) ≄ select(r, sk)` with a fresh index constant `sk` per
/// distinct pair. Literals of other sorts pass through.
pub fn a_reduce(lits: &[Literal], pres: &Presentation, sig: &mut Signature) -> Vec<Literal> {
    let Symbols::Arrays { array, index, elem, select, .. } = pres.symbols else {
        return lits.to_vec();
    };
    let mut skolems: HashMap<(Term, Term), Term> = HashMap::new();
    lits.iter()
        .map(|l| {
            if l.positive || l.sort() != array {
                return l.clone();
            }
            let key = if l.lhs.hash_value() <= l.rhs.hash_value() {
                (l.lhs.clone(), l.rhs.clone())
            } else {
                (l.rhs.clone(), l.lhs.clone())
            };
            let sk = skolems
                .entry(key)
                .or_insert_with(|| {
                    let k = sig.fresh_constant(index, Origin::Skolem);
                    sig.constant(k)
                })
                .clone();
            Literal::neq(
                Term::app_unchecked(select, elem, vec![l.lhs.clone(), sk.clone()]),
                Term::app_unchecked(select, elem, vec![l.rhs.clone(), sk]),
            )
        })
        .collect()
}

/// Replaces every record disequality `l ≄ r` by the disjunction of
/// `rselect_i(l) ≄ rselect_i(r)` over the fields and expands to DNF: one
/// literal set per choice of field for each disequality.
pub fn r_reduce(lits: &[Literal], pres: &Presentation) -> Vec<Vec<Literal>> {
    let Symbols::Records { rec, fields } = &pres.symbols else {
        return vec![lits.to_vec()];
    };
    let mut branches: Vec<Vec<Literal>> = vec![Vec::new()];
    for l in lits {
        if l.positive || l.sort() != *rec {
            for b in &mut branches {
                b.push(l.clone());
            }
            continue;
        }
        let mut next = Vec::with_capacity(branches.len() * fields.len());
        for b in &branches {
            for f in fields {
                let mut nb = b.clone();
                nb.push(Literal::neq(
                    Term::app_unchecked(f.select, f.sort, vec![l.lhs.clone()]),
                    Term::app_unchecked(f.select, f.sort, vec![l.rhs.clone()]),
                ));
                next.push(nb);
            }
        }
        branches = next;
    }
    branches
}

/// On a flat literal set, replaces every `p(c) ≃ b` by `s(b) ≃ c`.
/// Returns the reduced set and `|C_S|`, the number of distinct constants
/// occurring as argument of `s`.
pub fn i_reduce(lits: &[Literal], pres: &Presentation) -> (Vec<Literal>, usize) {
    let Symbols::Offsets { sort, succ, pred } = pres.symbols else {
        return (lits.to_vec(), 0);
    };
    let is_p = |t: &Term| t.symbol() == Some(pred);
    let out: Vec<Literal> = lits
        .iter()
        .map(|l| {
            if !l.positive {
                return l.clone();
            }
            let (pc, b) = if is_p(&l.lhs) && l.rhs.is_constant() {
                (&l.lhs, &l.rhs)
            } else if is_p(&l.rhs) && l.lhs.is_constant() {
                (&l.rhs, &l.lhs)
            } else {
                return l.clone();
            };
            Literal::eq(Term::app_unchecked(succ, sort, vec![b.clone()]), pc.args()[0].clone())
        })
        .collect();
    let n = count_distinct_args(&out, succ);
    (out, n)
}

fn count_distinct_args(lits: &[Literal], succ: crate::terms::SymbolId) -> usize {
    let mut seen: Vec<Term> = Vec::new();
    for l in lits {
        for t in [&l.lhs, &l.rhs] {
            t.for_each_subterm(&mut |u| {
                if u.symbol() == Some(succ) && !seen.contains(&u.args()[0]) {
                    seen.push(u.args()[0].clone());
                }
            });
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::{install, Theory};

    #[test]
    fn a_reduce_per_pair_skolems() {
        let mut sig = Signature::new();
        let p = install(&Theory::arrays(false), &mut sig).unwrap();
        let arr = sig.sort("ARRAY").unwrap();
        let [a, b, c] = ["a", "b", "c"].map(|n| {
            let s = sig.declare_constant(n, arr).unwrap();
            sig.constant(s)
        });
        let lits = vec![Literal::neq(a.clone(), b.clone()), Literal::neq(b.clone(), a.clone()), Literal::neq(a, c)];
        let out = a_reduce(&lits, &p, &mut sig);
        let sk = |l: &Literal| l.lhs.args()[1].clone();
        assert_eq!(sk(&out[0]), sk(&out[1]));
        assert_ne!(sk(&out[0]), sk(&out[2]));
        assert!(out.iter().all(|l| !l.positive && l.sort() == sig.sort("ELEM").unwrap()));
    }

    #[test]
    fn r_reduce_branch_count() {
        let mut sig = Signature::new();
        let p = install(&Theory::records(2, true), &mut sig).unwrap();
        let rec = sig.sort("REC").unwrap();
        let [a, b, c] = ["a", "b", "c"].map(|n| {
            let s = sig.declare_constant(n, rec).unwrap();
            sig.constant(s)
        });
        assert_eq!(r_reduce(&[Literal::eq(a.clone(), b.clone())], &p).len(), 1);
        assert_eq!(r_reduce(&[Literal::neq(a.clone(), b.clone())], &p).len(), 2);
        assert_eq!(r_reduce(&[Literal::neq(a.clone(), b), Literal::neq(a, c)], &p).len(), 4);
    }

    #[test]
    fn i_reduce_examples() {
        let mut sig = Signature::new();
        let p = install(&Theory::offsets("INT"), &mut sig).unwrap();
        let [c, b, c2, c3] = ["c", "b", "c2", "c3"].map(|n| {
            let s = sig.declare_constant(n, sig.sort("INT").unwrap()).unwrap();
            sig.constant(s)
        });
        let pc = sig.term("p", vec![c.clone()]).unwrap();
        let (out, n) = i_reduce(&[Literal::eq(pc, b.clone())], &p);
        assert_eq!(out, vec![Literal::eq(sig.term("s", vec![b]).unwrap(), c.clone())]);
        assert_eq!(n, 1);
        let sc = sig.term("s", vec![c.clone()]).unwrap();
        let lits = [Literal::eq(sc.clone(), c2.clone()), Literal::eq(sc, c3.clone()), Literal::eq(c2, c3)];
        assert_eq!(i_reduce(&lits, &p).1, 1);
    }
}
