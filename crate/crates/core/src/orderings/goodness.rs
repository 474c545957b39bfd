//! Checks that an ordering satisfies the requirements a theory places on it.
//!
//! Each requirement is decided exactly where that is cheap (monotonicity
//! reduces "every ground `f`-term beats every constant" to the term built
//! from the least ground term of each argument sort), and then also tested
//! on random ground terms.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Comparison, TermOrdering};
use crate::terms::{Signature, SortId, SymbolId, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// Every ground compound term is greater than every constant.
    CompoundAboveConstants,
    /// Every ground term rooted at `symbol` is greater than every constant.
    SymbolAboveConstants { symbol: SymbolId },
    /// `cons(x, y) ≻ nil` for all terms.
    ConsAboveNil { cons: SymbolId, nil: SymbolId },
    /// Constants of each listed sort are greater than constants of the
    /// sorts listed after it.
    SortsDescending { sorts: Vec<SortId> },
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub requirement: Requirement,
    /// Should have been greater than `smaller`, but is not.
    pub greater: Term,
    pub smaller: Term,
}

#[derive(Clone, Debug, Default)]
pub struct GoodnessReport {
    pub violations: Vec<Violation>,
    pub samples: usize,
}

impl GoodnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, r: &Requirement) -> bool {
        self.violations.iter().any(|v| &v.requirement == r)
    }
}

fn constants(sig: &Signature) -> Vec<Term> {
    sig.symbols()
        .filter(|&s| sig.symbol(s).arity() == 0)
        .map(|s| sig.constant(s))
        .collect()
}

/// Least ground term of each sort that has one.
fn least_ground_terms(sig: &Signature, ord: &TermOrdering) -> HashMap<SortId, Term> {
    let mut least: HashMap<SortId, Term> = HashMap::new();
    for c in constants(sig) {
        match least.get(&c.sort()) {
            Some(m) if ord.compare(&c, m) != Comparison::Less => {}
            _ => {
                least.insert(c.sort(), c);
            }
        }
    }
    // Sorts without constants: smallest term from the available ones.
    loop {
        let mut changed = false;
        for f in sig.symbols() {
            let d = sig.symbol(f);
            if d.arity() == 0 || least.contains_key(&d.result) {
                continue;
            }
            if let Some(args) = d.args.iter().map(|s| least.get(s).cloned()).collect::<Option<Vec<_>>>() {
                least.insert(d.result, Term::app_unchecked(f, d.result, args));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    least
}

fn least_rooted(sig: &Signature, f: SymbolId, least: &HashMap<SortId, Term>) -> Option<Term> {
    let d = sig.symbol(f);
    let args = d.args.iter().map(|s| least.get(s).cloned()).collect::<Option<Vec<_>>>()?;
    Some(Term::app_unchecked(f, d.result, args))
}

fn random_ground(sig: &Signature, sort: SortId, depth: u32, rng: &mut ChaCha8Rng) -> Option<Term> {
    let cands: Vec<SymbolId> = sig
        .symbols()
        .filter(|&s| sig.symbol(s).result == sort && (depth > 0 || sig.symbol(s).arity() == 0))
        .collect();
    for _ in 0..4 {
        let f = *cands.choose(rng)?;
        let d = sig.symbol(f);
        let args: Option<Vec<Term>> = d
            .args
            .iter()
            .map(|s| random_ground(sig, *s, depth.saturating_sub(1), rng))
            .collect();
        if let Some(args) = args {
            return Some(Term::app_unchecked(f, d.result, args));
        }
    }
    None
}

fn random_compound(
    sig: &Signature,
    roots: &[SymbolId],
    rng: &mut ChaCha8Rng,
) -> Option<Term> {
    let f = *roots.choose(rng)?;
    let d = sig.symbol(f);
    let args: Option<Vec<Term>> = d
        .args
        .iter()
        .map(|s| {
            let depth = rng.gen_range(0..3);
            random_ground(sig, *s, depth, rng)
        })
        .collect();
    Some(Term::app_unchecked(f, d.result, args?))
}

/// Checks every requirement, sampling `samples` random ground pairs per
/// requirement in addition to the exact check.
pub fn check_goodness(
    ord: &TermOrdering,
    sig: &Signature,
    requirements: &[Requirement],
    samples: usize,
    seed: u64,
) -> GoodnessReport {
    let mut report = GoodnessReport::default();
    let consts = constants(sig);
    let least = least_ground_terms(sig, ord);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fail = |report: &mut GoodnessReport, r: &Requirement, g: Term, s: Term| {
        if !report.violates(r) {
            report.violations.push(Violation {
                requirement: r.clone(),
                greater: g,
                smaller: s,
            });
        }
    };
    for req in requirements {
        let roots: Vec<SymbolId> = match req {
            Requirement::CompoundAboveConstants => {
                sig.symbols().filter(|&f| sig.symbol(f).arity() > 0).collect()
            }
            Requirement::SymbolAboveConstants { symbol } => vec![*symbol],
            Requirement::ConsAboveNil { cons, nil } => {
                let d = sig.symbol(*cons);
                let args = d
                    .args
                    .iter()
                    .enumerate()
                    .map(|(i, s)| Term::var(i as u32, *s))
                    .collect();
                let t = Term::app_unchecked(*cons, d.result, args);
                let n = sig.constant(*nil);
                if !ord.gt(&t, &n) {
                    fail(&mut report, req, t, n);
                }
                vec![*cons]
            }
            Requirement::SortsDescending { sorts } => {
                for (i, hi) in sorts.iter().enumerate() {
                    for lo in &sorts[i + 1..] {
                        for a in consts.iter().filter(|c| c.sort() == *hi) {
                            for b in consts.iter().filter(|c| c.sort() == *lo) {
                                if !ord.gt(a, b) {
                                    fail(&mut report, req, a.clone(), b.clone());
                                }
                            }
                        }
                    }
                }
                let pool: Vec<&Term> = consts.iter().filter(|c| sorts.contains(&c.sort())).collect();
                let pos = |s: SortId| sorts.iter().position(|x| *x == s).unwrap();
                for _ in 0..samples {
                    let (Some(a), Some(b)) = (pool.choose(&mut rng), pool.choose(&mut rng)) else { break };
                    report.samples += 1;
                    if pos(a.sort()) < pos(b.sort()) && !ord.gt(a, b) {
                        fail(&mut report, req, (*a).clone(), (*b).clone());
                    }
                }
                continue;
            }
        };
        // ground terms rooted at one of `roots` must beat every constant
        let nil_only: Option<Term> = match req {
            Requirement::ConsAboveNil { nil, .. } => Some(sig.constant(*nil)),
            _ => None,
        };
        let targets: Vec<Term> = match &nil_only {
            Some(n) => vec![n.clone()],
            None => consts.clone(),
        };
        for &f in &roots {
            if let Some(t) = least_rooted(sig, f, &least) {
                for c in &targets {
                    if !ord.gt(&t, c) {
                        fail(&mut report, req, t.clone(), c.clone());
                    }
                }
            }
        }
        for _ in 0..samples {
            let (Some(t), Some(c)) = (random_compound(sig, &roots, &mut rng), targets.choose(&mut rng)) else {
                break;
            };
            report.samples += 1;
            if !ord.gt(&t, c) {
                fail(&mut report, req, t, c.clone());
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderings::{build_precedence, Scheme};
    use crate::terms::Origin;

    fn array_sig() -> (Signature, Vec<SortId>) {
        let mut sig = Signature::new();
        let a = sig.declare_sort("ARRAY").unwrap();
        let i = sig.declare_sort("INDEX").unwrap();
        let e = sig.declare_sort("ELEM").unwrap();
        sig.require_sort_above(a, e);
        sig.require_sort_above(e, i);
        sig.declare("store", &[a, i, e], a, Origin::Input).unwrap();
        sig.declare("select", &[a, i], e, Origin::Input).unwrap();
        sig.declare_constant("j", i).unwrap();
        sig.declare_constant("d", e).unwrap();
        sig.fresh_constant(a, Origin::Flattening);
        (sig, vec![a, e, i])
    }

    #[test]
    fn std_kbo_breaks_sort_order_good_lpo_keeps_it() {
        let (sig, sorts) = array_sig();
        let reqs = vec![
            Requirement::CompoundAboveConstants,
            Requirement::SortsDescending { sorts },
        ];
        let std = build_precedence(&sig, &[], Scheme::StdKbo).unwrap();
        let good = build_precedence(&sig, &[], Scheme::GoodLpo).unwrap();
        let rs = check_goodness(&std, &sig, &reqs, 200, 1);
        let rg = check_goodness(&good, &sig, &reqs, 200, 1);
        assert!(!rs.violates(&Requirement::CompoundAboveConstants));
        assert!(rs.violates(&reqs[1]));
        assert!(rg.passed(), "{:?}", rg.violations);
    }

    #[test]
    fn bad_precedence_detected() {
        let mut sig = Signature::new();
        let u = sig.declare_sort("U").unwrap();
        let f = sig.declare("f", &[u], u, Origin::Input).unwrap();
        let a = sig.declare_constant("a", u).unwrap();
        let b = sig.declare_constant("b", u).unwrap();
        // a > f > b: f(b) < a under LPO
        let o = TermOrdering::lpo(&[a, f, b]);
        let r = check_goodness(&o, &sig, &[Requirement::CompoundAboveConstants], 100, 3);
        assert!(!r.passed());
    }
}
