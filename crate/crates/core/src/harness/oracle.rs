//! Reference deciders used to cross-check the prover. None of this code
//! shares anything with the saturation kernel beyond the term types.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::calculus::Literal;
use crate::terms::{Signature, SortId, SymbolId, Term};
use crate::theories::{Presentation, Symbols, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Sat,
    Unsat,
    /// No model within the bound, and the bound is not known to suffice.
    Unknown,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("literal {0} is not ground")]
    NonGround(usize),
    #[error("domain bound {bound} exceeds the limit {max}")]
    BoundTooLarge { bound: usize, max: usize },
    #[error("symbol `{0}` is not interpreted by this oracle")]
    Unsupported(String),
}

/// Largest domain bound accepted for records, arrays and lists.
pub const MAX_BOUND: usize = 4;

fn check_ground(lits: &[Literal]) -> Result<(), OracleError> {
    match lits.iter().position(|l| !l.is_ground()) {
        Some(i) => Err(OracleError::NonGround(i)),
        None => Ok(()),
    }
}

/// Congruence closure over the subterm DAG of `lits`: union-find on
/// nodes, closed under congruence by repeated signature hashing.
pub fn oracle_congruence_closure(lits: &[Literal]) -> Result<OracleVerdict, OracleError> {
    check_ground(lits)?;
    let mut ids: HashMap<Term, usize> = HashMap::new();
    let mut nodes: Vec<(SymbolId, Vec<usize>)> = Vec::new();
    fn intern(t: &Term, ids: &mut HashMap<Term, usize>, nodes: &mut Vec<(SymbolId, Vec<usize>)>) -> usize {
        if let Some(&i) = ids.get(t) {
            return i;
        }
        let args = t.args().iter().map(|a| intern(a, ids, nodes)).collect();
        nodes.push((t.symbol().expect("ground"), args));
        ids.insert(t.clone(), nodes.len() - 1);
        nodes.len() - 1
    }
    let pairs: Vec<(usize, usize, bool)> = lits
        .iter()
        .map(|l| (intern(&l.lhs, &mut ids, &mut nodes), intern(&l.rhs, &mut ids, &mut nodes), l.positive))
        .collect();

    let mut uf = UnionFind::new(nodes.len());
    for &(a, b, pos) in &pairs {
        if pos {
            uf.union(a, b);
        }
    }
    loop {
        let mut table: HashMap<(SymbolId, Vec<usize>), usize> = HashMap::new();
        let mut changed = false;
        for (i, (f, args)) in nodes.iter().enumerate() {
            if args.is_empty() {
                continue;
            }
            let key = (*f, args.iter().map(|&a| uf.find(a)).collect());
            match table.get(&key) {
                Some(&j) => changed |= uf.union(i, j),
                None => {
                    table.insert(key, i);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let clash = pairs.iter().any(|&(a, b, pos)| !pos && uf.find(a) == uf.find(b));
    Ok(if clash { OracleVerdict::Unsat } else { OracleVerdict::Sat })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

/// Searches for a model of `lits` in the standard models of the theory of
/// `pres`, with every sort interpreted over at most `bound` elements.
///
/// Offsets modulo `k` are interpreted as disjoint `k`-cycles (`bound`
/// must be `k`); this is exact. Records and arrays are interpreted as
/// products and function spaces; `Unsat` is returned only when the bound
/// covers every needed value, otherwise `Unknown`. Lists are interpreted
/// as finite graphs of cons cells and never yield `Unsat`.
pub fn oracle_finite_model(
    pres: &Presentation,
    sig: &Signature,
    lits: &[Literal],
    bound: usize,
) -> Result<OracleVerdict, OracleError> {
    check_ground(lits)?;
    let owned = pres.owned();
    let mut consts = Vec::new();
    let mut seen = HashSet::new();
    for l in lits {
        for t in [&l.lhs, &l.rhs] {
            let mut bad = None;
            t.for_each_symbol(&mut |f| {
                if owned.contains(&f) {
                    return;
                }
                if sig.symbol(f).arity() > 0 {
                    bad = Some(f);
                } else if seen.insert(f) {
                    consts.push(f);
                }
            });
            if let Some(f) = bad {
                return Err(OracleError::Unsupported(sig.symbol(f).name.clone()));
            }
        }
    }
    match (&pres.theory, &pres.symbols) {
        (Theory::Offsets { modulus: Some(k), .. }, Symbols::Offsets { succ, pred, .. }) => {
            if bound != *k {
                return Err(OracleError::BoundTooLarge { bound, max: *k });
            }
            Ok(cycles_model(*k, *succ, *pred, &consts, lits))
        }
        _ if bound > MAX_BOUND => Err(OracleError::BoundTooLarge { bound, max: MAX_BOUND }),
        (Theory::Records { extensional, .. }, Symbols::Records { rec, fields }) => {
            // values outside the named ones can be merged into a named one,
            // except the two witnesses of each record disequality
            let diseqs = lits.iter().filter(|l| !l.positive && l.sort() == *rec).count();
            let mut complete = *extensional || diseqs == 0;
            let mut field_sorts: Vec<SortId> = Vec::new();
            let mut sizes = Vec::new();
            for f in fields {
                let need = count_terms(lits, |s| s == f.sort) + 2 * diseqs;
                complete &= need <= bound;
                field_sorts.push(f.sort);
                sizes.push(need.clamp(1, bound));
            }
            let interp = RecordModel { fields: fields.iter().map(|f| (f.select, f.store)).collect(), sizes };
            let domains = consts
                .iter()
                .map(|&c| {
                    let s = sig.symbol(c).result;
                    let n = if s == *rec {
                        interp.sizes.iter().product()
                    } else {
                        let i = field_sorts.iter().position(|&t| t == s).expect("field sort");
                        interp.sizes[i]
                    };
                    (0..n as u32).collect()
                })
                .collect::<Vec<Vec<u32>>>();
            Ok(verdict(search(&interp, &consts, &domains, lits), complete))
        }
        (Theory::Arrays { extensional, .. }, Symbols::Arrays { array, index, elem, select, store }) => {
            if index == elem {
                return Err(OracleError::Unsupported("shared index and element sort".into()));
            }
            let diseqs = lits.iter().filter(|l| !l.positive && l.sort() == *array).count();
            let need_i = count_terms(lits, |s| s == *index) + diseqs;
            // as for records: one witness index and two values per disequality
            let need_e = count_terms(lits, |s| s == *elem) + 2 * diseqs;
            let complete = (*extensional || diseqs == 0) && need_i <= bound && need_e <= bound;
            let interp = ArrayModel {
                select: *select,
                store: *store,
                ni: need_i.clamp(1, bound) as u32,
                ne: need_e.clamp(1, bound) as u32,
            };
            let domains = consts
                .iter()
                .map(|&c| {
                    let s = sig.symbol(c).result;
                    let n = if s == *array {
                        interp.ne.pow(interp.ni)
                    } else if s == *index {
                        interp.ni
                    } else {
                        interp.ne
                    };
                    (0..n).collect()
                })
                .collect::<Vec<Vec<u32>>>();
            Ok(verdict(search(&interp, &consts, &domains, lits), complete))
        }
        (Theory::Lists { .. }, Symbols::Lists { car, cdr, cons, nil, .. }) => {
            for graph in ListGraph::all(bound) {
                let interp = ListModel { graph: &graph, car: *car, cdr: *cdr, cons: *cons, nil: *nil };
                let nodes: Vec<LVal> = (0..graph.len()).map(LVal::Node).collect();
                let domains = vec![nodes; consts.len()];
                if search(&interp, &consts, &domains, lits) {
                    return Ok(OracleVerdict::Sat);
                }
            }
            Ok(OracleVerdict::Unknown)
        }
        _ => Err(OracleError::Unsupported(pres.theory.tag())),
    }
}

fn verdict(found: bool, complete: bool) -> OracleVerdict {
    match (found, complete) {
        (true, _) => OracleVerdict::Sat,
        (false, true) => OracleVerdict::Unsat,
        (false, false) => OracleVerdict::Unknown,
    }
}

/// Distinct ground subterms whose sort satisfies `p`.
fn count_terms(lits: &[Literal], p: impl Fn(SortId) -> bool) -> usize {
    let mut set = HashSet::new();
    for l in lits {
        for t in [&l.lhs, &l.rhs] {
            t.for_each_subterm(&mut |u| {
                if p(u.sort()) {
                    set.insert(u.clone());
                }
            });
        }
    }
    set.len()
}

trait Interp {
    type V: Clone + PartialEq;
    fn apply(&self, f: SymbolId, args: Vec<Self::V>) -> Self::V;
}

fn eval<I: Interp>(m: &I, t: &Term, env: &HashMap<SymbolId, I::V>) -> I::V {
    let f = t.symbol().expect("ground");
    if let Some(v) = env.get(&f) {
        return v.clone();
    }
    let args = t.args().iter().map(|a| eval(m, a, env)).collect();
    m.apply(f, args)
}

/// Backtracking over assignments of `consts`; every literal is checked as
/// soon as all of its constants are assigned.
fn search<I: Interp>(m: &I, consts: &[SymbolId], domains: &[Vec<I::V>], lits: &[Literal]) -> bool {
    let pos: HashMap<SymbolId, usize> = consts.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut by_level: Vec<Vec<&Literal>> = vec![Vec::new(); consts.len() + 1];
    for l in lits {
        let mut last = 0;
        for t in [&l.lhs, &l.rhs] {
            t.for_each_symbol(&mut |f| {
                if let Some(&i) = pos.get(&f) {
                    last = last.max(i + 1);
                }
            });
        }
        by_level[last].push(l);
    }
    let mut env = HashMap::new();
    rec_search(m, consts, domains, &by_level, 0, &mut env)
}

fn holds<I: Interp>(m: &I, l: &Literal, env: &HashMap<SymbolId, I::V>) -> bool {
    (eval(m, &l.lhs, env) == eval(m, &l.rhs, env)) == l.positive
}

fn rec_search<I: Interp>(
    m: &I,
    consts: &[SymbolId],
    domains: &[Vec<I::V>],
    by_level: &[Vec<&Literal>],
    level: usize,
    env: &mut HashMap<SymbolId, I::V>,
) -> bool {
    if !by_level[level].iter().all(|l| holds(m, l, env)) {
        return false;
    }
    if level == consts.len() {
        return true;
    }
    for v in &domains[level] {
        env.insert(consts[level], v.clone());
        if rec_search(m, consts, domains, by_level, level + 1, env) {
            return true;
        }
    }
    env.remove(&consts[level]);
    false
}

/// Offsets modulo `k`: a model is a disjoint union of `k`-cycles, and
/// `c` constants need at most `c` cycles. Values are (cycle, position);
/// cycles are opened in order and a new cycle starts at position 0.
fn cycles_model(k: usize, succ: SymbolId, pred: SymbolId, consts: &[SymbolId], lits: &[Literal]) -> OracleVerdict {
    // every side is an s/p chain over a constant: (constant, offset mod k)
    let chain = |t: &Term| -> (usize, i64) {
        let mut off = 0i64;
        let mut t = t;
        while let Some(f) = t.symbol().filter(|_| !t.is_constant()) {
            off += if f == succ { 1 } else if f == pred { -1 } else { 0 };
            t = &t.args()[0];
        }
        let c = consts.iter().position(|&c| Some(c) == t.symbol()).expect("constant");
        (c, off)
    };
    let lits: Vec<((usize, i64), (usize, i64), bool)> =
        lits.iter().map(|l| (chain(&l.lhs), chain(&l.rhs), l.positive)).collect();
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); consts.len()];
    for (i, (a, b, _)) in lits.iter().enumerate() {
        by_level[a.0.max(b.0)].push(i);
    }
    let k = k as i64;
    let mut val: Vec<(usize, i64)> = vec![(0, 0); consts.len()];
    fn go(
        level: usize,
        opened: usize,
        k: i64,
        val: &mut Vec<(usize, i64)>,
        lits: &[((usize, i64), (usize, i64), bool)],
        by_level: &[Vec<usize>],
    ) -> bool {
        if level == val.len() {
            return true;
        }
        for cycle in 0..=opened {
            let positions = if cycle == opened { 0..1 } else { 0..k };
            for p in positions {
                val[level] = (cycle, p);
                let ok = by_level[level].iter().all(|&i| {
                    let ((c1, o1), (c2, o2), pos) = lits[i];
                    let (y1, p1) = val[c1];
                    let (y2, p2) = val[c2];
                    let same = y1 == y2 && (p1 + o1).rem_euclid(k) == (p2 + o2).rem_euclid(k);
                    same == pos
                });
                if ok && go(level + 1, opened.max(cycle + 1), k, val, lits, by_level) {
                    return true;
                }
            }
        }
        false
    }
    if go(0, 0, k, &mut val, &lits, &by_level) {
        OracleVerdict::Sat
    } else {
        OracleVerdict::Unsat
    }
}

/// Records as tuples, encoded in mixed radix.
struct RecordModel {
    fields: Vec<(SymbolId, SymbolId)>,
    sizes: Vec<usize>,
}

impl RecordModel {
    fn digits(&self, mut v: u32) -> Vec<u32> {
        self.sizes
            .iter()
            .map(|&n| {
                let d = v % n as u32;
                v /= n as u32;
                d
            })
            .collect()
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().zip(&self.sizes).rev().fold(0, |acc, (&x, &n)| acc * n as u32 + x)
    }
}

impl Interp for RecordModel {
    type V = u32;

    fn apply(&self, f: SymbolId, args: Vec<u32>) -> u32 {
        for (i, &(sel, sto)) in self.fields.iter().enumerate() {
            if f == sel {
                return self.digits(args[0])[i];
            }
            if f == sto {
                let mut d = self.digits(args[0]);
                d[i] = args[1];
                return self.encode(&d);
            }
        }
        unreachable!("uninterpreted record symbol")
    }
}

/// Arrays as functions from `ni` indices to `ne` elements, encoded in
/// base `ne`.
struct ArrayModel {
    select: SymbolId,
    store: SymbolId,
    ni: u32,
    ne: u32,
}

impl Interp for ArrayModel {
    type V = u32;

    fn apply(&self, f: SymbolId, args: Vec<u32>) -> u32 {
        let digit = |a: u32, i: u32| (a / self.ne.pow(i)) % self.ne;
        if f == self.select {
            digit(args[0], args[1])
        } else if f == self.store {
            let (a, i, e) = (args[0], args[1], args[2]);
            a - digit(a, i) * self.ne.pow(i) + e * self.ne.pow(i)
        } else {
            unreachable!("uninterpreted array symbol")
        }
    }
}

/// A finite graph of cons cells: node 0 is `nil`, every other node has a
/// car and a cdr. Only graphs without two bisimilar nodes are used, so
/// distinct nodes denote distinct (possibly infinite) trees.
struct ListGraph {
    cells: Vec<(usize, usize)>,
}

impl ListGraph {
    fn len(&self) -> usize {
        self.cells.len() + 1
    }

    fn children(&self, n: usize) -> Option<(usize, usize)> {
        (n > 0).then(|| self.cells[n - 1])
    }

    /// All minimal graphs with 1..=bound nodes.
    fn all(bound: usize) -> Vec<ListGraph> {
        let mut out = Vec::new();
        for n in 1..=bound {
            let cells = n - 1;
            let choices = n * n;
            let total = choices.pow(cells as u32);
            for code in 0..total {
                let mut c = code;
                let cells: Vec<(usize, usize)> = (0..cells)
                    .map(|_| {
                        let x = c % choices;
                        c /= choices;
                        (x / n, x % n)
                    })
                    .collect();
                let g = ListGraph { cells };
                if g.is_minimal() {
                    out.push(g);
                }
            }
        }
        out
    }

    /// No two nodes are bisimilar (partition refinement from {nil}, {cells}).
    fn is_minimal(&self) -> bool {
        let n = self.len();
        let mut class: Vec<usize> = (0..n).map(|i| (i > 0) as usize).collect();
        loop {
            let mut keys: HashMap<(usize, usize, usize), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|i| {
                    let key = match self.children(i) {
                        None => (class[i], usize::MAX, usize::MAX),
                        Some((a, d)) => (class[i], class[a], class[d]),
                    };
                    let k = keys.len();
                    *keys.entry(key).or_insert(k)
                })
                .collect();
            let done = keys.len() == class.iter().collect::<HashSet<_>>().len();
            class = next;
            if done {
                break;
            }
        }
        class.iter().collect::<HashSet<_>>().len() == n
    }
}

#[derive(Clone, Debug, PartialEq)]
enum LVal {
    Node(usize),
    /// A cons cell not present in the graph.
    Cons(Box<LVal>, Box<LVal>),
}

struct ListModel<'g> {
    graph: &'g ListGraph,
    car: SymbolId,
    cdr: SymbolId,
    cons: SymbolId,
    nil: Option<SymbolId>,
}

impl Interp for ListModel<'_> {
    type V = LVal;

    fn apply(&self, f: SymbolId, mut args: Vec<LVal>) -> LVal {
        if Some(f) == self.nil {
            return LVal::Node(0);
        }
        if f == self.cons {
            let d = args.pop().unwrap();
            let a = args.pop().unwrap();
            if let (LVal::Node(x), LVal::Node(y)) = (&a, &d) {
                if let Some(i) = self.graph.cells.iter().position(|&c| c == (*x, *y)) {
                    return LVal::Node(i + 1);
                }
            }
            return LVal::Cons(Box::new(a), Box::new(d));
        }
        let first = f == self.car;
        debug_assert!(first || f == self.cdr);
        match args.pop().unwrap() {
            LVal::Node(n) => match self.graph.children(n) {
                None => LVal::Node(0),
                Some((a, d)) => LVal::Node(if first { a } else { d }),
            },
            LVal::Cons(a, d) => *(if first { a } else { d }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Origin;
    use crate::theories::install;

    #[test]
    fn congruence_examples() {
        let mut sig = Signature::new();
        let u = sig.declare_sort("U").unwrap();
        sig.declare("f", &[u], u, Origin::Input).unwrap();
        let a = sig.declare_constant("a", u).unwrap();
        let b = sig.declare_constant("b", u).unwrap();
        let (ta, tb) = (sig.constant(a), sig.constant(b));
        let fa = sig.term("f", vec![ta.clone()]).unwrap();
        let ffa = sig.term("f", vec![fa.clone()]).unwrap();
        let v = oracle_congruence_closure(&[Literal::eq(fa, ta.clone()), Literal::neq(ffa, ta.clone())]).unwrap();
        assert_eq!(v, OracleVerdict::Unsat);
        assert_eq!(oracle_congruence_closure(&[Literal::eq(ta, tb)]).unwrap(), OracleVerdict::Sat);
    }

    #[test]
    fn cycles() {
        let mut sig = Signature::new();
        let p = install(&Theory::offsets_mod("INT", 3, true), &mut sig).unwrap();
        let c = sig.declare_constant("c", sig.sort("INT").unwrap()).unwrap();
        let tc = sig.constant(c);
        let s = |t: Term| sig.term("s", vec![t]).unwrap();
        let v = oracle_finite_model(&p, &sig, &[Literal::eq(s(tc.clone()), tc.clone())], 3).unwrap();
        assert_eq!(v, OracleVerdict::Unsat);
        let s3 = s(s(s(tc.clone())));
        assert_eq!(oracle_finite_model(&p, &sig, &[Literal::eq(s3, tc)], 3).unwrap(), OracleVerdict::Sat);
    }

    #[test]
    fn arrays_read_over_write() {
        let mut sig = Signature::new();
        let p = install(&Theory::arrays(false), &mut sig).unwrap();
        let [a, i, e] = [("a", "ARRAY"), ("i", "INDEX"), ("e", "ELEM")].map(|(n, s)| {
            let c = sig.declare_constant(n, sig.sort(s).unwrap()).unwrap();
            sig.constant(c)
        });
        let st = sig.term("store", vec![a, i.clone(), e.clone()]).unwrap();
        let l = Literal::neq(sig.term("select", vec![st, i]).unwrap(), e);
        assert_eq!(oracle_finite_model(&p, &sig, &[l], 2).unwrap(), OracleVerdict::Unsat);
        assert!(matches!(oracle_finite_model(&p, &sig, &[], 5), Err(OracleError::BoundTooLarge { .. })));
    }

    #[test]
    fn list_graphs() {
        let mut sig = Signature::new();
        let p = install(&Theory::lists(true), &mut sig).unwrap();
        let c = sig.declare_constant("c", sig.sort("LIST").unwrap()).unwrap();
        let tc = sig.constant(c);
        // c = cons(c, c) has a one-cell model
        let cc = sig.term("cons", vec![tc.clone(), tc.clone()]).unwrap();
        assert_eq!(oracle_finite_model(&p, &sig, &[Literal::eq(cc, tc.clone())], 2).unwrap(), OracleVerdict::Sat);
        let nil = sig.term("nil", vec![]).unwrap();
        let cn = sig.term("cons", vec![nil.clone(), tc.clone()]).unwrap();
        let v = oracle_finite_model(&p, &sig, &[Literal::eq(cn, nil)], 3).unwrap();
        assert_eq!(v, OracleVerdict::Unknown);
        // nil alone, then one cell with any of four child pairs
        assert_eq!(ListGraph::all(2).len(), 5);
    }
}
