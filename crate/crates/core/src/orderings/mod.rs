//! Reduction orderings on terms, literals and clauses.
//!
//! Two term orderings are provided: the lexicographic path ordering (all
//! symbols with lexicographic status) and the Knuth-Bendix ordering. Both
//! are extended to literals and clauses by multiset extension, with a
//! positive literal `l ≃ r` read as `{l, r}` and a negative one as
//! `{l, l, r, r}`.

mod goodness;
mod precedence;

pub use goodness::{check_goodness, GoodnessReport, Requirement, Violation};
pub use precedence::{build_precedence, ordering_for, Scheme};

use thiserror::Error;

use crate::calculus::Literal;
use crate::terms::{Head, SymbolId, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl Comparison {
    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Greater => Comparison::Less,
            Comparison::Less => Comparison::Greater,
            c => c,
        }
    }

    /// `self` is one of `≺`, `=`: the "not ⪯" side conditions fail.
    pub fn is_less_or_equal(self) -> bool {
        matches!(self, Comparison::Less | Comparison::Equal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderingKind {
    Lpo,
    Kbo,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderingError {
    #[error("symbol #{0} is not covered by the precedence")]
    UnknownSymbol(u32),
    #[error("precedence and weight tables have different sizes")]
    TableSize,
}

/// A total precedence plus, for KBO, a weight table.
#[derive(Clone, Debug)]
pub struct TermOrdering {
    kind: OrderingKind,
    /// `rank[f] > rank[g]` iff `f ≻ g`.
    rank: Vec<u32>,
    weights: Vec<u32>,
    var_weight: u32,
}

impl TermOrdering {
    /// LPO over the precedence given from greatest to smallest symbol.
    pub fn lpo(order: &[SymbolId]) -> TermOrdering {
        TermOrdering {
            kind: OrderingKind::Lpo,
            rank: ranks(order),
            weights: Vec::new(),
            var_weight: 1,
        }
    }

    /// KBO with the given symbol weights (indexed by symbol id) and
    /// variable weight 1.
    pub fn kbo(order: &[SymbolId], weights: Vec<u32>) -> Result<TermOrdering, OrderingError> {
        let rank = ranks(order);
        if weights.len() != rank.len() {
            return Err(OrderingError::TableSize);
        }
        Ok(TermOrdering {
            kind: OrderingKind::Kbo,
            rank,
            weights,
            var_weight: 1,
        })
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn num_symbols(&self) -> usize {
        self.rank.len()
    }

    pub fn rank(&self, f: SymbolId) -> u32 {
        self.rank[f.0 as usize]
    }

    pub fn weight(&self, f: SymbolId) -> u32 {
        self.weights.get(f.0 as usize).copied().unwrap_or(1)
    }

    /// Symbols from greatest to smallest.
    pub fn precedence(&self) -> Vec<SymbolId> {
        let mut v: Vec<SymbolId> = (0..self.rank.len() as u32).map(SymbolId).collect();
        v.sort_by_key(|s| std::cmp::Reverse(self.rank[s.0 as usize]));
        v
    }

    fn check_symbols(&self, t: &Term) -> Result<(), OrderingError> {
        let mut bad = None;
        t.for_each_symbol(&mut |s| {
            if s.0 as usize >= self.rank.len() {
                bad = Some(s.0);
            }
        });
        match bad {
            Some(s) => Err(OrderingError::UnknownSymbol(s)),
            None => Ok(()),
        }
    }

    /// Like [`compare`](Self::compare) but rejects symbols the precedence
    /// does not know about.
    pub fn try_compare(&self, s: &Term, t: &Term) -> Result<Comparison, OrderingError> {
        self.check_symbols(s)?;
        self.check_symbols(t)?;
        Ok(self.compare(s, t))
    }

    pub fn compare(&self, s: &Term, t: &Term) -> Comparison {
        if s == t {
            return Comparison::Equal;
        }
        if self.gt(s, t) {
            Comparison::Greater
        } else if s.is_ground() && t.is_ground() {
            // total on ground terms
            Comparison::Less
        } else if self.gt(t, s) {
            Comparison::Less
        } else {
            Comparison::Incomparable
        }
    }

    /// `s ≻ t`.
    pub fn gt(&self, s: &Term, t: &Term) -> bool {
        match self.kind {
            OrderingKind::Lpo => self.lpo_gt(s, t),
            OrderingKind::Kbo => self.kbo_gt(s, t),
        }
    }

    /// `s ⪰ t`.
    pub fn ge(&self, s: &Term, t: &Term) -> bool {
        s == t || self.gt(s, t)
    }

    fn lpo_gt(&self, s: &Term, t: &Term) -> bool {
        let f = match s.head() {
            Head::Var(_) => return false,
            Head::Sym(f) => f,
        };
        let g = match t.head() {
            Head::Var(x) => return s.contains_var(x),
            Head::Sym(g) => g,
        };
        if !t.is_ground() && t.vars().iter().any(|v| !s.contains_var(*v)) {
            return false;
        }
        if s.args().iter().any(|si| si == t || self.lpo_gt(si, t)) {
            return true;
        }
        let (rf, rg) = (self.rank[f.0 as usize], self.rank[g.0 as usize]);
        if rf > rg {
            t.args().iter().all(|tj| self.lpo_gt(s, tj))
        } else if f == g {
            let (sa, ta) = (s.args(), t.args());
            match sa.iter().zip(ta).position(|(a, b)| a != b) {
                None => false,
                Some(i) => {
                    self.lpo_gt(&sa[i], &ta[i]) && ta[i + 1..].iter().all(|tj| self.lpo_gt(s, tj))
                }
            }
        } else {
            false
        }
    }

    fn term_weight(&self, t: &Term) -> u64 {
        match t.head() {
            Head::Var(_) => self.var_weight as u64,
            Head::Sym(f) => {
                self.weights[f.0 as usize] as u64
                    + t.args().iter().map(|a| self.term_weight(a)).sum::<u64>()
            }
        }
    }

    fn kbo_gt(&self, s: &Term, t: &Term) -> bool {
        if s.is_var() {
            return false;
        }
        if let Some(x) = t.as_var() {
            return s.contains_var(x);
        }
        if !t.is_ground() && !var_counts_dominate(s, t) {
            return false;
        }
        let (ws, wt) = (self.term_weight(s), self.term_weight(t));
        if ws != wt {
            return ws > wt;
        }
        let (f, g) = (s.symbol().unwrap(), t.symbol().unwrap());
        if f != g {
            return self.rank[f.0 as usize] > self.rank[g.0 as usize];
        }
        match s.args().iter().zip(t.args()).position(|(a, b)| a != b) {
            None => false,
            Some(i) => self.kbo_gt(&s.args()[i], &t.args()[i]),
        }
    }

    /// Literal comparison by multiset extension.
    pub fn compare_literals(&self, a: &Literal, b: &Literal) -> Comparison {
        if a == b {
            return Comparison::Equal;
        }
        let ma = literal_multiset(a);
        let mb = literal_multiset(b);
        multiset_compare(&ma, &mb, |x, y| self.compare(x, y))
    }

    /// Clause comparison by multiset extension of the literal ordering.
    pub fn compare_clauses(&self, a: &[Literal], b: &[Literal]) -> Comparison {
        let ra: Vec<&Literal> = a.iter().collect();
        let rb: Vec<&Literal> = b.iter().collect();
        multiset_compare(&ra, &rb, |x, y| self.compare_literals(x, y))
    }
}

fn ranks(order: &[SymbolId]) -> Vec<u32> {
    let n = order.iter().map(|s| s.0 as usize + 1).max().unwrap_or(0);
    let mut rank = vec![0; n];
    for (i, s) in order.iter().enumerate() {
        rank[s.0 as usize] = (order.len() - i) as u32;
    }
    rank
}

fn count_var(t: &Term, v: Var) -> u32 {
    match t.head() {
        Head::Var(w) => (w == v) as u32,
        Head::Sym(_) => {
            if t.contains_var(v) {
                t.args().iter().map(|a| count_var(a, v)).sum()
            } else {
                0
            }
        }
    }
}

fn var_counts_dominate(s: &Term, t: &Term) -> bool {
    t.vars()
        .iter()
        .all(|&v| s.contains_var(v) && count_var(s, v) >= count_var(t, v))
}

fn literal_multiset(l: &Literal) -> Vec<&Term> {
    if l.positive {
        vec![&l.lhs, &l.rhs]
    } else {
        vec![&l.lhs, &l.lhs, &l.rhs, &l.rhs]
    }
}

/// Multiset extension (Dershowitz-Manna) of a partial order given by `cmp`.
pub fn multiset_compare<T: PartialEq>(
    m: &[T],
    n: &[T],
    cmp: impl Fn(&T, &T) -> Comparison,
) -> Comparison {
    let mut used_n = vec![false; n.len()];
    let mut rest_m: Vec<&T> = Vec::with_capacity(m.len());
    for x in m {
        match (0..n.len()).find(|&j| !used_n[j] && n[j] == *x) {
            Some(j) => used_n[j] = true,
            None => rest_m.push(x),
        }
    }
    let rest_n: Vec<&T> = n.iter().zip(&used_n).filter(|(_, u)| !**u).map(|(y, _)| y).collect();
    if rest_m.is_empty() && rest_n.is_empty() {
        return Comparison::Equal;
    }
    let mut table = vec![Comparison::Incomparable; rest_m.len() * rest_n.len()];
    for (i, x) in rest_m.iter().enumerate() {
        for (j, y) in rest_n.iter().enumerate() {
            table[i * rest_n.len() + j] = cmp(x, y);
        }
    }
    let at = |i: usize, j: usize| table[i * rest_n.len() + j];
    let m_greater = !rest_m.is_empty()
        && (0..rest_n.len()).all(|j| (0..rest_m.len()).any(|i| at(i, j) == Comparison::Greater));
    if m_greater {
        return Comparison::Greater;
    }
    let n_greater = !rest_n.is_empty()
        && (0..rest_m.len()).all(|i| (0..rest_n.len()).any(|j| at(i, j) == Comparison::Less));
    if n_greater {
        Comparison::Less
    } else {
        Comparison::Incomparable
    }
}
