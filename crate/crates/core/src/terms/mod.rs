//! Many-sorted signatures and shared first-order terms.
//!
//! Terms are immutable and reference counted. Every node caches its depth,
//! sort, symbol and variable occurrence counts, structural hash and the set of
//! variables it contains, so those queries are O(1).

mod flatten;
mod subst;

pub use flatten::{flatten, FlattenError, Flattened};
pub use subst::{match_term, match_with, unify, unify_with, Substitution};

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

/// Where a symbol came from. Flattening and skolem constants are ranked
/// below input symbols by the precedence schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Input,
    Flattening,
    Skolem,
}

impl Origin {
    pub fn name(self) -> &'static str {
        match self {
            Origin::Input => "input",
            Origin::Flattening => "flat",
            Origin::Skolem => "skolem",
        }
    }

    pub fn from_name(s: &str) -> Option<Origin> {
        match s {
            "input" => Some(Origin::Input),
            "flat" => Some(Origin::Flattening),
            "skolem" => Some(Origin::Skolem),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: String,
    pub args: Vec<SortId>,
    pub result: SortId,
    pub origin: Origin,
    /// Order of first appearance; used to break precedence ties.
    pub appearance: usize,
}

impl SymbolDecl {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("sort `{0}` declared twice")]
    DuplicateSort(String),
    #[error("symbol `{0}` declared twice with a different signature")]
    DuplicateSymbol(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{name}` expects {expected} arguments, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("argument {index} of `{name}` has sort {got}, expected {expected}")]
    SortMismatch {
        name: String,
        index: usize,
        expected: String,
        got: String,
    },
}

/// A many-sorted signature. Symbols are never removed, so `SymbolId`s stay
/// valid as the signature grows (fresh constants are appended).
#[derive(Clone, Debug, Default)]
pub struct Signature {
    sorts: Vec<String>,
    sort_index: HashMap<String, SortId>,
    /// Pairs (greater, smaller) constraining the sort ranking.
    sort_above: Vec<(SortId, SortId)>,
    symbols: Vec<SymbolDecl>,
    symbol_index: HashMap<String, SymbolId>,
    next_flat: usize,
    next_skolem: usize,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_sort(&mut self, name: &str) -> Result<SortId, SignatureError> {
        if self.sort_index.contains_key(name) {
            return Err(SignatureError::DuplicateSort(name.to_string()));
        }
        Ok(self.ensure_sort(name))
    }

    /// Returns the sort with this name, declaring it if needed.
    pub fn ensure_sort(&mut self, name: &str) -> SortId {
        if let Some(&s) = self.sort_index.get(name) {
            return s;
        }
        let id = SortId(self.sorts.len() as u16);
        self.sorts.push(name.to_string());
        self.sort_index.insert(name.to_string(), id);
        id
    }

    pub fn sort(&self, name: &str) -> Result<SortId, SignatureError> {
        self.sort_index
            .get(name)
            .copied()
            .ok_or_else(|| SignatureError::UnknownSort(name.to_string()))
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.0 as usize]
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len()).map(|i| SortId(i as u16))
    }

    pub fn num_sorts(&self) -> usize {
        self.sorts.len()
    }

    /// Requests that constants of sort `hi` be ranked above those of `lo`.
    pub fn require_sort_above(&mut self, hi: SortId, lo: SortId) {
        if hi != lo && !self.sort_above.contains(&(hi, lo)) {
            self.sort_above.push((hi, lo));
        }
    }

    pub fn sort_constraints(&self) -> &[(SortId, SortId)] {
        &self.sort_above
    }

    /// Sorts from greatest to smallest: a topological order of the
    /// `require_sort_above` constraints, declaration order breaking ties.
    /// Constraints closing a cycle are ignored.
    pub fn sort_ranking(&self) -> Vec<SortId> {
        let n = self.sorts.len();
        let mut indeg = vec![0usize; n];
        for &(_, lo) in &self.sort_above {
            indeg[lo.0 as usize] += 1;
        }
        let mut done = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&i| !done[i] && indeg[i] == 0)
                .unwrap_or_else(|| (0..n).find(|&i| !done[i]).unwrap());
            done[next] = true;
            out.push(SortId(next as u16));
            for &(hi, lo) in &self.sort_above {
                if hi.0 as usize == next && indeg[lo.0 as usize] > 0 {
                    indeg[lo.0 as usize] -= 1;
                }
            }
        }
        out
    }

    /// Declares a symbol. Redeclaring an identical symbol returns the
    /// existing id.
    pub fn declare(
        &mut self,
        name: &str,
        args: &[SortId],
        result: SortId,
        origin: Origin,
    ) -> Result<SymbolId, SignatureError> {
        if let Some(&id) = self.symbol_index.get(name) {
            let d = &self.symbols[id.0 as usize];
            if d.args == args && d.result == result {
                return Ok(id);
            }
            return Err(SignatureError::DuplicateSymbol(name.to_string()));
        }
        for s in args.iter().chain(std::iter::once(&result)) {
            if s.0 as usize >= self.sorts.len() {
                return Err(SignatureError::UnknownSort(format!("#{}", s.0)));
            }
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(SymbolDecl {
            name: name.to_string(),
            args: args.to_vec(),
            result,
            origin,
            appearance: self.symbols.len(),
        });
        self.symbol_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn declare_constant(&mut self, name: &str, sort: SortId) -> Result<SymbolId, SignatureError> {
        self.declare(name, &[], sort, Origin::Input)
    }

    /// Fresh constant named `_flatK` or `_skK` depending on the origin.
    pub fn fresh_constant(&mut self, sort: SortId, origin: Origin) -> SymbolId {
        loop {
            let name = match origin {
                Origin::Skolem => {
                    self.next_skolem += 1;
                    format!("_sk{}", self.next_skolem)
                }
                _ => {
                    self.next_flat += 1;
                    format!("_flat{}", self.next_flat)
                }
            };
            if !self.symbol_index.contains_key(&name) {
                let o = if origin == Origin::Input { Origin::Flattening } else { origin };
                return self.declare(&name, &[], sort, o).expect("fresh name");
            }
        }
    }

    pub fn symbol(&self, id: SymbolId) -> &SymbolDecl {
        &self.symbols[id.0 as usize]
    }

    pub fn get(&self, id: SymbolId) -> Option<&SymbolDecl> {
        self.symbols.get(id.0 as usize)
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.symbol_index.get(name).copied()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u32).map(SymbolId)
    }

    pub fn constants_of(&self, sort: SortId) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols()
            .filter(move |&s| self.symbol(s).args.is_empty() && self.symbol(s).result == sort)
    }

    /// Builds `sym(args)` after checking arity and argument sorts.
    pub fn app(&self, sym: SymbolId, args: Vec<Term>) -> Result<Term, SignatureError> {
        let d = self
            .get(sym)
            .ok_or_else(|| SignatureError::UnknownSymbol(format!("#{}", sym.0)))?;
        if d.args.len() != args.len() {
            return Err(SignatureError::Arity {
                name: d.name.clone(),
                expected: d.args.len(),
                got: args.len(),
            });
        }
        for (i, (a, s)) in args.iter().zip(&d.args).enumerate() {
            if a.sort() != *s {
                return Err(SignatureError::SortMismatch {
                    name: d.name.clone(),
                    index: i,
                    expected: self.sort_name(*s).to_string(),
                    got: self.sort_name(a.sort()).to_string(),
                });
            }
        }
        Ok(Term::app_unchecked(sym, d.result, args))
    }

    /// Builds a term by symbol name.
    pub fn term(&self, name: &str, args: Vec<Term>) -> Result<Term, SignatureError> {
        let sym = self
            .lookup(name)
            .ok_or_else(|| SignatureError::UnknownSymbol(name.to_string()))?;
        self.app(sym, args)
    }

    pub fn constant(&self, sym: SymbolId) -> Term {
        let d = self.symbol(sym);
        debug_assert!(d.args.is_empty());
        Term::app_unchecked(sym, d.result, Vec::new())
    }

    pub fn display<'a>(&'a self, t: &'a Term) -> TermDisplay<'a> {
        TermDisplay { sig: self, term: t }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub id: u32,
    pub sort: SortId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Var(Var),
    Sym(SymbolId),
}

struct Node {
    head: Head,
    args: Box<[Term]>,
    sort: SortId,
    depth: u32,
    symbol_count: u32,
    var_count: u32,
    hash: u64,
    vars: Box<[Var]>,
}

/// A shared, immutable term.
#[derive(Clone)]
pub struct Term(Arc<Node>);

fn mix(mut h: u64, v: u64) -> u64 {
    h ^= v.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h ^ (h >> 27)
}

impl Term {
    pub fn var(id: u32, sort: SortId) -> Term {
        let v = Var { id, sort };
        Term(Arc::new(Node {
            head: Head::Var(v),
            args: Box::new([]),
            sort,
            depth: 0,
            symbol_count: 0,
            var_count: 1,
            hash: mix(mix(1, id as u64), sort.0 as u64),
            vars: Box::new([v]),
        }))
    }

    pub fn from_var(v: Var) -> Term {
        Term::var(v.id, v.sort)
    }

    /// Builds an application without consulting a signature. Callers must
    /// pass the symbol's declared result sort.
    pub fn app_unchecked(sym: SymbolId, sort: SortId, args: Vec<Term>) -> Term {
        let mut depth = 0;
        let mut symbol_count = 1;
        let mut var_count = 0;
        let mut hash = mix(2, sym.0 as u64);
        let mut vars: Vec<Var> = Vec::new();
        for a in &args {
            depth = depth.max(a.depth() + 1);
            symbol_count += a.0.symbol_count;
            var_count += a.0.var_count;
            hash = mix(hash, a.0.hash);
            vars.extend_from_slice(&a.0.vars);
        }
        if vars.len() > 1 {
            vars.sort_unstable();
            vars.dedup();
        }
        Term(Arc::new(Node {
            head: Head::Sym(sym),
            args: args.into_boxed_slice(),
            sort,
            depth,
            symbol_count,
            var_count,
            hash,
            vars: vars.into_boxed_slice(),
        }))
    }

    /// Same head and sort, new arguments.
    pub fn with_args(&self, args: Vec<Term>) -> Term {
        match self.0.head {
            Head::Sym(s) => Term::app_unchecked(s, self.0.sort, args),
            Head::Var(_) => self.clone(),
        }
    }

    pub fn head(&self) -> Head {
        self.0.head
    }

    pub fn as_var(&self) -> Option<Var> {
        match self.0.head {
            Head::Var(v) => Some(v),
            Head::Sym(_) => None,
        }
    }

    pub fn symbol(&self) -> Option<SymbolId> {
        match self.0.head {
            Head::Sym(s) => Some(s),
            Head::Var(_) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self.0.head, Head::Var(_))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.0.head, Head::Sym(_)) && self.0.args.is_empty()
    }

    pub fn args(&self) -> &[Term] {
        &self.0.args
    }

    pub fn sort(&self) -> SortId {
        self.0.sort
    }

    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    pub fn is_ground(&self) -> bool {
        self.0.vars.is_empty()
    }

    /// Distinct variables, sorted.
    pub fn vars(&self) -> &[Var] {
        &self.0.vars
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.0.vars.binary_search(&v).is_ok()
    }

    pub fn symbol_count(&self) -> u32 {
        self.0.symbol_count
    }

    pub fn var_count(&self) -> u32 {
        self.0.var_count
    }

    pub fn size(&self) -> u32 {
        self.0.symbol_count + self.0.var_count
    }

    pub fn hash_value(&self) -> u64 {
        self.0.hash
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn max_var(&self) -> Option<u32> {
        self.0.vars.iter().map(|v| v.id).max()
    }

    pub fn subterm_at(&self, pos: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &i in pos {
            t = t.0.args.get(i)?;
        }
        Some(t)
    }

    /// Replaces the subterm at `pos` (which must exist).
    pub fn replace_at(&self, pos: &[usize], new: &Term) -> Term {
        match pos.split_first() {
            None => new.clone(),
            Some((&i, rest)) => {
                let mut args = self.0.args.to_vec();
                args[i] = args[i].replace_at(rest, new);
                self.with_args(args)
            }
        }
    }

    /// All positions of non-variable subterms, outermost first.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if self.is_var() {
            return;
        }
        out.push(path.clone());
        for (i, a) in self.0.args.iter().enumerate() {
            path.push(i);
            a.collect_positions(path, out);
            path.pop();
        }
    }

    /// True if `t` occurs in `self` (including `self == t`).
    pub fn contains(&self, t: &Term) -> bool {
        if self == t {
            return true;
        }
        if self.depth() <= t.depth() {
            return false;
        }
        self.0.args.iter().any(|a| a.contains(t))
    }

    /// Calls `f` on every symbol occurrence.
    pub fn for_each_symbol(&self, f: &mut impl FnMut(SymbolId)) {
        if let Head::Sym(s) = self.0.head {
            f(s);
        }
        for a in self.0.args.iter() {
            a.for_each_symbol(f);
        }
    }

    /// Calls `f` on every subterm, outermost first.
    pub fn for_each_subterm<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for a in self.0.args.iter() {
            a.for_each_subterm(f);
        }
    }

    /// Applies `f` to every variable.
    pub fn map_vars(&self, f: &impl Fn(Var) -> Term) -> Term {
        if self.is_ground() {
            return self.clone();
        }
        match self.0.head {
            Head::Var(v) => f(v),
            Head::Sym(_) => self.with_args(self.0.args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    pub fn shift_vars(&self, offset: u32) -> Term {
        if offset == 0 {
            return self.clone();
        }
        self.map_vars(&|v| Term::var(v.id + offset, v.sort))
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.hash == other.0.hash
            && self.0.head == other.0.head
            && self.0.sort == other.0.sort
            && self.0.args == other.0.args
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.head {
            Head::Var(v) => write!(f, "X{}", v.id),
            Head::Sym(s) => {
                write!(f, "f{}", s.0)?;
                if !self.0.args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in self.0.args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{:?}", a)?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

pub struct TermDisplay<'a> {
    sig: &'a Signature,
    term: &'a Term,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term.head() {
            Head::Var(v) => write!(f, "X{}", v.id),
            Head::Sym(s) => {
                match self.sig.get(s) {
                    Some(d) => write!(f, "{}", d.name)?,
                    None => write!(f, "f{}", s.0)?,
                }
                let args = self.term.args();
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", self.sig.display(a))?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrays() -> Signature {
        let mut sig = Signature::new();
        let a = sig.declare_sort("ARRAY").unwrap();
        let i = sig.declare_sort("INDEX").unwrap();
        let e = sig.declare_sort("ELEM").unwrap();
        sig.declare("store", &[a, i, e], a, Origin::Input).unwrap();
        sig.declare("select", &[a, i], e, Origin::Input).unwrap();
        sig.declare_constant("a", a).unwrap();
        sig.declare_constant("i", i).unwrap();
        sig.declare_constant("e", e).unwrap();
        sig
    }

    #[test]
    fn depth_and_ground() {
        let sig = arrays();
        let a = sig.term("a", vec![]).unwrap();
        let i = sig.term("i", vec![]).unwrap();
        let e = sig.term("e", vec![]).unwrap();
        let st = sig.term("store", vec![a.clone(), i.clone(), e]).unwrap();
        let sel = sig.term("select", vec![st.clone(), i.clone()]).unwrap();
        assert_eq!(a.depth(), 0);
        assert_eq!(st.depth(), 1);
        assert_eq!(sel.depth(), 2);
        assert!(sel.is_ground());
        let x = Term::var(0, sig.sort("INDEX").unwrap());
        let t = sig.term("select", vec![a, x]).unwrap();
        assert!(!t.is_ground());
        assert_eq!(t.vars().len(), 1);
    }

    #[test]
    fn sort_checking() {
        let sig = arrays();
        let a = sig.term("a", vec![]).unwrap();
        let err = sig.term("select", vec![a.clone(), a]).unwrap_err();
        assert!(matches!(err, SignatureError::SortMismatch { .. }));
    }

    #[test]
    fn structural_equality() {
        let sig = arrays();
        let t1 = sig.term("select", vec![sig.term("a", vec![]).unwrap(), sig.term("i", vec![]).unwrap()]).unwrap();
        let t2 = sig.term("select", vec![sig.term("a", vec![]).unwrap(), sig.term("i", vec![]).unwrap()]).unwrap();
        assert!(!t1.ptr_eq(&t2));
        assert_eq!(t1, t2);
        assert_eq!(t1.hash_value(), t2.hash_value());
        assert_eq!(sig.display(&t1).to_string(), "select(a,i)");
    }

    #[test]
    fn sort_ranking_respects_constraints() {
        let mut sig = Signature::new();
        let i = sig.declare_sort("INDEX").unwrap();
        let e = sig.declare_sort("ELEM").unwrap();
        let a = sig.declare_sort("ARRAY").unwrap();
        sig.require_sort_above(a, e);
        sig.require_sort_above(e, i);
        assert_eq!(sig.sort_ranking(), vec![a, e, i]);
    }

    #[test]
    fn fresh_names() {
        let mut sig = arrays();
        let s = sig.sort("INDEX").unwrap();
        let c = sig.fresh_constant(s, Origin::Flattening);
        let k = sig.fresh_constant(s, Origin::Skolem);
        assert_eq!(sig.symbol(c).name, "_flat1");
        assert_eq!(sig.symbol(k).name, "_sk1");
        assert_eq!(sig.symbol(k).origin, Origin::Skolem);
    }
}
