//! Theory presentations, reductions and problem construction.
//!
//! A [`Theory`] describes a presentation by name and sort parameters;
//! installing it into a [`Signature`] declares its symbols and yields a
//! [`Presentation`] that knows their ids.

mod audit;
mod problem;
mod reduce;

pub use audit::{classify_clause, clause_class_audit, cross_theory_violations, AuditReport};
pub use problem::{build_problem, Branch, BuildOptions, Combination, Problem, Solution};
pub use reduce::{a_reduce, i_reduce, r_reduce};

use std::fmt;

use thiserror::Error;

use crate::calculus::Literal;
use crate::orderings::Requirement;
use crate::terms::{Signature, SignatureError, SortId, SymbolId, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("function symbol `{0}` would be shared between theories")]
    SharedSymbol(String),
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("free symbol `{0}` takes an argument of an extensional sort")]
    UnsafeFreeSymbol(String),
    #[error("input literal #{0} is not ground")]
    NonGround(usize),
    #[error("offset theory needs a modulus of at least 1")]
    BadModulus,
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Ordering(#[from] crate::orderings::OrderingError),
}

/// A theory presentation, parameterised by the names of its sorts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theory {
    /// Equality with free symbols only.
    Equality,
    /// Records with fields `(name, sort)`; `extensional` adds
    /// extensionality (removed again by R-reduction).
    Records {
        sort: String,
        fields: Vec<(String, String)>,
        extensional: bool,
    },
    /// Lists: `car`, `cdr`, `cons`, plus `nil` and its axioms when `nil`
    /// is set; otherwise the shell presentation.
    Lists { sort: String, nil: bool },
    /// Arrays; `extensional` adds extensionality (removed by A-reduction).
    Arrays {
        array: String,
        index: String,
        elem: String,
        extensional: bool,
    },
    /// Integer offsets `s`, `p`. With a modulus `k`, offsets modulo `k`;
    /// `reduced` selects the presentation used after I-reduction (no
    /// `p`), otherwise the presentation with `p` and its dual axioms.
    Offsets {
        sort: String,
        modulus: Option<usize>,
        reduced: bool,
    },
}

impl Theory {
    pub fn records(n: usize, extensional: bool) -> Theory {
        Theory::Records {
            sort: "REC".into(),
            fields: (1..=n).map(|i| (i.to_string(), format!("T{i}"))).collect(),
            extensional,
        }
    }

    pub fn arrays(extensional: bool) -> Theory {
        Theory::Arrays {
            array: "ARRAY".into(),
            index: "INDEX".into(),
            elem: "ELEM".into(),
            extensional,
        }
    }

    pub fn lists(nil: bool) -> Theory {
        Theory::Lists { sort: "LIST".into(), nil }
    }

    pub fn offsets(sort: &str) -> Theory {
        Theory::Offsets { sort: sort.into(), modulus: None, reduced: true }
    }

    pub fn offsets_mod(sort: &str, k: usize, reduced: bool) -> Theory {
        Theory::Offsets { sort: sort.into(), modulus: Some(k), reduced }
    }

    /// Short name: `E`, `R(2)`, `Re(2)`, `L`, `LSh`, `A`, `Ae`, `I`, `I3`,
    /// `I3'`.
    pub fn tag(&self) -> String {
        match self {
            Theory::Equality => "E".into(),
            Theory::Records { fields, extensional, .. } => {
                format!("{}({})", if *extensional { "Re" } else { "R" }, fields.len())
            }
            Theory::Lists { nil: true, .. } => "L".into(),
            Theory::Lists { nil: false, .. } => "LSh".into(),
            Theory::Arrays { extensional, .. } => if *extensional { "Ae" } else { "A" }.into(),
            Theory::Offsets { modulus: None, .. } => "I".into(),
            Theory::Offsets { modulus: Some(k), reduced: true, .. } => format!("I{k}"),
            Theory::Offsets { modulus: Some(k), reduced: false, .. } => format!("I{k}'"),
        }
    }

    /// Parses a tag produced by [`tag`](Self::tag), with default sort
    /// names. `R` and `Re` without a field count mean two fields.
    pub fn from_tag(tag: &str) -> Result<Theory, TheoryError> {
        let bad = || TheoryError::UnknownTheory(tag.to_string());
        let t = tag.trim();
        let fields = |s: &str| -> Result<usize, TheoryError> {
            if s.is_empty() {
                return Ok(2);
            }
            s.strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.parse().ok())
                .filter(|n| *n > 0)
                .ok_or_else(bad)
        };
        Ok(match t {
            "E" => Theory::Equality,
            "L" => Theory::lists(true),
            "LSh" => Theory::lists(false),
            "A" => Theory::arrays(false),
            "Ae" => Theory::arrays(true),
            "I" => Theory::offsets("INT"),
            _ if t.starts_with("Re") => Theory::records(fields(&t[2..])?, true),
            _ if t.starts_with('R') => Theory::records(fields(&t[1..])?, false),
            _ if t.starts_with('I') => {
                let (num, reduced) = match t[1..].strip_suffix('\'') {
                    Some(n) => (n, false),
                    None => (&t[1..], true),
                };
                let k: usize = num.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(TheoryError::BadModulus);
                }
                Theory::offsets_mod("INT", k, reduced)
            }
            _ => return Err(bad()),
        })
    }
}

impl Theory {
    /// Tag followed by sort parameters, e.g. `R QUEUE i:ARRAY h:INDEX` or
    /// `A ARRAY INT INT`. Inverse of [`parse_spec`](Self::parse_spec).
    pub fn spec(&self) -> String {
        let tag = self.tag();
        match self {
            Theory::Equality => tag,
            Theory::Records { sort, fields, extensional } => {
                let head = if *extensional { "Re" } else { "R" };
                let fs: Vec<String> = fields.iter().map(|(n, s)| format!("{n}:{s}")).collect();
                format!("{head} {sort} {}", fs.join(" "))
            }
            Theory::Lists { sort, .. } => format!("{tag} {sort}"),
            Theory::Arrays { array, index, elem, .. } => format!("{tag} {array} {index} {elem}"),
            Theory::Offsets { sort, .. } => format!("{tag} {sort}"),
        }
    }

    /// Parses [`spec`](Self::spec) output; a bare tag uses default sorts.
    pub fn parse_spec(s: &str) -> Result<Theory, TheoryError> {
        let mut words = s.split_whitespace();
        let tag = words.next().ok_or_else(|| TheoryError::UnknownTheory(s.to_string()))?;
        let rest: Vec<&str> = words.collect();
        if rest.is_empty() {
            return Theory::from_tag(tag);
        }
        let bad = || TheoryError::UnknownTheory(s.to_string());
        let base = if tag == "R" || tag == "Re" {
            Theory::records(1, tag == "Re")
        } else {
            Theory::from_tag(tag)?
        };
        Ok(match base {
            Theory::Equality => return Err(bad()),
            Theory::Records { extensional, .. } => {
                let fields = rest[1..]
                    .iter()
                    .map(|f| f.split_once(':').map(|(n, s)| (n.to_string(), s.to_string())).ok_or_else(bad))
                    .collect::<Result<Vec<_>, _>>()?;
                if fields.is_empty() {
                    return Err(bad());
                }
                Theory::Records { sort: rest[0].into(), fields, extensional }
            }
            Theory::Lists { nil, .. } if rest.len() == 1 => Theory::Lists { sort: rest[0].into(), nil },
            Theory::Arrays { extensional, .. } if rest.len() == 3 => Theory::Arrays {
                array: rest[0].into(),
                index: rest[1].into(),
                elem: rest[2].into(),
                extensional,
            },
            Theory::Offsets { modulus, reduced, .. } if rest.len() == 1 => {
                Theory::Offsets { sort: rest[0].into(), modulus, reduced }
            }
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordField {
    pub name: String,
    pub sort: SortId,
    pub select: SymbolId,
    pub store: SymbolId,
}

/// Symbol ids of an installed theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbols {
    Equality,
    Records {
        rec: SortId,
        fields: Vec<RecordField>,
    },
    Lists {
        sort: SortId,
        car: SymbolId,
        cdr: SymbolId,
        cons: SymbolId,
        nil: Option<SymbolId>,
    },
    Arrays {
        array: SortId,
        index: SortId,
        elem: SortId,
        select: SymbolId,
        store: SymbolId,
    },
    Offsets {
        sort: SortId,
        succ: SymbolId,
        pred: SymbolId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub theory: Theory,
    pub symbols: Symbols,
}

fn own(sig: &mut Signature, name: &str, args: &[SortId], result: SortId) -> Result<SymbolId, TheoryError> {
    if sig.lookup(name).is_some() {
        return Err(TheoryError::SharedSymbol(name.to_string()));
    }
    Ok(sig.declare(name, args, result, crate::terms::Origin::Input)?)
}

/// Declares the sorts and symbols of `theory`. Fails if one of its
/// symbols is already declared, which is how sharing of function symbols
/// between theories is ruled out.
pub fn install(theory: &Theory, sig: &mut Signature) -> Result<Presentation, TheoryError> {
    let symbols = match theory {
        Theory::Equality => Symbols::Equality,
        Theory::Records { sort, fields, .. } => {
            let rec = sig.ensure_sort(sort);
            let mut fs = Vec::new();
            for (name, fsort) in fields {
                let s = sig.ensure_sort(fsort);
                let select = own(sig, &format!("rselect_{name}"), &[rec], s)?;
                let store = own(sig, &format!("rstore_{name}"), &[rec, s], rec)?;
                fs.push(RecordField { name: name.clone(), sort: s, select, store });
            }
            Symbols::Records { rec, fields: fs }
        }
        Theory::Lists { sort, nil } => {
            let s = sig.ensure_sort(sort);
            let cons = own(sig, "cons", &[s, s], s)?;
            let car = own(sig, "car", &[s], s)?;
            let cdr = own(sig, "cdr", &[s], s)?;
            let nil = if *nil { Some(own(sig, "nil", &[], s)?) } else { None };
            Symbols::Lists { sort: s, car, cdr, cons, nil }
        }
        Theory::Arrays { array, index, elem, .. } => {
            let a = sig.ensure_sort(array);
            let i = sig.ensure_sort(index);
            let e = sig.ensure_sort(elem);
            sig.require_sort_above(a, e);
            sig.require_sort_above(e, i);
            let store = own(sig, "store", &[a, i, e], a)?;
            let select = own(sig, "select", &[a, i], e)?;
            Symbols::Arrays { array: a, index: i, elem: e, select, store }
        }
        Theory::Offsets { sort, modulus, .. } => {
            if *modulus == Some(0) {
                return Err(TheoryError::BadModulus);
            }
            let s = sig.ensure_sort(sort);
            let succ = own(sig, "s", &[s], s)?;
            let pred = own(sig, "p", &[s], s)?;
            Symbols::Offsets { sort: s, succ, pred }
        }
    };
    Ok(Presentation { theory: theory.clone(), symbols })
}

/// `f^n(t)`.
pub fn iterate(f: SymbolId, sort: SortId, n: usize, t: Term) -> Term {
    (0..n).fold(t, |acc, _| Term::app_unchecked(f, sort, vec![acc]))
}

impl Presentation {
    /// Function symbols (and `nil`) owned by this theory.
    pub fn owned(&self) -> Vec<SymbolId> {
        match &self.symbols {
            Symbols::Equality => vec![],
            Symbols::Records { fields, .. } => fields.iter().flat_map(|f| [f.select, f.store]).collect(),
            Symbols::Lists { car, cdr, cons, nil, .. } => {
                let mut v = vec![*car, *cdr, *cons];
                v.extend(nil);
                v
            }
            Symbols::Arrays { select, store, .. } => vec![*select, *store],
            Symbols::Offsets { succ, pred, .. } => vec![*succ, *pred],
        }
    }

    pub fn is_extensional(&self) -> bool {
        matches!(
            self.theory,
            Theory::Records { extensional: true, .. } | Theory::Arrays { extensional: true, .. }
        )
    }

    /// Ordering requirements a good ordering must meet for this theory.
    pub fn requirements(&self) -> Vec<Requirement> {
        match (&self.theory, &self.symbols) {
            (_, Symbols::Equality) => vec![],
            (_, Symbols::Records { .. }) => vec![Requirement::CompoundAboveConstants],
            (_, Symbols::Lists { cons, nil, .. }) => {
                let mut v = vec![Requirement::CompoundAboveConstants];
                if let Some(n) = nil {
                    v.push(Requirement::ConsAboveNil { cons: *cons, nil: *n });
                }
                v
            }
            (_, Symbols::Arrays { array, index, elem, .. }) => {
                let mut sorts = vec![*array, *elem];
                if index != elem {
                    sorts.push(*index);
                }
                vec![Requirement::CompoundAboveConstants, Requirement::SortsDescending { sorts }]
            }
            (Theory::Offsets { modulus: Some(_), reduced: false, .. }, _) => {
                vec![Requirement::CompoundAboveConstants]
            }
            (_, Symbols::Offsets { succ, .. }) => vec![Requirement::SymbolAboveConstants { symbol: *succ }],
        }
    }

    /// Axioms used by the decision procedure: extensionality is left out
    /// (it is replaced by the reductions), and for offsets `ac_bound` is
    /// the `n` of `Ac(n)` (ignored when a modulus is set).
    pub fn axioms(&self, ac_bound: usize) -> Vec<Vec<Literal>> {
        let mut out = Vec::new();
        match &self.symbols {
            Symbols::Equality => {}
            Symbols::Records { rec, fields } => {
                let x = Term::var(0, *rec);
                for fi in fields {
                    let v = Term::var(1, fi.sort);
                    let st = Term::app_unchecked(fi.store, *rec, vec![x.clone(), v.clone()]);
                    out.push(vec![Literal::eq(Term::app_unchecked(fi.select, fi.sort, vec![st]), v)]);
                }
                for fi in fields {
                    for fj in fields {
                        if fi.name == fj.name {
                            continue;
                        }
                        let v = Term::var(1, fi.sort);
                        let st = Term::app_unchecked(fi.store, *rec, vec![x.clone(), v]);
                        out.push(vec![Literal::eq(
                            Term::app_unchecked(fj.select, fj.sort, vec![st]),
                            Term::app_unchecked(fj.select, fj.sort, vec![x.clone()]),
                        )]);
                    }
                }
            }
            Symbols::Lists { sort, car, cdr, cons, nil } => {
                let s = *sort;
                let x = Term::var(0, s);
                let y = Term::var(1, s);
                let app = |f: SymbolId, a: Vec<Term>| Term::app_unchecked(f, s, a);
                let cxy = app(*cons, vec![x.clone(), y.clone()]);
                out.push(vec![Literal::eq(app(*car, vec![cxy.clone()]), x.clone())]);
                out.push(vec![Literal::eq(app(*cdr, vec![cxy.clone()]), y.clone())]);
                let y0 = Term::var(0, s);
                let rebuilt = app(*cons, vec![app(*car, vec![y0.clone()]), app(*cdr, vec![y0.clone()])]);
                match nil {
                    None => out.push(vec![Literal::eq(rebuilt, y0)]),
                    Some(n) => {
                        let nil = Term::app_unchecked(*n, s, vec![]);
                        out.push(vec![Literal::neq(cxy, nil.clone())]);
                        out.push(vec![Literal::eq(rebuilt, y0.clone()), Literal::eq(y0, nil.clone())]);
                        out.push(vec![Literal::eq(app(*car, vec![nil.clone()]), nil.clone())]);
                        out.push(vec![Literal::eq(app(*cdr, vec![nil.clone()]), nil)]);
                    }
                }
            }
            Symbols::Arrays { array, index, elem, select, store } => {
                let x = Term::var(0, *array);
                let z = Term::var(1, *index);
                let v = Term::var(2, *elem);
                let w = Term::var(3, *index);
                let st = Term::app_unchecked(*store, *array, vec![x.clone(), z.clone(), v.clone()]);
                out.push(vec![Literal::eq(Term::app_unchecked(*select, *elem, vec![st.clone(), z.clone()]), v)]);
                out.push(vec![
                    Literal::eq(
                        Term::app_unchecked(*select, *elem, vec![st, w.clone()]),
                        Term::app_unchecked(*select, *elem, vec![x, w.clone()]),
                    ),
                    Literal::eq(z, w),
                ]);
            }
            Symbols::Offsets { sort, succ, pred } => {
                let s = *sort;
                let x = Term::var(0, s);
                let y = Term::var(1, s);
                let modulus = match self.theory {
                    Theory::Offsets { modulus, .. } => modulus,
                    _ => None,
                };
                let reduced = matches!(self.theory, Theory::Offsets { reduced: true, .. });
                if !reduced {
                    let sp = Term::app_unchecked(*succ, s, vec![Term::app_unchecked(*pred, s, vec![x.clone()])]);
                    let ps = Term::app_unchecked(*pred, s, vec![Term::app_unchecked(*succ, s, vec![x.clone()])]);
                    out.push(vec![Literal::eq(sp, x.clone())]);
                    out.push(vec![Literal::eq(ps, x.clone())]);
                }
                let bound = match modulus {
                    Some(k) => k - 1,
                    None => ac_bound,
                };
                for i in 1..=bound {
                    out.push(vec![Literal::neq(iterate(*succ, s, i, x.clone()), x.clone())]);
                }
                if let Some(k) = modulus {
                    out.push(vec![Literal::eq(iterate(*succ, s, k, x.clone()), x.clone())]);
                }
                // with a modulus, injectivity already follows from s^k(x) ≃ x,
                // and the clause would superpose with it into x ≄ s(y) ∨ s^(k-1)(x) ≃ y
                if reduced && modulus.is_none() {
                    out.push(vec![
                        Literal::neq(
                            Term::app_unchecked(*succ, s, vec![x.clone()]),
                            Term::app_unchecked(*succ, s, vec![y.clone()]),
                        ),
                        Literal::eq(x.clone(), y),
                    ]);
                } else if let (Some(k), false) = (modulus, reduced) {
                    for i in 1..k {
                        out.push(vec![Literal::neq(iterate(*pred, s, i, x.clone()), x.clone())]);
                    }
                    out.push(vec![Literal::eq(iterate(*pred, s, k, x.clone()), x)]);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axioms_of(tag: &str, n: usize) -> Vec<Vec<Literal>> {
        let mut sig = Signature::new();
        let p = install(&Theory::from_tag(tag).unwrap(), &mut sig).unwrap();
        p.axioms(n)
    }

    #[test]
    fn axiom_counts() {
        assert_eq!(axioms_of("L", 0).len(), 6);
        assert_eq!(axioms_of("LSh", 0).len(), 3);
        assert_eq!(axioms_of("A", 0).len(), 2);
        assert_eq!(axioms_of("Ae", 0).len(), 2);
        // r1 per field, r2 per ordered pair of distinct fields
        assert_eq!(axioms_of("R(3)", 0).len(), 3 + 6);
        // Ac(2), C(3)
        assert_eq!(axioms_of("I3", 0).len(), 2 + 1);
        // sp, ps, Ac(2), C(3) and the two dual families
        assert_eq!(axioms_of("I3'", 0).len(), 2 + 2 + 1 + 2 + 1);
        // Ac(4), inj
        assert_eq!(axioms_of("I", 4).len(), 5);
    }

    #[test]
    fn tags_round_trip() {
        for t in ["E", "R(2)", "Re(3)", "L", "LSh", "A", "Ae", "I", "I3", "I3'"] {
            assert_eq!(Theory::from_tag(t).unwrap().tag(), t);
        }
        assert!(Theory::from_tag("Q").is_err());
        assert_eq!(Theory::from_tag("I0").unwrap_err(), TheoryError::BadModulus);
        let queue = Theory::Records {
            sort: "QUEUE".into(),
            fields: vec![("i".into(), "ARRAY".into()), ("h".into(), "INDEX".into())],
            extensional: false,
        };
        for t in [queue, Theory::offsets_mod("INDEX", 3, false), Theory::arrays(true), Theory::Equality] {
            assert_eq!(Theory::parse_spec(&t.spec()).unwrap(), t);
        }
    }

    #[test]
    fn shared_function_symbols_rejected() {
        let mut sig = Signature::new();
        install(&Theory::arrays(false), &mut sig).unwrap();
        let err = install(&Theory::arrays(false), &mut sig).unwrap_err();
        assert_eq!(err, TheoryError::SharedSymbol("store".into()));
    }
}
