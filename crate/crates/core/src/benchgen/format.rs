//! Problem file formats.
//!
//! The native format holds the flattened negated instance as `cnf` unit
//! clauses, preceded by `%` header lines naming the theories, sorts,
//! non-theory symbols and the precedence. `tff` output is unflattened and
//! includes the theory axioms, for provers that know nothing of ours.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Expected, Instance};
use crate::calculus::{ClauseDisplay, Literal};
use crate::orderings::{ordering_for, Scheme, TermOrdering};
use crate::terms::{flatten, Origin, Signature, SignatureError, SortId, SymbolId, Term, Var};
use crate::theories::{build_problem, BuildOptions, Combination, Theory, TheoryError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// A parsed native problem file.
#[derive(Clone, Debug)]
pub struct ProblemFile {
    /// `key: value` header entries other than structural ones.
    pub meta: Vec<(String, String)>,
    pub combination: Combination,
    pub literals: Vec<Literal>,
    /// Scheme the recorded precedence was built with.
    pub scheme: Option<Scheme>,
    pub precedence: Option<Vec<String>>,
}

impl ProblemFile {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn name(&self) -> &str {
        self.meta("name").unwrap_or("problem")
    }

    pub fn expected(&self) -> Option<Expected> {
        match self.meta("expected")? {
            "valid" => Some(Expected::Valid),
            "invalid" => Some(Expected::Invalid),
            _ => None,
        }
    }

    /// The recorded precedence as an ordering over `sig`, if it was made
    /// for `scheme` and names every symbol of `sig`.
    pub fn recorded_ordering(&self, sig: &Signature, scheme: Scheme) -> Option<TermOrdering> {
        if self.scheme != Some(scheme) {
            return None;
        }
        let names = self.precedence.as_ref()?;
        let order: Option<Vec<SymbolId>> = names.iter().map(|n| sig.lookup(n)).collect();
        ordering_for(sig, &order?, scheme).ok()
    }
}

fn symbol_line(sig: &Signature, s: SymbolId) -> String {
    let d = sig.symbol(s);
    let args: Vec<&str> = d.args.iter().map(|&a| sig.sort_name(a)).collect();
    let ty = if args.is_empty() {
        sig.sort_name(d.result).to_string()
    } else {
        format!("{} > {}", args.join(" * "), sig.sort_name(d.result))
    };
    match d.origin {
        Origin::Input => format!("% symbol {}: {}\n", d.name, ty),
        o => format!("% symbol {}: {} {}\n", d.name, ty, o.name()),
    }
}

fn meta_lines(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% name: {}", inst.name());
    let _ = writeln!(out, "% family: {}", inst.family);
    let _ = writeln!(out, "% n: {}", inst.n);
    if let Some(k) = inst.k {
        let _ = writeln!(out, "% k: {k}");
    }
    if let Some(seed) = inst.seed {
        let _ = writeln!(out, "% seed: {seed}");
    }
    let _ = writeln!(out, "% expected: {}", inst.expected.name());
    out
}

/// Native format of the flattened negation of `inst`, with the precedence
/// `scheme` gives the reduced problem.
pub fn emit_native(inst: &Instance, scheme: Scheme) -> Result<String, TheoryError> {
    let mut comb = inst.combination.clone();
    let flat = flatten(&inst.negated(), &mut comb.signature).map_err(|e| match e {
        crate::terms::FlattenError::NonGround(i) => TheoryError::NonGround(i),
    })?;
    let problem = build_problem(&comb, &flat.literals, scheme, &BuildOptions::default())?;
    let sig = &comb.signature;
    let mut out = String::from("% spdecide problem v1\n");
    out.push_str(&meta_lines(inst));
    for p in &comb.presentations {
        let _ = writeln!(out, "% theory: {}", p.theory.spec());
    }
    for s in sig.sorts() {
        let _ = writeln!(out, "% sort {}", sig.sort_name(s));
    }
    for s in sig.symbols().filter(|&s| comb.owner(s).is_none()) {
        out.push_str(&symbol_line(sig, s));
    }
    let _ = writeln!(out, "% ordering: {scheme}");
    let names: Vec<&str> = problem
        .ordering
        .precedence()
        .into_iter()
        .map(|s| problem.signature.symbol(s).name.as_str())
        .collect();
    let _ = writeln!(out, "% precedence: {}", names.join(" "));
    for (i, l) in flat.literals.iter().enumerate() {
        let _ = writeln!(out, "cnf(c{}, hypothesis, {}).", i + 1, l.display(sig));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::Syntax { line: self.line, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), FormatError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> Result<String, FormatError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected identifier");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term, FormatError> {
        let name = self.ident()?;
        let mut args = Vec::new();
        if self.eat("(") {
            loop {
                args.push(self.term()?);
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        match self.sig.term(&name, args) {
            Ok(t) => Ok(t),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn literal(&mut self) -> Result<Literal, FormatError> {
        let l = self.term()?;
        let positive = if self.eat("!=") {
            false
        } else if self.eat("=") {
            true
        } else {
            return self.err("expected `=` or `!=`");
        };
        let r = self.term()?;
        if l.sort() != r.sort() {
            return self.err("sides of an equation have different sorts");
        }
        Ok(Literal::new(l, r, positive))
    }

    /// `cnf(name, role, lit | lit ...).`; only unit clauses are accepted.
    fn cnf(&mut self) -> Result<Literal, FormatError> {
        self.expect("cnf")?;
        self.expect("(")?;
        self.ident()?;
        self.expect(",")?;
        self.ident()?;
        self.expect(",")?;
        let lit = self.literal()?;
        if self.eat("|") {
            return self.err("problem files hold unit clauses only");
        }
        self.expect(")")?;
        self.expect(".")?;
        Ok(lit)
    }
}

fn parse_symbol(sig: &mut Signature, decl: &str, line: usize) -> Result<(), FormatError> {
    let bad = |msg: &str| FormatError::Syntax { line, msg: msg.to_string() };
    let (name, ty) = decl.split_once(':').ok_or_else(|| bad("symbol line needs `name: type`"))?;
    let mut words: Vec<&str> = ty.split_whitespace().collect();
    let origin = match words.last().and_then(|w| Origin::from_name(w)) {
        Some(o) => {
            words.pop();
            o
        }
        None => Origin::Input,
    };
    let sort = |sig: &Signature, w: &str| sig.sort(w).map_err(FormatError::from);
    let (args, result): (Vec<SortId>, SortId) = match words.iter().position(|w| *w == ">") {
        None if words.len() == 1 => (vec![], sort(sig, words[0])?),
        Some(gt) if gt + 2 == words.len() => {
            let args = words[..gt]
                .iter()
                .filter(|w| **w != "*")
                .map(|w| sort(sig, w))
                .collect::<Result<Vec<_>, _>>()?;
            (args, sort(sig, words[gt + 1])?)
        }
        _ => return Err(bad("malformed symbol type")),
    };
    sig.declare(name.trim(), &args, result, origin)?;
    Ok(())
}

/// Reads the native format.
pub fn parse_native(text: &str) -> Result<ProblemFile, FormatError> {
    let mut theories = Vec::new();
    let mut sorts = Vec::new();
    let mut symbols = Vec::new();
    let mut meta = Vec::new();
    let mut scheme = None;
    let mut precedence = None;
    let mut clauses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        let Some(h) = l.strip_prefix('%') else {
            clauses.push((line, l));
            continue;
        };
        let h = h.trim();
        if let Some(s) = h.strip_prefix("sort ") {
            sorts.push(s.trim().to_string());
        } else if let Some(s) = h.strip_prefix("symbol ") {
            symbols.push((line, s.trim().to_string()));
        } else if let Some((k, v)) = h.split_once(':') {
            let (k, v) = (k.trim(), v.trim());
            match k {
                "theory" => theories.push(Theory::parse_spec(v)?),
                "ordering" => {
                    scheme = Some(v.parse::<Scheme>().map_err(|msg| FormatError::Syntax { line, msg })?)
                }
                "precedence" => precedence = Some(v.split_whitespace().map(String::from).collect()),
                _ => meta.push((k.to_string(), v.to_string())),
            }
        }
    }
    let mut sig = Signature::new();
    for s in &sorts {
        sig.ensure_sort(s);
    }
    let mut combination = Combination::extend(sig, &theories)?;
    for (line, s) in &symbols {
        parse_symbol(&mut combination.signature, s, *line)?;
    }
    let mut literals = Vec::new();
    for (line, c) in clauses {
        let mut p = Parser { src: c.as_bytes(), pos: 0, line, sig: &combination.signature };
        literals.push(p.cnf()?);
        p.skip_ws();
        if p.pos != c.len() {
            return p.err("trailing input");
        }
    }
    Ok(ProblemFile { meta, combination, literals, scheme, precedence })
}

fn tff_sort(sig: &Signature, s: SortId) -> String {
    sig.sort_name(s).to_ascii_lowercase()
}

fn tff_clause(sig: &Signature, lits: &[Literal]) -> String {
    let mut vars: Vec<Var> = Vec::new();
    for l in lits {
        for v in l.lhs.vars().iter().chain(l.rhs.vars()) {
            if !vars.contains(v) {
                vars.push(*v);
            }
        }
    }
    let body = ClauseDisplay { sig, lits }.to_string();
    if vars.is_empty() {
        return body;
    }
    let binders: Vec<String> = vars.iter().map(|v| format!("X{}: {}", v.id, tff_sort(sig, v.sort))).collect();
    format!("! [{}] : ({})", binders.join(", "), body)
}

/// Typed first-order (TPTP `tff`) rendering of `inst`: type declarations,
/// the theory axioms, hypotheses and the goal as conjecture. Extensional
/// theories get their extensionality axiom; unbounded offsets get
/// acyclicity up to the bound the reduction would use.
pub fn emit_tff(inst: &Instance) -> String {
    let sig = inst.signature();
    let mut out = meta_lines(inst);
    for s in sig.sorts() {
        let _ = writeln!(out, "tff({0}_type, type, {0}: $tType).", tff_sort(sig, s));
    }
    for s in sig.symbols() {
        let d = sig.symbol(s);
        let res = tff_sort(sig, d.result);
        let ty = match d.args.len() {
            0 => res,
            1 => format!("{} > {}", tff_sort(sig, d.args[0]), res),
            _ => {
                let a: Vec<String> = d.args.iter().map(|&a| tff_sort(sig, a)).collect();
                format!("({}) > {}", a.join(" * "), res)
            }
        };
        let _ = writeln!(out, "tff({}_decl, type, {}: {}).", d.name, d.name, ty);
    }
    let ac = build_problem(&inst.combination, &inst.negated(), Scheme::GoodLpo, &BuildOptions::default())
        .ok()
        .and_then(|p| p.branches.iter().filter_map(|b| b.ac_bound).max())
        .unwrap_or(0);
    let mut ax = 0;
    for p in &inst.combination.presentations {
        let full = match &p.theory {
            Theory::Offsets { sort, modulus: Some(k), .. } => Theory::offsets_mod(sort, *k, false),
            Theory::Offsets { sort, modulus: None, .. } => Theory::Offsets { sort: sort.clone(), modulus: None, reduced: false },
            t => t.clone(),
        };
        let shown = crate::theories::Presentation { theory: full, symbols: p.symbols.clone() };
        for c in shown.axioms(ac) {
            ax += 1;
            let _ = writeln!(out, "tff(ax{ax}, axiom, {}).", tff_clause(sig, &c));
        }
        if let Some(f) = extensionality(sig, p) {
            ax += 1;
            let _ = writeln!(out, "tff(ax{ax}, axiom, {f}).");
        }
    }
    for (i, h) in inst.hypotheses.iter().enumerate() {
        let _ = writeln!(out, "tff(h{}, hypothesis, {}).", i + 1, h.display(sig));
    }
    let _ = writeln!(out, "tff(goal, conjecture, {}).", inst.goal.display(sig));
    out
}

fn extensionality(sig: &Signature, p: &crate::theories::Presentation) -> Option<String> {
    use crate::theories::Symbols;
    if !p.is_extensional() {
        return None;
    }
    match &p.symbols {
        Symbols::Arrays { array, index, select, .. } => {
            let (a, i) = (tff_sort(sig, *array), tff_sort(sig, *index));
            let sel = &sig.symbol(*select).name;
            Some(format!(
                "! [X: {a}, Y: {a}] : ((! [I: {i}] : {sel}(X,I) = {sel}(Y,I)) => X = Y)"
            ))
        }
        Symbols::Records { rec, fields } => {
            let r = tff_sort(sig, *rec);
            let eqs: Vec<String> = fields
                .iter()
                .map(|f| {
                    let n = &sig.symbol(f.select).name;
                    format!("{n}(X) = {n}(Y)")
                })
                .collect();
            Some(format!("! [X: {r}, Y: {r}] : (({}) => X = Y)", eqs.join(" & ")))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchgen::{gen_ios, gen_queue, gen_storecomm};

    #[test]
    fn native_round_trip() {
        for inst in [
            gen_storecomm(3, &[2, 3, 1], Expected::Valid).unwrap(),
            gen_queue(2).unwrap(),
            gen_ios(2).unwrap(),
        ] {
            let text = emit_native(&inst, Scheme::GoodLpo).unwrap();
            let pf = parse_native(&text).unwrap();
            assert_eq!(pf.name(), inst.name());
            assert_eq!(pf.expected(), Some(inst.expected));
            assert!(pf.literals.iter().all(|l| l.is_flat()));
            // re-emitting the parsed literals gives the same clause lines
            let lines: Vec<String> = pf
                .literals
                .iter()
                .enumerate()
                .map(|(i, l)| format!("cnf(c{}, hypothesis, {}).", i + 1, l.display(&pf.combination.signature)))
                .collect();
            let orig: Vec<&str> = text.lines().filter(|l| l.starts_with("cnf")).collect();
            assert_eq!(lines, orig);
            let p = build_problem(&pf.combination, &pf.literals, Scheme::GoodLpo, &BuildOptions::default()).unwrap();
            let ord = pf.recorded_ordering(&p.signature, Scheme::GoodLpo).expect("precedence covers the problem");
            assert_eq!(ord.precedence(), p.ordering.precedence());
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let text = "% theory: A\n% sort ARRAY\n% symbol a: ARRAY\ncnf(c1, hypothesis, a = nope).\n";
        match parse_native(text) {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tff_mentions_axioms_and_goal() {
        let inst = gen_storecomm(2, &[2, 1], Expected::Valid).unwrap();
        let t = emit_tff(&inst);
        assert!(t.contains("tff(store_decl, type, store: (array * index * elem) > array)."));
        assert!(t.contains("! [X: array, Y: array]"));
        assert!(t.contains("tff(goal, conjecture, store(store(a,i2,e2),i1,e1) = store(store(a,i1,e1),i2,e2))."));
    }
}
