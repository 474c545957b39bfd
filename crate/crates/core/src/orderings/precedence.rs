//! Precedence schemes.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{OrderingError, TermOrdering};
use crate::calculus::Literal;
use crate::terms::{Origin, Signature, SymbolId};

/// How the precedence is derived from the signature and the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// KBO, weight `max(arity, 1)`; precedence by arity, then input
    /// symbols above introduced ones, rarer above frequent, earlier above
    /// later.
    StdKbo,
    /// LPO whose precedence refines the one above: constants are ranked by
    /// sort before anything else.
    GoodLpo,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::StdKbo => "std-kbo",
            Scheme::GoodLpo => "good-lpo",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "std-kbo" | "kbo" => Ok(Scheme::StdKbo),
            "good-lpo" | "lpo" => Ok(Scheme::GoodLpo),
            _ => Err(format!("unknown ordering `{s}` (expected good-lpo or std-kbo)")),
        }
    }
}

/// Builds the ordering for `scheme`. Symbol frequencies are counted over
/// `input`.
pub fn build_precedence<'a>(
    sig: &Signature,
    input: impl IntoIterator<Item = &'a Literal>,
    scheme: Scheme,
) -> Result<TermOrdering, OrderingError> {
    let mut freq: HashMap<SymbolId, usize> = HashMap::new();
    for l in input {
        for t in [&l.lhs, &l.rhs] {
            t.for_each_symbol(&mut |s| *freq.entry(s).or_default() += 1);
        }
    }
    let sort_rank: HashMap<_, _> = sig
        .sort_ranking()
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let mut syms: Vec<SymbolId> = sig.symbols().collect();
    syms.sort_by_key(|&s| {
        let d = sig.symbol(s);
        let sort_key = match scheme {
            Scheme::GoodLpo if d.arity() == 0 => sort_rank[&d.result],
            _ => 0,
        };
        (
            Reverse(d.arity()),
            sort_key,
            d.origin != Origin::Input,
            freq.get(&s).copied().unwrap_or(0),
            d.appearance,
        )
    });
    ordering_for(sig, &syms, scheme)
}

/// The ordering of `scheme` over an explicit precedence (greatest first),
/// which must list every symbol of `sig` once.
pub fn ordering_for(sig: &Signature, order: &[SymbolId], scheme: Scheme) -> Result<TermOrdering, OrderingError> {
    if order.len() != sig.num_symbols() {
        return Err(OrderingError::TableSize);
    }
    match scheme {
        Scheme::GoodLpo => Ok(TermOrdering::lpo(order)),
        Scheme::StdKbo => {
            let weights = sig
                .symbols()
                .map(|s| sig.symbol(s).arity().max(1) as u32)
                .collect();
            TermOrdering::kbo(order, weights)
        }
    }
}
