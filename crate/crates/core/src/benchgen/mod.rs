//! Parametric benchmark families.
//!
//! Every instance is an implication from a conjunction of ground literals
//! to one equation, so its negation is a plain literal set.

mod format;
pub mod random;

pub use format::{emit_native, emit_tff, parse_native, FormatError, ProblemFile};
pub use random::{random_problem, RandomSpec};

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::calculus::Literal;
use crate::orderings::Scheme;
use crate::terms::{Signature, SortId, Term};
use crate::theories::{build_problem, BuildOptions, Combination, Presentation, Problem, Symbols, Theory, TheoryError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("selector is not a permutation of 1..{0}")]
    NotPermutation(usize),
    #[error("selector value {value} out of range 1..{n}")]
    OutOfRange { value: usize, n: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    StoreComm,
    StoreCommInvalid,
    Swap,
    SwapInvalid,
    StoreInv,
    StoreInvInvalid,
    Ios,
    Queue,
    CircularQueue,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::StoreComm,
        Family::StoreCommInvalid,
        Family::Swap,
        Family::SwapInvalid,
        Family::StoreInv,
        Family::StoreInvInvalid,
        Family::Ios,
        Family::Queue,
        Family::CircularQueue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::StoreComm => "storecomm",
            Family::StoreCommInvalid => "storecomm_invalid",
            Family::Swap => "swap",
            Family::SwapInvalid => "swap_invalid",
            Family::StoreInv => "storeinv",
            Family::StoreInvInvalid => "storeinv_invalid",
            Family::Ios => "ios",
            Family::Queue => "queue",
            Family::CircularQueue => "circular_queue",
        }
    }

    pub fn expected(self) -> Expected {
        match self {
            Family::StoreCommInvalid | Family::SwapInvalid | Family::StoreInvInvalid => Expected::Invalid,
            _ => Expected::Valid,
        }
    }

    /// Families with one formula per size.
    pub fn is_singleton(self) -> bool {
        !matches!(
            self,
            Family::StoreComm | Family::StoreCommInvalid | Family::Swap | Family::SwapInvalid
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().replace('_', "") == key)
            .ok_or_else(|| BenchError::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Valid,
    Invalid,
}

impl Expected {
    pub fn name(self) -> &'static str {
        match self {
            Expected::Valid => "valid",
            Expected::Invalid => "invalid",
        }
    }
}

/// Choice data that singles out one formula of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    None,
    /// STORECOMM: `p` as 1-based values, `p[k-1] = p(k)`.
    Perm(Vec<usize>),
    /// SWAP: subsets as membership flags, maps as 1-based values.
    Swap {
        c1: Vec<bool>,
        c2: Vec<bool>,
        p: Vec<usize>,
        q: Vec<usize>,
    },
}

/// One generated formula `hypotheses ⊃ goal`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub n: usize,
    /// Queue length for circular queues.
    pub k: Option<usize>,
    /// Position in its sample.
    pub index: usize,
    pub seed: Option<u64>,
    pub selector: Selector,
    pub expected: Expected,
    pub combination: Combination,
    pub hypotheses: Vec<Literal>,
    pub goal: Literal,
}

impl Instance {
    pub fn name(&self) -> String {
        match self.k {
            Some(k) => format!("{}_{}_{}_{}", self.family, self.n, k, self.index),
            None => format!("{}_{}_{}", self.family, self.n, self.index),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.combination.signature
    }

    /// Hypotheses plus the negated goal.
    pub fn negated(&self) -> Vec<Literal> {
        let mut v = self.hypotheses.clone();
        v.push(self.goal.negated());
        v
    }

    pub fn build(&self, scheme: Scheme, options: &BuildOptions) -> Result<Problem, TheoryError> {
        build_problem(&self.combination, &self.negated(), scheme, options)
    }
}

struct Ctx {
    comb: Combination,
}

impl Ctx {
    fn new(theories: &[Theory]) -> Result<Ctx, BenchError> {
        Ok(Ctx { comb: Combination::new(theories)? })
    }

    fn sort(&self, name: &str) -> SortId {
        self.comb.signature.sort(name).expect("sort installed by theory")
    }

    fn constant(&mut self, name: &str, sort: &str) -> Term {
        let s = self.sort(sort);
        let c = self.comb.signature.declare_constant(name, s).expect("fresh constant name");
        self.comb.signature.constant(c)
    }

    fn app(&self, f: &str, args: Vec<Term>) -> Term {
        self.comb.signature.term(f, args).expect("well-sorted benchmark term")
    }

    fn select(&self, a: &Term, i: &Term) -> Term {
        self.app("select", vec![a.clone(), i.clone()])
    }

    fn store(&self, a: &Term, i: &Term, e: &Term) -> Term {
        self.app("store", vec![a.clone(), i.clone(), e.clone()])
    }

    /// `store(store(a,i,select(a,j)),j,select(a,i))`
    fn swap(&self, a: &Term, i: &Term, j: &Term) -> Term {
        let inner = self.store(a, i, &self.select(a, j));
        self.store(&inner, j, &self.select(a, i))
    }

    fn iter(&self, f: &str, n: usize, t: Term) -> Term {
        (0..n).fold(t, |acc, _| self.app(f, vec![acc]))
    }

    fn finish(self, family: Family, n: usize, selector: Selector, hyps: Vec<Literal>, goal: Literal) -> Instance {
        Instance {
            family,
            n,
            k: None,
            index: 0,
            seed: None,
            selector,
            expected: family.expected(),
            combination: self.comb,
            hypotheses: hyps,
            goal,
        }
    }
}

fn check_map(values: &[usize], n: usize) -> Result<(), BenchError> {
    if values.len() != n {
        return Err(BenchError::BadParameter(format!("map has {} entries, expected {n}", values.len())));
    }
    match values.iter().find(|&&v| v == 0 || v > n) {
        Some(&value) => Err(BenchError::OutOfRange { value, n }),
        None => Ok(()),
    }
}

/// STORECOMM(n, p, ι) or, with `Expected::Invalid`, STORECOMM(n, p, ι′).
pub fn gen_storecomm(n: usize, p: &[usize], variant: Expected) -> Result<Instance, BenchError> {
    if n < 2 {
        return Err(BenchError::BadParameter("STORECOMM needs n >= 2".into()));
    }
    check_map(p, n)?;
    let mut sorted = p.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n).collect::<Vec<_>>() {
        return Err(BenchError::NotPermutation(n));
    }
    let mut cx = Ctx::new(&[Theory::arrays(true)])?;
    let a = cx.constant("a", "ARRAY");
    let is: Vec<Term> = (1..=n).map(|k| cx.constant(&format!("i{k}"), "INDEX")).collect();
    let es: Vec<Term> = (1..=n).map(|k| cx.constant(&format!("e{k}"), "ELEM")).collect();
    let t = |perm: &dyn Fn(usize) -> usize| {
        (1..=n).fold(a.clone(), |acc, k| cx.store(&acc, &is[perm(k) - 1], &es[perm(k) - 1]))
    };
    let lhs = t(&|k| p[k - 1]);
    let rhs = match variant {
        Expected::Valid => t(&|k| k),
        Expected::Invalid => t(&|k| if k == n { 1 } else { k }),
    };
    let mut hyps = Vec::new();
    for l in 0..n {
        for m in l + 1..n {
            hyps.push(Literal::neq(is[l].clone(), is[m].clone()));
        }
    }
    let family = match variant {
        Expected::Valid => Family::StoreComm,
        Expected::Invalid => Family::StoreCommInvalid,
    };
    Ok(cx.finish(family, n, Selector::Perm(p.to_vec()), hyps, Literal::eq(lhs, rhs)))
}

/// SWAP(n, c1, c2, p, q); the invalid variant uses `q′` on the right,
/// with `q′(1) = (q(1) mod n) + 1`.
pub fn gen_swap(
    n: usize,
    c1: &[bool],
    c2: &[bool],
    p: &[usize],
    q: &[usize],
    variant: Expected,
) -> Result<Instance, BenchError> {
    if n < 1 || (variant == Expected::Invalid && n < 2) {
        return Err(BenchError::BadParameter(format!("SWAP variant needs larger n, got {n}")));
    }
    check_map(p, n)?;
    check_map(q, n)?;
    if c1.len() != n || c2.len() != n {
        return Err(BenchError::BadParameter("subset flags must have n entries".into()));
    }
    let mut cx = Ctx::new(&[Theory::arrays(true)])?;
    let a = cx.constant("a", "ARRAY");
    let is: Vec<Term> = (1..=n).map(|k| cx.constant(&format!("i{k}"), "INDEX")).collect();
    let t = |c: &[bool], q: &[usize]| {
        (1..=n).fold(a.clone(), |acc, k| {
            let (pi, qi) = (&is[p[k - 1] - 1], &is[q[k - 1] - 1]);
            if c[k - 1] {
                cx.swap(&acc, pi, qi)
            } else {
                cx.swap(&acc, qi, pi)
            }
        })
    };
    let lhs = t(c1, q);
    let (rhs, family) = match variant {
        Expected::Valid => (t(c2, q), Family::Swap),
        Expected::Invalid => {
            let mut q2 = q.to_vec();
            q2[0] = q[0] % n + 1;
            (t(c2, &q2), Family::SwapInvalid)
        }
    };
    let sel = Selector::Swap { c1: c1.to_vec(), c2: c2.to_vec(), p: p.to_vec(), q: q.to_vec() };
    Ok(cx.finish(family, n, sel, vec![], Literal::eq(lhs, rhs)))
}

/// STOREINV(n): `multiswap(a,b,n) ⊃ a ≃ b`. The invalid variant (n ≥ 2)
/// stores at `i1` instead of `in` in the outermost left store.
pub fn gen_storeinv(n: usize, variant: Expected) -> Result<Instance, BenchError> {
    if variant == Expected::Invalid && n < 2 {
        return Err(BenchError::BadParameter("STOREINVINVALID needs n >= 2".into()));
    }
    let mut cx = Ctx::new(&[Theory::arrays(true)])?;
    let a = cx.constant("a", "ARRAY");
    let b = cx.constant("b", "ARRAY");
    let is: Vec<Term> = (1..=n).map(|k| cx.constant(&format!("i{k}"), "INDEX")).collect();
    let (mut ta, mut tb) = (a.clone(), b.clone());
    for i in is.iter().take(n.saturating_sub(1)) {
        let na = cx.store(&ta, i, &cx.select(&tb, i));
        let nb = cx.store(&tb, i, &cx.select(&ta, i));
        (ta, tb) = (na, nb);
    }
    let hyp = if n == 0 {
        Literal::eq(a.clone(), b.clone())
    } else {
        let last = &is[n - 1];
        let first = match variant {
            Expected::Valid => last,
            Expected::Invalid => &is[0],
        };
        Literal::eq(
            cx.store(&ta, first, &cx.select(&tb, last)),
            cx.store(&tb, last, &cx.select(&ta, last)),
        )
    };
    let family = match variant {
        Expected::Valid => Family::StoreInv,
        Expected::Invalid => Family::StoreInvInvalid,
    };
    Ok(cx.finish(family, n, Selector::None, vec![hyp], Literal::eq(a, b)))
}

/// IOS(n) with indices and elements in one sort `INT`; `i+k` is `s^k(i)`
/// and `x-k` is `p^k(x)`.
pub fn gen_ios(n: usize) -> Result<Instance, BenchError> {
    if n < 1 {
        return Err(BenchError::BadParameter("IOS needs n >= 1".into()));
    }
    let arrays = Theory::Arrays {
        array: "ARRAY".into(),
        index: "INT".into(),
        elem: "INT".into(),
        extensional: false,
    };
    let mut cx = Ctx::new(&[arrays, Theory::offsets("INT")])?;
    let a = cx.constant("a", "ARRAY");
    let i = cx.constant("i", "INT");
    let ai = cx.select(&a, &i);
    let ain = cx.select(&a, &cx.iter("s", n, i.clone()));
    let (mut l, mut r) = (a.clone(), a.clone());
    for k in 1..=n {
        l = cx.store(&l, &cx.iter("s", k, i.clone()), &cx.iter("s", k, ai.clone()));
        r = cx.store(&r, &cx.iter("s", n - k, i.clone()), &cx.iter("p", k, ain.clone()));
    }
    let goal = Literal::eq(ain.clone(), cx.iter("s", n, ai));
    Ok(cx.finish(Family::Ios, n, Selector::None, vec![Literal::eq(l, r)], goal))
}

fn queue_theories(offsets: Theory) -> Vec<Theory> {
    let rec = Theory::Records {
        sort: "QUEUE".into(),
        fields: vec![
            ("i".into(), "ARRAY".into()),
            ("h".into(), "INDEX".into()),
            ("t".into(), "INDEX".into()),
        ],
        extensional: false,
    };
    vec![rec, Theory::arrays(false), offsets]
}

impl Ctx {
    fn enqueue(&self, v: &Term, x: &Term) -> Term {
        let items = self.app("rselect_i", vec![x.clone()]);
        let tail = self.app("rselect_t", vec![x.clone()]);
        let stored = self.app("rstore_i", vec![x.clone(), self.store(&items, &tail, v)]);
        self.app("rstore_t", vec![stored, self.app("s", vec![tail])])
    }

    fn dequeue(&self, x: &Term) -> Term {
        let head = self.app("rselect_h", vec![x.clone()]);
        self.app("rstore_h", vec![x.clone(), self.app("s", vec![head])])
    }

    fn first(&self, x: &Term) -> Term {
        let items = self.app("rselect_i", vec![x.clone()]);
        self.select(&items, &self.app("rselect_h", vec![x.clone()]))
    }

    fn last(&self, x: &Term) -> Term {
        let items = self.app("rselect_i", vec![x.clone()]);
        let tail = self.app("rselect_t", vec![x.clone()]);
        self.select(&items, &self.app("p", vec![tail]))
    }

    fn reset(&self, x: &Term) -> Term {
        self.app("rstore_h", vec![x.clone(), self.app("rselect_t", vec![x.clone()])])
    }
}

/// QUEUE(n): `n` enqueues, the `i`-th followed by a dequeue when `3 | i`;
/// the goal names `e_m` with `m = ⌊n/3⌋`, the number of dequeues.
pub fn gen_queue(n: usize) -> Result<Instance, BenchError> {
    if n < 1 {
        return Err(BenchError::BadParameter("QUEUE needs n >= 1".into()));
    }
    let mut cx = Ctx::new(&queue_theories(Theory::offsets("INDEX")))?;
    let q = cx.constant("q", "QUEUE");
    let qs: Vec<Term> = (0..=n).map(|i| cx.constant(&format!("q{i}"), "QUEUE")).collect();
    let es: Vec<Term> = (0..n).map(|i| cx.constant(&format!("e{i}"), "ELEM")).collect();
    let mut hyps = vec![Literal::eq(qs[0].clone(), cx.reset(&q))];
    for i in 0..n {
        let enq = cx.enqueue(&es[i], &qs[i]);
        let f = if (i + 1) % 3 == 0 { cx.dequeue(&enq) } else { enq };
        hyps.push(Literal::eq(qs[i + 1].clone(), f));
    }
    let m = n / 3;
    let goal = Literal::eq(cx.first(&qs[n]), es[m].clone());
    Ok(cx.finish(Family::Queue, n, Selector::None, hyps, goal))
}

/// CIRCULARQUEUE(n, k): `n+1` enqueues into a queue of length `k` with
/// `k | n`; the last element overwrites the first.
pub fn gen_circularqueue(n: usize, k: usize) -> Result<Instance, BenchError> {
    if n == 0 || k == 0 || n % k != 0 {
        return Err(BenchError::BadParameter(format!("CIRCULARQUEUE needs n > 0 and k | n, got n={n}, k={k}")));
    }
    let mut cx = Ctx::new(&queue_theories(Theory::offsets_mod("INDEX", k, true)))?;
    let q = cx.constant("q", "QUEUE");
    let qs: Vec<Term> = (0..=n + 1).map(|i| cx.constant(&format!("q{i}"), "QUEUE")).collect();
    let es: Vec<Term> = (0..=n).map(|i| cx.constant(&format!("e{i}"), "ELEM")).collect();
    let mut hyps = vec![Literal::eq(qs[0].clone(), cx.reset(&q))];
    for i in 0..=n {
        hyps.push(Literal::eq(qs[i + 1].clone(), cx.enqueue(&es[i], &qs[i])));
    }
    let goal = Literal::eq(cx.first(&qs[n + 1]), cx.last(&qs[n + 1]));
    let mut inst = cx.finish(Family::CircularQueue, n, Selector::None, hyps, goal);
    inst.k = Some(k);
    Ok(inst)
}

fn family_seed(seed: u64, family: Family, n: usize) -> u64 {
    // splitmix-style mixing keeps nearby (family, n) streams apart
    let mut z = seed ^ ((family as u64) << 56) ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `count` instances of `family` at size `n`. Singleton families
/// give one instance. `k` is the circular queue length (default 3).
pub fn sample(family: Family, n: usize, k: Option<usize>, count: usize, seed: u64) -> Result<Vec<Instance>, BenchError> {
    if count == 0 {
        return Err(BenchError::BadParameter("count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(family_seed(seed, family, n));
    let count = if family.is_singleton() { 1 } else { count };
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let mut inst = match family {
            Family::StoreComm | Family::StoreCommInvalid => {
                let mut p: Vec<usize> = (1..=n).collect();
                p.shuffle(&mut rng);
                gen_storecomm(n, &p, family.expected())?
            }
            Family::Swap | Family::SwapInvalid => {
                let c1: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
                let c2: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
                let p: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=n.max(1))).collect();
                let q: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=n.max(1))).collect();
                gen_swap(n, &c1, &c2, &p, &q, family.expected())?
            }
            Family::StoreInv | Family::StoreInvInvalid => gen_storeinv(n, family.expected())?,
            Family::Ios => gen_ios(n)?,
            Family::Queue => gen_queue(n)?,
            Family::CircularQueue => gen_circularqueue(n, k.unwrap_or(3))?,
        };
        inst.index = index;
        inst.seed = Some(seed);
        out.push(inst);
    }
    Ok(out)
}

/// `store(store(x,z,select(x,w)),w,select(x,z)) ≃
/// store(store(x,w,select(x,z)),z,select(x,w))` over the arrays of
/// `pres`, or `None` if `pres` is not an array theory.
pub fn lemma_store_comm(pres: &Presentation) -> Option<Vec<Literal>> {
    let Symbols::Arrays { array, index, elem, select, store } = pres.symbols else {
        return None;
    };
    let x = Term::var(0, array);
    let z = Term::var(1, index);
    let w = Term::var(2, index);
    let sel = |a: &Term, i: &Term| Term::app_unchecked(select, elem, vec![a.clone(), i.clone()]);
    let st = |a: Term, i: &Term, e: Term| Term::app_unchecked(store, array, vec![a, i.clone(), e]);
    let lhs = st(st(x.clone(), &z, sel(&x, &w)), &w, sel(&x, &z));
    let rhs = st(st(x.clone(), &w, sel(&x, &z)), &z, sel(&x, &w));
    Some(vec![Literal::eq(lhs, rhs)])
}

/// The store-commutativity lemma for the first array theory of `comb`.
pub fn lemma_for(comb: &Combination) -> Option<Vec<Literal>> {
    comb.presentations.iter().find_map(lemma_store_comm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(inst: &Instance, t: &Term) -> String {
        inst.signature().display(t).to_string()
    }

    #[test]
    fn storecomm_example() {
        let inst = gen_storecomm(3, &[3, 1, 2], Expected::Valid).unwrap();
        assert_eq!(show(&inst, &inst.goal.lhs), "store(store(store(a,i3,e3),i1,e1),i2,e2)");
        assert_eq!(show(&inst, &inst.goal.rhs), "store(store(store(a,i1,e1),i2,e2),i3,e3)");
        assert_eq!(inst.hypotheses.len(), 3);
        let inv = gen_storecomm(3, &[3, 1, 2], Expected::Invalid).unwrap();
        assert_eq!(show(&inv, &inv.goal.rhs), "store(store(store(a,i1,e1),i2,e2),i1,e1)");
        assert!(matches!(gen_storecomm(3, &[1, 1, 2], Expected::Valid), Err(BenchError::NotPermutation(3))));
    }

    #[test]
    fn swap_example() {
        let c1 = [true, false, false];
        let c2 = [false, true, true];
        let inst = gen_swap(3, &c1, &c2, &[1, 2, 3], &[2, 2, 2], Expected::Valid).unwrap();
        let expect = |inst: &Instance, pairs: [(usize, usize); 3]| {
            let sig = inst.signature();
            let i = |k: usize| sig.constant(sig.lookup(&format!("i{k}")).unwrap());
            let mut t = sig.constant(sig.lookup("a").unwrap());
            for (x, y) in pairs {
                let inner = sig.term("store", vec![t.clone(), i(x), sig.term("select", vec![t.clone(), i(y)]).unwrap()]).unwrap();
                t = sig.term("store", vec![inner, i(y), sig.term("select", vec![t.clone(), i(x)]).unwrap()]).unwrap();
            }
            t
        };
        assert_eq!(inst.goal.lhs, expect(&inst, [(1, 2), (2, 2), (2, 3)]));
        assert_eq!(inst.goal.rhs, expect(&inst, [(2, 1), (2, 2), (3, 2)]));
        let inv = gen_swap(3, &c1, &c2, &[1, 2, 3], &[2, 2, 2], Expected::Invalid).unwrap();
        assert_eq!(inv.goal.rhs, expect(&inv, [(3, 1), (2, 2), (3, 2)]));
        assert!(gen_swap(1, &[true], &[true], &[1], &[1], Expected::Invalid).is_err());
    }

    #[test]
    fn storeinv_example() {
        let inst = gen_storeinv(2, Expected::Valid).unwrap();
        let h = &inst.hypotheses[0];
        assert_eq!(
            show(&inst, &h.lhs),
            "store(store(a,i1,select(b,i1)),i2,select(store(b,i1,select(a,i1)),i2))"
        );
        let zero = gen_storeinv(0, Expected::Valid).unwrap();
        assert_eq!(zero.hypotheses, vec![zero.goal.clone()]);
    }

    #[test]
    fn ios_example() {
        let inst = gen_ios(2).unwrap();
        let h = &inst.hypotheses[0];
        assert_eq!(show(&inst, &h.lhs), "store(store(a,s(i),s(select(a,i))),s(s(i)),s(s(select(a,i))))");
        assert_eq!(
            show(&inst, &h.rhs),
            "store(store(a,s(i),p(select(a,s(s(i))))),i,p(p(select(a,s(s(i))))))"
        );
        assert_eq!(show(&inst, &inst.goal.rhs), "s(s(select(a,i)))");
    }

    #[test]
    fn queue_examples() {
        let inst = gen_queue(1).unwrap();
        assert_eq!(show(&inst, &inst.hypotheses[0].rhs), "rstore_h(q,rselect_t(q))");
        assert_eq!(
            show(&inst, &inst.hypotheses[1].rhs),
            "rstore_t(rstore_i(q0,store(rselect_i(q0),rselect_t(q0),e0)),s(rselect_t(q0)))"
        );
        assert_eq!(show(&inst, &inst.goal.lhs), "select(rselect_i(q1),rselect_h(q1))");
        assert_eq!(show(&inst, &inst.goal.rhs), "e0");
        let q3 = gen_queue(3).unwrap();
        assert!(show(&q3, &q3.hypotheses[3].rhs).starts_with("rstore_h(rstore_t("));
        assert_eq!(show(&q3, &q3.goal.rhs), "e1");
        let c = gen_circularqueue(1, 1).unwrap();
        assert_eq!(c.hypotheses.len(), 3);
        assert_eq!(show(&c, &c.goal.rhs), "select(rselect_i(q2),p(rselect_t(q2)))");
        assert!(gen_circularqueue(4, 3).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample(Family::StoreComm, 5, None, 9, 42).unwrap();
        let b = sample(Family::StoreComm, 5, None, 9, 42).unwrap();
        assert_eq!(a.len(), 9);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.selector, y.selector);
            assert_eq!(x.goal, y.goal);
        }
        assert_eq!(sample(Family::Ios, 3, None, 9, 1).unwrap().len(), 1);
        let s = sample(Family::Swap, 4, None, 9, 7).unwrap();
        let distinct: std::collections::HashSet<String> = s.iter().map(|i| format!("{:?}", i.selector)).collect();
        // 2^8 * 4^8 selector tuples: a collision among 9 draws is very unlikely
        assert_eq!(distinct.len(), 9);
    }

    #[test]
    fn family_names_parse() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("STORECOMMINVALID".parse::<Family>().unwrap(), Family::StoreCommInvalid);
        assert_eq!("circular-queue".parse::<Family>().unwrap(), Family::CircularQueue);
    }
}
