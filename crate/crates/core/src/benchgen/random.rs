//! Random ground literal sets over one theory, for differential and
//! property tests.

use rand::Rng;

use super::BenchError;
use crate::calculus::Literal;
use crate::terms::{Origin, SortId, Term};
use crate::theories::{Combination, Symbols, Theory};

/// Shape of a random literal set.
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub constants: usize,
    pub literals: usize,
    /// Maximal term depth.
    pub depth: u32,
    /// Probability that a literal is an equation.
    pub positive: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { constants: 5, literals: 5, depth: 2, positive: 0.6 }
    }
}

/// Sorts that get constants: the data sorts of the theory, or `U` with
/// free symbols `f/1` and `g/2` for plain equality.
fn data_sorts(comb: &mut Combination) -> Vec<SortId> {
    let sig = &mut comb.signature;
    match comb.presentations.first().map(|p| &p.symbols) {
        None | Some(Symbols::Equality) => {
            let u = sig.ensure_sort("U");
            sig.declare("f", &[u], u, Origin::Input).expect("fresh signature");
            sig.declare("g", &[u, u], u, Origin::Input).expect("fresh signature");
            vec![u]
        }
        Some(Symbols::Records { rec, fields }) => {
            let mut v = vec![*rec];
            for f in fields {
                if !v.contains(&f.sort) {
                    v.push(f.sort);
                }
            }
            v
        }
        Some(Symbols::Lists { sort, .. }) => vec![*sort],
        Some(Symbols::Arrays { array, index, elem, .. }) => {
            let mut v = vec![*array, *index];
            if elem != index {
                v.push(*elem);
            }
            v
        }
        Some(Symbols::Offsets { sort, .. }) => vec![*sort],
    }
}

/// A random literal set over `theory` with `spec.constants` constants
/// spread over its sorts (each sort gets at least one).
pub fn random_problem(theory: &Theory, spec: &RandomSpec, rng: &mut impl Rng) -> Result<(Combination, Vec<Literal>), BenchError> {
    let mut comb = Combination::new(std::slice::from_ref(theory))?;
    let sorts = data_sorts(&mut comb);
    let n = spec.constants.max(sorts.len());
    for i in 0..n {
        let s = sorts[i % sorts.len()];
        let name = format!("c{}", i + 1);
        comb.signature.declare_constant(&name, s).map_err(|e| BenchError::BadParameter(e.to_string()))?;
    }
    let lits = random_literals(&comb, &sorts, spec, rng);
    Ok((comb, lits))
}

/// Random literals whose sides have sorts from `sorts`.
pub fn random_literals(comb: &Combination, sorts: &[SortId], spec: &RandomSpec, rng: &mut impl Rng) -> Vec<Literal> {
    (0..spec.literals)
        .map(|_| {
            let s = sorts[rng.gen_range(0..sorts.len())];
            let l = random_term(comb, s, spec.depth, rng);
            let r = random_term(comb, s, spec.depth, rng);
            Literal::new(l, r, rng.gen_bool(spec.positive))
        })
        .collect()
}

/// A random well-sorted ground term of sort `sort` and depth at most
/// `depth`.
pub fn random_term(comb: &Combination, sort: SortId, depth: u32, rng: &mut impl Rng) -> Term {
    let sig = &comb.signature;
    let (consts, funs): (Vec<_>, Vec<_>) =
        sig.symbols().filter(|&f| sig.symbol(f).result == sort).partition(|&f| sig.symbol(f).arity() == 0);
    if depth == 0 || funs.is_empty() || rng.gen_bool(0.4) {
        let c = consts[rng.gen_range(0..consts.len())];
        return sig.constant(c);
    }
    let f = funs[rng.gen_range(0..funs.len())];
    let args = sig.symbol(f).args.clone();
    let args = args.into_iter().map(|a| random_term(comb, a, depth - 1, rng)).collect();
    sig.app(f, args).expect("well-sorted")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_sets_are_ground_and_sorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for tag in ["E", "R(2)", "L", "LSh", "A", "I", "I3", "I3'"] {
            let t = Theory::from_tag(tag).unwrap();
            let (comb, lits) = random_problem(&t, &RandomSpec::default(), &mut rng).unwrap();
            assert_eq!(lits.len(), 5);
            assert!(lits.iter().all(|l| l.is_ground() && l.lhs.sort() == l.rhs.sort()));
            assert!(lits.iter().all(|l| l.lhs.depth() <= 2 && l.rhs.depth() <= 2));
            assert!(comb.signature.symbols().count() > 0);
        }
    }
}
