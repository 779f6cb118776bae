//! Seeded random structures and formulas for property tests and the
//! command-line checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Formula, Term};
use crate::model::{all_tuples, Relation, Signature, Structure};

#[derive(Debug, Clone)]
pub struct FormulaParams {
    /// Nesting depth of connectives and quantifiers.
    pub max_depth: usize,
    /// Names available to quantifiers; reuse produces shadowing.
    pub bound_vars: Vec<String>,
    pub allow_equality: bool,
}

impl Default for FormulaParams {
    fn default() -> Self {
        FormulaParams {
            max_depth: 4,
            bound_vars: ["x", "y", "z", "w"].map(String::from).to_vec(),
            allow_equality: false,
        }
    }
}

/// Each tuple of each relation is present with probability `density`.
pub fn random_structure<R: Rng>(
    rng: &mut R,
    n: usize,
    signature: &Signature,
    density: f64,
) -> Structure {
    let mut b = Structure::new(n).expect("n >= 1");
    for (name, arity) in signature.iter() {
        let tuples = all_tuples(n, arity).filter(|_| rng.gen_bool(density));
        let rel = Relation::from_tuples(arity, tuples).expect("arity matches");
        b.add_relation(name, rel).expect("signature names are valid");
    }
    b
}

fn random_atom<R: Rng>(rng: &mut R, signature: &Signature, scope: &[String]) -> Formula {
    let rels: Vec<(&str, usize)> = signature.iter().collect();
    let &(name, arity) = rels.choose(rng).expect("non-empty signature");
    let args = (0..arity)
        .map(|_| Term::var(scope.choose(rng).expect("non-empty scope").as_str()))
        .collect();
    Formula::Atom {
        relation: name.to_string(),
        args,
    }
}

fn random_leaf<R: Rng>(
    rng: &mut R,
    signature: &Signature,
    scope: &[String],
    params: &FormulaParams,
) -> Formula {
    if scope.is_empty() {
        return Formula::True;
    }
    if params.allow_equality && rng.gen_bool(0.2) {
        let a = scope.choose(rng).expect("non-empty scope");
        let b = scope.choose(rng).expect("non-empty scope");
        return Formula::Eq(Term::var(a.as_str()), Term::var(b.as_str()));
    }
    random_atom(rng, signature, scope)
}

fn random_node<R: Rng>(
    rng: &mut R,
    signature: &Signature,
    scope: &mut Vec<String>,
    depth: usize,
    params: &FormulaParams,
) -> Formula {
    let must_bind = scope.is_empty() && depth > 0;
    if depth == 0 || (!must_bind && rng.gen_bool(0.25)) {
        return random_leaf(rng, signature, scope, params);
    }
    let choice = if must_bind { 2 } else { rng.gen_range(0..4) };
    match choice {
        0 | 1 => {
            let width = rng.gen_range(2..=3);
            let parts = (0..width)
                .map(|_| random_node(rng, signature, scope, depth - 1, params))
                .collect();
            if choice == 0 {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        _ => {
            let var = params.bound_vars.choose(rng).expect("bound variable pool").clone();
            scope.push(var.clone());
            let body = random_node(rng, signature, scope, depth - 1, params);
            scope.pop();
            if rng.gen_bool(0.5) {
                Formula::exists(&var, body)
            } else {
                Formula::forall(&var, body)
            }
        }
    }
}

/// A random formula with free variables among `free`, no constants and
/// equality only if `params.allow_equality`.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    signature: &Signature,
    free: &[String],
    params: &FormulaParams,
) -> Formula {
    let mut scope = free.to_vec();
    random_node(rng, signature, &mut scope, params.max_depth, params)
}

/// A prenex sentence: `prefix_len` quantifiers of random kind over
/// distinct variables `q0, q1, …`, and a random and/or tree over `atoms`
/// atoms mentioning them.
pub fn random_prenex_sentence<R: Rng>(
    rng: &mut R,
    signature: &Signature,
    prefix_len: usize,
    atoms: usize,
) -> Formula {
    assert!(prefix_len >= 1 && atoms >= 1);
    let vars: Vec<String> = (0..prefix_len).map(|i| format!("q{i}")).collect();
    let mut leaves: Vec<Formula> = (0..atoms)
        .map(|_| random_atom(rng, signature, &vars))
        .collect();
    while leaves.len() > 1 {
        let i = rng.gen_range(0..leaves.len() - 1);
        let a = leaves.remove(i);
        let b = leaves.remove(i);
        leaves.insert(
            i,
            if rng.gen_bool(0.5) {
                Formula::And(vec![a, b])
            } else {
                Formula::Or(vec![a, b])
            },
        );
    }
    let matrix = leaves.pop().expect("one leaf");
    vars.iter().rev().fold(matrix, |body, v| {
        if rng.gen_bool(0.5) {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_generation_is_reproducible() {
        let sig = Signature::new([("E", 2)]).unwrap();
        let gen = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let phi = random_formula(&mut rng, &sig, &[], &FormulaParams::default());
            let b = random_structure(&mut rng, 3, &sig, 0.5);
            (phi, b)
        };
        assert_eq!(gen(11), gen(11));
    }

    #[test]
    fn generated_shapes() {
        let sig = Signature::new([("E", 2), ("U", 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let phi = random_formula(&mut rng, &sig, &[], &FormulaParams::default());
            assert!(phi.is_sentence());
            assert!(!phi.uses_equality());
            let s = random_prenex_sentence(&mut rng, &sig, 4, 3);
            assert!(s.is_sentence());
            assert_eq!(s.quantifier_count(), 4);
        }
    }
}
