//! Witness formulas for the Galois connection between relations and shes.
//!
//! All of them have free variables `u1, …, uk`, see [`theta_variables`].
//! They mention each element through a variable `v1, …, vn` standing for it
//! and so grow quickly with the domain size; the builders refuse domains
//! larger than [`THETA_CAP`].

use super::{Formula, LogicError, Term};
use crate::model::{all_tuples, positive_facts, Element, Relation, Structure};

/// Largest domain for which witness formulas are built (`4⁴ = 256`
/// disjuncts per tuple formula).
pub const THETA_CAP: usize = 4;

/// `u1, …, uk`.
pub fn theta_variables(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("u{i}")).collect()
}

fn numbered(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

fn check(structure: &Structure, tuple: &[Element]) -> Result<(), LogicError> {
    let n = structure.domain_size();
    if n > THETA_CAP {
        return Err(LogicError::TooLarge { n, cap: THETA_CAP });
    }
    match tuple.iter().find(|&&x| x >= n) {
        Some(&element) => Err(LogicError::TupleOutOfDomain {
            element,
            domain_size: n,
        }),
        None => Ok(()),
    }
}

/// A formula with equality whose extension is the automorphism orbit of
/// `tuple`: the elements are named by `v1, …, vn` satisfying all positive
/// facts of the structure, exhausting the domain, and `ui` is the name of
/// `tuple[i]`.
pub fn theta_tuple_eq(structure: &Structure, tuple: &[Element]) -> Result<Formula, LogicError> {
    check(structure, tuple)?;
    let n = structure.domain_size();
    let us = theta_variables(tuple.len());
    let vs = numbered("v", n);
    let elements: Vec<Element> = (0..n).collect();
    let facts = positive_facts(structure, &elements, &vs);
    let covering = Formula::or(
        vs.iter()
            .map(|v| Formula::Eq(Term::var("w"), Term::var(v.as_str())))
            .collect(),
    )
    .expect("domain is non-empty");
    let mut parts: Vec<Formula> = facts.conjuncts().into_iter().cloned().collect();
    parts.push(Formula::forall("w", covering));
    for (u, &x) in us.iter().zip(tuple) {
        parts.push(Formula::Eq(Term::var(u.as_str()), Term::var(vs[x].as_str())));
    }
    Ok(Formula::exists_all(&vs, Formula::and(parts)))
}

/// An equality-free formula satisfied by `r′` iff some she maps each
/// `tuple[i]` to `r′[i]`.
///
/// It says there are images `v1, …, vn` of the elements with the positive
/// facts of `(tuple, elements)`, and that every tuple `w` of elements has
/// preimages `t` with the positive facts of `(tuple, elements, t)`. The
/// disjunction runs over `t ∈ B^n` in lexicographic order.
pub fn theta_tuple(structure: &Structure, tuple: &[Element]) -> Result<Formula, LogicError> {
    check(structure, tuple)?;
    let n = structure.domain_size();
    let us = theta_variables(tuple.len());
    let vs = numbered("v", n);
    let ws = numbered("w", n);

    let mut rs_vars = us.clone();
    rs_vars.extend(vs.iter().cloned());
    let mut rs: Vec<Element> = tuple.to_vec();
    rs.extend(0..n);
    let head = positive_facts(structure, &rs, &rs_vars);

    let mut all_vars = rs_vars;
    all_vars.extend(ws.iter().cloned());
    let disjuncts = all_tuples(n, n)
        .map(|t| {
            let mut rst = rs.clone();
            rst.extend(t);
            positive_facts(structure, &rst, &all_vars)
        })
        .collect();
    let cover = Formula::or(disjuncts).expect("B^n is non-empty");

    let mut parts: Vec<Formula> = head.conjuncts().into_iter().cloned().collect();
    parts.push(Formula::forall_all(&ws, cover));
    Ok(Formula::exists_all(&vs, Formula::and(parts)))
}

/// The disjunction of [`theta_tuple`] over the tuples of `relation`. Its
/// extension is `relation` whenever `relation` is preserved by every she.
pub fn theta_relation(structure: &Structure, relation: &Relation) -> Result<Formula, LogicError> {
    if relation.is_empty() {
        return Err(LogicError::EmptyRelation);
    }
    let parts = relation
        .tuples()
        .iter()
        .map(|t| theta_tuple(structure, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Formula::or(parts).expect("relation is non-empty"))
}
