use std::collections::BTreeSet;
use std::fmt;

use super::{Formula, Term};
use crate::model::Element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantifierEntry {
    pub kind: Quantifier,
    pub var: String,
    pub restriction: Option<Vec<Element>>,
}

/// A quantifier prefix over a quantifier-free matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrenexFormula {
    pub prefix: Vec<QuantifierEntry>,
    pub matrix: Formula,
}

impl PrenexFormula {
    pub fn to_formula(&self) -> Formula {
        self.prefix.iter().rev().fold(self.matrix.clone(), |body, q| {
            let body = Box::new(body);
            let var = q.var.clone();
            let restriction = q.restriction.clone();
            match q.kind {
                Quantifier::Exists => Formula::Exists {
                    var,
                    restriction,
                    body,
                },
                Quantifier::Forall => Formula::Forall {
                    var,
                    restriction,
                    body,
                },
            }
        })
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        self.to_formula().free_variables()
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn count(&self, kind: Quantifier) -> usize {
        self.prefix.iter().filter(|q| q.kind == kind).count()
    }
}

impl fmt::Display for PrenexFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// An equivalent prenex formula.
///
/// A formula already in prenex form with distinct bound variables keeps
/// its names. Otherwise every bound variable is renamed to `v#1, v#2, …` in
/// left-to-right order (skipping names already in use) and the quantifiers
/// are hoisted in that same order.
pub fn prenex(phi: &Formula) -> PrenexFormula {
    let mut prefix = Vec::new();
    let mut namer = if already_prenex(phi) {
        Namer::Keep
    } else {
        Namer::Fresh {
            next: 1,
            used: phi.variable_names(),
        }
    };
    let matrix = hoist(phi, &mut Vec::new(), &mut prefix, &mut namer);
    PrenexFormula { prefix, matrix }
}

fn already_prenex(phi: &Formula) -> bool {
    let mut bound = BTreeSet::new();
    let mut cur = phi;
    loop {
        match cur {
            Formula::Exists { var, body, .. } | Formula::Forall { var, body, .. } => {
                if !bound.insert(var.clone()) {
                    return false;
                }
                cur = body;
            }
            matrix => {
                let free = phi.free_variables();
                return matrix.is_quantifier_free() && bound.is_disjoint(&free);
            }
        }
    }
}

enum Namer {
    Keep,
    Fresh { next: usize, used: BTreeSet<String> },
}

impl Namer {
    fn name(&mut self, original: &str) -> String {
        match self {
            Namer::Keep => original.to_string(),
            Namer::Fresh { next, used } => loop {
                let candidate = format!("v#{next}");
                *next += 1;
                if !used.contains(&candidate) {
                    return candidate;
                }
            },
        }
    }
}

fn rename(t: &Term, scope: &[(String, String)]) -> Term {
    match t {
        Term::Var(v) => match scope.iter().rev().find(|(old, _)| old == v) {
            Some((_, new)) => Term::Var(new.clone()),
            None => t.clone(),
        },
        Term::Const(_) => t.clone(),
    }
}

fn hoist(
    phi: &Formula,
    scope: &mut Vec<(String, String)>,
    prefix: &mut Vec<QuantifierEntry>,
    namer: &mut Namer,
) -> Formula {
    match phi {
        Formula::True => Formula::True,
        Formula::Atom { relation, args } => Formula::Atom {
            relation: relation.clone(),
            args: args.iter().map(|t| rename(t, scope)).collect(),
        },
        Formula::Eq(a, b) => Formula::Eq(rename(a, scope), rename(b, scope)),
        Formula::And(ps) => Formula::And(ps.iter().map(|p| hoist(p, scope, prefix, namer)).collect()),
        Formula::Or(ps) => Formula::Or(ps.iter().map(|p| hoist(p, scope, prefix, namer)).collect()),
        Formula::Exists {
            var,
            restriction,
            body,
        }
        | Formula::Forall {
            var,
            restriction,
            body,
        } => {
            let kind = if matches!(phi, Formula::Exists { .. }) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let fresh = namer.name(var);
            prefix.push(QuantifierEntry {
                kind,
                var: fresh.clone(),
                restriction: restriction.clone(),
            });
            scope.push((var.clone(), fresh));
            let matrix = hoist(body, scope, prefix, namer);
            scope.pop();
            matrix
        }
    }
}
