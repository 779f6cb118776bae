//! Positive first-order formulas: syntax, prenex form, evaluation and the
//! witness formulas of the relation/she Galois connection.

mod eval;
mod parse;
mod prenex;
pub mod random;
mod theta;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::Element;

pub use eval::{evaluate_bruteforce, extension, CompiledFormula};
pub use parse::{parse_formula, FormulaParser};
pub use prenex::{prenex, PrenexFormula, Quantifier, QuantifierEntry};
pub use theta::{theta_relation, theta_tuple, theta_tuple_eq, theta_variables, THETA_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),
    #[error("relation `{relation}` has arity {expected} but is applied to {found} arguments")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is free but not bound by the environment")]
    UnboundVariable(String),
    #[error("constant @{constant} is outside the domain of size {domain_size}")]
    ConstantOutOfRange { constant: Element, domain_size: usize },
    #[error("quantifier restriction on `{0}` is empty or leaves the domain")]
    BadRestriction(String),
    #[error("formula is not a sentence; free variables: {}", .0.join(", "))]
    NotASentence(Vec<String>),
    #[error("the empty relation has no defining formula in this fragment")]
    EmptyRelation,
    #[error("domain size {n} exceeds the cap {cap} for witness formulas")]
    TooLarge { n: usize, cap: usize },
    #[error("tuple component {element} is outside the domain of size {domain_size}")]
    TupleOutOfDomain { element: Element, domain_size: usize },
    #[error("relation has arity {found}, expected {expected}")]
    RelationArity { expected: usize, found: usize },
}

/// A variable or a domain constant `@k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(Element),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "@{c}"),
        }
    }
}

/// A formula of `{∃,∀,∧,∨}-FO`, optionally with equality.
///
/// There is no negation and no falsity. Quantifiers may carry a
/// restriction, a non-empty set of elements the variable ranges over; these
/// only arise from the quantifier-elimination engines.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom { relation: String, args: Vec<Term> },
    Eq(Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists {
        var: String,
        restriction: Option<Vec<Element>>,
        body: Box<Formula>,
    },
    Forall {
        var: String,
        restriction: Option<Vec<Element>>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom<I, T>(relation: &str, args: I) -> Formula
    where
        I: IntoIterator<Item = T>,
        T: Into<Term>,
    {
        Formula::Atom {
            relation: relation.to_string(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    /// The conjunction of `parts`: [`Formula::True`] when empty, the sole
    /// part when there is one.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().expect("one part"),
            _ => Formula::And(parts),
        }
    }

    /// The disjunction of `parts`, or `None` when there are none.
    pub fn or(mut parts: Vec<Formula>) -> Option<Formula> {
        match parts.len() {
            0 => None,
            1 => parts.pop(),
            _ => Some(Formula::Or(parts)),
        }
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists {
            var: var.to_string(),
            restriction: None,
            body: Box::new(body),
        }
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall {
            var: var.to_string(),
            restriction: None,
            body: Box::new(body),
        }
    }

    /// Quantifies `vars` existentially, outermost first.
    pub fn exists_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    /// Quantifies `vars` universally, outermost first.
    pub fn forall_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    /// The top-level conjuncts; empty for `True`.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::True => Vec::new(),
            Formula::And(parts) => parts.iter().collect(),
            other => vec![other],
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        fn walk(phi: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut term = |t: &Term, bound: &Vec<String>| {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            };
            match phi {
                Formula::True => {}
                Formula::Atom { args, .. } => args.iter().for_each(|t| term(t, bound)),
                Formula::Eq(a, b) => {
                    term(a, bound);
                    term(b, bound);
                }
                Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| walk(p, bound, out)),
                Formula::Exists { var, body, .. } | Formula::Forall { var, body, .. } => {
                    bound.push(var.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Whether the formula belongs to the extended fragment with `=`.
    pub fn uses_equality(&self) -> bool {
        match self {
            Formula::Eq(..) => true,
            Formula::True | Formula::Atom { .. } => false,
            Formula::And(ps) | Formula::Or(ps) => ps.iter().any(Formula::uses_equality),
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => body.uses_equality(),
        }
    }

    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::True | Formula::Atom { .. } | Formula::Eq(..) => 0,
            Formula::And(ps) | Formula::Or(ps) => ps.iter().map(Formula::quantifier_count).sum(),
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => {
                1 + body.quantifier_count()
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_count() == 0
    }

    pub fn has_restrictions(&self) -> bool {
        match self {
            Formula::True | Formula::Atom { .. } | Formula::Eq(..) => false,
            Formula::And(ps) | Formula::Or(ps) => ps.iter().any(Formula::has_restrictions),
            Formula::Exists {
                restriction, body, ..
            }
            | Formula::Forall {
                restriction, body, ..
            } => restriction.is_some() || body.has_restrictions(),
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn variable_names(&self) -> BTreeSet<String> {
        fn walk(phi: &Formula, out: &mut BTreeSet<String>) {
            let mut term = |t: &Term| {
                if let Term::Var(v) = t {
                    out.insert(v.clone());
                }
            };
            match phi {
                Formula::True => {}
                Formula::Atom { args, .. } => args.iter().for_each(term),
                Formula::Eq(a, b) => {
                    term(a);
                    term(b);
                }
                Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| walk(p, out)),
                Formula::Exists { var, body, .. } | Formula::Forall { var, body, .. } => {
                    out.insert(var.clone());
                    walk(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    /// Replaces free occurrences of `var` by `term`. Only meant for
    /// constants and fresh variables, so no capture check is made.
    pub fn substitute(&self, var: &str, term: &Term) -> Formula {
        let sub = |t: &Term| match t {
            Term::Var(v) if v == var => term.clone(),
            other => other.clone(),
        };
        match self {
            Formula::True => Formula::True,
            Formula::Atom { relation, args } => Formula::Atom {
                relation: relation.clone(),
                args: args.iter().map(sub).collect(),
            },
            Formula::Eq(a, b) => Formula::Eq(sub(a), sub(b)),
            Formula::And(ps) => Formula::And(ps.iter().map(|p| p.substitute(var, term)).collect()),
            Formula::Or(ps) => Formula::Or(ps.iter().map(|p| p.substitute(var, term)).collect()),
            Formula::Exists {
                var: v,
                restriction,
                body,
            } => Formula::Exists {
                var: v.clone(),
                restriction: restriction.clone(),
                body: Box::new(if v == var {
                    (**body).clone()
                } else {
                    body.substitute(var, term)
                }),
            },
            Formula::Forall {
                var: v,
                restriction,
                body,
            } => Formula::Forall {
                var: v.clone(),
                restriction: restriction.clone(),
                body: Box::new(if v == var {
                    (**body).clone()
                } else {
                    body.substitute(var, term)
                }),
            },
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Exists { .. } | Formula::Forall { .. } => 0,
            Formula::Or(_) => 1,
            Formula::And(_) => 2,
            _ => 3,
        }
    }
}

impl From<&str> for Term {
    fn from(v: &str) -> Term {
        Term::var(v)
    }
}

impl From<Element> for Term {
    fn from(c: Element) -> Term {
        Term::Const(c)
    }
}

fn fmt_restriction(r: &Option<Vec<Element>>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some(set) = r {
        let items: Vec<String> = set.iter().map(|x| x.to_string()).collect();
        write!(f, " in {{{}}}", items.join(","))?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    /// Surface syntax with minimal parentheses. Restrictions print as
    /// `exists u in {1,2}`, which the parser does not accept.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |c: &Formula, min: u8, f: &mut fmt::Formatter<'_>| {
            if c.precedence() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom { relation, args } => {
                let args: Vec<String> = args.iter().map(Term::to_string).collect();
                write!(f, "{relation}({})", args.join(","))
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::And(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    child(p, 2, f)?;
                }
                Ok(())
            }
            Formula::Or(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    child(p, 1, f)?;
                }
                Ok(())
            }
            Formula::Exists {
                var,
                restriction,
                body,
            } => {
                write!(f, "exists {var}")?;
                fmt_restriction(restriction, f)?;
                write!(f, " {body}")
            }
            Formula::Forall {
                var,
                restriction,
                body,
            } => {
                write!(f, "forall {var}")?;
                fmt_restriction(restriction, f)?;
                write!(f, " {body}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables_respect_binding() {
        let phi = parse_formula("E(u,v) & exists v E(v,w) | v = @1").unwrap();
        let free: Vec<String> = phi.free_variables().into_iter().collect();
        assert_eq!(free, vec!["u", "v", "w"]);
        assert!(parse_formula("forall u exists v E(u,v)").unwrap().is_sentence());
    }

    #[test]
    fn smart_constructors() {
        assert_eq!(Formula::and(vec![]), Formula::True);
        assert_eq!(Formula::or(vec![]), None);
        let a = Formula::atom("U", ["x"]);
        assert_eq!(Formula::and(vec![a.clone()]), a);
        assert_eq!(
            Formula::exists_all(&["a", "b"], Formula::True).to_string(),
            "exists a exists b true"
        );
    }

    #[test]
    fn substitution_stops_at_rebinding() {
        let phi = parse_formula("E(u,u) & exists u E(u,v)").unwrap();
        let out = phi.substitute("u", &Term::Const(0));
        assert_eq!(out.to_string(), "E(@0,@0) & (exists u E(u,v))");
    }

    #[test]
    fn display_parenthesises_only_when_needed() {
        for text in [
            "E(u,v) | E(v,w)",
            "(E(u,v) | E(v,w)) & U(u)",
            "forall u exists v E(u,v)",
            "(exists v E(u,v)) | (exists v E(v,u))",
            "E(u,v) & U(v) | U(u)",
        ] {
            let phi = parse_formula(text).unwrap();
            assert_eq!(phi.to_string(), text);
            assert_eq!(parse_formula(&phi.to_string()).unwrap(), phi);
        }
    }

    #[test]
    fn restrictions_display() {
        let phi = Formula::Exists {
            var: "u".into(),
            restriction: Some(vec![1, 2]),
            body: Box::new(Formula::atom("U", ["u"])),
        };
        assert_eq!(phi.to_string(), "exists u in {1,2} U(u)");
        assert!(phi.has_restrictions());
    }
}
