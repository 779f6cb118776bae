//! Recursive-descent parser for the formula grammar:
//!
//! ```text
//! formula := quant | disj
//! quant   := ("exists" | "forall") VAR formula
//! disj    := conj { "|" conj }
//! conj    := prim { "&" prim }
//! prim    := REL "(" term { "," term } ")" | term "=" term | "(" formula ")"
//!          | quant | "true"
//! term    := VAR | "@" INT
//! ```
//!
//! A quantifier extends as far right as possible, including when it starts
//! a conjunct or disjunct.

use std::collections::BTreeSet;

use super::{Formula, LogicError, Term};
use crate::model::Signature;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(usize),
    LParen,
    RParen,
    Comma,
    Bar,
    Amp,
    Equals,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, LogicError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                '|' => Some(Tok::Bar),
                '&' => Some(Tok::Amp),
                '=' => Some(Tok::Equals),
                _ => None,
            };
            if let Some(t) = single {
                toks.push((t, col));
                i += 1;
            } else if c == '@' {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[start..j].iter().collect();
                let value = digits.parse().map_err(|_| LogicError::Syntax {
                    column: col,
                    message: "expected a domain element after `@`".into(),
                })?;
                toks.push((Tok::Const(value), col));
                i = j;
            } else if c.is_alphabetic() || c == '_' {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '#')
                {
                    j += 1;
                }
                toks.push((Tok::Ident(chars[i..j].iter().collect()), col));
                i = j;
            } else {
                return Err(LogicError::Syntax {
                    column: col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
        toks.push((Tok::End, chars.len() + 1));
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, LogicError> {
        Err(LogicError::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), LogicError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        if let Tok::Ident(word) = self.peek() {
            if word == "exists" || word == "forall" {
                return self.quant();
            }
        }
        self.disj()
    }

    fn quant(&mut self) -> Result<Formula, LogicError> {
        let Tok::Ident(word) = self.bump() else {
            unreachable!("caller checked the keyword")
        };
        let var = match self.bump() {
            Tok::Ident(v) if !is_keyword(&v) => v,
            _ => {
                self.pos -= 1;
                return self.error("expected a variable after the quantifier");
            }
        };
        let body = self.formula()?;
        Ok(if word == "exists" {
            Formula::exists(&var, body)
        } else {
            Formula::forall(&var, body)
        })
    }

    fn disj(&mut self) -> Result<Formula, LogicError> {
        let mut parts = vec![self.conj()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            parts.push(self.conj()?);
        }
        Ok(Formula::or(parts).expect("at least one disjunct"))
    }

    fn conj(&mut self) -> Result<Formula, LogicError> {
        let mut parts = vec![self.prim()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.prim()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one conjunct")
        } else {
            Formula::And(parts)
        })
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        match self.bump() {
            Tok::Const(c) => Ok(Term::Const(c)),
            Tok::Ident(v) if !is_keyword(&v) => Ok(Term::Var(v)),
            _ => {
                self.pos -= 1;
                self.error("expected a variable or constant")
            }
        }
    }

    fn prim(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(word) if word == "exists" || word == "forall" => self.quant(),
            Tok::Ident(word) if word == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(name) => {
                if self.toks[self.pos + 1].0 == Tok::LParen {
                    self.bump();
                    self.bump();
                    let mut args = vec![self.term()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen, "`)` or `,`")?;
                    Ok(Formula::Atom {
                        relation: name,
                        args,
                    })
                } else {
                    self.equality()
                }
            }
            Tok::Const(_) => self.equality(),
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected an atom, an equality or `(`"),
        }
    }

    fn equality(&mut self) -> Result<Formula, LogicError> {
        let left = self.term()?;
        self.expect(Tok::Equals, "`=` or `(`")?;
        let right = self.term()?;
        Ok(Formula::Eq(left, right))
    }
}

fn is_keyword(word: &str) -> bool {
    matches!(word, "exists" | "forall" | "true")
}

/// Parses a formula without checking relation symbols or free variables.
pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    FormulaParser::new().parse(text)
}

/// A parser with optional checks against a signature and a list of
/// permitted free variables.
#[derive(Debug, Clone, Default)]
pub struct FormulaParser {
    signature: Option<Signature>,
    free_vars: Option<BTreeSet<String>>,
}

impl FormulaParser {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rejects unknown relation symbols and wrong arities.
    pub fn signature(mut self, signature: Signature) -> Self {
        self.signature = Some(signature);
        self
    }

    /// Rejects free variables outside `vars`; pass an empty list to demand
    /// a sentence.
    pub fn free_vars<S: AsRef<str>>(mut self, vars: &[S]) -> Self {
        self.free_vars = Some(vars.iter().map(|v| v.as_ref().to_string()).collect());
        self
    }

    pub fn parse(&self, text: &str) -> Result<Formula, LogicError> {
        let mut parser = Parser {
            toks: Lexer::new(text)?.toks,
            pos: 0,
        };
        let phi = parser.formula()?;
        if *parser.peek() != Tok::End {
            return parser.error("unexpected trailing input");
        }
        if let Some(sig) = &self.signature {
            check_signature(&phi, sig)?;
        }
        if let Some(allowed) = &self.free_vars {
            if let Some(v) = phi.free_variables().into_iter().find(|v| !allowed.contains(v)) {
                return Err(LogicError::UnboundVariable(v));
            }
        }
        Ok(phi)
    }
}

pub(crate) fn check_signature(phi: &Formula, sig: &Signature) -> Result<(), LogicError> {
    match phi {
        Formula::True | Formula::Eq(..) => Ok(()),
        Formula::Atom { relation, args } => match sig.arity(relation) {
            None => Err(LogicError::UnknownRelation(relation.clone())),
            Some(k) if k != args.len() => Err(LogicError::ArityMismatch {
                relation: relation.clone(),
                expected: k,
                found: args.len(),
            }),
            Some(_) => Ok(()),
        },
        Formula::And(ps) | Formula::Or(ps) => ps.iter().try_for_each(|p| check_signature(p, sig)),
        Formula::Exists { body, .. } | Formula::Forall { body, .. } => check_signature(body, sig),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quantifier_prefix() {
        let phi = parse_formula("forall u exists v E(u,v)").unwrap();
        let expected = Formula::forall(
            "u",
            Formula::exists("v", Formula::atom("E", ["u", "v"])),
        );
        assert_eq!(phi, expected);
    }

    #[test]
    fn nae_defining_disjunction() {
        let phi = parse_formula("E(u,v) | E(v,w)").unwrap();
        assert_eq!(
            phi,
            Formula::Or(vec![
                Formula::atom("E", ["u", "v"]),
                Formula::atom("E", ["v", "w"])
            ])
        );
        assert!(!phi.uses_equality());
    }

    #[test]
    fn equality_sets_the_extended_flag() {
        let phi = parse_formula("exists v v = u").unwrap();
        assert!(phi.uses_equality());
        assert_eq!(
            phi,
            Formula::exists("v", Formula::Eq(Term::var("v"), Term::var("u")))
        );
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let phi = parse_formula("A(x) | B(x) & C(x)").unwrap();
        let Formula::Or(parts) = phi else { panic!() };
        assert!(matches!(parts[1], Formula::And(_)));
    }

    #[test]
    fn quantifiers_extend_right() {
        let phi = parse_formula("U(x) & exists y E(x,y) | U(y)").unwrap();
        let Formula::And(parts) = phi else { panic!() };
        assert!(matches!(&parts[1], Formula::Exists { body, .. } if matches!(**body, Formula::Or(_))));
    }

    #[test]
    fn constants() {
        let phi = parse_formula("E(@0, u) & @2 = u").unwrap();
        assert_eq!(phi.to_string(), "E(@0,u) & @2 = u");
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let err = |t: &str| match parse_formula(t) {
            Err(LogicError::Syntax { column, .. }) => column,
            other => panic!("{t}: {other:?}"),
        };
        assert_eq!(err("E(u,v"), 6);
        assert_eq!(err("E(u,v) &"), 9);
        assert_eq!(err("forall E(u)"), 11);
        assert_eq!(err("E(u) $ U(v)"), 6);
        assert_eq!(err("E(u) U(v)"), 6);
        assert_eq!(err("@"), 1);
    }

    #[test]
    fn signature_and_free_variable_checks() {
        let sig = Signature::new([("E", 2)]).unwrap();
        let p = FormulaParser::new().signature(sig).free_vars::<&str>(&[]);
        assert!(p.parse("forall u exists v E(u,v)").is_ok());
        assert_eq!(
            p.parse("exists u R(u)"),
            Err(LogicError::UnknownRelation("R".into()))
        );
        assert!(matches!(
            p.parse("exists u E(u)"),
            Err(LogicError::ArityMismatch { expected: 2, found: 1, .. })
        ));
        assert_eq!(
            p.parse("exists u E(u,w)"),
            Err(LogicError::UnboundVariable("w".into()))
        );
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let term = prop_oneof![
            prop::sample::select(vec!["u", "v", "w"]).prop_map(Term::var),
            (0usize..3).prop_map(Term::Const),
        ];
        let leaf = prop_oneof![
            4 => (prop::sample::select(vec!["E", "R"]), prop::collection::vec(term.clone(), 1..3))
                .prop_map(|(r, args)| Formula::Atom { relation: r.to_string(), args }),
            1 => (term.clone(), term).prop_map(|(a, b)| Formula::Eq(a, b)),
            1 => Just(Formula::True),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
                (prop::sample::select(vec!["u", "v", "w"]), inner.clone())
                    .prop_map(|(v, b)| Formula::exists(v, b)),
                (prop::sample::select(vec!["u", "v", "w"]), inner)
                    .prop_map(|(v, b)| Formula::forall(v, b)),
            ]
        })
    }

    /// Nested conjunctions and disjunctions print flat, so compare after
    /// flattening.
    fn flatten(phi: Formula) -> Formula {
        match phi {
            Formula::And(ps) => Formula::And(
                ps.into_iter()
                    .map(flatten)
                    .flat_map(|p| match p {
                        Formula::And(qs) => qs,
                        other => vec![other],
                    })
                    .collect(),
            ),
            Formula::Or(ps) => Formula::Or(
                ps.into_iter()
                    .map(flatten)
                    .flat_map(|p| match p {
                        Formula::Or(qs) => qs,
                        other => vec![other],
                    })
                    .collect(),
            ),
            Formula::Exists { var, restriction, body } => Formula::Exists {
                var,
                restriction,
                body: Box::new(flatten(*body)),
            },
            Formula::Forall { var, restriction, body } => Formula::Forall {
                var,
                restriction,
                body: Box::new(flatten(*body)),
            },
            other => other,
        }
    }

    proptest! {
        #[test]
        fn display_round_trips(phi in arb_formula()) {
            let text = phi.to_string();
            let back = parse_formula(&text).unwrap();
            prop_assert_eq!(back, flatten(phi));
        }
    }
}
