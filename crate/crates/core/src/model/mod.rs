//! Finite relational structures.

mod fixtures;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::logic::{Formula, Term};
use crate::shop::Shop;

pub use fixtures::{fixture, FIXTURE_NAMES};
pub use text::parse_structure;

/// A domain element, always in `0..domain_size`.
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    At {
        line: usize,
        #[source]
        source: Box<ModelError>,
    },
    #[error("tuple of length {found} for relation `{relation}` of arity {expected}")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("element {element} is outside the domain of size {domain_size}")]
    ElementOutOfDomain { element: usize, domain_size: usize },
    #[error("relation `{0}` declared twice")]
    DuplicateRelation(String),
    #[error("invalid relation name `{0}`")]
    InvalidName(String),
    #[error("relation `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("domain must contain at least one element")]
    EmptyDomain,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid parameters for fixture `{name}`: {reason}")]
    InvalidFixtureParams { name: String, reason: String },
    #[error("shop {0} is not an equivalence relation")]
    NotEquivalence(String),
    #[error("shop {0} is not a she of the structure")]
    NotShe(String),
    #[error("shop acts on {shop} elements but the structure has {structure}")]
    SizeMismatch { shop: usize, structure: usize },
    #[error("operation needs a single binary relation")]
    NotSingleBinary,
}

impl ModelError {
    /// The underlying error, with any line annotation stripped.
    pub fn root(&self) -> &ModelError {
        match self {
            ModelError::At { source, .. } => source.root(),
            other => other,
        }
    }
}

/// A set of equal-length tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<Element>>,
}

impl Relation {
    pub fn new(arity: usize) -> Self {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    /// Builds a relation, rejecting tuples of the wrong length.
    pub fn from_tuples<I, T>(arity: usize, tuples: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = T>,
        T: Into<Vec<Element>>,
    {
        let mut rel = Relation::new(arity);
        for t in tuples {
            let t = t.into();
            if t.len() != arity {
                return Err(ModelError::ArityMismatch {
                    relation: String::new(),
                    expected: arity,
                    found: t.len(),
                });
            }
            rel.tuples.insert(t);
        }
        Ok(rel)
    }

    /// `domain^arity`.
    pub fn full(domain_size: usize, arity: usize) -> Self {
        Relation {
            arity,
            tuples: all_tuples(domain_size, arity).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<Element>> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[Element]) -> bool {
        self.tuples.contains(tuple)
    }

    /// Inserts a tuple; returns false if it was already present.
    pub fn insert(&mut self, tuple: Vec<Element>) -> bool {
        assert_eq!(tuple.len(), self.arity, "tuple length must equal arity");
        self.tuples.insert(tuple)
    }

    pub fn max_element(&self) -> Option<Element> {
        self.tuples.iter().flat_map(|t| t.iter().copied()).max()
    }
}

/// Iterates over `0..n` to the power `k` in lexicographic order.
pub fn all_tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<Element>> {
    let total = if n == 0 && k > 0 { 0 } else { n.pow(k as u32) };
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}

/// Relation symbols with their arities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    relations: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<I, S>(relations: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut sig = Signature::default();
        for (name, arity) in relations {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(ModelError::InvalidName(name));
            }
            if arity == 0 {
                return Err(ModelError::ZeroArity(name));
            }
            if sig.arity(&name).is_some() {
                return Err(ModelError::DuplicateRelation(name));
            }
            sig.relations.push((name, arity));
        }
        Ok(sig)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, a)| a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite relational structure on the domain `{0, …, n−1}`.
///
/// Relations are kept sorted by name, which is also the canonical
/// serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    domain_size: usize,
    relations: BTreeMap<String, Relation>,
}

impl Structure {
    pub fn new(domain_size: usize) -> Result<Self, ModelError> {
        if domain_size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        Ok(Structure {
            domain_size,
            relations: BTreeMap::new(),
        })
    }

    /// Adds a relation after checking its name, arity and elements.
    pub fn add_relation(
        &mut self,
        name: impl Into<String>,
        relation: Relation,
    ) -> Result<(), ModelError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(ModelError::InvalidName(name));
        }
        if relation.arity == 0 {
            return Err(ModelError::ZeroArity(name));
        }
        if self.relations.contains_key(&name) {
            return Err(ModelError::DuplicateRelation(name));
        }
        if let Some(m) = relation.max_element() {
            if m >= self.domain_size {
                return Err(ModelError::ElementOutOfDomain {
                    element: m,
                    domain_size: self.domain_size,
                });
            }
        }
        self.relations.insert(name, relation);
        Ok(())
    }

    pub fn with_relation(
        mut self,
        name: impl Into<String>,
        relation: Relation,
    ) -> Result<Self, ModelError> {
        self.add_relation(name, relation)?;
        Ok(self)
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(n, r)| (n.as_str(), r))
    }

    pub fn signature(&self) -> Signature {
        Signature {
            relations: self
                .relations
                .iter()
                .map(|(n, r)| (n.clone(), r.arity))
                .collect(),
        }
    }

    /// Canonical text form; see [`parse_structure`] for the grammar.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    /// The single binary relation of a digraph, if that is all this is.
    pub fn digraph_edges(&self) -> Result<(&str, &Relation), ModelError> {
        let mut rels = self.relations();
        match (rels.next(), rels.next()) {
            (Some((name, rel)), None) if rel.arity == 2 => Ok((name, rel)),
            _ => Err(ModelError::NotSingleBinary),
        }
    }

    /// The same structure expanded with the graph of equality under a fresh
    /// relation name.
    pub fn with_equality(&self) -> Structure {
        let mut name = String::from("eq");
        while self.relations.contains_key(&name) {
            name.push('_');
        }
        let diag = Relation {
            arity: 2,
            tuples: (0..self.domain_size).map(|x| vec![x, x]).collect(),
        };
        let mut out = self.clone();
        out.relations.insert(name, diag);
        out
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.domain_size)?;
        for (name, rel) in &self.relations {
            writeln!(f, "rel {} {}", name, rel.arity)?;
            for t in &rel.tuples {
                let line: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                writeln!(f, "{}", line.join(" "))?;
            }
            writeln!(f, "end")?;
        }
        Ok(())
    }
}

/// The quotient `B/f` of a structure by an equivalence-relation she.
///
/// Classes are numbered by their least member. A relation holds of a tuple
/// of classes iff it holds of some choice of representatives.
pub fn quotient(structure: &Structure, f: &Shop) -> Result<Structure, ModelError> {
    if f.size() != structure.domain_size {
        return Err(ModelError::SizeMismatch {
            shop: f.size(),
            structure: structure.domain_size,
        });
    }
    if !f.detect_shape().equivalence {
        return Err(ModelError::NotEquivalence(f.to_string()));
    }
    if !f.is_she(structure) {
        return Err(ModelError::NotShe(f.to_string()));
    }
    let mut class_of = vec![usize::MAX; structure.domain_size];
    let mut classes = 0;
    for x in 0..structure.domain_size {
        if class_of[x] == usize::MAX {
            for y in f.image(x) {
                class_of[y] = classes;
            }
            classes += 1;
        }
    }
    let mut out = Structure::new(classes)?;
    for (name, rel) in structure.relations() {
        let mapped = rel
            .tuples
            .iter()
            .map(|t| t.iter().map(|&x| class_of[x]).collect::<Vec<_>>());
        out.add_relation(name, Relation::from_tuples(rel.arity, mapped)?)?;
    }
    Ok(out)
}

/// The complement of a digraph: `(x, y)` is an edge iff it was not one,
/// loops included.
pub fn complement_digraph(structure: &Structure) -> Result<Structure, ModelError> {
    let (name, edges) = structure.digraph_edges()?;
    let n = structure.domain_size;
    let complement = Relation {
        arity: 2,
        tuples: all_tuples(n, 2).filter(|t| !edges.contains(t)).collect(),
    };
    Structure::new(n)?.with_relation(name, complement)
}

/// The conjunction of the positive facts of `tuple` over variables
/// `v0, …, v{l-1}`; [`Formula::True`] when there are none.
pub fn canonical_conjunction(structure: &Structure, tuple: &[Element]) -> Formula {
    let vars: Vec<String> = (0..tuple.len()).map(|i| format!("v{i}")).collect();
    positive_facts(structure, tuple, &vars)
}

/// Like [`canonical_conjunction`] but with caller-chosen variable names,
/// `vars[i]` standing for `tuple[i]`. Atoms are listed per relation, with
/// argument position tuples in lexicographic order.
pub fn positive_facts(structure: &Structure, tuple: &[Element], vars: &[String]) -> Formula {
    assert_eq!(tuple.len(), vars.len());
    let mut atoms = Vec::new();
    for (name, rel) in structure.relations() {
        for positions in all_tuples(tuple.len(), rel.arity) {
            let image: Vec<Element> = positions.iter().map(|&p| tuple[p]).collect();
            if rel.contains(&image) {
                atoms.push(Formula::Atom {
                    relation: name.to_string(),
                    args: positions.iter().map(|&p| Term::var(&vars[p])).collect(),
                });
            }
        }
    }
    Formula::and(atoms)
}
