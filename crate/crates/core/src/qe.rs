//! Quantifier-elimination evaluation.
//!
//! Each engine rewrites a prenex sentence outermost-in, replacing
//! quantified variables by constants or restricting their range, in a way
//! that preserves truth whenever the shes it was built from belong to the
//! structure. The residual sentence is then evaluated by brute force.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::dsm::Dsm;
use crate::logic::{
    evaluate_bruteforce, prenex, Formula, LogicError, PrenexFormula, Quantifier, Term,
};
use crate::model::{Element, Structure};
use crate::shop::{canonicalize_a, canonicalize_e, she_monoid, Shop, ShopError};
use crate::DEFAULT_ENUMERATION_CAP;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QeError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Shop(#[from] ShopError),
    #[error("{0} is not in the required normal form")]
    NotCanonical(String),
    #[error("engine {engine} relies on {shop}, which is not a she of the structure")]
    Unsound { engine: String, shop: String },
    #[error("engine {0} is only sound for equality-free sentences")]
    EqualityNotSupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineKind {
    Brute,
    ForallSubst { b: Element },
    ExistsSubst { b: Element },
    ForallExistsSubst { b: Element, b2: Element },
    AReduce { g: Shop },
    EReduce { g: Shop },
    AeLogspace { b: Element, b2: Element },
}

/// An evaluation strategy together with the shops that justify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Engine {
    pub kind: EngineKind,
    /// Shops that must all be shes of the structure for the engine to be
    /// sound.
    pub provenance: Vec<Shop>,
}

impl Engine {
    pub fn brute() -> Engine {
        Engine {
            kind: EngineKind::Brute,
            provenance: Vec::new(),
        }
    }

    pub fn forall_subst(n: usize, b: Element) -> Engine {
        Engine {
            kind: EngineKind::ForallSubst { b },
            provenance: vec![Shop::forall(n, b)],
        }
    }

    pub fn exists_subst(n: usize, b: Element) -> Engine {
        Engine {
            kind: EngineKind::ExistsSubst { b },
            provenance: vec![Shop::exists(n, b)],
        }
    }

    pub fn forall_exists_subst(n: usize, b: Element, b2: Element) -> Engine {
        Engine {
            kind: EngineKind::ForallExistsSubst { b, b2 },
            provenance: vec![Shop::forall_exists(n, b, b2)],
        }
    }

    pub fn a_reduce(g: Shop) -> Result<Engine, QeError> {
        if g.a_tripartition().is_none() {
            return Err(QeError::NotCanonical(g.to_string()));
        }
        Ok(Engine {
            kind: EngineKind::AReduce { g: g.clone() },
            provenance: vec![g],
        })
    }

    pub fn e_reduce(g: Shop) -> Result<Engine, QeError> {
        if g.e_bipartition().is_none() {
            return Err(QeError::NotCanonical(g.to_string()));
        }
        Ok(Engine {
            kind: EngineKind::EReduce { g: g.clone() },
            provenance: vec![g],
        })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            EngineKind::Brute => "brute",
            EngineKind::ForallSubst { .. } => "forall_subst",
            EngineKind::ExistsSubst { .. } => "exists_subst",
            EngineKind::ForallExistsSubst { .. } => "forall_exists_subst",
            EngineKind::AReduce { .. } => "A_reduce",
            EngineKind::EReduce { .. } => "E_reduce",
            EngineKind::AeLogspace { .. } => "AE_logspace",
        }
    }

    /// Rewrites a prenex formula. Engines other than brute force remove or
    /// restrict every quantifier of the kind they handle.
    pub fn reduce(&self, phi: &PrenexFormula) -> Result<PrenexFormula, QeError> {
        Ok(match &self.kind {
            EngineKind::Brute => phi.clone(),
            EngineKind::ForallSubst { b } => reduce_forall(phi, *b),
            EngineKind::ExistsSubst { b } => reduce_exists(phi, *b),
            EngineKind::ForallExistsSubst { b, b2 } | EngineKind::AeLogspace { b, b2 } => {
                reduce_forall_exists(phi, *b, *b2)
            }
            EngineKind::AReduce { g } => reduce_a(phi, g)?,
            EngineKind::EReduce { g } => reduce_e(phi, g)?,
        })
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EngineKind::Brute => write!(f, "brute"),
            EngineKind::ForallSubst { b } | EngineKind::ExistsSubst { b } => {
                write!(f, "{}(b={b})", self.name())
            }
            EngineKind::ForallExistsSubst { b, b2 } | EngineKind::AeLogspace { b, b2 } => {
                write!(f, "{}(b={b}, b'={b2})", self.name())
            }
            EngineKind::AReduce { g } | EngineKind::EReduce { g } => {
                write!(f, "{}(g={g})", self.name())
            }
        }
    }
}

/// Eliminates prefix entries of one kind. `replace` returns the constant
/// to substitute, or `None` to keep the entry with the given restriction.
fn rewrite(
    phi: &PrenexFormula,
    mut replace: impl FnMut(Quantifier) -> Rewrite,
) -> PrenexFormula {
    let mut prefix = Vec::new();
    let mut matrix = phi.matrix.clone();
    for q in &phi.prefix {
        match replace(q.kind) {
            Rewrite::Keep => prefix.push(q.clone()),
            Rewrite::Restrict(set) => {
                let mut q = q.clone();
                q.restriction = Some(set);
                prefix.push(q);
            }
            Rewrite::Constant(c) => matrix = matrix.substitute(&q.var, &Term::Const(c)),
        }
    }
    PrenexFormula { prefix, matrix }
}

enum Rewrite {
    Keep,
    Restrict(Vec<Element>),
    Constant(Element),
}

/// Substitutes `@b` for every universal variable.
pub fn reduce_forall(phi: &PrenexFormula, b: Element) -> PrenexFormula {
    rewrite(phi, |k| match k {
        Quantifier::Forall => Rewrite::Constant(b),
        Quantifier::Exists => Rewrite::Keep,
    })
}

/// Substitutes `@b` for every existential variable.
pub fn reduce_exists(phi: &PrenexFormula, b: Element) -> PrenexFormula {
    rewrite(phi, |k| match k {
        Quantifier::Exists => Rewrite::Constant(b),
        Quantifier::Forall => Rewrite::Keep,
    })
}

/// Substitutes `@b` for universal and `@b2` for existential variables,
/// leaving a quantifier-free sentence.
pub fn reduce_forall_exists(phi: &PrenexFormula, b: Element, b2: Element) -> PrenexFormula {
    rewrite(phi, |k| match k {
        Quantifier::Forall => Rewrite::Constant(b),
        Quantifier::Exists => Rewrite::Constant(b2),
    })
}

/// With `g` in A-normal form `{b}; B′; B″`: universal variables become
/// `@b` and existential ones range over `B′`.
pub fn reduce_a(phi: &PrenexFormula, g: &Shop) -> Result<PrenexFormula, QeError> {
    let part = g
        .a_tripartition()
        .ok_or_else(|| QeError::NotCanonical(g.to_string()))?;
    Ok(rewrite(phi, |k| match k {
        Quantifier::Forall => Rewrite::Constant(part.b),
        Quantifier::Exists => Rewrite::Restrict(part.b_prime.clone()),
    }))
}

/// With `g` in E-normal form `B′; B″` around `b`: existential variables
/// become `@b` and universal ones range over `B′`.
pub fn reduce_e(phi: &PrenexFormula, g: &Shop) -> Result<PrenexFormula, QeError> {
    let part = g
        .e_bipartition()
        .ok_or_else(|| QeError::NotCanonical(g.to_string()))?;
    Ok(rewrite(phi, |k| match k {
        Quantifier::Exists => Rewrite::Constant(part.b),
        Quantifier::Forall => Rewrite::Restrict(part.b_prime.clone()),
    }))
}

/// Picks the strongest engine `d` supports, ties going to the least
/// witnesses:
///
/// 1. an A-shop and an E-shop: compose the least of each and take a
///    `∀_b∃_{b′}` sub-shop of the composite;
/// 2. an A-shop only: reduce with its A-normal form;
/// 3. an E-shop only: reduce with its E-normal form;
/// 4. otherwise brute force.
///
/// Every `∀_b`, `∃_b` and `∀_b∃_{b′}` shop is already an A- or E-shop, so
/// the plain substitution engines are never chosen here.
pub fn select_engine(d: &Dsm) -> Engine {
    let n = d.n();
    let a = d.a_shops().next().cloned();
    let e = d.e_shops().next().cloned();
    match (a, e) {
        (Some(fa), Some(fe)) => {
            if n == 1 {
                return Engine {
                    kind: EngineKind::AeLogspace { b: 0, b2: 0 },
                    provenance: vec![fa],
                };
            }
            let h = fa.after(&fe).expect("members share a domain");
            let shape = h.detect_shape();
            let pair = shape
                .a_witnesses
                .iter()
                .flat_map(|&b| shape.e_witnesses.iter().map(move |&b2| (b, b2)))
                .find(|(b, b2)| b != b2);
            let (b, b2) = match pair {
                Some(p) => p,
                // only `b = b′` fits, so `d` holds `∀_b∃_b` and with it every shop
                None => d
                    .members()
                    .iter()
                    .find_map(|f| f.detect_shape().forall_exists.first().copied())
                    .expect("a DSM with A- and E-shops has a ∀∃-shop"),
            };
            let witness = Shop::forall_exists(n, b, b2);
            debug_assert!(d.contains(&witness));
            Engine {
                kind: EngineKind::AeLogspace { b, b2 },
                provenance: vec![fa, fe, witness],
            }
        }
        (Some(fa), None) => {
            let g = canonicalize_a(&fa).expect("A-shop on at least two elements");
            Engine {
                kind: EngineKind::AReduce { g: g.clone() },
                provenance: vec![fa, g],
            }
        }
        (None, Some(fe)) => {
            let g = canonicalize_e(&fe).expect("E-shop on at least two elements");
            Engine {
                kind: EngineKind::EReduce { g: g.clone() },
                provenance: vec![fe, g],
            }
        }
        (None, None) => Engine::brute(),
    }
}

/// The engine [`select_engine`] picks for `shE(structure)`, or brute force
/// above the enumeration cap.
pub fn auto_engine(structure: &Structure) -> Engine {
    match she_monoid(structure, DEFAULT_ENUMERATION_CAP) {
        Ok(d) => select_engine(&d),
        Err(_) => Engine::brute(),
    }
}

/// Checks that `engine` fits `structure` and that every shop it relies on
/// is a she.
pub fn verify_engine(structure: &Structure, engine: &Engine) -> Result<(), QeError> {
    for f in &engine.provenance {
        if f.size() != structure.domain_size() {
            return Err(ShopError::SizeMismatch {
                left: f.size(),
                right: structure.domain_size(),
            }
            .into());
        }
        if !f.is_she(structure) {
            return Err(QeError::Unsound {
                engine: engine.to_string(),
                shop: f.to_string(),
            });
        }
    }
    let bound = |b: Element| {
        if b < structure.domain_size() {
            Ok(())
        } else {
            Err(QeError::Logic(LogicError::ConstantOutOfRange {
                constant: b,
                domain_size: structure.domain_size(),
            }))
        }
    };
    match &engine.kind {
        EngineKind::ForallSubst { b } | EngineKind::ExistsSubst { b } => bound(*b),
        EngineKind::ForallExistsSubst { b, b2 } | EngineKind::AeLogspace { b, b2 } => {
            bound(*b)?;
            bound(*b2)
        }
        _ => Ok(()),
    }
}

/// The result of [`evaluate_traced`].
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: bool,
    pub engine: Engine,
    pub prenex: PrenexFormula,
    pub reduced: PrenexFormula,
}

/// `structure ⊨ phi`, via `engine` or the automatically selected one.
pub fn evaluate(
    structure: &Structure,
    phi: &Formula,
    engine: Option<&Engine>,
) -> Result<bool, QeError> {
    evaluate_traced(structure, phi, engine).map(|e| e.value)
}

/// Like [`evaluate`], also returning the intermediate formulas.
pub fn evaluate_traced(
    structure: &Structure,
    phi: &Formula,
    engine: Option<&Engine>,
) -> Result<Evaluation, QeError> {
    let free = phi.free_variables();
    if !free.is_empty() {
        return Err(LogicError::NotASentence(free.into_iter().collect()).into());
    }
    let engine = match engine {
        Some(e) => e.clone(),
        None if phi.uses_equality() => Engine::brute(),
        None => auto_engine(structure),
    };
    if phi.uses_equality() && engine.kind != EngineKind::Brute {
        return Err(QeError::EqualityNotSupported(engine.to_string()));
    }
    verify_engine(structure, &engine)?;
    let pre = prenex(phi);
    let reduced = engine.reduce(&pre)?;
    let value = evaluate_bruteforce(structure, &reduced.to_formula(), &BTreeMap::new())?;
    Ok(Evaluation {
        value,
        engine,
        prenex: pre,
        reduced,
    })
}
