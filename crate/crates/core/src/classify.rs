//! Complexity verdicts for `{∃,∀,∧,∨}-FO(B)`.
//!
//! The verdict depends only on whether `shE(B)` contains an A-shop and
//! whether it contains an E-shop. On up to three elements this four-way
//! split is exact; beyond that the upper bounds remain certain while the
//! matching hardness is conjectural, unless `shE(B)` is a permutation
//! group or bounded by block permutations.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::dsm::{BlockPermutationWitness, Dsm};
use crate::model::Structure;
use crate::shop::{she_monoid, Shop, ShopError};
use crate::DEFAULT_ENUMERATION_CAP;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Shop(#[from] ShopError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Logspace,
    NpComplete,
    ConpComplete,
    PspaceComplete,
}

impl Verdict {
    /// The reduction order: Logspace below both NP-complete and
    /// coNP-complete, which are incomparable, both below PSPACE-complete.
    pub fn at_most(self, other: Verdict) -> bool {
        use Verdict::*;
        match (self, other) {
            (a, b) if a == b => true,
            (Logspace, _) | (_, PspaceComplete) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Logspace => "Logspace",
            Verdict::NpComplete => "NP-complete",
            Verdict::ConpComplete => "coNP-complete",
            Verdict::PspaceComplete => "PSPACE-complete",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certainty {
    Theorem,
    ConjecturedHardness,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Theorem => "theorem",
            Certainty::ConjecturedHardness => "conjectured-hardness",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HardnessEvidence {
    PermutationSubgroup,
    BlockPermutation(BlockPermutationWitness),
}

/// The rule that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    SingleElement,
    AAndE,
    AOnly,
    EOnly,
    NeitherAnorE,
    EqualityExpansion,
}

impl Rule {
    pub fn key(self) -> &'static str {
        match self {
            Rule::SingleElement => "single-element",
            Rule::AAndE => "a-and-e-shop",
            Rule::AOnly => "a-shop-only",
            Rule::EOnly => "e-shop-only",
            Rule::NeitherAnorE => "no-a-or-e-shop",
            Rule::EqualityExpansion => "equality-expansion",
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Rule::SingleElement => {
                "one element: every sentence reduces to a boolean sentence value problem"
            }
            Rule::AAndE => {
                "shE contains an A-shop and an E-shop, hence a ∀∃-shop; \
                 all quantifiers can be replaced by constants"
            }
            Rule::AOnly => {
                "shE contains an A-shop but no E-shop; universal variables \
                 collapse to one element, leaving an existential search"
            }
            Rule::EOnly => {
                "shE contains an E-shop but no A-shop; existential variables \
                 collapse to one element, leaving a universal check"
            }
            Rule::NeitherAnorE => "shE contains neither an A-shop nor an E-shop",
            Rule::EqualityExpansion => {
                "with equality every she is a permutation, so shE is a permutation group"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub certainty: Certainty,
    pub rule: Rule,
    pub domain_size: usize,
    /// `|shE(B)|`, when it was computed.
    pub she_size: Option<usize>,
    /// A smallest generating set of `shE(B)`, when it was computed.
    pub generators: Vec<Shop>,
    /// The least A-shop in `shE(B)` with its witnesses.
    pub a_shop: Option<Shop>,
    /// The least E-shop in `shE(B)` with its witnesses.
    pub e_shop: Option<Shop>,
    pub hardness: Option<HardnessEvidence>,
    pub notes: Vec<String>,
}

impl Classification {
    /// The A- and E-shops backing the upper bound.
    pub fn upper_bound_witnesses(&self) -> Vec<&Shop> {
        self.a_shop.iter().chain(self.e_shop.iter()).collect()
    }
}

const SINGLE_ELEMENT_NOTE: &str =
    "on one element every sentence reduces to the boolean sentence value problem";

/// Classifies `{∃,∀,∧,∨}-FO(B)` from `shE(B)`.
pub fn classify(structure: &Structure) -> Result<Classification, ClassifyError> {
    let d = she_monoid(structure, DEFAULT_ENUMERATION_CAP)?;
    Ok(classify_dsm(&d))
}

/// Classifies any structure whose she monoid is `d`.
pub fn classify_dsm(d: &Dsm) -> Classification {
    let n = d.n();
    let a_shop = d.a_shops().next().cloned();
    let e_shop = d.e_shops().next().cloned();
    let mut notes = Vec::new();
    let (verdict, rule) = match (n, &a_shop, &e_shop) {
        (1, _, _) => (Verdict::Logspace, Rule::SingleElement),
        (_, Some(_), Some(_)) => (Verdict::Logspace, Rule::AAndE),
        (_, Some(_), None) => (Verdict::NpComplete, Rule::AOnly),
        (_, None, Some(_)) => (Verdict::ConpComplete, Rule::EOnly),
        (_, None, None) => (Verdict::PspaceComplete, Rule::NeitherAnorE),
    };
    let hardness = if rule == Rule::NeitherAnorE {
        if d.is_permutation_subgroup() {
            Some(HardnessEvidence::PermutationSubgroup)
        } else {
            d.block_permutation_witness().map(HardnessEvidence::BlockPermutation)
        }
    } else {
        None
    };
    let certainty = if n <= 3 || verdict == Verdict::Logspace || hardness.is_some() {
        Certainty::Theorem
    } else {
        Certainty::ConjecturedHardness
    };
    if n == 1 {
        notes.push(SINGLE_ELEMENT_NOTE.to_string());
    }
    if certainty == Certainty::ConjecturedHardness {
        let bound = match verdict {
            Verdict::NpComplete => "membership in NP",
            Verdict::ConpComplete => "membership in coNP",
            _ => "membership in PSPACE",
        };
        notes.push(format!(
            "{bound} is proved; {} for four or more elements is conjectured",
            match verdict {
                Verdict::PspaceComplete => "PSPACE-hardness",
                Verdict::NpComplete => "NP-hardness",
                _ => "coNP-hardness",
            }
        ));
    }
    Classification {
        verdict,
        certainty,
        rule,
        domain_size: n,
        she_size: Some(d.len()),
        generators: d.generators(),
        a_shop,
        e_shop,
        hardness,
        notes,
    }
}

/// Classifies `{∃,∀,∧,∨,=}-FO(B)`: Logspace on one element and
/// PSPACE-complete otherwise.
pub fn classify_with_equality(structure: &Structure) -> Classification {
    let n = structure.domain_size();
    let expanded = structure.with_equality();
    let d = she_monoid(&expanded, DEFAULT_ENUMERATION_CAP).ok();
    let (verdict, rule, hardness) = if n == 1 {
        (Verdict::Logspace, Rule::SingleElement, None)
    } else {
        (
            Verdict::PspaceComplete,
            Rule::EqualityExpansion,
            Some(HardnessEvidence::PermutationSubgroup),
        )
    };
    let mut notes = Vec::new();
    if n == 1 {
        notes.push(SINGLE_ELEMENT_NOTE.to_string());
    }
    if let Some(d) = &d {
        debug_assert!(d.is_permutation_subgroup());
    } else {
        notes.push("shE of the expansion not enumerated (domain above the cap)".to_string());
    }
    Classification {
        verdict,
        certainty: Certainty::Theorem,
        rule,
        domain_size: n,
        she_size: d.as_ref().map(Dsm::len),
        generators: d.as_ref().map(Dsm::generators).unwrap_or_default(),
        a_shop: None,
        e_shop: None,
        hardness,
        notes,
    }
}

fn shop_with_witnesses(f: &Shop, a: bool) -> String {
    let shape = f.detect_shape();
    let ws = if a { shape.a_witnesses } else { shape.e_witnesses };
    let ws: Vec<String> = ws.iter().map(|b| b.to_string()).collect();
    format!("{f} (b = {})", ws.join(", "))
}

fn shops(list: &[Shop]) -> String {
    if list.is_empty() {
        "(identity only)".to_string()
    } else {
        list.iter().map(Shop::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// Human-readable report: a `verdict` / `certainty` header followed by the
/// derivation.
pub fn explain(c: &Classification) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", c.verdict);
    let _ = writeln!(out, "certainty: {}", c.certainty);
    let _ = writeln!(out, "domain size: {}", c.domain_size);
    if let Some(size) = c.she_size {
        let _ = writeln!(out, "shE size: {size}");
        let _ = writeln!(out, "shE generators: {}", shops(&c.generators));
    }
    if c.rule != Rule::EqualityExpansion {
        let a = c.a_shop.as_ref().map_or("none".into(), |f| shop_with_witnesses(f, true));
        let e = c.e_shop.as_ref().map_or("none".into(), |f| shop_with_witnesses(f, false));
        let _ = writeln!(out, "A-shop: {a}");
        let _ = writeln!(out, "E-shop: {e}");
    }
    let _ = writeln!(out, "rule: {}", c.rule.describe());
    match &c.hardness {
        Some(HardnessEvidence::PermutationSubgroup) => {
            let _ = writeln!(out, "hardness: shE is a permutation subgroup");
        }
        Some(HardnessEvidence::BlockPermutation(w)) => {
            let _ = writeln!(out, "hardness: every she is bounded by a block permutation, {w}");
        }
        None => {}
    }
    for note in &c.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

/// Flat `key=value` lines for scripts.
pub fn explain_kv(c: &Classification) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict={}", c.verdict);
    let _ = writeln!(out, "certainty={}", c.certainty);
    let _ = writeln!(out, "rule={}", c.rule.key());
    let _ = writeln!(out, "domain_size={}", c.domain_size);
    if let Some(size) = c.she_size {
        let _ = writeln!(out, "she_size={size}");
    }
    let gens: Vec<String> = c.generators.iter().map(Shop::to_string).collect();
    let _ = writeln!(out, "generators={}", gens.join(" "));
    let opt = |f: &Option<Shop>| f.as_ref().map_or(String::new(), Shop::to_string);
    let _ = writeln!(out, "a_shop={}", opt(&c.a_shop));
    let _ = writeln!(out, "e_shop={}", opt(&c.e_shop));
    let hardness = match &c.hardness {
        Some(HardnessEvidence::PermutationSubgroup) => "permutation-subgroup".to_string(),
        Some(HardnessEvidence::BlockPermutation(w)) => format!("block-permutation {w}"),
        None => String::new(),
    };
    let _ = writeln!(out, "hardness={hardness}");
    out
}
