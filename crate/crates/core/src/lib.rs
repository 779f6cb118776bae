//! Evaluation and complexity classification of positive equality-free
//! first-order logic (`{∃,∀,∧,∨}-FO`) over fixed finite relational structures.
//!
//! The crate is organised around surjective hyper-operations (*shops*) and the
//! monoids of surjective hyper-endomorphisms (*shes*) they form:
//!
//! * [`model`]: finite structures, the text format, fixtures and quotients.
//! * [`logic`]: formulas, parsing, prenexing, brute-force evaluation and the
//!   witness formulas that realise the relation/she Galois connection.
//! * [`shop`]: the hyper-operation algebra and she computation.
//! * [`dsm`]: down-she-monoids, their closure and lattice.
//! * [`qe`]: quantifier-elimination evaluation engines.
//! * [`classify`]: the complexity verdicts.

pub mod classify;
pub mod dsm;
pub mod logic;
pub mod model;
pub mod qe;
pub mod shop;

pub use classify::{classify, classify_with_equality, Certainty, Classification, Verdict};
pub use dsm::{Dsm, DsmLattice};
pub use logic::{Formula, PrenexFormula, Term};
pub use model::{Relation, Signature, Structure};
pub use qe::{Engine, EngineKind};
pub use shop::{Shape, Shop};

/// Largest domain for which exhaustive shop enumeration runs without an
/// explicit override.
pub const DEFAULT_ENUMERATION_CAP: usize = 4;
