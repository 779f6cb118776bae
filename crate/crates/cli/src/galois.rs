//! Both directions of the relation/she Galois connection at desk scale.
//!
//! Forward: relations defined by random formulas are preserved by every
//! she. Backward: every she-invariant relation is defined by its witness
//! formula. Invariant relations are exactly the unions of she-image sets of
//! single tuples, so they are enumerated as such unions; when there are more
//! than `samples` of them a seeded sample is checked instead.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use posfo::logic::random::{random_formula, FormulaParams};
use posfo::logic::{extension, theta_relation, theta_variables, THETA_CAP};
use posfo::model::{all_tuples, Element};
use posfo::{Relation, Shop, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub const MAX_ARITY: usize = 3;
pub const MAX_DEPTH: usize = 6;

#[derive(Debug, Clone)]
pub struct GaloisConfig {
    pub max_arity: usize,
    pub samples: usize,
    pub seed: u64,
    pub depth: usize,
}

#[derive(Debug, Clone, Default)]
pub struct GaloisReport {
    pub text: String,
    pub violations: usize,
}

pub fn validate(structure: &Structure, config: &GaloisConfig) -> Result<(), CliError> {
    if config.max_arity == 0 || config.max_arity > MAX_ARITY {
        return Err(CliError::Usage(format!(
            "--max-arity must be between 1 and {MAX_ARITY}, got {}",
            config.max_arity
        )));
    }
    if config.depth > MAX_DEPTH {
        return Err(CliError::Usage(format!(
            "--depth must be at most {MAX_DEPTH}, got {}",
            config.depth
        )));
    }
    let n = structure.domain_size();
    if n > THETA_CAP {
        return Err(CliError::Usage(format!(
            "witness formulas are built for at most {THETA_CAP} elements, the structure has {n}"
        )));
    }
    if n.pow(config.max_arity as u32) > 27 {
        return Err(CliError::Usage(format!(
            "{n}^{} tuples per relation is above the limit of 27; lower --max-arity",
            config.max_arity
        )));
    }
    if structure.relations().next().is_none() {
        return Err(CliError::Usage("the structure has no relations to build formulas from".into()));
    }
    Ok(())
}

/// Tuples `r2` with `f(r) ∋ r2` for some she `f`.
fn she_image(shes: &[Shop], n: usize, r: &[Element]) -> BTreeSet<Vec<Element>> {
    all_tuples(n, r.len())
        .filter(|r2| {
            shes.iter()
                .any(|f| r.iter().zip(r2).all(|(&x, &y)| f.contains(x, y)))
        })
        .collect()
}

pub fn run(structure: &Structure, shes: &[Shop], config: &GaloisConfig) -> Result<GaloisReport, CliError> {
    let n = structure.domain_size();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = GaloisReport::default();
    let out = &mut report.text;
    let _ = writeln!(out, "structure: {n} elements, {} shes", shes.len());
    let _ = writeln!(
        out,
        "settings: max arity {}, samples {}, depth {}, seed {}",
        config.max_arity, config.samples, config.depth, config.seed
    );

    let params = FormulaParams {
        max_depth: config.depth,
        ..FormulaParams::default()
    };
    let signature = structure.signature();
    let mut forward_bad = 0;
    for i in 0..config.samples {
        let k = 1 + i % config.max_arity;
        let free = theta_variables(k);
        let phi = random_formula(&mut rng, &signature, &free, &params);
        let defined = extension(structure, &phi, &free)?;
        if let Some(f) = shes.iter().find(|f| !f.preserves(&defined)) {
            forward_bad += 1;
            let _ = writeln!(out, "violation: she {f} does not preserve the relation defined by {phi}");
        }
    }
    let _ = writeln!(
        out,
        "forward: {} formulas, {} violations",
        config.samples, forward_bad
    );

    let mut backward_checked = 0;
    let mut backward_bad = 0;
    let mut exhaustive = true;
    for k in 1..=config.max_arity {
        let images: Vec<BTreeSet<Vec<Element>>> = all_tuples(n, k)
            .map(|r| she_image(shes, n, &r))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let m = images.len();
        let total = if m >= 63 { u64::MAX } else { (1u64 << m) - 1 };
        let selections: Vec<u64> = if total <= config.samples as u64 {
            (1..=total).collect()
        } else {
            exhaustive = false;
            random_selections(&mut rng, m, config.samples)
        };
        for bits in selections {
            let tuples = images
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .flat_map(|(_, set)| set.iter().cloned());
            let s = Relation::from_tuples(k, tuples).expect("tuples have arity k");
            let phi = theta_relation(structure, &s)?;
            let found = extension(structure, &phi, &theta_variables(k))?;
            backward_checked += 1;
            if found.tuples() != s.tuples() {
                backward_bad += 1;
                let listed: Vec<String> = s.tuples().iter().map(|t| format!("{t:?}")).collect();
                let _ = writeln!(
                    out,
                    "violation: witness formula of the invariant relation {{{}}} defines {} tuples",
                    listed.join(", "),
                    found.len()
                );
            }
        }
    }
    let _ = writeln!(
        out,
        "backward: {} invariant relations{}, {} mismatches",
        backward_checked,
        if exhaustive { " (all)" } else { " (sampled)" },
        backward_bad
    );
    report.violations = forward_bad + backward_bad;
    let _ = writeln!(
        out,
        "result: {}",
        if report.violations == 0 { "pass" } else { "FAIL" }
    );
    Ok(report)
}

/// `count` non-empty subsets of `m` image sets, as bit masks. Subsets are
/// drawn by including each set with probability one half.
fn random_selections<R: Rng>(rng: &mut R, m: usize, count: usize) -> Vec<u64> {
    let m = m.min(63);
    (0..count)
        .map(|_| {
            let mut bits: u64 = (0..m).filter(|_| rng.gen_bool(0.5)).fold(0, |b, i| b | 1 << i);
            if bits == 0 {
                bits = 1 << rng.gen_range(0..m);
            }
            bits
        })
        .collect()
}
