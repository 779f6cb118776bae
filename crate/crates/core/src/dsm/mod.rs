//! Down-she-monoids: sets of shops containing the identity and closed under
//! composition and surjective sub-shops.

mod lattice;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::model::Element;
use crate::shop::{Shop, ShopError};
use crate::DEFAULT_ENUMERATION_CAP;

pub use lattice::{enumerate_dsms, export_dot, DsmLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DsmError {
    #[error("domain size {n} exceeds the cap {cap}")]
    OverCap { n: usize, cap: usize },
    #[error("shop {shop} does not act on {n} elements")]
    SizeMismatch { shop: String, n: usize },
    #[error(transparent)]
    Shop(#[from] ShopError),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dsm {
    n: usize,
    members: BTreeSet<Shop>,
}

impl Dsm {
    /// `{id}`.
    pub fn bottom(n: usize) -> Dsm {
        Dsm {
            n,
            members: BTreeSet::from([Shop::identity(n)]),
        }
    }

    /// `⟨F⟩`, the least DSM containing `gens`.
    pub fn closure<I: IntoIterator<Item = Shop>>(n: usize, gens: I) -> Result<Dsm, DsmError> {
        Dsm::closure_with_cap(n, gens, DEFAULT_ENUMERATION_CAP)
    }

    /// Composition is monotone in both arguments, so the closure is the
    /// down-set of the monoid the generators span.
    pub fn closure_with_cap<I: IntoIterator<Item = Shop>>(
        n: usize,
        gens: I,
        cap: usize,
    ) -> Result<Dsm, DsmError> {
        if n > cap {
            return Err(DsmError::OverCap { n, cap });
        }
        let gens: Vec<Shop> = gens.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| g.size() != n) {
            return Err(DsmError::SizeMismatch {
                shop: g.to_string(),
                n,
            });
        }
        let identity = Shop::identity(n);
        let mut monoid: HashSet<Shop> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let next = g.after(&m)?;
                if monoid.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut members = BTreeSet::new();
        for m in monoid {
            if !members.contains(&m) {
                members.extend(m.surjective_subshops());
            }
        }
        Ok(Dsm { n, members })
    }

    /// Wraps a set the caller knows to be a DSM.
    pub(crate) fn from_members_unchecked(n: usize, members: BTreeSet<Shop>) -> Dsm {
        Dsm { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<Shop> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Shop) -> bool {
        self.members.contains(f)
    }

    pub fn is_subset(&self, other: &Dsm) -> bool {
        self.n == other.n && self.members.is_subset(&other.members)
    }

    /// Checks the defining closure properties directly. Quadratic in the
    /// number of members.
    pub fn check_invariants(&self) -> Result<(), String> {
        if !self.contains(&Shop::identity(self.n)) {
            return Err("identity missing".into());
        }
        for f in &self.members {
            for g in &self.members {
                let h = g.after(f).map_err(|e| e.to_string())?;
                if !self.contains(&h) {
                    return Err(format!("{g} ∘ {f} = {h} missing"));
                }
            }
            for sub in f.surjective_subshops() {
                if !self.contains(&sub) {
                    return Err(format!("sub-shop {sub} of {f} missing"));
                }
            }
        }
        Ok(())
    }

    /// Every member maps each element to a single element.
    pub fn is_permutation_subgroup(&self) -> bool {
        self.members.iter().all(Shop::is_permutation)
    }

    /// Searches for a partition `B₁, …, B_l` (`l ≥ 2`) such that every
    /// member is a sub-shop of a block permutation `x ↦ B_i` for
    /// `x ∈ B_{π(i)}`, the permutation `π` chosen per member. Partitions are
    /// tried in restricted-growth-string order.
    pub fn block_permutation_witness(&self) -> Option<BlockPermutationWitness> {
        let n = self.n;
        for labels in restricted_growth_strings(n) {
            let l = labels.iter().max().map_or(0, |&m| m + 1);
            if l < 2 {
                continue;
            }
            let mut blocks = vec![0u16; l];
            for (x, &i) in labels.iter().enumerate() {
                blocks[i] |= 1 << x;
            }
            let block_of = |m: u16| -> Option<usize> { blocks.iter().position(|&b| m & !b == 0) };
            let mut perms: BTreeSet<Vec<usize>> = BTreeSet::new();
            let fits = self.members.iter().all(|g| {
                // sigma[j]: the block receiving the image of block j
                let mut sigma = Vec::with_capacity(l);
                for &b in &blocks {
                    match block_of(g.image_of_mask(b)) {
                        Some(k) if !sigma.contains(&k) => sigma.push(k),
                        _ => return false,
                    }
                }
                let mut pi = vec![0; l];
                for (j, &k) in sigma.iter().enumerate() {
                    pi[k] = j;
                }
                perms.insert(pi);
                true
            });
            if fits {
                return Some(BlockPermutationWitness {
                    blocks: blocks
                        .iter()
                        .map(|&b| crate::shop::bits(b).collect())
                        .collect(),
                    permutations: perms.into_iter().collect(),
                });
            }
        }
        None
    }

    /// `D⁻¹ = {f⁻¹ : f ∈ D}`.
    pub fn inverse(&self) -> Dsm {
        Dsm {
            n: self.n,
            members: self.members.iter().map(Shop::inverse).collect(),
        }
    }

    pub fn a_shops(&self) -> impl Iterator<Item = &Shop> {
        self.members.iter().filter(|f| f.detect_shape().is_a())
    }

    pub fn e_shops(&self) -> impl Iterator<Item = &Shop> {
        self.members.iter().filter(|f| f.detect_shape().is_e())
    }

    /// A smallest generating set.
    ///
    /// Any generator can be swapped for a member above it in the sub-shop
    /// order, so only maximal members are candidates. Subsets are tried by
    /// size in lexicographic order while that stays cheap; beyond that a
    /// greedy pass adds uncovered maximal members and drops redundant ones.
    pub fn generators(&self) -> Vec<Shop> {
        let identity = Shop::identity(self.n);
        let maximal: Vec<&Shop> = self
            .members
            .iter()
            .filter(|f| {
                !self
                    .members
                    .iter()
                    .any(|g| g != *f && f.is_subshop_of(g).unwrap_or(false))
            })
            .filter(|f| **f != identity)
            .collect();
        let generates = |set: &[&Shop]| {
            Dsm::closure_with_cap(self.n, set.iter().map(|&f| f.clone()), usize::MAX)
                .map(|d| d == *self)
                .unwrap_or(false)
        };
        if maximal.is_empty() {
            return Vec::new();
        }
        const BUDGET: usize = 5_000;
        let mut k = 1;
        while k <= maximal.len() && binomial(maximal.len(), k) <= BUDGET {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let pick: Vec<&Shop> = idx.iter().map(|&i| maximal[i]).collect();
                if generates(&pick) {
                    return pick.into_iter().cloned().collect();
                }
                if !next_combination(&mut idx, maximal.len()) {
                    break;
                }
            }
            k += 1;
        }
        let mut chosen: Vec<&Shop> = Vec::new();
        let mut covered = Dsm::bottom(self.n);
        for &f in &maximal {
            if !covered.contains(f) {
                chosen.push(f);
                covered = Dsm::closure_with_cap(self.n, chosen.iter().map(|&g| g.clone()), usize::MAX)
                    .expect("sizes checked");
            }
        }
        let mut i = 0;
        while i < chosen.len() {
            let mut without = chosen.clone();
            without.remove(i);
            if generates(&without) {
                chosen = without;
            } else {
                i += 1;
            }
        }
        chosen.into_iter().cloned().collect()
    }

    /// `⟨g₁, …, g_k⟩` notation; the bottom is written `⟨id⟩` as the identity
    /// shop.
    pub fn display_name(&self) -> String {
        let gens = self.generators();
        let gens = if gens.is_empty() {
            vec![Shop::identity(self.n)]
        } else {
            gens
        };
        let parts: Vec<String> = gens.iter().map(Shop::to_string).collect();
        format!("⟨{}⟩", parts.join(", "))
    }
}

impl fmt::Debug for Dsm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.members).finish()
    }
}

impl fmt::Display for Dsm {
    /// One shop literal per line, sorted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.members {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Evidence for the block-permutation hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPermutationWitness {
    pub blocks: Vec<Vec<Element>>,
    /// The distinct block permutations `π` needed, each as `i ↦ π(i)`.
    pub permutations: Vec<Vec<usize>>,
}

impl fmt::Display for BlockPermutationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let elems: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", elems.join(","))
            })
            .collect();
        write!(f, "blocks {}", blocks.join(" "))?;
        for p in &self.permutations {
            let p: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            write!(f, "; π = [{}]", p.join(" "))?;
        }
        Ok(())
    }
}

/// Set partitions of `0..n` as restricted growth strings, lexicographic.
pub fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for v in 0..=limit {
            prefix.push(v);
            rec(prefix, n, max.max(v), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, 0, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
