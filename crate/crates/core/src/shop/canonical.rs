//! Normal forms for A- and E-shops.
//!
//! An A-shop `f` (some `f(b) = B`) generates a shop `g` with a tripartition
//! `{b}; B′; B″` where `g(b) = B`, `g` fixes `B′` pointwise and sends each
//! element of `B″` to a single element of `B′`. Dually an E-shop (some `b`
//! in every image) generates one with a bipartition `B′; B″` where
//! `g(x) ⊇ {x, b}` on `B′`, `b ∈ g(x)` everywhere, and the images of `B′`
//! already cover `B`.
//!
//! The construction raises `f` to the power `|B|`, drops `b` from its
//! digraph, peels sources (A) or sinks (E) for `d` rounds, takes one covering
//! closed walk per remaining strongly connected component and lets `c` be
//! the lcm of the walk lengths and `d`. The first surjective sub-shop of
//! `(f^|B|)^c` in the required form is returned. Should that candidate not
//! contain one, the whole of `⟨f⟩` is searched instead.

use super::{bits, full_mask, Shop, ShopError};
use crate::dsm::Dsm;
use crate::model::Element;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ATripartition {
    pub b: Element,
    pub b_prime: Vec<Element>,
    pub b_double_prime: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EBipartition {
    pub b: Element,
    pub b_prime: Vec<Element>,
    pub b_double_prime: Vec<Element>,
}

/// How a canonical shop was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub shop: Shop,
    /// Rounds of source/sink deletion.
    pub peel_rounds: usize,
    /// `lcm(c₁, …, c_k, d)`, with `d = 0` read as 1.
    pub cycle_lcm: usize,
    /// True if the closure search was needed.
    pub fallback: bool,
}

impl Shop {
    /// The tripartition of an A-shop already in normal form.
    pub fn a_tripartition(&self) -> Option<ATripartition> {
        let n = self.size();
        let full = full_mask(n);
        let b = (0..n).find(|&x| self.mask(x) == full)?;
        let (b_prime, b_double_prime): (Vec<_>, Vec<_>) = (0..n)
            .filter(|&x| x != b)
            .partition(|&x| self.mask(x) == 1 << x);
        if b_prime.is_empty() {
            return None;
        }
        let fixed = b_prime.iter().fold(0, |m, &x| m | 1 << x);
        let ok = b_double_prime.iter().all(|&x| {
            let m = self.mask(x);
            m.count_ones() == 1 && m & fixed != 0
        });
        ok.then_some(ATripartition {
            b,
            b_prime,
            b_double_prime,
        })
    }

    /// The bipartition of an E-shop already in normal form, with the least
    /// workable `b`. `B′` holds the reflexive points other than `b`; `b`
    /// joins it only when the others fail to cover the domain.
    pub fn e_bipartition(&self) -> Option<EBipartition> {
        let n = self.size();
        let full = full_mask(n);
        let common = self.masks().iter().fold(full, |acc, &m| acc & m);
        let b = bits(common).next()?;
        let covers = |xs: &[Element]| xs.iter().fold(0, |m, &x| m | self.mask(x)) == full;
        let mut b_prime: Vec<Element> = (0..n).filter(|&x| x != b && self.contains(x, x)).collect();
        if b_prime.is_empty() || !covers(&b_prime) {
            b_prime.push(b);
            b_prime.sort_unstable();
            if !covers(&b_prime) {
                return None;
            }
        }
        let b_double_prime = (0..n).filter(|x| !b_prime.contains(x)).collect();
        Some(EBipartition {
            b,
            b_prime,
            b_double_prime,
        })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn construct(f: &Shop, b: Element, peel_sources: bool) -> Result<Construction, ShopError> {
    let n = f.size();
    let in_form = |g: &Shop| {
        if peel_sources {
            g.a_tripartition().is_some()
        } else {
            g.e_bipartition().is_some()
        }
    };
    let h = f.power(n);
    let graph = h.digraph();
    let (rest, d) = graph.peel(full_mask(n) & !(1 << b), peel_sources);
    let mut c = d.max(1);
    for comp in graph.components(rest) {
        if let Some(len) = graph.covering_cycle_len(comp) {
            c = lcm(c, len);
        }
    }
    let candidate = h.power(c);
    if let Some(g) = candidate.surjective_subshops().into_iter().find(in_form) {
        return Ok(Construction {
            shop: g,
            peel_rounds: d,
            cycle_lcm: c,
            fallback: false,
        });
    }
    let closure = Dsm::closure(n, [f.clone()]).map_err(|_| ShopError::OverCap {
        n,
        cap: crate::DEFAULT_ENUMERATION_CAP,
    })?;
    let g = closure.members().iter().find(|g| in_form(g)).cloned();
    // every A-/E-shop generates a normal form, so the closure always has one
    let g = g.expect("closure of an A-/E-shop contains a normal form");
    Ok(Construction {
        shop: g,
        peel_rounds: d,
        cycle_lcm: c,
        fallback: true,
    })
}

/// Details of [`canonicalize_a`].
pub fn construct_a(f: &Shop) -> Result<Construction, ShopError> {
    let b = *f
        .detect_shape()
        .a_witnesses
        .first()
        .ok_or_else(|| ShopError::NotAShop(f.to_string()))?;
    if f.size() < 2 {
        return Err(ShopError::TooSmall);
    }
    construct(f, b, true)
}

/// Details of [`canonicalize_e`].
pub fn construct_e(f: &Shop) -> Result<Construction, ShopError> {
    let b = *f
        .detect_shape()
        .e_witnesses
        .first()
        .ok_or_else(|| ShopError::NotEShop(f.to_string()))?;
    if f.size() < 2 {
        return Err(ShopError::TooSmall);
    }
    construct(f, b, false)
}

/// A member of `⟨f⟩` in A-normal form.
pub fn canonicalize_a(f: &Shop) -> Result<Shop, ShopError> {
    construct_a(f).map(|c| c.shop)
}

/// A member of `⟨f⟩` in E-normal form.
pub fn canonicalize_e(f: &Shop) -> Result<Shop, ShopError> {
    construct_e(f).map(|c| c.shop)
}
