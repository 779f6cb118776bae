//! Surjective hyper-operations (shops) and their algebra.

mod canonical;
mod shape;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dsm::Dsm;
use crate::model::{Element, Relation, Structure};

pub use canonical::{
    canonicalize_a, canonicalize_e, construct_a, construct_e, ATripartition, Construction,
    EBipartition,
};
pub use shape::{Shape, ShopDigraph};

/// Shops are stored as one bitmask per element, so domains are bounded.
pub const MAX_SHOP_DOMAIN: usize = 16;

/// A subset of the domain as a bitmask.
pub type Mask = u16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShopError {
    #[error("shops act on {left} and {right} elements")]
    SizeMismatch { left: usize, right: usize },
    #[error("a shop needs a domain of 1..={MAX_SHOP_DOMAIN} elements, got {0}")]
    BadDomain(usize),
    #[error("image of {0} is empty")]
    EmptyImage(usize),
    #[error("image of {element} mentions {value}, outside the domain")]
    ImageOutOfDomain { element: usize, value: usize },
    #[error("element {0} is in no image")]
    NotSurjective(usize),
    #[error("cannot parse shop `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("domain size {n} exceeds the enumeration cap {cap}")]
    OverCap { n: usize, cap: usize },
    #[error("{0} is not an A-shop")]
    NotAShop(String),
    #[error("{0} is not an E-shop")]
    NotEShop(String),
    #[error("canonical forms need a domain of at least 2 elements")]
    TooSmall,
}

/// A total surjective hyper-operation `x ↦ f(x) ⊆ B`.
///
/// Ordering is lexicographic on the sequence of image bitmasks, which is
/// the enumeration order of [`enumerate_shops`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shop {
    images: Vec<Mask>,
}

impl Shop {
    /// Validates totality and surjectivity.
    pub fn new(images: Vec<Mask>) -> Result<Self, ShopError> {
        let n = images.len();
        if n == 0 || n > MAX_SHOP_DOMAIN {
            return Err(ShopError::BadDomain(n));
        }
        let full = full_mask(n);
        let mut covered = 0;
        for (x, &m) in images.iter().enumerate() {
            if m == 0 {
                return Err(ShopError::EmptyImage(x));
            }
            if m & !full != 0 {
                return Err(ShopError::ImageOutOfDomain {
                    element: x,
                    value: (m & !full).trailing_zeros() as usize,
                });
            }
            covered |= m;
        }
        if covered != full {
            return Err(ShopError::NotSurjective((!covered & full).trailing_zeros() as usize));
        }
        Ok(Shop { images })
    }

    pub fn from_sets<S: AsRef<[Element]>>(sets: &[S]) -> Result<Self, ShopError> {
        let mut images = Vec::with_capacity(sets.len());
        for (x, s) in sets.iter().enumerate() {
            let mut m: Mask = 0;
            for &y in s.as_ref() {
                if y >= MAX_SHOP_DOMAIN {
                    return Err(ShopError::ImageOutOfDomain { element: x, value: y });
                }
                m |= 1 << y;
            }
            images.push(m);
        }
        Shop::new(images)
    }

    /// Skips validation; callers guarantee totality and surjectivity.
    pub(crate) fn from_masks_unchecked(images: Vec<Mask>) -> Self {
        debug_assert!(Shop::new(images.clone()).is_ok());
        Shop { images }
    }

    /// `x ↦ {x}`.
    pub fn identity(n: usize) -> Self {
        Shop::from_masks_unchecked((0..n).map(|x| 1 << x).collect())
    }

    /// `∀_b`: `b ↦ B`, every other `x ↦ {x}`.
    pub fn forall(n: usize, b: Element) -> Self {
        let mut s = Shop::identity(n);
        s.images[b] = full_mask(n);
        s
    }

    /// `∃_b`: `x ↦ {x, b}`.
    pub fn exists(n: usize, b: Element) -> Self {
        Shop::from_masks_unchecked((0..n).map(|x| (1 << x) | (1 << b)).collect())
    }

    /// `∀_b∃_{b'}`: `b ↦ B`, every other `x ↦ {b'}`. With `b == b'` this is
    /// the degenerate shop generating every shop.
    pub fn forall_exists(n: usize, b: Element, b2: Element) -> Self {
        let mut images = vec![1 << b2; n];
        images[b] = full_mask(n);
        Shop::from_masks_unchecked(images)
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn masks(&self) -> &[Mask] {
        &self.images
    }

    pub fn mask(&self, x: Element) -> Mask {
        self.images[x]
    }

    /// Elements of `f(x)` in ascending order.
    pub fn image(&self, x: Element) -> impl Iterator<Item = Element> + '_ {
        bits(self.images[x])
    }

    pub fn contains(&self, x: Element, y: Element) -> bool {
        self.images[x] >> y & 1 == 1
    }

    /// Image of a set: the union of `f(x)` over `x` in `set`.
    pub fn image_of_mask(&self, set: Mask) -> Mask {
        bits(set).fold(0, |acc, x| acc | self.images[x])
    }

    fn check_size(&self, other: &Shop) -> Result<(), ShopError> {
        if self.size() != other.size() {
            return Err(ShopError::SizeMismatch {
                left: self.size(),
                right: other.size(),
            });
        }
        Ok(())
    }

    /// `self ∘ f`: `x ↦ ⋃_{y ∈ f(x)} self(y)`.
    pub fn after(&self, f: &Shop) -> Result<Shop, ShopError> {
        self.check_size(f)?;
        Ok(Shop::from_masks_unchecked(
            f.images.iter().map(|&m| self.image_of_mask(m)).collect(),
        ))
    }

    /// `f^r`, with `f^0` the identity.
    pub fn power(&self, r: usize) -> Shop {
        let mut acc = Shop::identity(self.size());
        for _ in 0..r {
            acc = self.after(&acc).expect("same size");
        }
        acc
    }

    /// `x ↦ {y : x ∈ f(y)}`.
    pub fn inverse(&self) -> Shop {
        let n = self.size();
        let images = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| self.contains(y, x))
                    .fold(0, |m, y| m | 1 << y)
            })
            .collect();
        Shop::from_masks_unchecked(images)
    }

    /// Pointwise inclusion `self(x) ⊆ g(x)`.
    pub fn is_subshop_of(&self, g: &Shop) -> Result<bool, ShopError> {
        self.check_size(g)?;
        Ok(self
            .images
            .iter()
            .zip(&g.images)
            .all(|(&a, &b)| a & !b == 0))
    }

    /// All surjective sub-shops of `self`, itself included, in lexicographic
    /// order.
    pub fn surjective_subshops(&self) -> Vec<Shop> {
        let n = self.size();
        let full = full_mask(n);
        let choices: Vec<Vec<Mask>> = self.images.iter().map(|&m| submasks(m)).collect();
        let mut out = Vec::new();
        let mut current = vec![0 as Mask; n];
        fn rec(
            x: usize,
            covered: Mask,
            full: Mask,
            choices: &[Vec<Mask>],
            current: &mut Vec<Mask>,
            out: &mut Vec<Shop>,
        ) {
            if x == choices.len() {
                if covered == full {
                    out.push(Shop::from_masks_unchecked(current.clone()));
                }
                return;
            }
            // elements only reachable from later images must still be coverable
            let rest = choices[x + 1..]
                .iter()
                .fold(0, |acc, c| acc | c.last().copied().unwrap_or(0));
            for &m in &choices[x] {
                if (covered | m | rest) != full {
                    continue;
                }
                current[x] = m;
                rec(x + 1, covered | m, full, choices, current, out);
            }
        }
        rec(0, 0, full, &choices, &mut current, &mut out);
        out
    }

    pub fn is_permutation(&self) -> bool {
        self.images.iter().all(|m| m.count_ones() == 1)
    }

    /// True if `self` preserves `relation`: whenever `t` is in it, so is every
    /// tuple drawn from the images of `t`'s components.
    pub fn preserves(&self, relation: &Relation) -> bool {
        let n = self.size();
        if relation.max_element().is_some_and(|m| m >= n) {
            return false;
        }
        let table = RelationTable::new(relation, n);
        table.preserved_by(self)
    }

    /// True if `self` is a surjective hyper-endomorphism of `structure`.
    pub fn is_she(&self, structure: &Structure) -> bool {
        self.size() == structure.domain_size()
            && structure.relations().all(|(_, r)| self.preserves(r))
    }

    pub fn detect_shape(&self) -> Shape {
        Shape::of(self)
    }

    pub fn digraph(&self) -> ShopDigraph {
        ShopDigraph::of(self)
    }
}

impl fmt::Display for Shop {
    /// `(01|1|12)`; for domains above 10 elements are comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.size() > 10;
        f.write_str("(")?;
        for (x, &m) in self.images.iter().enumerate() {
            if x > 0 {
                f.write_str("|")?;
            }
            let elems: Vec<String> = bits(m).map(|y| y.to_string()).collect();
            f.write_str(&elems.join(if wide { "," } else { "" }))?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Shop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Shop {
    type Err = ShopError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ShopError::Parse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err("expected `(…|…)`"))?;
        let parts: Vec<&str> = inner.split('|').map(str::trim).collect();
        let wide = inner.contains(',') || parts.len() > 10;
        let mut sets = Vec::with_capacity(parts.len());
        for part in parts {
            let elems: Option<Vec<usize>> = if part.is_empty() {
                Some(Vec::new())
            } else if wide {
                part.split(',').map(|t| t.trim().parse().ok()).collect()
            } else {
                part.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
            };
            sets.push(elems.ok_or_else(|| err("images must list domain elements"))?);
        }
        Shop::from_sets(&sets)
    }
}

pub(crate) fn full_mask(n: usize) -> Mask {
    ((1u32 << n) - 1) as Mask
}

/// Set bits of a mask in ascending order.
pub(crate) fn bits(mut m: Mask) -> impl Iterator<Item = Element> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let x = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(x)
        }
    })
}

/// Non-empty submasks of `m`, ascending.
fn submasks(m: Mask) -> Vec<Mask> {
    let mut out = Vec::new();
    let mut s = m;
    while s != 0 {
        out.push(s);
        s = (s - 1) & m;
    }
    out.reverse();
    out
}

/// Membership table for one relation, indexed by the base-`n` code of a
/// tuple.
pub(crate) struct RelationTable {
    n: usize,
    arity: usize,
    tuples: Vec<Vec<Element>>,
    member: Vec<bool>,
}

impl RelationTable {
    pub(crate) fn new(relation: &Relation, n: usize) -> Self {
        let arity = relation.arity();
        let mut member = vec![false; n.pow(arity as u32)];
        for t in relation.tuples() {
            member[encode(t, n)] = true;
        }
        RelationTable {
            n,
            arity,
            tuples: relation.tuples().iter().cloned().collect(),
            member,
        }
    }

    pub(crate) fn preserved_by(&self, f: &Shop) -> bool {
        let mut digits = vec![0usize; self.arity];
        self.tuples.iter().all(|t| {
            // odometer over the product of images
            let images: Vec<Vec<Element>> = t.iter().map(|&x| f.image(x).collect()).collect();
            digits.iter_mut().for_each(|d| *d = 0);
            loop {
                let code = images
                    .iter()
                    .zip(&digits)
                    .fold(0, |acc, (img, &d)| acc * self.n + img[d]);
                if !self.member[code] {
                    return false;
                }
                let mut i = self.arity;
                loop {
                    if i == 0 {
                        return true;
                    }
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < images[i].len() {
                        break;
                    }
                    digits[i] = 0;
                }
            }
        })
    }
}

fn encode(t: &[Element], n: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

/// Every shop on `n` elements in lexicographic order: `(2ⁿ−1)ⁿ` total
/// hyper-operations filtered to the surjective ones.
pub fn enumerate_shops(n: usize, cap: usize) -> Result<Vec<Shop>, ShopError> {
    if n == 0 || n > MAX_SHOP_DOMAIN {
        return Err(ShopError::BadDomain(n));
    }
    if n > cap {
        return Err(ShopError::OverCap { n, cap });
    }
    let full = full_mask(n);
    let mut out = Vec::new();
    let mut current: Vec<Mask> = vec![1; n];
    loop {
        if current.iter().fold(0, |a, &m| a | m) == full {
            out.push(Shop::from_masks_unchecked(current.clone()));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if current[i] < full {
                current[i] += 1;
                break;
            }
            current[i] = 1;
        }
    }
}

/// `shE(B)`: all shes of `structure`, by filtering every shop.
pub fn she_monoid(structure: &Structure, cap: usize) -> Result<Dsm, ShopError> {
    let n = structure.domain_size();
    let tables: Vec<RelationTable> = structure
        .relations()
        .map(|(_, r)| RelationTable::new(r, n))
        .collect();
    let members = enumerate_shops(n, cap)?
        .into_iter()
        .filter(|f| tables.iter().all(|t| t.preserved_by(f)));
    Ok(Dsm::from_members_unchecked(n, members.collect()))
}
