use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use super::{Dsm, DsmError};
use crate::shop::{enumerate_shops, Shop};

/// All DSMs on `n` elements ordered by size and then by member list, with
/// the covering pairs of the inclusion order.
#[derive(Debug, Clone)]
pub struct DsmLattice {
    pub n: usize,
    pub nodes: Vec<Dsm>,
    /// `(lower, upper)` index pairs, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl DsmLattice {
    pub fn bottom(&self) -> &Dsm {
        &self.nodes[0]
    }

    pub fn top(&self) -> &Dsm {
        self.nodes.last().expect("a lattice has at least one node")
    }

    pub fn position(&self, d: &Dsm) -> Option<usize> {
        self.nodes.iter().position(|x| x == d)
    }
}

struct Universe {
    shops: Vec<Shop>,
    index: HashMap<Shop, usize>,
    down: Vec<Vec<usize>>,
    /// Strict super-shops of each shop.
    up: Vec<Vec<usize>>,
    table: Option<Vec<u32>>,
}

impl Universe {
    fn new(n: usize, cap: usize) -> Result<Self, DsmError> {
        let shops = enumerate_shops(n, cap)?;
        let index: HashMap<Shop, usize> =
            shops.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let down: Vec<Vec<usize>> = shops
            .iter()
            .map(|f| f.surjective_subshops().iter().map(|g| index[g]).collect())
            .collect();
        let mut up = vec![Vec::new(); shops.len()];
        for (x, below) in down.iter().enumerate() {
            for &y in below.iter().filter(|&&y| y != x) {
                up[y].push(x);
            }
        }
        let mut u = Universe {
            shops,
            index,
            down,
            up,
            table: None,
        };
        let m = u.shops.len();
        if m <= 1024 {
            let mut table = vec![0u32; m * m];
            for i in 0..m {
                for j in 0..m {
                    table[i * m + j] = u.compose_slow(i, j) as u32;
                }
            }
            u.table = Some(table);
        }
        Ok(u)
    }

    fn compose_slow(&self, g: usize, f: usize) -> usize {
        let h = self.shops[g].after(&self.shops[f]).expect("equal sizes");
        self.index[&h]
    }

    /// Index of `shops[g] ∘ shops[f]`.
    fn compose(&self, g: usize, f: usize) -> usize {
        match &self.table {
            Some(t) => t[g * self.shops.len() + f] as usize,
            None => self.compose_slow(g, f),
        }
    }

    /// The least DSM containing the DSM `base` and the shop `f`.
    ///
    /// Composition is monotone, so only shops maximal at the time they are
    /// reached need composing; everything below them follows by down-closure.
    fn join(&self, base: &FixedBitSet, f: usize) -> FixedBitSet {
        let mut set = base.clone();
        let dominated =
            |x: usize, set: &FixedBitSet| self.up[x].iter().any(|&z| set.contains(z));
        let mut members: Vec<usize> = set.ones().filter(|&x| !dominated(x, &set)).collect();
        let mut queue = VecDeque::new();
        let add = |x: usize, set: &mut FixedBitSet, queue: &mut VecDeque<usize>| {
            if !set.contains(x) {
                for &y in &self.down[x] {
                    if !set.put(y) {
                        queue.push_back(y);
                    }
                }
            }
        };
        add(f, &mut set, &mut queue);
        while let Some(x) = queue.pop_front() {
            if dominated(x, &set) {
                continue;
            }
            members.push(x);
            let mut k = 0;
            while k < members.len() {
                let y = members[k];
                add(self.compose(x, y), &mut set, &mut queue);
                add(self.compose(y, x), &mut set, &mut queue);
                k += 1;
            }
        }
        set
    }

    fn to_dsm(&self, n: usize, bits: &FixedBitSet) -> Dsm {
        let members: BTreeSet<Shop> = bits.ones().map(|i| self.shops[i].clone()).collect();
        Dsm::from_members_unchecked(n, members)
    }
}

/// Enumerates every DSM on `n` elements.
///
/// Every DSM is the join of the singleton closures of its members, so
/// starting from `{id}` and joining one shop at a time reaches all of them.
/// The covers of `D` are the minimal sets among the joins `D ∨ ⟨f⟩`. The
/// default limit is `n ≤ 3`; `allow_large` raises it to 4.
pub fn enumerate_dsms(n: usize, allow_large: bool) -> Result<DsmLattice, DsmError> {
    let cap = if allow_large { 4 } else { 3 };
    if n > cap {
        return Err(DsmError::OverCap { n, cap });
    }
    let universe = Universe::new(n, cap)?;
    let m = universe.shops.len();
    let id = universe.index[&Shop::identity(n)];
    let mut bottom = FixedBitSet::with_capacity(m);
    bottom.insert(id);

    let mut ids: HashMap<FixedBitSet, usize> = HashMap::from([(bottom.clone(), 0)]);
    let mut found = vec![bottom];
    let mut covers: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < found.len() {
        let base = found[next].clone();
        let mut joins: Vec<usize> = Vec::new();
        for f in 0..m {
            if base.contains(f) {
                continue;
            }
            let joined = universe.join(&base, f);
            let k = *ids.entry(joined.clone()).or_insert_with(|| {
                found.push(joined);
                found.len() - 1
            });
            if !joins.contains(&k) {
                joins.push(k);
            }
        }
        let minimal = joins
            .iter()
            .copied()
            .filter(|&a| {
                !joins
                    .iter()
                    .any(|&b| b != a && found[b].is_subset(&found[a]))
            })
            .collect();
        covers.push(minimal);
        next += 1;
    }

    // Sort by size, then by sorted member indices.
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by_cached_key(|&i| (found[i].count_ones(..), found[i].ones().collect::<Vec<_>>()));
    let mut rank = vec![0; found.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let nodes = order.iter().map(|&i| universe.to_dsm(n, &found[i])).collect();
    let mut edges: Vec<(usize, usize)> = covers
        .iter()
        .enumerate()
        .flat_map(|(lo, ups)| ups.iter().map(move |&up| (lo, up)))
        .map(|(lo, up)| (rank[lo], rank[up]))
        .collect();
    edges.sort_unstable();
    Ok(DsmLattice { n, nodes, edges })
}

/// Renders the Hasse diagram as a DOT digraph, bottom first. Nodes are
/// labelled with generator notation and, when present, the entry of
/// `labels` for their index.
pub fn export_dot(lattice: &DsmLattice, labels: &BTreeMap<usize, String>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph dsm_lattice_{} {{", lattice.n);
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    for (i, d) in lattice.nodes.iter().enumerate() {
        let mut label = format!("{}\\n|D| = {}", d.display_name(), d.len());
        if let Some(extra) = labels.get(&i) {
            label.push_str("\\n");
            label.push_str(extra);
        }
        let _ = writeln!(out, "  d{i} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    for (lo, up) in &lattice.edges {
        let _ = writeln!(out, "  d{lo} -> d{up};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Shop {
        text.parse().unwrap()
    }

    #[test]
    fn boolean_lattice() {
        let l = enumerate_dsms(2, false).unwrap();
        assert_eq!(l.nodes.len(), 5);
        assert_eq!(l.bottom(), &Dsm::bottom(2));
        assert_eq!(l.top().len(), 7);
        for g in ["(0|01)", "(1|0)", "(01|1)"] {
            let d = Dsm::closure(2, [s(g)]).unwrap();
            assert!(l.position(&d).is_some(), "{g}");
        }
        assert_eq!(l.edges.len(), 6);
        assert_eq!(l.edges, vec![(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
    }

    #[test]
    fn trivial_lattice() {
        let l = enumerate_dsms(1, false).unwrap();
        assert_eq!(l.nodes.len(), 1);
        assert!(l.edges.is_empty());
        let dot = export_dot(&l, &BTreeMap::new());
        assert_eq!(dot.matches("->").count(), 0);
        assert_eq!(dot.matches("label=").count(), 1);
    }

    #[test]
    fn over_cap_needs_the_flag() {
        assert!(matches!(
            enumerate_dsms(4, false),
            Err(DsmError::OverCap { n: 4, cap: 3 })
        ));
        assert!(matches!(
            enumerate_dsms(5, true),
            Err(DsmError::OverCap { n: 5, cap: 4 })
        ));
    }

    #[test]
    fn nodes_are_dsms_and_form_a_moore_family() {
        for n in 2..=3 {
            let l = enumerate_dsms(n, false).unwrap();
            let set: BTreeSet<&Dsm> = l.nodes.iter().collect();
            assert_eq!(set.len(), l.nodes.len());
            for d in &l.nodes {
                if n == 2 || d.len() < 40 {
                    d.check_invariants().unwrap();
                }
            }
            for a in &l.nodes {
                for b in &l.nodes {
                    let meet: BTreeSet<Shop> =
                        a.members().intersection(b.members()).cloned().collect();
                    let meet = Dsm::from_members_unchecked(n, meet);
                    assert!(set.contains(&meet));
                }
            }
        }
    }

    #[test]
    fn hasse_edges_are_covers() {
        let l = enumerate_dsms(2, false).unwrap();
        let naive: Vec<(usize, usize)> = (0..l.nodes.len())
            .flat_map(|a| (0..l.nodes.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| {
                let lt = |x: usize, y: usize| x != y && l.nodes[x].is_subset(&l.nodes[y]);
                lt(a, b) && !(0..l.nodes.len()).any(|c| lt(a, c) && lt(c, b))
            })
            .collect();
        assert_eq!(l.edges, naive);
    }

    #[test]
    fn permutation_subgroups_form_a_meet_closed_family() {
        for (n, expected) in [(2, 2), (3, 6)] {
            let l = enumerate_dsms(n, false).unwrap();
            let groups: Vec<&Dsm> = l.nodes.iter().filter(|d| d.is_permutation_subgroup()).collect();
            assert_eq!(groups.len(), expected);
            for a in &groups {
                for b in &groups {
                    let meet: BTreeSet<Shop> =
                        a.members().intersection(b.members()).cloned().collect();
                    let meet = Dsm::from_members_unchecked(n, meet);
                    assert!(groups.contains(&&meet));
                }
            }
        }
    }

    #[test]
    fn three_element_count_is_stable() {
        let a = enumerate_dsms(3, false).unwrap();
        let b = enumerate_dsms(3, false).unwrap();
        assert_eq!(a.nodes.len(), b.nodes.len());
        assert_eq!(a.edges, b.edges);
        assert_eq!(a.top().len(), 265);
        // regression baseline from the first verified run
        assert_eq!((a.nodes.len(), a.edges.len()), (115, 276));
    }

    #[test]
    fn dot_is_deterministic() {
        let l = enumerate_dsms(2, false).unwrap();
        let labels = BTreeMap::from([(0, "PSPACE-complete".to_string())]);
        let a = export_dot(&l, &labels);
        assert_eq!(a, export_dot(&enumerate_dsms(2, false).unwrap(), &labels));
        assert_eq!(a.matches("->").count(), 6);
        assert!(a.contains("⟨(0|01)⟩"));
        assert!(a.contains("PSPACE-complete"));
    }
}
