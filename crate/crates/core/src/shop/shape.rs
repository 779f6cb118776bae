use super::{bits, full_mask, Mask, Shop};
use crate::model::Element;

/// The special forms a shop may take, with every witness listed in
/// ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Shape {
    /// `b` such that the shop is exactly `∀_b`.
    pub forall: Vec<Element>,
    /// `b` such that the shop is exactly `∃_b`.
    pub exists: Vec<Element>,
    /// `(b, b')`, `b ≠ b'`, such that the shop is exactly `∀_b∃_{b'}`.
    pub forall_exists: Vec<(Element, Element)>,
    /// `b` with `f(b) = B`.
    pub a_witnesses: Vec<Element>,
    /// `b` contained in every image.
    pub e_witnesses: Vec<Element>,
    pub permutation: bool,
    /// The shop's digraph is reflexive, symmetric and transitive.
    pub equivalence: bool,
}

impl Shape {
    pub fn of(f: &Shop) -> Shape {
        let n = f.size();
        let full = full_mask(n);
        let a_witnesses: Vec<Element> = (0..n).filter(|&b| f.mask(b) == full).collect();
        let common = f.masks().iter().fold(full, |acc, &m| acc & m);
        let e_witnesses: Vec<Element> = bits(common).collect();

        let forall = a_witnesses
            .iter()
            .copied()
            .filter(|&b| (0..n).all(|x| x == b || f.mask(x) == 1 << x))
            .collect();
        let exists = e_witnesses
            .iter()
            .copied()
            .filter(|&b| (0..n).all(|x| f.mask(x) == (1 << x | 1 << b)))
            .collect();
        let mut forall_exists = Vec::new();
        for &b in &a_witnesses {
            let others = (0..n).filter(|&x| x != b).map(|x| f.mask(x));
            let mut others = others.peekable();
            if let Some(&m) = others.peek() {
                if m.count_ones() == 1 && others.all(|o| o == m) {
                    let b2 = m.trailing_zeros() as usize;
                    if b2 != b {
                        forall_exists.push((b, b2));
                    }
                }
            }
        }

        let equivalence = (0..n).all(|x| {
            let m = f.mask(x);
            // reflexive, and every member's class is this very class
            m >> x & 1 == 1 && bits(m).all(|y| f.mask(y) == m)
        });

        Shape {
            forall,
            exists,
            forall_exists,
            a_witnesses,
            e_witnesses,
            permutation: f.is_permutation(),
            equivalence,
        }
    }

    pub fn is_a(&self) -> bool {
        !self.a_witnesses.is_empty()
    }

    pub fn is_e(&self) -> bool {
        !self.e_witnesses.is_empty()
    }

    pub fn is_forall_exists(&self) -> bool {
        !self.forall_exists.is_empty()
    }
}

/// The digraph of a shop: an edge `x → y` iff `y ∈ f(x)`.
///
/// Totality means no vertex is a sink and surjectivity that none is a
/// source; the canonical-form constructions delete vertices and then peel
/// off the sources or sinks that appear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShopDigraph {
    succ: Vec<Mask>,
}

impl ShopDigraph {
    pub fn of(f: &Shop) -> Self {
        ShopDigraph {
            succ: f.masks().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn has_edge(&self, x: Element, y: Element) -> bool {
        self.succ[x] >> y & 1 == 1
    }

    fn pred_within(&self, y: Element, alive: Mask) -> Mask {
        bits(alive).filter(|&x| self.has_edge(x, y)).fold(0, |m, x| m | 1 << x)
    }

    /// Vertices of `alive` with no in-edge from `alive`.
    pub fn sources(&self, alive: Mask) -> Mask {
        bits(alive)
            .filter(|&y| self.pred_within(y, alive) == 0)
            .fold(0, |m, y| m | 1 << y)
    }

    /// Vertices of `alive` with no out-edge into `alive`.
    pub fn sinks(&self, alive: Mask) -> Mask {
        bits(alive)
            .filter(|&x| self.succ[x] & alive == 0)
            .fold(0, |m, x| m | 1 << x)
    }

    /// Repeatedly deletes the sources (or sinks) of the induced subgraph;
    /// returns the surviving vertices and the number of rounds that removed
    /// something.
    pub fn peel(&self, mut alive: Mask, sources: bool) -> (Mask, usize) {
        let mut rounds = 0;
        loop {
            let doomed = if sources {
                self.sources(alive)
            } else {
                self.sinks(alive)
            };
            if doomed == 0 {
                return (alive, rounds);
            }
            alive &= !doomed;
            rounds += 1;
        }
    }

    /// Vertices reachable from `x` inside `alive` (including `x`).
    fn reach(&self, x: Element, alive: Mask) -> Mask {
        let mut seen: Mask = 1 << x;
        let mut frontier = seen;
        while frontier != 0 {
            let next = bits(frontier).fold(0, |m, v| m | self.succ[v]) & alive & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Strongly connected components of the induced subgraph, each as a mask,
    /// ordered by least vertex.
    pub fn components(&self, alive: Mask) -> Vec<Mask> {
        let mut out = Vec::new();
        let mut left = alive;
        while left != 0 {
            let x = left.trailing_zeros() as usize;
            let fwd = self.reach(x, alive);
            let comp = bits(fwd)
                .filter(|&y| self.reach(y, alive) >> x & 1 == 1)
                .fold(0, |m, y| m | 1 << y);
            out.push(comp);
            left &= !comp;
        }
        out
    }

    fn distances(&self, from: Element, within: Mask) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[from] = Some(0);
        let mut frontier: Mask = 1 << from;
        let mut seen = frontier;
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let next = bits(frontier).fold(0, |m, v| m | self.succ[v]) & within & !seen;
            for y in bits(next) {
                dist[y] = Some(d);
            }
            seen |= next;
            frontier = next;
        }
        dist
    }

    /// Length of a closed walk inside the component `comp` visiting all of
    /// its vertices, or `None` for a trivial component without a loop.
    ///
    /// The walk goes out from the least vertex to each other vertex along a
    /// shortest path and back; a single vertex uses its loop.
    pub fn covering_cycle_len(&self, comp: Mask) -> Option<usize> {
        let root = comp.trailing_zeros() as usize;
        if comp.count_ones() == 1 {
            return self.has_edge(root, root).then_some(1);
        }
        let out = self.distances(root, comp);
        let mut total = 0;
        for v in bits(comp).filter(|&v| v != root) {
            let back = self.distances(v, comp)[root]?;
            total += out[v]? + back;
        }
        Some(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Shop {
        text.parse().unwrap()
    }

    #[test]
    fn a_shop_without_e() {
        let sh = s("(012|1|2)").detect_shape();
        assert_eq!(sh.a_witnesses, vec![0]);
        assert!(!sh.is_e());
        assert!(!sh.is_forall_exists());
    }

    #[test]
    fn e_shop_without_a() {
        let sh = s("(0|01|02)").detect_shape();
        assert_eq!(sh.e_witnesses, vec![0]);
        assert!(!sh.is_a());
    }

    #[test]
    fn boolean_forall_exists() {
        let sh = s("(01|1)").detect_shape();
        assert_eq!(sh.forall_exists, vec![(0, 1)]);
        assert!(sh.is_a() && sh.is_e());
        // on two elements ∀_0∃_1 coincides with ∀_0 and with ∃_1
        assert_eq!(sh.forall, vec![0]);
        assert_eq!(sh.exists, vec![1]);
    }

    #[test]
    fn special_shapes_are_recognised() {
        for n in 2..=4 {
            for b in 0..n {
                assert!(Shop::forall(n, b).detect_shape().forall.contains(&b));
                assert!(Shop::exists(n, b).detect_shape().exists.contains(&b));
                for b2 in (0..n).filter(|&c| c != b) {
                    let sh = Shop::forall_exists(n, b, b2).detect_shape();
                    assert_eq!(sh.forall_exists, vec![(b, b2)]);
                }
            }
        }
    }

    #[test]
    fn equivalences_and_permutations() {
        assert!(s("(01|01|2)").detect_shape().equivalence);
        assert!(s("(0|1|2)").detect_shape().equivalence);
        assert!(!s("(01|1|2)").detect_shape().equivalence);
        assert!(!s("(1|0|2)").detect_shape().equivalence);
        assert!(s("(1|0|2)").detect_shape().permutation);
        assert!(!s("(01|1)").detect_shape().permutation);
    }

    #[test]
    fn peeling_and_components() {
        // inside {0, 1}: 0 → 1 ⟲, so 0 is peeled and 1 survives
        let g = s("(1|1|012)").digraph();
        assert_eq!(g.peel(0b011, true), (0b010, 1));
        assert_eq!(g.sinks(0b011), 0);
        let g = s("(12|0|0)").digraph();
        assert_eq!(g.components(0b111), vec![0b111]);
        assert_eq!(g.covering_cycle_len(0b111), Some(4));
        let g = s("(0|2|1)").digraph();
        assert_eq!(g.components(0b110), vec![0b110]);
        assert_eq!(g.covering_cycle_len(0b110), Some(2));
        assert_eq!(g.covering_cycle_len(0b001), Some(1));
    }
}
