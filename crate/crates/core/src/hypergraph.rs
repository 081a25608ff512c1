//! Linear edge-colored 3-uniform hypergraphs and multiset augmentations.
//!
//! Vertices are dense ids `0..n`, colors are `0..k`. A [`ColoredHypergraph`]
//! is a plain container: it can hold malformed candidate input, and
//! [`validate`] reports everything that is wrong with it instead of refusing
//! to build it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::{Error, Rational, Result};

pub type Vertex = u32;
pub type Color = u32;

/// A triple of vertices with the index of the matching it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperEdge {
    vertices: [Vertex; 3],
    color: Color,
}

impl HyperEdge {
    /// Stores the vertices sorted. A repeated vertex is kept as given so that
    /// validation can report it.
    pub fn new(mut vertices: [Vertex; 3], color: Color) -> Self {
        vertices.sort_unstable();
        Self { vertices, color }
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.vertices
    }

    pub fn color(&self) -> Color {
        self.color
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// True when the three vertices are distinct.
    pub fn is_proper(&self) -> bool {
        self.vertices[0] < self.vertices[1] && self.vertices[1] < self.vertices[2]
    }

    /// The three vertex pairs covered by the edge, each as `(low, high)`.
    pub fn pairs(&self) -> [(Vertex, Vertex); 3] {
        let [a, b, c] = self.vertices;
        [(a, b), (a, c), (b, c)]
    }

    /// Number of shared vertices, counting each distinct vertex once.
    pub fn intersection_size(&self, other: &HyperEdge) -> usize {
        let mut mine = self.vertices.to_vec();
        mine.dedup();
        mine.iter().filter(|v| other.contains(**v)).count()
    }
}

impl fmt::Display for HyperEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.vertices;
        write!(f, "{{{a},{b},{c}}}c{}", self.color)
    }
}

/// The recovery hypergraph: `n` vertices, `k` colors and an ordered edge list.
///
/// Edge indices (positions in [`edges`](Self::edges)) are the stable handles
/// used by augmentations, certificates and the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredHypergraph {
    n: usize,
    k: usize,
    edges: Vec<HyperEdge>,
}

impl ColoredHypergraph {
    pub fn new(n: usize, k: usize, edges: Vec<HyperEdge>) -> Self {
        Self { n, k, edges }
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Self::new(n, k, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[HyperEdge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &HyperEdge {
        &self.edges[index]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Sorts the edge list lexicographically, which is the order writers emit.
    pub fn canonicalize(&mut self) {
        self.edges.sort_unstable();
    }

    pub fn is_canonical(&self) -> bool {
        self.edges.windows(2).all(|w| w[0] <= w[1])
    }

    /// Plain vertex degrees (each edge counted once).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for e in &self.edges {
            for v in e.vertices {
                if let Some(d) = deg.get_mut(v as usize) {
                    *d += 1;
                }
            }
        }
        deg
    }

    /// Edge indices incident to each vertex, in edge order.
    pub fn incidence_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.n];
        for (idx, e) in self.edges.iter().enumerate() {
            for v in e.vertices {
                if let Some(list) = lists.get_mut(v as usize) {
                    if list.last() != Some(&idx) {
                        list.push(idx);
                    }
                }
            }
        }
        lists
    }

    /// Size of every color class, indexed by color.
    pub fn color_class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for e in &self.edges {
            if let Some(s) = sizes.get_mut(e.color as usize) {
                *s += 1;
            }
        }
        sizes
    }

    /// Edge lookup by vertex pair; only meaningful for linear hypergraphs,
    /// where every pair lies in at most one edge.
    pub fn pair_index(&self) -> HashMap<(Vertex, Vertex), usize> {
        let mut map = HashMap::with_capacity(self.edges.len() * 3);
        for (idx, e) in self.edges.iter().enumerate() {
            for p in e.pairs() {
                map.entry(p).or_insert(idx);
            }
        }
        map
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub linear: bool,
    pub matchings_ok: bool,
    pub min_matching_size: usize,
    /// `min_matching_size / n`, exact.
    pub achieved_delta: Rational,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub edges: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    MalformedEdge,
    ColorOutOfRange,
    DuplicateTriple,
    SharedPair,
    SameColorOverlap,
    SmallMatching,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// `ceil(delta * n)` computed exactly.
pub fn required_matching_size(delta: Rational, n: usize) -> usize {
    let scaled = delta * Rational::from_integer(n as u64);
    scaled.ceil().to_integer() as usize
}

/// Checks linearity, the matching property of every color class, and
/// (when `delta` is given) that each class has at least `ceil(delta * n)`
/// edges. Every problem found is listed; nothing aborts.
pub fn validate(h: &ColoredHypergraph, delta: Option<Rational>) -> ValidationReport {
    let mut violations = Vec::new();
    let mut linear = true;
    let mut matchings_ok = true;

    // Edges usable for the pairwise checks.
    let mut proper = vec![true; h.edges.len()];
    for (idx, e) in h.edges.iter().enumerate() {
        if let Some(&v) = e.vertices.iter().find(|&&v| v as usize >= h.n) {
            proper[idx] = false;
            linear = false;
            violations.push(Violation {
                kind: ViolationKind::MalformedEdge,
                edges: vec![idx],
                message: format!("edge {idx} {e}: vertex {v} out of range 0..{}", h.n),
            });
        } else if !e.is_proper() {
            proper[idx] = false;
            linear = false;
            violations.push(Violation {
                kind: ViolationKind::MalformedEdge,
                edges: vec![idx],
                message: format!("edge {idx} {e}: repeated vertex"),
            });
        }
        if e.color as usize >= h.k {
            matchings_ok = false;
            violations.push(Violation {
                kind: ViolationKind::ColorOutOfRange,
                edges: vec![idx],
                message: format!("edge {idx} {e}: color out of range 0..{}", h.k),
            });
        }
    }

    // Duplicate triples (any colors).
    let mut by_triple: BTreeMap<[Vertex; 3], Vec<usize>> = BTreeMap::new();
    for (idx, e) in h.edges.iter().enumerate() {
        if proper[idx] {
            by_triple.entry(e.vertices).or_default().push(idx);
        }
    }
    for (triple, idxs) in &by_triple {
        if idxs.len() > 1 {
            linear = false;
            violations.push(Violation {
                kind: ViolationKind::DuplicateTriple,
                edges: idxs.clone(),
                message: format!(
                    "triple {triple:?} appears {} times (edges {idxs:?})",
                    idxs.len()
                ),
            });
        }
    }

    // Linearity via pair occupancy; each offending edge pair is reported once.
    let mut pair_owners: HashMap<(Vertex, Vertex), Vec<usize>> = HashMap::new();
    for (idx, e) in h.edges.iter().enumerate() {
        if proper[idx] {
            for p in e.pairs() {
                pair_owners.entry(p).or_default().push(idx);
            }
        }
    }
    let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for owners in pair_owners.values() {
        for (i, &a) in owners.iter().enumerate() {
            for &b in &owners[i + 1..] {
                *shared.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
    }
    for &(a, b) in shared.keys() {
        if h.edges[a].vertices == h.edges[b].vertices {
            continue;
        }
        linear = false;
        violations.push(Violation {
            kind: ViolationKind::SharedPair,
            edges: vec![a, b],
            message: format!(
                "edges {a} {} and {b} {} share {} vertices",
                h.edges[a],
                h.edges[b],
                h.edges[a].intersection_size(&h.edges[b])
            ),
        });
    }

    // Matching property per color.
    let mut occupant: HashMap<(Color, Vertex), Vec<usize>> = HashMap::new();
    for (idx, e) in h.edges.iter().enumerate() {
        if proper[idx] && (e.color as usize) < h.k {
            for v in e.vertices {
                occupant.entry((e.color, v)).or_default().push(idx);
            }
        }
    }
    let mut overlaps: BTreeSet<(usize, usize)> = BTreeSet::new();
    for owners in occupant.values() {
        for (i, &a) in owners.iter().enumerate() {
            for &b in &owners[i + 1..] {
                overlaps.insert((a.min(b), a.max(b)));
            }
        }
    }
    for (a, b) in overlaps {
        matchings_ok = false;
        violations.push(Violation {
            kind: ViolationKind::SameColorOverlap,
            edges: vec![a, b],
            message: format!(
                "edges {a} {} and {b} {} have the same color and intersect",
                h.edges[a], h.edges[b]
            ),
        });
    }

    let sizes = h.color_class_sizes();
    let min_matching_size = sizes.iter().copied().min().unwrap_or(0);
    if let Some(delta) = delta {
        let need = required_matching_size(delta, h.n);
        for (color, &size) in sizes.iter().enumerate() {
            if size < need {
                matchings_ok = false;
                violations.push(Violation {
                    kind: ViolationKind::SmallMatching,
                    edges: Vec::new(),
                    message: format!("color {color} has {size} edges, need at least {need}"),
                });
            }
        }
    }

    let achieved_delta = if h.n == 0 {
        Rational::from_integer(0)
    } else {
        Rational::new(min_matching_size as u64, h.n as u64)
    };

    ValidationReport {
        linear,
        matchings_ok,
        min_matching_size,
        achieved_delta,
        violations,
    }
}

/// A multiset over the edges of a base hypergraph.
///
/// Multiplicities are full counts; [`mod2_reduce`](Self::mod2_reduce) gives
/// the parity view. Zero multiplicities are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Augmentation<'a> {
    base: &'a ColoredHypergraph,
    multiplicity: BTreeMap<usize, u64>,
}

impl<'a> Augmentation<'a> {
    pub fn new(base: &'a ColoredHypergraph) -> Self {
        Self {
            base,
            multiplicity: BTreeMap::new(),
        }
    }

    /// The 0/1 augmentation containing each listed edge once (duplicates
    /// in `edges` add up).
    pub fn from_edges(base: &'a ColoredHypergraph, edges: &[usize]) -> Result<Self> {
        let mut aug = Self::new(base);
        for &e in edges {
            aug.add(e, 1)?;
        }
        Ok(aug)
    }

    pub fn base(&self) -> &'a ColoredHypergraph {
        self.base
    }

    pub fn add(&mut self, edge: usize, count: u64) -> Result<()> {
        if edge >= self.base.num_edges() {
            return Err(Error::DanglingEdge(edge));
        }
        if count > 0 {
            *self.multiplicity.entry(edge).or_default() += count;
        }
        Ok(())
    }

    pub fn multiplicity(&self, edge: usize) -> u64 {
        self.multiplicity.get(&edge).copied().unwrap_or(0)
    }

    /// `(edge index, multiplicity)` pairs with positive multiplicity, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.multiplicity.iter().map(|(&e, &m)| (e, m))
    }

    /// Edge indices with positive multiplicity, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.multiplicity.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicity.is_empty()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicity.values().sum()
    }

    /// Multiplicity-weighted degree of `v`.
    ///
    /// # Panics
    ///
    /// Panics if `v` is not a vertex of the base hypergraph.
    pub fn degree(&self, v: Vertex) -> u64 {
        assert!((v as usize) < self.base.n(), "vertex {v} out of range");
        self.iter()
            .filter(|&(e, _)| self.base.edge(e).contains(v))
            .map(|(_, m)| m)
            .sum()
    }

    /// All weighted degrees at once.
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.base.n()];
        for (e, m) in self.iter() {
            for v in self.base.edge(e).vertices() {
                if let Some(d) = deg.get_mut(v as usize) {
                    *d += m;
                }
            }
        }
        deg
    }

    pub fn is_even(&self) -> bool {
        self.degrees().iter().all(|d| d % 2 == 0)
    }

    /// Total multiplicity of the edges of color `color`.
    pub fn color_multiplicity(&self, color: Color) -> u64 {
        self.iter()
            .filter(|&(e, _)| self.base.edge(e).color() == color)
            .map(|(_, m)| m)
            .sum()
    }

    /// The multiset of colors, as `color -> total multiplicity`.
    pub fn color_counts(&self) -> BTreeMap<Color, u64> {
        let mut counts = BTreeMap::new();
        for (e, m) in self.iter() {
            *counts.entry(self.base.edge(e).color()).or_default() += m;
        }
        counts
    }

    /// Colors whose multiplicity is odd, ascending.
    pub fn odd_colors(&self) -> Vec<Color> {
        self.color_counts()
            .into_iter()
            .filter(|(_, m)| m % 2 == 1)
            .map(|(c, _)| c)
            .collect()
    }

    /// Replaces every multiplicity by its parity.
    pub fn mod2_reduce(&self) -> Augmentation<'a> {
        Augmentation {
            base: self.base,
            multiplicity: self
                .multiplicity
                .iter()
                .filter(|(_, &m)| m % 2 == 1)
                .map(|(&e, _)| (e, 1))
                .collect(),
        }
    }
}

/// An edge-colored 2-uniform graph that is a union of color matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub n: usize,
    pub k: usize,
    /// `(u, v, color)` with `u != v`.
    pub edges: Vec<(Vertex, Vertex, Color)>,
}

impl ColoredGraph {
    /// Per vertex, `(neighbor, edge index)` in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(Vertex, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (idx, &(u, v, _)) in self.edges.iter().enumerate() {
            adj[u as usize].push((v, idx));
            adj[v as usize].push((u, idx));
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn edge(a: Vertex, b: Vertex, c: Vertex, color: Color) -> HyperEdge {
        HyperEdge::new([a, b, c], color)
    }

    fn planted() -> ColoredHypergraph {
        ColoredHypergraph::new(
            6,
            4,
            vec![
                edge(0, 1, 2, 0),
                edge(0, 3, 4, 1),
                edge(1, 3, 5, 2),
                edge(2, 4, 5, 3),
            ],
        )
    }

    #[test]
    fn single_edge_is_valid() {
        let h = ColoredHypergraph::new(3, 1, vec![edge(0, 1, 2, 0)]);
        let r = validate(&h, None);
        assert!(r.linear && r.matchings_ok && r.is_valid());
        assert_eq!(r.achieved_delta, Rational::new(1, 3));
        assert_eq!(r.min_matching_size, 1);
    }

    #[test]
    fn shared_pair_breaks_linearity() {
        let h = ColoredHypergraph::new(4, 2, vec![edge(0, 1, 2, 0), edge(0, 1, 3, 1)]);
        let r = validate(&h, None);
        assert!(!r.linear);
        assert!(r.matchings_ok);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::SharedPair);
        assert_eq!(r.violations[0].edges, vec![0, 1]);
    }

    #[test]
    fn hadamard_k3_instance_is_valid() {
        // Vertices are F2^3 values read as integers, most significant bit first.
        let h = ColoredHypergraph::new(
            8,
            3,
            vec![edge(0, 1, 5, 0), edge(3, 6, 7, 1), edge(2, 4, 7, 2)],
        );
        let r = validate(&h, Some(Rational::new(1, 8)));
        assert!(r.is_valid(), "{:?}", r.violations);
        assert_eq!(r.achieved_delta, Rational::new(1, 8));
        // Brute-force pairwise intersections and XOR sums.
        for (i, e) in h.edges().iter().enumerate() {
            let [a, b, c] = e.vertices();
            assert_eq!(a ^ b ^ c, 1 << (2 - i));
            for f in &h.edges()[i + 1..] {
                assert!(e.intersection_size(f) <= 1);
            }
        }
    }

    #[test]
    fn malformed_edges_are_reported_not_fatal() {
        let h = ColoredHypergraph::new(
            4,
            1,
            vec![edge(0, 0, 1, 0), edge(1, 2, 9, 0), edge(0, 2, 3, 5)],
        );
        let r = validate(&h, None);
        let kinds: Vec<_> = r.violations.iter().map(|v| v.kind).collect();
        assert_eq!(
            kinds,
            vec![
                ViolationKind::MalformedEdge,
                ViolationKind::MalformedEdge,
                ViolationKind::ColorOutOfRange
            ]
        );
        assert!(!r.linear && !r.matchings_ok);
    }

    #[test]
    fn duplicate_triples_rejected() {
        let h = ColoredHypergraph::new(3, 2, vec![edge(0, 1, 2, 0), edge(2, 1, 0, 1)]);
        let r = validate(&h, None);
        assert!(!r.linear);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::DuplicateTriple);
    }

    #[test]
    fn same_color_overlap_and_small_matching() {
        let h = ColoredHypergraph::new(
            9,
            2,
            vec![edge(0, 1, 2, 0), edge(2, 3, 4, 0), edge(5, 6, 7, 1)],
        );
        let r = validate(&h, Some(Rational::new(2, 9)));
        assert!(r.linear);
        assert!(!r.matchings_ok);
        let kinds: Vec<_> = r.violations.iter().map(|v| v.kind).collect();
        assert_eq!(
            kinds,
            vec![
                ViolationKind::SameColorOverlap,
                ViolationKind::SmallMatching
            ]
        );
        assert_eq!(r.min_matching_size, 1);
    }

    #[test]
    fn degree_examples() {
        let h = ColoredHypergraph::new(5, 2, vec![edge(0, 1, 2, 0), edge(0, 3, 4, 1)]);
        let mut a = Augmentation::new(&h);
        assert_eq!(a.degree(0), 0);
        a.add(0, 2).unwrap();
        assert_eq!(a.degree(0), 2);
        a.add(0, 1).unwrap();
        a.add(1, 1).unwrap();
        // multiplicities 3 and 1 on the two edges through vertex 0
        assert_eq!(a.degree(0), 4);
        assert!(a.add(2, 1).is_err());
    }

    #[test]
    #[should_panic]
    fn degree_out_of_range_panics() {
        let h = ColoredHypergraph::new(3, 1, vec![edge(0, 1, 2, 0)]);
        Augmentation::new(&h).degree(3);
    }

    #[test]
    fn evenness_examples() {
        let h = ColoredHypergraph::new(3, 3, vec![edge(0, 1, 2, 2)]);
        let mut a = Augmentation::new(&h);
        assert!(a.is_even());
        assert_eq!(a.color_multiplicity(0), 0);
        a.add(0, 1).unwrap();
        assert!(!a.is_even());
        a.add(0, 1).unwrap();
        assert!(a.is_even());
        a.add(0, 1).unwrap();
        assert_eq!(a.color_multiplicity(2), 3);
        assert_eq!(a.color_multiplicity(1), 0);
    }

    #[test]
    fn planted_full_subgraph_has_each_color_once() {
        let h = planted();
        let a = Augmentation::from_edges(&h, &[0, 1, 2, 3]).unwrap();
        assert!(a.is_even());
        for c in 0..4 {
            assert_eq!(a.color_multiplicity(c), 1);
        }
    }

    #[test]
    fn mod2_examples() {
        let h = ColoredHypergraph::new(6, 2, vec![edge(0, 1, 2, 0), edge(3, 4, 5, 1)]);
        let mut a = Augmentation::new(&h);
        a.add(0, 2).unwrap();
        a.add(1, 3).unwrap();
        let r = a.mod2_reduce();
        assert_eq!(r.multiplicity(0), 0);
        assert_eq!(r.multiplicity(1), 1);
        assert_eq!(r.support(), vec![1]);
    }

    fn arb_hypergraph() -> impl Strategy<Value = ColoredHypergraph> {
        (3usize..10, 1usize..4).prop_flat_map(|(n, k)| {
            let e = (
                0..n as Vertex,
                0..n as Vertex,
                0..n as Vertex,
                0..k as Color,
            )
                .prop_filter("distinct", |(a, b, c, _)| a != b && b != c && a != c)
                .prop_map(|(a, b, c, col)| HyperEdge::new([a, b, c], col));
            proptest::collection::vec(e, 0..8)
                .prop_map(move |edges| ColoredHypergraph::new(n, k, edges))
        })
    }

    proptest! {
        #[test]
        fn mod2_reduce_preserves_parities(
            h in arb_hypergraph(),
            mults in proptest::collection::vec(0u64..4, 8),
        ) {
            let mut a = Augmentation::new(&h);
            for (e, &m) in mults.iter().enumerate().take(h.num_edges()) {
                a.add(e, m).unwrap();
            }
            let r = a.mod2_reduce();
            prop_assert_eq!(a.is_even(), r.is_even());
            for c in 0..h.k() as Color {
                prop_assert_eq!(a.color_multiplicity(c) % 2, r.color_multiplicity(c) % 2);
            }
            let degree_sum: u64 = (0..h.n() as Vertex).map(|v| a.degree(v)).sum();
            prop_assert_eq!(degree_sum, 3 * a.total_multiplicity());
        }

        #[test]
        fn linearity_flags_exactly_the_large_intersections(h in arb_hypergraph()) {
            let r = validate(&h, None);
            let mut expected = BTreeSet::new();
            for (i, e) in h.edges().iter().enumerate() {
                for (j, f) in h.edges().iter().enumerate().skip(i + 1) {
                    if e.intersection_size(f) >= 2 {
                        expected.insert((i, j));
                    }
                }
            }
            let flagged: BTreeSet<_> = r
                .violations
                .iter()
                .filter(|v| matches!(v.kind, ViolationKind::SharedPair | ViolationKind::DuplicateTriple))
                .flat_map(|v| {
                    let e = v.edges.clone();
                    (0..e.len()).flat_map(move |i| {
                        let e = e.clone();
                        (i + 1..e.len()).map(move |j| (e[i], e[j]))
                    })
                })
                .collect();
            prop_assert_eq!(flagged, expected.clone());
            prop_assert_eq!(r.linear, expected.is_empty());
            prop_assert_eq!(r.violations.is_empty(), r.linear && r.matchings_ok);
        }
    }
}
