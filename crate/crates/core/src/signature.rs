//! The signature graph of a linear colored hypergraph.
//!
//! Vertices are ordered pairs `(u, v)` of distinct hypergraph vertices. Two
//! pairs `(u1, v1)` and `(u2, v2)` with disjoint supports are adjacent when
//! some `w` has `{u1, u2, w}` and `{v1, v2, w}` both in the hypergraph; the
//! two hyperedges form a cherry at `w`. Linearity makes `w` unique, so every
//! cherry yields exactly four signature edges and the edge count is
//! `4 · Σ_v C(deg(v), 2)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::hypergraph::{validate, Augmentation, Color, ColoredHypergraph, Vertex};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigVertex {
    pub first: Vertex,
    pub second: Vertex,
}

impl SigVertex {
    pub fn new(first: Vertex, second: Vertex) -> Self {
        debug_assert_ne!(first, second);
        Self { first, second }
    }

    pub fn swapped(self) -> Self {
        Self {
            first: self.second,
            second: self.first,
        }
    }
}

impl fmt::Display for SigVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// An edge of the signature graph, stored with `a < b`.
///
/// `t[0]` is the hyperedge `{a.first, b.first, cause}` and `t[1]` is
/// `{a.second, b.second, cause}`; `colors` lists their colors in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigEdge {
    pub a: SigVertex,
    pub b: SigVertex,
    pub cause: Vertex,
    pub t: [usize; 2],
    pub colors: [Color; 2],
}

impl SigEdge {
    fn oriented(
        a: SigVertex,
        b: SigVertex,
        cause: Vertex,
        t: [usize; 2],
        colors: [Color; 2],
    ) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Self {
            a,
            b,
            cause,
            t,
            colors,
        }
    }

    /// The label `col(e)` as an unordered pair, smaller color first.
    pub fn color_pair(&self) -> (Color, Color) {
        let [x, y] = self.colors;
        (x.min(y), x.max(y))
    }

    pub fn has_color(&self, c: Color) -> bool {
        self.colors.contains(&c)
    }

    pub fn other(&self, x: SigVertex) -> SigVertex {
        if x == self.a {
            self.b
        } else {
            self.a
        }
    }

    /// Image under `(u, v) ↦ (v, u)`.
    pub fn swapped(&self) -> SigEdge {
        Self::oriented(
            self.a.swapped(),
            self.b.swapped(),
            self.cause,
            [self.t[1], self.t[0]],
            [self.colors[1], self.colors[0]],
        )
    }
}

/// The signature graph (or a subgraph of it) over a fixed hypergraph.
///
/// Only pair-vertices incident to at least one edge are materialized.
#[derive(Debug, Clone)]
pub struct SignatureGraph<'a> {
    base: &'a ColoredHypergraph,
    vertices: Vec<SigVertex>,
    index: HashMap<SigVertex, usize>,
    edges: Vec<SigEdge>,
    ends: Vec<[usize; 2]>,
    adjacency: Vec<Vec<usize>>,
}

impl<'a> SignatureGraph<'a> {
    /// Builds the graph on an edge list; edges are sorted and deduplicated.
    pub fn from_edges(base: &'a ColoredHypergraph, mut edges: Vec<SigEdge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut vertices: Vec<SigVertex> = edges.iter().flat_map(|e| [e.a, e.b]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let index: HashMap<SigVertex, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        let ends: Vec<[usize; 2]> = edges
            .iter()
            .enumerate()
            .map(|(id, e)| {
                let ends = [index[&e.a], index[&e.b]];
                adjacency[ends[0]].push(id);
                adjacency[ends[1]].push(id);
                ends
            })
            .collect();
        Self {
            base,
            vertices,
            index,
            edges,
            ends,
            adjacency,
        }
    }

    pub fn base(&self) -> &'a ColoredHypergraph {
        self.base
    }

    pub fn vertices(&self) -> &[SigVertex] {
        &self.vertices
    }

    pub fn vertex(&self, idx: usize) -> SigVertex {
        self.vertices[idx]
    }

    pub fn vertex_index(&self, v: SigVertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[SigEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &SigEdge {
        &self.edges[id]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, e: &SigEdge) -> Option<usize> {
        self.edges.binary_search(e).ok()
    }

    /// Vertex indices of the two endpoints of edge `id`.
    pub fn endpoints(&self, id: usize) -> [usize; 2] {
        self.ends[id]
    }

    /// Index of the endpoint of `id` that is not `x`.
    pub fn opposite(&self, id: usize, x: usize) -> usize {
        let [p, q] = self.ends[id];
        if p == x {
            q
        } else {
            p
        }
    }

    /// Edge ids incident to vertex index `x`, ascending.
    pub fn incident(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn average_degree(&self) -> Rational {
        if self.vertices.is_empty() {
            Rational::from_integer(0)
        } else {
            Rational::new(2 * self.edges.len() as u64, self.vertices.len() as u64)
        }
    }

    /// Subgraph induced by the vertex indices for which `keep` is true.
    pub fn induced(&self, keep: &[bool]) -> SignatureGraph<'a> {
        let edges = self
            .edges
            .iter()
            .zip(&self.ends)
            .filter(|(_, [p, q])| keep[*p] && keep[*q])
            .map(|(e, _)| *e)
            .collect();
        Self::from_edges(self.base, edges)
    }
}

fn cherry_edges(h: &ColoredHypergraph, w: Vertex, x: usize, y: usize) -> [SigEdge; 4] {
    let others = |idx: usize| -> [Vertex; 2] {
        let [p, q, r] = h.edge(idx).vertices();
        match (p == w, q == w) {
            (true, _) => [q, r],
            (_, true) => [p, r],
            _ => [p, q],
        }
    };
    let mut out = [SigEdge {
        a: SigVertex::new(0, 1),
        b: SigVertex::new(0, 1),
        cause: w,
        t: [0, 0],
        colors: [0, 0],
    }; 4];
    let mut slot = 0;
    for (first, second) in [(x, y), (y, x)] {
        let [x1, x2] = others(first);
        let [y1, y2] = others(second);
        let t = [first, second];
        let colors = [h.edge(first).color(), h.edge(second).color()];
        for (s1, s2) in [(y1, y2), (y2, y1)] {
            out[slot] =
                SigEdge::oriented(SigVertex::new(x1, s1), SigVertex::new(x2, s2), w, t, colors);
            slot += 1;
        }
    }
    out
}

/// Builds the signature graph of `h`, which must pass [`validate`] (a shared
/// vertex pair would make the causing vertex ambiguous).
///
/// Work is split by causing vertex and merged into one sorted edge list, so
/// the result does not depend on scheduling.
pub fn build_signature_graph(h: &ColoredHypergraph) -> Result<SignatureGraph<'_>> {
    let report = validate(h, None);
    if let Some(v) = report.violations.first() {
        return Err(Error::Structural(format!(
            "signature graph needs a valid linear hypergraph: {v}"
        )));
    }
    let incidence = h.incidence_lists();
    let edges: Vec<SigEdge> = incidence
        .par_iter()
        .enumerate()
        .flat_map_iter(|(w, inc)| {
            let w = w as Vertex;
            (0..inc.len()).flat_map(move |i| {
                (i + 1..inc.len()).flat_map(move |j| cherry_edges(h, w, inc[i], inc[j]))
            })
        })
        .collect();
    let expected = edges.len();
    let g = SignatureGraph::from_edges(h, edges);
    if g.num_edges() != expected {
        return Err(Error::Internal(format!(
            "{} duplicate signature edges on a linear hypergraph",
            expected - g.num_edges()
        )));
    }
    Ok(g)
}

/// `4 · Σ_v C(deg(v), 2)`, the number of signature edges of a linear `h`.
pub fn exact_edge_count(h: &ColoredHypergraph) -> u64 {
    h.degrees()
        .iter()
        .map(|&d| {
            let d = d as u64;
            4 * (d * d.saturating_sub(1) / 2)
        })
        .sum()
}

/// `ceil(12 γ² n k²)`. The counting argument behind it needs `γ k ≥ 1`, so
/// smaller densities are refused.
pub fn claim22_lower_bound(n: usize, k: usize, gamma: Rational) -> Result<u64> {
    if gamma * Rational::from_integer(k as u64) < Rational::from_integer(1) {
        return Err(Error::InvalidParameter(format!(
            "bound needs gamma*k >= 1, got {gamma}*{k}"
        )));
    }
    let (p, q) = (u128::from(*gamma.numer()), u128::from(*gamma.denom()));
    let num = 12 * p * p * n as u128 * (k as u128) * (k as u128);
    let den = q * q;
    u64::try_from(num.div_ceil(den))
        .map_err(|_| Error::InvalidParameter("bound does not fit in 64 bits".into()))
}

/// Edges at `x` whose color label meets `colors`. At most four edges per
/// color can qualify on a linear hypergraph; exceeding that is an error.
pub fn color_incident_edges(
    g: &SignatureGraph<'_>,
    x: SigVertex,
    colors: &BTreeSet<Color>,
) -> Result<Vec<usize>> {
    let Some(xi) = g.vertex_index(x) else {
        return Ok(Vec::new());
    };
    let hits: Vec<usize> = g
        .incident(xi)
        .iter()
        .copied()
        .filter(|&id| g.edge(id).colors.iter().any(|c| colors.contains(c)))
        .collect();
    if hits.len() > 4 * colors.len() {
        return Err(Error::Internal(format!(
            "{} edges at {x} meet {} colors, more than 4 per color",
            hits.len(),
            colors.len()
        )));
    }
    Ok(hits)
}

/// The augmentation `H_J`: both hyperedges of `T(e)` for every `e` in `j`,
/// with repetitions kept.
///
/// # Panics
///
/// Panics if an id in `j` is not an edge of `g`.
pub fn subgraph_augmentation<'a>(g: &SignatureGraph<'a>, j: &[usize]) -> Augmentation<'a> {
    let mut aug = Augmentation::new(g.base());
    for &id in j {
        for t in g.edge(id).t {
            aug.add(t, 1)
                .expect("signature edges reference hypergraph edges");
        }
    }
    aug
}

/// True iff the `2|J|` hyperedges contributed by `j` carry pairwise
/// distinct colors.
pub fn is_rainbow(g: &SignatureGraph<'_>, j: &[usize]) -> bool {
    let mut seen = BTreeSet::new();
    j.iter()
        .flat_map(|&id| g.edge(id).colors)
        .all(|c| seen.insert(c))
}

/// Largest `|E(x, C)| / (4|C|)` over `samples` random pairs `(x, C)`.
/// `C` mixes colors seen at `x` with arbitrary ones so the ratio is not
/// trivially zero.
pub fn sample_claim24_ratio(g: &SignatureGraph<'_>, samples: usize, seed: u64) -> Result<Rational> {
    let k = g.base().k() as Color;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = Rational::from_integer(0);
    if g.num_vertices() == 0 || k == 0 {
        return Ok(best);
    }
    for _ in 0..samples {
        let xi = rng.gen_range(0..g.num_vertices());
        let mut colors = BTreeSet::new();
        for &id in g.incident(xi) {
            for c in g.edge(id).colors {
                if rng.gen_bool(0.5) {
                    colors.insert(c);
                }
            }
        }
        if colors.is_empty() || rng.gen_bool(0.25) {
            colors.insert(rng.gen_range(0..k));
        }
        let hits = color_incident_edges(g, g.vertex(xi), &colors)?;
        best = best.max(Rational::new(hits.len() as u64, 4 * colors.len() as u64));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::HyperEdge;

    fn cherry() -> ColoredHypergraph {
        // {1,2,0} color 0 and {3,4,0} color 1 meet at w = 0.
        ColoredHypergraph::new(
            5,
            2,
            vec![HyperEdge::new([0, 1, 2], 0), HyperEdge::new([0, 3, 4], 1)],
        )
    }

    fn hadamard3() -> ColoredHypergraph {
        ColoredHypergraph::new(
            8,
            3,
            vec![
                HyperEdge::new([0, 1, 5], 0),
                HyperEdge::new([3, 6, 7], 1),
                HyperEdge::new([2, 4, 7], 2),
            ],
        )
    }

    #[test]
    fn single_cherry_gives_four_edges() {
        let h = cherry();
        let g = build_signature_graph(&h).unwrap();
        assert_eq!(g.num_edges(), 4);
        assert_eq!(exact_edge_count(&h), 4);
        for e in g.edges() {
            assert_eq!(e.cause, 0);
            assert_eq!(e.color_pair(), (0, 1));
            let first = h.edge(e.t[0]);
            let second = h.edge(e.t[1]);
            assert!(first.contains(e.a.first) && first.contains(e.b.first) && first.contains(0));
            assert!(
                second.contains(e.a.second) && second.contains(e.b.second) && second.contains(0)
            );
            let support_a = [e.a.first, e.a.second];
            assert!(!support_a.contains(&e.b.first) && !support_a.contains(&e.b.second));
        }
        // Each pair-vertex meets exactly one edge.
        assert_eq!(g.num_vertices(), 8);
        assert!((0..g.num_vertices()).all(|x| g.degree(x) == 1));
    }

    #[test]
    fn disjoint_edges_give_no_edges() {
        let h = ColoredHypergraph::new(
            6,
            2,
            vec![HyperEdge::new([0, 1, 2], 0), HyperEdge::new([3, 4, 5], 1)],
        );
        let g = build_signature_graph(&h).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert_eq!(exact_edge_count(&h), 0);
    }

    #[test]
    fn hadamard3_single_cherry_at_seven() {
        let h = hadamard3();
        let g = build_signature_graph(&h).unwrap();
        assert_eq!(g.num_edges(), 4);
        assert!(g
            .edges()
            .iter()
            .all(|e| e.cause == 7 && e.color_pair() == (1, 2)));
    }

    #[test]
    fn nonlinear_input_rejected() {
        let h = ColoredHypergraph::new(
            4,
            2,
            vec![HyperEdge::new([0, 1, 2], 0), HyperEdge::new([0, 1, 3], 1)],
        );
        assert!(matches!(
            build_signature_graph(&h),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn claim22_bound_values() {
        assert_eq!(
            claim22_lower_bound(64, 8, Rational::new(1, 8)).unwrap(),
            768
        );
        assert!(claim22_lower_bound(64, 8, Rational::new(1, 9)).is_err());
        // 12 * (1/3)^2 * 10 * 9 = 120
        assert_eq!(
            claim22_lower_bound(10, 3, Rational::new(1, 3)).unwrap(),
            120
        );
        // 12 * (1/2)^2 * 7 * 4 = 84; 12 * 4/9 * 5 * 4 = 106.67 -> 107
        assert_eq!(claim22_lower_bound(7, 2, Rational::new(1, 2)).unwrap(), 84);
        assert_eq!(claim22_lower_bound(5, 2, Rational::new(2, 3)).unwrap(), 107);
    }

    #[test]
    fn color_incident_examples() {
        let h = cherry();
        let g = build_signature_graph(&h).unwrap();
        let x = g.edge(0).a;
        assert!(color_incident_edges(&g, x, &BTreeSet::new())
            .unwrap()
            .is_empty());
        let all: BTreeSet<Color> = [0, 1].into();
        assert_eq!(color_incident_edges(&g, x, &all).unwrap().len(), 1);
        let c0: BTreeSet<Color> = [0].into();
        assert_eq!(color_incident_edges(&g, x, &c0).unwrap().len(), 1);
        let absent = SigVertex::new(0, 1);
        assert!(color_incident_edges(&g, absent, &all).unwrap().is_empty());
    }

    #[test]
    fn augmentation_and_rainbow_examples() {
        let h = cherry();
        let g = build_signature_graph(&h).unwrap();
        assert!(subgraph_augmentation(&g, &[]).is_empty());
        let one = subgraph_augmentation(&g, &[2]);
        assert_eq!(one.iter().collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
        let all = subgraph_augmentation(&g, &[0, 1, 2, 3]);
        assert_eq!(all.iter().collect::<Vec<_>>(), vec![(0, 4), (1, 4)]);
        assert_eq!(all.total_multiplicity(), 8);

        assert!(is_rainbow(&g, &[]));
        assert!(is_rainbow(&g, &[1]));
        assert!(!is_rainbow(&g, &[0, 1]));
    }

    #[test]
    fn rainbow_fails_on_shared_matching() {
        // Color 0 edge {0,1,2} forms cherries with {2,3,4}c1 and {0,5,6}c2.
        let h = ColoredHypergraph::new(
            7,
            3,
            vec![
                HyperEdge::new([0, 1, 2], 0),
                HyperEdge::new([2, 3, 4], 1),
                HyperEdge::new([0, 5, 6], 2),
            ],
        );
        let g = build_signature_graph(&h).unwrap();
        let at2 = g.edges().iter().position(|e| e.cause == 2).unwrap();
        let at0 = g.edges().iter().position(|e| e.cause == 0).unwrap();
        assert!(!is_rainbow(&g, &[at2, at0]));
        let both_at2: Vec<usize> = (0..g.num_edges())
            .filter(|&i| g.edge(i).cause == 2)
            .take(2)
            .collect();
        assert!(!is_rainbow(&g, &both_at2));
    }

    #[test]
    fn swap_is_an_automorphism() {
        let h = crate::generators::planted_violation_instance();
        let g = build_signature_graph(&h).unwrap();
        assert_eq!(g.num_edges() as u64, exact_edge_count(&h));
        let mut swapped: Vec<SigEdge> = g.edges().iter().map(SigEdge::swapped).collect();
        swapped.sort();
        assert_eq!(swapped, g.edges());
        for e in g.edges() {
            let s = e.swapped();
            assert_eq!(s.color_pair(), e.color_pair());
        }
    }

    #[test]
    fn induced_subgraph_keeps_inner_edges() {
        let h = crate::generators::planted_violation_instance();
        let g = build_signature_graph(&h).unwrap();
        let keep: Vec<bool> = (0..g.num_vertices()).map(|i| i % 2 == 0).collect();
        let sub = g.induced(&keep);
        for e in sub.edges() {
            assert!(keep[g.vertex_index(e.a).unwrap()] && keep[g.vertex_index(e.b).unwrap()]);
        }
    }

    #[test]
    fn sampled_ratio_is_bounded() {
        let h = crate::generators::planted_violation_instance();
        let g = build_signature_graph(&h).unwrap();
        let r = sample_claim24_ratio(&g, 500, 1).unwrap();
        assert!(r <= Rational::from_integer(1));
        assert!(r > Rational::from_integer(0));
    }
}
