//! Certificate extraction through rainbow trees in the signature graph.
//!
//! The search peels the signature graph down to a minimum-degree core, grows
//! a tree level by level from a root so that every root path is rainbow
//! (no color repeats among the hyperedges it contributes), and looks for an
//! edge `(x, y)` with `y` no deeper than `x` whose colors avoid the root path
//! of `x`. Such an edge closes a cycle whose hyperedge multiset is even but
//! contains some color an odd number of times: a certificate that the
//! even-color condition fails. When no such edge exists, other non-tree edges
//! are tried and kept only if their cycle has an odd color.
//!
//! Also hosts the 2-uniform signature routine on color-matching graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::gf2::BitVector;
use crate::hypergraph::{Augmentation, Color, ColoredGraph, ColoredHypergraph, Vertex};
use crate::signature::{
    build_signature_graph, subgraph_augmentation, SigEdge, SigVertex, SignatureGraph,
};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessConfig {
    /// Minimum degree kept by peeling; `None` uses `max(1, ⌊avg degree / 2⌋)`.
    pub degree_threshold: Option<usize>,
    /// A level must be at least this many times larger than the previous
    /// one for growth to continue.
    pub growth_factor: Rational,
    pub root_attempts: usize,
    pub seed: u64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            degree_threshold: None,
            growth_factor: Rational::from_integer(2),
            root_attempts: 16,
            seed: 0,
        }
    }
}

impl WitnessConfig {
    /// Rejects growth factors below 1 and zero counts.
    pub fn check(&self) -> Result<()> {
        if self.growth_factor < Rational::from_integer(1) {
            return Err(Error::InvalidParameter(
                "growth factor must be at least 1".into(),
            ));
        }
        if self.root_attempts == 0 {
            return Err(Error::InvalidParameter(
                "root attempts must be positive".into(),
            ));
        }
        if self.degree_threshold == Some(0) {
            return Err(Error::InvalidParameter(
                "degree threshold must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Repeatedly deletes vertices of degree below `d`. The survivors (possibly
/// none) induce a subgraph of minimum degree at least `d`.
pub fn min_degree_subgraph<'a>(g: &SignatureGraph<'a>, d: usize) -> SignatureGraph<'a> {
    let mut degree: Vec<usize> = (0..g.num_vertices()).map(|x| g.degree(x)).collect();
    let mut alive = vec![true; g.num_vertices()];
    let mut queue: VecDeque<usize> = (0..g.num_vertices()).filter(|&x| degree[x] < d).collect();
    for &x in &queue {
        alive[x] = false;
    }
    while let Some(x) = queue.pop_front() {
        for &id in g.incident(x) {
            let y = g.opposite(id, x);
            if alive[y] {
                degree[y] -= 1;
                if degree[y] < d {
                    alive[y] = false;
                    queue.push_back(y);
                }
            }
        }
    }
    g.induced(&alive)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    level: usize,
    parent: Option<(SigVertex, usize)>,
    /// Colors on the root path, in path order from the root.
    colors: Vec<Color>,
}

/// A tree grown from `root` whose root paths are all rainbow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowTree {
    root: SigVertex,
    levels: Vec<Vec<SigVertex>>,
    nodes: HashMap<SigVertex, Node>,
}

impl RainbowTree {
    fn new(root: SigVertex) -> Self {
        let node = Node {
            level: 0,
            parent: None,
            colors: Vec::new(),
        };
        Self {
            root,
            levels: vec![vec![root]],
            nodes: HashMap::from([(root, node)]),
        }
    }

    pub fn root(&self) -> SigVertex {
        self.root
    }

    pub fn levels(&self) -> &[Vec<SigVertex>] {
        &self.levels
    }

    /// Index of the deepest level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, x: SigVertex) -> bool {
        self.nodes.contains_key(&x)
    }

    pub fn level_of(&self, x: SigVertex) -> Option<usize> {
        self.nodes.get(&x).map(|n| n.level)
    }

    /// Parent of `x` and the id of the connecting edge.
    pub fn parent(&self, x: SigVertex) -> Option<(SigVertex, usize)> {
        self.nodes.get(&x).and_then(|n| n.parent)
    }

    /// Colors on the root path `P(root, x)`.
    pub fn path_colors(&self, x: SigVertex) -> Option<&[Color]> {
        self.nodes.get(&x).map(|n| n.colors.as_slice())
    }

    /// Edge ids from `x` up to `ancestor`. Panics if `ancestor` is not an
    /// ancestor of `x`.
    fn climb(&self, mut x: SigVertex, ancestor: SigVertex) -> Vec<usize> {
        let mut edges = Vec::new();
        while x != ancestor {
            let (p, id) = self.parent(x).expect("ancestor lies on the root path");
            edges.push(id);
            x = p;
        }
        edges
    }

    /// Least common ancestor, by walking parents after equalizing depths.
    pub fn lca(&self, x: SigVertex, y: SigVertex) -> Option<SigVertex> {
        let (mut x, mut y) = (x, y);
        let (mut lx, mut ly) = (self.level_of(x)?, self.level_of(y)?);
        while lx > ly {
            x = self.parent(x)?.0;
            lx -= 1;
        }
        while ly > lx {
            y = self.parent(y)?.0;
            ly -= 1;
        }
        while x != y {
            x = self.parent(x)?.0;
            y = self.parent(y)?.0;
        }
        Some(x)
    }

    /// Every root path has pairwise distinct colors and two per edge.
    pub fn is_rainbow(&self) -> bool {
        self.nodes.values().all(|n| {
            let distinct: BTreeSet<_> = n.colors.iter().collect();
            distinct.len() == n.colors.len() && n.colors.len() == 2 * n.level
        })
    }
}

/// A non-tree edge `(deep, shallow)` between tree vertices with
/// `level(shallow) <= level(deep)`. Either its colors avoid `P(root, deep)`,
/// or the tree cycle it closes has a color of odd parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contradiction {
    pub deep: SigVertex,
    pub shallow: SigVertex,
    pub edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// No vertex of the last level has an admissible neighbor.
    Exhausted,
    /// The last level grew by less than the growth factor.
    SlowGrowth,
    /// An admissible neighbor was already in the tree.
    Contradiction(Contradiction),
}

fn disjoint(colors: &[Color; 2], path: &[Color]) -> bool {
    !colors.iter().any(|c| path.contains(c))
}

/// Grows a rainbow tree from `root` in `g`.
///
/// Level `i + 1` collects every neighbor `y` of a level-`i` vertex `x` whose
/// edge colors avoid the colors of `P(root, x)`; `y` gets the smallest such
/// `x` as parent. Growth stops when a level is empty, when it is less than
/// `growth_factor` times the previous one (that level is kept), or as soon
/// as an admissible neighbor is already in the tree.
pub fn grow_rainbow_tree(
    g: &SignatureGraph<'_>,
    root: SigVertex,
    cfg: &WitnessConfig,
) -> (RainbowTree, StopReason) {
    let mut tree = RainbowTree::new(root);
    let growth = cfg.growth_factor;
    loop {
        let current = tree.levels.last().expect("tree has a root level").clone();
        let level = tree.depth();
        let mut next: BTreeMap<SigVertex, (SigVertex, usize)> = BTreeMap::new();
        for &x in &current {
            let Some(xi) = g.vertex_index(x) else {
                continue;
            };
            let path = tree.nodes[&x].colors.clone();
            for &id in g.incident(xi) {
                let e = g.edge(id);
                if !disjoint(&e.colors, &path) {
                    continue;
                }
                let y = e.other(x);
                if tree.contains(y) {
                    let c = Contradiction {
                        deep: x,
                        shallow: y,
                        edge: id,
                    };
                    return (tree, StopReason::Contradiction(c));
                }
                // `current` is sorted, so the first parent seen is the smallest.
                next.entry(y).or_insert((x, id));
            }
        }
        if next.is_empty() {
            return (tree, StopReason::Exhausted);
        }
        let grown = next.len() as u64;
        let mut new_level = Vec::with_capacity(next.len());
        for (y, (p, id)) in next {
            let mut colors = tree.nodes[&p].colors.clone();
            colors.extend_from_slice(&g.edge(id).colors);
            tree.nodes.insert(
                y,
                Node {
                    level: level + 1,
                    parent: Some((p, id)),
                    colors,
                },
            );
            new_level.push(y);
        }
        tree.levels.push(new_level);
        let previous = current.len() as u64;
        if Rational::from_integer(grown) < growth * Rational::from_integer(previous) {
            return (tree, StopReason::SlowGrowth);
        }
    }
}

/// Looks for a contradiction edge in a grown tree: first between the last
/// two levels, then anywhere in the tree. Failing that, any other non-tree
/// edge whose tree cycle leaves some color with odd parity is returned.
pub fn detect_contradiction(g: &SignatureGraph<'_>, tree: &RainbowTree) -> Option<Contradiction> {
    let scan = |x: SigVertex, accept: &dyn Fn(usize, usize) -> bool| -> Option<Contradiction> {
        let xi = g.vertex_index(x)?;
        let node = &tree.nodes[&x];
        g.incident(xi).iter().copied().find_map(|id| {
            let y = g.edge(id).other(x);
            let ly = tree.level_of(y)?;
            (ly <= node.level && accept(id, ly)).then_some(Contradiction {
                deep: x,
                shallow: y,
                edge: id,
            })
        })
    };
    let admissible = |x: SigVertex, id: usize| disjoint(&g.edge(id).colors, &tree.nodes[&x].colors);
    let depth = tree.depth();
    if depth >= 1 {
        let found = tree.levels[depth]
            .iter()
            .find_map(|&w| scan(w, &|id, ly| ly + 1 == depth && admissible(w, id)));
        if found.is_some() {
            return found;
        }
    }
    let found = tree
        .levels
        .iter()
        .rev()
        .flatten()
        .find_map(|&x| scan(x, &|id, _| admissible(x, id)));
    if found.is_some() {
        return found;
    }
    tree.levels.iter().rev().flatten().find_map(|&x| {
        let parent_edge = tree.parent(x).map(|(_, id)| id);
        scan(x, &|id, _| {
            Some(id) != parent_edge && {
                let c = Contradiction {
                    deep: x,
                    shallow: g.edge(id).other(x),
                    edge: id,
                };
                has_odd_color(g, &tree_cycle(tree, &c))
            }
        })
    })
}

/// Edge ids of `P(z, deep) + edge + P(shallow, z)`, `z` the least common ancestor.
fn tree_cycle(tree: &RainbowTree, c: &Contradiction) -> Vec<usize> {
    let z = tree
        .lca(c.deep, c.shallow)
        .expect("both ends are tree vertices");
    let mut cycle = tree.climb(c.deep, z);
    cycle.extend(tree.climb(c.shallow, z));
    cycle.push(c.edge);
    cycle
}

fn has_odd_color(g: &SignatureGraph<'_>, cycle: &[usize]) -> bool {
    !subgraph_augmentation(g, cycle)
        .mod2_reduce()
        .odd_colors()
        .is_empty()
}

/// An even edge subset of the hypergraph with an odd number of edges of
/// `odd_color`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate<'a> {
    /// 0/1 augmentation.
    pub hyperedge_subset: Augmentation<'a>,
    pub odd_color: Color,
    /// Signature edges of the cycle the certificate came from.
    pub provenance: Vec<SigEdge>,
}

impl Certificate<'_> {
    pub fn edge_indices(&self) -> Vec<usize> {
        self.hyperedge_subset.support()
    }
}

/// Turns a contradiction edge into a certificate via the cycle
/// `P(z, deep) + edge + P(shallow, z)` through the least common ancestor `z`.
pub fn extract_certificate<'a>(
    g: &SignatureGraph<'a>,
    tree: &RainbowTree,
    found: &Contradiction,
) -> Result<Certificate<'a>> {
    if !(tree.contains(found.deep) && tree.contains(found.shallow)) {
        return Err(Error::Internal(format!(
            "{} and {} are not both in the tree",
            found.deep, found.shallow
        )));
    }
    let cycle = tree_cycle(tree, found);

    let full = subgraph_augmentation(g, &cycle);
    if !full.is_even() {
        return Err(Error::Internal(
            "cycle in the signature graph gave an odd augmentation".into(),
        ));
    }
    let reduced = full.mod2_reduce();
    let odd = reduced.odd_colors();
    let odd_color = g
        .edge(found.edge)
        .colors
        .into_iter()
        .find(|c| odd.contains(c))
        .or_else(|| odd.first().copied())
        .ok_or_else(|| Error::Internal("rainbow cycle has no odd color".into()))?;
    let cert = Certificate {
        hyperedge_subset: reduced,
        odd_color,
        provenance: cycle.iter().map(|&id| *g.edge(id)).collect(),
    };
    if !validate_certificate(g.base(), &cert)? {
        return Err(Error::Internal(
            "extracted certificate failed validation".into(),
        ));
    }
    Ok(cert)
}

/// True iff the certificate's edge subset is even in `h` and contains an
/// odd number of `odd_color` edges. Only hypergraph primitives are used.
pub fn validate_certificate(h: &ColoredHypergraph, cert: &Certificate<'_>) -> Result<bool> {
    let mut aug = Augmentation::new(h);
    for (e, m) in cert.hyperedge_subset.iter() {
        aug.add(e, m)?;
    }
    Ok(aug.is_even() && aug.color_multiplicity(cert.odd_color) % 2 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FindOutcome<'a> {
    Found(Certificate<'a>),
    NotFound {
        roots_tried: usize,
        depth_max: usize,
    },
}

enum Attempt<'a> {
    Found(Certificate<'a>),
    Missed { depth: usize },
}

fn attempt<'a>(
    g: &SignatureGraph<'a>,
    root: SigVertex,
    cfg: &WitnessConfig,
) -> Result<Attempt<'a>> {
    let (tree, stop) = grow_rainbow_tree(g, root, cfg);
    let found = match stop {
        StopReason::Contradiction(c) => Some(c),
        _ => detect_contradiction(g, &tree),
    };
    match found {
        Some(c) => extract_certificate(g, &tree, &c).map(Attempt::Found),
        None => Ok(Attempt::Missed {
            depth: tree.depth(),
        }),
    }
}

/// The full search: signature graph, peeling, then up to `root_attempts`
/// roots in seeded order. Roots run in parallel; the lowest-ranked success
/// is returned, so the outcome depends only on the inputs and the seed.
pub fn find_violation<'a>(
    h: &'a ColoredHypergraph,
    cfg: &WitnessConfig,
) -> Result<FindOutcome<'a>> {
    cfg.check()?;
    let g = build_signature_graph(h)?;
    let threshold = cfg.degree_threshold.unwrap_or_else(|| {
        let half = g.average_degree() / Rational::from_integer(2);
        half.floor().to_integer().max(1) as usize
    });
    let core = min_degree_subgraph(&g, threshold);
    if core.num_vertices() == 0 {
        return Ok(FindOutcome::NotFound {
            roots_tried: 0,
            depth_max: 0,
        });
    }
    let mut order: Vec<SigVertex> = core.vertices().to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
    order.truncate(cfg.root_attempts);

    let results: Vec<Result<Attempt<'a>>> =
        order.par_iter().map(|&r| attempt(&core, r, cfg)).collect();
    let mut depth_max = 0;
    for r in results {
        match r? {
            Attempt::Found(cert) => return Ok(FindOutcome::Found(cert)),
            Attempt::Missed { depth } => depth_max = depth_max.max(depth),
        }
    }
    Ok(FindOutcome::NotFound {
        roots_tried: order.len(),
        depth_max,
    })
}

/// Result of [`two_query_signatures`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoQueryOutcome {
    /// Every reachable vertex has a path-independent color-parity vector.
    Consistent {
        /// `None` for vertices not reachable from the start.
        signatures: Vec<Option<BitVector>>,
        distinct: usize,
    },
    /// A cycle (edge indices) with an odd number of edges of some color.
    Inconsistent {
        cycle: Vec<usize>,
        odd_colors: Vec<Color>,
    },
}

/// Assigns each vertex reachable from `s` the parity vector of edge colors
/// along its BFS tree path, then checks every edge against the assignment.
pub fn two_query_signatures(graph: &ColoredGraph, s: Vertex) -> Result<TwoQueryOutcome> {
    if s as usize >= graph.n {
        return Err(Error::InvalidParameter(format!(
            "start vertex {s} out of range"
        )));
    }
    if let Some(&(u, v, c)) = graph
        .edges
        .iter()
        .find(|&&(u, v, c)| u as usize >= graph.n || v as usize >= graph.n || c as usize >= graph.k)
    {
        return Err(Error::InvalidParameter(format!(
            "edge ({u},{v},{c}) out of range"
        )));
    }
    let adjacency = graph.adjacency();
    let mut sig: Vec<Option<BitVector>> = vec![None; graph.n];
    let mut parent: Vec<Option<(Vertex, usize)>> = vec![None; graph.n];
    let mut depth = vec![0usize; graph.n];
    sig[s as usize] = Some(BitVector::zeros(graph.k));
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(v, id) in &adjacency[u as usize] {
            if sig[v as usize].is_none() {
                let mut next = sig[u as usize]
                    .clone()
                    .expect("queued vertices are labeled");
                next.flip(graph.edges[id].2 as usize);
                sig[v as usize] = Some(next);
                parent[v as usize] = Some((u, id));
                depth[v as usize] = depth[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }

    for (id, &(u, v, c)) in graph.edges.iter().enumerate() {
        let (Some(su), Some(sv)) = (&sig[u as usize], &sig[v as usize]) else {
            continue;
        };
        let mut expected = su.clone();
        expected.flip(c as usize);
        if &expected == sv {
            continue;
        }
        let (mut a, mut b) = (u, v);
        let mut cycle = Vec::new();
        let mut tail = Vec::new();
        while depth[a as usize] > depth[b as usize] {
            let (p, e) = parent[a as usize].expect("non-root vertex has a parent");
            cycle.push(e);
            a = p;
        }
        while depth[b as usize] > depth[a as usize] {
            let (p, e) = parent[b as usize].expect("non-root vertex has a parent");
            tail.push(e);
            b = p;
        }
        while a != b {
            let (pa, ea) = parent[a as usize].expect("non-root vertex has a parent");
            let (pb, eb) = parent[b as usize].expect("non-root vertex has a parent");
            cycle.push(ea);
            tail.push(eb);
            a = pa;
            b = pb;
        }
        tail.reverse();
        cycle.extend(tail);
        cycle.push(id);
        let mut parity = BitVector::zeros(graph.k);
        for &e in &cycle {
            parity.flip(graph.edges[e].2 as usize);
        }
        let odd_colors = parity.ones().map(|c| c as Color).collect();
        return Ok(TwoQueryOutcome::Inconsistent { cycle, odd_colors });
    }

    let distinct = sig.iter().flatten().collect::<BTreeSet<_>>().len();
    Ok(TwoQueryOutcome::Consistent {
        signatures: sig,
        distinct,
    })
}
