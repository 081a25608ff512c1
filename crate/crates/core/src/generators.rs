//! Seeded instance generators: Hadamard-derived strong LDCs, the planted
//! even-color violation, hypercube 2-query graphs and random colored
//! hypergraphs. Identical inputs and seed give identical output.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::{
    required_matching_size, validate, ColoredGraph, ColoredHypergraph, HyperEdge,
};
use crate::ldc::{hadamard_unit, verify_strong_ldc, LinearCodeSpec, StrongLdcInstance, Triple};
use crate::{Color, Error, Rational, Result, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Minimum acceptable density; attempts below it are retried.
    pub target_delta: Option<Rational>,
    pub attempts: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            target_delta: None,
            attempts: 16,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        if self.attempts == 0 {
            return Err(Error::InvalidParameter(
                "attempts must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn rng(&self, attempt: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(attempt));
        rng
    }
}

fn pair_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Above this length partners are sampled instead of scanned.
const FULL_SCAN_LIMIT: usize = 256;
const SAMPLED_PARTNERS: usize = 24;

/// Greedy layout of XOR triples for the Hadamard code of dimension `k`.
/// Colors take turns adding one triple; no vertex pair is ever used twice.
fn hadamard_matchings(k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Triple>> {
    let n = 1usize << k;
    let mut used = vec![0u32; n];
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cursor: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    let mut scanned = vec![0usize; k];
    let mut matchings = vec![Vec::new(); k];
    let mut partners: Vec<usize> = (0..n).collect();

    let mut active: Vec<usize> = (0..k).collect();
    while !active.is_empty() {
        active.retain(|&c| {
            let unit = hadamard_unit(k, c);
            let bit = 1u32 << c;
            while scanned[c] < n {
                let a = order[(cursor[c] + scanned[c]) % n];
                scanned[c] += 1;
                if a == unit || used[a] & bit != 0 {
                    continue;
                }
                let usable = |b: usize| {
                    let third = a ^ b ^ unit;
                    b != a
                        && b != unit
                        && used[b] & bit == 0
                        && used[third] & bit == 0
                        && !pairs.contains(&pair_key(a, b))
                        && !pairs.contains(&pair_key(a, third))
                        && !pairs.contains(&pair_key(b, third))
                };
                let found = if n <= FULL_SCAN_LIMIT {
                    partners.shuffle(rng);
                    partners.iter().copied().find(|&b| usable(b))
                } else {
                    (0..SAMPLED_PARTNERS)
                        .map(|_| rng.gen_range(0..n))
                        .find(|&b| usable(b))
                };
                if let Some(b) = found {
                    let mut t = [a, b, a ^ b ^ unit];
                    t.sort_unstable();
                    for &v in &t {
                        used[v] |= bit;
                    }
                    pairs.insert(pair_key(t[0], t[1]));
                    pairs.insert(pair_key(t[0], t[2]));
                    pairs.insert(pair_key(t[1], t[2]));
                    matchings[c].push(t);
                    return true;
                }
            }
            false
        });
    }
    for m in &mut matchings {
        m.sort_unstable();
    }
    matchings
}

/// A strong LDC on the Hadamard code of dimension `k` (`n = 2^k`), with
/// greedily packed matchings of XOR triples. The instance's `delta` is the
/// achieved density `min_i |M_i| / n`.
pub fn hadamard_strong_ldc(k: usize, cfg: &GenConfig) -> Result<StrongLdcInstance> {
    if !(2..=20).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "hadamard dimension must be in 2..=20, got {k}"
        )));
    }
    cfg.check()?;
    let code = LinearCodeSpec::hadamard(k);
    let n = code.n() as u64;
    let mut last_reason = String::new();
    for attempt in 0..cfg.attempts {
        let matchings = hadamard_matchings(k, &mut cfg.rng(attempt));
        let min = matchings.iter().map(Vec::len).min().unwrap_or(0) as u64;
        let achieved = Rational::new(min, n);
        if min == 0 {
            last_reason = "some matching is empty".into();
            continue;
        }
        if let Some(target) = cfg.target_delta {
            if achieved < target {
                last_reason = format!("achieved density {achieved} below target {target}");
                continue;
            }
        }
        let inst = StrongLdcInstance::new(code, matchings, achieved)?;
        let report = verify_strong_ldc(&inst, 0);
        if !report.passed() {
            return Err(Error::Internal(format!(
                "generated instance fails verification: {:?}",
                report.findings
            )));
        }
        return Ok(inst);
    }
    Err(Error::Exhausted {
        attempts: cfg.attempts,
        reason: last_reason,
    })
}

/// The `k`-dimensional hypercube with edge `{v, v ⊕ e_i}` colored `i`.
/// Vertex `v` is read as a vector of `F2^k`, coordinate 0 most significant.
pub fn hypercube_two_query_instance(k: usize) -> Result<ColoredGraph> {
    if !(1..=20).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "hypercube dimension must be in 1..=20, got {k}"
        )));
    }
    let n = 1usize << k;
    let mut edges = Vec::with_capacity(k * n / 2);
    for c in 0..k {
        let unit = hadamard_unit(k, c);
        for v in (0..n).filter(|v| v & unit == 0) {
            edges.push((v as Vertex, (v | unit) as Vertex, c as Color));
        }
    }
    Ok(ColoredGraph { n, k, edges })
}

/// Four pairwise-intersecting triples on six vertices, one per color. Every
/// vertex has degree 2, so the whole edge set is even while each color
/// appears once.
pub fn planted_violation_instance() -> ColoredHypergraph {
    ColoredHypergraph::new(
        6,
        4,
        vec![
            HyperEdge::new([0, 1, 2], 0),
            HyperEdge::new([0, 3, 4], 1),
            HyperEdge::new([1, 3, 5], 2),
            HyperEdge::new([2, 4, 5], 3),
        ],
    )
}

const TRIPLE_TRIES: usize = 256;

/// A random linear hypergraph with exactly `ceil(delta * n)` edges of each of
/// the `k` colors. Linearity and the matching property are enforced; the
/// even-color condition is not.
pub fn random_colored_hypergraph(
    n: usize,
    k: usize,
    delta: Rational,
    cfg: &GenConfig,
) -> Result<ColoredHypergraph> {
    cfg.check()?;
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("n and k must be positive".into()));
    }
    let per_color = required_matching_size(delta, n);
    if 3 * per_color > n {
        return Err(Error::InvalidParameter(format!(
            "{per_color} disjoint triples per color do not fit on {n} vertices"
        )));
    }

    'attempt: for attempt in 0..cfg.attempts {
        let mut rng = cfg.rng(attempt);
        let mut pairs: HashSet<(usize, usize)> = HashSet::new();
        let mut edges = Vec::with_capacity(per_color * k);
        for c in 0..k {
            let mut free: Vec<usize> = (0..n).collect();
            for _ in 0..per_color {
                let mut placed = false;
                for _ in 0..TRIPLE_TRIES {
                    let picks = rand::seq::index::sample(&mut rng, free.len(), 3).into_vec();
                    let t = [free[picks[0]], free[picks[1]], free[picks[2]]];
                    let clash = [(0, 1), (0, 2), (1, 2)]
                        .iter()
                        .any(|&(i, j)| pairs.contains(&pair_key(t[i], t[j])));
                    if clash {
                        continue;
                    }
                    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                        pairs.insert(pair_key(t[i], t[j]));
                    }
                    free.retain(|v| !t.contains(v));
                    edges.push(HyperEdge::new(t.map(|v| v as Vertex), c as Color));
                    placed = true;
                    break;
                }
                if !placed {
                    continue 'attempt;
                }
            }
        }
        let mut h = ColoredHypergraph::new(n, k, edges);
        h.canonicalize();
        let report = validate(&h, Some(delta));
        if !report.is_valid() {
            return Err(Error::Internal(format!(
                "random instance invalid: {:?}",
                report.violations
            )));
        }
        return Ok(h);
    }
    Err(Error::Exhausted {
        attempts: cfg.attempts,
        reason: format!("could not place {per_color} triples per color without reusing a pair"),
    })
}
