//! Linear strong 3-query LDCs over ±1.
//!
//! Messages and codewords are `±1` vectors (`i8`). The bridge to GF(2) is
//! fixed project-wide: `+1 ↔ 0`, `−1 ↔ 1`. Codeword bit `j` of a linear code
//! with generator rows `g_j` is `(−1)^⟨g_j, b(x)⟩`, so a triple decodes
//! message coordinate `i` for every `x` exactly when its three rows XOR to the
//! unit vector `e_i`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf2::BitVector;
use crate::hypergraph::{required_matching_size, Color, ColoredHypergraph, HyperEdge};
use crate::{Error, Rational, Result};

pub type Triple = [usize; 3];

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 12;

/// Generator rows of a linear code `{±1}^k → {±1}^n`; row `j` defines bit `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCodeSpec {
    k: usize,
    rows: Vec<BitVector>,
}

impl LinearCodeSpec {
    pub fn new(k: usize, rows: Vec<BitVector>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter(
                "a code needs at least one row".into(),
            ));
        }
        if let Some(j) = rows.iter().position(|r| r.len() != k) {
            return Err(Error::InvalidParameter(format!(
                "row {j} has {} bits, expected {k}",
                rows[j].len()
            )));
        }
        Ok(Self { k, rows })
    }

    /// The Hadamard code: row `j` is the binary expansion of `j` with `k`
    /// digits, most significant digit as coordinate 0.
    pub fn hadamard(k: usize) -> Self {
        assert!((1..=24).contains(&k), "hadamard dimension {k} unsupported");
        let rows = (0..1usize << k).map(|j| hadamard_row(k, j)).collect();
        Self { k, rows }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &BitVector {
        &self.rows[j]
    }

    pub fn row_mut(&mut self, j: usize) -> &mut BitVector {
        &mut self.rows[j]
    }
}

/// Vector of `F2^k` with coordinate `i` equal to bit `k - 1 - i` of `value`.
pub fn hadamard_row(k: usize, value: usize) -> BitVector {
    BitVector::from_bits((0..k).map(|i| value >> (k - 1 - i) & 1 == 1))
}

/// Integer whose binary expansion (most significant digit first) is the
/// unit vector `e_color` of `F2^k`.
pub fn hadamard_unit(k: usize, color: usize) -> usize {
    1 << (k - 1 - color)
}

/// Maps a `±1` message to `F2^k`.
pub fn message_bits(x: &[i8]) -> Result<BitVector> {
    x.iter()
        .enumerate()
        .map(|(i, &s)| match s {
            1 => Ok(false),
            -1 => Ok(true),
            _ => Err(Error::InvalidParameter(format!(
                "entry {i} is {s}, expected ±1"
            ))),
        })
        .collect::<Result<Vec<_>>>()
        .map(BitVector::from_bits)
}

/// Inverse of [`message_bits`].
pub fn bits_to_signs(bits: &BitVector) -> Vec<i8> {
    (0..bits.len())
        .map(|i| if bits.get(i) { -1 } else { 1 })
        .collect()
}

pub fn encode(code: &LinearCodeSpec, x: &[i8]) -> Result<Vec<i8>> {
    if x.len() != code.k {
        return Err(Error::InvalidParameter(format!(
            "message has length {}, code dimension is {}",
            x.len(),
            code.k
        )));
    }
    let b = message_bits(x)?;
    Ok(code
        .rows
        .iter()
        .map(|g| if g.dot(&b) { -1 } else { 1 })
        .collect())
}

/// True iff `g_{j1} ⊕ g_{j2} ⊕ g_{j3} = e_color`, i.e. the triple recovers
/// message coordinate `color` from every codeword.
pub fn verify_triple_linear(code: &LinearCodeSpec, triple: Triple, color: Color) -> bool {
    let color = color as usize;
    if color >= code.k || triple.iter().any(|&j| j >= code.n()) {
        return false;
    }
    let mut sum = code.row(triple[0]).clone();
    sum.xor_assign(code.row(triple[1]));
    sum.xor_assign(code.row(triple[2]));
    sum == BitVector::unit(code.k, color)
}

/// A linear code together with its decoding matchings `M_0..M_{k-1}`.
///
/// `delta` is the claimed matching density; it is named γ in some
/// presentations of the same object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongLdcInstance {
    pub code: LinearCodeSpec,
    pub matchings: Vec<Vec<Triple>>,
    pub delta: Rational,
}

impl StrongLdcInstance {
    pub fn new(code: LinearCodeSpec, matchings: Vec<Vec<Triple>>, delta: Rational) -> Result<Self> {
        if matchings.len() != code.k {
            return Err(Error::InvalidParameter(format!(
                "{} matchings given for a code of dimension {}",
                matchings.len(),
                code.k
            )));
        }
        Ok(Self {
            code,
            matchings,
            delta,
        })
    }

    pub fn k(&self) -> usize {
        self.code.k
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn min_matching_size(&self) -> usize {
        self.matchings.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn achieved_delta(&self) -> Rational {
        Rational::new(self.min_matching_size() as u64, self.n() as u64)
    }

    fn all_triples(&self) -> impl Iterator<Item = (Color, usize, Triple)> + '_ {
        self.matchings.iter().enumerate().flat_map(|(c, m)| {
            m.iter()
                .enumerate()
                .map(move |(idx, &t)| (c as Color, idx, t))
        })
    }
}

/// A triple that does not decode its color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleFailure {
    pub color: Color,
    /// Position of the triple within its matching.
    pub index: usize,
    pub triple: Triple,
    /// A message on which decoding fails, when found by enumeration.
    pub message: Option<Vec<i8>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdcReport {
    pub structural_ok: bool,
    pub algebraic_ok: bool,
    /// `None` when `k` exceeded the exhaustive limit.
    pub exhaustive_ok: Option<bool>,
    pub paths_agree: bool,
    /// Some matching is empty, so the conditions hold only vacuously.
    pub degenerate: bool,
    pub achieved_delta: Rational,
    pub findings: Vec<String>,
    pub failures: Vec<TripleFailure>,
}

impl LdcReport {
    pub fn passed(&self) -> bool {
        self.structural_ok
            && self.algebraic_ok
            && self.exhaustive_ok != Some(false)
            && self.paths_agree
    }
}

fn structural_findings(inst: &StrongLdcInstance) -> Vec<String> {
    let n = inst.n();
    let mut findings = Vec::new();
    for (color, idx, t) in inst.all_triples() {
        if let Some(&j) = t.iter().find(|&&j| j >= n) {
            findings.push(format!(
                "color {color} triple {idx} {t:?}: position {j} out of range 0..{n}"
            ));
        } else if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            findings.push(format!(
                "color {color} triple {idx} {t:?}: repeated position"
            ));
        }
    }
    if !findings.is_empty() {
        return findings;
    }

    for (color, m) in inst.matchings.iter().enumerate() {
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (idx, t) in m.iter().enumerate() {
            for &j in t {
                if let Some(prev) = owner.insert(j, idx) {
                    findings.push(format!(
                        "color {color}: triples {prev} and {idx} both use position {j}"
                    ));
                }
            }
        }
    }

    let need = required_matching_size(inst.delta, n);
    for (color, m) in inst.matchings.iter().enumerate() {
        if m.len() < need {
            findings.push(format!(
                "color {color} has {} triples, need at least {need}",
                m.len()
            ));
        }
    }

    let mut pair_owner: HashMap<(usize, usize), (Color, usize)> = HashMap::new();
    for (color, idx, t) in inst.all_triples() {
        let mut s = t;
        s.sort_unstable();
        for p in [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])] {
            if let Some((c0, i0)) = pair_owner.insert(p, (color, idx)) {
                if c0 != color {
                    findings.push(format!(
                        "color {c0} triple {i0} and color {color} triple {idx} share positions {p:?}"
                    ));
                }
            }
        }
    }
    findings
}

/// Checks every condition of a strong 3-query LDC: per-matching
/// disjointness, matching sizes against `delta`, pairwise intersections of
/// at most one position across matchings, and decoding correctness.
///
/// Decoding is always checked algebraically; when `k <= exhaustive_limit`
/// it is also checked by encoding all `2^k` messages, and the two sets of
/// failing triples must coincide.
pub fn verify_strong_ldc(inst: &StrongLdcInstance, exhaustive_limit: usize) -> LdcReport {
    let mut findings = structural_findings(inst);
    let structural_ok = findings.is_empty();
    let degenerate = inst.matchings.iter().any(Vec::is_empty);
    if degenerate {
        findings.push("degenerate: some matching is empty".into());
    }

    let in_range = |t: &Triple| t.iter().all(|&j| j < inst.n());
    let mut failures: Vec<TripleFailure> = inst
        .all_triples()
        .filter(|(color, _, t)| !verify_triple_linear(&inst.code, *t, *color))
        .map(|(color, index, triple)| TripleFailure {
            color,
            index,
            triple,
            message: None,
        })
        .collect();
    let algebraic_ok = failures.is_empty();

    let mut paths_agree = true;
    let exhaustive_ok = if inst.k() <= exhaustive_limit && inst.k() < 64 {
        let mut first_failure: HashMap<(Color, usize), Vec<i8>> = HashMap::new();
        for mask in 0u64..1 << inst.k() {
            let x: Vec<i8> = (0..inst.k())
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            let word = encode(&inst.code, &x).expect("message length matches the code");
            for (color, idx, t) in inst.all_triples() {
                if !in_range(&t) || first_failure.contains_key(&(color, idx)) {
                    continue;
                }
                if word[t[0]] * word[t[1]] * word[t[2]] != x[color as usize] {
                    first_failure.insert((color, idx), x.clone());
                }
            }
        }
        // Out-of-range triples cannot be evaluated; count them as failing.
        for (color, idx, t) in inst.all_triples() {
            if !in_range(&t) {
                first_failure.entry((color, idx)).or_default();
            }
        }
        for f in &mut failures {
            match first_failure.remove(&(f.color, f.index)) {
                Some(x) if !x.is_empty() => f.message = Some(x),
                Some(_) => {}
                None => paths_agree = false,
            }
        }
        if !first_failure.is_empty() {
            paths_agree = false;
        }
        if !paths_agree {
            findings.push("algebraic and exhaustive decoding checks disagree".into());
        }
        Some(failures.is_empty() && first_failure.is_empty())
    } else {
        None
    };

    for f in &failures {
        let msg = match &f.message {
            Some(x) => format!(
                "color {} triple {} {:?} fails to decode, e.g. on message {x:?}",
                f.color, f.index, f.triple
            ),
            None => format!(
                "color {} triple {} {:?} fails to decode",
                f.color, f.index, f.triple
            ),
        };
        findings.push(msg);
    }

    LdcReport {
        structural_ok,
        algebraic_ok,
        exhaustive_ok,
        paths_agree,
        degenerate,
        achieved_delta: inst.achieved_delta(),
        findings,
        failures,
    }
}

/// The union of the matchings as a colored hypergraph on the `n` codeword
/// positions, edges sorted canonically.
///
/// Fails when the instance is structurally broken or some triple does not
/// decode.
pub fn recovery_hypergraph(inst: &StrongLdcInstance) -> Result<ColoredHypergraph> {
    let structural = structural_findings(inst);
    if let Some(first) = structural.first() {
        return Err(Error::Structural(first.clone()));
    }
    if let Some((color, idx, t)) = inst
        .all_triples()
        .find(|(c, _, t)| !verify_triple_linear(&inst.code, *t, *c))
    {
        return Err(Error::Structural(format!(
            "color {color} triple {idx} {t:?} does not decode"
        )));
    }
    let edges = inst
        .all_triples()
        .map(|(c, _, t)| HyperEdge::new([t[0] as u32, t[1] as u32, t[2] as u32], c))
        .collect();
    let mut h = ColoredHypergraph::new(inst.n(), inst.k(), edges);
    h.canonicalize();
    Ok(h)
}

/// The triple of `M_color` that [`local_decode`] queries under `seed`.
pub fn decoding_triple(inst: &StrongLdcInstance, color: Color, seed: u64) -> Result<Triple> {
    let m = inst
        .matchings
        .get(color as usize)
        .ok_or_else(|| Error::InvalidParameter(format!("color {color} out of range")))?;
    if m.is_empty() {
        return Err(Error::EmptyMatching(color));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(m[rng.gen_range(0..m.len())])
}

/// Recovers message coordinate `color` from a (possibly corrupted) word by
/// querying one uniformly chosen triple of `M_color`.
pub fn local_decode(inst: &StrongLdcInstance, color: Color, word: &[i8], seed: u64) -> Result<i8> {
    if word.len() != inst.n() {
        return Err(Error::InvalidParameter(format!(
            "word has length {}, code length is {}",
            word.len(),
            inst.n()
        )));
    }
    let t = decoding_triple(inst, color, seed)?;
    Ok(word[t[0]] * word[t[1]] * word[t[2]])
}
