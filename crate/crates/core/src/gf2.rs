//! Packed GF(2) vectors and matrices, Gaussian elimination, and the
//! even-color decision procedure.
//!
//! Even subgraphs of a hypergraph are exactly the kernel vectors of its
//! vertex-edge incidence matrix. The even-color condition holds iff no kernel
//! vector has odd inner product with any color indicator.

use std::fmt;

use crate::hypergraph::{Augmentation, Color, ColoredHypergraph};
use crate::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length bit vector. Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Vector with ones at the listed positions.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + bit)
                }
            })
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Row-major packed bit matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { cols, rows }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.get(c)))
    }

    /// `M · z` over GF(2).
    pub fn mul_vec(&self, z: &BitVector) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.dot(z)))
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Reduced row echelon form. Columns are scanned left to right and the
    /// pivot is the lowest-index remaining row with a one in that column.
    fn echelon(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
        }
        rows.truncate(pivots.len());
        Echelon { rows, pivots }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

struct Echelon {
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

/// Vertex-edge incidence matrix: entry `(v, e)` is one iff `v ∈ e`.
pub fn incidence_matrix(h: &ColoredHypergraph) -> BitMatrix {
    let mut m = BitMatrix::zeros(h.n(), h.num_edges());
    for (idx, e) in h.edges().iter().enumerate() {
        for v in e.vertices() {
            m.set(v as usize, idx, true);
        }
    }
    m
}

/// A basis of `{z : M z = 0}`, one vector per free column in ascending
/// order. Its size is `cols - rank`.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let ech = m.echelon();
    let mut is_pivot = vec![false; m.num_cols()];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    (0..m.num_cols())
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut z = BitVector::unit(m.num_cols(), free);
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if row.get(free) {
                    z.set(p, true);
                }
            }
            z
        })
        .collect()
}

/// Indicator vector (over edge positions) of the edges of color `color`.
pub fn color_indicator(h: &ColoredHypergraph, color: Color) -> BitVector {
    BitVector::from_bits(h.edges().iter().map(|e| e.color() == color))
}

/// Verdict of the even-color check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionTwoVerdict<'a> {
    pub holds: bool,
    pub violating_color: Option<Color>,
    /// Even edge subset with an odd number of `violating_color` edges.
    pub witness: Option<Augmentation<'a>>,
}

/// Decides whether every even subgraph of `h` has an even number of edges of
/// every color. On failure returns the first kernel basis vector (colors
/// scanned in ascending order) with odd inner product against a color
/// indicator.
pub fn check_condition_ii(h: &ColoredHypergraph) -> ConditionTwoVerdict<'_> {
    let basis = kernel_basis(&incidence_matrix(h));
    for color in 0..h.k() as Color {
        let chi = color_indicator(h, color);
        if let Some(z) = basis.iter().find(|z| z.dot(&chi)) {
            let support: Vec<usize> = z.ones().collect();
            let witness = Augmentation::from_edges(h, &support)
                .expect("kernel vector indexes existing edges");
            return ConditionTwoVerdict {
                holds: false,
                violating_color: Some(color),
                witness: Some(witness),
            };
        }
    }
    ConditionTwoVerdict {
        holds: true,
        violating_color: None,
        witness: None,
    }
}

/// Greedily lowers the weight of a violating kernel vector by adding basis
/// vectors, keeping the inner product with `chi` odd.
pub fn shrink_witness(basis: &[BitVector], chi: &BitVector, witness: &BitVector) -> BitVector {
    let mut best = witness.clone();
    loop {
        let mut improved = false;
        for b in basis {
            let candidate = best.xor(b);
            if candidate.dot(chi) && candidate.count_ones() < best.count_ones() {
                best = candidate;
                improved = true;
            }
        }
        if !improved {
            return best;
        }
    }
}

pub const DEFAULT_MAX_EDGES: usize = 24;
const ENUMERATION_HARD_LIMIT: usize = 40;

/// Brute-force enumeration of every even edge subset (including the empty
/// one), as sorted edge-index lists. Subsets come out in Gray-code order.
pub fn enumerate_even_subgraphs(h: &ColoredHypergraph, max_edges: usize) -> Result<EvenSubgraphs> {
    let m = h.num_edges();
    let limit = max_edges.min(ENUMERATION_HARD_LIMIT);
    if m > limit {
        return Err(Error::TooLarge { edges: m, limit });
    }
    // Relabel touched vertices densely; at most 3 * 40 of them.
    let mut label = std::collections::HashMap::new();
    let masks: Vec<u128> = h
        .edges()
        .iter()
        .map(|e| {
            e.vertices().iter().fold(0u128, |acc, v| {
                let next = label.len();
                let bit = *label.entry(*v).or_insert(next);
                acc ^ (1u128 << bit)
            })
        })
        .collect();
    Ok(EvenSubgraphs {
        masks,
        step: 0,
        subset: 0,
        parity: 0,
        done: false,
    })
}

/// Iterator returned by [`enumerate_even_subgraphs`].
pub struct EvenSubgraphs {
    masks: Vec<u128>,
    step: u64,
    subset: u64,
    parity: u128,
    done: bool,
}

impl Iterator for EvenSubgraphs {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let total = 1u64 << self.masks.len();
        while !self.done {
            let current = (self.parity == 0).then_some(self.subset);
            self.step += 1;
            if self.step == total {
                self.done = true;
            } else {
                let flip = self.step.trailing_zeros() as usize;
                self.subset ^= 1 << flip;
                self.parity ^= self.masks[flip];
            }
            if let Some(s) = current {
                return Some((0..self.masks.len()).filter(|i| s >> i & 1 == 1).collect());
            }
        }
        None
    }
}
