//! The `.cheg` (colored hypergraph) and `.sldc` (strong LDC) text formats.
//!
//! ```text
//! cheg 1              sldc 1
//! n <n>               k <k>
//! k <k>               n <n>
//! e <u> <v> <w> <c>   delta <p>/<q>
//! ...                 g <k-bit string>     (n lines)
//!                     m <i> <j1> <j2> <j3> (one per triple)
//! ```
//!
//! Integers are 0-indexed and whitespace separated; blank lines and lines
//! starting with `#` are ignored anywhere.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::gf2::BitVector;
use crate::hypergraph::{ColoredHypergraph, HyperEdge};
use crate::ldc::{LinearCodeSpec, StrongLdcInstance, Triple};
use crate::{Error, Rational, Result};

/// Either kind of file, detected from its header line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Cheg(ColoredHypergraph),
    Sldc(StrongLdcInstance),
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("`{s}` is not a non-negative rational p/q"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// `p/q` in lowest terms, always with an explicit denominator.
pub fn format_rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    peeked: Option<(usize, Vec<&'a str>)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            peeked: None,
        }
    }

    fn fill(&mut self) {
        if self.peeked.is_none() {
            self.peeked = self.inner.by_ref().find_map(|(i, l)| {
                let l = l.trim();
                (!l.is_empty() && !l.starts_with('#'))
                    .then(|| (i + 1, l.split_whitespace().collect()))
            });
        }
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.fill();
        self.peeked.as_ref().map(|(_, t)| t[0])
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        self.fill();
        self.peeked.take()
    }

    /// Next line, which must start with `key` and carry `arity` more fields.
    fn expect(&mut self, key: &str, arity: usize) -> Result<(usize, Vec<&'a str>)> {
        match self.next() {
            None => Err(Error::Parse {
                line: 0,
                message: format!("unexpected end of input, expected `{key}`"),
            }),
            Some((line, tokens)) if tokens[0] != key => Err(Error::Parse {
                line,
                message: format!("expected `{key}`, found `{}`", tokens[0]),
            }),
            Some((line, tokens)) if tokens.len() != arity + 1 => Err(Error::Parse {
                line,
                message: format!("`{key}` takes {arity} field(s), found {}", tokens.len() - 1),
            }),
            Some((line, tokens)) => Ok((line, tokens[1..].to_vec())),
        }
    }
}

fn field<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} `{token}`"),
    })
}

fn positive(line: usize, token: &str, what: &str) -> Result<usize> {
    let v: usize = field(line, token, what)?;
    if v == 0 {
        return Err(Error::Parse {
            line,
            message: format!("{what} must be positive"),
        });
    }
    Ok(v)
}

fn header(lines: &mut Lines<'_>, magic: &str) -> Result<()> {
    let (line, t) = lines.expect(magic, 1)?;
    if t[0] != "1" {
        return Err(Error::Parse {
            line,
            message: format!("unsupported {magic} version `{}`", t[0]),
        });
    }
    Ok(())
}

pub fn write_cheg(h: &ColoredHypergraph) -> String {
    let mut edges = h.edges().to_vec();
    edges.sort_unstable();
    let mut out = format!("cheg 1\nn {}\nk {}\n", h.n(), h.k());
    for e in edges {
        let [u, v, w] = e.vertices();
        let _ = writeln!(out, "e {u} {v} {w} {}", e.color());
    }
    out
}

/// Reads edges in file order. Range and linearity problems are left for
/// validation; only syntax is checked here.
pub fn read_cheg(text: &str) -> Result<ColoredHypergraph> {
    let mut lines = Lines::new(text);
    header(&mut lines, "cheg")?;
    let (line, t) = lines.expect("n", 1)?;
    let n = positive(line, t[0], "vertex count")?;
    let (line, t) = lines.expect("k", 1)?;
    let k = positive(line, t[0], "color count")?;
    let mut edges = Vec::new();
    while lines.peek_key().is_some() {
        let (line, t) = lines.expect("e", 4)?;
        let u = field(line, t[0], "vertex")?;
        let v = field(line, t[1], "vertex")?;
        let w = field(line, t[2], "vertex")?;
        let c = field(line, t[3], "color")?;
        edges.push(HyperEdge::new([u, v, w], c));
    }
    Ok(ColoredHypergraph::new(n, k, edges))
}

pub fn write_sldc(inst: &StrongLdcInstance) -> String {
    let mut out = format!(
        "sldc 1\nk {}\nn {}\ndelta {}\n",
        inst.k(),
        inst.n(),
        format_rational(inst.delta)
    );
    for row in inst.code.rows() {
        let _ = writeln!(out, "g {row}");
    }
    for (color, m) in inst.matchings.iter().enumerate() {
        for [a, b, c] in m {
            let _ = writeln!(out, "m {color} {a} {b} {c}");
        }
    }
    out
}

pub fn read_sldc(text: &str) -> Result<StrongLdcInstance> {
    let mut lines = Lines::new(text);
    header(&mut lines, "sldc")?;
    let (line, t) = lines.expect("k", 1)?;
    let k = positive(line, t[0], "message length")?;
    let (line, t) = lines.expect("n", 1)?;
    let n = positive(line, t[0], "code length")?;
    let (line, t) = lines.expect("delta", 1)?;
    let delta = parse_rational(t[0]).map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })?;

    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, t) = lines.expect("g", 1)?;
        let bits = t[0]
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse {
                    line,
                    message: format!("invalid bit `{ch}`"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.len() != k {
            return Err(Error::Parse {
                line,
                message: format!("generator row has {} bits, expected {k}", bits.len()),
            });
        }
        rows.push(BitVector::from_bits(bits));
    }

    let mut matchings: Vec<Vec<Triple>> = vec![Vec::new(); k];
    while lines.peek_key().is_some() {
        let (line, t) = lines.expect("m", 4)?;
        let color: usize = field(line, t[0], "color")?;
        if color >= k {
            return Err(Error::Parse {
                line,
                message: format!("color {color} out of range 0..{k}"),
            });
        }
        let triple = [
            field(line, t[1], "position")?,
            field(line, t[2], "position")?,
            field(line, t[3], "position")?,
        ];
        matchings[color].push(triple);
    }

    let code = LinearCodeSpec::new(k, rows)?;
    StrongLdcInstance::new(code, matchings, delta)
}

pub fn read_document(text: &str) -> Result<Document> {
    match Lines::new(text).peek_key() {
        Some("cheg") => read_cheg(text).map(Document::Cheg),
        Some("sldc") => read_sldc(text).map(Document::Sldc),
        Some(other) => Err(Error::Parse {
            line: 1,
            message: format!("unknown file header `{other}`"),
        }),
        None => Err(Error::Parse {
            line: 0,
            message: "empty input".into(),
        }),
    }
}
