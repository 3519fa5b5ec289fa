//! Red-blue colourings of `E(K_n)` stored as per-vertex red bitsets.
//!
//! Random colourings use `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha`;
//! the stream is portable, so a `(n, red_prob, seed)` triple names the same
//! colouring on every platform. Pairs `{u, v}` with `u < v` are drawn in
//! lexicographic order, one 64-bit word per pair, and coloured red when the
//! word lies below `red_prob * 2^64` (exact rational comparison).

use crate::rational::{self, Rational};
use crate::vertex_set::VertexSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn other(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }
}

impl std::fmt::Display for Colour {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Colour::Red => "red",
            Colour::Blue => "blue",
        })
    }
}

impl std::str::FromStr for Colour {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "red" => Ok(Colour::Red),
            "blue" => Ok(Colour::Blue),
            other => Err(format!("unknown colour {other:?} (expected red or blue)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ColouringError {
    #[error("red probability {0} outside [0, 1]")]
    BadProbability(String),
    #[error("{0} is not a prime congruent to 1 mod 4")]
    BadModulus(u64),
    #[error("density undefined: {0} side is empty")]
    EmptySide(&'static str),
    #[error("density requires disjoint sets; they share {0} vertices")]
    Overlap(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A symmetric two-colouring of the edges of `K_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Colouring {
    n: usize,
    red: Vec<VertexSet>,
    blue: Vec<VertexSet>,
}

impl std::fmt::Debug for Colouring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Colouring(n={}, red_edges={})", self.n, self.red_edge_count())
    }
}

impl Colouring {
    /// Builds a colouring from a symmetric red-edge predicate on `u < v`.
    pub fn from_fn(n: usize, mut is_red: impl FnMut(usize, usize) -> bool) -> Self {
        let mut red = vec![VertexSet::empty(n); n];
        for u in 0..n {
            for v in u + 1..n {
                if is_red(u, v) {
                    red[u].insert(v);
                    red[v].insert(u);
                }
            }
        }
        Self::from_red_sets(n, red)
    }

    fn from_red_sets(n: usize, red: Vec<VertexSet>) -> Self {
        let full = VertexSet::full(n);
        let blue = red
            .iter()
            .enumerate()
            .map(|(u, r)| {
                let mut b = full.difference(r);
                b.remove(u);
                b
            })
            .collect();
        Self { n, red, blue }
    }

    pub fn from_edges(n: usize, red_edges: &[(usize, usize)]) -> Self {
        let mut red = vec![VertexSet::empty(n); n];
        for &(u, v) in red_edges {
            assert!(u != v, "self-loop {u}");
            red[u].insert(v);
            red[v].insert(u);
        }
        Self::from_red_sets(n, red)
    }

    pub fn monochromatic(n: usize, colour: Colour) -> Self {
        Self::from_fn(n, |_, _| colour == Colour::Red)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn red_neighbours(&self, v: usize) -> &VertexSet {
        &self.red[v]
    }

    #[inline]
    pub fn blue_neighbours(&self, v: usize) -> &VertexSet {
        &self.blue[v]
    }

    #[inline]
    pub fn neighbours(&self, v: usize, colour: Colour) -> &VertexSet {
        match colour {
            Colour::Red => &self.red[v],
            Colour::Blue => &self.blue[v],
        }
    }

    #[inline]
    pub fn is_red(&self, u: usize, v: usize) -> bool {
        self.red[u].contains(v)
    }

    #[inline]
    pub fn colour_of(&self, u: usize, v: usize) -> Colour {
        debug_assert_ne!(u, v);
        if self.is_red(u, v) {
            Colour::Red
        } else {
            Colour::Blue
        }
    }

    pub fn red_edge_count(&self) -> usize {
        self.red.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Number of red edges between `x` and `y`.
    pub fn red_edges_between(&self, x: &VertexSet, y: &VertexSet) -> usize {
        x.iter().map(|v| self.red[v].intersection_len(y)).sum()
    }

    pub fn edges_between(&self, x: &VertexSet, y: &VertexSet, colour: Colour) -> usize {
        x.iter().map(|v| self.neighbours(v, colour).intersection_len(y)).sum()
    }

    /// Exact `e_R(X,Y) / (|X||Y|)` for disjoint nonempty `X`, `Y`.
    pub fn red_density(&self, x: &VertexSet, y: &VertexSet) -> Result<Rational, ColouringError> {
        self.density(x, y, Colour::Red)
    }

    pub fn blue_density(&self, x: &VertexSet, y: &VertexSet) -> Result<Rational, ColouringError> {
        self.density(x, y, Colour::Blue)
    }

    fn density(&self, x: &VertexSet, y: &VertexSet, colour: Colour) -> Result<Rational, ColouringError> {
        if x.is_empty() {
            return Err(ColouringError::EmptySide("X"));
        }
        if y.is_empty() {
            return Err(ColouringError::EmptySide("Y"));
        }
        let shared = x.intersection_len(y);
        if shared > 0 {
            return Err(ColouringError::Overlap(shared));
        }
        let e = self.edges_between(x, y, colour);
        Ok(Rational::new(BigInt::from(e), BigInt::from(x.len() * y.len())))
    }

    pub fn is_clique(&self, s: &VertexSet, colour: Colour) -> bool {
        let v: Vec<usize> = s.to_vec();
        v.iter()
            .enumerate()
            .all(|(i, &a)| v[i + 1..].iter().all(|&b| self.colour_of(a, b) == colour))
    }

    /// Every `a ∈ s`, `b ∈ t` (distinct) joined in `colour`.
    pub fn all_between(&self, s: &VertexSet, t: &VertexSet, colour: Colour) -> bool {
        s.iter().all(|a| t.iter().all(|b| a == b || self.colour_of(a, b) == colour))
    }

    /// Writes the `RBC1` text form: header `RBC1 <n>`, then for each vertex
    /// `i = 1..n-1` a row of `i` characters, character `j` being `1` iff
    /// `{i, j}` is red.
    pub fn to_rbc1(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n / 2 + 16);
        writeln!(out, "RBC1 {}", self.n).unwrap();
        for i in 1..self.n {
            for j in 0..i {
                out.push(if self.is_red(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_rbc1(text: &str) -> Result<Self, ColouringError> {
        let parse_err = |line: usize, msg: String| ColouringError::Parse { line, msg };
        let mut lines = text.split('\n');
        let header = lines.next().ok_or_else(|| parse_err(1, "empty input".into()))?;
        let n: usize = header
            .strip_prefix("RBC1 ")
            .ok_or_else(|| parse_err(1, format!("malformed header {header:?}")))?
            .trim_end_matches('\r')
            .parse()
            .map_err(|_| parse_err(1, format!("malformed vertex count in header {header:?}")))?;
        if n == 0 {
            return Err(parse_err(1, "vertex count must be at least 1".into()));
        }
        let mut red = vec![VertexSet::empty(n); n];
        for i in 1..n {
            let line_no = i + 1;
            let row = lines
                .next()
                .filter(|r| !(r.is_empty() && i > 0))
                .ok_or_else(|| parse_err(line_no, format!("missing row for vertex {i} (expected {} rows)", n - 1)))?;
            if row.len() != i {
                return Err(parse_err(line_no, format!("row for vertex {i} has length {}, expected {i}", row.len())));
            }
            for (j, ch) in row.bytes().enumerate() {
                match ch {
                    b'1' => {
                        red[i].insert(j);
                        red[j].insert(i);
                    }
                    b'0' => {}
                    other => {
                        return Err(parse_err(
                            line_no,
                            format!("non-binary character {:?} at column {}", other as char, j + 1),
                        ))
                    }
                }
            }
        }
        match lines.next() {
            None | Some("") => {}
            Some(_) => return Err(parse_err(n + 1, "trailing data after final row".into())),
        }
        if lines.any(|l| !l.is_empty()) {
            return Err(parse_err(n + 2, "trailing data after final row".into()));
        }
        Ok(Self::from_red_sets(n, red))
    }

    pub fn save(&self, path: &Path) -> Result<(), ColouringError> {
        std::fs::write(path, self.to_rbc1())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ColouringError> {
        Self::from_rbc1(&std::fs::read_to_string(path)?)
    }
}

/// Each pair red independently with probability `red_prob`.
pub fn random_colouring(n: usize, red_prob: &Rational, seed: u64) -> Result<Colouring, ColouringError> {
    if red_prob.is_negative() || *red_prob > Rational::one() {
        return Err(ColouringError::BadProbability(rational::to_ratio_string(red_prob)));
    }
    assert!(n >= 1, "colouring needs at least one vertex");
    // red iff word < red_prob * 2^64, i.e. word * den < num * 2^64
    let num: BigInt = red_prob.numer().clone() << 64;
    let den = red_prob.denom().clone();
    let threshold: Option<u128> = if red_prob.is_zero() {
        Some(0)
    } else if red_prob.is_one() {
        None
    } else {
        // ceil(num / den) as u128 threshold: word < num/den <=> word < ceil(num/den)
        let (q, r) = num_integer::Integer::div_rem(&num, &den);
        let q = q.to_u128().expect("threshold below 2^64");
        Some(if r.is_zero() { q } else { q + 1 })
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Colouring::from_fn(n, |_, _| {
        let w = rng.next_u64() as u128;
        match threshold {
            None => true,
            Some(t) => w < t,
        }
    }))
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Paley colouring on `Z_q`: `{u, v}` red iff `u - v` is a nonzero square.
pub fn paley_colouring(q: u64) -> Result<Colouring, ColouringError> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(ColouringError::BadModulus(q));
    }
    let mut residue = vec![false; q as usize];
    for a in 1..q {
        residue[((a * a) % q) as usize] = true;
    }
    Ok(Colouring::from_fn(q as usize, |u, v| residue[(v - u) % q as usize]))
}
