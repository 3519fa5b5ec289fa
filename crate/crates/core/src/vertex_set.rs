//! Fixed-universe bitsets over `[0, n)`.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// An ordered set of vertices of `K_n`, stored as a bitset with a cached
/// cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            words: vec![0; words_for(n)],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.clear_tail();
        s.len = n;
        s
    }

    /// The half-open range `[lo, hi)` inside a universe of size `n`.
    pub fn range(n: usize, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi <= n, "range [{lo},{hi}) outside universe {n}");
        let mut s = Self::empty(n);
        for v in lo..hi {
            s.insert(v);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub(crate) fn from_words(n: usize, mut words: Vec<u64>) -> Self {
        assert_eq!(words.len(), words_for(n));
        if n % WORD != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (n % WORD)) - 1;
            }
        }
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Self { n, words, len }
    }

    fn clear_tail(&mut self) {
        if self.n % WORD != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (self.n % WORD)) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && (self.words[v / WORD] >> (v % WORD)) & 1 == 1
    }

    /// Returns `true` if `v` was newly inserted.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.n, "vertex {v} outside universe {}", self.n);
        let (w, b) = (v / WORD, v % WORD);
        let fresh = (self.words[w] >> b) & 1 == 0;
        self.words[w] |= 1 << b;
        self.len += fresh as usize;
        fresh
    }

    /// Returns `true` if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.n {
            return false;
        }
        let (w, b) = (v / WORD, v % WORD);
        let present = (self.words[w] >> b) & 1 == 1;
        self.words[w] &= !(1 << b);
        self.len -= present as usize;
        present
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Self::from_words(self.n, words)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        Self::from_words(self.n, words)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        Self::from_words(self.n, words)
    }

    /// `|self ∩ other|` without allocating.
    #[inline]
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `|self ∩ a ∩ b|` without allocating.
    #[inline]
    pub fn intersection3_len(&self, a: &Self, b: &Self) -> usize {
        self.words
            .iter()
            .zip(&a.words)
            .zip(&b.words)
            .map(|((x, y), z)| (x & y & z).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Number of elements strictly below `v`.
    pub fn rank(&self, v: usize) -> usize {
        let (w, b) = (v / WORD, v % WORD);
        let mut r: usize = self.words[..w.min(self.words.len())]
            .iter()
            .map(|x| x.count_ones() as usize)
            .sum();
        if w < self.words.len() && b > 0 {
            r += (self.words[w] & ((1u64 << b) - 1)).count_ones() as usize;
        }
        r
    }

    /// Ascending iteration.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_universe(&self, other: &Self) {
        debug_assert_eq!(self.n, other.n, "vertex sets over different universes");
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
