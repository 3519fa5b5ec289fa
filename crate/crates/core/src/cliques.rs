//! Exact monochromatic clique search and blue-book search.

use crate::colouring::{Colour, Colouring};
use crate::rational::{self, Rational};
use crate::vertex_set::VertexSet;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliqueError {
    #[error("no vertex of the given set has a blue book satisfying the page bound")]
    NoBook,
    #[error("density parameter {0} must lie strictly between 0 and 1")]
    BadDensity(String),
    #[error("search result failed its recheck: {0}")]
    Recheck(String),
}

/// A monochromatic book: `spine` is a clique in `colour` and every spine
/// vertex is joined in `colour` to every page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Book {
    pub spine: VertexSet,
    pub pages: VertexSet,
    pub colour: Colour,
}

impl Book {
    pub fn is_valid(&self, c: &Colouring) -> bool {
        self.spine.is_disjoint(&self.pages)
            && c.is_clique(&self.spine, self.colour)
            && c.all_between(&self.spine, &self.pages, self.colour)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoClique {
    Red(VertexSet),
    Blue(VertexSet),
    Neither,
}

/// Greedy sequential colouring of `cand` in ascending order. Returns the
/// vertices sorted by colour class together with the running colour number,
/// so that `bounds[i]` bounds the clique number of `order[..=i]`.
fn colour_sort(c: &Colouring, colour: Colour, cand: &VertexSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.len());
    let mut bounds = Vec::with_capacity(cand.len());
    let mut uncoloured = cand.clone();
    let mut k = 0;
    while !uncoloured.is_empty() {
        k += 1;
        let mut avail = uncoloured.clone();
        while let Some(v) = avail.first() {
            avail.remove(v);
            avail = avail.difference(c.neighbours(v, colour));
            uncoloured.remove(v);
            order.push(v);
            bounds.push(k);
        }
    }
    (order, bounds)
}

struct Search<'a> {
    c: &'a Colouring,
    colour: Colour,
    best: usize,
    cap: usize,
}

impl Search<'_> {
    /// Raises `self.best` to the clique number of `cand` plus `depth`, capped.
    fn expand(&mut self, depth: usize, cand: VertexSet) {
        if cand.is_empty() {
            self.best = self.best.max(depth);
            return;
        }
        let (order, bounds) = colour_sort(self.c, self.colour, &cand);
        let mut cand = cand;
        for i in (0..order.len()).rev() {
            if self.best >= self.cap || depth + bounds[i] <= self.best {
                return;
            }
            let v = order[i];
            let next = cand.intersection(self.c.neighbours(v, self.colour));
            self.expand(depth + 1, next);
            cand.remove(v);
        }
    }

    /// Whether `cand` contains a clique of size `need`.
    fn exists(&self, cand: &VertexSet, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if cand.len() < need {
            return false;
        }
        let (order, bounds) = colour_sort(self.c, self.colour, cand);
        let mut cand = cand.clone();
        for i in (0..order.len()).rev() {
            if bounds[i] < need {
                return false;
            }
            let v = order[i];
            let next = cand.intersection(self.c.neighbours(v, self.colour));
            if self.exists(&next, need - 1) {
                return true;
            }
            cand.remove(v);
        }
        false
    }
}

/// A maximum clique of `colour` inside `within`, stopping as soon as a clique
/// of size `size_cap` is known to exist. Among cliques of the reported size
/// the lexicographically smallest vertex list is returned.
pub fn max_clique(c: &Colouring, colour: Colour, within: &VertexSet, size_cap: usize) -> VertexSet {
    assert!(size_cap >= 1, "size_cap must be at least 1");
    let n = c.n();
    if within.is_empty() {
        return VertexSet::empty(n);
    }
    let mut search = Search {
        c,
        colour,
        best: 1,
        cap: size_cap,
    };
    search.expand(0, within.clone());
    let target = search.best.min(size_cap);

    // lexicographic extraction: take each vertex if a completion still exists
    let mut clique = VertexSet::empty(n);
    let mut cand = within.clone();
    let mut need = target;
    let mut v = 0;
    while need > 0 {
        let next_v = cand.iter().find(|&u| u >= v).expect("completion exists by construction");
        let above = VertexSet::range(n, next_v + 1, n);
        let sub = cand.intersection(c.neighbours(next_v, colour)).intersection(&above);
        if search.exists(&sub, need - 1) {
            clique.insert(next_v);
            cand = sub;
            need -= 1;
        } else {
            cand.remove(next_v);
        }
        v = next_v + 1;
    }
    assert!(c.is_clique(&clique, colour), "clique recheck failed");
    clique
}

/// First witness among a red `K_k` and a blue `K_ℓ`, or `Neither`.
pub fn has_mono_clique(c: &Colouring, k: usize, ell: usize) -> MonoClique {
    assert!(k >= 1 && ell >= 1);
    let all = c.all_vertices();
    let red = max_clique(c, Colour::Red, &all, k);
    if red.len() >= k {
        return MonoClique::Red(red);
    }
    let blue = max_clique(c, Colour::Blue, &all, ell);
    if blue.len() >= ell {
        return MonoClique::Blue(blue);
    }
    MonoClique::Neither
}

/// Page bound `2|T| ≥ μ^s |within|`, exactly.
fn pages_suffice(pages: usize, mu_pow: &Rational, within: usize) -> bool {
    Rational::from_integer(BigInt::from(2 * pages)) >= mu_pow * rational::from_usize(within)
}

const NODE_CAP: usize = 200_000;

struct BookSearch<'a> {
    c: &'a Colouring,
    u: Vec<usize>,
    s: usize,
    floor: Rational,
    best: Option<(Vec<usize>, VertexSet)>,
    nodes: usize,
}

impl BookSearch<'_> {
    fn dfs(&mut self, from: usize, spine: &mut Vec<usize>, pages: VertexSet) {
        self.nodes += 1;
        if self.nodes > NODE_CAP {
            return;
        }
        let best_len = self.best.as_ref().map_or(0, |(_, t)| t.len());
        if rational::from_usize(pages.len()) < self.floor || (self.best.is_some() && pages.len() <= best_len) {
            return;
        }
        if spine.len() == self.s {
            self.best = Some((spine.clone(), pages));
            return;
        }
        let remaining = self.s - spine.len();
        for i in from..self.u.len() {
            if self.u.len() - i < remaining {
                break;
            }
            let v = self.u[i];
            let mut next = pages.intersection(self.c.blue_neighbours(v));
            next.remove(v);
            spine.push(v);
            self.dfs(i + 1, spine, next);
            spine.pop();
            if self.nodes > NODE_CAP {
                return;
            }
        }
    }
}

/// A blue book `(S, T)` inside `within` with `T` the common blue neighbourhood
/// of `S` in `within ∖ S` and `|T| ≥ μ^{|S|}|within|/2`, with `|S|` as large as
/// the search finds.
///
/// The spine is drawn from a greedy lowest-index blue clique `U` inside the
/// set of vertices with blue degree at least `μ|within|`. Subsets of `U` up to
/// `spine_budget` are searched exhaustively (largest size first, then most
/// pages, then lowest indices), and a spine of full budget size is extended
/// greedily afterwards.
pub fn best_blue_book(c: &Colouring, within: &VertexSet, mu: &Rational, spine_budget: usize) -> Result<Book, CliqueError> {
    if *mu <= Rational::zero() || *mu >= Rational::one() {
        return Err(CliqueError::BadDensity(rational::to_ratio_string(mu)));
    }
    let n = c.n();
    let size = within.len();
    let size_r = rational::from_usize(size);
    let degree_floor = mu * &size_r;
    let mut high: VertexSet = VertexSet::from_indices(
        n,
        within
            .iter()
            .filter(|&v| rational::from_usize(c.blue_neighbours(v).intersection_len(within)) >= degree_floor),
    );
    if high.is_empty() {
        high = within.clone();
    }

    let mut u = Vec::new();
    let mut cand = high.clone();
    while let Some(v) = cand.first() {
        u.push(v);
        cand = cand.intersection(c.blue_neighbours(v));
    }

    let mut found: Option<(Vec<usize>, VertexSet)> = None;
    for s in (1..=u.len().min(spine_budget)).rev() {
        let mu_pow = rational::pow(mu, s);
        let mut search = BookSearch {
            c,
            u: u.clone(),
            s,
            floor: &mu_pow * &size_r / rational::int(2),
            best: None,
            nodes: 0,
        };
        search.dfs(0, &mut Vec::with_capacity(s), within.clone());
        if let Some(best) = search.best {
            found = Some(best);
            break;
        }
    }

    let (mut spine, mut pages) = match found {
        Some(f) => f,
        None => {
            // best singleton over all of `within`
            let (v, d) = within
                .iter()
                .map(|v| (v, c.blue_neighbours(v).intersection_len(within)))
                .fold(None, |acc: Option<(usize, usize)>, (v, d)| match acc {
                    Some((_, bd)) if bd >= d => acc,
                    _ => Some((v, d)),
                })
                .ok_or(CliqueError::NoBook)?;
            if d == 0 || !pages_suffice(d, mu, size) {
                return Err(CliqueError::NoBook);
            }
            (vec![v], within.intersection(c.blue_neighbours(v)))
        }
    };

    if spine.len() == spine_budget {
        loop {
            let next = pages
                .iter()
                .map(|v| (v, pages.intersection_len(c.blue_neighbours(v))))
                .fold(None, |acc: Option<(usize, usize)>, (v, d)| match acc {
                    Some((_, bd)) if bd >= d => acc,
                    _ => Some((v, d)),
                });
            let Some((v, d)) = next else { break };
            if !pages_suffice(d, &rational::pow(mu, spine.len() + 1), size) {
                break;
            }
            spine.push(v);
            pages = pages.intersection(c.blue_neighbours(v));
        }
    }

    let book = Book {
        spine: VertexSet::from_indices(n, spine.iter().copied()),
        pages,
        colour: Colour::Blue,
    };
    recheck_book(c, within, mu, &book)?;
    Ok(book)
}

fn recheck_book(c: &Colouring, within: &VertexSet, mu: &Rational, book: &Book) -> Result<(), CliqueError> {
    if book.spine.is_empty() || !book.spine.is_subset(within) {
        return Err(CliqueError::Recheck("spine empty or outside the search set".into()));
    }
    if !book.is_valid(c) {
        return Err(CliqueError::Recheck("not a blue book".into()));
    }
    let mut common = within.difference(&book.spine);
    for s in book.spine.iter() {
        common = common.intersection(c.blue_neighbours(s));
    }
    if common != book.pages {
        return Err(CliqueError::Recheck("pages differ from the common blue neighbourhood".into()));
    }
    if !pages_suffice(book.pages.len(), &rational::pow(mu, book.spine.len()), within.len()) {
        return Err(CliqueError::Recheck("page bound violated".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{paley_colouring, random_colouring};
    use crate::rational::ratio;

    fn naive_clique_number(c: &Colouring, colour: Colour) -> usize {
        let n = c.n();
        (0u32..1 << n)
            .filter(|mask| {
                let s = VertexSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
                c.is_clique(&s, colour)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn monochromatic_extremes() {
        let red = Colouring::monochromatic(6, Colour::Red);
        let all = red.all_vertices();
        assert_eq!(max_clique(&red, Colour::Red, &all, 10).len(), 6);
        assert_eq!(max_clique(&red, Colour::Blue, &all, 10).to_vec(), vec![0]);
        assert_eq!(max_clique(&red, Colour::Red, &all, 4).to_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn paley17_clique_numbers() {
        let p = paley_colouring(17).unwrap();
        let all = p.all_vertices();
        assert_eq!(max_clique(&p, Colour::Red, &all, 17).len(), 3);
        assert_eq!(max_clique(&p, Colour::Blue, &all, 17).len(), 3);
        assert_eq!(has_mono_clique(&p, 4, 4), MonoClique::Neither);
        assert!(matches!(has_mono_clique(&p, 3, 4), MonoClique::Red(_)));
    }

    #[test]
    fn agrees_with_enumeration() {
        for seed in 0..100 {
            let n = 6 + (seed as usize % 7);
            let c = random_colouring(n, &ratio(1, 2), seed).unwrap();
            for colour in [Colour::Red, Colour::Blue] {
                let q = max_clique(&c, colour, &c.all_vertices(), n);
                assert!(c.is_clique(&q, colour));
                assert_eq!(q.len(), naive_clique_number(&c, colour), "seed {seed}");
            }
        }
    }

    #[test]
    fn lexicographically_first() {
        // two disjoint red triangles {1,2,3} and {0,4,5}
        let c = Colouring::from_edges(6, &[(1, 2), (1, 3), (2, 3), (0, 4), (0, 5), (4, 5)]);
        assert_eq!(max_clique(&c, Colour::Red, &c.all_vertices(), 6).to_vec(), vec![0, 4, 5]);
    }

    #[test]
    fn all_blue_small_k5() {
        let c = Colouring::monochromatic(5, Colour::Blue);
        assert_eq!(has_mono_clique(&c, 2, 6), MonoClique::Neither);
    }

    /// u1..u5 = 0..5, w1..w5 = 5..10; w–w red, everything else blue.
    fn u_w_colouring() -> Colouring {
        Colouring::from_fn(10, |a, b| a >= 5 && b >= 5)
    }

    #[test]
    fn u_w_book() {
        let c = u_w_colouring();
        let book = best_blue_book(&c, &c.all_vertices(), &ratio(2, 5), 12).unwrap();
        assert_eq!(book.spine.to_vec(), vec![0, 1, 2, 3, 4]);
        assert_eq!(book.pages.to_vec(), vec![5, 6, 7, 8, 9]);
    }

    #[test]
    fn all_blue_k8_book() {
        let c = Colouring::monochromatic(8, Colour::Blue);
        for budget in [7, 8, 12] {
            let book = best_blue_book(&c, &c.all_vertices(), &ratio(1, 2), budget).unwrap();
            assert_eq!(book.spine.len(), 7, "budget {budget}");
            assert_eq!(book.pages.len(), 1);
        }
        // a budget of 3 is extended greedily past the exhaustive phase
        let book = best_blue_book(&c, &c.all_vertices(), &ratio(1, 2), 3).unwrap();
        assert_eq!(book.spine.len(), 7);
    }

    #[test]
    fn all_red_has_no_book() {
        let c = Colouring::monochromatic(6, Colour::Red);
        assert_eq!(best_blue_book(&c, &c.all_vertices(), &ratio(2, 5), 12), Err(CliqueError::NoBook));
        assert!(matches!(
            best_blue_book(&c, &c.all_vertices(), &ratio(1, 1), 12),
            Err(CliqueError::BadDensity(_))
        ));
    }

    #[test]
    fn book_matches_exhaustive_search() {
        // oracle: largest |S| over all blue cliques S with the page bound,
        // taken over the whole vertex set (an upper bound for the search)
        for seed in 0..30 {
            let n = 10;
            let c = random_colouring(n, &ratio(2, 5), seed).unwrap();
            let all = c.all_vertices();
            let mu = ratio(2, 5);
            let mut best_s = 0;
            for mask in 1u32..1 << n {
                let s = VertexSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
                if !c.is_clique(&s, Colour::Blue) {
                    continue;
                }
                let mut t = all.difference(&s);
                for v in s.iter() {
                    t = t.intersection(c.blue_neighbours(v));
                }
                if pages_suffice(t.len(), &rational::pow(&mu, s.len()), n) {
                    best_s = best_s.max(s.len());
                }
            }
            match best_blue_book(&c, &all, &mu, 12) {
                Ok(book) => {
                    assert!(book.spine.len() <= best_s);
                    assert!(book.spine.len() >= 1);
                }
                Err(e) => assert_eq!(best_s, 0, "seed {seed}: {e}"),
            }
        }
    }
}
