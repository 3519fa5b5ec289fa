//! Ramsey bound tables: the Erdős–Szekeres binomial bound and its greedy
//! algorithm, the improved bounds in evaluable form, and small Ramsey numbers
//! certified by search.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::colouring::{Colour, Colouring};
use crate::rational;
use crate::vertex_set::VertexSet;

/// `R(k, ℓ) ≤ C(k+ℓ, ℓ)`.
pub fn es_bound(k: u64, ell: u64) -> BigInt {
    assert!(k >= 1 && ell >= 1, "es_bound needs k, ℓ ≥ 1");
    rational::binomial(k + ell, ell)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// `(4 − 2^{−10})^k` for `ℓ = k`.
    Diagonal,
    /// `e^{−γk/20} C(k+ℓ,ℓ)` for `γ ≤ 1/10`.
    Weak,
    /// `e^{−γk/40} C(k+ℓ,ℓ)` for `γ ≤ 1/5`.
    Gamma,
    /// `e^{−ℓ/80} C(k+ℓ,ℓ)` for `ℓ ≤ 9k/10`.
    Near,
    /// `e^{−ℓ/50} C(k+ℓ,ℓ)` for `ℓ ≤ 2k/3`.
    Nearer,
    /// `e^{−ℓ/400} C(k+ℓ,ℓ)` for `ℓ ≤ k`.
    Explicit,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::Diagonal,
        Theorem::Weak,
        Theorem::Gamma,
        Theorem::Near,
        Theorem::Nearer,
        Theorem::Explicit,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Theorem::Diagonal => "diagonal",
            Theorem::Weak => "weak",
            Theorem::Gamma => "gamma",
            Theorem::Near => "near",
            Theorem::Nearer => "nearer",
            Theorem::Explicit => "explicit",
        }
    }

    fn constraint(&self) -> &'static str {
        match self {
            Theorem::Diagonal => "ℓ = k",
            Theorem::Weak => "γ = ℓ/(k+ℓ) ≤ 1/10",
            Theorem::Gamma => "γ = ℓ/(k+ℓ) ≤ 1/5",
            Theorem::Near => "ℓ ≤ 9k/10",
            Theorem::Nearer => "ℓ ≤ 2k/3",
            Theorem::Explicit => "ℓ ≤ k",
        }
    }

    pub fn applies(&self, k: u64, ell: u64) -> bool {
        k >= 1
            && ell >= 1
            && match self {
                Theorem::Diagonal => ell == k,
                Theorem::Weak => 9 * ell <= k,
                Theorem::Gamma => 4 * ell <= k,
                Theorem::Near => 10 * ell <= 9 * k,
                Theorem::Nearer => 3 * ell <= 2 * k,
                Theorem::Explicit => ell <= k,
            }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| format!("unknown theorem {s:?}"))
    }
}

/// `ε` in the diagonal bound.
pub const DIAGONAL_EPSILON: f64 = 1.0 / 1024.0;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("theorem {theorem} does not cover (k, ℓ) = ({k}, {ell}): needs {constraint}")]
pub struct RangeError {
    pub theorem: Theorem,
    pub k: u64,
    pub ell: u64,
    pub constraint: &'static str,
}

/// A bound held as its natural logarithm, with the `e^{o(k)}` factor taken as 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImprovedBound {
    pub theorem: Theorem,
    pub ln_value: f64,
    /// `ln(improved_bound / C(k+ℓ, ℓ))`.
    pub ln_ratio: f64,
}

impl ImprovedBound {
    pub fn log10_value(&self) -> f64 {
        self.ln_value / std::f64::consts::LN_10
    }

    pub fn ratio(&self) -> f64 {
        self.ln_ratio.exp()
    }
}

pub fn improved_bound(theorem: Theorem, k: u64, ell: u64) -> Result<ImprovedBound, RangeError> {
    if !theorem.applies(k, ell) {
        return Err(RangeError {
            theorem,
            k,
            ell,
            constraint: theorem.constraint(),
        });
    }
    let ln_es = rational::ln_abs_bigint(&es_bound(k, ell));
    let (kf, lf) = (k as f64, ell as f64);
    let gamma = lf / (kf + lf);
    let ln_value = match theorem {
        Theorem::Diagonal => kf * (4.0 - DIAGONAL_EPSILON).ln(),
        Theorem::Weak => ln_es - gamma * kf / 20.0,
        Theorem::Gamma => ln_es - gamma * kf / 40.0,
        Theorem::Near => ln_es - lf / 80.0,
        Theorem::Nearer => ln_es - lf / 50.0,
        Theorem::Explicit => ln_es - lf / 400.0,
    };
    Ok(ImprovedBound {
        theorem,
        ln_value,
        ln_ratio: ln_value - ln_es,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub k: u64,
    pub ell: u64,
    /// Exact `C(k+ℓ, ℓ)` in decimal.
    pub es_bound: String,
    pub theorem: Theorem,
    pub improved_bound_ln: f64,
    pub improved_bound_log10: f64,
    pub ratio: f64,
    /// The `e^{o(k)}` factor of the theorem, rendered as 1.
    pub small_o_factor: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllRule {
    Equal,
    Quarter,
    NineTenths,
}

impl EllRule {
    pub fn ell(&self, k: u64) -> u64 {
        match self {
            EllRule::Equal => k,
            EllRule::Quarter => (k / 4).max(1),
            EllRule::NineTenths => (9 * k / 10).max(1),
        }
    }
}

impl FromStr for EllRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "equal" => Ok(EllRule::Equal),
            "quarter" => Ok(EllRule::Quarter),
            "ninetenths" => Ok(EllRule::NineTenths),
            _ => Err(format!("unknown ell rule {s:?}; expected equal, quarter or ninetenths")),
        }
    }
}

/// One row per `k` in range and per theorem covering `(k, rule(k))`.
pub fn bound_rows(k_lo: u64, k_hi: u64, rule: EllRule) -> Vec<BoundRow> {
    let mut rows = Vec::new();
    for k in k_lo.max(1)..=k_hi {
        let ell = rule.ell(k);
        let es = es_bound(k, ell).to_string();
        for theorem in Theorem::ALL {
            if let Ok(b) = improved_bound(theorem, k, ell) {
                rows.push(BoundRow {
                    k,
                    ell,
                    es_bound: es.clone(),
                    theorem,
                    improved_bound_ln: b.ln_value,
                    improved_bound_log10: b.log10_value(),
                    ratio: b.ratio(),
                    small_o_factor: "taken as 1",
                });
            }
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOutcome {
    Red(Vec<usize>),
    Blue(Vec<usize>),
    Exhausted { red: Vec<usize>, blue: Vec<usize> },
}

/// The Erdős–Szekeres greedy: take the lowest remaining vertex into the blue
/// clique if its blue degree in `X` is at least `γ|X|`, with `γ` recomputed
/// from the remaining targets, and into the red clique otherwise.
pub fn es_greedy(c: &Colouring, k: usize, ell: usize) -> GreedyOutcome {
    assert!(k >= 1 && ell >= 1, "es_greedy needs k, ℓ ≥ 1");
    let mut x = c.all_vertices();
    let (mut red, mut blue) = (Vec::new(), Vec::new());
    loop {
        if red.len() == k {
            return GreedyOutcome::Red(red);
        }
        if blue.len() == ell {
            return GreedyOutcome::Blue(blue);
        }
        let Some(v) = x.first() else {
            return GreedyOutcome::Exhausted { red, blue };
        };
        x.remove(v);
        let (rk, rl) = (k - red.len(), ell - blue.len());
        let nb = c.blue_neighbours(v).intersection(&x);
        // |N_B(v) ∩ X| ≥ (rl/(rk+rl))|X|, in integers
        if nb.len() * (rk + rl) >= rl * x.len() {
            blue.push(v);
            x = nb;
        } else {
            red.push(v);
            x = c.red_neighbours(v).intersection(&x);
        }
    }
}

/// A colouring of `K_n` with no red `K_s` and no blue `K_t`, if one exists,
/// found by adding vertices one at a time. Practical for `n ≤ 16`.
pub fn ramsey_witness(n: usize, s: usize, t: usize) -> Option<Colouring> {
    assert!(n <= 32, "ramsey_witness works on at most 32 vertices");
    assert!(s >= 1 && t >= 1);
    let mut red: Vec<u32> = vec![0; n];
    if extend(&mut red, 0, n, s, t) {
        Some(Colouring::from_fn(n, |a, b| red[a] >> b & 1 == 1))
    } else {
        None
    }
}

/// Whether `set` (a mask over `adj`) contains a clique of `size` vertices.
fn has_clique(adj: &[u32], set: u32, size: usize) -> bool {
    if size == 0 {
        return true;
    }
    if (set.count_ones() as usize) < size {
        return false;
    }
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if has_clique(adj, adj[v] & rest, size - 1) {
            return true;
        }
    }
    false
}

fn extend(red: &mut [u32], v: usize, n: usize, s: usize, t: usize) -> bool {
    if v == n {
        return true;
    }
    let earlier = (1u32 << v) - 1;
    let blue: Vec<u32> = red.iter().enumerate().map(|(i, &r)| !r & earlier & !(1 << i)).collect();
    for mask in 0..=earlier {
        // v's red neighbourhood must hold no red K_{s−1}, its blue one no blue K_{t−1}
        if has_clique(red, mask, s - 1) || has_clique(&blue, earlier & !mask, t - 1) {
            continue;
        }
        red[v] = mask;
        for u in 0..v {
            if mask >> u & 1 == 1 {
                red[u] |= 1 << v;
            }
        }
        if extend(red, v + 1, n, s, t) {
            return true;
        }
        for u in 0..v {
            red[u] &= !(1 << v);
        }
        red[v] = 0;
    }
    false
}

/// Pairs small enough to certify here.
const CERTIFIABLE: [(u64, u64); 2] = [(3, 3), (3, 4)];

/// `R(k, ℓ)` for the pairs certified by search, recomputed on each call:
/// a witness colouring on `R − 1` vertices and exhaustive non-existence on `R`.
pub fn known_ramsey(k: u64, ell: u64) -> Option<u64> {
    let (a, b) = (k.min(ell), k.max(ell));
    if !CERTIFIABLE.contains(&(a, b)) {
        return None;
    }
    let mut n = b as usize;
    while ramsey_witness(n, a as usize, b as usize).is_some() {
        n += 1;
    }
    Some(n as u64)
}

/// Every 2-colouring of `K_n` (all `2^{C(n,2)}` of them) has a red `K_s` or a
/// blue `K_t`. Feasible for `C(n,2) ≤ 24` or so.
pub fn every_colouring_has(n: usize, s: usize, t: usize) -> bool {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    assert!(pairs.len() <= 30, "too many colourings to enumerate");
    (0u64..1 << pairs.len()).all(|bits| {
        let c = Colouring::from_fn(n, |a, b| {
            let i = pairs.iter().position(|&p| p == (a.min(b), a.max(b))).expect("pair");
            bits >> i & 1 == 1
        });
        !matches!(crate::cliques::has_mono_clique(&c, s, t), crate::cliques::MonoClique::Neither)
    })
}

/// Largest monochromatic clique in each colour, by exact search.
pub fn clique_numbers(c: &Colouring) -> (usize, usize) {
    let all: VertexSet = c.all_vertices();
    let red = crate::cliques::max_clique(c, Colour::Red, &all, c.n().max(1)).len();
    let blue = crate::cliques::max_clique(c, Colour::Blue, &all, c.n().max(1)).len();
    (red, blue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::random_colouring;
    use crate::rational::ratio;

    #[test]
    fn binomial_bounds() {
        assert_eq!(es_bound(3, 3), BigInt::from(20));
        assert_eq!(es_bound(7, 1), BigInt::from(8));
        assert_eq!(es_bound(10, 10), BigInt::from(184756));
    }

    #[test]
    fn theorem_formulas() {
        let ln_c = |n, r| rational::ln_abs_bigint(&rational::binomial(n, r));
        let b = improved_bound(Theorem::Explicit, 400, 400).unwrap();
        assert!((b.ln_value - (ln_c(800, 400) - 1.0)).abs() < 1e-9);
        let b = improved_bound(Theorem::Gamma, 400, 100).unwrap();
        assert!((b.ln_value - (ln_c(500, 100) - 2.0)).abs() < 1e-9);
        let b = improved_bound(Theorem::Near, 400, 360).unwrap();
        assert!((b.ln_value - (ln_c(760, 360) - 4.5)).abs() < 1e-9);
        assert!((b.ratio() - (-4.5f64).exp()).abs() < 1e-12);
        let e = improved_bound(Theorem::Nearer, 30, 21).unwrap_err();
        assert_eq!(e.constraint, "ℓ ≤ 2k/3");
        assert!(improved_bound(Theorem::Weak, 90, 10).is_ok());
        assert!(improved_bound(Theorem::Weak, 89, 10).is_err());
        assert!(improved_bound(Theorem::Diagonal, 10, 9).is_err());
    }

    #[test]
    fn rows_cover_applicable_theorems() {
        let rows = bound_rows(8, 12, EllRule::Quarter);
        assert!(rows.iter().all(|r| r.ell == r.k / 4));
        assert!(rows.iter().all(|r| r.theorem != Theorem::Diagonal));
        assert!(rows.iter().any(|r| r.theorem == Theorem::Gamma));
        for r in rows.iter().filter(|r| r.theorem != Theorem::Diagonal) {
            assert!(r.ratio < 1.0);
        }
        let eq = bound_rows(5, 5, EllRule::Equal);
        let ids: Vec<_> = eq.iter().map(|r| r.theorem).collect();
        assert_eq!(ids, vec![Theorem::Diagonal, Theorem::Explicit]);
    }

    #[test]
    fn greedy_on_monochromatic_colourings() {
        let red = Colouring::monochromatic(10, Colour::Red);
        assert_eq!(es_greedy(&red, 4, 4), GreedyOutcome::Red(vec![0, 1, 2, 3]));
        let blue = Colouring::monochromatic(10, Colour::Blue);
        assert_eq!(es_greedy(&blue, 4, 3), GreedyOutcome::Blue(vec![0, 1, 2]));
    }

    #[test]
    fn greedy_cliques_are_cliques() {
        for seed in 0..200 {
            let c = random_colouring(20, &ratio(1, 2), seed).unwrap();
            match es_greedy(&c, 3, 3) {
                GreedyOutcome::Red(a) => assert!(c.is_clique(&VertexSet::from_indices(20, a), Colour::Red)),
                GreedyOutcome::Blue(b) => assert!(c.is_clique(&VertexSet::from_indices(20, b), Colour::Blue)),
                GreedyOutcome::Exhausted { .. } => panic!("exhausted at the binomial bound"),
            }
        }
    }

    #[test]
    fn small_ramsey_numbers() {
        assert_eq!(known_ramsey(3, 3), Some(6));
        assert_eq!(known_ramsey(4, 3), Some(9));
        assert_eq!(known_ramsey(5, 5), None);
        let w = ramsey_witness(5, 3, 3).unwrap();
        assert_eq!(clique_numbers(&w), (2, 2));
    }
}
