//! Exact checks of the binomial and entropy inequalities over finite sweeps.
//!
//! Binomials are exact big integers. Inequalities with an exponential factor
//! `e^a` (rational `a`) are decided by [`rational::cmp_ln_with`], which falls
//! back to rational enclosures of `e^a` when floating point is too close.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use crate::rational::{self, ratio, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct BinomialSweep {
    /// `1 ≤ m ≤ m_max`, `1 ≤ b ≤ m/2`; also `1 ≤ a ≤ m_max` for the entropy bound.
    pub m_max: u64,
    pub sigmas: Vec<Rational>,
    /// `1 ≤ k, ℓ, t ≤ klt_max`.
    pub klt_max: u64,
    /// `k` values for the sublinear-growth check.
    pub growth_ks: Vec<u64>,
    /// Rays `ℓ = ⌈θk⌉`, `0 < θ ≤ 1`.
    pub rays: Vec<Rational>,
}

impl Default for BinomialSweep {
    fn default() -> Self {
        Self {
            m_max: 64,
            sigmas: vec![ratio(7, 15), ratio(1, 2), ratio(3, 4)],
            klt_max: 60,
            growth_ks: (4..=12).map(|e| 1u64 << e).collect(),
            rays: vec![ratio(1, 4), ratio(1, 2), ratio(2, 3), ratio(9, 10), ratio(1, 1)],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FactTally {
    pub checked: u64,
    /// Tuples outside the fact's hypotheses.
    pub skipped: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

impl FactTally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(what());
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BinomialReport {
    pub facts: BTreeMap<String, FactTally>,
}

impl BinomialReport {
    pub fn passed(&self) -> bool {
        self.facts.values().all(|t| t.violations == 0 && t.checked > 0)
    }

    fn tally(&mut self, id: &str) -> &mut FactTally {
        self.facts.entry(id.to_string()).or_default()
    }
}

pub const FACT_IDS: [&str; 8] = [
    "fact1_upper",
    "fact1_lower",
    "fact1_stronger",
    "app_d",
    "fact4",
    "entropy",
    "entropy2",
    "gammas",
];

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn rat(n: &BigInt, d: &BigInt) -> Rational {
    Rational::new(n.clone(), d.clone())
}

/// `v^e` with `0^0 = 1`.
fn power(v: u64, e: u64) -> BigInt {
    Pow::pow(big(v), e as u32)
}

pub fn verify_binomial_facts(sweep: &BinomialSweep) -> BinomialReport {
    let mut report = BinomialReport::default();
    for id in FACT_IDS {
        report.tally(id);
    }
    sampling_facts(sweep, &mut report);
    removal_facts(sweep, &mut report);
    entropy_facts(sweep, &mut report);
    growth_fact(sweep, &mut report);
    report
}

/// `σ^b C(m,b) e^{−b²/(σm)} ≤ C(σm,b) ≤ σ^b C(m,b)` for `b ≤ σm/2`, and the
/// sharper lower factor `e^{−3b²/(4m)}` when `b ≤ m/7` and `σ ≥ 7/15`.
fn sampling_facts(sweep: &BinomialSweep, report: &mut BinomialReport) {
    for sigma in &sweep.sigmas {
        let (num, den) = (sigma.numer(), sigma.denom());
        for m in 1..=sweep.m_max {
            let sm = sigma * rational::from_usize(m as usize);
            for b in 1..=m / 2 {
                let ids = ["fact1_upper", "fact1_lower", "fact1_stronger"];
                if !sm.is_integer() || Rational::from(big(2 * b)) > sm {
                    for id in ids {
                        report.tally(id).skipped += 1;
                    }
                    continue;
                }
                let smi: u64 = sm.to_integer().try_into().expect("small");
                let small = rational::binomial(smi, b);
                let full = rational::binomial(m, b);
                let what = || format!("m={m}, b={b}, sigma={sigma}");
                let lhs = &small * Pow::pow(den, b as u32);
                let rhs = &full * Pow::pow(num, b as u32);
                report.tally("fact1_upper").record(lhs <= rhs, what);
                // R = σ^b C(m,b) / C(σm,b) ≥ 1; need ln R ≤ the exponent
                let r = rat(&rhs, &lhs);
                let b2 = Rational::from(big(b * b));
                let weak = &b2 / &sm;
                report.tally("fact1_lower").record(rational::cmp_ln_with(&r, &weak) != Ordering::Greater, what);
                if 7 * b <= m && *sigma >= ratio(7, 15) {
                    let strong = ratio(3, 4) * &b2 / Rational::from(big(m));
                    report.tally("fact1_stronger").record(rational::cmp_ln_with(&r, &strong) != Ordering::Greater, what);
                } else {
                    report.tally("fact1_stronger").skipped += 1;
                }
            }
        }
    }
}

/// `C(k+ℓ−t, ℓ) ≤ e^{−γ(t−1)²/2k} (k/(k+ℓ))^t C(k+ℓ, ℓ)` for `t ≤ k`, and its
/// consequence with the factor `e^{γt²/2k}` at the cost of `e^{−γt/k}`.
fn removal_facts(sweep: &BinomialSweep, report: &mut BinomialReport) {
    let n = sweep.klt_max;
    for k in 1..=n {
        for l in 1..=n {
            let gamma = ratio(l as i64, (k + l) as i64);
            let whole = rational::binomial(k + l, l);
            for t in 1..=n {
                if t > k {
                    report.tally("app_d").skipped += 1;
                    report.tally("fact4").skipped += 1;
                    continue;
                }
                let what = || format!("k={k}, l={l}, t={t}");
                let part = rational::binomial(k + l - t, l);
                // R = C(k+ℓ,ℓ) k^t / (C(k+ℓ−t,ℓ) (k+ℓ)^t)
                let r = rat(&(&whole * power(k, t)), &(&part * power(k + l, t)));
                let two_k = Rational::from(big(2 * k));
                let drop = &gamma * Rational::from(big((t - 1) * (t - 1))) / &two_k;
                report.tally("app_d").record(rational::cmp_ln_with(&r, &drop) != Ordering::Less, what);
                if l <= k {
                    let t = t as i64;
                    let weaker = &gamma * rational::int(t * t - 2 * t) / &two_k;
                    report.tally("fact4").record(rational::cmp_ln_with(&r, &weaker) != Ordering::Less, what);
                } else {
                    report.tally("fact4").skipped += 1;
                }
            }
        }
    }
}

/// `C(a,b) ≤ e^{a h*(b/a)}` and, for `ℓ ≤ k`, `C(k+ℓ,ℓ) ≥ e^{(k+ℓ) h*(ℓ/(k+ℓ))}/(k+ℓ+1)`,
/// both as integer inequalities after clearing the powers.
fn entropy_facts(sweep: &BinomialSweep, report: &mut BinomialReport) {
    for a in 1..=sweep.m_max {
        for b in 0..=a {
            let lhs = rational::binomial(a, b) * power(b, b) * power(a - b, a - b);
            report.tally("entropy").record(lhs <= power(a, a), || format!("a={a}, b={b}"));
        }
    }
    for k in 1..=sweep.klt_max {
        for l in 1..=sweep.klt_max {
            if l > k {
                report.tally("entropy2").skipped += 1;
                continue;
            }
            let n = k + l;
            let lhs = big(n + 1) * rational::binomial(n, l) * power(l, l) * power(k, k);
            report.tally("entropy2").record(lhs >= power(n, n), || format!("k={k}, l={l}"));
        }
    }
}

/// Along each ray `ℓ = ⌈θk⌉`, `D(k) = −ℓ ln γ − k ln(1−γ) − ln C(k+ℓ,ℓ)` is
/// non-negative and `D(k)/k` strictly decreases.
fn growth_fact(sweep: &BinomialSweep, report: &mut BinomialReport) {
    for theta in &sweep.rays {
        let mut prev: Option<(u64, f64)> = None;
        for &k in &sweep.growth_ks {
            let l: u64 = (theta * Rational::from(big(k))).ceil().to_integer().try_into().expect("small");
            if l == 0 || l > k {
                report.tally("gammas").skipped += 1;
                continue;
            }
            let n = k + l;
            // γ^{−ℓ}(1−γ)^{−k} = n^n / (ℓ^ℓ k^k)
            let num = power(n, n);
            let den = power(l, l) * power(k, k) * rational::binomial(n, l);
            let d = rational::ln_abs_bigint(&num) - rational::ln_abs_bigint(&den);
            let per_k = d / k as f64;
            let ok = num >= den && prev.map_or(true, |(_, p)| per_k < p);
            report
                .tally("gammas")
                .record(ok, || format!("theta={theta}, k={k}: D/k={per_k:.6e} after {:?}", prev));
            prev = Some((k, per_k));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        // C(10,4) = 210 ≤ (1/2)^4 C(20,4) = 302.8125, and ≥ 302.8125 e^{−1.6}
        assert_eq!(rational::binomial(10, 4), big(210));
        assert_eq!(rat(&rational::binomial(20, 4), &big(16)), ratio(48450, 160));
        let r = rat(&rational::binomial(20, 4), &(big(16) * big(210)));
        assert_eq!(rational::cmp_ln_with(&r, &ratio(8, 5)), Ordering::Less);
        // C(12,5) = 792 ≤ e^{−1/15}(2/3)^3 C(15,5) ≈ 832.4
        assert_eq!(rational::binomial(15, 5), big(3003));
        let r = rat(&(big(3003) * power(10, 3)), &(big(792) * power(15, 3)));
        assert_eq!(rational::cmp_ln_with(&r, &ratio(1, 15)), Ordering::Greater);
    }

    #[test]
    fn default_sweep_has_no_violations() {
        let rep = verify_binomial_facts(&BinomialSweep::default());
        for (id, t) in &rep.facts {
            assert_eq!(t.violations, 0, "{id}: {:?}", t.first_violation);
            assert!(t.checked > 0, "{id} checked nothing");
        }
        assert!(rep.passed());
        assert_eq!(rep.facts.len(), FACT_IDS.len());
    }

    #[test]
    fn the_removal_bound_needs_t_at_least_one() {
        // at t = 0 the factor e^{−γ/2k} < 1 makes the bound false
        let r = ratio(1, 1);
        assert_eq!(rational::cmp_ln_with(&r, &ratio(1, 60)), Ordering::Less);
    }

    #[test]
    fn a_false_inequality_is_reported() {
        let sweep = BinomialSweep {
            sigmas: vec![ratio(1, 2)],
            ..BinomialSweep::default()
        };
        let rep = verify_binomial_facts(&sweep);
        assert!(rep.passed());
        // (1/2)^b C(m,b) is not a lower bound of C(m/2,b)
        let (m, b) = (20u64, 4u64);
        let lhs = rational::binomial(m / 2, b) * power(2, b);
        assert!(lhs < rational::binomial(m, b));
    }
}
