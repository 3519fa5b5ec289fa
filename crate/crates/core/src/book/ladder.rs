//! The density ladder `q_h = p0 + ((1+ε)^h − 1)/k` and step sizes `α_h`.

use crate::rational::{self, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::BookError;

/// Upper limit on the number of rungs built before giving up.
pub const RUNG_CAP: usize = 1_000_000;

/// `q_h` for `h ≥ 0`, exactly.
pub fn q(h: u64, p0: &Rational, epsilon: &Rational, k: usize) -> Rational {
    let growth = rational::pow(&(Rational::one() + epsilon), h as usize);
    p0 + (growth - Rational::one()) / rational::from_usize(k)
}

/// `α_h = q_h − q_{h−1} = ε(1+ε)^{h−1}/k`, exactly.
pub fn alpha(h: u64, epsilon: &Rational, k: usize) -> Rational {
    assert!(h >= 1, "alpha is defined for h >= 1");
    epsilon * rational::pow(&(Rational::one() + epsilon), (h - 1) as usize) / rational::from_usize(k)
}

/// Smallest `h ≥ 1` with `p ≤ q_h`.
pub fn height(p: &Rational, p0: &Rational, epsilon: &Rational, k: usize) -> Result<u64, BookError> {
    Ladder::new(p0.clone(), epsilon.clone(), k)?.height(p)
}

/// The ladder for fixed `(p0, ε, k)`. Heights are found by comparing
/// `k(p − p0) + 1` against `(1+ε)^h = a^h / b^h`, with the powers of `a` and
/// `b` cached as plain integers so no rational is ever reduced.
#[derive(Debug, Clone)]
pub struct Ladder {
    p0: Rational,
    epsilon: Rational,
    k: usize,
    num_pows: Vec<BigInt>,
    den_pows: Vec<BigInt>,
}

impl Ladder {
    pub fn new(p0: Rational, epsilon: Rational, k: usize) -> Result<Self, BookError> {
        if !(epsilon > Rational::zero()) || k == 0 {
            return Err(BookError::InvalidParams("ladder needs ε > 0 and k ≥ 1".into()));
        }
        let base = Rational::one() + &epsilon;
        let (a, b) = (base.numer().clone(), base.denom().clone());
        // top rung: first h with q_h >= 1, i.e. a^h >= (k(1 − p0) + 1) b^h
        let top = rational::from_usize(k) * (Rational::one() - &p0) + Rational::one();
        let (tn, td) = (top.numer().clone(), top.denom().clone());
        let mut num_pows = vec![BigInt::one()];
        let mut den_pows = vec![BigInt::one()];
        loop {
            let h = num_pows.len() - 1;
            if h >= 1 && &td * &num_pows[h] >= &tn * &den_pows[h] {
                break;
            }
            if h > RUNG_CAP {
                return Err(BookError::HeightOverflow);
            }
            num_pows.push(&num_pows[h] * &a);
            den_pows.push(&den_pows[h] * &b);
        }
        Ok(Self {
            p0,
            epsilon,
            k,
            num_pows,
            den_pows,
        })
    }

    pub fn p0(&self) -> &Rational {
        &self.p0
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self, h: u64) -> Rational {
        q(h, &self.p0, &self.epsilon, self.k)
    }

    pub fn alpha(&self, h: u64) -> Rational {
        alpha(h, &self.epsilon, self.k)
    }

    pub fn height(&self, p: &Rational) -> Result<u64, BookError> {
        let r = rational::from_usize(self.k) * (p - &self.p0) + Rational::one();
        let (rn, rd) = (r.numer(), r.denom());
        // p <= q_h  <=>  rn * b^h <= rd * a^h, monotone in h
        let top = self.num_pows.len() - 1;
        let fits = |h: usize| rn * &self.den_pows[h] <= rd * &self.num_pows[h];
        if !fits(top) {
            return Err(BookError::HeightOverflow);
        }
        let (mut lo, mut hi) = (1, top);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if fits(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn heights_on_small_ladder() {
        let (p0, eps) = (ratio(1, 2), ratio(1, 10));
        assert_eq!(height(&p0, &p0, &eps, 100).unwrap(), 1);
        assert_eq!(height(&ratio(503, 1000), &p0, &eps, 100).unwrap(), 3);
        assert_eq!(height(&ratio(5015, 10000), &p0, &eps, 100).unwrap(), 2);
        assert_eq!(height(&ratio(1, 10), &p0, &eps, 100).unwrap(), 1);
        assert_eq!(q(1, &p0, &eps, 100), ratio(501, 1000));
        assert_eq!(q(2, &p0, &eps, 100), ratio(50210, 100000));
        assert_eq!(q(3, &p0, &eps, 100), ratio(5_033_100, 10_000_000));
    }

    #[test]
    fn alpha_values() {
        let eps = ratio(1, 10);
        assert_eq!(alpha(1, &eps, 100), ratio(1, 1000));
        assert_eq!(alpha(3, &eps, 100), ratio(121, 100_000));
        let p0 = ratio(1, 2);
        for h in 1..=10 {
            assert_eq!(q(h, &p0, &eps, 100) - q(h - 1, &p0, &eps, 100), alpha(h, &eps, 100));
        }
    }

    #[test]
    fn height_bound_for_all_densities() {
        // 1 <= h(p) <= ceil((2/ε) ln k) for p <= 1
        let eps = ratio(3, 10);
        let k = 12;
        let lad = Ladder::new(ratio(1, 2), eps.clone(), k).unwrap();
        let cap = ((2.0 / 0.3) * (k as f64).ln()).ceil() as u64;
        for num in 1..=100 {
            let h = lad.height(&ratio(num, 100)).unwrap();
            assert!((1..=cap).contains(&h));
        }
        assert!(lad.height(&ratio(3, 1)).is_err());
    }
}
