use crate::rational::{self, serde_ratio, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::BookError;

/// Denominator of the rational stand-in for `k^{-1/4}`.
pub const EPSILON_DEFAULT_DENOM: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BookParams {
    pub k: usize,
    pub ell: usize,
    #[serde(with = "serde_ratio")]
    pub mu: Rational,
    #[serde(with = "serde_ratio")]
    pub epsilon: Rational,
    pub x_min: usize,
    pub w_min: usize,
    #[serde(with = "serde_ratio")]
    pub p_floor: Rational,
    pub spine_budget: usize,
}

/// `k^{-1/4}` rounded to the nearest multiple of `1/EPSILON_DEFAULT_DENOM`.
pub fn default_epsilon(k: usize) -> Rational {
    let v = (k as f64).powf(-0.25);
    let num = (v * EPSILON_DEFAULT_DENOM as f64).round() as i64;
    rational::ratio(num, EPSILON_DEFAULT_DENOM)
}

impl BookParams {
    /// Defaults: `ε ≈ k^{-1/4}`, `x_min = 3k`, `w_min = k`, `p_floor = 1/k`,
    /// `spine_budget = 12`.
    pub fn new(k: usize, ell: usize, mu: Rational) -> Self {
        Self {
            k,
            ell,
            mu,
            epsilon: default_epsilon(k.max(1)),
            x_min: 3 * k,
            w_min: k.max(1),
            p_floor: Rational::new(BigInt::one(), BigInt::from(k.max(1))),
            spine_budget: 12,
        }
    }

    pub fn validate(&self) -> Result<(), BookError> {
        let bad = |m: &str| Err(BookError::InvalidParams(m.to_string()));
        let (zero, one) = (Rational::zero(), Rational::one());
        if self.k == 0 || self.ell == 0 {
            return bad("k and ell must be at least 1");
        }
        if self.ell > self.k {
            return bad("ell must not exceed k");
        }
        if self.mu <= zero || self.mu >= one {
            return bad("mu must lie strictly between 0 and 1");
        }
        if self.epsilon <= zero || self.epsilon >= one {
            return bad("epsilon must lie strictly between 0 and 1");
        }
        if self.x_min == 0 || self.w_min == 0 {
            return bad("x_min and w_min must be at least 1");
        }
        if self.p_floor < zero {
            return bad("p_floor must be nonnegative");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn defaults_and_validation() {
        let p = BookParams::new(12, 12, ratio(2, 5));
        assert_eq!(p.x_min, 36);
        assert_eq!(p.p_floor, ratio(1, 12));
        // 12^{-1/4} = 0.537285...
        assert_eq!(p.epsilon, ratio(537_285, 1_000_000));
        p.validate().unwrap();
        assert!(BookParams { ell: 13, ..p.clone() }.validate().is_err());
        assert!(BookParams { mu: ratio(1, 1), ..p.clone() }.validate().is_err());
        assert!(BookParams::new(1, 1, ratio(1, 2)).validate().is_err());
    }
}
