//! Closed intervals with outward rounding, and the scalar interface shared by
//! point evaluation and interval enclosure of the bound formulas.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalars the bound formulas are written over: plain `f64` for values, and
/// [`Interval`] for sound enclosures on boxes.
pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn c(v: f64) -> Self;
    fn ln(self) -> Self;
    /// `t ln t` with `0 ln 0 = 0`.
    fn xlnx(self) -> Self;
    /// `y ln((x + y)/y)` for `x, y ≥ 0`, with the limit `0` at `y = 0`.
    fn y_ln_ratio(x: Self, y: Self) -> Self;
}

fn xlnx_f64(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

fn y_ln_ratio_f64(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        y * (x / y).ln_1p()
    }
}

impl Real for f64 {
    fn c(v: f64) -> Self {
        v
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn xlnx(self) -> Self {
        xlnx_f64(self)
    }
    fn y_ln_ratio(x: Self, y: Self) -> Self {
        y_ln_ratio_f64(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Slack added around library transcendental results, which are not
/// guaranteed to be correctly rounded.
const LIB_ULPS: u32 = 4;

const ROUNDING_SLOP: f64 = 1e-12;

fn down(v: f64, steps: u32) -> f64 {
    (0..steps).fold(v, |a, _| a.next_down())
}

fn up(v: f64, steps: u32) -> f64 {
    (0..steps).fold(v, |a, _| a.next_up())
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Drops a negative lower end produced by outward rounding of a quantity
    /// that is non-negative on the domain.
    fn nonneg(self) -> Self {
        assert!(self.lo >= -ROUNDING_SLOP && self.hi >= 0.0, "expected a non-negative interval, got [{}, {}]", self.lo, self.hi);
        Self {
            lo: self.lo.max(0.0),
            hi: self.hi,
        }
    }

    fn rounded(lo: f64, hi: f64, steps: u32) -> Self {
        Self {
            lo: down(lo, steps),
            hi: up(hi, steps),
        }
    }
}

impl Add for Interval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::rounded(self.lo + o.lo, self.hi + o.hi, 1)
    }
}

impl Sub for Interval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::rounded(self.lo - o.hi, self.hi - o.lo, 1)
    }
}

impl Neg for Interval {
    type Output = Self;
    fn neg(self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::rounded(lo, hi, 1)
    }
}

impl Div for Interval {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing zero");
        let p = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::rounded(lo, hi, 1)
    }
}

impl Real for Interval {
    fn c(v: f64) -> Self {
        Self::point(v)
    }

    fn ln(self) -> Self {
        assert!(self.lo > 0.0, "log of a non-positive interval");
        Self::rounded(self.lo.ln(), self.hi.ln(), LIB_ULPS)
    }

    fn xlnx(self) -> Self {
        let t = self.nonneg();
        // decreasing on [0, 1/e], increasing after
        let turn = (-1.0f64).exp();
        let at = |t: f64| xlnx_f64(t);
        let lo = if t.hi <= turn {
            at(t.hi)
        } else if t.lo >= turn {
            at(t.lo)
        } else {
            -turn
        };
        let hi = at(t.lo).max(at(t.hi));
        Self::rounded(lo, hi, LIB_ULPS)
    }

    fn y_ln_ratio(x: Self, y: Self) -> Self {
        let (x, y) = (x.nonneg(), y.nonneg());
        // increasing in both arguments on the quadrant
        Self::rounded(y_ln_ratio_f64(x.lo, y.lo), y_ln_ratio_f64(x.hi, y.hi), LIB_ULPS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosures_contain_samples() {
        let x = Interval::new(0.1, 0.9);
        let y = Interval::new(0.0, 0.5);
        let e = Interval::y_ln_ratio(x, y);
        let l = x.xlnx();
        for i in 0..=20 {
            for j in 0..=20 {
                let (a, b) = (0.1 + 0.8 * i as f64 / 20.0, 0.5 * j as f64 / 20.0);
                let v = f64::y_ln_ratio(a, b);
                assert!(e.lo <= v && v <= e.hi);
            }
            let a = 0.1 + 0.8 * i as f64 / 20.0;
            assert!(l.lo <= a.xlnx() && a.xlnx() <= l.hi);
        }
        let p = (x - y) * x / Interval::new(1.0, 2.0);
        assert!(p.lo <= -0.36 && p.hi >= 0.81);
    }

    #[test]
    fn zero_conventions() {
        assert_eq!(0.0f64.xlnx(), 0.0);
        assert_eq!(f64::y_ln_ratio(0.7, 0.0), 0.0);
        let z = Interval::new(0.0, 0.0).xlnx();
        assert!(z.lo <= 0.0 && z.hi >= 0.0);
    }
}
