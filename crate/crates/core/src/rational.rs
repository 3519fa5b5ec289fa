//! Exact rational helpers shared by the algorithm, the checker and the
//! binomial verifier.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {input:?} as an exact rational: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_usize(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Canonical `"num/den"` rendering (always with a denominator).
pub fn to_ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"`, an integer, or a decimal literal such as `"0.3"` or
/// `"1e-3"` into an exact rational.
pub fn parse(input: &str) -> Result<Rational, ParseRationalError> {
    let s = input.trim();
    let err = |reason| ParseRationalError {
        input: input.to_string(),
        reason,
    };
    if s.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err("bad numerator"))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err("no digits"));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err("non-digit character"));
    }
    let all = format!("{whole}{frac}");
    let num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err("bad digits"))?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    (ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())).exp() * sign_f64(r)
}

fn sign_f64(r: &Rational) -> f64 {
    match r.numer().sign() {
        Sign::Minus => -1.0,
        Sign::NoSign => 0.0,
        Sign::Plus => 1.0,
    }
}

/// Natural log of `|n|`, accurate to a few ulps for integers of any size.
pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln(r: &Rational) -> f64 {
    debug_assert!(r.is_positive());
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

/// Decides `lhs >= coeff * sqrt(radicand)` exactly, for `coeff, radicand >= 0`.
pub fn ge_coeff_sqrt(lhs: &Rational, coeff: &Rational, radicand: &Rational) -> bool {
    debug_assert!(!coeff.is_negative() && !radicand.is_negative());
    if coeff.is_zero() || radicand.is_zero() {
        return !lhs.is_negative();
    }
    if lhs.is_negative() {
        return false;
    }
    lhs * lhs >= coeff * coeff * radicand
}

/// Decides `lhs <= coeff * sqrt(radicand)` exactly, for `coeff, radicand >= 0`.
pub fn le_coeff_sqrt(lhs: &Rational, coeff: &Rational, radicand: &Rational) -> bool {
    debug_assert!(!coeff.is_negative() && !radicand.is_negative());
    if !lhs.is_positive() {
        return true;
    }
    lhs * lhs <= coeff * coeff * radicand
}

/// Rational enclosure `lo <= e^x <= hi` for rational `x`, from a truncated
/// Taylor series with a geometric tail bound. Width shrinks with `terms`.
pub fn exp_enclosure(x: &Rational, terms: usize) -> (Rational, Rational) {
    if x.is_negative() {
        let (lo, hi) = exp_enclosure(&-x, terms);
        return (hi.recip(), lo.recip());
    }
    let one = Rational::one();
    // Ensure the tail ratio x/(N+2) < 1/2.
    let x_ceil = x.ceil().to_integer().to_usize().unwrap_or(usize::MAX / 4);
    let n = terms.max(2 * x_ceil + 2);
    let mut sum = one.clone();
    let mut term = one.clone();
    for i in 1..=n {
        term = term * x / from_usize(i);
        sum += &term;
    }
    let next = &term * x / from_usize(n + 1);
    let q = x / from_usize(n + 2);
    let tail = next / (&one - q);
    let hi = &sum + tail;
    (sum, hi)
}

/// Sign of `ln(r) - a` for positive rational `r` and rational `a`, decided by
/// floating point when the margin is clear and by exact enclosures otherwise.
pub fn cmp_ln_with(r: &Rational, a: &Rational) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let approx = ln(r) - to_f64(a);
    if approx.abs() > 1e-7 {
        return if approx > 0.0 { Greater } else { Less };
    }
    if a.is_zero() {
        return r.cmp(&Rational::one());
    }
    let mut terms = 40;
    loop {
        let (lo, hi) = exp_enclosure(a, terms);
        if *r > hi {
            return Greater;
        }
        if *r < lo {
            return Less;
        }
        if terms > 4000 {
            // ln r == a with a != 0 rational is impossible for rational r
            // (e^a is irrational), so the enclosure always separates eventually.
            return Equal;
        }
        terms *= 2;
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i);
        acc = acc.div_floor(&BigInt::from(i + 1));
    }
    acc
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Serde adapters writing rationals as `"num/den"` strings.
pub mod serde_ratio {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_ratio_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&to_ratio_string(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|s| parse(&s).map_err(D::Error::custom)).transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("2/5").unwrap(), ratio(2, 5));
        assert_eq!(parse("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse("12").unwrap(), int(12));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
        assert_eq!(to_ratio_string(&ratio(6, 4)), "3/2");
        assert_eq!(to_ratio_string(&int(1)), "1/1");
    }

    #[test]
    fn sqrt_comparisons() {
        // 1 >= 1 * sqrt(1), 1 < sqrt(2)
        assert!(ge_coeff_sqrt(&int(1), &int(1), &int(1)));
        assert!(!ge_coeff_sqrt(&int(1), &int(1), &int(2)));
        assert!(le_coeff_sqrt(&int(1), &int(1), &int(2)));
        assert!(!ge_coeff_sqrt(&int(-1), &int(1), &int(2)));
        assert!(ge_coeff_sqrt(&int(0), &int(0), &int(5)));
    }

    #[test]
    fn exp_enclosure_brackets_e() {
        let (lo, hi) = exp_enclosure(&int(1), 30);
        assert!(to_f64(&lo) <= std::f64::consts::E && std::f64::consts::E <= to_f64(&hi));
        let (lo, hi) = exp_enclosure(&ratio(-16, 10), 30);
        let e = (-1.6f64).exp();
        assert!(to_f64(&lo) <= e + 1e-15 && e - 1e-15 <= to_f64(&hi));
        assert!(to_f64(&(hi - lo)) < 1e-20);
    }

    #[test]
    fn ln_comparison_exact_near_equality() {
        use std::cmp::Ordering::*;
        assert_eq!(cmp_ln_with(&int(1), &int(0)), Equal);
        // ln(1 + 1e-9) vs 1e-9: ln(1+x) < x
        let r = int(1) + ratio(1, 1_000_000_000);
        assert_eq!(cmp_ln_with(&r, &ratio(1, 1_000_000_000)), Less);
        assert_eq!(cmp_ln_with(&int(3), &int(1)), Greater);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(20, 10), BigInt::from(184756));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        let big = binomial(800, 400);
        assert!((ln_abs_bigint(&big) - 550.7).abs() < 1.0);
    }
}
