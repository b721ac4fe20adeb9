//! Exact rational helpers. Every threshold comparison in the crate goes
//! through cross-multiplication on `i128` so no floating point leaks in.

use crate::error::{domain, LabError, Result};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Parses `p/q`, an integer, or an exact decimal such as `0.45`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || LabError::Domain(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return domain(format!("zero denominator in {text:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac_part.len() > 15 {
        return Err(bad());
    }
    let den = 10i64.pow(frac_part.len() as u32);
    let whole: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
    let frac: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
    let num = whole.checked_mul(den).and_then(|w| w.checked_add(frac)).ok_or_else(bad)?;
    Ok(Rational::new(if neg { -num } else { num }, den))
}

/// Renders as `p/q`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// `count >= r * n`
pub fn ge_scaled(count: usize, r: &Rational, n: usize) -> bool {
    count as i128 * *r.denom() as i128 >= *r.numer() as i128 * n as i128
}

/// `count > r * n`
pub fn gt_scaled(count: usize, r: &Rational, n: usize) -> bool {
    count as i128 * *r.denom() as i128 > *r.numer() as i128 * n as i128
}

/// `count <= r * n`
pub fn le_scaled(count: usize, r: &Rational, n: usize) -> bool {
    !gt_scaled(count, r, n)
}

/// `ceil(r * n)` for non-negative `r`.
pub fn ceil_scaled(r: &Rational, n: usize) -> usize {
    let num = *r.numer() as i128 * n as i128;
    let den = *r.denom() as i128;
    if num <= 0 {
        return 0;
    }
    ((num + den - 1) / den) as usize
}

/// `floor(r * n)` for non-negative `r`.
pub fn floor_scaled(r: &Rational, n: usize) -> usize {
    let num = *r.numer() as i128 * n as i128;
    if num <= 0 {
        return 0;
    }
    (num / *r.denom() as i128) as usize
}

/// Smallest subset size `s` with `s >= r * n`.
pub fn min_qualifying(r: &Rational, n: usize) -> usize {
    ceil_scaled(r, n)
}

pub fn require_open_unit(name: &str, r: &Rational) -> Result<()> {
    if !r.is_positive() || *r >= Rational::one() {
        return domain(format!("{name} must lie in (0,1), got {}", format_rational(r)));
    }
    Ok(())
}

pub fn require_unit(name: &str, r: &Rational) -> Result<()> {
    if r.is_negative() || *r > Rational::one() {
        return domain(format!("{name} must lie in [0,1], got {}", format_rational(r)));
    }
    Ok(())
}

pub fn pow(r: &Rational, k: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= *r;
    }
    out
}

pub fn big_pow(r: &BigRational, k: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= r;
    }
    out
}

pub fn min_rational(items: &[Rational]) -> Rational {
    items.iter().copied().fold(None, |acc: Option<Rational>, x| match acc {
        Some(a) if a <= x => Some(a),
        _ => Some(x),
    })
    .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("0.45").unwrap(), rat(9, 20));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("0.1e3").is_err());
    }

    #[test]
    fn scaled_comparisons_are_exact() {
        let third = rat(1, 3);
        assert!(ge_scaled(1, &third, 3));
        assert!(!gt_scaled(1, &third, 3));
        assert_eq!(ceil_scaled(&third, 4), 2);
        assert_eq!(floor_scaled(&third, 4), 1);
        assert_eq!(ceil_scaled(&rat(9, 20), 10), 5);
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&rat(3, 1)), "3/1");
    }
}
