//! Exact rational arithmetic for all balance, safety, and threshold gates.
//!
//! Parameters (alpha, gamma, delta, sigma, xi) are ratios of 64-bit integers;
//! comparisons cross-multiply in 128 bits. Gates that raise a ratio to a power
//! (sigma^7, sigma^40, n^xi) escalate to arbitrary precision, since those
//! magnitudes overflow any fixed width.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A nonnegative rational with 64-bit numerator and positive denominator,
/// kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Ratio {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn zero() -> Self {
        Ratio { num: 0, den: 1 }
    }

    pub fn one() -> Self {
        Ratio { num: 1, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    /// 1 - self.
    pub fn one_minus(&self) -> Self {
        Ratio::new(self.den - self.num, self.den)
    }

    pub fn recip(&self) -> Self {
        assert!(self.num != 0, "reciprocal of zero");
        Ratio::new(self.den, self.num)
    }

    pub fn mul(&self, other: &Ratio) -> Self {
        let n = (self.num as i128) * (other.num as i128);
        let d = (self.den as i128) * (other.den as i128);
        Self::from_i128(n, d)
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0);
        Self::from_i128(self.num as i128, self.den as i128 * k as i128)
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let g = gcd128(n, d).max(1);
        let (n, d) = (n / g, d / g);
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        assert!(
            n >= i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128,
            "ratio overflow"
        );
        Ratio {
            num: n as i64,
            den: d as i64,
        }
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = (self.num as i128) * (other.den as i128);
        let r = (other.num as i128) * (self.den as i128);
        l.cmp(&r)
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = String;

    /// Parses "a/b" or "a".
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: i64 = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let den: i64 = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if den == 0 {
            return Err("zero denominator".into());
        }
        Ok(Ratio::new(num, den))
    }
}

/// lhs <= r * rhs, exactly.
pub fn le_frac(lhs: u64, r: Ratio, rhs: u64) -> bool {
    assert!(r.num >= 0);
    (lhs as i128) * (r.den as i128) <= (r.num as i128) * (rhs as i128)
}

/// lhs < r * rhs, exactly.
pub fn lt_frac(lhs: u64, r: Ratio, rhs: u64) -> bool {
    assert!(r.num >= 0);
    (lhs as i128) * (r.den as i128) < (r.num as i128) * (rhs as i128)
}

/// lhs <= r^e * rhs, exactly (arbitrary precision).
pub fn le_frac_pow(lhs: u64, r: Ratio, e: u32, rhs: u64) -> bool {
    assert!(r.num >= 0);
    let ln = BigUint::from(lhs) * BigUint::from(r.den as u64).pow(e);
    let rn = BigUint::from(rhs) * BigUint::from(r.num as u64).pow(e);
    ln <= rn
}

/// lhs <= (1 - r^e) * rhs, exactly.
pub fn le_one_minus_frac_pow(lhs: u64, r: Ratio, e: u32, rhs: u64) -> bool {
    assert!(r.num >= 0 && r.num <= r.den);
    let de = BigUint::from(r.den as u64).pow(e);
    let ne = BigUint::from(r.num as u64).pow(e);
    // lhs * den^e <= rhs * (den^e - num^e)
    BigUint::from(lhs) * &de <= BigUint::from(rhs) * (de.clone() - ne)
}

/// a <= n^(p/q) * b, exactly: a^q <= n^p * b^q.
pub fn le_root_pow(a: u64, n: u64, p: u32, q: u32, b: u64) -> bool {
    BigUint::from(a).pow(q) <= BigUint::from(n).pow(p) * BigUint::from(b).pow(q)
}

/// a >= n^(p/q), exactly: a^q >= n^p.
pub fn ge_root(a: u64, n: u64, p: u32, q: u32) -> bool {
    BigUint::from(a).pow(q) >= BigUint::from(n).pow(p)
}

/// a > n^(p/q), exactly: a^q > n^p.
pub fn gt_root(a: u64, n: u64, p: u32, q: u32) -> bool {
    BigUint::from(a).pow(q) > BigUint::from(n).pow(p)
}

/// Ceiling of log2(n) for n >= 1.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1);
    64 - (n - 1).leading_zeros().min(64)
}

/// Ceiling of r (a nonnegative rational), as u64.
pub fn ceil_ratio(r: Ratio) -> u64 {
    assert!(r.num >= 0);
    ((r.num as u128).div_ceil(r.den as u128)) as u64
}

/// An arbitrary-precision nonnegative rational used for the recursion bound
/// m', which shrinks by (1 - delta) factors whose denominators compound.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigRatio(BigRational);

impl BigRatio {
    pub fn from_integer(n: u64) -> Self {
        BigRatio(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(r: Ratio) -> Self {
        BigRatio(r.to_big())
    }

    pub fn mul_ratio(&self, r: Ratio) -> Self {
        BigRatio(&self.0 * r.to_big())
    }

    /// Multiply by (1 - r^e), exactly: (den^e - num^e) / den^e.
    pub fn mul_one_minus_pow(&self, r: Ratio, e: u32) -> Self {
        assert!(r.num >= 0 && r.num <= r.den);
        let np = num_bigint::BigInt::from(r.num).pow(e);
        let dp = num_bigint::BigInt::from(r.den).pow(e);
        BigRatio(&self.0 * BigRational::new(&dp - np, dp))
    }

    pub fn lt_one(&self) -> bool {
        self.0 < BigRational::one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn approx_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for BigRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Zero for BigRatio {
    fn zero() -> Self {
        BigRatio(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::ops::Add for BigRatio {
    type Output = BigRatio;
    fn add(self, rhs: Self) -> Self {
        BigRatio(self.0 + rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_orders() {
        assert_eq!(Ratio::new(2, 4), Ratio::new(1, 2));
        assert_eq!(Ratio::new(1, -2), Ratio::new(-1, 2));
        assert!(Ratio::new(1, 3) < Ratio::new(1, 2));
        assert!(Ratio::new(3, 4) > Ratio::new(2, 3));
    }

    #[test]
    fn one_minus_and_mul() {
        assert_eq!(Ratio::new(1, 4).one_minus(), Ratio::new(3, 4));
        assert_eq!(Ratio::new(2, 3).mul(&Ratio::new(3, 4)), Ratio::new(1, 2));
    }

    #[test]
    fn frac_gates_are_exact() {
        // 1 <= (1/3)*3 exactly
        assert!(le_frac(1, Ratio::new(1, 3), 3));
        assert!(!lt_frac(1, Ratio::new(1, 3), 3));
        assert!(!le_frac(2, Ratio::new(1, 3), 3));
    }

    #[test]
    fn pow_gates_handle_huge_exponents() {
        let sigma = Ratio::new(1, 500);
        // 0 <= sigma^40 * anything
        assert!(le_frac_pow(0, sigma, 40, 1));
        // 1 <= sigma^40 * 500^40 exactly (equality)
        assert!(!le_frac_pow(1, sigma, 40, 1_000_000));
        // w <= (1 - sigma^39) * w fails for w > 0
        assert!(!le_one_minus_frac_pow(1_000_000, sigma, 39, 1_000_000));
        // (1 - (1/2)^3) * 1_000_000 = 875_000 exactly
        assert!(le_one_minus_frac_pow(875_000, Ratio::new(1, 2), 3, 1_000_000));
        assert!(!le_one_minus_frac_pow(875_001, Ratio::new(1, 2), 3, 1_000_000));
    }

    #[test]
    fn root_gates() {
        // 4 <= 16^(1/2) * 1
        assert!(le_root_pow(4, 16, 1, 2, 1));
        assert!(!le_root_pow(5, 16, 1, 2, 1));
        // 3 >= 9^(1/2); 4 > 9^(1/2)
        assert!(ge_root(3, 9, 1, 2));
        assert!(!gt_root(3, 9, 1, 2));
        assert!(gt_root(4, 9, 1, 2));
    }

    #[test]
    fn log_and_ceil() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_ratio(Ratio::new(7, 3)), 3);
        assert_eq!(ceil_ratio(Ratio::new(6, 3)), 2);
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!("1/4".parse::<Ratio>().unwrap(), Ratio::new(1, 4));
        assert_eq!("3".parse::<Ratio>().unwrap(), Ratio::from_integer(3));
        assert!("1/0".parse::<Ratio>().is_err());
    }
}
