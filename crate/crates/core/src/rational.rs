//! Exact arithmetic helpers on top of [`num_rational::BigRational`].

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(s.parse().ok()?),
    };
    Some(r)
}

/// `p/q` text, integers bare.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    // Direct conversion loses range for huge numerators; scale through the ratio.
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `(-1)^(n-1) (n-1)!`, the Möbius weight of an `n`-block partition.
pub fn partition_weight(blocks: usize) -> i128 {
    debug_assert!(blocks >= 1);
    let f: i128 = (1..blocks as i128).product();
    if blocks % 2 == 1 {
        f
    } else {
        -f
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

/// `(-1)^(k-1) * x`
pub fn signed_by_order<T>(k: usize, x: T) -> T
where
    T: std::ops::Neg<Output = T>,
{
    if k % 2 == 1 {
        x
    } else {
        -x
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}
