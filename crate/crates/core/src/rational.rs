//! Exact rational scalars.
//!
//! Every computation in the crate stays in `BigRational`; there are no
//! tolerances anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `(-1)^k`
pub fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn pow2(k: usize) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

pub fn parse(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

/// Rescales `v` to a primitive integer vector whose first nonzero entry is
/// positive. Returns the vector unchanged if it is zero.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let mut num = BigInt::zero();
    for x in v {
        let scaled = x.numer() * (&den / x.denom());
        num = num.gcd(&scaled);
    }
    if first.is_negative() {
        num = -num;
    }
    let factor = Rational::new(den, num);
    v.iter().map(|x| x * &factor).collect()
}

/// If `a = λ·b` for a nonzero scalar λ, returns λ. Both must have equal length.
pub fn proportionality(a: &[Rational], b: &[Rational]) -> Option<Rational> {
    assert_eq!(a.len(), b.len());
    let mut ratio: Option<Rational> = None;
    for (x, y) in a.iter().zip(b) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => {}
            (false, false) => {
                let r = x / y;
                match &ratio {
                    None => ratio = Some(r),
                    Some(prev) if *prev == r => {}
                    Some(_) => return None,
                }
            }
            _ => return None,
        }
    }
    ratio
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_clears_denominators() {
        let v = vec![frac(1, 2), frac(-1, 3), int(0)];
        assert_eq!(primitive(&v), vec![int(3), int(-2), int(0)]);
        let w = vec![int(0), int(-4), int(6)];
        assert_eq!(primitive(&w), vec![int(0), int(2), int(-3)]);
    }

    #[test]
    fn proportionality_detects_ratio() {
        let a = vec![int(2), int(0), int(-4)];
        let b = vec![int(1), int(0), int(-2)];
        assert_eq!(proportionality(&a, &b), Some(int(2)));
        assert_eq!(proportionality(&a, &[int(1), int(1), int(-2)]), None);
        assert_eq!(proportionality(&[int(0)], &[int(0)]), None);
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!(parse("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(frac(-1, 2).to_string(), "-1/2");
        assert_eq!(int(4).to_string(), "4");
        assert!(parse("x").is_err());
    }
}
