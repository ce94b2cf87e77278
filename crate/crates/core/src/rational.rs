//! Exact rationals and their `num/den` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `num/den`, always with an explicit denominator.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `a`, `a/b` or `-a/b`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn parse_q_list(s: &str) -> Result<Vec<Q>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_q).collect()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

pub fn qfact(n: u32) -> Q {
    Q::from_integer(factorial(n))
}

pub fn positive_part(x: &Q) -> Q {
    if x.is_positive() {
        x.clone()
    } else {
        Q::zero()
    }
}

pub fn is_integral(x: &Q) -> bool {
    x.denom().is_one()
}

/// Serde adapter storing a rational as a `num/den` string (integers accepted on input).
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(q(n)),
            Raw::Str(s) => parse_q(&s).map_err(de::Error::custom),
        }
    }
}

/// Lagrange interpolation through `(xs[k], ys[k])`, returning power-basis coefficients.
pub fn interpolate(xs: &[Q], ys: &[Q]) -> Vec<Q> {
    let n = xs.len();
    let mut out = vec![Q::zero(); n];
    for i in 0..n {
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let w = &ys[i] / denom;
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &w;
        }
    }
    out
}

pub fn horner(coeffs: &[Q], x: &Q) -> Q {
    coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["3/1", "-7/4", "0/1"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q("6/4").unwrap(), qr(3, 2));
        assert_eq!(parse_q("5").unwrap(), q(5));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn interpolation_is_exact() {
        let xs: Vec<Q> = (0..4).map(q).collect();
        let ys: Vec<Q> = xs.iter().map(|x| x * x * x - q(2) * x + qr(1, 3)).collect();
        let c = interpolate(&xs, &ys);
        assert_eq!(c, vec![qr(1, 3), q(-2), q(0), q(1)]);
        assert_eq!(horner(&c, &q(5)), q(115) + qr(1, 3));
    }
}
