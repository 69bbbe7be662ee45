//! Helpers around [`rug::Rational`]: parsing, JSON encoding as decimal
//! string pairs, and a few arithmetic conveniences shared by every module.
//!
//! On the wire a rational is always the two-element array
//! `["numerator", "denominator"]` with decimal-string integers, so values of
//! any size survive a round trip through JSON.

use rug::ops::Pow;
use rug::{Complete, Integer, Rational};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::ParseRational(s.to_string()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: Integer = n.trim().parse().map_err(|_| Error::ParseRational(s.to_string()))?;
        let d: Integer = d.trim().parse().map_err(|_| Error::ParseRational(s.to_string()))?;
        if d == 0 {
            return Err(Error::ParseRational(s.to_string()));
        }
        return Ok(Rational::from((n, d)));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::ParseRational(s.to_string()));
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: Integer = digits.parse().map_err(|_| Error::ParseRational(s.to_string()))?;
        let d = Integer::from(10).pow(fp.len() as u32);
        let r = Rational::from((n, d));
        return Ok(if neg { -r } else { r });
    }
    let n: Integer = t.parse().map_err(|_| Error::ParseRational(s.to_string()))?;
    Ok(Rational::from(n))
}

/// `["num", "den"]` string pair for a rational.
pub fn to_pair(q: &Rational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

pub fn from_pair(p: &[String; 2]) -> Result<Rational> {
    let n: Integer = p[0].trim().parse().map_err(|_| Error::ParseRational(p[0].clone()))?;
    let d: Integer = p[1].trim().parse().map_err(|_| Error::ParseRational(p[1].clone()))?;
    if d == 0 {
        return Err(Error::ParseRational(format!("{}/{}", p[0], p[1])));
    }
    Ok(Rational::from((n, d)))
}

/// Serde adapter: `#[serde(with = "crate::rational::pair")]`.
pub mod pair {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_pair(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let p = <[String; 2]>::deserialize(d)?;
        from_pair(&p).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod pair_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_pair).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let ps = Vec::<[String; 2]>::deserialize(d)?;
        ps.iter().map(|p| from_pair(p).map_err(D::Error::custom)).collect()
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod pair_opt {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(to_pair).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let p = Option::<[String; 2]>::deserialize(d)?;
        p.map(|p| from_pair(&p).map_err(D::Error::custom)).transpose()
    }
}

/// Serde adapter for `Vec<Vec<Rational>>` (row-major matrices).
pub mod pair_mat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(to_pair).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<[String; 2]>>::deserialize(d)?;
        rows.iter()
            .map(|r| r.iter().map(|p| from_pair(p).map_err(D::Error::custom)).collect())
            .collect()
    }
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Least common multiple of the reduced denominators.
pub fn lcm_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> Integer {
    qs.into_iter().fold(Integer::from(1), |acc, q| acc.lcm(q.denom()))
}

/// Rational power with a nonnegative integer exponent.
pub fn pow_u(q: &Rational, e: u32) -> Rational {
    Rational::from((q.numer().clone().pow(e), q.denom().clone().pow(e)))
}

/// Multiplies a vector of rationals by the lcm of its denominators and
/// divides by the gcd of the resulting numerators; the result is a
/// primitive integer vector proportional to the input (zero stays zero).
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<Integer> {
    let l = lcm_denominators(v);
    let ints: Vec<Integer> = v.iter().map(|q| Integer::from(q.numer() * (&l / q.denom()).complete())).collect();
    let g = ints.iter().fold(Integer::new(), |acc, x| acc.gcd(x));
    if g == 0 {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
