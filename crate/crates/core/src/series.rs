//! Truncated power series with exact rational coefficients.
//!
//! A series carries analyticity metadata `(R, B)`: it converges on the disc
//! of radius `R` and is bounded there by `B`. Operations state the order
//! they need and fail with [`Error::TruncationTooShort`] instead of padding
//! with zeros.

use rug::{Complete, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{binomial, pow_u};
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSeries {
    coeffs: Vec<Rational>,
    radius: Rational,
    bound: Rational,
    origin_value_zero: bool,
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    #[serde(with = "crate::rational::pair_vec")]
    coeffs: Vec<Rational>,
    #[serde(default = "one", with = "crate::rational::pair")]
    radius: Rational,
    #[serde(default = "one", with = "crate::rational::pair")]
    bound: Rational,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    origin_value_zero: bool,
}

fn one() -> Rational {
    Rational::from(1)
}

impl Serialize for ExactSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire {
            coeffs: self.coeffs.clone(),
            radius: self.radius.clone(),
            bound: self.bound.clone(),
            origin_value_zero: self.origin_value_zero,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SeriesWire::deserialize(d)?;
        let s = ExactSeries::new(w.coeffs, w.radius, w.bound).map_err(serde::de::Error::custom)?;
        if w.origin_value_zero {
            s.with_origin_value_zero().map_err(serde::de::Error::custom)
        } else {
            Ok(s)
        }
    }
}

impl ExactSeries {
    pub fn new(coeffs: Vec<Rational>, radius: Rational, bound: Rational) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a series needs at least one coefficient".into()));
        }
        if radius <= 0 || bound <= 0 {
            return Err(Error::Invalid("radius and bound must be positive".into()));
        }
        Ok(ExactSeries { coeffs, radius, bound, origin_value_zero: false })
    }

    /// Series with the default metadata `R = B = 1`.
    pub fn with_unit_metadata(coeffs: Vec<Rational>) -> Result<Self> {
        Self::new(coeffs, one(), one())
    }

    /// Asserts `a_0 = 0`.
    pub fn with_origin_value_zero(mut self) -> Result<Self> {
        if self.coeffs[0] != 0 {
            return Err(Error::Invalid("origin_value_zero is set but a_0 is nonzero".into()));
        }
        self.origin_value_zero = true;
        Ok(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization cannot fail")
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    /// Truncation order `K`; coefficients `a_0..a_K` are stored.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn origin_value_zero(&self) -> bool {
        self.origin_value_zero
    }

    /// Fails unless coefficients up to order `k` are stored.
    pub fn require_order(&self, k: usize) -> Result<()> {
        if self.order() < k {
            return Err(Error::TruncationTooShort { need: k + 1, have: self.coeffs.len() });
        }
        Ok(())
    }

    /// The same series truncated at order `k`.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        self.require_order(k)?;
        let mut s = self.clone();
        s.coeffs.truncate(k + 1);
        Ok(s)
    }

    /// Indices where the Cauchy estimate `|a_k| <= B / R^k` fails.
    pub fn cauchy_violations(&self) -> Vec<usize> {
        let mut rk = one();
        let mut out = Vec::new();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                rk *= &self.radius;
            }
            if (a.clone().abs() * &rk) > self.bound {
                out.push(k);
            }
        }
        out
    }

    /// `e^z - 1` up to order `k`, with `R = 1` and `B = 2` (since `e - 1 < 2`).
    pub fn exp_minus_one(k: usize) -> Self {
        let mut coeffs = vec![Rational::new()];
        let mut fact = Integer::from(1);
        for n in 1..=k {
            fact *= n as u32;
            coeffs.push(Rational::from((1, fact.clone())));
        }
        ExactSeries::new(coeffs, one(), Rational::from(2))
            .and_then(Self::with_origin_value_zero)
            .expect("valid builtin")
    }

    /// The identity `f(z) = z` up to order `k >= 1`.
    pub fn identity(k: usize) -> Self {
        let mut coeffs = vec![Rational::new(); k.max(1) + 1];
        coeffs[1] = one();
        ExactSeries::new(coeffs, one(), one())
            .and_then(Self::with_origin_value_zero)
            .expect("valid builtin")
    }
}

/// Product of two truncated series, keeping orders `0..=n`.
pub fn mul_truncated(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if *y != 0 {
                out[i + j] += (x * y).complete();
            }
        }
    }
    out
}

/// Cauchy tail bound `B (r/R)^(N+1) / (1 - r/R)` for `|sum_{k>N} a_k z^k|` on `|z| <= r`.
pub fn cauchy_tail(bound: &Rational, radius: &Rational, n: usize, r: &Rational) -> Result<Rational> {
    if *r < 0 || r >= radius {
        return Err(Error::RadiusOutOfRange { r: r.to_string(), radius: radius.to_string() });
    }
    let t = (r / radius).complete();
    let num = bound.clone() * pow_u(&t, (n + 1) as u32);
    Ok(num / (Rational::from(1) - t))
}

pub fn tail_bound(f: &ExactSeries, n: usize, r: &Rational) -> Result<Rational> {
    cauchy_tail(&f.bound, &f.radius, n, r)
}

/// Coefficients of `f^j` for `j = 0..=d`, truncated at order `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerTable {
    d: usize,
    k: usize,
    cols: Vec<Vec<Rational>>,
}

impl PowerTable {
    pub fn new(f: &ExactSeries, d: usize, k: usize) -> Result<Self> {
        f.require_order(k)?;
        let base: Vec<Rational> = f.coeffs[..=k].to_vec();
        let mut cols = Vec::with_capacity(d + 1);
        let mut unit = vec![Rational::new(); k + 1];
        unit[0] = one();
        cols.push(unit);
        for j in 1..=d {
            let next = if j == 1 { base.clone() } else { mul_truncated(&cols[j - 1], &base, k) };
            cols.push(next);
        }
        Ok(PowerTable { d, k, cols })
    }

    pub fn max_power(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// Coefficient of `z^i` in `f^j`.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.cols[j][i]
    }

    /// Coefficient of `z^i` in `f^j`, zero for negative `i`.
    pub fn get_signed(&self, i: isize, j: usize) -> Rational {
        if i < 0 {
            Rational::new()
        } else {
            self.cols[j][i as usize].clone()
        }
    }

    pub fn column(&self, j: usize) -> &[Rational] {
        &self.cols[j]
    }

    pub fn require(&self, d: usize, k: usize) -> Result<()> {
        if d > self.d || k > self.k {
            return Err(Error::TableTooSmall {
                need_power: d,
                need_order: k,
                have_power: self.d,
                have_order: self.k,
            });
        }
        Ok(())
    }
}

pub fn power_table(f: &ExactSeries, d: usize, k: usize) -> Result<PowerTable> {
    PowerTable::new(f, d, k)
}

/// Power table of `f` re-expanded at a base point `u`, with every entry a
/// polynomial in `u` truncated at degree `K_u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecenteredTable {
    d: usize,
    k: usize,
    k_u: usize,
    vanishing: bool,
    cols: Vec<Vec<UPoly>>,
}

impl RecenteredTable {
    /// Entry `(i, j)` is the coefficient of `w^i` in `f(u+w)^j`; with
    /// `vanishing` set it is the coefficient in `(f(u+w) - f(u))^j` instead.
    pub fn new(f: &ExactSeries, d: usize, k: usize, k_u: usize, vanishing: bool) -> Result<Self> {
        f.require_order(k + k_u)?;
        // a_n(u) = sum_{m >= n} C(m, n) a_m u^(m - n)
        let shifted: Vec<UPoly> = (0..=k)
            .map(|n| {
                if vanishing && n == 0 {
                    return UPoly::zero();
                }
                UPoly::from_coeffs(
                    (n..=n + k_u)
                        .map(|m| f.coeff(m).clone() * binomial(m as u32, n as u32))
                        .collect(),
                )
            })
            .collect();
        let mut cols: Vec<Vec<UPoly>> = Vec::with_capacity(d + 1);
        let mut unit = vec![UPoly::zero(); k + 1];
        unit[0] = UPoly::constant(one());
        cols.push(unit);
        for j in 1..=d {
            if j == 1 {
                cols.push(shifted.clone());
                continue;
            }
            let prev = &cols[j - 1];
            let mut next = vec![UPoly::zero(); k + 1];
            for (i, x) in prev.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (l, y) in shifted.iter().enumerate().take(k + 1 - i) {
                    if !y.is_zero() {
                        next[i + l] = next[i + l].add(&x.mul_capped(y, k_u));
                    }
                }
            }
            cols.push(next);
        }
        Ok(RecenteredTable { d, k, k_u, vanishing, cols })
    }

    pub fn get(&self, i: usize, j: usize) -> &UPoly {
        &self.cols[j][i]
    }

    pub fn max_power(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn u_order(&self) -> usize {
        self.k_u
    }

    pub fn vanishing(&self) -> bool {
        self.vanishing
    }

    /// The table at `u = 0`.
    pub fn at_origin(&self) -> Vec<Vec<Rational>> {
        self.cols.iter().map(|c| c.iter().map(|p| p.coeff(0)).collect()).collect()
    }
}

pub fn recenter(f: &ExactSeries, d: usize, k: usize, k_u: usize) -> Result<RecenteredTable> {
    RecenteredTable::new(f, d, k, k_u, false)
}

/// Denominator heights `h_l` and nonzero counts `theta_l` for `l = 1..=L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightProfile {
    #[serde(with = "integer_vec")]
    pub h: Vec<Integer>,
    pub theta: Vec<usize>,
}

impl HeightProfile {
    pub fn h_at(&self, l: usize) -> &Integer {
        &self.h[l - 1]
    }

    pub fn theta_at(&self, l: usize) -> usize {
        self.theta[l - 1]
    }
}

mod integer_vec {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn height_profile(f: &ExactSeries, l: usize) -> Result<HeightProfile> {
    f.require_order(l)?;
    let mut h = Vec::with_capacity(l);
    let mut theta = Vec::with_capacity(l);
    let mut hmax = Integer::from(1);
    let mut count = usize::from(f.coeff(0) != &0);
    for k in 1..=l {
        let a = f.coeff(k);
        if *a.denom() > hmax {
            hmax = a.denom().clone();
        }
        if *a != 0 {
            count += 1;
        }
        h.push(hmax.clone());
        theta.push(count);
    }
    Ok(HeightProfile { h, theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn exp_square_table() {
        let f = ExactSeries::exp_minus_one(4);
        let t = power_table(&f, 2, 4).unwrap();
        assert_eq!(*t.get(2, 2), q(1, 1));
        assert_eq!(*t.get(3, 2), q(1, 1));
        assert_eq!(*t.get(4, 2), q(7, 12));
        assert_eq!(*t.get(0, 0), q(1, 1));
        assert_eq!(*t.get(3, 0), q(0, 1));
    }

    #[test]
    fn identity_table_is_diagonal() {
        let t = power_table(&ExactSeries::identity(3), 3, 3).unwrap();
        for i in 0..=3 {
            for j in 0..=3 {
                assert_eq!(*t.get(i, j) == 1, i == j);
            }
        }
    }

    #[test]
    fn short_series_is_rejected() {
        let f = ExactSeries::exp_minus_one(3);
        assert!(matches!(power_table(&f, 2, 4), Err(Error::TruncationTooShort { .. })));
    }

    #[test]
    fn recentered_entries() {
        let f = ExactSeries::exp_minus_one(8);
        let t = recenter(&f, 2, 3, 2).unwrap();
        assert_eq!(t.get(1, 1).coeffs(), &[q(1, 1), q(1, 1), q(1, 2)]);

        let sq = ExactSeries::with_unit_metadata(vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(0, 1)]).unwrap();
        let t = recenter(&sq, 1, 2, 1).unwrap();
        assert_eq!(t.get(1, 1).coeffs(), &[q(0, 1), q(2, 1)]);
    }

    #[test]
    fn tail_examples() {
        let one = q(1, 1);
        assert_eq!(cauchy_tail(&one, &one, 3, &q(1, 4)).unwrap(), q(1, 192));
        assert_eq!(cauchy_tail(&one, &one, 3, &q(0, 1)).unwrap(), q(0, 1));
        assert!(cauchy_tail(&one, &one, 3, &one).is_err());
    }

    #[test]
    fn heights_of_exp() {
        let p = height_profile(&ExactSeries::exp_minus_one(3), 3).unwrap();
        assert_eq!(p.h, vec![Integer::from(1), Integer::from(2), Integer::from(6)]);
        assert_eq!(p.theta, vec![1, 2, 3]);
    }

    #[test]
    fn json_roundtrip() {
        let f = ExactSeries::exp_minus_one(5);
        let back = ExactSeries::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let bare = ExactSeries::from_json(r#"{"coeffs":[["0","1"],["3","6"]]}"#).unwrap();
        assert_eq!(*bare.coeff(1), q(1, 2));
        assert_eq!(*bare.radius(), 1);
        assert!(ExactSeries::from_json(r#"{"coeffs":[["1","1"]],"origin_value_zero":true}"#).is_err());
    }

    #[test]
    fn exp_passes_cauchy_check() {
        assert!(ExactSeries::exp_minus_one(30).cauchy_violations().is_empty());
        let bad = ExactSeries::with_unit_metadata(vec![q(0, 1), q(3, 1)]).unwrap();
        assert_eq!(bad.cauchy_violations(), vec![1]);
    }

    fn series_strategy() -> impl Strategy<Value = ExactSeries> {
        proptest::collection::vec((-9i64..10, 1i64..7), 2..9)
            .prop_map(|v| ExactSeries::with_unit_metadata(v.into_iter().map(|(a, b)| q(a, b)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn convolution_identity(f in series_strategy(), d in 0usize..4) {
            let k = f.order();
            let t = power_table(&f, d + 1, k).unwrap();
            for j in 0..=d {
                let expect = mul_truncated(t.column(j), t.column(1), k);
                prop_assert_eq!(t.column(j + 1), &expect[..]);
            }
        }

        #[test]
        fn recenter_at_zero_is_power_table(f in series_strategy(), d in 0usize..3, ku in 0usize..3) {
            prop_assume!(f.order() >= ku);
            let k = f.order() - ku;
            let r = recenter(&f, d, k, ku).unwrap();
            let t = power_table(&f, d, k).unwrap();
            let origin = r.at_origin();
            for j in 0..=d {
                prop_assert_eq!(&origin[j][..], t.column(j));
            }
        }

        #[test]
        fn tail_is_monotone(n in 0usize..30, a in 1i64..50, b in 1i64..50) {
            let one = q(1, 1);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(lo < hi);
            let r1 = q(lo, 51);
            let r2 = q(hi, 51);
            let t = cauchy_tail(&one, &one, n, &r1).unwrap();
            prop_assert!(cauchy_tail(&one, &one, n + 1, &r1).unwrap() < t);
            prop_assert!(cauchy_tail(&one, &one, n, &r2).unwrap() > t);
        }

        #[test]
        fn heights_are_monotone(f in series_strategy()) {
            let p = height_profile(&f, f.order()).unwrap();
            for l in 1..p.h.len() {
                prop_assert!(p.h[l] >= p.h[l - 1]);
                prop_assert!(p.theta[l] >= p.theta[l - 1]);
            }
            for (l, t) in p.theta.iter().enumerate() {
                prop_assert!(*t <= l + 2);
            }
        }
    }
}
