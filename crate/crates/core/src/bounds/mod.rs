//! Closed-form zero-count bounds and their companions, evaluated with exact
//! rationals where possible and 256-bit outward-rounded intervals otherwise.
//!
//! Upper bounds are reported rounded up and lower bounds (radii, determinant
//! lower bounds, probability thresholds) rounded down, so the reported
//! 12-digit value is always on the safe side of the true one.

pub mod remez;

use std::collections::BTreeMap;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Complete, Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::interval::{format_sig, precision_digits, Interval, PREC};
use crate::rational::{pow_u, to_pair};

pub const REPORTED_DIGITS: usize = 12;
/// Exact values above this many bits are left out of reports.
const EXACT_BITS_LIMIT: u32 = 16384;

/// A real number carried both as an interval and, when available, exactly.
#[derive(Debug, Clone)]
pub struct Num {
    pub exact: Option<Rational>,
    pub iv: Interval,
}

impl Num {
    pub fn rat(q: Rational) -> Self {
        Num { iv: Interval::point(&q), exact: Some(q) }
    }

    pub fn int(n: i64) -> Self {
        Self::rat(Rational::from(n))
    }

    pub fn integer(n: &Integer) -> Self {
        Self::rat(Rational::from(n))
    }

    pub fn approx(iv: Interval) -> Self {
        Num { exact: None, iv }
    }

    fn both(&self, o: &Self, f: impl Fn(&Rational, &Rational) -> Rational, g: impl Fn(&Interval, &Interval) -> Interval) -> Self {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => Self::rat(f(a, b)),
            _ => Self::approx(g(&self.iv, &o.iv)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.both(o, |a, b| (a + b).complete(), Interval::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.both(o, |a, b| (a - b).complete(), Interval::sub)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.both(o, |a, b| (a * b).complete(), Interval::mul)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.both(o, |a, b| (a / b).complete(), Interval::div)
    }

    pub fn powu(&self, e: u32) -> Self {
        match &self.exact {
            Some(q) => Self::rat(pow_u(q, e)),
            None => Self::approx(self.iv.powu(e)),
        }
    }

    /// `self^e` for a positive base; exact when `e` is an integer.
    pub fn pow_rat(&self, e: &Rational) -> Self {
        if *e.denom() == 1 {
            if let Some(n) = e.numer().to_u32() {
                return self.powu(n);
            }
            if let Some(n) = (-e.numer().clone()).to_u32() {
                return Num::int(1).div(&self.powu(n));
            }
        }
        Self::approx(self.iv.powi(&Interval::point(e)))
    }

    pub fn ln(&self) -> Self {
        if self.exact.as_ref().is_some_and(|q| *q == 1) {
            return Num::int(0);
        }
        Self::approx(self.iv.ln())
    }

    pub fn exp(&self) -> Self {
        if self.exact.as_ref().is_some_and(|q| *q == 0) {
            return Num::int(1);
        }
        Self::approx(self.iv.exp())
    }

    pub fn sqrt(&self) -> Self {
        if let Some(q) = &self.exact {
            if q.numer().is_perfect_square() && q.denom().is_perfect_square() {
                return Self::rat(Rational::from((q.numer().clone().sqrt(), q.denom().clone().sqrt())));
            }
        }
        Self::approx(self.iv.sqrt())
    }

    pub fn max(&self, o: &Self) -> Self {
        self.both(o, |a, b| if a >= b { a.clone() } else { b.clone() }, Interval::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounded {
    Up,
    Down,
    Exact,
}

/// Which side of the true value a reported number must fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub formula: String,
    /// The evaluated expression in plain notation.
    pub anchor: String,
    pub inputs: BTreeMap<String, Value>,
    /// 12 significant digits, rounded toward the safe side.
    pub value: String,
    pub rounded: Rounded,
    /// Exact rational value when the formula has one and it is of modest size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 2]>,
    /// 20-digit outward-rounded enclosure of the true value.
    pub enclosure: [String; 2],
    pub precision_digits: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub derived: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    /// The reported value as a float (already rounded toward the safe side).
    pub fn value_f64(&self) -> f64 {
        self.value.parse().expect("reported values are decimal")
    }

    pub fn exact_value(&self) -> Option<Rational> {
        self.exact.as_ref().and_then(|p| crate::rational::from_pair(p).ok())
    }
}

pub(crate) fn rat_json(q: &Rational) -> Value {
    json!(to_pair(q))
}

pub(crate) fn finish(formula: &str, anchor: &str, inputs: BTreeMap<String, Value>, n: &Num, side: Side) -> BoundReport {
    let (lo, hi) = match &n.exact {
        Some(q) => {
            let mut lo = rug::Float::new(PREC);
            let mut hi = rug::Float::new(PREC);
            use rug::ops::AssignRound;
            lo.assign_round(q, Round::Down);
            hi.assign_round(q, Round::Up);
            (lo, hi)
        }
        None => (n.iv.lo.clone(), n.iv.hi.clone()),
    };
    let up = format_sig(&hi, REPORTED_DIGITS, Round::Up);
    let down = format_sig(&lo, REPORTED_DIGITS, Round::Down);
    let (value, rounded) = if n.exact.is_some() && lo == hi && up == down {
        (up, Rounded::Exact)
    } else {
        match side {
            Side::Upper => (up, Rounded::Up),
            Side::Lower => (down, Rounded::Down),
        }
    };
    let exact = n
        .exact
        .as_ref()
        .filter(|q| q.numer().significant_bits() + q.denom().significant_bits() <= EXACT_BITS_LIMIT)
        .map(to_pair);
    BoundReport {
        formula: formula.to_string(),
        anchor: anchor.to_string(),
        inputs,
        value,
        rounded,
        exact,
        enclosure: [format_sig(&lo, 20, Round::Down), format_sig(&hi, 20, Round::Up)],
        precision_digits: precision_digits(),
        derived: BTreeMap::new(),
        notes: Vec::new(),
    }
}

pub(crate) fn inputs<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `5 b log(4 + 2 c (b+1) B / R^b)` for `R <= 1`, with `R^b` dropped for `R >= 1`.
pub fn zero_bound_disc_num(b: u32, c: &Num, bound: &Rational, radius: &Rational) -> Num {
    let mut inner = c.mul(&Num::int(2 * (b as i64 + 1))).mul(&Num::rat(bound.clone()));
    if *radius < 1 {
        inner = inner.div(&Num::rat(pow_u(radius, b)));
    }
    Num::int(5 * b as i64).mul(&Num::int(4).add(&inner).ln())
}

/// Zero count of `f_lambda` on the disc of radius `R/4`.
pub fn zero_bound_disc(b: u32, c: &Rational, bound: &Rational, radius: &Rational) -> BoundReport {
    let n = zero_bound_disc_num(b, &Num::rat(c.clone()), bound, radius);
    finish(
        "zero_bound_disc",
        "5 b log(4 + 2 c (b+1) B / R^b) if R <= 1; 5 b log(4 + 2 c (b+1) B) if R >= 1; zeros in D_{R/4}",
        inputs([("b", json!(b)), ("c", rat_json(c)), ("B", rat_json(bound)), ("R", rat_json(radius))]),
        &n,
        Side::Upper,
    )
}

/// Radius `rho` of a disc holding at most `b` zeros.
pub fn small_disc_radius(b: u32, c: &Rational, bound: &Rational, radius: &Rational) -> BoundReport {
    let inv_r = Rational::from(radius.recip_ref());
    let scale = if inv_r > 1 { pow_u(&inv_r, b) } else { Rational::from(1) };
    let inner = Num::rat(c.clone() * Rational::from(b + 1) * bound * scale).max(&Num::int(2));
    let n = Num::rat(radius.clone()).div(&Num::int(10 * b as i64 + 2).exp().mul(&inner));
    finish(
        "small_disc_radius",
        "rho = R / (e^(10 b + 2) max(2, c (b+1) B max(1/R, 1)^b)); at most b zeros in D_rho",
        inputs([("b", json!(b)), ("c", rat_json(c)), ("B", rat_json(bound)), ("R", rat_json(radius))]),
        &n,
        Side::Lower,
    )
}

pub fn c_bound_num(sigma: u32, bound: &Rational, radius: &Rational, b: u32, delta: &Rational) -> Num {
    let s = Num::int(sigma as i64);
    // (B sqrt(sigma))^(sigma-1)
    let e = sigma - 1;
    let root = if e % 2 == 0 { s.powu(e / 2) } else { s.powu(e).sqrt() };
    let numer = s.mul(&Num::rat(pow_u(bound, e))).mul(&root);
    // beta (sigma - 1) is an integer in both branches.
    let r_exp = if *radius <= 1 { b * e } else { sigma * e / 2 };
    numer.div(&Num::rat(delta.clone() * pow_u(radius, r_exp)))
}

/// Norm constant `c <= sigma (B sqrt(sigma))^(sigma-1) / (delta R^(beta (sigma-1)))`.
pub fn c_bound(sigma: u32, bound: &Rational, radius: &Rational, b: u32, delta: &Rational) -> BoundReport {
    let n = c_bound_num(sigma, bound, radius, b, delta);
    let mut r = finish(
        "c_bound",
        "sigma (B sqrt(sigma))^(sigma-1) / (delta R^(beta (sigma-1))), beta = b if R <= 1, beta = sigma/2 if R >= 1",
        inputs([
            ("sigma", json!(sigma)),
            ("B", rat_json(bound)),
            ("R", rat_json(radius)),
            ("b", json!(b)),
            ("delta", rat_json(delta)),
        ]),
        &n,
        Side::Upper,
    );
    r.notes.push("any nonzero minor in place of delta still gives a valid bound".into());
    r
}

/// The zero bound on `D_{R/4}` with `c` taken from [`c_bound`].
pub fn z_bound_from_minor(b: u32, sigma: u32, delta: &Rational, bound: &Rational, radius: &Rational) -> BoundReport {
    let c = c_bound_num(sigma, bound, radius, b, delta);
    let n = zero_bound_disc_num(b, &c, bound, radius);
    finish(
        "z_bound_from_minor",
        "zero_bound_disc(b, c_bound(sigma, B, R, b, delta), B, R)",
        inputs([
            ("b", json!(b)),
            ("sigma", json!(sigma)),
            ("delta", rat_json(delta)),
            ("B", rat_json(bound)),
            ("R", rat_json(radius)),
        ]),
        &n,
        Side::Upper,
    )
}

/// Zero bound on `D_{1/4}` for `R = B = 1`.
pub fn z_bound_unit(b: u32, sigma: u32, delta: &Rational) -> BoundReport {
    let s = Integer::from(sigma).pow(sigma);
    let inner = Num::rat(Rational::from(2 * (b + 1)) * s / delta);
    let n = Num::int(5 * b as i64).mul(&Num::int(4).add(&inner).ln());
    finish(
        "z_bound_unit",
        "5 b log(4 + 2 (b+1) e^(sigma log sigma) / delta) on D_{1/4}, R = B = 1",
        inputs([("b", json!(b)), ("sigma", json!(sigma)), ("delta", rat_json(delta))]),
        &n,
        Side::Upper,
    )
}

/// Bezout bound on `D_{1/4}` from a nonzero `(d^2+d)`-minor `Delta` of the tilde matrix.
pub fn z_bound_general(d: u32, b: u32, big_delta: &Rational) -> BoundReport {
    let p = Integer::from(d + 1).pow(2 * (d + 1) * (d + 1));
    let inner = Num::rat(Rational::from(2 * (b + 1)) * p / big_delta);
    let n = Num::int(5 * b as i64).mul(&Num::int(4).add(&inner).ln());
    finish(
        "z_bound_general",
        "5 b log(4 + 2 (b+1) e^(2 (d+1)^2 log(d+1)) / Delta) on D_{1/4}",
        inputs([("d", json!(d)), ("b", json!(b)), ("Delta", rat_json(big_delta))]),
        &n,
        Side::Upper,
    )
}

/// Lower bound `h^(-d^2 (d+1) nu)` on nonzero minors for rational coefficients;
/// with `theta` supplied the exponent uses the nonzero-coefficient count.
pub fn delta_lower_rational(d: u32, nu: u32, h: &Integer, theta: Option<u32>) -> BoundReport {
    let e = d * d * (d + 1) * theta.unwrap_or(nu);
    let n = Num::rat(Rational::from((Integer::from(1), h.clone().pow(e))));
    let mut inp = inputs([("d", json!(d)), ("nu", json!(nu)), ("h", json!(h.to_string()))]);
    if let Some(t) = theta {
        inp.insert("theta".into(), json!(t));
    }
    finish(
        "delta_lower_rational",
        if theta.is_some() { "h^(-d^2 (d+1) theta)" } else { "h^(-d^2 (d+1) nu)" },
        inp,
        &n,
        Side::Lower,
    )
}

/// Polynomial with rational coefficients in ascending order.
pub fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::new(), |acc, c| acc * x + c)
}

fn poly_json(coeffs: &[Rational]) -> Value {
    Value::Array(coeffs.iter().map(rat_json).collect())
}

/// `T(d) = 10 R(2d)^2 + 10 R(2d) (2 (d+1)^3 + U(d))` with
/// `U(d) = S(R(2d)) d^2 (d+1) R(2d)`.
pub fn composite_t(d: u32, r_poly: &[Rational], s_poly: &[Rational]) -> BoundReport {
    let r2d = eval_poly(r_poly, &Rational::from(2 * d));
    let u = eval_poly(s_poly, &r2d) * Rational::from(d * d * (d + 1)) * &r2d;
    let cube = Rational::from(2 * (d + 1).pow(3));
    let t = Rational::from(10) * r2d.clone() * &r2d + Rational::from(10) * &r2d * (cube + &u);
    let mut rep = finish(
        "composite_T",
        "10 R(2d)^2 + 10 R(2d) (2 (d+1)^3 + U(d)), U(d) = S(R(2d)) d^2 (d+1) R(2d)",
        inputs([("d", json!(d)), ("R", poly_json(r_poly)), ("S", poly_json(s_poly))]),
        &Num::rat(t),
        Side::Upper,
    );
    rep.derived.insert("R(2d)".into(), rat_json(&r2d));
    rep.derived.insert("U(d)".into(), rat_json(&u));
    rep
}

/// Lacunary bounds: `nu_d < d^(q^2)` and, when `p` is given,
/// `Z <= 10 (2d)^(q^2) (1 + q d^2 + 5 d^(p q + 3))`.
pub fn lacunary_bounds(d: u32, q: &Rational, p: Option<&Rational>) -> Vec<BoundReport> {
    let q2 = (q * q).complete();
    let dn = Num::int(d as i64);
    let nu = dn.pow_rat(&q2);
    let mut out = vec![finish(
        "lacunary_nu",
        "d^(q^2)",
        inputs([("d", json!(d)), ("q", rat_json(q))]),
        &nu,
        Side::Upper,
    )];
    if let Some(p) = p {
        let e = (p * q).complete() + 3;
        let tail = Num::int(1)
            .add(&Num::rat(q.clone() * Rational::from(d * d)))
            .add(&Num::int(5).mul(&dn.pow_rat(&e)));
        let z = Num::int(10).mul(&Num::int(2 * d as i64).pow_rat(&q2)).mul(&tail);
        out.push(finish(
            "lacunary_Z",
            "10 (2d)^(q^2) (1 + q d^2 + 5 d^(p q + 3))",
            inputs([("d", json!(d)), ("q", rat_json(q)), ("p", rat_json(p))]),
            &z,
            Side::Upper,
        ));
    }
    out
}

pub fn random_epsilon_num(d: u32, p_hat: &Rational, m_d: u32, q_d: u32) -> Num {
    let num = Num::rat(Rational::from(3) * (Rational::from(1) - p_hat));
    let pi2 = Num::approx(Interval::pi().powu(2));
    let den = pi2.mul(&Num::int(2 * (d * d * m_d) as i64));
    num.div(&den).powu(q_d)
}

/// Probability threshold `eps_d = (3 (1 - p) / (2 pi^2 d^2 m_d))^(q_d)`.
pub fn random_epsilon(d: u32, p_hat: &Rational, m_d: u32, q_d: u32) -> BoundReport {
    let n = random_epsilon_num(d, p_hat, m_d, q_d);
    finish(
        "random_epsilon",
        "(3 (1 - p) / (2 pi^2 d^2 m_d))^(q_d)",
        inputs([("d", json!(d)), ("p", rat_json(p_hat)), ("m_d", json!(m_d)), ("q_d", json!(q_d))]),
        &n,
        Side::Lower,
    )
}

/// Arity and degree used for the Bautin determinant in [`random_epsilon`].
pub fn delta_arity_degree(d: u32) -> (u32, u32) {
    (d * d + d, d * (d + 1) * (d + 1) / 2)
}

/// `floor(ln t)` for `t >= 1`, exact.
pub fn floor_ln(t: &Integer) -> u64 {
    assert!(*t >= 1, "floor_ln needs t >= 1");
    let x = Interval::from_integer(t).ln();
    let mut k = x.lo.to_f64().floor().max(0.0) as u64;
    // Settle the boundary exactly: e^k <= t < e^(k+1).
    loop {
        let up = Interval::from_int(k as i64 + 1).exp();
        if up.hi <= *t {
            k += 1;
            continue;
        }
        if up.lo > *t {
            let at = Interval::from_int(k as i64).exp();
            if at.hi <= *t || k == 0 {
                return k;
            }
            k -= 1;
            continue;
        }
        panic!("cannot separate t from e^(k+1) at working precision");
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += (x * y).complete();
        }
    }
    out
}

/// `Z(L) K Q(L)` with `L = floor(log T)`, and the implied envelope
/// `beta log^alpha T` with `alpha = deg(Z Q)`, `beta = K * sum |coeff(Z Q)|`
/// (valid for `T >= 3`, where `L >= 1`).
pub fn rational_point_bound(
    floor_log_t: u64,
    z_poly: &[Rational],
    k: &Rational,
    q_poly: &[Rational],
) -> BoundReport {
    let l = Rational::from(floor_log_t);
    let v = eval_poly(z_poly, &l) * k * eval_poly(q_poly, &l);
    let mut rep = finish(
        "rational_point_bound",
        "Z_{floor(log T)} K Q(floor(log T))",
        inputs([
            ("floor_log_T", json!(floor_log_t)),
            ("Z", poly_json(z_poly)),
            ("K", rat_json(k)),
            ("Q", poly_json(q_poly)),
        ]),
        &Num::rat(v),
        Side::Upper,
    );
    let zq = poly_mul(z_poly, q_poly);
    let alpha = zq.iter().rposition(|c| *c != 0).unwrap_or(0);
    let beta = zq.iter().fold(Rational::new(), |acc, c| acc + c.clone().abs()) * k;
    rep.derived.insert("alpha".into(), json!(alpha));
    rep.derived.insert("beta".into(), rat_json(&beta));
    rep.notes.push("K and Q are user parameters".into());
    rep
}
