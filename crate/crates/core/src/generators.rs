//! Concrete series families: lacunary series, rational recurrences with
//! denominator tracking, and seeded random series.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bounds::{finish, inputs, BoundReport, Num, Side};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{lcm_denominators, pow_u};
use crate::series::ExactSeries;

// ---------------------------------------------------------------------------
// Lacunary series

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ExponentRule {
    Explicit { exponents: Vec<u64> },
    /// `n_1 = first`, `n_{k+1} = n_k^2 + offset`.
    SquarePlus { first: u64, offset: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CoefficientRule {
    /// `a_k = ratio^k`.
    Geometric {
        #[serde(with = "crate::rational::pair")]
        ratio: Rational,
    },
    /// `a_k = values[k-1]`; the series ends with the list.
    Explicit {
        #[serde(with = "crate::rational::pair_vec")]
        values: Vec<Rational>,
    },
}

/// `f(z) = sum_{k>=1} a_k z^{n_k}` with `n_{k+1} > n_k^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LacunarySpec {
    pub exponents: ExponentRule,
    pub coefficients: CoefficientRule,
    /// Upper lacunarity exponent: `n_{k+1} <= n_k^q`, `q > 2`.
    #[serde(default, with = "crate::rational::pair_opt", skip_serializing_if = "Option::is_none")]
    pub q: Option<Rational>,
    /// Coefficient decay exponent: `|a_k| >= exp(-n_k^p)`.
    #[serde(default, with = "crate::rational::pair_opt", skip_serializing_if = "Option::is_none")]
    pub p: Option<Rational>,
}

/// One term `a_k z^{n_k}` (k is 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LacunaryTerm {
    pub k: usize,
    pub n: u64,
    pub a: Rational,
}

impl LacunarySpec {
    pub fn new(exponents: ExponentRule, coefficients: CoefficientRule) -> Self {
        LacunarySpec { exponents, coefficients, q: None, p: None }
    }

    fn coefficient(&self, k: usize) -> Option<Rational> {
        match &self.coefficients {
            CoefficientRule::Geometric { ratio } => Some(pow_u(ratio, k as u32)),
            CoefficientRule::Explicit { values } => values.get(k - 1).cloned(),
        }
    }

    /// True when the rules produce infinitely many terms.
    pub fn is_infinite(&self) -> bool {
        matches!(
            (&self.exponents, &self.coefficients),
            (ExponentRule::SquarePlus { .. }, CoefficientRule::Geometric { .. })
        )
    }

    /// Every term with `n_k <= limit`, plus the first term beyond it when one
    /// exists, validated against the lacunarity conditions.
    pub fn terms_through(&self, limit: u64) -> Result<Vec<LacunaryTerm>> {
        if let Some(q) = &self.q {
            if *q <= 2 {
                return Err(Error::Invalid("the upper lacunarity exponent q must exceed 2".into()));
            }
        }
        let mut out: Vec<LacunaryTerm> = Vec::new();
        let mut k = 1;
        loop {
            let n = match &self.exponents {
                ExponentRule::Explicit { exponents } => match exponents.get(k - 1) {
                    Some(&n) => n,
                    None => break,
                },
                ExponentRule::SquarePlus { first, offset } => match out.last() {
                    None => *first,
                    Some(prev) => {
                        if *offset == 0 {
                            return Err(Error::LacunarityViolation {
                                index: k,
                                reason: "n_{k+1} = n_k^2 is not strictly larger than n_k^2".into(),
                            });
                        }
                        match prev.n.checked_mul(prev.n).and_then(|s| s.checked_add(*offset)) {
                            Some(n) => n,
                            None => break,
                        }
                    }
                },
            };
            let Some(a) = self.coefficient(k) else { break };
            let term = LacunaryTerm { k, n, a };
            self.check_term(out.last(), &term)?;
            let past = n > limit;
            out.push(term);
            if past {
                break;
            }
            k += 1;
        }
        if out.is_empty() {
            return Err(Error::Invalid("a lacunary series needs at least one term".into()));
        }
        Ok(out)
    }

    fn check_term(&self, prev: Option<&LacunaryTerm>, t: &LacunaryTerm) -> Result<()> {
        let violation = |reason: String| Err(Error::LacunarityViolation { index: t.k, reason });
        if t.a == 0 {
            return violation("coefficient is zero".into());
        }
        match prev {
            None if t.n == 0 => return violation("n_1 must be positive".into()),
            Some(p) => {
                let sq = Integer::from(p.n) * p.n;
                if Integer::from(t.n) <= sq {
                    return violation(format!("n_k = {} does not exceed n_(k-1)^2 = {sq}", t.n));
                }
                if let Some(q) = &self.q {
                    let (a, b) = (q.numer().to_u32(), q.denom().to_u32());
                    let (Some(a), Some(b)) = (a, b) else {
                        return Err(Error::Invalid("q has an oversized numerator or denominator".into()));
                    };
                    let lhs = Integer::from(t.n).pow(b);
                    let rhs = Integer::from(p.n).pow(a);
                    if lhs > rhs {
                        return violation(format!("n_k = {} exceeds n_(k-1)^q", t.n));
                    }
                }
            }
            None => {}
        }
        if let Some(p) = &self.p {
            // |a_k| >= exp(-n_k^p)  <=>  ln(1/|a_k|) <= n_k^p
            let lhs = Interval::point(&Rational::from(t.a.clone().abs().recip())).ln();
            let rhs = Interval::from_integer(&Integer::from(t.n)).powi(&Interval::point(p));
            if lhs.lo > rhs.hi {
                return violation("|a_k| < exp(-n_k^p)".into());
            }
            if lhs.hi > rhs.lo {
                return Err(Error::PrecisionInsufficient("cannot decide the coefficient decay condition".into()));
            }
        }
        Ok(())
    }
}

/// The lacunary series truncated at order `k`, with `R = 1` and
/// `B = max(1, sum |a_k|)`.
pub fn gen_lacunary(spec: &LacunarySpec, k: usize) -> Result<ExactSeries> {
    let terms = if spec.is_infinite() {
        spec.terms_through(k as u64)?
    } else {
        spec.terms_through(u64::MAX)?
    };
    let mut coeffs = vec![Rational::new(); k + 1];
    for t in terms.iter().filter(|t| t.n <= k as u64) {
        coeffs[t.n as usize] = t.a.clone();
    }
    let sum = match &spec.coefficients {
        CoefficientRule::Geometric { ratio } if spec.is_infinite() => {
            let r = ratio.clone().abs();
            if r >= 1 {
                return Err(Error::Invalid("geometric coefficients need |ratio| < 1 to converge on the unit disc".into()));
            }
            r.clone() / (Rational::from(1) - r)
        }
        _ => terms.iter().fold(Rational::new(), |acc, t| acc + t.a.clone().abs()),
    };
    let bound = if sum > 1 { sum } else { Rational::from(1) };
    ExactSeries::new(coeffs, Rational::from(1), bound)?.with_origin_value_zero()
}

/// Locates `l >= 1` with `n_l <= d < n_{l+1}`.
fn locate(spec: &LacunarySpec, d: u64) -> Result<(usize, Vec<LacunaryTerm>)> {
    let terms = spec.terms_through(d)?;
    if d < terms[0].n {
        return Err(Error::OutOfRange(format!("d = {d} is below n_1 = {}", terms[0].n)));
    }
    match terms.iter().position(|t| t.n > d) {
        Some(i) => Ok((i, terms)),
        None => Err(Error::OutOfRange(format!("the exponent list ends before exceeding d = {d}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sandwich {
    pub l: usize,
    pub lower: u64,
    pub upper: u64,
}

/// `n_{l+1} <= nu_d <= n_{l+1}^2 - 1` for `d` in `[n_l, n_{l+1} - 1]`.
pub fn lacunary_nu_sandwich(spec: &LacunarySpec, d: u64) -> Result<Sandwich> {
    let (l, terms) = locate(spec, d)?;
    let n = terms[l].n;
    let upper = n
        .checked_mul(n)
        .ok_or_else(|| Error::OutOfRange("n_{l+1}^2 overflows".into()))?
        - 1;
    Ok(Sandwich { l, lower: n, upper })
}

/// A nonzero `(d+1)^2` minor of the square Bautin matrix of a lacunary series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LacunaryMinor {
    pub l: usize,
    pub exponent: u64,
    #[serde(with = "crate::rational::pair")]
    pub value: Rational,
    /// Rows `j n_{l+1} + m`, `j, m = 0..=d`.
    pub rows: Vec<usize>,
    /// All `(d+1)^2` columns of the square family.
    pub cols: Vec<usize>,
    /// Set when the rows are exactly `0..(d+1)^2`.
    pub upper_square: bool,
}

/// `a_{l+1}^{d (d+1)^2 / 2}` together with the rows realizing it.
pub fn lacunary_minor_closed_form(spec: &LacunarySpec, d: u64) -> Result<LacunaryMinor> {
    let (l, terms) = locate(spec, d)?;
    let next = &terms[l];
    let exponent = d * (d + 1) * (d + 1) / 2;
    let e32 = u32::try_from(exponent).map_err(|_| Error::OutOfRange("minor exponent overflows".into()))?;
    let n = next.n as usize;
    let d = d as usize;
    let rows: Vec<usize> = (0..=d).flat_map(|j| (0..=d).map(move |m| j * n + m)).collect();
    let upper_square = d + 1 == n;
    Ok(LacunaryMinor {
        l,
        exponent,
        value: pow_u(&next.a, e32),
        rows,
        cols: (0..(d + 1) * (d + 1)).collect(),
        upper_square,
    })
}

// ---------------------------------------------------------------------------
// Recurrences

/// One monomial `p_beta(k) u^beta` of the recurrence polynomial, with
/// `p_beta(k) = sum_i c_i x^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceTerm {
    /// Exponents of `u_1 = a_k, ..., u_r = a_{k-r+1}`.
    pub beta: Vec<u32>,
    #[serde(with = "crate::rational::pair_vec")]
    pub c: Vec<Rational>,
}

/// `a_{k+1} = Q(k, a_k, ..., a_{k-r+1})` where `Q` is polynomial in the `u`
/// and in `x = 1/(k + shift)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    pub r: usize,
    /// 0 or 1; with 1 the coefficients are polynomials in `1/(k+1)`.
    #[serde(default)]
    pub shift: u32,
    pub terms: Vec<RecurrenceTerm>,
    /// `a_0..a_{k_start}`.
    #[serde(with = "crate::rational::pair_vec")]
    pub initial: Vec<Rational>,
    #[serde(default = "one", with = "crate::rational::pair")]
    pub radius: Rational,
    #[serde(default = "one", with = "crate::rational::pair")]
    pub bound: Rational,
}

fn one() -> Rational {
    Rational::from(1)
}

impl RecurrenceSpec {
    /// Total degree of `Q` in the `u` variables.
    pub fn d1(&self) -> u32 {
        self.terms.iter().filter(|t| t.c.iter().any(|c| *c != 0)).map(|t| t.beta.iter().sum()).max().unwrap_or(0)
    }

    /// Degree of the coefficients in `x`.
    pub fn d2(&self) -> u32 {
        self.terms.iter().filter_map(|t| t.c.iter().rposition(|c| *c != 0)).max().unwrap_or(0) as u32
    }

    pub fn l1(&self) -> Integer {
        lcm_denominators(self.terms.iter().flat_map(|t| t.c.iter()))
    }

    pub fn l2(&self) -> Integer {
        lcm_denominators(&self.initial)
    }

    /// First `k` at which the recurrence produces `a_{k+1}`.
    pub fn k_start(&self) -> usize {
        let lowest = if self.d2() > 0 && self.shift == 0 { 1 } else { 0 };
        (self.r.max(1) - 1).max(lowest)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::Invalid("recurrence length r must be positive".into()));
        }
        if self.shift > 1 {
            return Err(Error::Invalid("shift must be 0 or 1".into()));
        }
        if let Some(t) = self.terms.iter().find(|t| t.beta.len() != self.r) {
            return Err(Error::Invalid(format!("exponent vector {:?} does not have length r = {}", t.beta, self.r)));
        }
        if self.initial.len() != self.k_start() + 1 {
            return Err(Error::Invalid(format!(
                "expected {} initial terms a_0..a_{}, got {}",
                self.k_start() + 1,
                self.k_start(),
                self.initial.len()
            )));
        }
        Ok(())
    }

    fn step(&self, a: &[Rational], k: usize) -> Rational {
        // k + shift = 0 only occurs when d2 = 0, where x is never used.
        let den = k as u64 + self.shift as u64;
        let x = if den == 0 { Rational::new() } else { Rational::from((1, den)) };
        let mut next = Rational::new();
        for t in &self.terms {
            let mut p = Rational::new();
            for c in t.c.iter().rev() {
                p *= &x;
                p += c;
            }
            if p == 0 {
                continue;
            }
            for (v, &e) in t.beta.iter().enumerate() {
                if e > 0 {
                    p *= pow_u(&a[k - v], e);
                }
            }
            next += p;
        }
        next
    }
}

#[derive(Debug, Clone)]
pub struct RecurrenceOutput {
    pub series: ExactSeries,
    /// `D_k = lcm` of the reduced denominators of `a_0..a_k`, `k = 0..=K`.
    pub denominators: Vec<Integer>,
}

/// Iterates the recurrence up to `a_k` exactly.
pub fn gen_recurrence(spec: &RecurrenceSpec, k: usize) -> Result<RecurrenceOutput> {
    spec.validate()?;
    let mut a = spec.initial.clone();
    let mut kk = spec.k_start();
    while a.len() <= k {
        let next = spec.step(&a, kk);
        a.push(next);
        kk += 1;
    }
    a.truncate(k + 1);
    let mut denominators = Vec::with_capacity(a.len());
    let mut acc = Integer::from(1);
    for x in &a {
        acc.lcm_mut(x.denom());
        denominators.push(acc.clone());
    }
    let series = ExactSeries::new(a, spec.radius.clone(), spec.bound.clone())?;
    Ok(RecurrenceOutput { series, denominators })
}

/// `L2 L1^k (k!)^{d2}`, a multiple of `D_k` whenever `d1 <= 1`.
pub fn linear_envelope(spec: &RecurrenceSpec, k: usize) -> Integer {
    let fact = Integer::from(Integer::factorial(k as u32));
    spec.l2() * spec.l1().pow(k as u32) * fact.pow(spec.d2())
}

/// Upper bound on `log D_k`: `M d1^(k-r+1) k log k`.
///
/// For `r >= 3` the constant is `M = max(log L2 / ((r-1) log(r-1)), d2 + log L1 / log 2)`.
/// For `r <= 2` the first branch is undefined, so the induction is based at
/// `k0 = 2` with `log D_2 / (2 log 2)` in its place; the report says so.
pub fn denominator_bound(spec: &RecurrenceSpec, k: usize) -> Result<BoundReport> {
    spec.validate()?;
    if k < 2 || k + 1 < spec.r {
        return Err(Error::OutOfRange(format!("denominator bound needs k >= max(r - 1, 2), got k = {k}")));
    }
    let d1 = spec.d1();
    if d1 == 0 {
        return Err(Error::Invalid("the recurrence must depend on previous terms (d1 >= 1)".into()));
    }
    let d2 = spec.d2();
    let out = gen_recurrence(spec, k)?;
    let ln2 = Num::int(2).ln();
    let second = Num::int(d2 as i64).add(&Num::integer(&spec.l1()).ln().div(&ln2));
    let repaired = spec.r <= 2;
    let first = if repaired {
        let k0 = 2;
        Num::integer(&out.denominators[k0]).ln().div(&Num::int(k0 as i64).mul(&ln2))
    } else {
        let r1 = Num::int(spec.r as i64 - 1);
        Num::integer(&spec.l2()).ln().div(&r1.mul(&r1.ln()))
    };
    let m = first.max(&second);
    let e = (k + 1 - spec.r) as u32;
    let kn = Num::int(k as i64);
    let n = m.mul(&Num::integer(&Integer::from(d1).pow(e))).mul(&kn).mul(&kn.ln());
    let mut rep = finish(
        "recurrence_denominator_log",
        "M d1^(k-r+1) k log k with M = max(log L2 / ((r-1) log(r-1)), d2 + log L1 / log 2)",
        inputs([
            ("k", json!(k)),
            ("r", json!(spec.r)),
            ("d1", json!(d1)),
            ("d2", json!(d2)),
            ("L1", json!(spec.l1().to_string())),
            ("L2", json!(spec.l2().to_string())),
        ]),
        &n,
        Side::Upper,
    );
    let log_dk = Interval::from_integer(&out.denominators[k]).ln();
    let holds = if log_dk.hi <= n.iv.lo {
        json!(true)
    } else if log_dk.lo > n.iv.hi {
        json!(false)
    } else {
        json!(null)
    };
    rep.derived.insert("M".into(), json!(crate::interval::format_sig(&m.iv.hi, 20, rug::float::Round::Up)));
    rep.derived.insert("log_D_k".into(), json!(crate::interval::format_sig(&log_dk.hi, 20, rug::float::Round::Up)));
    rep.derived.insert("holds".into(), holds);
    if repaired {
        rep.derived.insert("base_repaired".into(), json!(true));
        rep.notes.push("r <= 2: induction based at k0 = 2 with log D_2 / (2 log 2) replacing the undefined first branch of M".into());
    }
    if spec.shift == 1 {
        rep.notes.push("coefficients are polynomials in 1/(k+1)".into());
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Random series

/// Coefficients drawn independently and uniformly from `[-1, 1]` as dyadic
/// rationals with 64 fractional bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub seed: u64,
    /// Highest stored order.
    pub k: usize,
    /// Forces `a_0 = 0`.
    #[serde(default)]
    pub origin_zero: bool,
}

/// `(2u + 1 - 2^64) / 2^64` for a uniform 64-bit `u`: the midpoints of the
/// `2^64` equal cells of `[-1, 1]`.
fn dyadic(u: u64) -> Rational {
    let two64 = Integer::from(1) << 64u32;
    let num = Integer::from(u) * 2u32 + 1u32 - &two64;
    Rational::from((num, two64))
}

/// The random series with `R = 1/2`, `B = 2` (the geometric bound on `D_{1/2}`).
pub fn sample_random(spec: &RandomSpec) -> ExactSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coeffs: Vec<Rational> = (0..=spec.k).map(|_| dyadic(rng.next_u64())).collect();
    if spec.origin_zero {
        coeffs[0] = Rational::new();
    }
    let f = ExactSeries::new(coeffs, Rational::from((1, 2)), Rational::from(2)).expect("positive metadata");
    if spec.origin_zero {
        f.with_origin_value_zero().expect("a_0 was zeroed")
    } else {
        f
    }
}

/// One series per seed, in seed order.
pub fn sample_batch(seeds: &[u64], k: usize, origin_zero: bool) -> Vec<ExactSeries> {
    seeds.par_iter().map(|&seed| sample_random(&RandomSpec { seed, k, origin_zero })).collect()
}
