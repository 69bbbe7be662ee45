//! Zero counts of `g(z) = P(z, f(z))` in closed discs `|z| <= r`.
//!
//! The truncation `g_N` is a polynomial with exact rational coefficients.
//! Its zeros inside `|z| = r` are counted by the winding number of sampled
//! values around the circle and cross-checked against the eigenvalues of a
//! companion matrix. The count transfers to `g` by Rouché's theorem when the
//! minimum of `|g_N|` on the circle exceeds the Cauchy bound on `|g - g_N|`.
//!
//! Contour values are computed in double precision. Every rounding effect is
//! charged to an a priori Horner error bound, and the variation between
//! samples to a Lipschitz bound, so a reported margin is a lower bound.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::bautin::{substitution_order, witness_polynomial, MonomialFamily, Multiplicity, Witness};
use crate::error::{Error, Result};
use crate::rational::pow_u;
use crate::series::{ExactSeries, PowerTable};

const MIN_PANELS: usize = 256;
const MAX_PANELS: usize = 1 << 16;
const SCHUR_SWEEPS: usize = 64;
const MAX_NUDGES: usize = 4;
/// Relative perturbation applied to witness coefficients in [`empirical_z`].
const PERTURBATION_BITS: u32 = 20;

/// `sum lambda_{i,j} z^i y^j` over the columns of a monomial family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePolynomial {
    pub family: MonomialFamily,
    /// One coefficient per entry of `family.columns()`.
    #[serde(with = "crate::rational::pair_vec")]
    pub lambda: Vec<Rational>,
}

impl CurvePolynomial {
    pub fn new(family: MonomialFamily, lambda: Vec<Rational>) -> Result<Self> {
        if lambda.len() != family.size() {
            return Err(Error::Invalid(format!(
                "family has {} monomials but {} coefficients were given",
                family.size(),
                lambda.len()
            )));
        }
        if lambda.iter().all(|l| *l == 0) {
            return Err(Error::Invalid("the zero polynomial has no finite zero count".into()));
        }
        Ok(CurvePolynomial { family, lambda })
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples.
    pub fn from_terms(family: MonomialFamily, terms: &[(usize, usize, Rational)]) -> Result<Self> {
        let cols = family.columns();
        let mut lambda = vec![Rational::new(); cols.len()];
        for (i, j, c) in terms {
            let pos = cols
                .iter()
                .position(|&(ci, cj)| ci == *i && cj == *j)
                .ok_or_else(|| Error::Invalid(format!("z^{i} y^{j} is not in the family")))?;
            lambda[pos] += c;
        }
        Self::new(family, lambda)
    }

    pub fn from_witness(w: &Witness) -> Result<Self> {
        Self::new(w.family, w.lambda.clone())
    }

    pub fn columns(&self) -> Vec<(usize, usize)> {
        self.family.columns()
    }

    /// `sum |lambda_{i,j}| R^i B^j`, a bound for `|g|` on `|z| < R`.
    pub fn sup_bound(&self, radius: &Rational, bound: &Rational) -> Rational {
        self.columns()
            .iter()
            .zip(&self.lambda)
            .filter(|(_, l)| **l != 0)
            .map(|(&(i, j), l)| l.clone().abs() * pow_u(radius, i as u32) * pow_u(bound, j as u32))
            .sum()
    }
}

/// Exact order of vanishing of `P(z, f(z))` at 0, looking at orders `0..=k`.
pub fn multiplicity_at_origin(p: &CurvePolynomial, f: &ExactSeries, k: usize) -> Result<Multiplicity> {
    substitution_order(f, &p.columns(), &p.lambda, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    RoucheCertified,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    /// Radius actually used, after any nudges.
    #[serde(with = "crate::rational::pair")]
    pub r: Rational,
    pub count: usize,
    pub certified: Certification,
    #[serde(rename = "N")]
    pub n: usize,
    /// Lower bound on `min |g_N|` over the circle minus the tail bound.
    pub margin: f64,
    pub contour_panels: usize,
    /// In-disc eigenvalue count of the companion matrix, when it was computed.
    pub companion_count: Option<usize>,
    pub nudges: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Counting options. `n0 = None` starts at `max(4 d^2, 64)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CountOptions {
    pub n0: Option<usize>,
}

/// A series together with its power table, shared across many counts.
pub struct ZeroContext<'a> {
    f: &'a ExactSeries,
    table: PowerTable,
}

impl<'a> ZeroContext<'a> {
    /// Powers up to `d` at the full stored order of `f`.
    pub fn new(f: &'a ExactSeries, d: usize) -> Result<Self> {
        let table = PowerTable::new(f, d, f.order())?;
        Ok(ZeroContext { f, table })
    }

    pub fn series(&self) -> &ExactSeries {
        self.f
    }

    /// Taylor coefficients `g_0..g_n` of `P(z, f(z))`.
    pub fn composed(&self, p: &CurvePolynomial, n: usize) -> Result<Vec<Rational>> {
        self.table.require(p.family.degree, n)?;
        let mut g = vec![Rational::new(); n + 1];
        for (&(i, j), l) in p.columns().iter().zip(&p.lambda) {
            if *l == 0 {
                continue;
            }
            for (k, gk) in g.iter_mut().enumerate().skip(i) {
                let a = self.table.get(k - i, j);
                if *a != 0 {
                    *gk += Rational::from(l * a);
                }
            }
        }
        Ok(g)
    }

    pub fn count(&self, p: &CurvePolynomial, r: &Rational, opts: CountOptions) -> Result<ZeroCount> {
        count_with(self, p, r, opts)
    }
}

/// Upward-rounded conversion (one ulp of slack covers the nearest rounding).
fn up(q: &Rational) -> f64 {
    let x = q.to_f64();
    x + x.abs() * f64::EPSILON + f64::MIN_POSITIVE
}

enum Contour {
    /// Winding number and lower bound on `min |g_N|` over the circle.
    Resolved { winding: i64, min_lower: f64, panels: usize },
    /// No panel count separated the values from zero: a root lies on or near the circle.
    NearRoot,
}

/// Winding number of `h(theta) = sum c_k e^{i k theta}` around 0.
fn contour(c: &[f64]) -> Contour {
    let n = c.len();
    let s: f64 = c.iter().map(|x| x.abs()).sum();
    let lip: f64 = c.iter().enumerate().map(|(k, x)| k as f64 * x.abs()).sum();
    // Horner in complex double precision: a generous multiple of the
    // standard bound gamma_{2n} sum |c_k|, plus the error of e^{i theta}.
    let err = (8.0 * (n as f64 + 4.0) * f64::EPSILON) * (s + lip);
    let mut panels = MIN_PANELS;
    let mut last: Option<i64> = None;
    while panels <= MAX_PANELS {
        let dtheta = 2.0 * PI / panels as f64;
        let vals: Vec<(f64, f64)> = (0..panels)
            .map(|t| {
                let (sn, cs) = (dtheta * t as f64).sin_cos();
                let (mut re, mut im) = (0.0, 0.0);
                for x in c.iter().rev() {
                    let nre = re * cs - im * sn + x;
                    im = re * sn + im * cs;
                    re = nre;
                }
                (re, im)
            })
            .collect();
        let mods: Vec<f64> = vals.iter().map(|(a, b)| a.hypot(*b)).collect();
        let min_sample = mods.iter().cloned().fold(f64::INFINITY, f64::min);
        // Each arc image stays within lip * dtheta of its left endpoint.
        let separated = mods.iter().all(|&m| lip * dtheta + 2.0 * err < m);
        if separated {
            let mut total = 0.0;
            for t in 0..panels {
                let (a, b) = vals[t];
                let (x, y) = vals[(t + 1) % panels];
                total += (a * y - b * x).atan2(a * x + b * y);
            }
            let winding = (total / (2.0 * PI)).round() as i64;
            let min_lower = min_sample - err - lip * dtheta / 2.0;
            if last == Some(winding) {
                return Contour::Resolved { winding, min_lower, panels };
            }
            last = Some(winding);
        }
        panels *= 2;
    }
    Contour::NearRoot
}

/// Number of eigenvalues of the companion matrix inside the unit disc, plus
/// the multiplicity of the root at 0. Trailing coefficients whose total is
/// below `drop_budget` are discarded first (Rouché keeps the count).
/// `None` when the Schur iteration does not converge.
fn companion_count(c: &[f64], drop_budget: f64) -> Option<usize> {
    let low = c.iter().position(|x| *x != 0.0)?;
    let mut high = c.iter().rposition(|x| *x != 0.0)?;
    let mut dropped = 0.0;
    while high > low && dropped + c[high].abs() < drop_budget {
        dropped += c[high].abs();
        high -= 1;
    }
    let deg = high - low;
    if deg == 0 {
        return Some(low);
    }
    let lead = c[high];
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[low + i] / lead;
    }
    if m.iter().any(|x| !x.is_finite()) {
        return None;
    }
    // The default Schur iteration is unbounded and can cycle on companion matrices.
    let eig = Schur::try_new(m, f64::EPSILON, SCHUR_SWEEPS * deg)?.complex_eigenvalues();
    Some(low + eig.iter().filter(|z| z.norm() < 1.0).count())
}

fn count_with(ctx: &ZeroContext<'_>, p: &CurvePolynomial, r0: &Rational, opts: CountOptions) -> Result<ZeroCount> {
    let f = ctx.f;
    let d = p.family.degree;
    let cap = ctx.table.order();
    let radius = f.radius();
    if *r0 <= 0 || r0 >= radius {
        return Err(Error::RadiusOutOfRange { r: r0.to_string(), radius: radius.to_string() });
    }
    let n0 = opts.n0.unwrap_or((4 * d * d).max(64)).min(cap);
    let g_all = ctx.composed(p, cap)?;
    if g_all.iter().all(|x| *x == 0) {
        return Err(Error::TruncationTooShort { need: cap + 2, have: cap + 1 });
    }
    let sup = p.sup_bound(radius, f.bound());
    let mut r = r0.clone();
    let mut best: Option<ZeroCount> = None;
    for nudge in 0..=MAX_NUDGES {
        let ratio = Rational::from(&r / radius);
        let mut n = n0;
        let mut near_root = false;
        loop {
            let tail = sup.clone() * pow_u(&ratio, n as u32 + 1) / (Rational::from(1) - &ratio);
            let tail_up = up(&tail);
            let mut rk = Rational::from(1);
            let c: Vec<f64> = g_all[..=n]
                .iter()
                .map(|g| {
                    let v = Rational::from(g * &rk).to_f64();
                    rk *= &r;
                    v
                })
                .collect();
            match contour(&c) {
                Contour::NearRoot => {
                    near_root = true;
                    break;
                }
                Contour::Resolved { winding, min_lower, panels } => {
                    let margin = min_lower - tail_up;
                    let count = winding.max(0) as usize;
                    let comp = if min_lower > 0.0 { companion_count(&c, min_lower / 2.0) } else { None };
                    let mut notes = Vec::new();
                    let mut certified = if margin > 0.0 && winding >= 0 {
                        Certification::RoucheCertified
                    } else {
                        Certification::Heuristic
                    };
                    if comp != Some(count) {
                        certified = Certification::Heuristic;
                        notes.push(format!("companion matrix count {comp:?} differs from winding number {winding}"));
                    }
                    if nudge > 0 {
                        notes.push(format!("radius nudged {nudge} time(s) by r/128 to avoid a zero on the contour"));
                    }
                    let zc = ZeroCount {
                        r: r.clone(),
                        count,
                        certified,
                        n,
                        margin,
                        contour_panels: panels,
                        companion_count: comp,
                        nudges: nudge,
                        notes,
                    };
                    if certified == Certification::RoucheCertified {
                        return Ok(zc);
                    }
                    best = Some(zc);
                    if n >= cap {
                        break;
                    }
                    n = (2 * n).min(cap);
                }
            }
        }
        if !near_root {
            break;
        }
        r -= Rational::from(&r / 128u32);
    }
    best.ok_or_else(|| Error::PrecisionInsufficient("a zero stays on the contour after every nudge".into()))
}

/// Zero count in the closed disc `|z| <= r`.
pub fn count_zeros_disc(p: &CurvePolynomial, f: &ExactSeries, r: &Rational, opts: CountOptions) -> Result<ZeroCount> {
    ZeroContext::new(f, p.family.degree)?.count(p, r, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalZ {
    /// Largest certified count: a lower estimate of the supremum over all `P`.
    pub value: usize,
    pub certified: usize,
    pub attempted: usize,
    pub best: Option<CurvePolynomial>,
}

fn random_lambda(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m)
        .map(|_| {
            // Dyadic uniform on [-1, 1] with 32 fractional bits.
            let u = rng.next_u32() as i64;
            Rational::from((2 * u + 1 - (1i64 << 32), 1i64 << 32))
        })
        .collect()
}

/// The polynomials examined by [`empirical_z`]: the witness of the square
/// family, its coordinate perturbations by `2^-20`, then `trials` random draws.
pub fn candidate_polynomials(f: &ExactSeries, d: usize, trials: usize, seed: u64) -> Vec<CurvePolynomial> {
    let family = MonomialFamily::square(d);
    let mut out = Vec::new();
    if let Ok(w) = witness_polynomial(f, &family, family.default_k_max().min(f.order())) {
        if let Ok(p) = CurvePolynomial::from_witness(&w) {
            let eps = Rational::from((1, 1u64 << PERTURBATION_BITS));
            for t in 0..p.lambda.len() {
                let mut l = p.lambda.clone();
                l[t] += &eps;
                if let Ok(q) = CurvePolynomial::new(family, l) {
                    out.push(q);
                }
            }
            out.insert(0, p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        if let Ok(p) = CurvePolynomial::new(family, random_lambda(&mut rng, family.size())) {
            out.push(p);
        }
    }
    out
}

/// Running maximum of certified counts over [`candidate_polynomials`].
pub fn empirical_z(f: &ExactSeries, d: usize, trials: usize, r: &Rational, seed: u64) -> Result<EmpiricalZ> {
    let ctx = ZeroContext::new(f, d)?;
    let cands = candidate_polynomials(f, d, trials, seed);
    let counts: Vec<Option<usize>> = cands
        .par_iter()
        .map(|p| match ctx.count(p, r, CountOptions::default()) {
            Ok(z) if z.certified == Certification::RoucheCertified && z.r == *r => Some(z.count),
            _ => None,
        })
        .collect();
    let mut best: Option<(usize, usize)> = None;
    for (idx, c) in counts.iter().enumerate() {
        if let Some(c) = c {
            if best.is_none_or(|(b, _)| *c > b) {
                best = Some((*c, idx));
            }
        }
    }
    Ok(EmpiricalZ {
        value: best.map_or(0, |b| b.0),
        certified: counts.iter().filter(|c| c.is_some()).count(),
        attempted: cands.len(),
        best: best.map(|(_, idx)| cands[idx].clone()),
    })
}
