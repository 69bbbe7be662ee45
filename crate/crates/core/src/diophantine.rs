//! Rational points of bounded height on the graph of `f` over `[-1/4, 1/4]`.
//!
//! Non-membership is proven: for each `x` of height at most `T`, `f_N(x)` is
//! evaluated exactly and widened by the Cauchy tail at radius `1/4`; if that
//! interval holds no rational of height at most `T` the abscissa is excluded.
//! Membership is only proven where `f(x)` is known exactly, which is `x = 0`.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::lcm_denominators;
use crate::series::{tail_bound, ExactSeries};

/// `max(|numerator|, denominator)` of the reduced form.
pub fn height(x: &Rational) -> Integer {
    let n = x.numer().clone().abs();
    if n > *x.denom() {
        n
    } else {
        x.denom().clone()
    }
}

/// Height of a tuple: the largest coordinate height.
pub fn height_point(xs: &[Rational]) -> Integer {
    xs.iter().map(height).max().unwrap_or_else(|| Integer::from(1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPoint {
    #[serde(with = "crate::rational::pair")]
    pub x: Rational,
    #[serde(with = "crate::rational::pair")]
    pub y: Rational,
    pub height: String,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        let height = height_point(&[x.clone(), y.clone()]).to_string();
        RationalPoint { x, y, height }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unresolved {
    #[serde(with = "crate::rational::pair")]
    pub x: Rational,
    /// The unique rational of height at most `T` the enclosure could not exclude.
    #[serde(with = "crate::rational::pair")]
    pub y: Rational,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Certified,
    Excluded,
    Unresolved,
}

/// Per-abscissa outcome, as emitted in CSV form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(with = "crate::rational::pair")]
    pub x: Rational,
    pub status: PointStatus,
    #[serde(default, with = "crate::rational::pair_opt")]
    pub y: Option<Rational>,
    /// Tail bound at `|x|`; every excluded `y` lies farther than this from `f_N(x)`.
    pub radius: f64,
    /// Truncation order behind the row's verdict.
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "N")]
    pub n: usize,
    /// Tail bound at radius 1/4, below `1 / (2 T^2)`.
    #[serde(with = "crate::rational::pair")]
    pub tail: Rational,
    pub enumerated: usize,
    pub certified: Vec<RationalPoint>,
    pub excluded: usize,
    pub unresolved: Vec<Unresolved>,
    #[serde(skip)]
    pub rows: Vec<ScanRow>,
}

/// Abscissae `a/b` in `[0, 1/4]` with `b <= t`, ascending (Farey successor rule).
pub fn farey_quarter(t: u64) -> Vec<(u64, u64)> {
    let t = t.max(1);
    let mut out = vec![(0, 1)];
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, t);
    // c/d <= 1/4  <=>  4c <= d
    while 4 * c <= d {
        out.push((c, d));
        let k = (t + b) / d;
        let (nc, nd) = (k * c - a, k * d - b);
        (a, b, c, d) = (c, d, nc, nd);
    }
    out
}

/// The rational of least denominator in `[lo, hi]`, or `None` when every
/// rational there has denominator above `max_den`.
fn simplest_in(lo: &Rational, hi: &Rational, max_den: &Integer) -> Option<Rational> {
    if *lo <= 0 && *hi >= 0 {
        return Some(Rational::new());
    }
    if *hi < 0 {
        return simplest_in(&Rational::from(-hi), &Rational::from(-lo), max_den).map(|q| -q);
    }
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let (mut h1, mut h2) = (Integer::from(1), Integer::new());
    let (mut k1, mut k2) = (Integer::new(), Integer::from(1));
    loop {
        let fl = lo.clone().floor().numer().clone();
        let (term, done) = if *lo.denom() == 1 {
            (fl, true)
        } else if Rational::from(&fl + 1u32) <= hi {
            (fl + 1u32, true)
        } else {
            (fl, false)
        };
        let h = Integer::from(&term * &h1) + &h2;
        let k = Integer::from(&term * &k1) + &k2;
        if k > *max_den {
            return None;
        }
        if done {
            return Some(Rational::from((h, k)));
        }
        (h2, h1, k2, k1) = (h1, h, k1, k);
        let nlo = Rational::from(&hi - &term).recip();
        let nhi = Rational::from(&lo - &term).recip();
        (lo, hi) = (nlo, nhi);
    }
}

/// Smallest `N` with `tail_bound(f, N, 1/4) < 1 / (2 T^2)`, if the stored order allows it.
pub fn separation_order(f: &ExactSeries, t: u64) -> Result<usize> {
    let quarter = Rational::from((1, 4));
    let target = Rational::from((1, 2 * Integer::from(t) * t));
    for n in 0..=f.order() {
        if tail_bound(f, n, &quarter)? < target {
            return Ok(n);
        }
    }
    Err(Error::PrecisionInsufficient(format!(
        "no truncation order up to {} separates rationals of height {t}",
        f.order()
    )))
}

/// Scans every `x` of height at most `T` in `[-1/4, 1/4]` using `f_N`.
pub fn scan_graph_points(f: &ExactSeries, t: u64, n: usize) -> Result<ScanReport> {
    if t == 0 {
        return Err(Error::Invalid("height bound T must be positive".into()));
    }
    f.require_order(n)?;
    let quarter = Rational::from((1, 4));
    let tail = tail_bound(f, n, &quarter)?;
    let target = Rational::from((1, 2 * Integer::from(t) * t));
    if tail >= target {
        return Err(Error::PrecisionInsufficient(format!(
            "tail bound at order {n} does not reach the separation 1/(2 T^2)"
        )));
    }
    let max_h = Integer::from(t);
    let a0 = f.coeff(0).clone();
    // Orders tried per abscissa: the first one that separates, doubling up to n.
    let mut first = n;
    for m in 0..n {
        if tail_bound(f, m, &quarter)? < target {
            first = m;
            break;
        }
    }
    let mut levels = vec![first.max(1).min(n)];
    while *levels.last().expect("nonempty") < n {
        let next = (levels.last().expect("nonempty") * 2).min(n);
        levels.push(next);
    }
    let level_ints: Vec<(Integer, Vec<Integer>)> = levels
        .iter()
        .map(|&m| {
            // f_m(a/b) = sum c_k a^k b^(m-k) / (D b^m) with integers c_k = D a_k.
            let coeffs = &f.coeffs()[..=m];
            let den = lcm_denominators(coeffs);
            let ints = coeffs.iter().map(|q| Integer::from(q.numer() * Integer::from(&den / q.denom()))).collect();
            (den, ints)
        })
        .collect();

    let xs: Vec<(i64, u64)> = {
        let quarter_pts = farey_quarter(t);
        let mut v: Vec<(i64, u64)> = quarter_pts.iter().rev().filter(|p| p.0 > 0).map(|&(a, b)| (-(a as i64), b)).collect();
        v.extend(quarter_pts.iter().map(|&(a, b)| (a as i64, b)));
        v
    };
    let rows: Vec<ScanRow> = xs
        .par_iter()
        .map(|&(a, b)| {
            let x = Rational::from((a, b));
            if a == 0 {
                let y = a0.clone();
                let status = if height(&y) <= max_h { PointStatus::Certified } else { PointStatus::Excluded };
                return Ok(ScanRow { x, status, y: (status == PointStatus::Certified).then_some(y), radius: 0.0, n: 0 });
            }
            let (ai, bi) = (Integer::from(a), Integer::from(b));
            let abs_x = Rational::from(x.abs_ref());
            let mut row = None;
            for (&m, (den, ints)) in levels.iter().zip(&level_ints) {
                let mut acc = Integer::new();
                let mut bpow = Integer::from(1);
                for c in ints.iter().rev() {
                    acc *= &ai;
                    acc += Integer::from(c * &bpow);
                    bpow *= &bi;
                }
                // acc / (den * b^m); bpow is now b^(m+1).
                let y0 = Rational::from((acc, Integer::from(den * (bpow / &bi))));
                // |x| <= 1/4, so this never exceeds the tail at 1/4.
                let t_x = tail_bound(f, m, &abs_x)?;
                let radius = t_x.to_f64();
                let lo = Rational::from(&y0 - &t_x);
                let hi = Rational::from(&y0 + &t_x);
                match simplest_in(&lo, &hi, &max_h) {
                    Some(y) if y.numer().clone().abs() <= max_h => {
                        row = Some(ScanRow { x: x.clone(), status: PointStatus::Unresolved, y: Some(y), radius, n: m });
                    }
                    _ => return Ok(ScanRow { x, status: PointStatus::Excluded, y: None, radius, n: m }),
                }
            }
            Ok(row.expect("at least one level"))
        })
        .collect::<Result<_>>()?;
    let mut certified = Vec::new();
    let mut unresolved = Vec::new();
    let mut excluded = 0;
    for row in &rows {
        match row.status {
            PointStatus::Certified => certified.push(RationalPoint::new(row.x.clone(), row.y.clone().expect("certified"))),
            PointStatus::Unresolved => unresolved.push(Unresolved {
                x: row.x.clone(),
                y: row.y.clone().expect("candidate"),
                width: 2.0 * row.radius,
            }),
            PointStatus::Excluded => excluded += 1,
        }
    }
    Ok(ScanReport { t, n, tail, enumerated: rows.len(), certified, excluded, unresolved, rows })
}

/// Least-squares fit of `log count = log beta + alpha log log T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogPowerFit {
    pub alpha: f64,
    pub beta: f64,
    pub max_residual: f64,
}

pub fn fit_log_power(counts: &[(f64, f64)]) -> Result<LogPowerFit> {
    let mut ts: Vec<f64> = counts.iter().map(|c| c.0).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    if ts.len() < 3 {
        return Err(Error::Invalid("the fit needs at least three distinct T".into()));
    }
    if counts.iter().any(|&(t, c)| t <= std::f64::consts::E || c < 1.0) {
        return Err(Error::Invalid("the fit needs T > e and counts >= 1".into()));
    }
    let pts: Vec<(f64, f64)> = counts.iter().map(|&(t, c)| (t.ln().ln(), c.ln())).collect();
    if counts.iter().all(|c| c.1 == counts[0].1) {
        return Ok(LogPowerFit { alpha: 0.0, beta: counts[0].1, max_residual: 0.0 });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let alpha = sxy / sxx;
    let ln_beta = my - alpha * mx;
    let max_residual = pts.iter().map(|p| (p.1 - ln_beta - alpha * p.0).abs()).fold(0.0, f64::max);
    Ok(LogPowerFit { alpha, beta: ln_beta.exp(), max_residual })
}
