//! Bautin multiplicity: the vanishing order at `u = 0` of the Bautin
//! determinant of `f` re-expanded at the base point `u`.
//!
//! The recentered table uses `f(u+w) - f(u)`, so every entry is built from
//! `a_1(u), a_2(u), ...` only, and the determinant is the same integer
//! polynomial in those coefficients as at the origin. The determinant is
//! taken over `Q[u]` with entries truncated at `u^K_u`; truncating the
//! result again at `u^K_u` gives the exact low-order coefficients.

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::bareiss;
use crate::series::{ExactSeries, RecenteredTable};
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MultiplicityOutcome {
    /// `Delta_d(u) = alpha u^eta + O(u^(eta+1))`.
    Finite {
        eta: usize,
        #[serde(with = "crate::rational::pair")]
        alpha: Rational,
    },
    /// All coefficients through `u^k_u` vanish. Identically zero and large
    /// multiplicity cannot be told apart at finite truncation.
    ExceedsKu { k_u: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub d: usize,
    pub outcome: MultiplicityOutcome,
    pub k_u: usize,
    pub k_u_cap: usize,
    /// Coefficients of `Delta_d(u)` through `u^k_u`.
    #[serde(with = "crate::rational::pair_vec")]
    pub delta_series: Vec<Rational>,
}

/// Truncated `Delta_d(u)` with `K_u` fixed.
pub fn recentered_determinant(f: &ExactSeries, d: usize, k_u: usize) -> Result<UPoly> {
    let b = d * d + 2 * d;
    let table = RecenteredTable::new(f, d, b, k_u, true)?;
    let m: Vec<Vec<UPoly>> = (d + 1..=b)
        .map(|k| {
            let mut row = Vec::with_capacity(d * (d + 1));
            for j in 1..=d {
                for i in 0..=d {
                    row.push(table.get(k - i, j).clone());
                }
            }
            row
        })
        .collect();
    Ok(bareiss(m).truncate(k_u))
}

/// `eta_d` read off a single truncation order `K_u`.
pub fn bautin_multiplicity_at(f: &ExactSeries, d: usize, k_u: usize) -> Result<MultiplicityReport> {
    if d == 0 {
        return Err(Error::Invalid("the Bautin determinant needs d >= 1".into()));
    }
    let det = recentered_determinant(f, d, k_u)?;
    Ok(report(d, &det, k_u, k_u))
}

fn report(d: usize, det: &UPoly, k_u: usize, cap: usize) -> MultiplicityReport {
    let delta_series: Vec<Rational> = (0..=k_u).map(|i| det.coeff(i)).collect();
    let outcome = match det.order() {
        Some(eta) => MultiplicityOutcome::Finite { eta, alpha: det.coeff(eta) },
        None => MultiplicityOutcome::ExceedsKu { k_u },
    };
    MultiplicityReport { d, outcome, k_u, k_u_cap: cap, delta_series }
}

/// `eta_d` starting from `K_u = d^2 + 2d` and doubling on a vanishing
/// truncation, up to `k_u_cap` and the order the series supports.
pub fn bautin_multiplicity(f: &ExactSeries, d: usize, k_u_cap: Option<usize>) -> Result<MultiplicityReport> {
    if d == 0 {
        return Err(Error::Invalid("the Bautin determinant needs d >= 1".into()));
    }
    let b = d * d + 2 * d;
    let start = b;
    f.require_order(b + start)?;
    let supported = f.order() - b;
    let cap = k_u_cap.unwrap_or(8 * b).min(supported).max(start);
    let mut k_u = start;
    loop {
        let det = recentered_determinant(f, d, k_u)?;
        if !det.is_zero() || k_u >= cap {
            return Ok(report(d, &det, k_u, cap));
        }
        k_u = (2 * k_u).min(cap);
    }
}
