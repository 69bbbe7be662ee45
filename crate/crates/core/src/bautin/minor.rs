//! Largest nonzero `sigma x sigma` minors.
//!
//! Exhaustive mode enumerates every row (and, when `sigma` is below the
//! column count, every column) subset and returns the maximum absolute
//! determinant; ties go to the lexicographically smallest row set, then
//! column set. Heuristic mode picks rows and columns by complete pivoting
//! and then improves the row set with exact max-volume swaps; its value is
//! a nonzero minor, not necessarily the largest.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::{Complete, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;

pub const DEFAULT_BUDGET: u128 = 1_000_000;
const MAX_SWAPS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinorMode {
    ExhaustiveMax,
    HeuristicNonzero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorResult {
    /// Absolute value of the minor.
    #[serde(with = "crate::rational::pair")]
    pub value: Rational,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub mode: MinorMode,
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of determinants the exhaustive search would evaluate.
pub fn exhaustive_cost(rows: usize, cols: usize, sigma: usize) -> u128 {
    binom(rows, sigma).saturating_mul(binom(cols, sigma))
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
fn unrank_subset(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for slot in 0..k {
        let mut x = start;
        loop {
            let c = binom(n - x - 1, k - slot - 1);
            if rank < c {
                break;
            }
            rank -= c;
            x += 1;
        }
        out.push(x);
        start = x + 1;
    }
    out
}

/// Largest (or some) nonzero `sigma x sigma` minor of `m`.
///
/// `mode` is a request: exhaustive search is used only when its cost is
/// within `budget`, otherwise the heuristic runs and the result is labeled
/// accordingly.
pub fn max_nonzero_minor(m: &QMatrix, sigma: usize, mode: MinorMode, budget: u128) -> Result<MinorResult> {
    let rank = m.rank();
    if rank < sigma || sigma == 0 {
        return Err(Error::RankDeficient { rank, size: sigma });
    }
    let cost = exhaustive_cost(m.nrows(), m.ncols(), sigma);
    if mode == MinorMode::ExhaustiveMax && cost <= budget {
        Ok(exhaustive(m, sigma))
    } else {
        Ok(heuristic(m, sigma))
    }
}

fn exhaustive(m: &QMatrix, sigma: usize) -> MinorResult {
    let nr = binom(m.nrows(), sigma);
    let nc = binom(m.ncols(), sigma);
    let best = (0..nr * nc)
        .into_par_iter()
        .filter_map(|idx| {
            let rows = unrank_subset(m.nrows(), sigma, idx / nc);
            let cols = unrank_subset(m.ncols(), sigma, idx % nc);
            let det = m.submatrix(&rows, &cols).determinant().abs();
            (det != 0).then_some((det, rows, cols))
        })
        .reduce_with(|a, b| match a.0.cmp(&b.0) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => {
                if (&a.1, &a.2) <= (&b.1, &b.2) {
                    a
                } else {
                    b
                }
            }
        })
        .expect("rank >= sigma guarantees a nonzero minor");
    MinorResult { value: best.0, rows: best.1, cols: best.2, mode: MinorMode::ExhaustiveMax }
}

fn heuristic(m: &QMatrix, sigma: usize) -> MinorResult {
    let (mut rows, mut cols) = complete_pivoting(m, sigma);
    cols.sort_unstable();
    let all_cols = m.submatrix(&(0..m.nrows()).collect::<Vec<_>>(), &cols);
    for _ in 0..MAX_SWAPS {
        let sub = all_cols.submatrix(&rows, &(0..sigma).collect::<Vec<_>>());
        let inv = sub.inverse().expect("pivoted rows are independent");
        // Coefficients of each row in the basis of the selected rows; a swap
        // with |coefficient| > 1 strictly increases the volume.
        let mut best: Option<(Rational, usize, usize)> = None;
        for r in (0..m.nrows()).filter(|r| !rows.contains(r)) {
            let row = all_cols.row(r);
            for t in 0..sigma {
                let mut c = Rational::new();
                for (s, x) in row.iter().enumerate() {
                    if *x != 0 {
                        c += (x * inv.get(s, t)).complete();
                    }
                }
                let c = c.abs();
                if c > 1 && best.as_ref().is_none_or(|b| c > b.0) {
                    best = Some((c, r, t));
                }
            }
        }
        match best {
            Some((_, r, t)) => rows[t] = r,
            None => break,
        }
    }
    rows.sort_unstable();
    let value = m.submatrix(&rows, &cols).determinant().abs();
    MinorResult { value, rows, cols, mode: MinorMode::HeuristicNonzero }
}

/// Row and column indices chosen by Gaussian elimination with complete pivoting.
fn complete_pivoting(m: &QMatrix, sigma: usize) -> (Vec<usize>, Vec<usize>) {
    let mut a = m.to_rows();
    let mut row_ids: Vec<usize> = (0..m.nrows()).collect();
    let mut col_ids: Vec<usize> = (0..m.ncols()).collect();
    for k in 0..sigma {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if *x == 0 {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.cmp_abs(&a[bi][bj]) == Ordering::Greater) {
                    best = Some((i, j));
                }
            }
        }
        let (pi, pj) = best.expect("rank >= sigma");
        a.swap(k, pi);
        row_ids.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        col_ids.swap(k, pj);
        let (top, bottom) = a.split_at_mut(k + 1);
        let piv = &top[k];
        for row in bottom.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = (&row[k] / &piv[k]).complete();
            for j in k..row.len() {
                let t = (&f * &piv[j]).complete();
                row[j] -= t;
            }
        }
    }
    (row_ids[..sigma].to_vec(), col_ids[..sigma].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bautin::{build_bautin_matrix, MonomialFamily};
    use crate::series::{ExactSeries, PowerTable};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn unrank_is_lexicographic() {
        let all: Vec<_> = (0..binom(5, 3)).map(|r| unrank_subset(5, 3, r)).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exp_full_minor() {
        let f = ExactSeries::exp_minus_one(5);
        let t = PowerTable::new(&f, 1, 3).unwrap();
        let m = build_bautin_matrix(&t, &MonomialFamily::square(1), 3).unwrap().to_qmatrix();
        let r = max_nonzero_minor(&m, 4, MinorMode::ExhaustiveMax, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, q(1, 12));
        assert_eq!(r.rows, vec![0, 1, 2, 3]);
        assert_eq!(r.mode, MinorMode::ExhaustiveMax);
    }

    #[test]
    fn identity_rank_three() {
        let f = ExactSeries::identity(5);
        let t = PowerTable::new(&f, 1, 3).unwrap();
        let m = build_bautin_matrix(&t, &MonomialFamily::square(1), 3).unwrap().to_qmatrix();
        assert!(matches!(
            max_nonzero_minor(&m, 4, MinorMode::ExhaustiveMax, DEFAULT_BUDGET),
            Err(Error::RankDeficient { rank: 3, size: 4 })
        ));
        let sub = m.submatrix(&[0, 1, 2], &[0, 1, 3]);
        let r = max_nonzero_minor(&sub, 3, MinorMode::ExhaustiveMax, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, q(1, 1));
    }

    #[test]
    fn budget_forces_heuristic() {
        let m = QMatrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(4, 1)], vec![q(5, 1), q(1, 1)]]);
        let r = max_nonzero_minor(&m, 2, MinorMode::ExhaustiveMax, 0).unwrap();
        assert_eq!(r.mode, MinorMode::HeuristicNonzero);
        assert!(r.value > 0);
    }

    fn matrix_strategy() -> impl Strategy<Value = QMatrix> {
        (2usize..6, 1usize..4).prop_flat_map(|(r, c)| {
            let c = c.min(r);
            proptest::collection::vec((-5i64..6, 1i64..4), r * c).prop_map(move |v| {
                QMatrix::from_rows(v.chunks(c).map(|ch| ch.iter().map(|&(a, b)| q(a, b)).collect()).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn heuristic_never_beats_exhaustive(m in matrix_strategy()) {
            let rank = m.rank();
            prop_assume!(rank > 0);
            let e = max_nonzero_minor(&m, rank, MinorMode::ExhaustiveMax, DEFAULT_BUDGET).unwrap();
            let h = max_nonzero_minor(&m, rank, MinorMode::HeuristicNonzero, DEFAULT_BUDGET).unwrap();
            prop_assert!(h.value > 0);
            prop_assert!(h.value <= e.value);
            prop_assert_eq!(m.submatrix(&e.rows, &e.cols).determinant().abs(), e.value);
        }
    }
}
