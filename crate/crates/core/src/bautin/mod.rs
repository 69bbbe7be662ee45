//! Bautin matrices of monomial families, the Bautin and transcendence
//! indices, the Bautin determinant and multiplicity-witness polynomials.
//!
//! Row `k` of the Bautin matrix holds the coefficients of the linear form
//! `v_k(lambda)`, the `k`-th Taylor coefficient of `sum lambda_{j,i} z^i f^j`.
//! Entry `(k, (i, j))` is therefore `a^j_{k-i}`, the coefficient of
//! `z^(k-i)` in `f^j`.

pub mod minor;
pub mod multiplicity;
pub mod symbolic;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{IncrementalEchelon, QMatrix};
use crate::series::{mul_truncated, ExactSeries, PowerTable};

pub use minor::{max_nonzero_minor, MinorMode, MinorResult};
pub use multiplicity::{bautin_multiplicity, bautin_multiplicity_at, MultiplicityOutcome, MultiplicityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `z^i y^j` with `0 <= i, j <= d`.
    Square,
    /// `z^i y^j` with `i + j <= d`.
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialFamily {
    pub kind: FamilyKind,
    pub degree: usize,
}

impl MonomialFamily {
    pub fn square(d: usize) -> Self {
        MonomialFamily { kind: FamilyKind::Square, degree: d }
    }

    pub fn total(d: usize) -> Self {
        MonomialFamily { kind: FamilyKind::Total, degree: d }
    }

    /// Column labels `(i, j)` for `z^i y^j`, grouped by `j` then ordered by `i`.
    pub fn columns(&self) -> Vec<(usize, usize)> {
        let d = self.degree;
        let mut out = Vec::with_capacity(self.size());
        for j in 0..=d {
            let imax = match self.kind {
                FamilyKind::Square => d,
                FamilyKind::Total => d - j,
            };
            for i in 0..=imax {
                out.push((i, j));
            }
        }
        out
    }

    /// Parameter count `m`.
    pub fn size(&self) -> usize {
        let d = self.degree;
        match self.kind {
            FamilyKind::Square => (d + 1) * (d + 1),
            FamilyKind::Total => (d + 1) * (d + 2) / 2,
        }
    }

    /// Rank-stall cutoff used when none is given.
    pub fn default_k_max(&self) -> usize {
        4 * self.size()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BautinMatrix {
    pub family: MonomialFamily,
    pub columns: Vec<(usize, usize)>,
    #[serde(with = "crate::rational::pair_mat")]
    pub rows: Vec<Vec<Rational>>,
}

impl BautinMatrix {
    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_rows(self.rows.clone())
    }
}

fn bautin_row(table: &PowerTable, cols: &[(usize, usize)], k: usize) -> Vec<Rational> {
    cols.iter()
        .map(|&(i, j)| if i > k { Rational::new() } else { table.get(k - i, j).clone() })
        .collect()
}

/// Rows `0..=k` of the Bautin matrix of `family`.
pub fn build_bautin_matrix(table: &PowerTable, family: &MonomialFamily, k: usize) -> Result<BautinMatrix> {
    table.require(family.degree, k)?;
    let columns = family.columns();
    let rows = (0..=k).map(|r| bautin_row(table, &columns, r)).collect();
    Ok(BautinMatrix { family: *family, columns, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IndexOutcome {
    /// Rank reached `m` first at row `b`.
    Finite { b: usize },
    /// Rank stayed below `m` through row `k_max`; the kernel of `M_{k_max}`
    /// is evidence of an algebraic relation up to that order.
    Stalled {
        k_max: usize,
        #[serde(with = "crate::rational::pair_mat")]
        kernel: Vec<Vec<Rational>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BautinReport {
    pub family: MonomialFamily,
    pub m: usize,
    pub outcome: IndexOutcome,
    /// `(k, rank M_k)` for every row examined.
    pub rank_trace: Vec<(usize, usize)>,
    pub sigma: usize,
}

impl BautinReport {
    pub fn index(&self) -> Option<usize> {
        match self.outcome {
            IndexOutcome::Finite { b } => Some(b),
            IndexOutcome::Stalled { .. } => None,
        }
    }
}

/// Bautin index of `family` for `f`: the first `k` with `rank M_k = m`.
///
/// Rows are added one at a time, so a series only needs coefficients up to
/// the row where the rank saturates. Running out of stored coefficients
/// before either saturation or `k_max` is a truncation error.
pub fn bautin_index(f: &ExactSeries, family: &MonomialFamily, k_max: usize) -> Result<BautinReport> {
    let m = family.size();
    let columns = family.columns();
    let have = f.order().min(k_max);
    let table = PowerTable::new(f, family.degree, have)?;
    let mut ech = IncrementalEchelon::new(m);
    let mut trace = Vec::new();
    for k in 0..=have {
        ech.push_row(&bautin_row(&table, &columns, k));
        trace.push((k, ech.rank()));
        if ech.rank() == m {
            return Ok(BautinReport {
                family: *family,
                m,
                outcome: IndexOutcome::Finite { b: k },
                rank_trace: trace,
                sigma: m,
            });
        }
    }
    if have < k_max {
        return Err(Error::TruncationTooShort { need: k_max + 1, have: f.order() + 1 });
    }
    Ok(BautinReport {
        family: *family,
        m,
        outcome: IndexOutcome::Stalled { k_max, kernel: ech.kernel() },
        rank_trace: trace,
        sigma: ech.rank(),
    })
}

/// `nu_d`: the Bautin index of the total-degree family.
pub fn transcendence_index(f: &ExactSeries, d: usize, k_max: usize) -> Result<BautinReport> {
    bautin_index(f, &MonomialFamily::total(d), k_max)
}

/// Rows `k = d+1..=b`, columns `(j, i)` for `j = 1..=d`, `i = 0..=d`, with
/// entry `a^j_{k-i}`. Square of size `d^2 + d` when `b = d^2 + 2d`.
pub fn tilde_matrix(table: &PowerTable, d: usize, b: usize) -> Result<QMatrix> {
    if b < d + 1 {
        return Err(Error::Invalid(format!("b = {b} must be at least d + 1 = {}", d + 1)));
    }
    table.require(d, b)?;
    let rows = (d + 1..=b)
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
    Ok(QMatrix::from_rows(rows))
}

/// `Delta_d`, the determinant of the square tilde matrix.
pub fn bautin_determinant(f: &ExactSeries, d: usize) -> Result<Rational> {
    let b = d * d + 2 * d;
    let table = PowerTable::new(f, d, b)?;
    Ok(tilde_matrix(&table, d, b)?.determinant())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Multiplicity {
    Exact(usize),
    /// Every computed coefficient vanished; the true order is at least this.
    AtLeast(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub family: MonomialFamily,
    pub columns: Vec<(usize, usize)>,
    /// Coefficient of `z^i y^j` for each column, primitive integral.
    #[serde(with = "crate::rational::pair_vec")]
    pub lambda: Vec<Rational>,
    pub multiplicity: Multiplicity,
}

/// A polynomial of maximal vanishing order at the origin.
///
/// For a finite index `b` this is a kernel vector of `M_{b-1}`; its order is
/// checked by substituting `f` into the polynomial directly, independently of
/// the Bautin matrix.
pub fn witness_polynomial(f: &ExactSeries, family: &MonomialFamily, k_max: usize) -> Result<Witness> {
    let report = bautin_index(f, family, k_max)?;
    let columns = family.columns();
    let (lambda, order) = match &report.outcome {
        IndexOutcome::Finite { b } => {
            let table = PowerTable::new(f, family.degree, *b)?;
            let kernel = if *b == 0 {
                Vec::new()
            } else {
                build_bautin_matrix(&table, family, b - 1)?.to_qmatrix().kernel()
            };
            let lambda = kernel.into_iter().next().ok_or_else(|| {
                Error::Invalid("Bautin index 0 leaves no nonzero polynomial vanishing at 0".into())
            })?;
            (lambda, *b)
        }
        IndexOutcome::Stalled { k_max, kernel } => (kernel[0].clone(), *k_max),
    };
    let lambda = orient(&columns, lambda);
    let multiplicity = substitution_order(f, &columns, &lambda, order)?;
    if let (IndexOutcome::Finite { b }, Multiplicity::Exact(mu)) = (&report.outcome, &multiplicity) {
        debug_assert_eq!(b, mu);
    }
    Ok(Witness { family: *family, columns, lambda, multiplicity })
}

/// Sign convention: the first nonzero coefficient of a `y`-dependent
/// monomial is positive.
fn orient(columns: &[(usize, usize)], lambda: Vec<Rational>) -> Vec<Rational> {
    let lead = columns.iter().zip(&lambda).find(|((_, j), l)| *j > 0 && **l != 0);
    match lead {
        Some((_, l)) if *l < 0 => lambda.into_iter().map(|x| -x).collect(),
        _ => lambda,
    }
}

/// Vanishing order of `P(z, f(z))` computed by Horner's rule in `y` on the
/// truncated series, examining orders `0..=k`.
pub fn substitution_order(
    f: &ExactSeries,
    columns: &[(usize, usize)],
    lambda: &[Rational],
    k: usize,
) -> Result<Multiplicity> {
    f.require_order(k)?;
    let deg_y = columns.iter().map(|c| c.1).max().unwrap_or(0);
    let fk = &f.coeffs()[..=k];
    let p_j = |j: usize| {
        let mut p = vec![Rational::new(); k + 1];
        for (&(i, jj), l) in columns.iter().zip(lambda) {
            if jj == j && i <= k {
                p[i] += l;
            }
        }
        p
    };
    let mut g = p_j(deg_y);
    for j in (0..deg_y).rev() {
        g = mul_truncated(&g, fk, k);
        for (x, y) in g.iter_mut().zip(p_j(j)) {
            *x += y;
        }
    }
    Ok(match g.iter().position(|c| *c != 0) {
        Some(o) => Multiplicity::Exact(o),
        None => Multiplicity::AtLeast(k + 1),
    })
}
