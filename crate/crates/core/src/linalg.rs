//! Exact linear algebra over the rationals.
//!
//! Determinants use Bareiss fraction-free elimination on integer-scaled rows;
//! ranks and kernels use an incremental echelon form kept as primitive
//! integer rows, so no rational entry ever needs to be reduced mid-flight.
//! Pivots are the entries of largest absolute value, ties broken by the
//! smallest index, which keeps every result reproducible.

use rug::{Complete, Integer, Rational};

use crate::rational::{lcm_denominators, primitive_integer_vector};

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::new(); rows * cols] }
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from(1));
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The submatrix on the given row and column index sets, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        QMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// First `k` rows.
    pub fn top_rows(&self, k: usize) -> QMatrix {
        let idx: Vec<usize> = (0..k.min(self.rows)).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&idx, &cols)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for (a, x) in self.row(i).iter().zip(v) {
                    if *a != 0 && *x != 0 {
                        acc += (a * x).complete();
                    }
                }
                acc
            })
            .collect()
    }

    /// Determinant of a square matrix by Bareiss elimination.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rational::from(1);
        }
        let mut scale = Integer::from(1);
        let mut m: Vec<Vec<Integer>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = lcm_denominators(row);
            m.push(
                row.iter()
                    .map(|q| Integer::from(q.numer() * (&l / q.denom()).complete()))
                    .collect(),
            );
            scale *= l;
        }
        let det = bareiss_determinant(m);
        Rational::from((det, scale))
    }

    pub fn rank(&self) -> usize {
        let mut e = IncrementalEchelon::new(self.cols);
        for i in 0..self.rows {
            e.push_row(self.row(i));
        }
        e.rank()
    }

    /// A basis of the right kernel `{x : A x = 0}`, each vector primitive
    /// integral with its last nonzero entry positive.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut e = IncrementalEchelon::new(self.cols);
        for i in 0..self.rows {
            e.push_row(self.row(i));
        }
        e.kernel()
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = QMatrix::identity(n).to_rows();
        for c in 0..n {
            let p = pivot_index(a.iter().enumerate().skip(c).map(|(i, r)| (i, &r[c])))?;
            a.swap(c, p);
            inv.swap(c, p);
            let piv = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x /= &piv;
            }
            for x in inv[c].iter_mut() {
                *x /= &piv;
            }
            for r in 0..n {
                if r == c || a[r][c] == 0 {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let t = (&f * &a[c][j]).complete();
                    a[r][j] -= t;
                    let t = (&f * &inv[c][j]).complete();
                    inv[r][j] -= t;
                }
            }
        }
        Some(QMatrix::from_rows(inv))
    }
}

/// Index of the entry with the largest absolute value (smallest index on ties);
/// `None` if all entries are zero.
fn pivot_index<'a>(it: impl Iterator<Item = (usize, &'a Rational)>) -> Option<usize> {
    let mut best: Option<(usize, &Rational)> = None;
    for (i, q) in it {
        if *q == 0 {
            continue;
        }
        match best {
            Some((_, b)) if q.cmp_abs(b) != std::cmp::Ordering::Greater => {}
            _ => best = Some((i, q)),
        }
    }
    best.map(|(i, _)| i)
}

/// Bareiss determinant of a square integer matrix.
pub fn bareiss_determinant(m: Vec<Vec<Integer>>) -> Integer {
    bareiss(m)
}

/// A commutative integral domain with exact division, enough for Bareiss.
pub trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient; the caller guarantees divisibility.
    fn div_exact(&self, other: &Self) -> Self;
    /// Pivot preference: larger is preferred. Any total preorder works.
    fn pivot_weight(&self, other: &Self) -> std::cmp::Ordering;
}

impl ExactRing for Integer {
    fn zero() -> Self {
        Integer::new()
    }
    fn one() -> Self {
        Integer::from(1)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, other: &Self) -> Self {
        (self * other).complete()
    }
    fn sub(&self, other: &Self) -> Self {
        (self - other).complete()
    }
    fn neg(&self) -> Self {
        (-self).complete()
    }
    fn div_exact(&self, other: &Self) -> Self {
        self.div_exact_ref(other).complete()
    }
    fn pivot_weight(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp_abs(other)
    }
}

/// Generic Bareiss fraction-free determinant with row pivoting.
pub fn bareiss<T: ExactRing>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let mut p: Option<usize> = None;
        for i in k..n {
            if m[i][k].is_zero() {
                continue;
            }
            match p {
                Some(b) if m[i][k].pivot_weight(&m[b][k]) != std::cmp::Ordering::Greater => {}
                _ => p = Some(i),
            }
        }
        let Some(p) = p else { return T::zero() };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let t = row[j].mul(&pivot_row[k]).sub(&row[k].mul(&pivot_row[j]));
                row[j] = t.div_exact(&prev);
            }
            row[k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Row echelon form built one row at a time, used for rank traces.
///
/// Each stored row is a primitive integer vector that vanishes at the pivot
/// columns of every row stored before it.
#[derive(Debug, Clone)]
pub struct IncrementalEchelon {
    cols: usize,
    basis: Vec<(usize, Vec<Integer>)>,
}

impl IncrementalEchelon {
    pub fn new(cols: usize) -> Self {
        IncrementalEchelon { cols, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|(p, _)| *p).collect()
    }

    /// Reduces `row` against the current basis; returns true if the rank grew.
    pub fn push_row(&mut self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.cols);
        if self.basis.len() == self.cols {
            return false;
        }
        let mut w = primitive_integer_vector(row);
        for (p, b) in &self.basis {
            if w[*p] == 0 {
                continue;
            }
            let bp = &b[*p];
            let wp = w[*p].clone();
            for (x, y) in w.iter_mut().zip(b) {
                let t = (&*x * bp).complete() - (&wp * y).complete();
                *x = t;
            }
            make_primitive(&mut w);
        }
        let mut pivot: Option<usize> = None;
        for (j, x) in w.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            match pivot {
                Some(b) if x.cmp_abs(&w[b]) != std::cmp::Ordering::Greater => {}
                _ => pivot = Some(j),
            }
        }
        match pivot {
            Some(p) => {
                self.basis.push((p, w));
                true
            }
            None => false,
        }
    }

    /// Kernel basis of the span: one vector per non-pivot column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        // Back-substitute to a reduced form with unit pivots.
        let mut rows: Vec<(usize, Vec<Rational>)> = self
            .basis
            .iter()
            .map(|(p, r)| {
                let piv = r[*p].clone();
                (*p, r.iter().map(|x| Rational::from((x.clone(), piv.clone()))).collect())
            })
            .collect();
        for i in (0..rows.len()).rev() {
            let (p, ri) = rows[i].clone();
            for (_, rj) in rows.iter_mut().take(i) {
                if rj[p] == 0 {
                    continue;
                }
                let f = rj[p].clone();
                for (x, y) in rj.iter_mut().zip(&ri) {
                    *x -= (&f * y).complete();
                }
            }
        }
        let pivots: Vec<usize> = rows.iter().map(|(p, _)| *p).collect();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::new(); self.cols];
            v[free] = Rational::from(1);
            for (p, r) in &rows {
                v[*p] = -r[free].clone();
            }
            let ints = primitive_integer_vector(&v);
            let flip = ints.iter().rev().find(|x| **x != 0).is_some_and(|x| *x < 0);
            out.push(ints.into_iter().map(|x| Rational::from(if flip { -x } else { x })).collect());
        }
        out
    }
}

fn make_primitive(w: &mut [Integer]) {
    let g = w.iter().fold(Integer::new(), |acc, x| acc.gcd(x));
    if g > 1 {
        for x in w.iter_mut() {
            x.div_exact_mut(&g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn mat(rows: &[&[(i64, i64)]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect())
    }

    /// Leibniz expansion, used only as an oracle.
    fn leibniz(m: &QMatrix) -> Rational {
        let n = m.nrows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Rational::new();
        fn rec(k: usize, perm: &mut Vec<usize>, m: &QMatrix, total: &mut Rational) {
            let n = perm.len();
            if k == n {
                let mut inv = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if perm[i] > perm[j] {
                            inv += 1;
                        }
                    }
                }
                let mut p = Rational::from(if inv % 2 == 0 { 1 } else { -1 });
                for (i, &c) in perm.iter().enumerate() {
                    p *= m.get(i, c);
                }
                *total += p;
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, m, total);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, m, &mut total);
        total
    }

    #[test]
    fn determinant_of_worked_example() {
        let m = mat(&[&[(1, 2), (1, 1)], &[(1, 6), (1, 2)]]);
        assert_eq!(m.determinant(), q(1, 12));
    }

    #[test]
    fn singular_and_rank() {
        let m = mat(&[&[(1, 1), (2, 1), (3, 1)], &[(2, 1), (4, 1), (6, 1)], &[(0, 1), (1, 3), (1, 1)]]);
        assert_eq!(m.determinant(), Rational::new());
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        let image = m.mul_vec(&k[0]);
        assert!(image.iter().all(|x| *x == 0));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[(2, 1), (1, 3)], &[(-1, 5), (7, 2)]]);
        let inv = m.inverse().unwrap();
        let e0 = inv.mul_vec(&m.to_rows().iter().map(|r| r[0].clone()).collect::<Vec<_>>());
        assert_eq!(e0, vec![q(1, 1), q(0, 1)]);
    }

    use proptest::prelude::*;

    fn small_matrix(n: usize) -> impl Strategy<Value = QMatrix> {
        proptest::collection::vec((-6i64..7, 1i64..5), n * n).prop_map(move |v| {
            QMatrix::from_rows(v.chunks(n).map(|c| c.iter().map(|&(a, b)| q(a, b)).collect()).collect())
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(m in (1usize..6).prop_flat_map(small_matrix)) {
            prop_assert_eq!(m.determinant(), leibniz(&m));
        }

        #[test]
        fn rank_nullity(m in (1usize..6).prop_flat_map(small_matrix)) {
            let r = m.rank();
            let k = m.kernel();
            prop_assert_eq!(r + k.len(), m.ncols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|x| *x == 0));
            }
            prop_assert_eq!(r == m.ncols(), m.determinant() != 0);
        }
    }
}
