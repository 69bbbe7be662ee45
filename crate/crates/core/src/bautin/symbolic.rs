//! The Bautin determinant as an integer polynomial in indeterminate Taylor
//! coefficients `a_1, a_2, ...` (with `a_0 = 0`).
//!
//! Only practical for small `d`: the determinant is expanded by a dynamic
//! program over subsets of used columns.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use rug::{Complete, Integer, Rational};

/// Sparse polynomial with integer coefficients; exponent vectors index
/// `a_1..a_n` by position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Integer>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Integer) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The variable `a_k`, `1 <= k <= nvars`.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k - 1] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Integer::from(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &Integer)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn add_term(&mut self, e: Vec<u16>, c: Integer) {
        if c == 0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &IntPoly, sign: i32) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), if sign < 0 { (-c).complete() } else { c.clone() });
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, (c1 * c2).complete());
            }
        }
        out
    }

    /// Total degrees of all terms, deduplicated and sorted.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Largest variable index that occurs.
    pub fn max_variable(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&x| x > 0))
            .max()
            .map_or(0, |i| i + 1)
    }

    /// Value at `a_k = values[k-1]`.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::new();
        for (e, c) in &self.terms {
            let mut t = Rational::from(c);
            for (x, &p) in values.iter().zip(e) {
                if p > 0 {
                    t *= crate::rational::pow_u(x, p as u32);
                }
            }
            acc += t;
        }
        acc
    }
}

/// Symbolic `Delta_d` in the variables `a_1..a_{d^2+2d}`.
pub fn symbolic_delta(d: usize) -> IntPoly {
    let b = d * d + 2 * d;
    let nv = b;
    // powers[j][n]: coefficient of z^n in (sum_{k>=1} a_k z^k)^j
    let base: Vec<IntPoly> =
        (0..=b).map(|n| if n == 0 { IntPoly::zero(nv) } else { IntPoly::var(nv, n) }).collect();
    let mut powers = vec![base.clone()];
    for _ in 2..=d {
        let prev = powers.last().expect("nonempty");
        let mut next = vec![IntPoly::zero(nv); b + 1];
        for (i, x) in prev.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (l, y) in base.iter().enumerate().take(b + 1 - i) {
                if !y.is_zero() {
                    let p = x.mul(y);
                    next[i + l].add_assign_scaled(&p, 1);
                }
            }
        }
        powers.push(next);
    }
    let rows: Vec<Vec<IntPoly>> = (d + 1..=b)
        .map(|k| {
            let mut row = Vec::new();
            for j in 1..=d {
                for i in 0..=d {
                    row.push(powers[j - 1][k - i].clone());
                }
            }
            row
        })
        .collect();
    subset_determinant(&rows, nv)
}

/// Determinant by expanding rows in order over subsets of used columns.
fn subset_determinant(rows: &[Vec<IntPoly>], nv: usize) -> IntPoly {
    let n = rows.len();
    let mut layer: HashMap<u32, IntPoly> = HashMap::new();
    layer.insert(0, IntPoly::constant(nv, Integer::from(1)));
    for row in rows {
        let mut next: HashMap<u32, IntPoly> = HashMap::new();
        for (mask, acc) in &layer {
            for (c, entry) in row.iter().enumerate() {
                if mask & (1 << c) != 0 || entry.is_zero() {
                    continue;
                }
                // Each used column to the right of c is one inversion.
                let larger = (mask >> (c + 1)).count_ones();
                let sign = if larger % 2 == 0 { 1 } else { -1 };
                let p = acc.mul(entry);
                next.entry(mask | (1 << c)).or_insert_with(|| IntPoly::zero(nv)).add_assign_scaled(&p, sign);
            }
        }
        next.retain(|_, p| !p.is_zero());
        layer = next;
    }
    layer.remove(&((1u32 << n) - 1)).unwrap_or_else(|| IntPoly::zero(nv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bautin::bautin_determinant;
    use crate::series::ExactSeries;

    #[test]
    fn degree_one_is_a2_squared_minus_a1_a3() {
        let p = symbolic_delta(1);
        let expect = {
            let mut e = IntPoly::var(3, 2).mul(&IntPoly::var(3, 2));
            e.add_assign_scaled(&IntPoly::var(3, 1).mul(&IntPoly::var(3, 3)), -1);
            e
        };
        assert_eq!(p, expect);
        assert_eq!(p.degrees(), vec![2]);
    }

    #[test]
    fn degree_two_is_homogeneous_and_matches_numeric() {
        let p = symbolic_delta(2);
        assert_eq!(p.degrees(), vec![9]);
        let f = ExactSeries::exp_minus_one(12);
        let values: Vec<Rational> = f.coeffs()[1..=8].to_vec();
        assert_eq!(p.eval(&values), bautin_determinant(&f, 2).unwrap());
        assert_eq!(p.max_variable(), 8);
    }
}
