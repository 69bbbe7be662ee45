//! Univariate polynomials over the rationals, used for quantities that depend
//! on a base point `u`.

use std::cmp::Ordering;

use rug::{Complete, Rational};

use crate::linalg::ExactRing;

/// Polynomial `c_0 + c_1 u + ...`; trailing zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != 0)
    }

    /// Drops every term of degree above `cap`.
    pub fn truncate(&self, cap: usize) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().take(cap + 1).cloned().collect())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        self.mul_capped(other, usize::MAX)
    }

    /// Product with terms of degree above `cap` discarded.
    pub fn mul_capped(&self, other: &UPoly, cap: usize) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let n = (self.coeffs.len() + other.coeffs.len() - 1).min(cap.saturating_add(1));
        let mut out = vec![Rational::new(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 || i >= n {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if *b != 0 {
                    out[i + j] += (a * b).complete();
                }
            }
        }
        UPoly::from_coeffs(out)
    }

    /// Quotient of an exact division; panics if `other` does not divide `self`.
    pub fn div_exact(&self, other: &UPoly) -> UPoly {
        let dd = other.degree().expect("division by the zero polynomial");
        let lead = other.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            assert!(rem.iter().all(|c| *c == 0), "inexact polynomial division");
            return UPoly::zero();
        }
        let mut q = vec![Rational::new(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = (&rem[k + dd] / &lead).complete();
            if c != 0 {
                for (i, b) in other.coeffs.iter().enumerate() {
                    if *b != 0 {
                        rem[k + i] -= (&c * b).complete();
                    }
                }
            }
            q[k] = c;
        }
        assert!(rem.iter().all(|c| *c == 0), "inexact polynomial division");
        UPoly::from_coeffs(q)
    }
}

impl ExactRing for UPoly {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn one() -> Self {
        UPoly::constant(Rational::from(1))
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        UPoly::mul(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        UPoly::sub(self, other)
    }
    fn neg(&self) -> Self {
        UPoly::from_coeffs(self.coeffs.iter().map(|c| (-c).complete()).collect())
    }
    fn div_exact(&self, other: &Self) -> Self {
        UPoly::div_exact(self, other)
    }
    /// Lower vanishing order at `u = 0` is preferred, then lower degree.
    fn pivot_weight(&self, other: &Self) -> Ordering {
        (other.order(), other.degree()).cmp(&(self.order(), self.degree()))
    }
}
