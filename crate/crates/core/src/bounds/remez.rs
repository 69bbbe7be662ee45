//! Grid-based falsification harness for the multivariate Remez inequality
//! `sup_{I^n} |P| < (4n / lambda)^d sup_Z |P|`, with `I = [-1, 1]` and
//! `lambda` the probability measure of `Z`.
//!
//! `Z` is a union of grid cells. Both suprema are bracketed: sampled maxima
//! give lower estimates, and adding a Lipschitz term over the sampling gap
//! gives upper estimates. A verdict is only issued when the brackets
//! separate.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real polynomial in `n` variables as a list of `(exponents, coefficient)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPolynomial {
    pub n: usize,
    pub terms: Vec<(Vec<u32>, f64)>,
}

impl RealPolynomial {
    pub fn new(n: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        if terms.iter().any(|(e, _)| e.len() != n) {
            return Err(Error::Invalid("exponent vector length differs from the variable count".into()));
        }
        Ok(RealPolynomial { n, terms })
    }

    /// Every monomial of total degree `<= d` with a coefficient uniform on `[-1, 1]`.
    pub fn random<R: Rng>(n: usize, d: u32, rng: &mut R) -> Self {
        let mut terms = Vec::new();
        let mut e = vec![0u32; n];
        loop {
            if e.iter().sum::<u32>() <= d {
                terms.push((e.clone(), rng.gen_range(-1.0..=1.0)));
            }
            let mut k = 0;
            loop {
                if k == n {
                    return RealPolynomial { n, terms };
                }
                e[k] += 1;
                if e[k] <= d {
                    break;
                }
                e[k] = 0;
                k += 1;
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|t| t.1 != 0.0).map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product::<f64>())
            .sum()
    }

    /// Bound on `|P(x) - P(y)|` per unit of `max_k |x_k - y_k|` on the cube.
    pub fn lipschitz_inf(&self) -> f64 {
        self.terms.iter().map(|(e, c)| c.abs() * e.iter().sum::<u32>() as f64).sum()
    }
}

/// Union of cells of the uniform `g^n` grid on `[-1, 1]^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSubset {
    pub n: usize,
    pub resolution: usize,
    pub cells: Vec<Vec<usize>>,
}

impl GridSubset {
    /// Probability measure of the union.
    pub fn lambda(&self) -> f64 {
        self.cells.len() as f64 / (self.resolution as f64).powi(self.n as i32)
    }

    fn all_cells(n: usize, g: usize) -> Vec<Vec<usize>> {
        let total = g.pow(n as u32);
        (0..total)
            .map(|mut idx| {
                (0..n)
                    .map(|_| {
                        let c = idx % g;
                        idx /= g;
                        c
                    })
                    .collect()
            })
            .collect()
    }

    /// The interval `[-1/2, 1/2]^n` at resolution `g` (a multiple of 4 keeps it exact).
    pub fn centered(n: usize, g: usize) -> Self {
        let cells = Self::all_cells(n, g)
            .into_iter()
            .filter(|c| c.iter().all(|&i| 4 * i >= g && 4 * (i + 1) <= 3 * g))
            .collect();
        GridSubset { n, resolution: g, cells }
    }

    /// The `count` cells on which `|P|` at the cell centre is smallest.
    pub fn lowest_cells(p: &RealPolynomial, g: usize, count: usize) -> Self {
        let h = 2.0 / g as f64;
        let mut scored: Vec<(f64, Vec<usize>)> = Self::all_cells(p.n, g)
            .into_iter()
            .map(|c| {
                let x: Vec<f64> = c.iter().map(|&i| -1.0 + (i as f64 + 0.5) * h).collect();
                (p.eval(&x).abs(), c)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let cells = scored.into_iter().take(count).map(|s| s.1).collect();
        GridSubset { n: p.n, resolution: g, cells }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemezVerdict {
    Holds,
    Counterexample,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemezReport {
    pub verdict: RemezVerdict,
    pub lambda: f64,
    pub factor: f64,
    pub sup_cube: [f64; 2],
    pub sup_z: [f64; 2],
}

/// Maximum of `|P|` over the points `lo + step * t`, `t = 0..=m` per axis, in a box.
fn sampled_max(p: &RealPolynomial, lo: &[f64], step: f64, m: usize) -> f64 {
    let n = lo.len();
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut best: f64 = 0.0;
    loop {
        for k in 0..n {
            x[k] = lo[k] + step * idx[k] as f64;
        }
        best = best.max(p.eval(&x).abs());
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            idx[k] += 1;
            if idx[k] <= m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Checks the inequality for `P` of degree at most `d` in `n` variables.
/// `refine` is the number of sampling intervals per grid cell and axis.
pub fn remez_check(p: &RealPolynomial, z: &GridSubset, d: u32, n: usize, refine: usize) -> Result<RemezReport> {
    if z.cells.is_empty() {
        return Err(Error::Invalid("Z must be nonempty".into()));
    }
    if p.n != n || z.n != n {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    if p.degree() > d {
        return Err(Error::Invalid(format!("polynomial degree {} exceeds d = {d}", p.degree())));
    }
    if p.terms.iter().all(|t| t.1 == 0.0) {
        return Err(Error::Invalid("the zero polynomial has no strict inequality".into()));
    }
    let refine = refine.max(1);
    let lambda = z.lambda();
    let factor = (4.0 * n as f64 / lambda).powi(d as i32);
    let lip = p.lipschitz_inf();
    let g = z.resolution;
    let h = 2.0 / g as f64;
    let step = h / refine as f64;
    let gap = lip * step / 2.0;

    let cube_lo = sampled_max(p, &vec![-1.0; n], step, g * refine);
    let mut z_lo: f64 = 0.0;
    for c in &z.cells {
        let lo: Vec<f64> = c.iter().map(|&i| -1.0 + i as f64 * h).collect();
        z_lo = z_lo.max(sampled_max(p, &lo, step, refine));
    }
    let slack = 1e-12 * (1.0 + cube_lo);
    let sup_cube = [cube_lo, cube_lo + gap + slack];
    let sup_z = [z_lo, z_lo + gap + slack];
    let verdict = if sup_cube[1] < factor * sup_z[0] {
        RemezVerdict::Holds
    } else if sup_cube[0] >= factor * sup_z[1] {
        RemezVerdict::Counterexample
    } else {
        RemezVerdict::Inconclusive
    };
    Ok(RemezReport { verdict, lambda, factor, sup_cube, sup_z })
}
