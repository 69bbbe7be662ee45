//! Closed real intervals with MPFR endpoints and outward rounding.
//!
//! Every operation rounds the lower endpoint down and the upper endpoint up,
//! so the exact real result always lies in the returned interval.

use rug::float::{Constant, Round};
use rug::ops::{AssignRound, DivAssignRound, MulAssignRound, PowAssignRound};
use rug::{Float, Integer, Rational};

/// Working precision in bits (77 decimal digits).
pub const PREC: u32 = 256;

/// Decimal digits carried by [`PREC`].
pub fn precision_digits() -> u32 {
    (PREC as f64 * std::f64::consts::LOG10_2).floor() as u32
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Float,
    pub hi: Float,
}

fn float_round(q: &Rational, r: Round) -> Float {
    let mut f = Float::new(PREC);
    f.assign_round(q, r);
    f
}

impl Interval {
    pub fn point(q: &Rational) -> Self {
        Interval { lo: float_round(q, Round::Down), hi: float_round(q, Round::Up) }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(&Rational::from(n))
    }

    pub fn from_integer(n: &Integer) -> Self {
        Self::point(&Rational::from(n))
    }

    pub fn pi() -> Self {
        let mut lo = Float::new(PREC);
        lo.assign_round(Constant::Pi, Round::Down);
        let mut hi = Float::new(PREC);
        hi.assign_round(Constant::Pi, Round::Up);
        Interval { lo, hi }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut lo = Float::new(PREC);
        lo.assign_round(&self.lo + &o.lo, Round::Down);
        let mut hi = Float::new(PREC);
        hi.assign_round(&self.hi + &o.hi, Round::Up);
        Interval { lo, hi }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut lo = Float::new(PREC);
        lo.assign_round(&self.lo - &o.hi, Round::Down);
        let mut hi = Float::new(PREC);
        hi.assign_round(&self.hi - &o.lo, Round::Up);
        Interval { lo, hi }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prods = |r: Round| {
            [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)].map(|(a, b)| {
                let mut x = a.clone();
                x.mul_assign_round(b, r);
                x
            })
        };
        let lo = prods(Round::Down).into_iter().reduce(|a, b| if b < a { b } else { a }).expect("four products");
        let hi = prods(Round::Up).into_iter().reduce(|a, b| if b > a { b } else { a }).expect("four products");
        Interval { lo, hi }
    }

    /// Quotient; the divisor must not contain zero.
    pub fn div(&self, o: &Self) -> Self {
        assert!(o.lo > 0 || o.hi < 0, "division by an interval containing zero");
        let quots = |r: Round| {
            [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)].map(|(a, b)| {
                let mut x = a.clone();
                x.div_assign_round(b, r);
                x
            })
        };
        let lo = quots(Round::Down).into_iter().reduce(|a, b| if b < a { b } else { a }).expect("four quotients");
        let hi = quots(Round::Up).into_iter().reduce(|a, b| if b > a { b } else { a }).expect("four quotients");
        Interval { lo, hi }
    }

    /// Natural logarithm; the interval must be positive.
    pub fn ln(&self) -> Self {
        assert!(self.lo > 0, "logarithm of a non-positive interval");
        let mut lo = self.lo.clone();
        lo.ln_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.ln_round(Round::Up);
        Interval { lo, hi }
    }

    pub fn exp(&self) -> Self {
        let mut lo = self.lo.clone();
        lo.exp_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.exp_round(Round::Up);
        Interval { lo, hi }
    }

    /// Square root; the interval must be nonnegative.
    pub fn sqrt(&self) -> Self {
        assert!(self.lo >= 0, "square root of a negative interval");
        let mut lo = self.lo.clone();
        lo.sqrt_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.sqrt_round(Round::Up);
        Interval { lo, hi }
    }

    /// Integer power of a nonnegative interval.
    pub fn powu(&self, e: u32) -> Self {
        assert!(self.lo >= 0, "powu expects a nonnegative interval");
        let mut lo = self.lo.clone();
        lo.pow_assign_round(e, Round::Down);
        let mut hi = self.hi.clone();
        hi.pow_assign_round(e, Round::Up);
        Interval { lo, hi }
    }

    /// `self^e` for a positive interval and a real exponent interval, via `exp(e ln x)`.
    pub fn powi(&self, e: &Interval) -> Self {
        self.ln().mul(e).exp()
    }

    pub fn max(&self, o: &Self) -> Self {
        Interval {
            lo: if self.lo > o.lo { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi > o.hi { self.hi.clone() } else { o.hi.clone() },
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        self.mul(&Interval::from_int(k))
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn mid_f64(&self) -> f64 {
        let mut m = self.lo.clone();
        m += &self.hi;
        m /= 2;
        m.to_f64()
    }
}

/// Decimal rendering of `x` rounded in direction `r` to `digits` significant digits.
pub fn format_sig(x: &Float, digits: usize, r: Round) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let (neg, ds, exp) = x.to_sign_string_exp_round(10, Some(digits), r);
    let exp = exp.expect("finite nonzero value has an exponent");
    let ds = ds.trim_end_matches('0');
    let ds = if ds.is_empty() { "0" } else { ds };
    let sign = if neg { "-" } else { "" };
    // value = 0.ds * 10^exp
    let body = if (-5..=15).contains(&exp) {
        if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), ds)
        } else if (exp as usize) >= ds.len() {
            format!("{}{}", ds, "0".repeat(exp as usize - ds.len()))
        } else {
            format!("{}.{}", &ds[..exp as usize], &ds[exp as usize..])
        }
    } else {
        let (h, t) = ds.split_at(1);
        let t = if t.is_empty() { String::new() } else { format!(".{t}") };
        format!("{h}{t}e{}", exp - 1)
    };
    format!("{sign}{body}")
}
