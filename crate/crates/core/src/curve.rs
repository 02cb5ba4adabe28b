//! The concave piecewise-linear curve `c ↦ min_i [𝕖ᵀ(y − r_i d)_+ + r_i c]`,
//! `r_i = y_i/d_i`, on `[0, 𝕖ᵀd]`, stored by its elbows.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::arith::{fmt_pq, Permutation, RVec, Rational};
use crate::dmaj::{min_affine, ratio_order, WeightVec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThermoCurve {
    d: WeightVec,
    y: RVec,
    sigma: Permutation,
    elbows: Vec<(Rational, Rational)>,
}

impl ThermoCurve {
    /// Elbows `(Σ_{i≤j} d_σ(i), Σ_{i≤j} y_σ(i))`, `j = 0..n`, with `σ`
    /// ordering `y/d` nonincreasingly (ties by index).
    pub fn build(y: &RVec, d: &WeightVec) -> Result<Self> {
        y.check_len(d.len())?;
        let sigma = ratio_order(y, d);
        let mut elbows = Vec::with_capacity(y.len() + 1);
        let (mut c, mut f) = (Rational::zero(), Rational::zero());
        elbows.push((c.clone(), f.clone()));
        for &i in sigma.images() {
            c += &d[i];
            f += &y[i];
            elbows.push((c.clone(), f.clone()));
        }
        Ok(ThermoCurve {
            d: d.clone(),
            y: y.clone(),
            sigma,
            elbows,
        })
    }

    pub fn weight(&self) -> &WeightVec {
        &self.d
    }

    pub fn generator(&self) -> &RVec {
        &self.y
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn elbows(&self) -> &[(Rational, Rational)] {
        &self.elbows
    }

    /// Right end of the domain, `𝕖ᵀd`.
    pub fn width(&self) -> &Rational {
        &self.elbows.last().unwrap().0
    }

    /// Slope on each of the `n` segments, i.e. `y_σ(j)/d_σ(j)`.
    pub fn slopes(&self) -> Vec<Rational> {
        self.elbows
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// Linear interpolation between elbows.
    pub fn eval(&self, c: &Rational) -> Result<Rational> {
        if c < &Rational::zero() || c > self.width() {
            return Err(Error::OutOfRange {
                value: Box::new(c.clone()),
                upper: Box::new(self.width().clone()),
            });
        }
        let j = self.elbows.partition_point(|(cj, _)| cj < c);
        if j == 0 {
            return Ok(self.elbows[0].1.clone());
        }
        let (c0, f0) = &self.elbows[j - 1];
        let (c1, f1) = &self.elbows[j];
        Ok(f0 + (f1 - f0) * (c - c0) / (c1 - c0))
    }

    /// The same value from the min-of-affine form; independent of the elbows.
    pub fn eval_min_form(&self, c: &Rational) -> Result<Rational> {
        if c < &Rational::zero() || c > self.width() {
            return Err(Error::OutOfRange {
                value: Box::new(c.clone()),
                upper: Box::new(self.width().clone()),
            });
        }
        Ok(min_affine(&self.y, &self.d, c))
    }

    /// `self ≤ upper` pointwise. The check at the elbows of `self` suffices
    /// because `upper` is concave.
    pub fn leq(&self, upper: &ThermoCurve) -> Result<bool> {
        if self.width() != upper.width() {
            return Err(Error::DomainMismatch(Box::new(self.width().clone()), Box::new(upper.width().clone())));
        }
        for (c, f) in &self.elbows {
            if f > &upper.eval(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Elbows merged with `refine + 1` evenly spaced abscissae (none if
    /// `refine = 0`), sorted and deduplicated.
    pub fn samples(&self, refine: usize) -> Vec<(Rational, Rational)> {
        let mut cs: Vec<Rational> = self.elbows.iter().map(|(c, _)| c.clone()).collect();
        if refine > 0 {
            let step = self.width() / Rational::from_integer((refine as i64).into());
            cs.extend((0..=refine).map(|k| &step * Rational::from_integer((k as i64).into())));
        }
        cs.sort();
        cs.dedup();
        cs.into_iter()
            .map(|c| {
                let f = self.eval(&c).expect("sample inside the domain");
                (c, f)
            })
            .collect()
    }

    /// CSV with header `c,f`, rationals written as `p/q`.
    pub fn to_csv(&self, refine: usize) -> String {
        let mut out = String::from("c,f\n");
        for (c, f) in self.samples(refine) {
            writeln!(out, "{},{}", fmt_pq(&c), fmt_pq(&f)).unwrap();
        }
        out
    }
}

pub fn curve_build(y: &RVec, d: &WeightVec) -> Result<ThermoCurve> {
    ThermoCurve::build(y, d)
}

pub fn curve_eval(curve: &ThermoCurve, c: &Rational) -> Result<Rational> {
    curve.eval(c)
}

pub fn curve_leq(lower: &ThermoCurve, upper: &ThermoCurve) -> Result<bool> {
    lower.leq(upper)
}
