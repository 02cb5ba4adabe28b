//! Extreme points of the 3×3 `d`-stochastic matrices for `d₁ > d₂ > d₃ > 0`.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{RMatrix, Rational};
use crate::dmaj::{StochMatrix, WeightVec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `d₁ ≥ d₂ + d₃`: ten extreme points.
    Wide,
    /// `d₁ < d₂ + d₃`: thirteen extreme points.
    Narrow,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Wide => "wide",
            Regime::Narrow => "narrow",
        }
    }

    pub fn count(&self) -> usize {
        match self {
            Regime::Wide => 10,
            Regime::Narrow => 13,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sd3Case {
    d: WeightVec,
    regime: Regime,
}

impl Sd3Case {
    pub fn new(d: &WeightVec) -> Result<Self> {
        if d.len() != 3 {
            return Err(Error::WrongDimension {
                expected: 3,
                found: d.len(),
            });
        }
        if !(d[0] > d[1] && d[1] > d[2]) {
            return Err(Error::DegenerateWeights);
        }
        let regime = if d[0] >= &d[1] + &d[2] { Regime::Wide } else { Regime::Narrow };
        Ok(Sd3Case { d: d.clone(), regime })
    }

    pub fn weight(&self) -> &WeightVec {
        &self.d
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// The catalog, instantiated and checked to be `d`-stochastic.
    pub fn extremes(&self) -> Result<Vec<StochMatrix>> {
        let (d1, d2, d3) = (&self.d[0], &self.d[1], &self.d[2]);
        let o = Rational::zero;
        let l = Rational::one;
        let a = d3 / d2;
        let b = d3 / d1;
        let c = d2 / d1;
        let e = (d2 - d3) / d1;
        let mut rows: Vec<[[Rational; 3]; 3]> = vec![
            [[l(), o(), o()], [o(), l(), o()], [o(), o(), l()]],
            [[l(), o(), o()], [o(), l() - &a, l()], [o(), a.clone(), o()]],
            [[l() - &b, o(), l()], [o(), l(), o()], [b.clone(), o(), o()]],
            [[l() - &c, l(), o()], [e.clone(), o(), l()], [b.clone(), o(), o()]],
            [[l() - &b, a.clone(), o()], [o(), l() - &a, l()], [b.clone(), o(), o()]],
            [[l() - &c, l(), o()], [c.clone(), o(), o()], [o(), o(), l()]],
            [[l() - &b, o(), l()], [b.clone(), l() - &a, o()], [o(), a.clone(), o()]],
            [[l() - &e, l() - &a, o()], [e.clone(), o(), l()], [o(), a.clone(), o()]],
            [[l() - &c, l() - &a, l()], [c.clone(), o(), o()], [o(), a.clone(), o()]],
        ];
        match self.regime {
            Regime::Wide => {
                rows.push([[l() - (d2 + d3) / d1, l(), l()], [c.clone(), o(), o()], [b.clone(), o(), o()]]);
            }
            Regime::Narrow => {
                let g = (d1 - d2) / d3;
                let h = (d1 - d3) / d2;
                rows.push([[o(), l(), g.clone()], [c.clone(), o(), o()], [l() - &c, o(), l() - &g]]);
                rows.push([[o(), h.clone(), l()], [l() - &b, l() - &h, o()], [b.clone(), o(), o()]]);
                rows.push([[o(), h.clone(), l()], [c.clone(), o(), o()], [l() - &c, l() - &h, o()]]);
                rows.push([[o(), l(), g.clone()], [l() - &b, o(), l() - &g], [b.clone(), o(), o()]]);
            }
        }
        rows.into_iter()
            .map(|m| StochMatrix::d_stochastic(RMatrix::from_rows(m.into_iter().map(Vec::from).collect())?, &self.d))
            .collect()
    }
}

pub fn sd3_extremes(d: &WeightVec) -> Result<Vec<StochMatrix>> {
    Sd3Case::new(d)?.extremes()
}

/// `A` is extreme in the `d`-stochastic matrices iff no nonzero `H`
/// supported on the positive entries of `A` has `𝕖ᵀH = 0` and `Hd = 0`.
pub fn verify_extremality(a: &StochMatrix, d: &WeightVec) -> Result<bool> {
    if !a.fixes(d) {
        return Err(Error::NotStochastic("d-stochastic"));
    }
    let n = a.n();
    let m = a.matrix();
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m.get(i, j) > &Rational::zero())
        .collect();
    let mut system = RMatrix::zeros(2 * n, free.len());
    for (k, &(i, j)) in free.iter().enumerate() {
        system.set(j, k, Rational::one());
        system.set(n + i, k, d[j].clone());
    }
    Ok(system.rank() == free.len())
}
