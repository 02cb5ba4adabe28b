//! Majorization relative to a strictly positive weight vector `d`.
//!
//! `x ≺_d y` means some `d`-stochastic `A` (nonnegative, columns summing to
//! one, `Ad = d`) maps `y` to `x`. Three finite tests decide it; a witness
//! matrix is found by an exact feasibility program.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::arith::{Permutation, RMatrix, RVec, Rational};
use crate::error::{Error, Result};
use crate::lp::{self, Feasibility, LinearProgram};

/// A vector with strictly positive entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVec(RVec);

impl WeightVec {
    pub fn new(d: RVec) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::EmptyWeight);
        }
        if let Some((index, value)) = d.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(Error::NonPositiveWeight {
                index,
                value: value.clone(),
            });
        }
        Ok(WeightVec(d))
    }

    pub fn from_ints(d: &[i64]) -> Result<Self> {
        Self::new(RVec::from_ints(d))
    }

    /// The all-ones weight, under which `≺_d` is classical majorization.
    pub fn uniform(n: usize) -> Self {
        WeightVec(RVec::ones(n))
    }

    pub fn as_vec(&self) -> &RVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> Rational {
        self.0.sum()
    }

    /// `(v_i / d_i)_i`
    pub fn ratios(&self, v: &RVec) -> Vec<Rational> {
        v.iter().zip(self.0.iter()).map(|(a, b)| a / b).collect()
    }

    /// `σd`; stays positive.
    pub fn permuted(&self, sigma: &Permutation) -> WeightVec {
        WeightVec(sigma.apply(&self.0))
    }
}

impl std::ops::Index<usize> for WeightVec {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// A square column-stochastic matrix, optionally known to fix a weight `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochMatrix {
    matrix: RMatrix,
    fixed: Option<WeightVec>,
}

impl StochMatrix {
    /// Checks `A ≥ 0` and `𝕖ᵀA = 𝕖ᵀ`.
    pub fn new(matrix: RMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::NotStochastic("square"));
        }
        let n = matrix.rows();
        for j in 0..n {
            let col = matrix.column(j);
            if !col.is_nonnegative() {
                return Err(Error::NotStochastic("entrywise nonnegative"));
            }
            if !col.sum().is_one() {
                return Err(Error::NotStochastic("column stochastic"));
            }
        }
        Ok(StochMatrix { matrix, fixed: None })
    }

    /// Additionally checks `Ad = d`.
    pub fn d_stochastic(matrix: RMatrix, d: &WeightVec) -> Result<Self> {
        let mut a = Self::new(matrix)?;
        d.as_vec().check_len(a.n())?;
        if &a.matrix.mul_vec(d.as_vec()) != d.as_vec() {
            return Err(Error::NotStochastic("d-stochastic"));
        }
        a.fixed = Some(d.clone());
        Ok(a)
    }

    pub fn identity(n: usize) -> Self {
        StochMatrix {
            matrix: RMatrix::identity(n),
            fixed: None,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn fixed_weight(&self) -> Option<&WeightVec> {
        self.fixed.as_ref()
    }

    pub fn fixes(&self, d: &WeightVec) -> bool {
        d.len() == self.n() && &self.matrix.mul_vec(d.as_vec()) == d.as_vec()
    }

    pub fn apply(&self, v: &RVec) -> RVec {
        self.matrix.mul_vec(v)
    }

    /// `A ≥ 0`, `𝕖ᵀA = 𝕖ᵀ`, `Ad = d` and `Ay = x`, all exact.
    pub fn is_witness(&self, x: &RVec, y: &RVec, d: &WeightVec) -> bool {
        self.fixes(d) && x.len() == self.n() && y.len() == self.n() && &self.apply(y) == x
    }
}

/// Which finite characterization decides `x ≺_d y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// Positive parts at the `2n` breakpoints `{x_i/d_i, y_i/d_i}`.
    PositiveParts,
    /// One-norms at the `n` points `y_i/d_i`.
    OneNorm,
    /// Partial sums of `x` along its `x/d` order against the curve of `y`.
    Curve,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::PositiveParts, Criterion::OneNorm, Criterion::Curve];

    pub fn label(&self) -> &'static str {
        match self {
            Criterion::PositiveParts => "iv",
            Criterion::OneNorm => "vi",
            Criterion::Curve => "vii",
        }
    }
}

pub fn dmajorizes(x: &RVec, y: &RVec, d: &WeightVec, criterion: Criterion) -> Result<bool> {
    match criterion {
        Criterion::PositiveParts => dmaj_by_positive_parts(x, y, d),
        Criterion::OneNorm => dmaj_by_onenorm(x, y, d),
        Criterion::Curve => dmaj_by_curve(x, y, d),
    }
}

fn check_dims(x: &RVec, y: &RVec, d: &WeightVec) -> Result<()> {
    x.check_len(d.len())?;
    y.check_len(d.len())
}

/// `𝕖ᵀ(v − t·d)_+`
fn positive_mass(v: &RVec, t: &Rational, d: &WeightVec) -> Rational {
    v.iter()
        .zip(d.as_vec().iter())
        .map(|(a, b)| a - t * b)
        .filter(|r| r.is_positive())
        .sum()
}

/// `‖v − t·d‖₁`
fn shifted_norm(v: &RVec, t: &Rational, d: &WeightVec) -> Rational {
    v.iter().zip(d.as_vec().iter()).map(|(a, b)| (a - t * b).abs()).sum()
}

/// `𝕖ᵀx = 𝕖ᵀy`
pub fn traces_match(x: &RVec, y: &RVec) -> bool {
    x.sum() == y.sum()
}

pub fn dmaj_by_positive_parts(x: &RVec, y: &RVec, d: &WeightVec) -> Result<bool> {
    check_dims(x, y, d)?;
    if !traces_match(x, y) {
        return Ok(false);
    }
    let mut breakpoints = d.ratios(x);
    breakpoints.extend(d.ratios(y));
    breakpoints.sort();
    breakpoints.dedup();
    Ok(breakpoints.iter().all(|t| positive_mass(x, t, d) <= positive_mass(y, t, d)))
}

pub fn dmaj_by_onenorm(x: &RVec, y: &RVec, d: &WeightVec) -> Result<bool> {
    check_dims(x, y, d)?;
    if !traces_match(x, y) {
        return Ok(false);
    }
    Ok(d.ratios(y).iter().all(|t| shifted_norm(x, t, d) <= shifted_norm(y, t, d)))
}

/// Indices ordered by `v_i/d_i` nonincreasing, ties by index.
pub(crate) fn ratio_order(v: &RVec, d: &WeightVec) -> Permutation {
    let r = d.ratios(v);
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| r[b].cmp(&r[a]).then(a.cmp(&b)));
    Permutation::from_images(idx).expect("sorted indices form a permutation")
}

/// `min_i [𝕖ᵀ(y − r_i d)_+ + r_i c]` with `r_i = y_i/d_i`.
pub(crate) fn min_affine(y: &RVec, d: &WeightVec, c: &Rational) -> Rational {
    d.ratios(y)
        .iter()
        .map(|r| positive_mass(y, r, d) + r * c)
        .min()
        .expect("weight vectors are nonempty")
}

pub fn dmaj_by_curve(x: &RVec, y: &RVec, d: &WeightVec) -> Result<bool> {
    check_dims(x, y, d)?;
    if !traces_match(x, y) {
        return Ok(false);
    }
    let sigma = ratio_order(x, d);
    let mut lhs = Rational::zero();
    let mut c = Rational::zero();
    for &i in &sigma.images()[..x.len() - 1] {
        lhs += &x[i];
        c += &d[i];
        if lhs > min_affine(y, d, &c) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The feasibility program for `z = vec(A)` (column-major: `z[n·j + k] = A_kj`):
/// `Ay = x`, `Ad = d` without its last row, `𝕖ᵀA = 𝕖ᵀ`, `z ≥ 0`.
pub fn witness_program(x: &RVec, y: &RVec, d: &WeightVec) -> Result<LinearProgram> {
    check_dims(x, y, d)?;
    let n = d.len();
    let var = |k: usize, j: usize| n * j + k;
    let mut lp = LinearProgram::new(n * n);
    for k in 0..n {
        let mut row = vec![Rational::zero(); n * n];
        for j in 0..n {
            row[var(k, j)] = y[j].clone();
        }
        lp = lp.equality(row, x[k].clone());
    }
    for k in 0..n - 1 {
        let mut row = vec![Rational::zero(); n * n];
        for j in 0..n {
            row[var(k, j)] = d[j].clone();
        }
        lp = lp.equality(row, d[k].clone());
    }
    for j in 0..n {
        let mut row = vec![Rational::zero(); n * n];
        for k in 0..n {
            row[var(k, j)] = Rational::one();
        }
        lp = lp.equality(row, Rational::one());
    }
    Ok(lp)
}

/// A `d`-stochastic `A` with `Ay = x`, if one exists.
pub fn find_witness(x: &RVec, y: &RVec, d: &WeightVec) -> Result<Option<StochMatrix>> {
    let lp = witness_program(x, y, d)?;
    let z = match lp::feasible(&lp)? {
        Feasibility::Feasible(z) => z,
        Feasibility::Infeasible(_) => return Ok(None),
    };
    let n = d.len();
    let mut m = RMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            m.set(k, j, z[n * j + k].clone());
        }
    }
    let a = StochMatrix::d_stochastic(m, d)?;
    if &a.apply(y) != x {
        return Err(Error::VerificationFailed("witness does not map y to x".into()));
    }
    Ok(Some(a))
}

/// A common order making both `x/d` and `y/d` nonincreasing, if one exists.
pub fn similarly_d_ordered(x: &RVec, y: &RVec, d: &WeightVec) -> Result<Option<Permutation>> {
    check_dims(x, y, d)?;
    let rx = d.ratios(x);
    let ry = d.ratios(y);
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| rx[b].cmp(&rx[a]).then(ry[b].cmp(&ry[a])).then(a.cmp(&b)));
    let ordered = idx.windows(2).all(|w| ry[w[0]].cmp(&ry[w[1]]) != Ordering::Less);
    Ok(ordered.then(|| Permutation::from_images(idx).expect("sorted indices form a permutation")))
}

/// `(trace / 𝕖ᵀd)·d`, majorized by every vector of that trace.
pub fn minimal_element(trace: &Rational, d: &WeightVec) -> RVec {
    d.as_vec().scale(&(trace / d.sum()))
}

/// `(𝕖ᵀd)·e_k` for the first index `k` of a smallest entry of `d`, and
/// whether that smallest entry is attained only once.
pub fn maximal_element(d: &WeightVec) -> (RVec, bool) {
    let v = d.as_vec();
    let min = v.iter().min().expect("weight vectors are nonempty");
    let k = v.iter().position(|a| a == min).unwrap();
    let unique = v.iter().filter(|&a| a == min).count() == 1;
    (RVec::basis(v.len(), k).scale(&d.sum()), unique)
}
