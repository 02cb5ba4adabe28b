//! Exact rational scalars, vectors, permutations and dense matrices.
//!
//! Everything in this crate is computed over [`Rational`]; floating point
//! only appears when rendering pictures.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedDiv, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_div(b).ok_or(Error::DivisionByZero)
}

/// Canonical `p/q` rendering used by every machine-readable output.
/// Integers keep the explicit `/1`.
pub fn fmt_pq(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

/// Parses integers, `p/q` fractions and finite decimals (`-0.25`, `2.3`)
/// without any loss of precision.
pub fn parse_rational(literal: &str) -> std::result::Result<Rational, ParseRationalError> {
    let s = literal.trim();
    let fail = |reason| ParseRationalError {
        literal: literal.to_string(),
        reason,
    };
    if s.is_empty() {
        return Err(fail("empty"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_decimal(p.trim()).ok_or_else(|| fail("bad numerator"))?;
        let q = parse_decimal(q.trim()).ok_or_else(|| fail("bad denominator"))?;
        if q.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(p / q);
    }
    parse_decimal(s).ok_or_else(|| fail("not an integer, fraction or decimal"))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Fixed-length vector of rationals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RVec(Vec<Rational>);

impl RVec {
    pub fn new(entries: Vec<Rational>) -> Self {
        RVec(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RVec(entries.iter().map(|&v| int(v)).collect())
    }

    /// Each pair is `(numerator, denominator)`.
    pub fn from_fracs(entries: &[(i64, i64)]) -> Self {
        RVec(entries.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        RVec(vec![Rational::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        RVec(vec![Rational::one(); n])
    }

    /// Standard basis vector `e_k` (zero-based `k`).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn dot(&self, other: &RVec) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, factor: &Rational) -> RVec {
        RVec(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn one_norm(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, v| acc + v.abs())
    }

    /// `(max{v_j, 0})_j`
    pub fn pos_part(&self) -> RVec {
        RVec(
            self.0
                .iter()
                .map(|v| if v.is_positive() { v.clone() } else { Rational::zero() })
                .collect(),
        )
    }

    /// `(max{-v_j, 0})_j`, so that `v = pos_part - neg_part`.
    pub fn neg_part(&self) -> RVec {
        RVec(
            self.0
                .iter()
                .map(|v| if v.is_negative() { -v } else { Rational::zero() })
                .collect(),
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|v| v.is_positive())
    }

    /// Returns `(v_sorted, tau)` with `v_sorted[j] = v[tau(j)]`, nonincreasing.
    /// Ties keep the smaller original index first.
    pub fn sort_descending(&self) -> (RVec, Permutation) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.0[b].cmp(&self.0[a]));
        let tau = Permutation(order);
        (tau.apply(self), tau)
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: n,
                found: self.len(),
            })
        }
    }
}

impl From<Vec<Rational>> for RVec {
    fn from(v: Vec<Rational>) -> Self {
        RVec(v)
    }
}

impl Index<usize> for RVec {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a RVec {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Rational> for RVec {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RVec(iter.into_iter().collect())
    }
}

impl Add for &RVec {
    type Output = RVec;

    fn add(self, rhs: &RVec) -> RVec {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect()
    }
}

impl Sub for &RVec {
    type Output = RVec;

    fn sub(self, rhs: &RVec) -> RVec {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect()
    }
}

impl Neg for &RVec {
    type Output = RVec;

    fn neg(self) -> RVec {
        self.0.iter().map(|a| -a).collect()
    }
}

impl fmt::Display for RVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A permutation of `{0, .., n-1}` stored by its images `σ(0), .., σ(n-1)`.
///
/// Acting on vectors, `(σ·x)_j = x_{σ(j)}`; composition `σ∘τ` acts as the
/// matrix product `τ·σ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Builds from zero-based images; rejects non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::MalformedProgram(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds from one-based images as written in formulas.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::MalformedProgram("one-based image 0".into()));
        }
        Self::from_images(images.iter().map(|&i| i - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn apply(&self, x: &RVec) -> RVec {
        assert_eq!(self.len(), x.len(), "permutation length mismatch");
        self.0.iter().map(|&i| x[i].clone()).collect()
    }

    /// `self ∘ other`, i.e. `j ↦ self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (j, &i) in self.0.iter().enumerate() {
            inv[i] = j;
        }
        Permutation(inv)
    }

    /// The permutation matrix `Σ_i e_i e_{σ(i)}^T`.
    pub fn matrix(&self) -> RMatrix {
        let n = self.len();
        let mut m = RMatrix::zeros(n, n);
        for (i, &j) in self.0.iter().enumerate() {
            m.set(i, j, Rational::one());
        }
        m
    }

    /// All of `S_n` in lexicographic order of image lists.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        use itertools::Itertools;
        (0..n).permutations(n).map(Permutation)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, ")")
    }
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> RVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &RVec) -> RVec {
        assert_eq!(self.cols, x.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.iter())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, factor: &Rational) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `max_j Σ_i |a_ij|`, the operator norm induced by the 1-norm.
    pub fn one_to_one_norm(&self) -> Rational {
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(Rational::zero(), |acc, i| acc + self.get(i, j).abs())
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Exact rank. Rows are scaled to integers and reduced with Bareiss'
    /// fraction-free elimination, so no intermediate rationals appear.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                row.iter()
                    .map(|v| v.numer() * (&lcm / v.denom()))
                    .collect()
            })
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            for r in rank + 1..rows {
                for c in col + 1..cols {
                    let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                    m[r][c] = v;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Solves `self · x = rhs` for square nonsingular `self`; `None` when
    /// singular.
    pub fn solve(&self, rhs: &RVec) -> Option<RVec> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.len(), "right-hand side length mismatch");
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(rhs[i].clone());
                row
            })
            .collect();
        gauss_jordan(&mut aug, n)?;
        Some(aug.into_iter().map(|row| row[n].clone()).collect())
    }

    pub fn inverse(&self) -> Option<RMatrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        gauss_jordan(&mut aug, n)?;
        let rows = aug.into_iter().map(|row| row[n..].to_vec()).collect();
        RMatrix::from_rows(rows).ok()
    }
}

/// Reduces the leading `n` columns of `aug` to the identity in place.
fn gauss_jordan(aug: &mut [Vec<Rational>], n: usize) -> Option<()> {
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                let (pivot_row, row) = if r < col {
                    let (a, b) = aug.split_at_mut(col);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = aug.split_at_mut(r);
                    (&a[col], &mut b[0])
                };
                for (v, p) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= &factor * p;
                }
            }
        }
    }
    Some(())
}

impl Mul for &RMatrix {
    type Output = RMatrix;

    fn mul(self, rhs: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = RMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let v = (0..self.cols).fold(Rational::zero(), |acc, k| {
                    acc + self.get(i, k) * rhs.get(k, j)
                });
                out.set(i, j, v);
            }
        }
        out
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
