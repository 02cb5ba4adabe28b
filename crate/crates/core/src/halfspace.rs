//! Polytopes `{x | Mx ≤ b}` for the fixed 0/1 matrix `M` whose rows are all
//! indicator vectors of nonempty proper subsets, plus `±𝕖ᵀ`.
//!
//! `M` is never stored: a row is a [`RowMask`] and a right-hand side is the
//! map `S ↦ 𝔟(S)` held by [`HalfspaceSystem`]. The two trace rows collapse
//! into a single trace value `T`, which forces `𝕖ᵀx = T`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::arith::{RMatrix, RVec, Rational};
use crate::error::{Error, Result};
use crate::lp::{self, Feasibility, LinearProgram};

/// Largest dimension for which a system can be built at all.
pub const MAX_DIM: usize = 20;
/// Default cap for sweeps over all of `S_n`.
pub const DEFAULT_MAX_PERMUTATION_N: usize = 7;
/// Default cap for the generic row-subset vertex enumeration.
pub const DEFAULT_MAX_GENERIC_N: usize = 8;

/// A 0/1 row of `M`, i.e. a subset `S ⊆ {0, .., n-1}` (bit `i` ↔ index `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowMask {
    n: usize,
    bits: u32,
}

impl RowMask {
    pub fn new(n: usize, bits: u32) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} too large");
        assert!(bits < (1u32 << n), "mask {bits:#b} out of range for n = {n}");
        RowMask { n, bits }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        Self::new(n, indices.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn full(n: usize) -> Self {
        Self::new(n, ((1u64 << n) - 1) as u32)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits & (1 << i) != 0
    }

    pub fn cardinality(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_full(&self) -> bool {
        self.bits == Self::full(self.n).bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Zero-based members in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.contains(i)).collect()
    }

    /// `Σ_{i∈S} x_i`
    pub fn dot(&self, x: &RVec) -> Rational {
        self.indices().iter().fold(Rational::zero(), |acc, &i| acc + &x[i])
    }

    pub fn row(&self) -> Vec<Rational> {
        (0..self.n)
            .map(|i| Rational::from_integer(i64::from(self.contains(i)).into()))
            .collect()
    }

    /// All nonempty proper masks in the fixed row order of `M`: by
    /// cardinality, then lexicographically by sorted member list.
    pub fn proper(n: usize) -> Vec<RowMask> {
        let mut masks: Vec<RowMask> = (1..(1u32 << n) - 1).map(|b| RowMask::new(n, b)).collect();
        masks.sort_by_key(|m| (m.cardinality(), m.indices()));
        masks
    }
}

impl fmt::Display for RowMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", one_based.join(","))
    }
}

/// Right-hand side of `Mx ≤ b` with the trace pairing built in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfspaceSystem {
    n: usize,
    /// Indexed by mask bits; `b[0] = 0` and `b[full] = T`.
    b: Vec<Rational>,
}

impl HalfspaceSystem {
    /// Builds `𝔟` from a function on nonempty proper masks and the trace.
    pub fn from_fn(n: usize, trace: Rational, mut value: impl FnMut(RowMask) -> Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("dimension zero"));
        }
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_DIM });
        }
        let size = 1usize << n;
        let mut b = Vec::with_capacity(size);
        b.push(Rational::zero());
        for bits in 1..size - 1 {
            b.push(value(RowMask::new(n, bits as u32)));
        }
        if size > 1 {
            b.push(trace);
        }
        Ok(HalfspaceSystem { n, b })
    }

    /// Builds from values listed in [`RowMask::proper`] order.
    pub fn from_values(n: usize, values: &[Rational], trace: Rational) -> Result<Self> {
        let masks = RowMask::proper(n.min(MAX_DIM));
        if values.len() != masks.len() {
            return Err(Error::LengthMismatch {
                expected: masks.len(),
                found: values.len(),
            });
        }
        let lookup: BTreeMap<u32, &Rational> =
            masks.iter().map(|m| m.bits).zip(values.iter()).collect();
        Self::from_fn(n, trace, |m| lookup[&m.bits].clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trace(&self) -> &Rational {
        &self.b[self.b.len() - 1]
    }

    /// `𝔟(S)`; `𝔟(∅) = 0` and `𝔟(full) = T`.
    pub fn value(&self, mask: RowMask) -> &Rational {
        assert_eq!(mask.n, self.n, "mask dimension mismatch");
        &self.b[mask.bits as usize]
    }

    /// `𝔟` on proper masks, in [`RowMask::proper`] order.
    pub fn values(&self) -> Vec<Rational> {
        RowMask::proper(self.n).into_iter().map(|m| self.value(m).clone()).collect()
    }

    /// The full vector `b ∈ ℚ^(2^n)`: proper-mask values followed by `T, −T`.
    pub fn b_vector(&self) -> Vec<Rational> {
        let mut v = self.values();
        v.push(self.trace().clone());
        v.push(-self.trace());
        v
    }

    /// `‖b − b′‖₁` over the full `2^n` vector (the trace counts twice).
    pub fn b_distance(&self, other: &HalfspaceSystem) -> Result<Rational> {
        self.same_dim(other)?;
        let rows: Rational = self.values().iter().zip(other.values()).map(|(a, b)| (a - b).abs()).sum();
        Ok(rows + (self.trace() - other.trace()).abs() * Rational::from_integer(2.into()))
    }

    fn same_dim(&self, other: &HalfspaceSystem) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            })
        }
    }

    /// `Σ_{i∈S} x_i` for every mask, indexed by bits.
    fn subset_sums(x: &RVec) -> Vec<Rational> {
        let size = 1usize << x.len();
        let mut sums = vec![Rational::zero(); size];
        for bits in 1..size {
            let low = bits.trailing_zeros() as usize;
            sums[bits] = &sums[bits & (bits - 1)] + &x[low];
        }
        sums
    }

    /// `Mx ≤ b`: every proper mask inequality and `𝕖ᵀx = T`.
    pub fn contains(&self, x: &RVec) -> Result<bool> {
        x.check_len(self.n)?;
        let sums = Self::subset_sums(x);
        let full = sums.len() - 1;
        if sums[full] != self.b[full] {
            return Ok(false);
        }
        Ok((1..full).all(|bits| sums[bits] <= self.b[bits]))
    }

    /// `{Mx ≤ b} ⊆ {Mx ≤ b′}`, decided by `b ≤ b′` entrywise.
    pub fn subset(&self, other: &HalfspaceSystem) -> Result<bool> {
        self.same_dim(other)?;
        Ok(self.trace() == other.trace() && self.b.iter().zip(&other.b).all(|(a, b)| a <= b))
    }

    /// `{Mx ≤ b} + p = {Mx ≤ b + Mp}`.
    pub fn translate(&self, p: &RVec) -> Result<HalfspaceSystem> {
        p.check_len(self.n)?;
        let sums = Self::subset_sums(p);
        Ok(HalfspaceSystem {
            n: self.n,
            b: self.b.iter().zip(sums).map(|(b, s)| b + s).collect(),
        })
    }

    /// `{Mx ≤ b} ∩ {Mx ≤ b′} = {Mx ≤ min(b, b′)}` on a shared trace plane.
    pub fn intersect(&self, other: &HalfspaceSystem) -> Result<HalfspaceSystem> {
        self.same_dim(other)?;
        if self.trace() != other.trace() {
            return Err(Error::EmptyIntersection(Box::new(self.trace().clone()), Box::new(other.trace().clone())));
        }
        Ok(HalfspaceSystem {
            n: self.n,
            b: self.b.iter().zip(&other.b).map(|(a, b)| a.min(b).clone()).collect(),
        })
    }

    /// The candidate vertex `E_b(σ)`: `x_{σ(j)} = 𝔟(prefix_j) − 𝔟(prefix_{j−1})`
    /// where `prefix_j = {σ(0), .., σ(j−1)}`.
    pub fn corner(&self, sigma: &crate::arith::Permutation) -> Result<RVec> {
        if sigma.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: sigma.len(),
            });
        }
        let mut x = vec![Rational::zero(); self.n];
        let mut prefix = 0usize;
        for &i in sigma.images() {
            let next = prefix | (1 << i);
            x[i] = &self.b[next] - &self.b[prefix];
            prefix = next;
        }
        Ok(RVec::new(x))
    }

    /// Every distinct `E_b(σ)`, each labelled with the lexicographically
    /// first `σ` producing it.
    pub fn corner_map(&self) -> Result<BTreeMap<RVec, crate::arith::Permutation>> {
        self.corner_map_capped(DEFAULT_MAX_PERMUTATION_N)
    }

    pub fn corner_map_capped(&self, max_n: usize) -> Result<BTreeMap<RVec, crate::arith::Permutation>> {
        if self.n > max_n {
            return Err(Error::DimensionTooLarge { n: self.n, max: max_n });
        }
        let mut out = BTreeMap::new();
        for sigma in crate::arith::Permutation::all(self.n) {
            let x = self.corner(&sigma)?;
            out.entry(x).or_insert(sigma);
        }
        Ok(out)
    }

    /// Non-emptiness by a phase-one program over free `x`.
    pub fn is_empty(&self) -> Result<bool> {
        let mut lp = LinearProgram::new(self.n).equality(RowMask::full(self.n).row(), self.trace().clone());
        for j in 0..self.n {
            lp = lp.free(j);
        }
        for m in RowMask::proper(self.n) {
            lp = lp.less_equal(m.row(), self.value(m).clone());
        }
        Ok(matches!(lp::feasible(&lp)?, Feasibility::Infeasible(_)))
    }

    /// Generic extreme-point enumeration: every `n`-row subsystem that
    /// contains the trace row and has full rank is solved exactly, and the
    /// solutions lying in the polytope are kept. Returns an empty polytope if
    /// the system is infeasible.
    pub fn enumerate_vertices(&self) -> Result<VPolytope> {
        self.enumerate_vertices_capped(DEFAULT_MAX_GENERIC_N)
    }

    pub fn enumerate_vertices_capped(&self, max_n: usize) -> Result<VPolytope> {
        let n = self.n;
        if n > max_n {
            return Err(Error::DimensionTooLarge { n, max: max_n });
        }
        let mut vertices = Vec::new();
        if !self.is_empty()? {
            let proper = RowMask::proper(n);
            let full = RowMask::full(n);
            for chosen in proper.iter().combinations(n - 1) {
                let mut rows: Vec<Vec<Rational>> = chosen.iter().map(|m| m.row()).collect();
                rows.push(full.row());
                let mut rhs: Vec<Rational> = chosen.iter().map(|m| self.value(**m).clone()).collect();
                rhs.push(self.trace().clone());
                let m = RMatrix::from_rows(rows)?;
                if let Some(x) = m.solve(&RVec::new(rhs)) {
                    if self.contains(&x)? {
                        vertices.push(x);
                    }
                }
            }
        }
        vertices.sort();
        vertices.dedup();
        Ok(VPolytope {
            n,
            vertices,
            origin: Some(self.clone()),
        })
    }
}

/// A polytope given by its extreme points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    n: usize,
    vertices: Vec<RVec>,
    origin: Option<HalfspaceSystem>,
}

impl VPolytope {
    /// Wraps points already known to be the extreme points (sorted and
    /// deduplicated here).
    pub fn from_vertices(n: usize, mut vertices: Vec<RVec>, origin: Option<HalfspaceSystem>) -> Result<Self> {
        for v in &vertices {
            v.check_len(n)?;
        }
        vertices.sort();
        vertices.dedup();
        Ok(VPolytope { n, vertices, origin })
    }

    /// Convex hull of arbitrary points: duplicates and points inside the
    /// hull of the others are dropped.
    pub fn hull_of(n: usize, points: Vec<RVec>) -> Result<Self> {
        let mut p = Self::from_vertices(n, points, None)?;
        let mut i = 0;
        while i < p.vertices.len() {
            let others: Vec<RVec> = p
                .vertices
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, v)| v.clone())
                .collect();
            if !others.is_empty() && in_convex_hull(&others, &p.vertices[i])? {
                p.vertices.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[RVec] {
        &self.vertices
    }

    pub fn origin(&self) -> Option<&HalfspaceSystem> {
        self.origin.as_ref()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Convex-hull membership by a feasibility program over the weights.
    pub fn contains_point(&self, x: &RVec) -> Result<bool> {
        x.check_len(self.n)?;
        if self.vertices.is_empty() {
            return Ok(false);
        }
        in_convex_hull(&self.vertices, x)
    }
}

/// `x ∈ conv(points)`: `Σλ_k p_k = x`, `Σλ_k = 1`, `λ ≥ 0`.
pub fn in_convex_hull(points: &[RVec], x: &RVec) -> Result<bool> {
    let m = points.len();
    let one = Rational::from_integer(1.into());
    let mut lp = LinearProgram::new(m).equality(vec![one.clone(); m], one);
    for i in 0..x.len() {
        lp = lp.equality(points.iter().map(|p| p[i].clone()).collect(), x[i].clone());
    }
    Ok(matches!(lp::feasible(&lp)?, Feasibility::Feasible(_)))
}
