//! Classical majorization: sorted partial sums, the halfspace form of the
//! permutohedron, and its vertex list.

use std::fmt;

use num_traits::Zero;

use crate::arith::{Permutation, RVec, Rational};
use crate::error::Result;
use crate::halfspace::{HalfspaceSystem, VPolytope, DEFAULT_MAX_PERMUTATION_N};

/// Where a partial-sum test first failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Totals differ: `𝕖ᵀx ≠ 𝕖ᵀy`.
    Trace { lhs: Rational, rhs: Rational },
    /// `Σ_{i≤j} x_i^· > Σ_{i≤j} y_i^·` at the one-based prefix length `j`.
    Prefix { j: usize, lhs: Rational, rhs: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Trace { lhs, rhs } => write!(f, "trace: {lhs} != {rhs}"),
            Violation::Prefix { j, lhs, rhs } => write!(f, "prefix {j}: {lhs} > {rhs}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorizationVerdict {
    pub holds: bool,
    pub first_violation: Option<Violation>,
}

impl MajorizationVerdict {
    fn from_violation(first_violation: Option<Violation>) -> Self {
        MajorizationVerdict {
            holds: first_violation.is_none(),
            first_violation,
        }
    }
}

/// Does `x ≺ y`? Argument order follows the reading "y majorizes x".
pub fn classical_majorizes(y: &RVec, x: &RVec) -> Result<MajorizationVerdict> {
    x.check_len(y.len())?;
    let (xs, _) = x.sort_descending();
    let (ys, _) = y.sort_descending();
    let mut lhs = Rational::zero();
    let mut rhs = Rational::zero();
    for j in 0..x.len().saturating_sub(1) {
        lhs += &xs[j];
        rhs += &ys[j];
        if lhs > rhs {
            return Ok(MajorizationVerdict::from_violation(Some(Violation::Prefix { j: j + 1, lhs, rhs })));
        }
    }
    let (tx, ty) = (x.sum(), y.sum());
    if tx != ty {
        return Ok(MajorizationVerdict::from_violation(Some(Violation::Trace { lhs: tx, rhs: ty })));
    }
    Ok(MajorizationVerdict::from_violation(None))
}

/// `𝔟(S) = Σ_{i≤|S|} y_i^·`, `T = 𝕖ᵀy`.
pub fn classical_hrep(y: &RVec) -> Result<HalfspaceSystem> {
    let (ys, _) = y.sort_descending();
    let mut prefix = vec![Rational::zero()];
    for v in ys.iter() {
        let next = prefix.last().unwrap() + v;
        prefix.push(next);
    }
    HalfspaceSystem::from_fn(y.len(), y.sum(), |m| prefix[m.cardinality()].clone())
}

/// `{σy : σ ∈ S_n}` without duplicates.
pub fn permutohedron_vertices(y: &RVec) -> Result<VPolytope> {
    let n = y.len();
    if n > DEFAULT_MAX_PERMUTATION_N {
        return Err(crate::error::Error::DimensionTooLarge {
            n,
            max: DEFAULT_MAX_PERMUTATION_N,
        });
    }
    let points = Permutation::all(n).map(|s| s.apply(y)).collect();
    VPolytope::from_vertices(n, points, Some(classical_hrep(y)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn verdict_examples() {
        let uniform = RVec::from_fracs(&[(1, 3), (1, 3), (1, 3)]);
        let e1 = RVec::from_ints(&[1, 0, 0]);
        assert!(classical_majorizes(&e1, &uniform).unwrap().holds);
        assert!(classical_majorizes(&e1, &e1).unwrap().holds);
        let x = RVec::from_ints(&[1, 1, -1]);
        let z = RVec::from_fracs(&[(-1, 3), (-2, 3), (2, 1)]);
        let v = classical_majorizes(&z, &x).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.first_violation,
            Some(Violation::Prefix {
                j: 2,
                lhs: int(2),
                rhs: rat(5, 3)
            })
        );
        let v = classical_majorizes(&e1, &RVec::from_ints(&[1, 1, 0])).unwrap();
        assert!(matches!(v.first_violation, Some(Violation::Prefix { j: 2, .. })));
        let v = classical_majorizes(&e1, &RVec::from_ints(&[0, 0, 0])).unwrap();
        assert!(matches!(v.first_violation, Some(Violation::Trace { .. })));
        assert!(classical_majorizes(&e1, &RVec::zeros(2)).is_err());
    }

    #[test]
    fn hrep_examples() {
        let sys = classical_hrep(&RVec::from_ints(&[3, 2, 1])).unwrap();
        let ints = |v: &[i64]| v.iter().map(|&a| int(a)).collect::<Vec<_>>();
        assert_eq!(sys.b_vector(), ints(&[3, 3, 3, 5, 5, 5, 6, -6]));
        let zero = classical_hrep(&RVec::zeros(3)).unwrap();
        assert_eq!(zero.enumerate_vertices().unwrap().vertices(), &[RVec::zeros(3)]);
        let pair = classical_hrep(&RVec::from_ints(&[1, 0])).unwrap();
        assert_eq!(pair.b_vector(), ints(&[1, 1, 1, -1]));
        assert_eq!(
            pair.enumerate_vertices().unwrap().vertices(),
            &[RVec::from_ints(&[0, 1]), RVec::from_ints(&[1, 0])]
        );
    }

    #[test]
    fn permutohedron_counts() {
        assert_eq!(permutohedron_vertices(&RVec::from_ints(&[1, 0, 0])).unwrap().len(), 3);
        assert_eq!(permutohedron_vertices(&RVec::from_ints(&[3, 2, 1])).unwrap().len(), 6);
        assert_eq!(permutohedron_vertices(&RVec::from_ints(&[2, 2, 2, 2])).unwrap().len(), 1);
    }

    fn small_vec(n: usize) -> impl Strategy<Value = RVec> {
        proptest::collection::vec((-5i64..=5, 1i64..=4), n).prop_map(|v| RVec::from_fracs(&v))
    }

    fn pair(max_n: usize) -> impl Strategy<Value = (RVec, RVec)> {
        (1..=max_n).prop_flat_map(|n| (small_vec(n), small_vec(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn verdict_matches_hrep((y, x) in pair(6)) {
            // force the trace to agree half the time so both branches are hit
            let x = if x[0] < int(0) {
                let shift = (y.sum() - x.sum()) / Rational::from_integer((x.len() as i64).into());
                x.iter().map(|v| v + &shift).collect()
            } else {
                x
            };
            let sys = classical_hrep(&y).unwrap();
            prop_assert_eq!(classical_majorizes(&y, &x).unwrap().holds, sys.contains(&x).unwrap());
        }

        #[test]
        fn hrep_vertices_are_permutations(y in (1..=5usize).prop_flat_map(small_vec)) {
            let from_h = classical_hrep(&y).unwrap().enumerate_vertices().unwrap();
            let from_v = permutohedron_vertices(&y).unwrap();
            prop_assert_eq!(from_h.vertices(), from_v.vertices());
        }

        #[test]
        fn invariant_under_permutation((y, x) in pair(5), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let n = x.len();
            let mut a: Vec<usize> = (0..n).collect();
            let mut b = a.clone();
            a.shuffle(&mut rng);
            b.shuffle(&mut rng);
            let (s, t) = (Permutation::from_images(a).unwrap(), Permutation::from_images(b).unwrap());
            let base = classical_majorizes(&y, &x).unwrap().holds;
            prop_assert_eq!(classical_majorizes(&t.apply(&y), &s.apply(&x)).unwrap().holds, base);
        }
    }
}
