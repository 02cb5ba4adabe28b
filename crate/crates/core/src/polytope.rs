//! The polytope `M_d(y) = {x | x ≺_d y}`: halfspace form, vertices, the
//! classically maximal corner, 1-norm Hausdorff distances and the Lipschitz
//! constant of `b ↦ {Mx ≤ b}`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::arith::{Permutation, RMatrix, RVec, Rational};
use crate::curve::ThermoCurve;
use crate::dmaj::{min_affine, WeightVec};
use crate::error::{Error, Result};
use crate::halfspace::{HalfspaceSystem, RowMask, VPolytope, DEFAULT_MAX_GENERIC_N, DEFAULT_MAX_PERMUTATION_N};
use crate::lp::{self, LinearProgram};

/// Largest `n` accepted by [`lipschitz_constant`].
pub const MAX_LIPSCHITZ_N: usize = 5;

/// `𝔟(S) = min_i [𝕖ᵀ(y − r_i d)_+ + r_i d(S)]`, `r_i = y_i/d_i`, `T = 𝕖ᵀy`.
pub fn build_dmaj_hrep(y: &RVec, d: &WeightVec) -> Result<HalfspaceSystem> {
    y.check_len(d.len())?;
    let sys = HalfspaceSystem::from_fn(d.len(), y.sum(), |m| min_affine(y, d, &m.dot(d.as_vec())))?;
    debug_assert_eq!(Ok(&sys), build_dmaj_hrep_via_curve(y, d).as_ref());
    Ok(sys)
}

/// The same system read off the curve: `𝔟(S) = f(d(S))`.
pub fn build_dmaj_hrep_via_curve(y: &RVec, d: &WeightVec) -> Result<HalfspaceSystem> {
    let curve = ThermoCurve::build(y, d)?;
    HalfspaceSystem::from_fn(d.len(), y.sum(), |m| {
        curve.eval(&m.dot(d.as_vec())).expect("mask sums lie in the domain")
    })
}

/// Every vertex of `M_d(y)` with the first `σ` producing it as `E_b(σ)`.
pub fn dmaj_vertex_labels(y: &RVec, d: &WeightVec, max_n: usize) -> Result<BTreeMap<RVec, Permutation>> {
    build_dmaj_hrep(y, d)?.corner_map_capped(max_n)
}

/// `{E_b(σ) : σ ∈ S_n}` for `b` of `M_d(y)`; complete without any generic
/// enumeration.
pub fn dmaj_vertices(y: &RVec, d: &WeightVec) -> Result<VPolytope> {
    dmaj_vertices_capped(y, d, DEFAULT_MAX_PERMUTATION_N)
}

pub fn dmaj_vertices_capped(y: &RVec, d: &WeightVec, max_n: usize) -> Result<VPolytope> {
    let sys = build_dmaj_hrep(y, d)?;
    let corners = sys.corner_map_capped(max_n)?;
    VPolytope::from_vertices(d.len(), corners.into_keys().collect(), Some(sys))
}

/// [`dmaj_vertices`] cross-checked against generic enumeration.
pub fn dmaj_vertices_verified(y: &RVec, d: &WeightVec) -> Result<VPolytope> {
    let fast = dmaj_vertices(y, d)?;
    let sys = fast.origin().expect("built from a system");
    let generic = sys.enumerate_vertices_capped(DEFAULT_MAX_GENERIC_N)?;
    if generic.vertices() != fast.vertices() {
        return Err(Error::VerificationFailed(format!(
            "{} corners against {} enumerated vertices",
            fast.len(),
            generic.len()
        )));
    }
    Ok(fast)
}

/// `E_b(σ)` with `σ` sorting `d` nonincreasingly (ties by index). For
/// `y ≥ 0` it lies in `M_d(y)` and classically majorizes all of it.
pub fn classical_max_corner(y: &RVec, d: &WeightVec) -> Result<RVec> {
    y.check_len(d.len())?;
    if !y.is_nonnegative() {
        return Err(Error::NegativeEntries);
    }
    let (_, sigma) = d.as_vec().sort_descending();
    build_dmaj_hrep(y, d)?.corner(&sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HausdorffResult {
    pub distance: Rational,
    /// A vertex whose distance to the other polytope realizes `distance`.
    pub attaining_vertex: RVec,
    /// Which argument `attaining_vertex` belongs to.
    pub side: Side,
}

/// `min_{w ∈ conv Q} ‖v − w‖₁`: variables `λ ∈ ℝ^m`, `u⁺, u⁻ ∈ ℝ^n`, all
/// nonnegative, with `Σλ_k q_k + u⁺ − u⁻ = v`, `Σλ = 1`.
pub fn distance_to_polytope(v: &RVec, q: &VPolytope) -> Result<Rational> {
    if q.is_empty() {
        return Err(Error::EmptyInput("polytope without vertices"));
    }
    let n = q.n();
    v.check_len(n)?;
    let m = q.len();
    let zero = Rational::zero;
    let mut objective = vec![zero(); m];
    objective.extend(vec![Rational::one(); 2 * n]);
    let mut prog = LinearProgram::new(m + 2 * n).with_objective(objective);
    for i in 0..n {
        let mut row: Vec<Rational> = q.vertices().iter().map(|w| w[i].clone()).collect();
        row.extend((0..n).map(|k| if k == i { Rational::one() } else { zero() }));
        row.extend((0..n).map(|k| if k == i { -Rational::one() } else { zero() }));
        prog = prog.equality(row, v[i].clone());
    }
    let mut sum_row = vec![Rational::one(); m];
    sum_row.extend(vec![zero(); 2 * n]);
    prog = prog.equality(sum_row, Rational::one());
    Ok(lp::minimize(&prog)?.value)
}

/// 1-norm Hausdorff distance of two vertex-described polytopes. The
/// distance to a convex set is convex, so vertices attain each half.
pub fn hausdorff(p: &VPolytope, q: &VPolytope) -> Result<HausdorffResult> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput("polytope without vertices"));
    }
    if p.n() != q.n() {
        return Err(Error::LengthMismatch {
            expected: p.n(),
            found: q.n(),
        });
    }
    let mut best = HausdorffResult {
        distance: Rational::zero(),
        attaining_vertex: p.vertices()[0].clone(),
        side: Side::First,
    };
    for (from, to, side) in [(p, q, Side::First), (q, p, Side::Second)] {
        for v in from.vertices() {
            let dist = distance_to_polytope(v, to)?;
            if dist > best.distance {
                best = HausdorffResult {
                    distance: dist,
                    attaining_vertex: v.clone(),
                    side,
                };
            }
        }
    }
    Ok(best)
}

/// `max ‖M′⁻¹‖_{1→1}` over invertible `n × n` row submatrices `M′` of `M`.
/// Only `+𝕖ᵀ` is used among the trace rows: negating a row negates a
/// column of the inverse and leaves the norm unchanged.
pub fn lipschitz_constant(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::EmptyInput("dimension zero"));
    }
    if n > MAX_LIPSCHITZ_N {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_LIPSCHITZ_N,
        });
    }
    let mut masks = RowMask::proper(n);
    masks.push(RowMask::full(n));
    let mut best = Rational::zero();
    for rows in masks.iter().combinations(n) {
        let m = RMatrix::from_rows(rows.iter().map(|r| r.row()).collect())?;
        if let Some(inv) = m.inverse() {
            let norm = inv.one_to_one_norm();
            if norm > best {
                best = norm;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonexpansiveCheck {
    /// Upper bound on `Δ(∪_i M_d(p_i), ∪_j M_d(q_j))`.
    pub image_bound: Rational,
    /// `Δ({p_i}, {q_j})`.
    pub source_distance: Rational,
}

impl NonexpansiveCheck {
    pub fn holds(&self) -> bool {
        self.image_bound <= self.source_distance
    }
}

/// `‖a − b‖₁`
fn l1(a: &RVec, b: &RVec) -> Rational {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum()
}

/// Both point lists are read as finite sets. The image of a set under `M_d`
/// is the union of the per-point polytopes, and
/// `Δ(∪A_i, ∪B_j) ≤ max(max_i min_j Δ(A_i, B_j), max_j min_i Δ(A_i, B_j))`;
/// that bound is compared with the discrete Hausdorff distance of the points.
pub fn nonexpansive_check(d: &WeightVec, p: &VPolytope, q: &VPolytope) -> Result<NonexpansiveCheck> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput("polytope without vertices"));
    }
    let images = |poly: &VPolytope| -> Result<Vec<VPolytope>> {
        poly.vertices().iter().map(|v| dmaj_vertices(v, d)).collect()
    };
    let (ip, iq) = (images(p)?, images(q)?);
    let mut pair = vec![vec![Rational::zero(); iq.len()]; ip.len()];
    for (i, a) in ip.iter().enumerate() {
        for (j, b) in iq.iter().enumerate() {
            pair[i][j] = hausdorff(a, b)?.distance;
        }
    }
    let directed = |rows: usize, cols: usize, at: &dyn Fn(usize, usize) -> Rational| -> Rational {
        (0..rows)
            .map(|i| (0..cols).map(|j| at(i, j)).min().unwrap())
            .max()
            .unwrap()
    };
    let (np, nq) = (p.len(), q.len());
    let image_bound = directed(np, nq, &|i, j| pair[i][j].clone()).max(directed(nq, np, &|j, i| pair[i][j].clone()));
    let (pv, qv) = (p.vertices(), q.vertices());
    let source_distance =
        directed(np, nq, &|i, j| l1(&pv[i], &qv[j])).max(directed(nq, np, &|j, i| l1(&pv[i], &qv[j])));
    Ok(NonexpansiveCheck {
        image_bound,
        source_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::classical::{classical_hrep, classical_majorizes};
    use crate::dmaj::dmaj_by_onenorm;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| int(a)).collect()
    }

    fn pts(v: &[[i64; 3]]) -> Vec<RVec> {
        let mut out: Vec<RVec> = v.iter().map(|p| RVec::from_ints(p)).collect();
        out.sort();
        out
    }

    #[test]
    fn hrep_examples() {
        let d = WeightVec::from_ints(&[4, 2, 1]).unwrap();
        let y = RVec::from_ints(&[4, -2, 2]);
        let sys = build_dmaj_hrep(&y, &d).unwrap();
        assert_eq!(sys.values(), ints(&[5, 3, 2, 5, 6, 4]));
        assert_eq!(sys.trace(), &int(4));
        assert_eq!(build_dmaj_hrep_via_curve(&y, &d).unwrap(), sys);

        let d = WeightVec::from_ints(&[1, 2, 3]).unwrap();
        let sys = build_dmaj_hrep(&RVec::from_ints(&[1, 1, -1]), &d).unwrap();
        assert_eq!(sys.values(), vec![int(1), rat(3, 2), int(2), int(2), rat(5, 3), rat(4, 3)]);
        assert_eq!(sys.trace(), &int(1));

        let y = RVec::from_fracs(&[(3, 1), (-1, 2), (2, 3), (0, 1)]);
        assert_eq!(build_dmaj_hrep(&y, &WeightVec::uniform(4)).unwrap(), classical_hrep(&y).unwrap());
    }

    #[test]
    fn translated_balls_intersect_to_hrep() {
        // b is the minimum over i of the 1-norm ball around z = y − r_i d,
        // translated back by r_i d; the ball is the classical polytope of
        // (𝕖ᵀz₊, −𝕖ᵀz₋, 0)
        let d = WeightVec::from_ints(&[4, 2, 1]).unwrap();
        let y = RVec::from_ints(&[4, -2, 2]);
        let mut acc: Option<HalfspaceSystem> = None;
        for r in d.ratios(&y) {
            let z = &y - &d.as_vec().scale(&r);
            let gen = RVec::new(vec![z.pos_part().sum(), -z.neg_part().sum(), Rational::zero()]);
            let moved = classical_hrep(&gen).unwrap().translate(&d.as_vec().scale(&r)).unwrap();
            acc = Some(match acc {
                None => moved,
                Some(a) => a.intersect(&moved).unwrap(),
            });
        }
        let acc = acc.unwrap();
        assert_eq!(acc.values(), ints(&[5, 3, 2, 5, 6, 4]));
        assert_eq!(acc.trace(), &int(4));
    }

    #[test]
    fn vertex_examples() {
        let d = WeightVec::from_ints(&[4, 2, 1]).unwrap();
        let v = dmaj_vertices(&RVec::from_ints(&[4, -2, 2]), &d).unwrap();
        let want = pts(&[[5, 0, -1], [5, -2, 1], [2, 3, -1], [0, 3, 1], [4, -2, 2], [0, 2, 2]]);
        assert_eq!(v.vertices(), want.as_slice());
        assert!(dmaj_vertices_verified(&RVec::from_ints(&[4, -2, 2]), &d).is_ok());

        let d = WeightVec::from_ints(&[1, 2, 3]).unwrap();
        let v = dmaj_vertices(&RVec::from_ints(&[1, 1, -1]), &d).unwrap();
        let mut want = vec![
            RVec::from_ints(&[1, 1, -1]),
            RVec::from_fracs(&[(1, 1), (-2, 3), (2, 3)]),
            RVec::from_fracs(&[(1, 2), (3, 2), (-1, 1)]),
            RVec::from_fracs(&[(-1, 3), (3, 2), (-1, 6)]),
            RVec::from_fracs(&[(-1, 3), (-2, 3), (2, 1)]),
        ];
        want.sort();
        assert_eq!(v.vertices(), want.as_slice());

        let y = RVec::from_ints(&[3, 2, 1]);
        let v = dmaj_vertices(&y, &WeightVec::new(y.clone()).unwrap()).unwrap();
        assert_eq!(v.vertices(), &[y]);
    }

    #[test]
    fn max_corner_examples() {
        let e = WeightVec::uniform(3);
        let y = RVec::from_ints(&[3, 2, 1]);
        assert_eq!(classical_max_corner(&y, &e).unwrap(), y);
        let d = WeightVec::new(RVec::from_fracs(&[(23, 10), (2, 1), (17, 10)])).unwrap();
        assert_eq!(classical_max_corner(&y, &d).unwrap(), y);
        let d = WeightVec::from_ints(&[1, 2, 3]).unwrap();
        let err = classical_max_corner(&RVec::from_ints(&[1, 1, -1]), &d).unwrap_err();
        assert_eq!(err.to_string(), "y has negative entries; no classical maximum exists in general");
    }

    #[test]
    fn hausdorff_examples() {
        let d = WeightVec::from_ints(&[4, 2, 1]).unwrap();
        let p = dmaj_vertices(&RVec::from_ints(&[4, -2, 2]), &d).unwrap();
        assert_eq!(hausdorff(&p, &p).unwrap().distance, int(0));
        let a = VPolytope::from_vertices(3, vec![RVec::from_ints(&[5, 0, -1])], None).unwrap();
        let b = VPolytope::from_vertices(3, vec![RVec::from_ints(&[4, -2, 2])], None).unwrap();
        assert_eq!(hausdorff(&a, &b).unwrap().distance, int(6));
        // a point inside p is at distance zero from p; p's far vertex decides
        let r = hausdorff(&b, &p).unwrap();
        assert_eq!(r.side, Side::Second);
        assert_eq!(r.distance, distance_to_polytope(&r.attaining_vertex, &b).unwrap());
        let empty = VPolytope::from_vertices(3, vec![], None).unwrap();
        assert!(matches!(hausdorff(&p, &empty), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn lipschitz_small() {
        assert_eq!(lipschitz_constant(1).unwrap(), int(1));
        assert_eq!(lipschitz_constant(2).unwrap(), int(2));
        assert_eq!(lipschitz_constant(3).unwrap(), int(3));
        assert!(matches!(lipschitz_constant(6), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn nonexpansive_examples() {
        let d = WeightVec::from_ints(&[4, 2, 1]).unwrap();
        let y = RVec::from_ints(&[4, -2, 2]);
        let p = VPolytope::from_vertices(3, vec![y.clone()], None).unwrap();
        let r = nonexpansive_check(&d, &p, &p).unwrap();
        assert!(r.holds() && r.image_bound.is_zero() && r.source_distance.is_zero());
        let eps = rat(1, 10);
        let moved = RVec::new(vec![&y[0] + &eps, &y[1] - &eps, y[2].clone()]);
        let q = VPolytope::from_vertices(3, vec![moved], None).unwrap();
        let r = nonexpansive_check(&d, &p, &q).unwrap();
        assert!(r.holds());
        assert_eq!(r.source_distance, rat(1, 5));

        let x = RVec::from_fracs(&[(2, 5), (1, 5), (2, 5)]);
        let y = RVec::from_fracs(&[(1, 4), (1, 2), (1, 4)]);
        let e = WeightVec::uniform(3);
        let p = VPolytope::from_vertices(3, vec![x], None).unwrap();
        let q = VPolytope::from_vertices(3, vec![y], None).unwrap();
        assert!(nonexpansive_check(&e, &p, &q).unwrap().holds());
    }

    #[test]
    fn union_is_not_convex() {
        let e = WeightVec::uniform(3);
        let x = RVec::from_fracs(&[(2, 5), (1, 5), (2, 5)]);
        let x_tilde = RVec::from_fracs(&[(1, 4), (1, 4), (1, 2)]);
        let y = RVec::from_fracs(&[(1, 4), (1, 2), (1, 4)]);
        let mid: RVec = x.iter().zip(x_tilde.iter()).map(|(a, b)| (a + b) / int(2)).collect();
        assert_eq!(mid, RVec::from_fracs(&[(13, 40), (9, 40), (18, 40)]));
        assert!(!build_dmaj_hrep(&x, &e).unwrap().contains(&mid).unwrap());
        assert!(!build_dmaj_hrep(&y, &e).unwrap().contains(&mid).unwrap());
        assert!(build_dmaj_hrep(&y, &e).unwrap().contains(&x_tilde).unwrap());
    }

    fn frac() -> impl Strategy<Value = Rational> {
        (-5i64..=5, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    fn case(n: usize) -> impl Strategy<Value = (RVec, WeightVec)> {
        (
            proptest::collection::vec(frac(), n),
            proptest::collection::vec((1i64..=6, 1i64..=3), n),
        )
            .prop_map(|(y, d)| (RVec::new(y), WeightVec::new(RVec::from_fracs(&d)).unwrap()))
    }

    fn any_case() -> impl Strategy<Value = (RVec, WeightVec)> {
        (2..=4usize).prop_flat_map(case)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn corners_complete((y, d) in any_case()) {
            let fast = dmaj_vertices(&y, &d).unwrap();
            let sys = fast.origin().unwrap();
            prop_assert!(fast.vertices().iter().all(|v| sys.contains(v).unwrap()));
            prop_assert!(sys.contains(&y).unwrap());
            let generic = sys.enumerate_vertices().unwrap();
            prop_assert_eq!(generic.vertices(), fast.vertices());
            let fact: usize = (1..=y.len()).product();
            prop_assert!(fast.len() <= fact);
        }

        #[test]
        fn curve_matches_min_form((y, d) in any_case()) {
            prop_assert_eq!(build_dmaj_hrep(&y, &d).unwrap(), build_dmaj_hrep_via_curve(&y, &d).unwrap());
        }

        #[test]
        fn closure_subset_matches_decider((y, d) in any_case(), w in proptest::collection::vec(0i64..=3, 24)) {
            let verts = dmaj_vertices(&y, &d).unwrap();
            // a convex combination of vertices is d-majorized by y
            let total: i64 = w[..verts.len()].iter().sum::<i64>().max(1);
            let mut x = RVec::zeros(y.len());
            for (v, &wk) in verts.vertices().iter().zip(&w) {
                x = &x + &v.scale(&rat(wk, total));
            }
            let x = if w[..verts.len()].iter().all(|&a| a == 0) { verts.vertices()[0].clone() } else { x };
            let hx = build_dmaj_hrep(&x, &d).unwrap();
            let hy = build_dmaj_hrep(&y, &d).unwrap();
            prop_assert!(dmaj_by_onenorm(&x, &y, &d).unwrap());
            prop_assert_eq!(hx.subset(&hy).unwrap(), true);
            prop_assert_eq!(hy.subset(&hx).unwrap(), dmaj_by_onenorm(&y, &x, &d).unwrap());
            // idempotence: the hull of M_d(x) is again M_d(x)
            let (hull, corners) = (hx.enumerate_vertices().unwrap(), dmaj_vertices(&x, &d).unwrap());
            prop_assert_eq!(hull.vertices(), corners.vertices());
        }

        #[test]
        fn star_shaped((y, d) in any_case(), w in proptest::collection::vec(0i64..=3, 24), mu in 0i64..=8) {
            let verts = dmaj_vertices(&y, &d).unwrap();
            let sys = verts.origin().unwrap();
            let total: i64 = w[..verts.len()].iter().sum::<i64>();
            prop_assume!(total > 0);
            let mut x = RVec::zeros(y.len());
            for (v, &wk) in verts.vertices().iter().zip(&w) {
                x = &x + &v.scale(&rat(wk, total));
            }
            let centre = d.as_vec().scale(&(y.sum() / d.sum()));
            let mu = rat(mu, 8);
            let p = &x.scale(&mu) + &centre.scale(&(Rational::one() - &mu));
            prop_assert!(sys.contains(&p).unwrap());
        }

        #[test]
        fn max_corner_dominates((y, d) in any_case(), w in proptest::collection::vec(0i64..=3, 24)) {
            let y: RVec = y.iter().map(|v| v.abs()).collect();
            let z = classical_max_corner(&y, &d).unwrap();
            let verts = dmaj_vertices(&y, &d).unwrap();
            prop_assert!(verts.origin().unwrap().contains(&z).unwrap());
            let total: i64 = w[..verts.len()].iter().sum::<i64>().max(1);
            let mut x = RVec::zeros(y.len());
            for (v, &wk) in verts.vertices().iter().zip(&w) {
                x = &x + &v.scale(&rat(wk, total));
            }
            if w[..verts.len()].iter().any(|&a| a > 0) {
                prop_assert!(classical_majorizes(&z, &x).unwrap().holds);
            }
            for v in verts.vertices() {
                prop_assert!(classical_majorizes(&z, v).unwrap().holds);
            }
        }

        #[test]
        fn lipschitz_bound_n3(b1 in proptest::collection::vec(-4i64..=4, 6), b2 in proptest::collection::vec(-4i64..=4, 6), t in -3i64..=3) {
            let c = int(3);
            let mk = |v: &[i64]| HalfspaceSystem::from_values(3, &ints(v), int(t)).unwrap();
            let (s1, s2) = (mk(b1.as_slice()), mk(b2.as_slice()));
            prop_assume!(!s1.is_empty().unwrap() && !s2.is_empty().unwrap());
            let p = s1.enumerate_vertices().unwrap();
            let q = s2.enumerate_vertices().unwrap();
            let delta = hausdorff(&p, &q).unwrap().distance;
            prop_assert!(delta <= c * s1.b_distance(&s2).unwrap());
        }
    }
}
