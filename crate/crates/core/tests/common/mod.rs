//! Strategies and property bodies shared by the property and acceptance
//! targets.

use num_traits::Zero;
use poslab::envelope::{constrained_envelope, regularized_max, Axis, GridFunction, SlopePolytope};
use poslab::lattice::cone::{dual_cone, Pairing, RationalCone};
use poslab::lattice::polytope::{minkowski_sum, mixed_volume, LatticePolytope};
use poslab::lattice::rational::{q, RationalVector, Q};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

type Outcome = Result<(), TestCaseError>;

pub fn int_vec(dim: usize, r: i64) -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(-r..=r, dim).prop_map(|v| RationalVector::from_ints(&v))
}

pub fn points(dim: usize, min: usize, max: usize) -> impl Strategy<Value = Vec<RationalVector>> {
    prop::collection::vec(int_vec(dim, 3), min..=max)
}

pub fn full_polytope(dim: usize) -> impl Strategy<Value = LatticePolytope> {
    points(dim, dim + 1, dim + 4)
        .prop_map(move |pts| LatticePolytope::from_points(dim, &pts).unwrap())
        .prop_filter("full-dimensional", |p| p.is_full_dimensional())
}

fn truncate(v: RationalVector, dim: usize) -> RationalVector {
    RationalVector(v.0[..dim].to_vec())
}

pub fn biduality_input() -> impl Strategy<Value = (usize, Vec<RationalVector>)> {
    (1usize..=3, prop::collection::vec(int_vec(3, 3), 1..=5))
}

pub fn cone_biduality((dim, gens): (usize, Vec<RationalVector>)) -> Outcome {
    let gens: Vec<RationalVector> = gens.into_iter().map(|g| truncate(g, dim)).collect();
    let c = RationalCone::from_generators(dim, &gens).unwrap();
    let pairing = Pairing::standard(dim);
    let dd = dual_cone(&dual_cone(&c, &pairing).unwrap(), &pairing).unwrap();
    prop_assert!(dd.same_as(&c));
    for g in &gens {
        prop_assert!(c.contains(g));
    }
    Ok(())
}

pub fn facet_input() -> impl Strategy<Value = (usize, Vec<RationalVector>)> {
    (1usize..=3, points(3, 2, 7))
}

pub fn facet_identity((dim, pts): (usize, Vec<RationalVector>)) -> Outcome {
    let pts: Vec<RationalVector> = pts.into_iter().map(|p| truncate(p, dim)).collect();
    let p = LatticePolytope::from_points(dim, &pts).unwrap();
    if !p.is_full_dimensional() {
        return Err(TestCaseError::reject("lower-dimensional hull"));
    }
    let s = p.facet_measures().iter().zip(p.offsets()).fold(Q::zero(), |acc, (f, a)| acc + f * a);
    prop_assert_eq!(s, q(dim as i64) * p.volume());
    Ok(())
}

pub fn hexagon_offsets() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..=4, 6)
}

/// Hexagon normals; every nonnegative offset vector gives a polytope
/// containing the origin.
pub fn facet_identity_on_fixed_normals(offsets: Vec<i64>) -> Outcome {
    let normals = vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 0], vec![0, -1], vec![1, -1]];
    let a: Vec<Q> = offsets.iter().map(|&x| q(x)).collect();
    let p = LatticePolytope::new(normals, a.clone()).unwrap();
    let fm = p.facet_measures();
    if fm.is_empty() {
        return Err(TestCaseError::reject("lower-dimensional polytope"));
    }
    let s = fm.iter().zip(&a).fold(Q::zero(), |acc, (f, x)| acc + f * x);
    prop_assert_eq!(s, q(2) * p.volume());
    Ok(())
}

pub fn mixed_volume_symmetric_in_the_plane((a, b): (LatticePolytope, LatticePolytope)) -> Outcome {
    prop_assert_eq!(mixed_volume(&[&a, &b]).unwrap(), mixed_volume(&[&b, &a]).unwrap());
    prop_assert_eq!(mixed_volume(&[&a, &a]).unwrap(), a.volume());
    Ok(())
}

pub fn mixed_volume_additive((a, a2, b): (LatticePolytope, LatticePolytope, LatticePolytope)) -> Outcome {
    let sum = minkowski_sum(&[&a, &a2]).unwrap();
    let lhs = mixed_volume(&[&sum, &b]).unwrap();
    let rhs = mixed_volume(&[&a, &b]).unwrap() + mixed_volume(&[&a2, &b]).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn mixed_volume_homogeneous((a, b, k): (LatticePolytope, LatticePolytope, i64)) -> Outcome {
    let scaled =
        LatticePolytope::from_points(2, &a.vertices().iter().map(|v| v.scale(&q(k))).collect::<Vec<_>>()).unwrap();
    prop_assert_eq!(mixed_volume(&[&scaled, &b]).unwrap(), q(k) * mixed_volume(&[&a, &b]).unwrap());
    Ok(())
}

pub fn mixed_volume_symmetric_in_space((a, b, c): (LatticePolytope, LatticePolytope, LatticePolytope)) -> Outcome {
    let v = mixed_volume(&[&a, &b, &c]).unwrap();
    prop_assert_eq!(&v, &mixed_volume(&[&c, &a, &b]).unwrap());
    prop_assert_eq!(&v, &mixed_volume(&[&b, &a, &c]).unwrap());
    prop_assert!(v >= Q::zero());
    Ok(())
}

fn interval(lo: i64, hi: i64, m: usize) -> SlopePolytope {
    let p = LatticePolytope::new(vec![vec![1], vec![-1]], vec![q(-lo), q(hi)]).unwrap();
    SlopePolytope::new(&p, m).unwrap()
}

fn one_d(values: Vec<f64>) -> GridFunction {
    GridFunction::new(vec![Axis::symmetric(2.0, values.len())], values).unwrap()
}

pub type ObstacleInput = (Vec<f64>, Vec<f64>, i64, i64);

pub fn obstacle_input() -> impl Strategy<Value = ObstacleInput> {
    (prop::collection::vec(-1.0f64..1.0, 41), prop::collection::vec(0.0f64..0.5, 41), -2i64..=0, 1i64..=3)
}

/// Raising the obstacle raises the envelope, which stays below it.
pub fn envelope_monotone_in_the_obstacle((base, bump, lo, width): ObstacleInput) -> Outcome {
    let p = interval(lo, lo + width, 41);
    let h1 = one_d(base.clone());
    let h2 = one_d(base.iter().zip(&bump).map(|(a, b)| a + b).collect());
    let u1 = constrained_envelope(&h1, &p).unwrap();
    let u2 = constrained_envelope(&h2, &p).unwrap();
    for i in 0..h1.len() {
        prop_assert!(u1.values()[i] <= h1.values()[i] + 1e-12);
        prop_assert!(u1.values()[i] <= u2.values()[i] + 1e-12);
    }
    Ok(())
}

pub fn truncation_input() -> impl Strategy<Value = (Vec<f64>, f64, f64)> {
    (prop::collection::vec(-12.0f64..0.0, 41), 1.0f64..6.0, 0.0f64..6.0)
}

/// Lowering the truncation level lowers the envelope.
pub fn envelope_monotone_in_the_truncation((g, r1, dr): (Vec<f64>, f64, f64)) -> Outcome {
    let p = interval(0, 2, 41);
    let g = one_d(g);
    let psi = GridFunction::from_fn(g.axes().to_vec(), |x| (1.0 + (2.0 * x[0]).exp()).ln()).unwrap();
    let env = |r: f64| {
        let h = psi.zip_with(&regularized_max(&g, -r), |a, b| a + b).unwrap();
        constrained_envelope(&h, &p).unwrap()
    };
    let (u_small, u_large) = (env(r1), env(r1 + dr));
    for i in 0..g.len() {
        prop_assert!(u_large.values()[i] <= u_small.values()[i] + 1e-12);
    }
    Ok(())
}
