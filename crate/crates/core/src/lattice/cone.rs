//! Finitely generated rational cones with both descriptions kept in sync.
//!
//! Conversions between the generator and the inequality description use
//! exhaustive enumeration of tight constraint subsets. In the dimensions this
//! crate works in (at most 4) that is cheap and, more importantly, exact.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::linalg::{self, nullspace, rank};
use super::rational::{dot, RationalVector, Q};
use crate::error::{Error, Result};

/// Symmetric bilinear form `<x, y> = x^T G y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pairing {
    matrix: Vec<Vec<Q>>,
}

impl Pairing {
    pub fn standard(d: usize) -> Self {
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }).collect())
            .collect();
        Pairing { matrix }
    }

    pub fn new(matrix: Vec<Vec<Q>>) -> Result<Self> {
        let d = matrix.len();
        for row in &matrix {
            Error::check_dim(d, row.len())?;
        }
        for i in 0..d {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::input("pairing matrix is not symmetric"));
                }
            }
        }
        if linalg::det(&matrix).is_zero() {
            return Err(Error::input("pairing is degenerate"));
        }
        Ok(Pairing { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    /// `G x`, the linear form `y -> <x, y>`.
    pub fn apply(&self, x: &[Q]) -> RationalVector {
        linalg::mat_vec(&self.matrix, x).into()
    }

    pub fn eval(&self, x: &[Q], y: &[Q]) -> Q {
        dot(&self.apply(x), y)
    }
}

/// Generator set of a cone, split by whether the cone contains a line.
#[derive(Clone, Debug, PartialEq)]
pub enum RaySet {
    Pointed(Vec<RationalVector>),
    NotPointed { lineality: Vec<RationalVector>, rays_mod_lineality: Vec<RationalVector> },
}

/// Closed convex cone in `Q^d`, stored canonically: primitive extremal rays
/// (orthogonal to the lineality space), a reduced lineality basis, primitive
/// irredundant facet normals (`f . x >= 0`) and a reduced basis of equalities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalCone {
    dim: usize,
    generators: Vec<RationalVector>,
    lineality: Vec<RationalVector>,
    facets: Vec<RationalVector>,
    equalities: Vec<RationalVector>,
}

impl RationalCone {
    /// Cone spanned by `gens` (zero vectors are ignored).
    pub fn from_generators(dim: usize, gens: &[RationalVector]) -> Result<Self> {
        for g in gens {
            Error::check_dim(dim, g.dim())?;
        }
        // facets of C are the extremal rays of C*, equalities its lineality
        let (facets, equalities) = h_to_v(dim, gens, &[]);
        let (generators, lineality) = h_to_v(dim, &facets, &equalities);
        Ok(RationalCone { dim, generators, lineality, facets, equalities })
    }

    /// Cone `{x : f . x >= 0 for f in ineqs, e . x = 0 for e in eqs}`.
    pub fn from_inequalities(dim: usize, ineqs: &[RationalVector], eqs: &[RationalVector]) -> Result<Self> {
        for f in ineqs.iter().chain(eqs) {
            Error::check_dim(dim, f.dim())?;
        }
        let (rays, lin) = h_to_v(dim, ineqs, eqs);
        let mut gens = rays;
        for l in &lin {
            gens.push(l.clone());
            gens.push(-l);
        }
        Self::from_generators(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extremal rays, one primitive vector per ray, sorted.
    pub fn generators(&self) -> &[RationalVector] {
        &self.generators
    }

    pub fn lineality(&self) -> &[RationalVector] {
        &self.lineality
    }

    pub fn facets(&self) -> &[RationalVector] {
        &self.facets
    }

    pub fn equalities(&self) -> &[RationalVector] {
        &self.equalities
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Dimension of the linear span of the cone.
    pub fn span_dim(&self) -> usize {
        self.dim - self.equalities.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equalities.is_empty()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.facets.iter().all(|f| !dot(f, x).is_negative()) && self.equalities.iter().all(|e| dot(e, x).is_zero())
    }

    /// Strict interior relative to the span.
    pub fn contains_relative_interior(&self, x: &[Q]) -> bool {
        self.facets.iter().all(|f| dot(f, x).is_positive()) && self.equalities.iter().all(|e| dot(e, x).is_zero())
    }

    /// Cones are equal as sets.
    pub fn same_as(&self, other: &RationalCone) -> bool {
        self.dim == other.dim && self.generators == other.generators && self.lineality == other.lineality
    }

    pub fn contains_cone(&self, other: &RationalCone) -> bool {
        other.generators.iter().all(|g| self.contains(g))
            && other.lineality.iter().all(|l| self.contains(l) && self.contains(&-l))
    }
}

/// Dual cone `{y : <x, y> >= 0 for all x in C}` under `pairing`.
pub fn dual_cone(c: &RationalCone, pairing: &Pairing) -> Result<RationalCone> {
    Error::check_dim(pairing.dim(), c.dim())?;
    let ineqs: Vec<RationalVector> = c.generators.iter().map(|g| pairing.apply(g)).collect();
    let eqs: Vec<RationalVector> = c.lineality.iter().map(|l| pairing.apply(l)).collect();
    RationalCone::from_inequalities(c.dim, &ineqs, &eqs)
}

/// Minimal generating set; a cone containing a line reports its lineality
/// space alongside the rays of the pointed quotient.
pub fn extremal_rays(c: &RationalCone) -> RaySet {
    if c.is_pointed() {
        RaySet::Pointed(c.generators.clone())
    } else {
        RaySet::NotPointed { lineality: c.lineality.clone(), rays_mod_lineality: c.generators.clone() }
    }
}

fn canonical_set(vs: impl IntoIterator<Item = RationalVector>) -> Vec<RationalVector> {
    let mut out: Vec<RationalVector> = vs.into_iter().filter(|v| !v.is_zero()).map(|v| v.primitive()).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup();
    out
}

/// Reduced basis of a subspace, each row scaled to a primitive integer vector.
fn canonical_basis(vs: &[RationalVector]) -> Vec<RationalVector> {
    if vs.is_empty() {
        return vec![];
    }
    let mut m: Vec<Vec<Q>> = vs.iter().map(|v| v.0.clone()).collect();
    let piv = linalg::rref(&mut m);
    m.truncate(piv.len());
    m.into_iter().map(|r| RationalVector(r).primitive()).collect()
}

/// Inequality description to (extremal rays orthogonal to the lineality
/// space, lineality basis).
fn h_to_v(dim: usize, ineqs: &[RationalVector], eqs: &[RationalVector]) -> (Vec<RationalVector>, Vec<RationalVector>) {
    let ineqs = canonical_set(ineqs.iter().cloned());
    let eqs: Vec<RationalVector> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    let all: Vec<Vec<Q>> = ineqs.iter().chain(&eqs).map(|v| v.0.clone()).collect();
    let lin_raw: Vec<RationalVector> = if all.is_empty() {
        (0..dim).map(|i| RationalVector::unit(dim, i)).collect()
    } else {
        nullspace(&all, dim).into_iter().map(RationalVector).collect()
    };
    let lineality = canonical_basis(&lin_raw);

    let mut base: Vec<Vec<Q>> = eqs.iter().map(|v| v.0.clone()).collect();
    base.extend(lineality.iter().map(|v| v.0.clone()));
    let base_rank = if base.is_empty() { 0 } else { rank(&base) };
    let k = dim - base_rank;
    if k == 0 {
        return (vec![], lineality);
    }
    let sign_ok = |w: &[Q]| -> Option<RationalVector> {
        let mut pos = true;
        let mut neg = true;
        for f in &ineqs {
            let s = dot(f, w);
            if s.is_negative() {
                pos = false;
            }
            if s.is_positive() {
                neg = false;
            }
        }
        if pos {
            Some(RationalVector(w.to_vec()))
        } else if neg {
            Some(RationalVector(w.iter().map(|x| -x).collect()))
        } else {
            None
        }
    };
    let mut rays = Vec::new();
    for subset in ineqs.iter().combinations(k - 1) {
        let mut rows = base.clone();
        rows.extend(subset.iter().map(|v| v.0.clone()));
        let ns = nullspace(&rows, dim);
        if ns.len() == 1 {
            if let Some(r) = sign_ok(&ns[0]) {
                rays.push(r);
            }
        }
    }
    (canonical_set(rays), lineality)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::q;

    fn rv(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    #[test]
    fn octant_is_self_dual() {
        let c = RationalCone::from_generators(3, &[rv(&[1, 0, 0]), rv(&[0, 1, 0]), rv(&[0, 0, 1])]).unwrap();
        let d = dual_cone(&c, &Pairing::standard(3)).unwrap();
        assert!(d.same_as(&c));
        assert_eq!(d.generators().len(), 3);
    }

    #[test]
    fn redundant_middle_ray_dropped() {
        let c = RationalCone::from_generators(2, &[rv(&[1, 0]), rv(&[1, 1]), rv(&[0, 1])]).unwrap();
        assert_eq!(extremal_rays(&c), RaySet::Pointed(vec![rv(&[0, 1]), rv(&[1, 0])]));
    }

    #[test]
    fn blowup_psef_dual_under_intersection_form() {
        // basis (H, E), H^2 = 1, E^2 = -1
        let form = Pairing::new(vec![vec![q(1), q(0)], vec![q(0), q(-1)]]).unwrap();
        let psef = RationalCone::from_generators(2, &[rv(&[0, 1]), rv(&[1, -1])]).unwrap();
        let nef = dual_cone(&psef, &form).unwrap();
        let expect = RationalCone::from_generators(2, &[rv(&[1, 0]), rv(&[1, -1])]).unwrap();
        assert!(nef.same_as(&expect));
    }

    #[test]
    fn nef_cone_from_inequalities() {
        // F1 nef cone: a.E = -b >= 0, a.(H-E) = a + b >= 0
        let c = RationalCone::from_inequalities(2, &[rv(&[0, -1]), rv(&[1, 1])], &[]).unwrap();
        assert_eq!(c.generators(), &[rv(&[1, -1]), rv(&[1, 0])]);
    }

    #[test]
    fn half_plane_reports_lineality() {
        let c = RationalCone::from_inequalities(2, &[rv(&[1, 0])], &[]).unwrap();
        match extremal_rays(&c) {
            RaySet::NotPointed { lineality, rays_mod_lineality } => {
                assert_eq!(lineality, vec![rv(&[0, 1])]);
                assert_eq!(rays_mod_lineality, vec![rv(&[1, 0])]);
            }
            other => panic!("expected lineality, got {other:?}"),
        }
    }

    #[test]
    fn lower_dimensional_cone_and_its_dual() {
        let ray = RationalCone::from_generators(2, &[rv(&[1, 1])]).unwrap();
        assert_eq!(ray.span_dim(), 1);
        let d = dual_cone(&ray, &Pairing::standard(2)).unwrap();
        assert!(!d.is_pointed());
        let back = dual_cone(&d, &Pairing::standard(2)).unwrap();
        assert!(back.same_as(&ray));
    }

    #[test]
    fn trivial_and_whole_space() {
        let zero = RationalCone::from_generators(2, &[]).unwrap();
        assert!(zero.generators().is_empty() && zero.lineality().is_empty());
        let whole = dual_cone(&zero, &Pairing::standard(2)).unwrap();
        assert_eq!(whole.lineality().len(), 2);
        assert!(dual_cone(&whole, &Pairing::standard(2)).unwrap().same_as(&zero));
    }

    #[test]
    fn dimension_mismatch_is_an_input_error() {
        let c = RationalCone::from_generators(2, &[rv(&[1, 0])]).unwrap();
        assert!(matches!(dual_cone(&c, &Pairing::standard(3)), Err(Error::DimensionMismatch { .. })));
    }
}
