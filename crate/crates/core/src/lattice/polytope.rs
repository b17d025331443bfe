//! Rational polytopes `{m : <m, v_i> >= -a_i}` with integer normals.
//!
//! Volumes are exact: vertices come from exhaustive enumeration of `d`-subsets
//! of inequalities, and the volume is summed over a pulling triangulation
//! built from the vertex/facet incidences. Facet measures are the partial
//! derivatives of the volume with respect to the offsets `a_i`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::cone::RationalCone;
use super::linalg::{self, adjugate_i64, det_i64};
use super::rational::{dot, primitive_integer, q, RationalVector, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct LatticePolytope {
    dim: usize,
    normals: Vec<Vec<i64>>,
    #[serde(with = "super::rational::serde_qvec")]
    offsets: Vec<Q>,
    vertices: Vec<RationalVector>,
    #[serde(skip)]
    tight: Vec<Vec<usize>>,
    #[serde(skip)]
    affine_dim: Option<usize>,
}

fn normal_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn dot_i(v: &[i64], m: &[Q]) -> Q {
    v.iter().zip(m).fold(
        Q::zero(),
        |acc, (&a, x)| {
            if a == 0 {
                acc
            } else {
                acc + x * Q::from_integer(BigInt::from(a))
            }
        },
    )
}

/// Affine dimension of a point set (`None` when empty).
fn affine_dim(points: &[&RationalVector]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    if rest.is_empty() {
        return Some(0);
    }
    let rows: Vec<Vec<Q>> = rest.iter().map(|p| (*p - *first).0).collect();
    Some(linalg::rank(&rows))
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

impl LatticePolytope {
    /// Builds the polytope and enumerates its vertices; rejects inequality
    /// systems whose recession cone is nontrivial.
    pub fn new(normals: Vec<Vec<i64>>, offsets: Vec<Q>) -> Result<Self> {
        let dim = Self::check_shape(&normals, &offsets)?;
        let rec = RationalCone::from_inequalities(
            dim,
            &normals.iter().map(|v| RationalVector(normal_q(v))).collect::<Vec<_>>(),
            &[],
        )?;
        if !rec.generators().is_empty() || !rec.lineality().is_empty() {
            return Err(Error::Unbounded);
        }
        Ok(Self::with_bounded_normals(dim, normals, offsets))
    }

    fn check_shape(normals: &[Vec<i64>], offsets: &[Q]) -> Result<usize> {
        if normals.is_empty() {
            return Err(Error::Unbounded);
        }
        Error::check_dim(normals.len(), offsets.len())?;
        let dim = normals[0].len();
        if dim == 0 {
            return Err(Error::input("zero-dimensional ambient space"));
        }
        for v in normals {
            Error::check_dim(dim, v.len())?;
            if v.iter().all(|&x| x == 0) {
                return Err(Error::input("zero normal vector"));
            }
        }
        Ok(dim)
    }

    /// Skips the boundedness check; callers guarantee that the normals
    /// positively span the ambient space.
    pub(crate) fn with_bounded_normals(dim: usize, normals: Vec<Vec<i64>>, offsets: Vec<Q>) -> Self {
        let mut p = LatticePolytope { dim, normals, offsets, vertices: vec![], tight: vec![], affine_dim: None };
        p.enumerate_vertices();
        p
    }

    /// Convex hull of finitely many points.
    pub fn from_points(dim: usize, points: &[RationalVector]) -> Result<Self> {
        for p in points {
            Error::check_dim(dim, p.dim())?;
        }
        if points.is_empty() {
            return Ok(Self::empty(dim));
        }
        hull_of_sums(dim, &[points.to_vec()], &[all_pairs(points.len())])
    }

    /// An infeasible system in dimension `dim`.
    pub fn empty(dim: usize) -> Self {
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 1;
            normals.push(e.clone());
            offsets.push(if i == 0 { q(-1) } else { q(0) });
            e[i] = -1;
            normals.push(e);
            offsets.push(q(0));
        }
        Self::with_bounded_normals(dim, normals, offsets)
    }

    fn enumerate_vertices(&mut self) {
        let d = self.dim;
        let m = self.normals.len();
        let mut verts: Vec<RationalVector> = Vec::new();
        for subset in (0..m).combinations(d) {
            let mat: Vec<Vec<i64>> = subset.iter().map(|&i| self.normals[i].clone()).collect();
            let det = det_i64(&mat);
            if det == 0 {
                continue;
            }
            let adj = adjugate_i64(&mat);
            let det_q = q(det);
            let point: Vec<Q> = (0..d)
                .map(|r| {
                    let s = subset.iter().enumerate().fold(Q::zero(), |acc, (k, &i)| {
                        let c = adj[r][k];
                        if c == 0 {
                            acc
                        } else {
                            acc - &self.offsets[i] * q(c)
                        }
                    });
                    s / &det_q
                })
                .collect();
            if self.feasible(&point) {
                verts.push(RationalVector(point));
            }
        }
        verts.sort_by(|a, b| a.0.cmp(&b.0));
        verts.dedup();
        self.tight = (0..m)
            .map(|j| {
                (0..verts.len())
                    .filter(|&k| (dot_i(&self.normals[j], &verts[k]) + &self.offsets[j]).is_zero())
                    .collect()
            })
            .collect();
        let refs: Vec<&RationalVector> = verts.iter().collect();
        self.affine_dim = affine_dim(&refs);
        self.vertices = verts;
    }

    fn feasible(&self, m: &[Q]) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(v, a)| !(dot_i(v, m) + a).is_negative())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[Q] {
        &self.offsets
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == Some(self.dim)
    }

    pub fn contains(&self, m: &[Q]) -> bool {
        m.len() == self.dim && self.feasible(m)
    }

    /// Vertex indices tight at inequality `i`.
    pub fn tight_vertices(&self, i: usize) -> &[usize] {
        &self.tight[i]
    }

    /// Same normals, offsets replaced.
    pub fn with_offsets(&self, offsets: Vec<Q>) -> Result<Self> {
        Error::check_dim(self.normals.len(), offsets.len())?;
        Ok(Self::with_bounded_normals(self.dim, self.normals.clone(), offsets))
    }

    /// Vertex pairs spanning an edge; every pair when the polytope is not
    /// full-dimensional.
    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        if !self.is_full_dimensional() {
            return all_pairs(n);
        }
        all_pairs(n)
            .into_iter()
            .filter(|&(a, b)| {
                let rows: Vec<Vec<Q>> = (0..self.normals.len())
                    .filter(|&j| self.tight[j].binary_search(&a).is_ok() && self.tight[j].binary_search(&b).is_ok())
                    .map(|j| normal_q(&self.normals[j]))
                    .collect();
                linalg::rank(&rows) == self.dim - 1
            })
            .collect()
    }

    /// Pulling triangulation of the face spanned by `face` (sorted vertex
    /// indices, affine dimension `k`) into `k`-simplices.
    fn triangulate_face(&self, face: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(vec![face[0]]);
            return;
        }
        let apex = face[0];
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in &self.tight {
            let s: Vec<usize> = face.iter().copied().filter(|v| t.binary_search(v).is_ok()).collect();
            if s.len() < k || s.len() == face.len() || s.contains(&apex) {
                continue;
            }
            let pts: Vec<&RationalVector> = s.iter().map(|&i| &self.vertices[i]).collect();
            if affine_dim(&pts) == Some(k - 1) {
                subfaces.insert(s);
            }
        }
        for s in subfaces {
            let mut sub = Vec::new();
            self.triangulate_face(&s, k - 1, &mut sub);
            for mut simplex in sub {
                simplex.insert(0, apex);
                out.push(simplex);
            }
        }
    }

    /// Simplices of a triangulation of the whole polytope (full-dimensional
    /// case only).
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        if !self.is_full_dimensional() {
            return vec![];
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        self.triangulate_face(&all, self.dim, &mut out);
        out
    }

    fn simplex_det(&self, simplex: &[usize], extra: Option<&[Q]>) -> Q {
        let p0 = &self.vertices[simplex[0]];
        let mut rows: Vec<Vec<Q>> = simplex[1..].iter().map(|&i| (&self.vertices[i] - p0).0).collect();
        if let Some(w) = extra {
            rows.push(w.to_vec());
        }
        linalg::det(&rows).abs()
    }

    /// Exact Euclidean volume (lattice covolume 1); zero for empty or
    /// lower-dimensional polytopes.
    pub fn volume(&self) -> Q {
        let tri = self.triangulation();
        let total = tri.iter().fold(Q::zero(), |acc, s| acc + self.simplex_det(s, None));
        total / factorial(self.dim)
    }

    /// `d vol / d a_i` for each inequality: facet volume divided by the length
    /// of the normal, zero for inequalities that do not support a facet.
    /// Lower-dimensional polytopes report no measures.
    pub fn facet_measures(&self) -> Vec<Q> {
        if !self.is_full_dimensional() {
            return vec![];
        }
        let d = self.dim;
        (0..self.normals.len())
            .map(|i| {
                let face = &self.tight[i];
                let pts: Vec<&RationalVector> = face.iter().map(|&k| &self.vertices[k]).collect();
                if affine_dim(&pts) != Some(d - 1) {
                    return Q::zero();
                }
                let (j, &vij) = self.normals[i].iter().enumerate().find(|(_, &x)| x != 0).unwrap();
                let mut w = vec![Q::zero(); d];
                w[j] = Q::one() / q(vij);
                let mut simplices = Vec::new();
                self.triangulate_face(face, d - 1, &mut simplices);
                let s = simplices.iter().fold(Q::zero(), |acc, s| acc + self.simplex_det(s, Some(&w)));
                s / factorial(d - 1)
            })
            .collect()
    }

    /// Values of `t` at which the combinatorial type of the polytope with
    /// offsets `a + t c` can change. Between consecutive values the volume is
    /// a polynomial in `t` of degree at most `dim`.
    pub fn critical_steps(&self, direction: &[Q]) -> Vec<Q> {
        let d = self.dim;
        let m = self.normals.len();
        let mut out: BTreeSet<Q> = BTreeSet::new();
        for subset in (0..m).combinations(d) {
            let mat: Vec<Vec<i64>> = subset.iter().map(|&i| self.normals[i].clone()).collect();
            let det = det_i64(&mat);
            if det == 0 {
                continue;
            }
            let adj = adjugate_i64(&mat);
            let solve = |rhs: &dyn Fn(usize) -> Q| -> Vec<Q> {
                (0..d)
                    .map(|r| {
                        subset.iter().enumerate().fold(Q::zero(), |acc, (k, &i)| acc - rhs(i) * q(adj[r][k])) / q(det)
                    })
                    .collect()
            };
            let m0 = solve(&|i| self.offsets[i].clone());
            let m1 = solve(&|i| direction[i].clone());
            for j in 0..m {
                if subset.contains(&j) {
                    continue;
                }
                let f0 = dot_i(&self.normals[j], &m0) + &self.offsets[j];
                let f1 = dot_i(&self.normals[j], &m1) + &direction[j];
                if !f1.is_zero() {
                    out.insert(-f0 / f1);
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Mixed volume `V(P_1, ..., P_n)` of `n` polytopes in dimension `n <= 3`,
/// normalized so that `V(P, ..., P) = vol(P)`.
pub fn mixed_volume(polys: &[&LatticePolytope]) -> Result<Q> {
    let n = polys.len();
    if n == 0 {
        return Err(Error::input("mixed volume of no polytopes"));
    }
    for p in polys {
        Error::check_dim(n, p.dim())?;
    }
    if n > 3 {
        return Err(Error::input("mixed volume implemented for dimension at most 3"));
    }
    let mut total = Q::zero();
    for mask in 1u32..(1 << n) {
        let members: Vec<&LatticePolytope> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| polys[i]).collect();
        let vol = if members.len() == 1 { members[0].volume() } else { minkowski_sum(&members)?.volume() };
        let sign = (n - members.len()) % 2 == 0;
        if sign {
            total += vol;
        } else {
            total -= vol;
        }
    }
    Ok(total / factorial(n))
}

/// Bound on scaled coordinates and normals for the machine-integer path.
const SMALL: i128 = 1 << 60;

/// Points multiplied by their common denominator, when every coordinate stays
/// below `SMALL`.
fn scaled_integers(s: &[RationalVector]) -> Option<Vec<Vec<i128>>> {
    let den = s.iter().flat_map(|v| v.0.iter()).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    s.iter()
        .map(|v| v.0.iter().map(|x| (x.numer() * (&den / x.denom())).to_i128().filter(|n| n.abs() < SMALL)).collect())
        .collect()
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).tuple_combinations().collect()
}

/// Minkowski sum of polytopes of equal dimension (at most 3).
pub fn minkowski_sum(polys: &[&LatticePolytope]) -> Result<LatticePolytope> {
    let Some(first) = polys.first() else {
        return Err(Error::input("empty Minkowski sum"));
    };
    let d = first.dim();
    for p in polys {
        Error::check_dim(d, p.dim())?;
    }
    if polys.iter().any(|p| p.is_empty()) {
        return Ok(LatticePolytope::empty(d));
    }
    if polys.len() == 1 {
        return Ok((*first).clone());
    }
    if polys.iter().all(|p| p.normals == first.normals) {
        let offsets: Vec<Q> =
            (0..first.normals.len()).map(|i| polys.iter().fold(Q::zero(), |acc, p| acc + &p.offsets[i])).collect();
        let cand = LatticePolytope::with_bounded_normals(d, first.normals.clone(), offsets);
        if sum_contains_vertices(&cand, polys) {
            return Ok(cand);
        }
    }
    if d > 3 {
        return Err(Error::input("Minkowski sum implemented for dimension at most 3"));
    }
    let sets: Vec<Vec<RationalVector>> = polys.iter().map(|p| p.vertices.clone()).collect();
    let pairs: Vec<Vec<(usize, usize)>> = polys.iter().map(|p| p.edges()).collect();
    hull_of_sums(d, &sets, &pairs)
}

/// Every vertex of `cand` (which contains the sum) is a sum of points of the
/// summands, hence the sum equals `cand`.
fn sum_contains_vertices(cand: &LatticePolytope, polys: &[&LatticePolytope]) -> bool {
    (0..cand.vertices.len()).all(|k| {
        let mut u = vec![Q::zero(); cand.dim];
        for (j, t) in cand.tight.iter().enumerate() {
            if t.binary_search(&k).is_ok() {
                for (x, &c) in u.iter_mut().zip(&cand.normals[j]) {
                    *x += q(c);
                }
            }
        }
        let target = dot(&u, &cand.vertices[k]);
        let sum_min = polys.iter().fold(Q::zero(), |acc, p| acc + p.vertices.iter().map(|v| dot(&u, v)).min().unwrap());
        sum_min == target
    })
}

fn cross(a: &[Q], b: &[Q]) -> Vec<Q> {
    vec![&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

/// H-description of `conv(S_1) + ... + conv(S_k)` from candidate facet
/// normals, keeping those whose face has codimension one. Coordinate normals
/// are always included so the system stays bounded for degenerate sums.
fn hull_of_sums(d: usize, sets: &[Vec<RationalVector>], pairs: &[Vec<(usize, usize)>]) -> Result<LatticePolytope> {
    if d > 3 {
        return Err(Error::input("convex hull implemented for dimension at most 3"));
    }
    let mut directions: Vec<Vec<Q>> = Vec::new();
    for (s, ps) in sets.iter().zip(pairs) {
        for &(a, b) in ps {
            let diff = (&s[b] - &s[a]).0;
            if diff.iter().any(|x| !x.is_zero()) {
                directions.push(primitive_integer(&diff).into_iter().map(Q::from_integer).collect());
            }
        }
    }
    directions.sort();
    directions.dedup();
    let mut candidates: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut push = |u: Vec<Q>| {
        if u.iter().any(|x| !x.is_zero()) {
            let p = primitive_integer(&u);
            candidates.insert(p.iter().map(|x| -x).collect());
            candidates.insert(p);
        }
    };
    match d {
        1 => push(vec![q(1)]),
        2 => {
            for dir in &directions {
                push(vec![-dir[1].clone(), dir[0].clone()]);
            }
        }
        _ => {
            for (a, b) in directions.iter().tuple_combinations() {
                push(cross(a, b));
            }
        }
    }
    let scaled: Option<Vec<Vec<Vec<i128>>>> = sets.iter().map(|s| scaled_integers(s)).collect();
    let face_dim = |u: &[BigInt]| -> Option<usize> {
        let small: Option<Vec<i128>> = u.iter().map(|x| x.to_i128().filter(|n| n.abs() < SMALL)).collect();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (i, s) in sets.iter().enumerate() {
            let arg: Vec<usize> = match (&scaled, &small) {
                (Some(sc), Some(ui)) => {
                    let vals: Vec<i128> = sc[i].iter().map(|v| v.iter().zip(ui).map(|(a, b)| a * b).sum()).collect();
                    let min = *vals.iter().min().unwrap();
                    (0..s.len()).filter(|&k| vals[k] == min).collect()
                }
                _ => {
                    let uq: Vec<Q> = u.iter().cloned().map(Q::from_integer).collect();
                    let vals: Vec<Q> = s.iter().map(|v| dot(&uq, v)).collect();
                    let min = vals.iter().min().unwrap().clone();
                    (0..s.len()).filter(|&k| vals[k] == min).collect()
                }
            };
            for &k in &arg[1..] {
                rows.push((&s[k] - &s[arg[0]]).0);
            }
        }
        Some(if rows.is_empty() { 0 } else { linalg::rank(&rows) })
    };
    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut offsets: Vec<Q> = Vec::new();
    let mut add = |u: Vec<BigInt>, keep_always: bool| -> Result<()> {
        if !keep_always && face_dim(&u) != Some(d - 1) {
            return Ok(());
        }
        let uq: Vec<Q> = u.iter().cloned().map(Q::from_integer).collect();
        let ints: Option<Vec<i64>> = u.iter().map(|x| x.to_i64()).collect();
        let ints = ints.ok_or_else(|| Error::input("normal vector exceeds i64 range"))?;
        if normals.contains(&ints) {
            return Ok(());
        }
        let min = sets.iter().fold(Q::zero(), |acc, s| acc + s.iter().map(|v| dot(&uq, v)).min().unwrap());
        normals.push(ints);
        offsets.push(-min);
        Ok(())
    };
    for u in candidates {
        add(u, false)?;
    }
    for i in 0..d {
        for s in [1i64, -1] {
            let mut e = vec![BigInt::zero(); d];
            e[i] = BigInt::from(s);
            add(e, true)?;
        }
    }
    if let Some(p) = assemble_from_minimizers(d, sets, &normals, &offsets) {
        return Ok(p);
    }
    Ok(LatticePolytope::with_bounded_normals(d, normals, offsets))
}

/// Vertices of a full-dimensional sum are the sums of per-summand minimizers
/// whose common supporting normals have full rank; this avoids enumerating
/// every `d`-subset of the facet system. `None` for lower-dimensional sums.
fn assemble_from_minimizers(
    d: usize,
    sets: &[Vec<RationalVector>],
    normals: &[Vec<i64>],
    offsets: &[Q],
) -> Option<LatticePolytope> {
    // argmin[s][j][k]: point k of set s minimizes normal j over the set
    let argmin: Vec<Vec<Vec<bool>>> = sets
        .iter()
        .map(|s| {
            normals
                .iter()
                .map(|u| {
                    let vals: Vec<Q> = s.iter().map(|v| dot_i(u, &v.0)).collect();
                    let min = vals.iter().min().unwrap().clone();
                    vals.iter().map(|x| *x == min).collect()
                })
                .collect()
        })
        .collect();
    let mut found: Vec<(RationalVector, Vec<usize>)> = Vec::new();
    for combo in sets.iter().map(|s| 0..s.len()).multi_cartesian_product() {
        let tight: Vec<usize> =
            (0..normals.len()).filter(|&j| combo.iter().enumerate().all(|(s, &k)| argmin[s][j][k])).collect();
        if tight.len() < d {
            continue;
        }
        let rows: Vec<Vec<Q>> = tight.iter().map(|&j| normal_q(&normals[j])).collect();
        if linalg::rank(&rows) < d {
            continue;
        }
        let mut point = vec![Q::zero(); d];
        for (s, &k) in combo.iter().enumerate() {
            for (x, y) in point.iter_mut().zip(&sets[s][k].0) {
                *x += y;
            }
        }
        found.push((RationalVector(point), tight));
    }
    found.sort_by(|a, b| a.0 .0.cmp(&b.0 .0));
    found.dedup_by(|a, b| a.0 == b.0);
    let refs: Vec<&RationalVector> = found.iter().map(|(v, _)| v).collect();
    if affine_dim(&refs) != Some(d) {
        return None;
    }
    let mut tight = vec![Vec::new(); normals.len()];
    for (k, (_, t)) in found.iter().enumerate() {
        for &j in t {
            tight[j].push(k);
        }
    }
    Some(LatticePolytope {
        dim: d,
        normals: normals.to_vec(),
        offsets: offsets.to_vec(),
        vertices: found.into_iter().map(|(v, _)| v).collect(),
        tight,
        affine_dim: Some(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::qr;

    fn boxp(lo: &[i64], hi: &[i64]) -> LatticePolytope {
        let d = lo.len();
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            normals.push(e.clone());
            offsets.push(q(-lo[i]));
            e[i] = -1;
            normals.push(e);
            offsets.push(q(hi[i]));
        }
        LatticePolytope::new(normals, offsets).unwrap()
    }

    fn simplex2(k: i64) -> LatticePolytope {
        LatticePolytope::new(vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![q(0), q(0), q(k)]).unwrap()
    }

    #[test]
    fn unit_simplex_and_square() {
        assert_eq!(simplex2(1).volume(), qr(1, 2));
        assert_eq!(boxp(&[0, 0], &[3, 3]).volume(), q(9));
        assert_eq!(boxp(&[0, 0, 0], &[1, 2, 3]).volume(), q(6));
    }

    #[test]
    fn truncated_simplex_volume() {
        // P_{2H-E} on the first Hirzebruch surface: triangle of size 2 with a unit corner cut
        let p =
            LatticePolytope::new(vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![1, 1]], vec![q(0), q(0), q(2), q(-1)])
                .unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.volume(), qr(3, 2));
    }

    #[test]
    fn degenerate_and_empty() {
        let seg = boxp(&[0, 0], &[2, 0]);
        assert_eq!(seg.volume(), q(0));
        assert!(seg.facet_measures().is_empty());
        let empty = LatticePolytope::empty(2);
        assert!(empty.is_empty());
        assert_eq!(empty.volume(), q(0));
    }

    #[test]
    fn unbounded_is_rejected() {
        let r = LatticePolytope::new(vec![vec![1, 0], vec![0, 1]], vec![q(0), q(0)]);
        assert_eq!(r.unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn square_facet_measures() {
        let fm = boxp(&[0, 0], &[1, 1]).facet_measures();
        assert_eq!(fm, vec![q(1); 4]);
    }

    #[test]
    fn slanted_facet_measure() {
        assert_eq!(simplex2(3).facet_measures(), vec![q(3), q(3), q(3)]);
    }

    #[test]
    fn inactive_inequality_has_zero_measure() {
        let p =
            LatticePolytope::new(vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![0, -1]], vec![q(0), q(0), q(1), q(5)])
                .unwrap();
        assert_eq!(p.facet_measures()[3], q(0));
    }

    #[test]
    fn euler_identity_for_facets() {
        let p = LatticePolytope::new(
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1], vec![1, 1, 1]],
            vec![q(0), q(0), q(0), q(3), q(-1)],
        )
        .unwrap();
        let fm = p.facet_measures();
        let s = fm.iter().zip(p.offsets()).fold(Q::zero(), |acc, (f, a)| acc + f * a);
        assert_eq!(s, q(3) * p.volume());
        assert_eq!(p.volume(), qr(27 - 1, 6));
    }

    #[test]
    fn mixed_volume_of_rectangles() {
        let a = boxp(&[0, 0], &[2, 3]);
        let b = boxp(&[0, 0], &[5, 7]);
        // (ad + bc) / 2 with [0,a]x[0,b], [0,c]x[0,d]
        assert_eq!(mixed_volume(&[&a, &b]).unwrap(), qr(2 * 7 + 3 * 5, 2));
        let sq = boxp(&[0, 0], &[1, 1]);
        assert_eq!(mixed_volume(&[&sq, &sq]).unwrap(), q(1));
    }

    #[test]
    fn mixed_volume_with_different_normals() {
        let sq = boxp(&[0, 0], &[1, 1]);
        let tri = simplex2(1);
        // vol(sq + tri) = 1 + 1/2 + 2 V(sq, tri); the sum is a square with one corner filled: area 3.5
        let sum = minkowski_sum(&[&sq, &tri]).unwrap();
        assert_eq!(sum.volume(), qr(7, 2));
        assert_eq!(mixed_volume(&[&sq, &tri]).unwrap(), q(1));
    }

    #[test]
    fn hull_of_points() {
        let pts: Vec<RationalVector> = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
            .iter()
            .map(|p| RationalVector::from_ints(p))
            .collect();
        let p = LatticePolytope::from_points(3, &pts).unwrap();
        assert_eq!(p.vertices().len(), 5);
        // simplex 1/6 plus the tetrahedron over the face x+y+z=1 with apex (1,1,1): 2/6
        assert_eq!(p.volume(), qr(1, 2));
    }

    #[test]
    fn critical_steps_of_moving_facet() {
        let p = simplex2(2);
        // push the slanted facet inwards: the triangle collapses at t = 2
        let steps = p.critical_steps(&[q(0), q(0), q(-1)]);
        assert!(steps.contains(&q(2)));
    }

    #[test]
    fn mixed_volume_dimension_mismatch() {
        let a = boxp(&[0, 0], &[1, 1]);
        assert!(matches!(mixed_volume(&[&a]), Err(Error::DimensionMismatch { .. })));
    }
}
