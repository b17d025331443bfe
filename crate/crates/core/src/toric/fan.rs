//! Smooth complete fans and their divisor class groups.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::linalg::{self, adjugate_i64, det_i64};
use crate::lattice::rational::{dot, q, RationalVector, Q};

use super::positivity::MultilinearForm;

/// On-disk description of a fan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanSpec {
    #[serde(default)]
    pub name: String,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    /// Named class basis as ray-coefficient vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    /// Walls (as ray index lists) whose invariant curves move in covering
    /// families; used to certify extremal rays of the dual of the psef cone.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub movable_curves: Vec<Vec<usize>>,
}

/// Codimension-one cone shared by two maximal cones. `pairing[i]` is the
/// intersection number of the ray divisor `D_i` with the wall's curve.
#[derive(Clone, Debug)]
pub struct Wall {
    pub rays: Vec<usize>,
    pub pairing: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct Fan {
    spec: FanSpec,
    dim: usize,
    walls: Vec<Wall>,
    /// Basis vectors of the class group as ray-coefficient vectors.
    basis: Vec<Vec<Q>>,
    /// Inverse of `[basis | ray matrix columns]`.
    coord_map: Vec<Vec<Q>>,
    pub(super) form: OnceLock<MultilinearForm>,
}

const PROBES: [[i64; 3]; 4] = [[7, -11, 13], [-5, 3, 17], [19, 23, -2], [-29, -31, -37]];

impl Fan {
    pub fn from_spec(spec: FanSpec) -> Result<Self> {
        let rays = &spec.rays;
        let Some(first) = rays.first() else {
            return Err(Error::instance("fan has no rays"));
        };
        let n = first.len();
        if n == 0 || n > 3 {
            return Err(Error::instance(format!("fan dimension {n} outside 1..=3")));
        }
        for (i, v) in rays.iter().enumerate() {
            if v.len() != n {
                return Err(Error::instance(format!("ray {i} has length {}, expected {n}", v.len())));
            }
            let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            if g != 1 {
                return Err(Error::instance(format!("ray {i} is not primitive")));
            }
        }
        let r = rays.len();
        let mut used = vec![false; r];
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for (c, cone) in spec.max_cones.iter().enumerate() {
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != n || cone.len() != n {
                return Err(Error::instance(format!("cone {c} must have {n} distinct rays")));
            }
            if let Some(&bad) = sorted.iter().find(|&&i| i >= r) {
                return Err(Error::instance(format!("cone {c} references missing ray {bad}")));
            }
            let mat: Vec<Vec<i64>> = sorted.iter().map(|&i| rays[i].clone()).collect();
            if det_i64(&mat).abs() != 1 {
                return Err(Error::instance(format!("cone {c} is not unimodular; fan is not smooth")));
            }
            for &i in &sorted {
                used[i] = true;
            }
            cones.push(sorted);
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::instance(format!("ray {i} lies in no maximal cone")));
        }
        let walls = Self::compute_walls(rays, &cones)?;
        Self::check_cover(rays, &cones)?;
        let (basis, coord_map) = Self::class_basis(&spec, n)?;
        for w in &spec.movable_curves {
            let mut s = w.clone();
            s.sort_unstable();
            if !walls.iter().any(|x| x.rays == s) {
                return Err(Error::instance(format!("declared curve {w:?} is not a wall of the fan")));
            }
        }
        if !spec.labels.is_empty() && spec.labels.len() != r - n {
            return Err(Error::instance("label count differs from class rank"));
        }
        Ok(Fan { spec, dim: n, walls, basis, coord_map, form: OnceLock::new() })
    }

    fn compute_walls(rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<Vec<Wall>> {
        let n = rays[0].len();
        let r = rays.len();
        let mut faces: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for cone in cones {
            for &drop in cone {
                let tau: Vec<usize> = cone.iter().copied().filter(|&i| i != drop).collect();
                faces.entry(tau).or_default().push(drop);
            }
        }
        let mut walls = Vec::new();
        for (tau, opposite) in faces {
            if opposite.len() != 2 {
                return Err(Error::instance(format!(
                    "face {tau:?} lies in {} maximal cones; fan is not complete",
                    opposite.len()
                )));
            }
            let (p, qi) = (opposite[0], opposite[1]);
            // v_p + v_q expanded in the basis tau + {p}
            let mut mat: Vec<Vec<i64>> = tau.iter().map(|&i| rays[i].clone()).collect();
            mat.push(rays[p].clone());
            let t = linalg::transpose(&mat);
            let det = det_i64(&t);
            let adj = adjugate_i64(&t);
            let sum: Vec<i64> = (0..n).map(|k| rays[p][k] + rays[qi][k]).collect();
            let coeffs: Vec<i64> =
                adj.iter().map(|row| row.iter().zip(&sum).map(|(a, b)| a * b).sum::<i64>() * det).collect();
            if coeffs[n - 1] != 0 {
                return Err(Error::instance(format!("cones across face {tau:?} overlap")));
            }
            let mut pairing = vec![0i64; r];
            pairing[p] = 1;
            pairing[qi] = 1;
            for (k, &i) in tau.iter().enumerate() {
                pairing[i] = -coeffs[k];
            }
            walls.push(Wall { rays: tau, pairing });
        }
        Ok(walls)
    }

    /// Generic probe points must each lie in exactly one maximal cone.
    fn check_cover(rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<()> {
        let n = rays[0].len();
        for probe in PROBES {
            let x = &probe[..n];
            let hits = cones
                .iter()
                .filter(|cone| {
                    let t = linalg::transpose(&cone.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>());
                    let det = det_i64(&t);
                    let adj = adjugate_i64(&t);
                    adj.iter().all(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() * det > 0)
                })
                .count();
            if hits != 1 {
                return Err(Error::instance(format!(
                    "point {x:?} lies in {hits} maximal cones; fan does not cover space once"
                )));
            }
        }
        Ok(())
    }

    /// Class basis (declared, or from the unimodular row echelon form of the
    /// ray matrix) and the coordinate map.
    fn class_basis(spec: &FanSpec, n: usize) -> Result<(Vec<Vec<Q>>, Vec<Vec<Q>>)> {
        let r = spec.rays.len();
        let basis: Vec<Vec<Q>> = match &spec.basis {
            Some(b) => {
                if b.len() != r - n || b.iter().any(|v| v.len() != r) {
                    return Err(Error::instance(format!("basis must have {} vectors of length {r}", r - n)));
                }
                b.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect()
            }
            None => {
                let v: Vec<Vec<BigInt>> =
                    spec.rays.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
                let (u, _) = linalg::integer_row_echelon(&v);
                let uq: Vec<Vec<Q>> =
                    u.iter().map(|row| row.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
                let uinv = linalg::inverse(&uq).expect("unimodular matrix is invertible");
                (n..r).map(|j| uinv.iter().map(|row| row[j].clone()).collect()).collect()
            }
        };
        let mut m: Vec<Vec<Q>> = vec![Vec::with_capacity(r); r];
        for (i, row) in m.iter_mut().enumerate() {
            for b in &basis {
                row.push(b[i].clone());
            }
            for k in 0..n {
                row.push(q(spec.rays[i][k]));
            }
        }
        if linalg::det(&m).abs() != q(1) {
            return Err(Error::instance("basis does not give a lattice basis of the class group"));
        }
        let inv = linalg::inverse(&m).expect("unimodular");
        Ok((basis, inv))
    }

    pub fn spec(&self) -> &FanSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.spec.rays
    }

    /// Rank of the class group, `#rays - dim`.
    pub fn rank(&self) -> usize {
        self.spec.rays.len() - self.dim
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn labels(&self) -> Vec<String> {
        if self.spec.labels.is_empty() {
            (1..=self.rank()).map(|i| format!("b{i}")).collect()
        } else {
            self.spec.labels.clone()
        }
    }

    /// Class coordinates of a ray-coefficient vector.
    pub fn class_of(&self, coeffs: &[Q]) -> Result<RationalVector> {
        Error::check_dim(self.spec.rays.len(), coeffs.len())?;
        Ok(self.coord_map[..self.rank()].iter().map(|row| dot(row, coeffs)).collect())
    }

    /// Class of the invariant prime divisor of ray `i`.
    pub fn ray_class(&self, i: usize) -> RationalVector {
        let e = RationalVector::unit(self.spec.rays.len(), i);
        self.class_of(&e).expect("length matches")
    }

    /// Ray-coefficient representative `sum_j c_j b_j` of a class.
    pub fn representative(&self, class: &[Q]) -> Result<Vec<Q>> {
        Error::check_dim(self.rank(), class.len())?;
        Ok((0..self.spec.rays.len())
            .map(|i| self.basis.iter().zip(class).fold(Q::zero(), |acc, (b, c)| acc + &b[i] * c))
            .collect())
    }

    /// The wall's curve as a linear functional on class coordinates.
    pub fn wall_functional(&self, w: &Wall) -> RationalVector {
        self.basis.iter().map(|b| b.iter().zip(&w.pairing).fold(Q::zero(), |acc, (x, &p)| acc + x * q(p))).collect()
    }

    /// Declared movable curve families, as walls.
    pub fn movable_curves(&self) -> Vec<&Wall> {
        self.spec
            .movable_curves
            .iter()
            .filter_map(|w| {
                let mut s = w.clone();
                s.sort_unstable();
                self.walls.iter().find(|x| x.rays == s)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::builtin::fan;

    #[test]
    fn shipped_fans_load() {
        for name in ["P1", "P2", "P1xP1", "F1", "F2", "F3", "F4", "Bl2P2", "dP6", "P1^3", "BlP3"] {
            let f = fan(name).unwrap();
            assert_eq!(f.rank(), f.rays().len() - f.dim(), "{name}");
        }
    }

    #[test]
    fn f1_walls_give_self_intersections() {
        let f = fan("F1").unwrap();
        // wall {1}: the curve D_1 = E with E^2 = -1
        let w = f.walls().iter().find(|w| w.rays == vec![1]).unwrap();
        assert_eq!(w.pairing[1], -1);
        assert_eq!(f.wall_functional(w).0, vec![q(0), q(-1)]);
    }

    #[test]
    fn ray_classes_of_f1() {
        let f = fan("F1").unwrap();
        // rays (1,0), (0,1), (-1,1), (0,-1) -> H-E, E, H-E, H
        assert_eq!(f.ray_class(0).0, vec![q(1), q(-1)]);
        assert_eq!(f.ray_class(1).0, vec![q(0), q(1)]);
        assert_eq!(f.ray_class(2).0, vec![q(1), q(-1)]);
        assert_eq!(f.ray_class(3).0, vec![q(1), q(0)]);
    }

    #[test]
    fn echelon_basis_when_undeclared() {
        let mut spec = fan("F2").unwrap().spec().clone();
        spec.basis = None;
        spec.labels.clear();
        let f = Fan::from_spec(spec).unwrap();
        let c = f.ray_class(1);
        assert_eq!(f.class_of(&f.representative(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn rejects_singular_and_incomplete() {
        let singular = FanSpec {
            name: "weighted".into(),
            rays: vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            max_cones: vec![vec![0, 1], vec![1, 2], vec![2, 0]],
            basis: None,
            labels: vec![],
            movable_curves: vec![],
        };
        assert!(matches!(Fan::from_spec(singular), Err(Error::Instance(_))));
        let incomplete = FanSpec {
            name: "A2".into(),
            rays: vec![vec![1, 0], vec![0, 1], vec![-1, 0]],
            max_cones: vec![vec![0, 1], vec![1, 2]],
            basis: None,
            labels: vec![],
            movable_curves: vec![],
        };
        assert!(matches!(Fan::from_spec(incomplete), Err(Error::Instance(_))));
    }

    #[test]
    fn double_cover_is_rejected() {
        // every face shared by two cones, but the hexagon winds twice
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
        let spec = FanSpec {
            name: "wrap".into(),
            rays,
            max_cones: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0], vec![0, 1]],
            basis: None,
            labels: vec![],
            movable_curves: vec![],
        };
        assert!(Fan::from_spec(spec).is_err());
    }
}
