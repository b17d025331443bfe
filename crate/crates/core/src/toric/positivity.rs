//! Volumes, intersection numbers, cones and positive products on a smooth
//! complete toric variety, all read off section polytopes.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::linalg;
use crate::lattice::polytope::{mixed_volume, LatticePolytope};
use crate::lattice::rational::{dot, q, RationalVector, Q};
use crate::lattice::RationalCone;

use super::fan::Fan;

/// Symmetric multilinear form on class coordinates, stored as a dense tensor.
#[derive(Clone, Debug, Serialize)]
pub struct MultilinearForm {
    pub degree: usize,
    pub rank: usize,
    #[serde(with = "crate::lattice::rational::serde_qvec")]
    pub coeffs: Vec<Q>,
}

impl MultilinearForm {
    pub fn eval(&self, args: &[&[Q]]) -> Q {
        assert_eq!(args.len(), self.degree);
        let mut total = Q::zero();
        for (flat, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut idx = flat;
            let mut term = c.clone();
            for a in args.iter().rev() {
                let i = idx % self.rank;
                idx /= self.rank;
                if a[i].is_zero() {
                    term = Q::zero();
                    break;
                }
                term *= &a[i];
            }
            total += term;
        }
        total
    }

    /// Degree-two forms as a matrix.
    pub fn matrix(&self) -> Vec<Vec<Q>> {
        assert_eq!(self.degree, 2);
        self.coeffs.chunks(self.rank).map(|r| r.to_vec()).collect()
    }
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

impl Fan {
    pub fn section_polytope(&self, class: &[Q]) -> Result<LatticePolytope> {
        let offsets = self.representative(class)?;
        Ok(LatticePolytope::with_bounded_normals(self.dim(), self.rays().to_vec(), offsets))
    }

    /// `n! vol(P_D)`; zero exactly when the class is not big.
    pub fn toric_volume(&self, class: &[Q]) -> Result<Q> {
        Ok(self.section_polytope(class)?.volume() * factorial(self.dim()))
    }

    pub fn is_nef(&self, class: &[Q]) -> Result<bool> {
        Error::check_dim(self.rank(), class.len())?;
        Ok(self.walls().iter().all(|w| !dot(&self.wall_functional(w), class).is_negative()))
    }

    pub fn is_big(&self, class: &[Q]) -> Result<bool> {
        Ok(self.section_polytope(class)?.is_full_dimensional())
    }

    pub fn is_psef(&self, class: &[Q]) -> Result<bool> {
        Error::check_dim(self.rank(), class.len())?;
        Ok(self.psef_cone().contains(class))
    }

    /// `(D_1 ... D_n)` for nef classes, as `n!` times the mixed volume.
    pub fn intersection_number(&self, classes: &[&[Q]]) -> Result<Q> {
        Error::check_dim(self.dim(), classes.len())?;
        for c in classes {
            if !self.is_nef(c)? {
                return Err(Error::NotNef(format!(
                    "{} is not nef; use the positive product instead",
                    RationalVector(c.to_vec())
                )));
            }
        }
        if classes.iter().all(|c| *c == classes[0]) {
            return self.toric_volume(classes[0]);
        }
        let polys: Vec<LatticePolytope> = classes.iter().map(|c| self.section_polytope(c)).collect::<Result<_>>()?;
        let refs: Vec<&LatticePolytope> = polys.iter().collect();
        Ok(mixed_volume(&refs)? * factorial(self.dim()))
    }

    /// Nef cone cut out by the wall curves.
    pub fn nef_cone(&self) -> RationalCone {
        let ineqs: Vec<RationalVector> = self.walls().iter().map(|w| self.wall_functional(w)).collect();
        RationalCone::from_inequalities(self.rank(), &ineqs, &[]).expect("dimensions agree")
    }

    /// Cone spanned by the invariant prime divisors.
    pub fn psef_cone(&self) -> RationalCone {
        let gens: Vec<RationalVector> = (0..self.rays().len()).map(|i| self.ray_class(i)).collect();
        RationalCone::from_generators(self.rank(), &gens).expect("dimensions agree")
    }

    /// `<alpha^{n-1}> . gamma = (n-1)! sum_i c_i fm_i(P_alpha)` where `c` is a
    /// representative of `gamma`.
    pub fn positive_product_pairing(&self, alpha: &[Q], gamma: &[Q]) -> Result<Q> {
        let p = self.section_polytope(alpha)?;
        if !p.is_full_dimensional() {
            return Err(Error::NotBig(RationalVector(alpha.to_vec()).to_string()));
        }
        let c = self.representative(gamma)?;
        let fm = p.facet_measures();
        let s = fm.iter().zip(&c).fold(Q::zero(), |acc, (f, x)| acc + f * x);
        Ok(s * factorial(self.dim() - 1))
    }

    /// Left and right derivatives of `t -> vol(alpha + t gamma)` at zero,
    /// computed exactly from the volume polynomial on the adjacent chambers.
    pub fn one_sided_derivatives(&self, alpha: &[Q], gamma: &[Q]) -> Result<(Q, Q)> {
        if !self.is_big(alpha)? {
            return Err(Error::NotBig(RationalVector(alpha.to_vec()).to_string()));
        }
        let right = self.right_derivative(alpha, gamma)?;
        let neg: Vec<Q> = gamma.iter().map(|x| -x).collect();
        let left = -self.right_derivative(alpha, &neg)?;
        Ok((left, right))
    }

    fn right_derivative(&self, alpha: &[Q], gamma: &[Q]) -> Result<Q> {
        let n = self.dim();
        let p = self.section_polytope(alpha)?;
        let c = self.representative(gamma)?;
        let first = p.critical_steps(&c).into_iter().find(|t| t.is_positive()).unwrap_or_else(Q::one);
        let h = first / q(n as i64 + 2);
        let ts: Vec<Q> = (0..=n + 1).map(|k| &h * q(k as i64)).collect();
        let vols: Vec<Q> = ts
            .iter()
            .map(|t| {
                let offsets: Vec<Q> = p.offsets().iter().zip(&c).map(|(a, x)| a + t * x).collect();
                p.with_offsets(offsets).map(|pt| pt.volume() * factorial(n))
            })
            .collect::<Result<_>>()?;
        let vander: Vec<Vec<Q>> =
            ts[..=n].iter().map(|t| (0..=n).map(|k| num_traits::pow(t.clone(), k)).collect()).collect();
        let coef = linalg::solve(&vander, &vols[..=n]).expect("distinct nodes");
        let check = coef.iter().rev().fold(Q::zero(), |acc, a| acc * &ts[n + 1] + a);
        if check != vols[n + 1] {
            return Err(Error::instance("volume is not polynomial on the chamber"));
        }
        Ok(coef[1].clone())
    }

    /// The intersection form on class coordinates, assembled from mixed
    /// volumes of a basis of nef classes.
    pub fn intersection_form(&self) -> Result<&MultilinearForm> {
        if let Some(f) = self.form.get() {
            return Ok(f);
        }
        let f = self.build_form()?;
        Ok(self.form.get_or_init(|| f))
    }

    fn build_form(&self) -> Result<MultilinearForm> {
        let n = self.dim();
        let k = self.rank();
        let nef = self.nef_cone();
        let mut chosen: Vec<Vec<Q>> = Vec::new();
        for g in nef.generators() {
            let mut trial = chosen.clone();
            trial.push(g.0.clone());
            if linalg::rank(&trial) == trial.len() {
                chosen = trial;
            }
        }
        if chosen.len() != k {
            return Err(Error::instance("nef cone is not full-dimensional; fan is not projective"));
        }
        // values on the nef basis, indexed by multi-index
        let total = k.pow(n as u32);
        let mut on_basis = vec![Q::zero(); total];
        for flat in 0..total {
            let idx = multi_index(flat, k, n);
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            let canonical = sorted.iter().fold(0, |acc, &i| acc * k + i);
            if canonical < flat {
                on_basis[flat] = on_basis[canonical].clone();
                continue;
            }
            let args: Vec<&[Q]> = idx.iter().map(|&i| chosen[i].as_slice()).collect();
            on_basis[flat] = self.intersection_number(&args)?;
        }
        let basis_form = MultilinearForm { degree: n, rank: k, coeffs: on_basis };
        // class coordinates -> nef-basis coordinates
        let cols = linalg::transpose(&chosen);
        let inv = linalg::inverse(&cols).expect("independent nef classes");
        let unit_images: Vec<Vec<Q>> = (0..k).map(|i| inv.iter().map(|row| row[i].clone()).collect()).collect();
        let coeffs = (0..total)
            .map(|flat| {
                let idx = multi_index(flat, k, n);
                let args: Vec<&[Q]> = idx.iter().map(|&i| unit_images[i].as_slice()).collect();
                basis_form.eval(&args)
            })
            .collect();
        Ok(MultilinearForm { degree: n, rank: k, coeffs })
    }

    /// Functional `gamma -> (a_1 ... a_{n-1} . gamma)` of a product of
    /// classes, via the intersection form.
    pub fn curve_of_product(&self, classes: &[&[Q]]) -> Result<RationalVector> {
        Error::check_dim(self.dim() - 1, classes.len())?;
        let form = self.intersection_form()?;
        Ok((0..self.rank())
            .map(|i| {
                let e = RationalVector::unit(self.rank(), i);
                let mut args: Vec<&[Q]> = classes.to_vec();
                args.push(&e);
                form.eval(&args)
            })
            .collect())
    }
}

fn multi_index(mut flat: usize, k: usize, n: usize) -> Vec<usize> {
    let mut idx = vec![0; n];
    for slot in idx.iter_mut().rev() {
        *slot = flat % k;
        flat /= k;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::qr;
    use crate::toric::builtin::fan;

    fn c(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn volumes_of_named_classes() {
        assert_eq!(fan("P2").unwrap().toric_volume(&c(&[1])).unwrap(), q(1));
        let p1p1 = fan("P1xP1").unwrap();
        assert_eq!(p1p1.toric_volume(&c(&[2, 2])).unwrap(), q(8));
        assert_eq!(p1p1.toric_volume(&c(&[-1, 0])).unwrap(), q(0));
        let f1 = fan("F1").unwrap();
        assert_eq!(f1.section_polytope(&c(&[2, -1])).unwrap().volume(), qr(3, 2));
        assert_eq!(f1.toric_volume(&c(&[2, -1])).unwrap(), q(3));
    }

    #[test]
    fn section_polytope_of_square() {
        let p = fan("P1xP1").unwrap().section_polytope(&c(&[3, 3])).unwrap();
        let mut v: Vec<Vec<Q>> = p.vertices().iter().map(|x| x.0.clone()).collect();
        v.sort();
        assert_eq!(v, vec![c(&[0, 0]), c(&[0, 3]), c(&[3, 0]), c(&[3, 3])]);
    }

    #[test]
    fn intersection_numbers() {
        let p2 = fan("P2").unwrap();
        assert_eq!(p2.intersection_number(&[&c(&[1]), &c(&[1])]).unwrap(), q(1));
        let p1p1 = fan("P1xP1").unwrap();
        assert_eq!(p1p1.intersection_number(&[&c(&[3, 3]), &c(&[1, 1])]).unwrap(), q(6));
        let f1 = fan("F1").unwrap();
        assert_eq!(f1.intersection_number(&[&c(&[2, -1]), &c(&[1, -1])]).unwrap(), q(1));
        let err = f1.intersection_number(&[&c(&[1, 1]), &c(&[1, 0])]).unwrap_err();
        assert!(matches!(err, Error::NotNef(_)));
    }

    #[test]
    fn cones_of_f1_and_threefold() {
        let f1 = fan("F1").unwrap();
        assert_eq!(
            f1.psef_cone().generators().iter().map(|g| g.0.clone()).collect::<Vec<_>>(),
            vec![c(&[0, 1]), c(&[1, -1])]
        );
        assert_eq!(
            f1.nef_cone().generators().iter().map(|g| g.0.clone()).collect::<Vec<_>>(),
            vec![c(&[1, -1]), c(&[1, 0])]
        );
        let p13 = fan("P1^3").unwrap();
        assert!(p13.nef_cone().same_as(&p13.psef_cone()));
        assert_eq!(p13.nef_cone().generators().len(), 3);
        let p2 = fan("P2").unwrap();
        assert_eq!(p2.nef_cone().generators().len(), 1);
    }

    #[test]
    fn intersection_form_of_surfaces() {
        let f1 = fan("F1").unwrap();
        assert_eq!(f1.intersection_form().unwrap().matrix(), vec![c(&[1, 0]), c(&[0, -1])]);
        let dp6 = fan("dP6").unwrap();
        let m = dp6.intersection_form().unwrap().matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i != j {
                    0
                } else if i == 0 {
                    1
                } else {
                    -1
                };
                assert_eq!(m[i][j], q(expect));
            }
        }
        let f3 = fan("F3").unwrap();
        assert_eq!(f3.intersection_form().unwrap().matrix(), vec![c(&[0, 1]), c(&[1, -3])]);
    }

    #[test]
    fn positive_products() {
        let p2 = fan("P2").unwrap();
        assert_eq!(p2.positive_product_pairing(&c(&[1]), &c(&[1])).unwrap(), q(1));
        let f1 = fan("F1").unwrap();
        assert_eq!(f1.positive_product_pairing(&c(&[1, 1]), &c(&[0, 1])).unwrap(), q(0));
        let half = vec![q(1), qr(1, 2)];
        assert_eq!(f1.positive_product_pairing(&half, &c(&[1, -1])).unwrap(), q(1));
        assert!(matches!(f1.positive_product_pairing(&c(&[1, -1]), &c(&[1, 0])), Err(Error::NotBig(_))));
    }

    #[test]
    fn chamber_derivatives_across_the_wall() {
        let f1 = fan("F1").unwrap();
        // vol(H + tE) = 1 - t^2 for t <= 0 and 1 for t >= 0
        let (l, r) = f1.one_sided_derivatives(&c(&[1, 0]), &c(&[0, 1])).unwrap();
        assert_eq!((l, r), (q(0), q(0)));
        let (l, r) = f1.one_sided_derivatives(&[q(1), qr(-1, 2)], &c(&[0, 1])).unwrap();
        assert_eq!((l, r), (q(1), q(1)));
        let half = vec![q(1), qr(1, 2)];
        let (l, r) = f1.one_sided_derivatives(&half, &c(&[1, -1])).unwrap();
        assert_eq!((l, r), (q(2), q(2)));
    }

    #[test]
    fn threefold_form_and_curves() {
        let blp3 = fan("BlP3").unwrap();
        let form = blp3.intersection_form().unwrap();
        // H^3 = 1, E^3 = 1, mixed terms vanish
        assert_eq!(form.eval(&[&c(&[1, 0]), &c(&[1, 0]), &c(&[1, 0])]), q(1));
        assert_eq!(form.eval(&[&c(&[0, 1]), &c(&[0, 1]), &c(&[0, 1])]), q(1));
        assert_eq!(form.eval(&[&c(&[1, 0]), &c(&[0, 1]), &c(&[0, 1])]), q(0));
        let curves: Vec<RationalVector> = blp3.movable_curves().iter().map(|w| blp3.wall_functional(w)).collect();
        assert_eq!(curves, vec![RationalVector(c(&[1, 0])), RationalVector(c(&[1, 1]))]);
    }
}
