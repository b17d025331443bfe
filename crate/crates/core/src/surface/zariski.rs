//! Zariski decomposition by support fixpoint, and the volume, positive
//! part, derivative and non-Kähler divisors it determines.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::linalg;
use crate::lattice::rational::{q, RationalVector, Q};

use super::lattice::{is_negative_definite, SurfaceLattice};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegativeTerm {
    pub curve: usize,
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub coeff: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZariskiDecomposition {
    pub positive: RationalVector,
    pub negative: Vec<NegativeTerm>,
}

impl ZariskiDecomposition {
    pub fn negative_class(&self, lat: &SurfaceLattice) -> RationalVector {
        self.negative
            .iter()
            .fold(RationalVector::zeros(lat.rank()), |acc, t| &acc + &lat.curves()[t.curve].scale(&t.coeff))
    }

    pub fn support(&self) -> Vec<usize> {
        self.negative.iter().map(|t| t.curve).collect()
    }
}

/// `P(t) = p0 + t p1` and `N(t)` coefficients `x0 + t x1` on a fixed support.
struct ChamberFormula {
    p0: Vec<Q>,
    p1: Vec<Q>,
    x0: Vec<Q>,
    x1: Vec<Q>,
}

impl SurfaceLattice {
    fn gram(&self, support: &[usize]) -> Vec<Vec<Q>> {
        support
            .iter()
            .map(|&i| support.iter().map(|&j| self.dot(&self.curves()[i], &self.curves()[j])).collect())
            .collect()
    }

    /// Coefficients of `N` on `support` with `(x - N) . C = 0` there.
    fn solve_support(&self, x: &[Q], support: &[usize], gram: &[Vec<Q>]) -> Vec<Q> {
        let rhs: Vec<Q> = support.iter().map(|&i| self.dot(x, &self.curves()[i])).collect();
        linalg::solve(gram, &rhs).expect("negative definite Gram matrix is invertible")
    }

    fn subtract(&self, x: &[Q], support: &[usize], coeffs: &[Q]) -> Vec<Q> {
        let mut p = x.to_vec();
        for (&i, c) in support.iter().zip(coeffs) {
            for (pk, ck) in p.iter_mut().zip(self.curves()[i].iter()) {
                *pk -= c * ck;
            }
        }
        p
    }

    pub fn zariski(&self, alpha: &[Q]) -> Result<ZariskiDecomposition> {
        self.check_class(alpha)?;
        let not_psef = |why: &str| Error::NotPseudoeffective(format!("{} ({why})", RationalVector(alpha.to_vec())));
        let mut support: Vec<usize> = Vec::new();
        let mut coeffs: Vec<Q> = Vec::new();
        let mut p = alpha.to_vec();
        loop {
            let new: Vec<usize> = (0..self.curves().len())
                .filter(|i| !support.contains(i) && self.dot(&p, &self.curves()[*i]).is_negative())
                .collect();
            if new.is_empty() {
                break;
            }
            support.extend(new);
            support.sort_unstable();
            let gram = self.gram(&support);
            if !is_negative_definite(&gram) {
                return Err(not_psef("support is not negative definite"));
            }
            coeffs = self.solve_support(alpha, &support, &gram);
            if coeffs.iter().any(|c| c.is_negative()) {
                return Err(not_psef("negative coefficient in the negative part"));
            }
            p = self.subtract(alpha, &support, &coeffs);
        }
        if self.dot(&p, self.ample()).is_negative() || self.dot(&p, &p).is_negative() {
            return Err(not_psef("positive part is not nef"));
        }
        let negative = support
            .into_iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(curve, coeff)| NegativeTerm { curve, coeff })
            .collect();
        Ok(ZariskiDecomposition { positive: RationalVector(p), negative })
    }

    /// `P^2`, or zero for classes that are not pseudoeffective.
    pub fn volume(&self, alpha: &[Q]) -> Result<Q> {
        match self.zariski(alpha) {
            Ok(z) => Ok(self.dot(&z.positive, &z.positive)),
            Err(Error::NotPseudoeffective(_)) => Ok(Q::zero()),
            Err(e) => Err(e),
        }
    }

    pub fn positive_part(&self, alpha: &[Q]) -> Result<RationalVector> {
        Ok(self.zariski(alpha)?.positive)
    }

    fn big_decomposition(&self, alpha: &[Q]) -> Result<ZariskiDecomposition> {
        let z = match self.zariski(alpha) {
            Ok(z) => z,
            Err(Error::NotPseudoeffective(_)) => return Err(Error::NotBig(RationalVector(alpha.to_vec()).to_string())),
            Err(e) => return Err(e),
        };
        if !self.dot(&z.positive, &z.positive).is_positive() {
            return Err(Error::NotBig(RationalVector(alpha.to_vec()).to_string()));
        }
        Ok(z)
    }

    pub fn is_big(&self, alpha: &[Q]) -> Result<bool> {
        match self.big_decomposition(alpha) {
            Ok(_) => Ok(true),
            Err(Error::NotBig(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `d/dt vol(alpha + t gamma)` at zero: `2 P(alpha) . gamma`.
    pub fn derivative(&self, alpha: &[Q], gamma: &[Q]) -> Result<Q> {
        Error::check_dim(self.rank(), gamma.len())?;
        let z = self.big_decomposition(alpha)?;
        Ok(q(2) * self.dot(&z.positive, gamma))
    }

    /// `P(alpha) . gamma`.
    pub fn positive_product(&self, alpha: &[Q], gamma: &[Q]) -> Result<Q> {
        Error::check_dim(self.rank(), gamma.len())?;
        let z = self.big_decomposition(alpha)?;
        Ok(self.dot(&z.positive, gamma))
    }

    /// Declared curves orthogonal to the positive part.
    pub fn nonkahler_divisors(&self, alpha: &[Q]) -> Result<Vec<usize>> {
        let z = self.big_decomposition(alpha)?;
        Ok((0..self.curves().len()).filter(|&i| self.dot(&z.positive, &self.curves()[i]).is_zero()).collect())
    }

    fn chamber_formula(&self, alpha: &[Q], dir: &[Q], support: &[usize]) -> ChamberFormula {
        let gram = self.gram(support);
        let x0 = if support.is_empty() { vec![] } else { self.solve_support(alpha, support, &gram) };
        let x1 = if support.is_empty() { vec![] } else { self.solve_support(dir, support, &gram) };
        ChamberFormula { p0: self.subtract(alpha, support, &x0), p1: self.subtract(dir, support, &x1), x0, x1 }
    }

    /// Whether the support formula is the Zariski decomposition for all
    /// `t` in `[0, t_max]`: coefficients stay nonnegative and `P(t)` stays nef.
    fn formula_valid_on(&self, f: &ChamberFormula, support: &[usize], t_max: &Q) -> bool {
        let nonneg_on = |a: &Q, b: &Q| !a.is_negative() && !(a + b * t_max).is_negative();
        let coeffs_ok = f.x0.iter().zip(&f.x1).all(|(a, b)| nonneg_on(a, b));
        let nef_ok = (0..self.curves().len())
            .filter(|i| !support.contains(i))
            .map(|i| &self.curves()[i])
            .chain(std::iter::once(self.ample()))
            .all(|c| nonneg_on(&self.dot(&f.p0, c), &self.dot(&f.p1, c)));
        coeffs_ok && nef_ok
    }

    /// Exact left and right derivatives of `t -> vol(alpha + t gamma)` at
    /// zero, read off the quadratic volume on the adjacent Zariski chambers.
    pub fn one_sided_derivatives(&self, alpha: &[Q], gamma: &[Q]) -> Result<(Q, Q)> {
        Error::check_dim(self.rank(), gamma.len())?;
        self.big_decomposition(alpha)?;
        let right = self.right_derivative(alpha, gamma)?;
        let neg: Vec<Q> = gamma.iter().map(|x| -x).collect();
        let left = -self.right_derivative(alpha, &neg)?;
        Ok((left, right))
    }

    fn right_derivative(&self, alpha: &[Q], dir: &[Q]) -> Result<Q> {
        let mut t = Q::one();
        for _ in 0..64 {
            t /= q(2);
            let moved: Vec<Q> = alpha.iter().zip(dir).map(|(a, d)| a + &t * d).collect();
            let support = match self.zariski(&moved) {
                Ok(z) => z.support(),
                Err(Error::NotPseudoeffective(_)) => continue,
                Err(e) => return Err(e),
            };
            let f = self.chamber_formula(alpha, dir, &support);
            if !self.formula_valid_on(&f, &support, &t) {
                continue;
            }
            // the quadratic must reproduce the decomposition inside the chamber
            let half = &t / q(2);
            let mid: Vec<Q> = alpha.iter().zip(dir).map(|(a, d)| a + &half * d).collect();
            let p_mid: Vec<Q> = f.p0.iter().zip(&f.p1).map(|(a, b)| a + &half * b).collect();
            if self.volume(&mid)? != self.dot(&p_mid, &p_mid) {
                return Err(Error::instance("chamber formula disagrees with the decomposition"));
            }
            return Ok(q(2) * self.dot(&f.p0, &f.p1));
        }
        Err(Error::instance("no Zariski chamber found adjacent to the class"))
    }
}
