//! Approximate Zariski decompositions `alpha = alpha_j + E_j` with
//! `alpha_j` ample, and the quadratic bound on `alpha_j . E_j` in terms of
//! the volume gap.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::rational::{q, RationalVector, Q};

use super::lattice::SurfaceLattice;
use super::zariski::ZariskiDecomposition;

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRow {
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub epsilon: Q,
    /// `alpha_j . E_j`
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub pairing: Q,
    /// `vol(alpha) - alpha_j^2`
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub gap: Q,
    /// `(4C / n^2) * gap`
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub bound: Q,
    /// Exact `t^2` coefficient of the expansion for this row; at most `C`.
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub quadratic_coeff: Q,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub instance: String,
    pub alpha: RationalVector,
    pub decomposition: ZariskiDecomposition,
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub volume: Q,
    /// Ample shift: `alpha_j = (1 - eps) P + eps c A`.
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub shift: Q,
    /// `H = k A` with `H - alpha`, `H - P`, `H - c A` nef.
    pub h_multiple: u32,
    pub h: RationalVector,
    /// Uniform constant bounding the quadratic term.
    #[serde(with = "crate::lattice::rational::serde_q")]
    pub c: Q,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentReport {
    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }
}

/// The schedule `eps_j = 2^{-j}`, `j = 0..=steps`, preceded by the exact
/// endpoint `eps = 0`.
pub fn dyadic_schedule(steps: u32) -> Vec<Q> {
    let mut out = vec![Q::zero()];
    let mut e = Q::one();
    for _ in 0..=steps {
        out.push(e.clone());
        e /= q(2);
    }
    out
}

impl SurfaceLattice {
    pub fn approximate_zariski_experiment(&self, alpha: &[Q], schedule: &[Q]) -> Result<ExperimentReport> {
        let z = self.zariski(alpha)?;
        let p = z.positive.clone();
        let vol = self.dot(&p, &p);
        if !vol.is_positive() {
            return Err(Error::NotBig(RationalVector(alpha.to_vec()).to_string()));
        }
        let n_class = z.negative_class(self);
        let a = self.ample().clone();

        // largest dyadic c with P - cA big
        let mut c = Q::one();
        let mut found = false;
        for _ in 0..64 {
            let diff = &p - &a.scale(&c);
            if self.is_big(&diff)? {
                found = true;
                break;
            }
            c /= q(2);
        }
        if !found {
            return Err(Error::instance("no ample shift keeps the positive part big"));
        }
        let ca = a.scale(&c);

        let mut h = None;
        for k in 1..=64u32 {
            let hk = a.scale(&q(k as i64));
            let ok = self.is_nef(&(&hk - &RationalVector(alpha.to_vec())))?
                && self.is_nef(&(&hk - &p))?
                && self.is_nef(&(&hk - &ca))?;
            if ok {
                h = Some((k, hk));
                break;
            }
        }
        let Some((k, h)) = h else {
            return Err(Error::instance("no multiple of the ample witness dominates the class"));
        };
        let h2 = self.dot(&h, &h);
        // t^2 coefficient 2 H.b + b^2 - H^2 with b = (H - alpha) + alpha_j; the
        // monomials lie in [0, H^2], so 2*2 + 4 - 1 = 7 multiples of H^2 bound it
        let big_c = q(7) * &h2;
        let n = q(2);
        let factor = q(4) * &big_c / (&n * &n);
        let h_minus_alpha = &h - &RationalVector(alpha.to_vec());

        let rows = schedule
            .iter()
            .map(|eps| {
                let one_minus = Q::one() - eps;
                let alpha_j = &p.scale(&one_minus) + &ca.scale(eps);
                let e_j = &n_class + &(&p - &ca).scale(eps);
                let pairing = self.dot(&alpha_j, &e_j);
                let gap = &vol - self.dot(&alpha_j, &alpha_j);
                let bound = &factor * &gap;
                let b = &h_minus_alpha + &alpha_j;
                let quadratic_coeff = q(2) * self.dot(&h, &b) + self.dot(&b, &b) - &h2;
                let satisfied = &pairing * &pairing <= bound && quadratic_coeff <= big_c && !pairing.is_negative();
                ExperimentRow { epsilon: eps.clone(), pairing, gap, bound, quadratic_coeff, satisfied }
            })
            .collect();
        Ok(ExperimentReport {
            instance: self.name().to_string(),
            alpha: RationalVector(alpha.to_vec()),
            decomposition: z,
            volume: vol,
            shift: c,
            h_multiple: k,
            h,
            c: big_c,
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin::surface;

    #[test]
    fn exact_endpoint_is_orthogonal() {
        let f1 = surface("F1").unwrap();
        let rep = f1.approximate_zariski_experiment(&[q(1), q(1)], &[Q::zero()]).unwrap();
        assert_eq!(rep.rows[0].pairing, q(0));
        assert_eq!(rep.rows[0].gap, q(0));
        assert!(rep.rows[0].satisfied);
    }

    #[test]
    fn dyadic_schedule_satisfies_bound() {
        for (name, alpha) in [("F1", vec![q(1), q(1)]), ("F2", vec![q(1), q(1)]), ("dP6", vec![q(1), q(1), q(0), q(0)])]
        {
            let lat = surface(name).unwrap();
            let rep = lat.approximate_zariski_experiment(&alpha, &dyadic_schedule(12)).unwrap();
            assert!(rep.all_satisfied(), "{name}");
            for r in &rep.rows {
                assert!(r.quadratic_coeff <= rep.c);
            }
        }
    }
}
