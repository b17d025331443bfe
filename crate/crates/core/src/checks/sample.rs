//! Seeded samplers for classes in the nef and pseudoeffective cones.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::rational::{qr, RationalVector, Q};

/// Draws classes as rational combinations of cone generators with
/// coefficients `a / b`, `a <= 4`, `1 <= b <= 3`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn coeff(&mut self, strict: bool) -> Q {
        let a = self.rng.gen_range(if strict { 1 } else { 0 }..=4);
        let b = self.rng.gen_range(1..=3);
        qr(a, b)
    }

    /// Nonzero combination of `gens`; every coefficient is positive when
    /// `strict`, which lands in the interior of a full-dimensional cone.
    pub fn combination(&mut self, gens: &[RationalVector], strict: bool) -> Vec<Q> {
        assert!(!gens.is_empty(), "cone has no generators");
        let dim = gens[0].dim();
        let mut coeffs: Vec<Q> = (0..gens.len()).map(|_| self.coeff(strict)).collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            let i = self.rng.gen_range(0..gens.len());
            coeffs[i] = qr(1, 1);
        }
        let mut out = vec![Q::zero(); dim];
        for (c, g) in coeffs.iter().zip(gens) {
            for (o, x) in out.iter_mut().zip(g.iter()) {
                *o += c * x;
            }
        }
        out
    }

    /// Nonzero integer direction with entries in `[-2, 2]`.
    pub fn direction(&mut self, rank: usize) -> Vec<Q> {
        loop {
            let v: Vec<Q> = (0..rank).map(|_| qr(self.rng.gen_range(-2..=2), 1)).collect();
            if v.iter().any(|x| !x.is_zero()) {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{builtin, Preference};

    #[test]
    fn same_seed_same_classes() {
        let m = builtin("dP6", Preference::Toric).unwrap();
        let gens = m.nef_cone().generators().to_vec();
        let a: Vec<Vec<Q>> = {
            let mut s = Sampler::new(11);
            (0..20).map(|_| s.combination(&gens, false)).collect()
        };
        let mut s = Sampler::new(11);
        let b: Vec<Vec<Q>> = (0..20).map(|_| s.combination(&gens, false)).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| m.is_nef(x).unwrap()));
    }

    #[test]
    fn strict_psef_combinations_are_big() {
        for name in ["F1", "dP6", "P1^3", "BlP3"] {
            let m = builtin(name, Preference::Toric).unwrap();
            let gens = m.psef_cone().generators().to_vec();
            let mut s = Sampler::new(3);
            for _ in 0..20 {
                assert!(m.is_big(&s.combination(&gens, true)).unwrap(), "{name}");
            }
        }
    }
}
