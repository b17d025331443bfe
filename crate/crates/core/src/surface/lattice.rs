//! Surfaces presented by their intersection lattice and a declared list of
//! irreducible curves generating the effective cone.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::linalg;
use crate::lattice::rational::{q, RationalVector, Q};
use crate::lattice::{Pairing, RationalCone};
use crate::toric::Fan;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionSpec {
    /// Free-form note; the curve list is declared complete on the whole
    /// pseudoeffective cone.
    Note(String),
    /// Inequalities `f . x >= 0` cutting out the region where the list is
    /// complete.
    Facets(Vec<RationalVector>),
    #[default]
    All,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceSpec {
    #[serde(default)]
    pub name: String,
    pub rank: usize,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
    pub curves: Vec<RationalVector>,
    pub ample: RationalVector,
    #[serde(default)]
    pub region: RegionSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SurfaceLattice {
    spec: SurfaceSpec,
    form: Vec<Vec<Q>>,
}

/// `(-1)^k det(G_k) > 0` for every leading principal minor.
pub fn is_negative_definite(g: &[Vec<Q>]) -> bool {
    (1..=g.len()).all(|k| {
        let minor: Vec<Vec<Q>> = g[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = linalg::det(&minor);
        if k % 2 == 0 {
            d.is_positive()
        } else {
            d.is_negative()
        }
    })
}

impl SurfaceLattice {
    pub fn from_spec(spec: SurfaceSpec) -> Result<Self> {
        let r = spec.rank;
        if r == 0 {
            return Err(Error::instance("rank must be positive"));
        }
        if spec.q.len() != r || spec.q.iter().any(|row| row.len() != r) {
            return Err(Error::instance(format!("Q must be {r}x{r}")));
        }
        for i in 0..r {
            for j in 0..i {
                if spec.q[i][j] != spec.q[j][i] {
                    return Err(Error::instance("Q is not symmetric"));
                }
            }
        }
        let form: Vec<Vec<Q>> = spec.q.iter().map(|row| row.iter().map(|&x| q(x)).collect()).collect();
        let lat = SurfaceLattice { spec, form };
        for c in lat.spec.curves.iter().chain(std::iter::once(&lat.spec.ample)) {
            Error::check_dim(r, c.dim())?;
        }
        if let RegionSpec::Facets(fs) = &lat.spec.region {
            for f in fs {
                Error::check_dim(r, f.dim())?;
            }
        }
        if !lat.spec.labels.is_empty() && lat.spec.labels.len() != r {
            return Err(Error::instance("label count differs from rank"));
        }
        lat.check_signature()?;
        let a = &lat.spec.ample;
        for (i, c) in lat.spec.curves.iter().enumerate() {
            if !lat.dot(a, c).is_positive() {
                return Err(Error::instance(format!("ample witness does not meet curve {i} positively")));
            }
        }
        Ok(lat)
    }

    /// Signature `(1, r-1)`: the ample witness has positive square and the
    /// form is negative definite on its orthogonal complement.
    fn check_signature(&self) -> Result<()> {
        let a = &self.spec.ample;
        if !self.dot(a, a).is_positive() {
            return Err(Error::instance("ample witness has nonpositive square"));
        }
        if linalg::det(&self.form).is_zero() {
            return Err(Error::instance("Q is degenerate"));
        }
        let qa = linalg::mat_vec(&self.form, a);
        let perp = linalg::nullspace(&[qa], self.rank());
        let gram: Vec<Vec<Q>> = perp.iter().map(|x| perp.iter().map(|y| self.dot(x, y)).collect()).collect();
        if !perp.is_empty() && !is_negative_definite(&gram) {
            return Err(Error::instance("Q does not have signature (1, r-1)"));
        }
        Ok(())
    }

    /// Lattice of a toric surface: intersection form from mixed volumes,
    /// curve list from the invariant divisors.
    pub fn from_fan(fan: &Fan) -> Result<Self> {
        if fan.dim() != 2 {
            return Err(Error::input(format!("{} is not a surface", fan.name())));
        }
        let m = fan.intersection_form()?.matrix();
        let to_int = |x: &Q| -> Result<i64> {
            use num_traits::ToPrimitive;
            if !x.is_integer() {
                return Err(Error::instance("non-integral intersection form"));
            }
            x.to_integer().to_i64().ok_or_else(|| Error::instance("intersection number overflow"))
        };
        let qm: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(to_int).collect()).collect::<Result<_>>()?;
        let mut curves: Vec<RationalVector> = (0..fan.rays().len()).map(|i| fan.ray_class(i)).collect();
        curves.sort_by(|a, b| a.0.cmp(&b.0));
        curves.dedup();
        let nef = fan.nef_cone();
        let ample: RationalVector = nef.generators().iter().fold(RationalVector::zeros(fan.rank()), |acc, g| &acc + g);
        let spec = SurfaceSpec {
            name: fan.name().to_string(),
            rank: fan.rank(),
            q: qm,
            curves,
            ample,
            region: RegionSpec::All,
            labels: fan.labels(),
        };
        Self::from_spec(spec)
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn form(&self) -> &[Vec<Q>] {
        &self.form
    }

    pub fn pairing(&self) -> Pairing {
        Pairing::new(self.form.clone()).expect("validated form")
    }

    pub fn curves(&self) -> &[RationalVector] {
        &self.spec.curves
    }

    pub fn ample(&self) -> &RationalVector {
        &self.spec.ample
    }

    pub fn labels(&self) -> Vec<String> {
        if self.spec.labels.is_empty() {
            (1..=self.rank()).map(|i| format!("b{i}")).collect()
        } else {
            self.spec.labels.clone()
        }
    }

    /// Intersection product `x . y`.
    pub fn dot(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.form[i][j].is_zero() {
                    s += xi * yj * &self.form[i][j];
                }
            }
        }
        s
    }

    pub fn in_region(&self, x: &[Q]) -> bool {
        match &self.spec.region {
            RegionSpec::Facets(fs) => fs.iter().all(|f| !crate::lattice::rational::dot(f, x).is_negative()),
            _ => true,
        }
    }

    pub(crate) fn check_class(&self, x: &[Q]) -> Result<()> {
        Error::check_dim(self.rank(), x.len())?;
        if !self.in_region(x) {
            return Err(Error::OutsideRegion(RationalVector(x.to_vec()).to_string()));
        }
        Ok(())
    }

    pub fn is_nef(&self, x: &[Q]) -> Result<bool> {
        Error::check_dim(self.rank(), x.len())?;
        Ok(self.curves().iter().all(|c| !self.dot(x, c).is_negative()) && !self.dot(x, self.ample()).is_negative())
    }

    pub fn is_psef(&self, x: &[Q]) -> Result<bool> {
        match self.zariski(x) {
            Ok(_) => Ok(true),
            Err(Error::NotPseudoeffective(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Cone spanned by the declared curves.
    pub fn psef_cone(&self) -> RationalCone {
        RationalCone::from_generators(self.rank(), self.curves()).expect("dimensions agree")
    }

    /// Classes pairing nonnegatively with every declared curve.
    pub fn nef_cone(&self) -> RationalCone {
        let ineqs: Vec<RationalVector> =
            self.curves().iter().map(|c| RationalVector(linalg::mat_vec(&self.form, c))).collect();
        RationalCone::from_inequalities(self.rank(), &ineqs, &[]).expect("dimensions agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin::surface;
    use crate::toric;

    #[test]
    fn shipped_lattices_validate() {
        for name in crate::surface::builtin::surface_names() {
            surface(name).unwrap();
        }
    }

    #[test]
    fn rejects_wrong_signature() {
        let spec = SurfaceSpec {
            name: "bad".into(),
            rank: 2,
            q: vec![vec![1, 0], vec![0, 1]],
            curves: vec![],
            ample: RationalVector::from_ints(&[1, 0]),
            region: RegionSpec::All,
            labels: vec![],
        };
        assert!(matches!(SurfaceLattice::from_spec(spec), Err(Error::Instance(_))));
    }

    #[test]
    fn region_note_or_facets_parse() {
        let text = r#"{"rank":1,"Q":[[1]],"curves":[[1]],"ample":["1"],"region":[[1]]}"#;
        let spec: SurfaceSpec = serde_json::from_str(text).unwrap();
        let lat = SurfaceLattice::from_spec(spec).unwrap();
        assert!(!lat.in_region(&[q(-1)]));
        let text = r#"{"rank":1,"Q":[[1]],"curves":[[1]],"ample":[1],"region":"complete list"}"#;
        let spec: SurfaceSpec = serde_json::from_str(text).unwrap();
        assert!(SurfaceLattice::from_spec(spec).unwrap().in_region(&[q(-1)]));
    }

    #[test]
    fn toric_surfaces_match_hand_lattices() {
        for name in ["P2", "F1", "F2", "F3", "F4", "Bl2P2", "dP6"] {
            let from_fan = SurfaceLattice::from_fan(&toric::fan(name).unwrap()).unwrap();
            let hand = surface(name).unwrap();
            assert_eq!(from_fan.form(), hand.form(), "{name}");
            assert!(from_fan.psef_cone().same_as(&hand.psef_cone()), "{name}");
            assert!(from_fan.nef_cone().same_as(&hand.nef_cone()), "{name}");
        }
    }

    #[test]
    fn f1_nef_tests() {
        let f1 = surface("F1").unwrap();
        assert!(f1.is_nef(&[q(1), q(0)]).unwrap());
        assert!(!f1.is_nef(&[q(1), q(1)]).unwrap());
        assert!(!f1.is_psef(&[q(-1), q(0)]).unwrap());
    }
}
