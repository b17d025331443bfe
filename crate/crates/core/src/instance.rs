//! Instances by reference: a JSON file on disk, a file under the directory
//! named by `POSLAB_DATA`, or a shipped fan or surface lattice.
//!
//! Files are told apart by their keys: toric fans carry `rays`, surface
//! lattices carry `Q`.

use std::borrow::Cow;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::lattice::rational::{RationalVector, Q};
use crate::lattice::{Pairing, RationalCone};
use crate::surface::{self, SurfaceLattice, SurfaceSpec};
use crate::toric::{self, Fan, FanSpec};

pub const DATA_ENV: &str = "POSLAB_DATA";

/// A variety with exact volumes and positive products, presented either by
/// its fan or by its intersection lattice.
#[derive(Clone, Debug)]
pub enum Model {
    Toric(Fan),
    Surface(SurfaceLattice),
}

/// Which presentation to pick for names shipped in both forms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Preference {
    #[default]
    Toric,
    Surface,
}

impl Model {
    pub fn name(&self) -> &str {
        match self {
            Model::Toric(f) => f.name(),
            Model::Surface(s) => s.name(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::Toric(_) => "toric",
            Model::Surface(_) => "surface",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::Toric(f) => f.dim(),
            Model::Surface(_) => 2,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Model::Toric(f) => f.rank(),
            Model::Surface(s) => s.rank(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            Model::Toric(f) => f.labels(),
            Model::Surface(s) => s.labels(),
        }
    }

    pub fn volume(&self, a: &[Q]) -> Result<Q> {
        match self {
            Model::Toric(f) => f.toric_volume(a),
            Model::Surface(s) => s.volume(a),
        }
    }

    pub fn is_nef(&self, a: &[Q]) -> Result<bool> {
        match self {
            Model::Toric(f) => f.is_nef(a),
            Model::Surface(s) => s.is_nef(a),
        }
    }

    pub fn is_big(&self, a: &[Q]) -> Result<bool> {
        match self {
            Model::Toric(f) => f.is_big(a),
            Model::Surface(s) => s.is_big(a),
        }
    }

    pub fn is_psef(&self, a: &[Q]) -> Result<bool> {
        match self {
            Model::Toric(f) => f.is_psef(a),
            Model::Surface(s) => s.is_psef(a),
        }
    }

    /// Intersection number of `dim` classes, read off the multilinear
    /// intersection form.
    pub fn intersection(&self, classes: &[&[Q]]) -> Result<Q> {
        Error::check_dim(self.dim(), classes.len())?;
        for c in classes {
            Error::check_dim(self.rank(), c.len())?;
        }
        match self {
            Model::Toric(f) => Ok(f.intersection_form()?.eval(classes)),
            Model::Surface(s) => Ok(s.dot(classes[0], classes[1])),
        }
    }

    /// `<alpha^{n-1}> . gamma` for big `alpha`.
    pub fn positive_product(&self, alpha: &[Q], gamma: &[Q]) -> Result<Q> {
        match self {
            Model::Toric(f) => f.positive_product_pairing(alpha, gamma),
            Model::Surface(s) => s.positive_product(alpha, gamma),
        }
    }

    pub fn one_sided_derivatives(&self, alpha: &[Q], gamma: &[Q]) -> Result<(Q, Q)> {
        match self {
            Model::Toric(f) => f.one_sided_derivatives(alpha, gamma),
            Model::Surface(s) => s.one_sided_derivatives(alpha, gamma),
        }
    }

    pub fn nef_cone(&self) -> RationalCone {
        match self {
            Model::Toric(f) => f.nef_cone(),
            Model::Surface(s) => s.nef_cone(),
        }
    }

    pub fn psef_cone(&self) -> RationalCone {
        match self {
            Model::Toric(f) => f.psef_cone(),
            Model::Surface(s) => s.psef_cone(),
        }
    }

    /// The intersection pairing on classes, for models of dimension 2.
    pub fn surface_pairing(&self) -> Result<Pairing> {
        match self {
            Model::Surface(s) => Ok(s.pairing()),
            Model::Toric(f) if f.dim() == 2 => Pairing::new(f.intersection_form()?.matrix()),
            Model::Toric(_) => Err(Error::input("intersection pairing on classes needs a surface")),
        }
    }

    /// The surface lattice of a two-dimensional model.
    pub fn as_surface(&self) -> Result<Cow<'_, SurfaceLattice>> {
        match self {
            Model::Surface(s) => Ok(Cow::Borrowed(s)),
            Model::Toric(f) if f.dim() == 2 => Ok(Cow::Owned(SurfaceLattice::from_fan(f)?)),
            Model::Toric(f) => Err(Error::input(format!("{} is not a surface", f.name()))),
        }
    }

    pub fn class_label(&self, class: &[Q]) -> String {
        RationalVector(class.to_vec()).to_string()
    }
}

/// Parses a fan or surface instance from JSON text; `origin` prefixes error
/// messages.
pub fn parse_model(text: &str, origin: &str) -> Result<Model> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::input(format!("{origin}: {e}")))?;
    let obj = value.as_object().ok_or_else(|| Error::input(format!("{origin}: expected a JSON object")))?;
    if obj.contains_key("rays") {
        let mut spec: FanSpec = serde_json::from_str(text).map_err(|e| Error::input(format!("{origin}: {e}")))?;
        if spec.name.is_empty() {
            spec.name = stem(origin);
        }
        Ok(Model::Toric(Fan::from_spec(spec)?))
    } else if obj.contains_key("Q") {
        let mut spec: SurfaceSpec = serde_json::from_str(text).map_err(|e| Error::input(format!("{origin}: {e}")))?;
        if spec.name.is_empty() {
            spec.name = stem(origin);
        }
        Ok(Model::Surface(SurfaceLattice::from_spec(spec)?))
    } else {
        Err(Error::input(format!("{origin}: neither a fan (`rays`) nor a surface lattice (`Q`)")))
    }
}

fn stem(origin: &str) -> String {
    Path::new(origin).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn data_candidates(reference: &str) -> Vec<PathBuf> {
    let Some(dir) = std::env::var_os(DATA_ENV) else {
        return vec![];
    };
    let dir = PathBuf::from(dir);
    vec![dir.join(reference), dir.join(format!("{reference}.json"))]
}

fn read_file(path: &Path) -> Result<Model> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{origin}: {e}")))?;
    parse_model(&text, &origin)
}

/// Resolves `reference` as a path, then under `POSLAB_DATA`, then among the
/// shipped instances.
pub fn load(reference: &str, pref: Preference) -> Result<Model> {
    let path = Path::new(reference);
    if path.is_file() {
        return read_file(path);
    }
    if let Some(p) = data_candidates(reference).into_iter().find(|p| p.is_file()) {
        return read_file(&p);
    }
    if reference.ends_with(".json") {
        return Err(Error::input(format!("{reference}: no such file")));
    }
    builtin(reference, pref)
}

/// Shipped instance by name.
pub fn builtin(name: &str, pref: Preference) -> Result<Model> {
    let as_fan = || toric::fan(name).map(Model::Toric);
    let as_surface = || surface::surface(name).map(Model::Surface);
    let found = match pref {
        Preference::Toric => as_fan().or_else(|_| as_surface()),
        Preference::Surface => as_surface().or_else(|_| match toric::fan(name) {
            Ok(f) if f.dim() == 2 => SurfaceLattice::from_fan(&f).map(Model::Surface),
            other => other.map(Model::Toric),
        }),
    };
    found.map_err(|_| Error::input(format!("unknown instance {name:?}")))
}
