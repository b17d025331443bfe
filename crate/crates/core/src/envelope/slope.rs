//! Slope polytopes and their node and cell grids.

use crate::error::{Error, Result};
use crate::lattice::polytope::LatticePolytope;
use crate::lattice::rational::to_f64;

use super::grid::{grid_len, point_of, Axis};

const INSIDE_TOL: f64 = 1e-12;

/// A full-dimensional polytope in slope space with a uniform grid of
/// `m` nodes per axis over its bounding box.
#[derive(Clone, Debug)]
pub struct SlopePolytope {
    exact: LatticePolytope,
    normals: Vec<[f64; 2]>,
    offsets: Vec<f64>,
    nodes: Vec<Axis>,
    node_inside: Vec<bool>,
    cell_inside: Vec<bool>,
    max_norm: f64,
}

impl SlopePolytope {
    pub fn new(p: &LatticePolytope, m: usize) -> Result<Self> {
        let d = p.dim();
        if d > 2 {
            return Err(Error::input("slope polytopes live in dimension 1 or 2"));
        }
        if !p.is_full_dimensional() {
            return Err(Error::input("slope polytope must be full-dimensional"));
        }
        if m < 2 {
            return Err(Error::input("slope grid needs at least two nodes per axis"));
        }
        let verts: Vec<Vec<f64>> = p.vertices().iter().map(|v| v.to_f64()).collect();
        let nodes: Vec<Axis> = (0..d)
            .map(|k| {
                let lo = verts.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min);
                let hi = verts.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max);
                Axis::span(lo, hi, m)
            })
            .collect();
        let normals = p.normals().iter().map(|v| [v[0] as f64, if d == 2 { v[1] as f64 } else { 0.0 }]).collect();
        let offsets = p.offsets().iter().map(to_f64).collect();
        let max_norm = verts.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max);
        let mut s = SlopePolytope {
            exact: p.clone(),
            normals,
            offsets,
            nodes,
            node_inside: vec![],
            cell_inside: vec![],
            max_norm,
        };
        s.node_inside = (0..grid_len(&s.nodes)).map(|i| s.contains(point_of(&s.nodes, i))).collect();
        let cells = s.cell_axes();
        s.cell_inside = (0..grid_len(&cells)).map(|i| s.contains(point_of(&cells, i))).collect();
        Ok(s)
    }

    pub fn exact(&self) -> &LatticePolytope {
        &self.exact
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(v, a)| v[0] * p[0] + v[1] * p[1] + a >= -INSIDE_TOL)
    }

    pub fn node_axes(&self) -> &[Axis] {
        &self.nodes
    }

    pub fn cell_axes(&self) -> Vec<Axis> {
        self.nodes.iter().map(|a| a.cells()).collect()
    }

    pub fn node_inside(&self) -> &[bool] {
        &self.node_inside
    }

    pub fn cell_inside(&self) -> &[bool] {
        &self.cell_inside
    }

    /// Lebesgue measure of one slope cell.
    pub fn cell_volume(&self) -> f64 {
        self.nodes.iter().map(|a| a.step).product()
    }

    /// Largest Euclidean norm of a slope in the polytope.
    pub fn max_norm(&self) -> f64 {
        self.max_norm
    }
}
