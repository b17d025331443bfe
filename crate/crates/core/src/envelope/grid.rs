//! Functions sampled on uniform box grids in dimension 1 or 2.

use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform axis `lo + i * step`, `i = 0..len`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    /// `n` nodes spanning `[-l, l]`.
    pub fn symmetric(l: f64, n: usize) -> Self {
        Axis { lo: -l, step: 2.0 * l / (n - 1) as f64, len: n }
    }

    /// `n` nodes spanning `[lo, hi]`.
    pub fn span(lo: f64, hi: f64, n: usize) -> Self {
        Axis { lo, step: (hi - lo) / (n - 1) as f64, len: n }
    }

    pub fn at(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    pub fn hi(&self) -> f64 {
        self.at(self.len - 1)
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.at(i)).collect()
    }

    /// Midpoints of consecutive nodes.
    pub fn cells(&self) -> Axis {
        Axis { lo: self.lo + 0.5 * self.step, step: self.step, len: self.len - 1 }
    }
}

/// Row-major samples over the product of the axes.
#[derive(Clone, Debug)]
pub struct GridFunction {
    axes: Vec<Axis>,
    values: Vec<f64>,
    convex: bool,
}

pub(crate) fn grid_len(axes: &[Axis]) -> usize {
    axes.iter().map(|a| a.len).product()
}

pub(crate) fn point_of(axes: &[Axis], idx: usize) -> [f64; 2] {
    match axes.len() {
        1 => [axes[0].at(idx), 0.0],
        _ => {
            let n2 = axes[1].len;
            [axes[0].at(idx / n2), axes[1].at(idx % n2)]
        }
    }
}

impl GridFunction {
    pub fn new(axes: Vec<Axis>, values: Vec<f64>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::input("grids are one- or two-dimensional"));
        }
        if axes.iter().any(|a| a.len < 2 || !(a.step > 0.0)) {
            return Err(Error::input("each grid axis needs at least two increasing nodes"));
        }
        Error::check_dim(grid_len(&axes), values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("grid values must be finite"));
        }
        Ok(GridFunction { axes, values, convex: false })
    }

    /// Box `[-l, l]^dim` with `n` nodes per axis.
    pub fn box_axes(dim: usize, l: f64, n: usize) -> Vec<Axis> {
        vec![Axis::symmetric(l, n); dim]
    }

    pub fn from_fn(axes: Vec<Axis>, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        let values = (0..grid_len(&axes)).map(|i| f(point_of(&axes, i))).collect();
        Self::new(axes, values)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, idx: usize) -> [f64; 2] {
        point_of(&self.axes, idx)
    }

    /// Node not on the boundary of the box.
    pub fn is_interior(&self, idx: usize) -> bool {
        is_interior(&self.axes, idx)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.axes.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.axes != other.axes {
            return Err(Error::input("grid functions live on different grids"));
        }
        Self::new(self.axes.clone(), self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }

    /// Flag set by [`GridFunction::mark_convex`].
    pub fn is_marked_convex(&self) -> bool {
        self.convex
    }

    /// Runs the discrete convexity check and records the outcome.
    pub fn mark_convex(&mut self, tol: f64) -> bool {
        self.convex = self.second_differences_ok(tol);
        self.convex
    }

    /// Second differences along axes and both diagonals are `>= -tol`.
    pub fn second_differences_ok(&self, tol: f64) -> bool {
        let v = &self.values;
        match self.axes.len() {
            1 => v.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -tol),
            _ => {
                let (n1, n2) = (self.axes[0].len, self.axes[1].len);
                let at = |i: usize, j: usize| v[i * n2 + j];
                for i in 0..n1 {
                    for j in 0..n2 {
                        let c = at(i, j);
                        if i > 0 && i + 1 < n1 && at(i - 1, j) - 2.0 * c + at(i + 1, j) < -tol {
                            return false;
                        }
                        if j > 0 && j + 1 < n2 && at(i, j - 1) - 2.0 * c + at(i, j + 1) < -tol {
                            return false;
                        }
                        if i > 0 && j > 0 && i + 1 < n1 && j + 1 < n2 {
                            if at(i - 1, j - 1) - 2.0 * c + at(i + 1, j + 1) < -tol {
                                return false;
                            }
                            if at(i - 1, j + 1) - 2.0 * c + at(i + 1, j - 1) < -tol {
                                return false;
                            }
                        }
                    }
                }
                true
            }
        }
    }
}

pub(crate) fn is_interior(axes: &[Axis], idx: usize) -> bool {
    match axes.len() {
        1 => idx > 0 && idx + 1 < axes[0].len,
        _ => {
            let n2 = axes[1].len;
            let (i, j) = (idx / n2, idx % n2);
            i > 0 && i + 1 < axes[0].len && j > 0 && j + 1 < n2
        }
    }
}

/// `|x|` smoothed on `[-1, 1]` by `(x^2 + 1) / 2`.
pub fn abs_reg(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        x.abs()
    } else {
        0.5 * (x * x + 1.0)
    }
}

/// `max_reg(a, b) = (a + b + |a - b|_reg) / 2`.
pub fn max_reg(a: f64, b: f64) -> f64 {
    0.5 * (a + b + abs_reg(a - b))
}

/// Pointwise `max_reg(f, floor)`.
pub fn regularized_max(f: &GridFunction, floor: f64) -> GridFunction {
    f.map(|v| max_reg(v, floor)).expect("finite inputs give finite outputs")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularized_max_examples() {
        let axes = GridFunction::box_axes(1, 1.0, 5);
        let f = GridFunction::from_fn(axes.clone(), |_| -5.0).unwrap();
        assert!(regularized_max(&f, -1.0).values().iter().all(|&v| v == -1.0));
        let g = GridFunction::from_fn(axes, |_| -1.0).unwrap();
        assert!(regularized_max(&g, -1.0).values().iter().all(|&v| (v + 0.75).abs() < 1e-15));
    }

    #[test]
    fn max_reg_dominates_max() {
        for a in [-3.0, -0.5, 0.0, 0.2, 4.0] {
            for b in [-1.0, 0.0, 0.7] {
                assert!(max_reg(a, b) >= a.max(b) - 1e-15);
            }
        }
    }

    #[test]
    fn convexity_check() {
        let axes = GridFunction::box_axes(2, 1.0, 9);
        let mut f = GridFunction::from_fn(axes.clone(), |p| p[0] * p[0] + (p[0] - p[1]).abs()).unwrap();
        assert!(f.mark_convex(1e-12));
        let g = GridFunction::from_fn(axes, |p| -(p[0] * p[1]).abs()).unwrap();
        assert!(!g.second_differences_ok(1e-12));
    }

    #[test]
    fn rejects_non_finite_values() {
        let axes = GridFunction::box_axes(1, 1.0, 3);
        assert!(GridFunction::new(axes, vec![0.0, f64::NAN, 1.0]).is_err());
    }
}
