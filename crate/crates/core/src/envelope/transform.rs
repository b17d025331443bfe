//! Discrete Legendre transforms, slope-constrained envelopes and
//! Monge–Ampère masses as gradient-image measures.

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::grid::{grid_len, is_interior, Axis, GridFunction};
use super::slope::SlopePolytope;

/// `out(y) = max_x <y, x> - src(x)` over the source grid, entries of `src`
/// equal to `+inf` excluded. Separable in two dimensions. The argmax is the
/// lexicographically first maximizer.
fn max_plus(src_axes: &[Axis], src: &[f64], dst_axes: &[Axis]) -> (Vec<f64>, Vec<usize>) {
    match src_axes.len() {
        1 => {
            let xs = src_axes[0].coords();
            let ys = dst_axes[0].coords();
            ys.par_iter()
                .map(|&y| {
                    let mut best = f64::NEG_INFINITY;
                    let mut arg = usize::MAX;
                    for (i, (&x, &f)) in xs.iter().zip(src).enumerate() {
                        let v = y * x - f;
                        if v > best {
                            best = v;
                            arg = i;
                        }
                    }
                    (best, arg)
                })
                .unzip()
        }
        _ => {
            let (n1, n2) = (src_axes[0].len, src_axes[1].len);
            let x1 = src_axes[0].coords();
            let x2 = src_axes[1].coords();
            let y1 = dst_axes[0].coords();
            let y2 = dst_axes[1].coords();
            let m2 = y2.len();
            // inner[i1][k2] = max_{i2} y2_k x2_i2 - src[i1, i2]
            let inner: Vec<(Vec<f64>, Vec<usize>)> = (0..n1)
                .into_par_iter()
                .map(|i1| {
                    let row = &src[i1 * n2..(i1 + 1) * n2];
                    let mut vals = vec![f64::NEG_INFINITY; m2];
                    let mut args = vec![usize::MAX; m2];
                    for (k, &y) in y2.iter().enumerate() {
                        for (i2, (&x, &f)) in x2.iter().zip(row).enumerate() {
                            let v = y * x - f;
                            if v > vals[k] {
                                vals[k] = v;
                                args[k] = i2;
                            }
                        }
                    }
                    (vals, args)
                })
                .collect();
            let rows: Vec<(Vec<f64>, Vec<usize>)> = y1
                .par_iter()
                .map(|&y| {
                    let mut vals = vec![f64::NEG_INFINITY; m2];
                    let mut args = vec![usize::MAX; m2];
                    for (i1, &x) in x1.iter().enumerate() {
                        let (iv, ia) = &inner[i1];
                        let base = y * x;
                        for k in 0..m2 {
                            let v = base + iv[k];
                            if v > vals[k] {
                                vals[k] = v;
                                args[k] = i1 * n2 + ia[k];
                            }
                        }
                    }
                    (vals, args)
                })
                .collect();
            let mut vals = Vec::with_capacity(y1.len() * m2);
            let mut args = Vec::with_capacity(y1.len() * m2);
            for (v, a) in rows {
                vals.extend(v);
                args.extend(a);
            }
            (vals, args)
        }
    }
}

/// Discrete conjugate `f*(p) = max_x <p, x> - f(x)` on the slope grid.
pub fn legendre(f: &GridFunction, slope_axes: &[Axis]) -> Result<GridFunction> {
    Error::check_dim(f.dim(), slope_axes.len())?;
    let (vals, _) = max_plus(f.axes(), f.values(), slope_axes);
    GridFunction::new(slope_axes.to_vec(), vals)
}

/// Largest function on the grid that is a supremum of affine minorants of
/// `h` with slopes on the slope grid of `p`:
/// `u(x) = max_{p in P} <p, x> - h*(p)`.
pub fn constrained_envelope(h: &GridFunction, p: &SlopePolytope) -> Result<GridFunction> {
    Error::check_dim(h.dim(), p.dim())?;
    if !p.node_inside().iter().any(|&b| b) {
        return Err(Error::input("slope grid has no node inside the polytope"));
    }
    let (mut dual, _) = max_plus(h.axes(), h.values(), p.node_axes());
    for (v, &inside) in dual.iter_mut().zip(p.node_inside()) {
        if !inside {
            *v = f64::INFINITY;
        }
    }
    let (vals, _) = max_plus(p.node_axes(), &dual, h.axes());
    let mut u = GridFunction::new(h.axes().to_vec(), vals)?;
    u.mark_convex(convexity_tol(&u));
    Ok(u)
}

fn convexity_tol(u: &GridFunction) -> f64 {
    let scale = u.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    1e-9 * scale
}

/// For every slope cell centre inside `p`, the grid node where
/// `<c, x> - u(x)` is maximal (`None` for cells outside `p`).
#[derive(Clone, Debug)]
pub struct GradientImage {
    targets: Vec<Option<usize>>,
    cell_volume: f64,
    factorial: f64,
    axes: Vec<Axis>,
}

impl GradientImage {
    pub fn new(u: &GridFunction, p: &SlopePolytope) -> Result<Self> {
        Error::check_dim(u.dim(), p.dim())?;
        let cells = p.cell_axes();
        let (_, args) = max_plus(u.axes(), u.values(), &cells);
        debug_assert_eq!(args.len(), grid_len(&cells));
        let targets = args.into_iter().zip(p.cell_inside()).map(|(a, &inside)| inside.then_some(a)).collect();
        let factorial = if u.dim() == 2 { 2.0 } else { 1.0 };
        Ok(GradientImage { targets, cell_volume: p.cell_volume(), factorial, axes: u.axes().to_vec() })
    }

    /// `n!` times the measure of slopes whose maximizer is an interior node
    /// in `region`.
    pub fn mass(&self, region: impl Fn(usize) -> bool) -> f64 {
        let count = self.targets.iter().flatten().filter(|&&x| is_interior(&self.axes, x) && region(x)).count();
        self.factorial * self.cell_volume * count as f64
    }

    pub fn total(&self) -> f64 {
        self.mass(|_| true)
    }

    /// Slope cells counted in `region`, as cell indices.
    pub fn cells_in(&self, region: impl Fn(usize) -> bool) -> Vec<usize> {
        self.targets
            .iter()
            .enumerate()
            .filter_map(|(c, t)| t.filter(|&x| is_interior(&self.axes, x) && region(x)).map(|_| c))
            .collect()
    }
}

/// Monge–Ampère mass of `u` over the node mask `region`.
pub fn ma_mass(u: &GridFunction, p: &SlopePolytope, region: &[bool]) -> Result<f64> {
    Error::check_dim(u.len(), region.len())?;
    Ok(GradientImage::new(u, p)?.mass(|x| region[x]))
}

/// Post-condition diagnostics of an envelope against its obstacle.
#[derive(Clone, Debug)]
pub struct EnvelopeCheck {
    /// `max (u - h)`; at most `tau`.
    pub max_excess: f64,
    pub convex: bool,
    /// Difference quotients along the axes that leave the slope bounding box.
    pub slope_violations: usize,
    /// Contact mask `u >= h - tau`.
    pub contact: Vec<bool>,
}

pub fn check_envelope(u: &GridFunction, h: &GridFunction, p: &SlopePolytope, tau: f64) -> EnvelopeCheck {
    let max_excess = u.values().iter().zip(h.values()).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max);
    let contact = u.values().iter().zip(h.values()).map(|(a, b)| *a >= b - tau).collect();
    let boxes = p.node_axes();
    let slack = 1e-9 * (1.0 + p.max_norm());
    let mut slope_violations = 0;
    let v = u.values();
    match u.dim() {
        1 => {
            let dx = u.axes()[0].step;
            for w in v.windows(2) {
                let s = (w[1] - w[0]) / dx;
                if s < boxes[0].lo - slack || s > boxes[0].hi() + slack {
                    slope_violations += 1;
                }
            }
        }
        _ => {
            let (n1, n2) = (u.axes()[0].len, u.axes()[1].len);
            let (d1, d2) = (u.axes()[0].step, u.axes()[1].step);
            for i in 0..n1 {
                for j in 0..n2 {
                    let c = v[i * n2 + j];
                    if i + 1 < n1 {
                        let s = (v[(i + 1) * n2 + j] - c) / d1;
                        if s < boxes[0].lo - slack || s > boxes[0].hi() + slack {
                            slope_violations += 1;
                        }
                    }
                    if j + 1 < n2 {
                        let s = (v[i * n2 + j + 1] - c) / d2;
                        if s < boxes[1].lo - slack || s > boxes[1].hi() + slack {
                            slope_violations += 1;
                        }
                    }
                }
            }
        }
    }
    EnvelopeCheck { max_excess, convex: u.is_marked_convex(), slope_violations, contact }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::polytope::LatticePolytope;
    use crate::lattice::rational::q;

    fn interval(lo: i64, hi: i64, m: usize) -> SlopePolytope {
        let p = LatticePolytope::new(vec![vec![1], vec![-1]], vec![q(-lo), q(hi)]).unwrap();
        SlopePolytope::new(&p, m).unwrap()
    }

    #[test]
    fn quadratic_is_self_dual() {
        let f = GridFunction::from_fn(GridFunction::box_axes(1, 4.0, 801), |x| 0.5 * x[0] * x[0]).unwrap();
        let slopes = [Axis::span(-2.0, 2.0, 41)];
        let fs = legendre(&f, &slopes).unwrap();
        for (i, v) in fs.values().iter().enumerate() {
            let p = slopes[0].at(i);
            assert!((v - 0.5 * p * p).abs() < 1e-4);
        }
    }

    #[test]
    fn admissible_obstacle_is_its_own_envelope() {
        let h = GridFunction::from_fn(GridFunction::box_axes(1, 2.0, 401), |x| x[0].abs()).unwrap();
        let u = constrained_envelope(&h, &interval(-1, 1, 201)).unwrap();
        for (a, b) in u.values().iter().zip(h.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(u.is_marked_convex());
    }

    #[test]
    fn slopes_clipped_to_the_interval() {
        // h = min(x, 0) with slopes in [0, 2], against the hand-computed conjugate
        let l = 3.0;
        let h = GridFunction::from_fn(GridFunction::box_axes(1, l, 601), |x| x[0].min(0.0)).unwrap();
        let u = constrained_envelope(&h, &interval(0, 2, 201)).unwrap();
        // h*(s) = max((1 - s) L, s L)
        for i in 0..h.len() {
            let x = h.point(i)[0];
            let exact = (0..=200)
                .map(|k| {
                    let s = k as f64 / 100.0;
                    let hs = ((1.0 - s) * l).max(s * l);
                    s * x - hs
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((u.values()[i] - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn mass_of_quadratic_and_affine() {
        let l = 3.0;
        let q2 = GridFunction::from_fn(GridFunction::box_axes(1, l, 1201), |x| 0.5 * x[0] * x[0]).unwrap();
        let p = interval(-5, 5, 1001);
        let all = vec![true; q2.len()];
        let m = ma_mass(&q2, &p, &all).unwrap();
        assert!((m - 2.0 * l).abs() < 0.05, "{m}");
        let aff = GridFunction::from_fn(GridFunction::box_axes(1, l, 1201), |x| 0.5 * x[0] + 1.0).unwrap();
        assert!(ma_mass(&aff, &p, &all).unwrap() < 0.02);
    }

    #[test]
    fn two_dimensional_envelope_mass() {
        let axes = GridFunction::box_axes(2, 6.0, 121);
        let h =
            GridFunction::from_fn(axes, |x| (1.0 + (2.0 * x[0]).exp()).ln() + (1.0 + (2.0 * x[1]).exp()).ln()).unwrap();
        let sq =
            LatticePolytope::new(vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], vec![q(0), q(0), q(2), q(2)])
                .unwrap();
        let p = SlopePolytope::new(&sq, 81).unwrap();
        let u = constrained_envelope(&h, &p).unwrap();
        let check = check_envelope(&u, &h, &p, 1e-9);
        assert!(check.max_excess <= 1e-9);
        assert_eq!(check.slope_violations, 0);
        let total = ma_mass(&u, &p, &vec![true; u.len()]).unwrap();
        assert!((total - 8.0).abs() < 0.1, "{total}");
    }
}
