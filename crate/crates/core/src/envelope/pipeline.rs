//! The volume pipeline in torus-symmetric coordinates: obstacle `g` from a
//! section of `beta`, truncations `g_R`, envelopes under the slope
//! constraint `P_alpha`, contact sets and Monge–Ampère masses, compared with
//! the exact toric volume of `alpha - beta`.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::polytope::LatticePolytope;
use crate::lattice::rational::{fmt_q, q, to_f64, RationalVector, Q};
use crate::toric::Fan;

use super::grid::{point_of, regularized_max, Axis, GridFunction};
use super::slope::SlopePolytope;
use super::transform::{check_envelope, constrained_envelope, GradientImage};

fn default_mass_rel() -> f64 {
    0.005
}

fn default_vol_rel() -> f64 {
    0.01
}

fn default_contact() -> f64 {
    0.99
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative error allowed on the total mass against `(alpha^n)`.
    #[serde(default = "default_mass_rel")]
    pub mass_rel: f64,
    /// Relative error allowed on the volume estimate against the oracle.
    #[serde(default = "default_vol_rel")]
    pub vol_rel: f64,
    /// Minimal share of the mass carried by the contact set.
    #[serde(default = "default_contact")]
    pub contact_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { mass_rel: default_mass_rel(), vol_rel: default_vol_rel(), contact_fraction: default_contact() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSpec {
    pub instance: String,
    #[serde(with = "crate::lattice::rational::serde_qvec")]
    pub alpha: Vec<Q>,
    #[serde(with = "crate::lattice::rational::serde_qvec")]
    pub beta: Vec<Q>,
    pub m0: Vec<i64>,
    /// Box half-width; defaults to `max R + 8`.
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    /// Slope grid nodes per axis; defaults to `N`.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(rename = "R_schedule")]
    pub r_schedule: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// `psi_P(x) = log sum_{vertices m} exp <m, x>`.
pub fn log_sum_exp_potential(p: &LatticePolytope, axes: &[Axis]) -> Result<GridFunction> {
    Error::check_dim(p.dim(), axes.len())?;
    if p.is_empty() {
        return Err(Error::input("empty polytope has no potential"));
    }
    let verts: Vec<[f64; 2]> = p
        .vertices()
        .iter()
        .map(|v| {
            let f = v.to_f64();
            [f[0], if f.len() > 1 { f[1] } else { 0.0 }]
        })
        .collect();
    GridFunction::from_fn(axes.to_vec(), |x| {
        let e: Vec<f64> = verts.iter().map(|m| m[0] * x[0] + m[1] * x[1]).collect();
        let top = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top + e.iter().map(|v| (v - top).exp()).sum::<f64>().ln()
    })
}

/// `g(x) = <m0, x> - psi_beta(x) + c`, normalized so that its maximum over
/// the grid is zero.
pub fn build_obstacle(p_beta: &LatticePolytope, m0: &[i64], axes: &[Axis]) -> Result<GridFunction> {
    Error::check_dim(p_beta.dim(), m0.len())?;
    let m0q: Vec<Q> = m0.iter().map(|&x| q(x)).collect();
    if !p_beta.contains(&m0q) {
        return Err(Error::input(format!("m0 = {m0:?} is not a point of P_beta")));
    }
    let psi = log_sum_exp_potential(p_beta, axes)?;
    let m = [m0[0] as f64, if m0.len() > 1 { m0[1] as f64 } else { 0.0 }];
    let raw = GridFunction::from_fn(axes.to_vec(), |x| m[0] * x[0] + m[1] * x[1])?;
    let g = raw.zip_with(&psi, |a, b| a - b)?;
    let top = g.max();
    g.map(|v| v - top)
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRow {
    #[serde(rename = "R")]
    pub r: f64,
    pub total_mass: f64,
    pub contact_mass: f64,
    #[serde(rename = "U_mass")]
    pub u_mass: f64,
    /// `U_mass` extrapolated to `R = infinity` from this row and the previous
    /// one, assuming an error proportional to `1 / R`.
    pub vol_estimate: f64,
    /// Reference mass of `psi_alpha` over the complement of `U`.
    pub complement_theta_mass: f64,
    /// `(alpha^n) - sum_k C(n,k) (alpha^{n-k} . beta^k) - complement_theta_mass`.
    pub chain_bound: f64,
    /// Share of the `U` slopes lying in `m0 + P_{alpha - beta}`.
    pub translation_fraction: f64,
    pub max_excess: f64,
    pub slope_violations: usize,
    pub convex: bool,
    /// Nodes where this envelope exceeds the previous one (smaller `R`) by
    /// more than `tau`.
    pub monotone_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineChecks {
    pub total_mass: bool,
    pub volume: bool,
    pub contact: bool,
    pub monotone: bool,
    pub lower_bound: bool,
}

impl PipelineChecks {
    pub fn all(&self) -> bool {
        self.total_mass && self.volume && self.contact && self.monotone && self.lower_bound
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub config: RunSpec,
    pub half_width: f64,
    pub nodes: usize,
    pub slope_nodes: usize,
    pub tau: f64,
    pub oracle: String,
    pub oracle_f64: f64,
    pub alpha_n: String,
    pub morse_bound: String,
    pub binomial_bound: String,
    pub rows: Vec<RunRow>,
    pub vol_estimate: f64,
    pub total_mass_rel_error: f64,
    pub vol_rel_error: f64,
    pub contact_fraction: f64,
    pub checks: PipelineChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_delta: Option<f64>,
}

impl PipelineReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["R", "total_mass", "contact_mass", "U_mass", "vol_estimate", "oracle", "bound"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record(&[
                r.r.to_string(),
                r.total_mass.to_string(),
                r.contact_mass.to_string(),
                r.u_mass.to_string(),
                r.vol_estimate.to_string(),
                self.oracle_f64.to_string(),
                r.chain_bound.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Exact `(alpha^n)`, Morse bound and binomial bound for nef `alpha, beta`.
pub fn exact_bounds(fan: &Fan, alpha: &[Q], beta: &[Q]) -> Result<(Q, Q, Q)> {
    let n = fan.dim();
    let mixed = |k: usize| -> Result<Q> {
        let mut args: Vec<&[Q]> = vec![alpha; n - k];
        args.extend(std::iter::repeat(beta).take(k));
        fan.intersection_number(&args)
    };
    let alpha_n = mixed(0)?;
    let morse = &alpha_n - q(n as i64) * mixed(1)?;
    let mut binom = alpha_n.clone();
    for k in 1..=n {
        binom -= q(binomial(n, k)) * mixed(k)?;
    }
    Ok((alpha_n, morse, binom))
}

struct Prepared {
    slope: SlopePolytope,
    g: GridFunction,
    psi_alpha: GridFunction,
    theta: GradientImage,
    shifted: LatticePolytope,
    m0: [f64; 2],
    tau: f64,
    half_width: f64,
}

fn prepare(fan: &Fan, spec: &RunSpec, half_width: f64, nodes: usize) -> Result<Prepared> {
    let n = fan.dim();
    let axes = GridFunction::box_axes(n, half_width, nodes);
    let p_alpha = fan.section_polytope(&spec.alpha)?;
    let p_beta = fan.section_polytope(&spec.beta)?;
    let slope = SlopePolytope::new(&p_alpha, spec.m.unwrap_or(nodes))?;
    let g = build_obstacle(&p_beta, &spec.m0, &axes)?;
    let psi_alpha = log_sum_exp_potential(&p_alpha, &axes)?;
    let theta = GradientImage::new(&psi_alpha, &slope)?;
    let diff: Vec<Q> = spec.alpha.iter().zip(&spec.beta).map(|(a, b)| a - b).collect();
    let shifted = fan.section_polytope(&diff)?;
    let tau = 10.0 * axes[0].step * slope.max_norm();
    let m0 = [spec.m0[0] as f64, if n > 1 { spec.m0[1] as f64 } else { 0.0 }];
    Ok(Prepared { slope, g, psi_alpha, theta, shifted, m0, tau, half_width })
}

fn in_shifted(p: &LatticePolytope, m0: [f64; 2], c: [f64; 2]) -> bool {
    p.normals().iter().zip(p.offsets()).all(|(v, a)| {
        let s: f64 = v.iter().zip([c[0] - m0[0], c[1] - m0[1]]).map(|(&vi, x)| vi as f64 * x).sum();
        s + to_f64(a) >= -1e-9
    })
}

fn run_single(prep: &Prepared, r: f64, binomial_bound: f64) -> Result<(RunRow, GridFunction)> {
    let g_r = regularized_max(&prep.g, -r);
    let h = prep.psi_alpha.zip_with(&g_r, |a, b| a + b)?;
    let u = constrained_envelope(&h, &prep.slope)?;
    let check = check_envelope(&u, &h, &prep.slope, prep.tau);
    let image = GradientImage::new(&u, &prep.slope)?;
    let in_u: Vec<bool> = prep.g.values().iter().map(|&v| v >= -r / 2.0).collect();
    let total_mass = image.total();
    let contact_mass = image.mass(|x| check.contact[x]);
    let u_mass = image.mass(|x| in_u[x]);
    let complement_theta_mass = prep.theta.mass(|x| !in_u[x]);
    let cells = prep.slope.cell_axes();
    let u_cells = image.cells_in(|x| in_u[x]);
    let translated = u_cells.iter().filter(|&&c| in_shifted(&prep.shifted, prep.m0, point_of(&cells, c))).count();
    let translation_fraction = if u_cells.is_empty() { 1.0 } else { translated as f64 / u_cells.len() as f64 };
    debug_assert!(translation_fraction >= 0.5, "U slopes escape m0 + P_(alpha-beta): {translation_fraction}");
    let row = RunRow {
        r,
        total_mass,
        contact_mass,
        u_mass,
        vol_estimate: u_mass,
        complement_theta_mass,
        chain_bound: binomial_bound - complement_theta_mass,
        translation_fraction,
        max_excess: check.max_excess,
        slope_violations: check.slope_violations,
        convex: check.convex,
        monotone_violations: 0,
    };
    Ok((row, u))
}

fn validate(fan: &Fan, spec: &RunSpec) -> Result<Q> {
    let n = fan.dim();
    if n > 2 {
        return Err(Error::input("the envelope pipeline runs in dimension 1 or 2"));
    }
    Error::check_dim(fan.rank(), spec.alpha.len())?;
    Error::check_dim(fan.rank(), spec.beta.len())?;
    Error::check_dim(n, spec.m0.len())?;
    if spec.n < 3 {
        return Err(Error::input("N must be at least 3"));
    }
    if spec.m.is_some_and(|m| m < 2) {
        return Err(Error::input("M must be at least 2"));
    }
    if spec.r_schedule.is_empty() || spec.r_schedule.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::input("R_schedule must be a nonempty list of positive numbers"));
    }
    if spec.half_width.is_some_and(|l| !(l.is_finite() && l > 0.0)) {
        return Err(Error::input("L must be positive"));
    }
    let t = &spec.tolerances;
    if !(t.mass_rel > 0.0 && t.vol_rel > 0.0 && t.contact_fraction > 0.0) {
        return Err(Error::input("tolerances must be positive"));
    }
    let ample = fan.walls().iter().all(|w| fan.wall_functional(w).dot(&spec.alpha).is_positive());
    if !ample {
        return Err(Error::NotNef(format!(
            "alpha = {} must be ample (interior of the nef cone)",
            RationalVector(spec.alpha.clone())
        )));
    }
    if !fan.is_nef(&spec.beta)? {
        return Err(Error::NotNef(format!("beta = {} is not nef", RationalVector(spec.beta.clone()))));
    }
    let diff: Vec<Q> = spec.alpha.iter().zip(&spec.beta).map(|(a, b)| a - b).collect();
    let oracle = fan.toric_volume(&diff)?;
    if oracle.is_zero() {
        return Err(Error::Regime(format!(
            "alpha - beta = {} is not big: the volume limit sits on the big-cone boundary",
            RationalVector(diff)
        )));
    }
    Ok(oracle)
}

/// Runs the pipeline for every `R` in the schedule.
pub fn run_morse_pipeline(fan: &Fan, spec: &RunSpec) -> Result<PipelineReport> {
    let oracle = validate(fan, spec)?;
    let (alpha_n, morse, binom) = exact_bounds(fan, &spec.alpha, &spec.beta)?;
    let mut schedule = spec.r_schedule.clone();
    schedule.sort_by(f64::total_cmp);
    schedule.dedup();
    let r_max = *schedule.last().expect("nonempty");
    let half_width = spec.half_width.unwrap_or(r_max + 8.0);
    let prep = prepare(fan, spec, half_width, spec.n)?;
    let binom_f = to_f64(&binom);
    let runs: Vec<(RunRow, GridFunction)> =
        schedule.par_iter().map(|&r| run_single(&prep, r, binom_f)).collect::<Result<_>>()?;
    let mut rows: Vec<RunRow> = Vec::with_capacity(runs.len());
    for (k, (row, u)) in runs.iter().enumerate() {
        let mut row = row.clone();
        if k > 0 {
            let (r0, m0) = (runs[k - 1].0.r, runs[k - 1].0.u_mass);
            row.vol_estimate = (row.r * row.u_mass - r0 * m0) / (row.r - r0);
            let prev = &runs[k - 1].1;
            row.monotone_violations =
                u.values().iter().zip(prev.values()).filter(|(a, b)| **a > **b + prep.tau).count();
        }
        rows.push(row);
    }
    let alpha_nf = to_f64(&alpha_n);
    let oracle_f = to_f64(&oracle);
    let vol_estimate = rows.last().expect("nonempty").vol_estimate;
    let total_mass_rel_error = rows.iter().map(|r| (r.total_mass - alpha_nf).abs() / alpha_nf).fold(0.0, f64::max);
    let vol_rel_error = (vol_estimate - oracle_f).abs() / oracle_f;
    let contact_fraction = rows.iter().map(|r| r.contact_mass / r.total_mass).fold(f64::INFINITY, f64::min);
    let t = &spec.tolerances;
    let slack = t.mass_rel * alpha_nf;
    let checks = PipelineChecks {
        total_mass: total_mass_rel_error <= t.mass_rel,
        volume: vol_rel_error <= t.vol_rel,
        contact: contact_fraction >= t.contact_fraction,
        monotone: rows.iter().all(|r| r.monotone_violations == 0),
        lower_bound: rows.iter().all(|r| r.u_mass >= r.chain_bound - slack) && vol_estimate >= to_f64(&morse) - slack,
    };
    Ok(PipelineReport {
        config: spec.clone(),
        half_width,
        nodes: spec.n,
        slope_nodes: spec.m.unwrap_or(spec.n),
        tau: prep.tau,
        oracle: fmt_q(&oracle),
        oracle_f64: oracle_f,
        alpha_n: fmt_q(&alpha_n),
        morse_bound: fmt_q(&morse),
        binomial_bound: fmt_q(&binom),
        rows,
        vol_estimate,
        total_mass_rel_error,
        vol_rel_error,
        contact_fraction,
        checks,
        boundary_delta: None,
    })
}

/// Reruns at the largest `R` on a box of twice the half-width and the same
/// spacing, and returns the change in `U_mass`.
pub fn boundary_delta(fan: &Fan, spec: &RunSpec, report: &PipelineReport) -> Result<f64> {
    let r_max = spec.r_schedule.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let nodes = 2 * (spec.n - 1) + 1;
    let mut wide = spec.clone();
    wide.m = Some(spec.m.unwrap_or(spec.n));
    let prep = prepare(fan, &wide, 2.0 * report.half_width, nodes)?;
    debug_assert!((prep.half_width - 2.0 * report.half_width).abs() < 1e-12);
    let (_, _, binom) = exact_bounds(fan, &spec.alpha, &spec.beta)?;
    let (row, _) = run_single(&prep, r_max, to_f64(&binom))?;
    Ok(row.u_mass - report.rows.last().expect("nonempty").u_mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::fan;

    #[test]
    fn obstacle_on_p1() {
        let f = fan("P1").unwrap();
        let pb = f.section_polytope(&[q(1)]).unwrap();
        let axes = GridFunction::box_axes(1, 10.0, 201);
        let g = build_obstacle(&pb, &[0], &axes).unwrap();
        assert_eq!(g.max(), 0.0);
        assert_eq!(g.values()[0], 0.0);
        assert!(g.values().windows(2).all(|w| w[1] <= w[0]));
        let c = (1.0 + (-10.0f64).exp()).ln();
        for i in 0..g.len() {
            let x = g.point(i)[0];
            assert!((g.values()[i] - (-(1.0 + x.exp()).ln() + c)).abs() < 1e-12);
        }
        assert!(build_obstacle(&pb, &[2], &axes).is_err());
    }

    #[test]
    fn obstacle_symmetry_and_trivial_beta() {
        let p = LatticePolytope::new(vec![vec![1], vec![-1]], vec![q(1), q(1)]).unwrap();
        let axes = GridFunction::box_axes(1, 5.0, 101);
        let g = build_obstacle(&p, &[0], &axes).unwrap();
        let v = g.values();
        for i in 0..v.len() {
            assert!((v[i] - v[v.len() - 1 - i]).abs() < 1e-12);
        }
        let point = LatticePolytope::new(vec![vec![1], vec![-1]], vec![q(0), q(0)]).unwrap();
        let g0 = build_obstacle(&point, &[0], &axes).unwrap();
        assert!(g0.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn refuses_non_big_difference() {
        let f = fan("P1").unwrap();
        let spec = RunSpec {
            instance: "P1".into(),
            alpha: vec![q(1)],
            beta: vec![q(1)],
            m0: vec![0],
            half_width: None,
            n: 101,
            m: None,
            r_schedule: vec![2.0],
            tolerances: Tolerances::default(),
        };
        assert!(matches!(run_morse_pipeline(&f, &spec), Err(Error::Regime(_))));
    }

    #[test]
    fn coarse_p1_run() {
        let f = fan("P1").unwrap();
        let spec = RunSpec {
            instance: "P1".into(),
            alpha: vec![q(2)],
            beta: vec![q(1)],
            m0: vec![0],
            half_width: None,
            n: 2049,
            m: None,
            r_schedule: vec![2.0, 4.0, 8.0, 16.0],
            tolerances: Tolerances { mass_rel: 0.01, vol_rel: 0.02, contact_fraction: 0.95 },
        };
        let rep = run_morse_pipeline(&f, &spec).unwrap();
        assert!(rep.checks.all(), "{:?} {:?} {}", rep.checks, rep.rows, rep.vol_estimate);
        assert!(rep.to_csv().starts_with("R,total_mass"));
    }

    #[test]
    fn trivial_beta_recovers_top_power() {
        let f = fan("P1").unwrap();
        let spec = RunSpec {
            instance: "P1".into(),
            alpha: vec![q(2)],
            beta: vec![q(0)],
            m0: vec![0],
            half_width: None,
            n: 1025,
            m: None,
            r_schedule: vec![4.0],
            tolerances: Tolerances::default(),
        };
        let rep = run_morse_pipeline(&f, &spec).unwrap();
        assert!((rep.vol_estimate - 2.0).abs() < 0.01);
    }
}
