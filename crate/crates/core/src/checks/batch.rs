//! Batches of checks on sampled classes, run in parallel and reported in
//! input order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::instance::Model;
use crate::lattice::rational::{RationalVector, Q};

use super::sample::Sampler;
use super::theorems::*;
use super::{CheckReport, Theorem, Verdict};

/// Directions tried per sampled class in differentiability batches.
pub const DIRECTIONS: usize = 5;
/// Steps of the dyadic schedules used by batches.
pub const STEPS: u32 = 12;

enum Job {
    Pair(Vec<Q>, Vec<Q>),
    Single(Vec<Q>),
}

fn run_job(m: &Model, theorem: Theorem, job: &Job) -> Result<CheckReport> {
    match (theorem, job) {
        (Theorem::Morse, Job::Pair(a, b)) => check_morse(m, a, b),
        (Theorem::Binomial, Job::Pair(a, b)) => check_binomial_morse(m, a, b),
        (Theorem::Kt, Job::Pair(a, b)) => check_khovanskii_teissier(m, a, b),
        (Theorem::Concave, Job::Pair(a, b)) => check_concavity(m, a, b),
        (Theorem::Diff, Job::Pair(a, g)) => check_differentiability(m, a, g, STEPS),
        (Theorem::Orth, Job::Single(a)) => check_orthogonality(m, a),
        (Theorem::ZariskiApprox, Job::Single(a)) => check_zariski_approximation(m, a, STEPS),
        _ => unreachable!("job shape follows the theorem"),
    }
}

fn job_inputs(job: &Job) -> Vec<(&'static str, &[Q])> {
    match job {
        Job::Pair(a, b) => vec![("alpha", a.as_slice()), ("beta", b.as_slice())],
        Job::Single(a) => vec![("alpha", a.as_slice())],
    }
}

/// Runs `theorem` on `samples` sampled inputs (classes for differentiability,
/// each along several directions; nef products for duality). Refusals and
/// errors become skipped reports carrying the message.
pub fn run_batch(m: &Model, theorem: Theorem, samples: usize, seed: u64) -> Vec<CheckReport> {
    let mut sampler = Sampler::new(seed);
    if theorem == Theorem::Duality {
        let r = check_duality(m, samples, &mut sampler)
            .unwrap_or_else(|e| CheckReport::new(theorem, m, &[]).skipped(e.to_string()));
        return vec![CheckReport { seed: Some(seed), ..r }];
    }
    let nef = m.nef_cone().generators().to_vec();
    let psef = m.psef_cone().generators().to_vec();
    let mut jobs = Vec::new();
    for _ in 0..samples {
        match theorem {
            Theorem::Morse | Theorem::Binomial | Theorem::Kt => {
                let a = sampler.combination(&nef, false);
                let b = sampler.combination(&nef, false);
                jobs.push(Job::Pair(a, b));
            }
            Theorem::Concave => {
                let a = sampler.combination(&psef, true);
                let b = sampler.combination(&psef, true);
                jobs.push(Job::Pair(a, b));
            }
            Theorem::Diff => {
                let a = sampler.combination(&psef, true);
                for _ in 0..DIRECTIONS {
                    jobs.push(Job::Pair(a.clone(), sampler.direction(m.rank())));
                }
            }
            Theorem::Orth | Theorem::ZariskiApprox => jobs.push(Job::Single(sampler.combination(&psef, true))),
            Theorem::Duality => unreachable!(),
        }
    }
    jobs.par_iter()
        .map(|job| {
            let r = run_job(m, theorem, job).unwrap_or_else(|e| {
                let mut r = CheckReport::new(theorem, m, &job_inputs(job));
                if theorem == Theorem::Diff {
                    r.inputs[1].name = "gamma".into();
                }
                r.skipped(e.to_string())
            });
            CheckReport { seed: Some(seed), ..r }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchSummary {
    pub theorem: Theorem,
    pub instance: String,
    pub model: String,
    pub seed: u64,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

pub fn summarize(m: &Model, theorem: Theorem, seed: u64, reports: &[CheckReport]) -> BatchSummary {
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    BatchSummary {
        theorem,
        instance: m.name().to_string(),
        model: m.kind().to_string(),
        seed,
        total: reports.len(),
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        skipped: count(Verdict::Skip),
    }
}

fn inputs_cell(r: &CheckReport) -> String {
    r.inputs.iter().map(|c| format!("{}={}", c.name, RationalVector(c.class.0.clone()))).collect::<Vec<_>>().join("; ")
}

pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theorem", "instance", "model", "inputs", "lhs", "rhs", "margin", "tolerance", "verdict", "seed"])
        .expect("in-memory write");
    for r in reports {
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skip => "skip",
        };
        w.write_record(&[
            r.theorem.id().to_string(),
            r.instance.clone(),
            r.model.clone(),
            inputs_cell(r),
            r.lhs.clone(),
            r.rhs.clone(),
            r.margin.to_string(),
            r.tolerance.to_string(),
            verdict.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
