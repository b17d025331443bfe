use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use poslab::checks::{
    self, check_binomial_morse, check_concavity, check_differentiability, check_duality, check_khovanskii_teissier,
    check_morse, check_orthogonality, check_zariski_approximation, reports_to_csv, run_batch, summarize, CheckReport,
    Sampler, Theorem, Verdict,
};
use poslab::envelope::{boundary_delta, run_morse_pipeline, RunSpec};
use poslab::instance::{load, Model, Preference};
use poslab::lattice::rational::{fmt_q, parse_q_list, Q};
use poslab::lattice::{dual_cone, Pairing};
use poslab::{Error, Result};
use serde_json::{json, Value};

use crate::render::{class_json, named, rays_json, table};
use crate::Command;

/// `print!` that ends the process quietly when stdout is a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        out!($($arg)*);
        out!("\n");
    }};
}

const DIFF_STEPS: u32 = 12;

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Input(format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn class_arg(m: &Model, s: &str, what: &str) -> Result<Vec<Q>> {
    let v = parse_q_list(s).map_err(|e| Error::Input(format!("--{what}: {e}")))?;
    if v.len() != m.rank() {
        return Err(Error::DimensionMismatch { expected: m.rank(), got: v.len() });
    }
    Ok(v)
}

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Cones { instance, model } => cones(&instance, model.map(Into::into).unwrap_or_default()),
        Command::Zariski { instance, class } => zariski(&instance, &class),
        Command::Volume { instance, class, model } => {
            volume(&instance, &class, model.map(Into::into).unwrap_or_default())
        }
        Command::Morse { instance, alpha, beta, model } => {
            let m = load(&instance, model.map(Into::into).unwrap_or_default())?;
            let (a, b) = (class_arg(&m, &alpha, "alpha")?, class_arg(&m, &beta, "beta")?);
            let reports = vec![check_morse(&m, &a, &b)?, check_binomial_morse(&m, &a, &b)?];
            outln!("{}", pretty(&reports));
            Ok(exit_for(&reports))
        }
        Command::Envelope { spec, double_l, out } => envelope(&spec, double_l, out.as_deref()),
        Command::Duality { instance, samples, seed, model } => {
            let m = load(&instance, model.map(Into::into).unwrap_or_default())?;
            let r = check_duality(&m, samples, &mut Sampler::new(seed))?;
            let r = CheckReport { seed: Some(seed), ..r };
            outln!("{}", pretty(&r));
            Ok(exit_for(std::slice::from_ref(&r)))
        }
        Command::Verify { instance, theorem, samples, seed, out, alpha, beta, gamma, model } => {
            let given = Given { alpha, beta, gamma };
            verify(&instance, &theorem, samples, seed, &out, &given, model.map(Into::into).unwrap_or_default())
        }
        Command::Report { path } => report(&path),
    }
}

fn exit_for(reports: &[CheckReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else {
        0
    }
}

fn cones(instance: &str, pref: Preference) -> Result<u8> {
    let m = load(instance, pref)?;
    let labels = m.labels();
    let psef = m.psef_cone();
    let (pairing, name) =
        if m.dim() == 2 { (m.surface_pairing()?, "intersection") } else { (Pairing::standard(m.rank()), "standard") };
    let dual = dual_cone(&psef, &pairing)?;
    let out = json!({
        "instance": m.name(),
        "model": m.kind(),
        "dim": m.dim(),
        "rank": m.rank(),
        "labels": labels,
        "nef": rays_json(&labels, m.nef_cone().generators()),
        "psef": rays_json(&labels, psef.generators()),
        "dual_psef": rays_json(&labels, dual.generators()),
        "dual_pairing": name,
    });
    outln!("{}", pretty(&out));
    Ok(0)
}

fn zariski(instance: &str, class: &str) -> Result<u8> {
    let m = load(instance, Preference::Surface)?;
    let s = m.as_surface()?;
    let labels = s.labels();
    let c = class_arg(&m, class, "class")?;
    let z = s.zariski(&c)?;
    let negative: Vec<Value> = z
        .negative
        .iter()
        .map(|t| {
            let curve = &s.curves()[t.curve];
            json!({ "curve": named(&labels, curve), "class": class_json(&labels, curve), "coeff": fmt_q(&t.coeff) })
        })
        .collect();
    let out = json!({
        "instance": s.name(),
        "class": class_json(&labels, &c),
        "positive": class_json(&labels, &z.positive),
        "negative": negative,
        "volume": fmt_q(&s.dot(&z.positive, &z.positive)),
    });
    outln!("{}", pretty(&out));
    Ok(0)
}

fn volume(instance: &str, class: &str, pref: Preference) -> Result<u8> {
    let m = load(instance, pref)?;
    let labels = m.labels();
    let c = class_arg(&m, class, "class")?;
    let big = m.is_big(&c)?;
    let product = if big { Some(fmt_q(&m.positive_product(&c, &c)?)) } else { None };
    let out = json!({
        "instance": m.name(),
        "model": m.kind(),
        "class": class_json(&labels, &c),
        "volume": fmt_q(&m.volume(&c)?),
        "nef": m.is_nef(&c)?,
        "psef": m.is_psef(&c)?,
        "big": big,
        "positive_product_with_self": product,
    });
    outln!("{}", pretty(&out));
    Ok(0)
}

fn envelope(spec_path: &Path, double_l: bool, out: Option<&Path>) -> Result<u8> {
    let text = fs::read_to_string(spec_path).map_err(|e| io_err(spec_path, e))?;
    let spec: RunSpec =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", spec_path.display())))?;
    let Model::Toric(fan) = load(&spec.instance, Preference::Toric)? else {
        return Err(Error::Input(format!("{}: envelope runs need a toric instance", spec.instance)));
    };
    let mut report = run_morse_pipeline(&fan, &spec)?;
    if double_l {
        report.boundary_delta = Some(boundary_delta(&fan, &spec, &report)?);
    }
    match out {
        None => outln!("{}", pretty(&report)),
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            write(&dir.join("envelope.json"), &pretty(&report))?;
            write(&dir.join("envelope.csv"), &report.to_csv())?;
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.r.to_string(),
                        format!("{:.6}", r.total_mass),
                        format!("{:.6}", r.contact_mass),
                        format!("{:.6}", r.u_mass),
                        format!("{:.6}", r.chain_bound),
                    ]
                })
                .collect();
            out!("{}", table(&["R", "total", "contact", "U mass", "bound"], &rows));
            outln!(
                "oracle {}  estimate {:.6}  rel. error {:.2e}",
                report.oracle, report.vol_estimate, report.vol_rel_error
            );
            if let Some(d) = report.boundary_delta {
                outln!("boundary delta {d:.3e}");
            }
        }
    }
    Ok(if report.checks.all() { 0 } else { 1 })
}

struct Given {
    alpha: Option<String>,
    beta: Option<String>,
    gamma: Option<String>,
}

impl Given {
    fn any(&self) -> bool {
        self.alpha.is_some() || self.beta.is_some() || self.gamma.is_some()
    }
}

fn theorems_arg(s: &str) -> Result<Vec<Theorem>> {
    if s == "all" {
        Ok(Theorem::ALL.to_vec())
    } else {
        s.split(',').map(|t| t.trim().parse()).collect()
    }
}

/// One check on the given classes. Refusals (domain and regime errors) are
/// recorded as skipped reports.
fn single_check(m: &Model, t: Theorem, given: &Given, seed: u64) -> Result<CheckReport> {
    let get = |s: &Option<String>, what: &str| -> Result<Vec<Q>> {
        match s {
            Some(s) => class_arg(m, s, what),
            None => Err(Error::Input(format!("{t} needs --{what}"))),
        }
    };
    let result = match t {
        Theorem::Morse => check_morse(m, &get(&given.alpha, "alpha")?, &get(&given.beta, "beta")?),
        Theorem::Binomial => check_binomial_morse(m, &get(&given.alpha, "alpha")?, &get(&given.beta, "beta")?),
        Theorem::Kt => check_khovanskii_teissier(m, &get(&given.alpha, "alpha")?, &get(&given.beta, "beta")?),
        Theorem::Concave => check_concavity(m, &get(&given.alpha, "alpha")?, &get(&given.beta, "beta")?),
        Theorem::Diff => {
            check_differentiability(m, &get(&given.alpha, "alpha")?, &get(&given.gamma, "gamma")?, DIFF_STEPS)
        }
        Theorem::Orth => check_orthogonality(m, &get(&given.alpha, "alpha")?),
        Theorem::ZariskiApprox => check_zariski_approximation(m, &get(&given.alpha, "alpha")?, checks::batch::STEPS),
        Theorem::Duality => check_duality(m, 0, &mut Sampler::new(seed)),
    };
    let r = match result {
        Ok(r) => r,
        Err(e) if e.exit_code() >= 3 => {
            let mut inputs: Vec<(&str, Vec<Q>)> = Vec::new();
            for (name, s) in [("alpha", &given.alpha), ("beta", &given.beta), ("gamma", &given.gamma)] {
                if let Some(s) = s {
                    inputs.push((name, class_arg(m, s, name)?));
                }
            }
            let refs: Vec<(&str, &[Q])> = inputs.iter().map(|(n, c)| (*n, c.as_slice())).collect();
            CheckReport::refused(t, m, &refs, &e)
        }
        Err(e) => return Err(e),
    };
    Ok(CheckReport { seed: Some(seed), ..r })
}

fn verify(
    instance: &str,
    theorem: &str,
    samples: usize,
    seed: u64,
    out: &Path,
    given: &Given,
    pref: Preference,
) -> Result<u8> {
    let m = load(instance, pref)?;
    let theorems = theorems_arg(theorem)?;
    let mut all: Vec<CheckReport> = Vec::new();
    let mut by_theorem: Vec<(Theorem, Vec<CheckReport>)> = Vec::new();
    for &t in &theorems {
        let reports = if given.any() {
            match single_check(&m, t, given, seed) {
                Ok(r) => vec![r],
                // with several theorems, those lacking inputs are left out
                Err(Error::Input(msg)) if theorems.len() > 1 && msg.contains("needs --") => continue,
                Err(e) => return Err(e),
            }
        } else {
            run_batch(&m, t, samples, seed)
        };
        all.extend(reports.iter().cloned());
        by_theorem.push((t, reports));
    }
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    write(&out.join("report.json"), &pretty(&all))?;
    let config = json!({
        "instance": instance,
        "model": m.kind(),
        "theorems": theorems.iter().map(|t| t.id()).collect::<Vec<_>>(),
        "samples": samples,
        "seed": seed,
        "alpha": given.alpha,
        "beta": given.beta,
        "gamma": given.gamma,
    });
    write(&out.join("config.json"), &pretty(&config))?;
    let mut rows = Vec::new();
    for (t, reports) in &by_theorem {
        write(&out.join(format!("{}.csv", t.id())), &reports_to_csv(reports))?;
        let s = summarize(&m, *t, seed, reports);
        rows.push(vec![
            t.id().to_string(),
            s.instance,
            s.model,
            s.total.to_string(),
            s.passed.to_string(),
            s.failed.to_string(),
            s.skipped.to_string(),
        ]);
    }
    out!("{}", table(&["theorem", "instance", "model", "total", "pass", "fail", "skip"], &rows));
    outln!("seed {seed}; reports in {}", out.display());
    Ok(exit_for(&all))
}

fn report(path: &Path) -> Result<u8> {
    let file: PathBuf = if path.is_dir() { path.join("report.json") } else { path.to_path_buf() };
    let text = fs::read_to_string(&file).map_err(|e| io_err(&file, e))?;
    let reports: Vec<Value> =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", file.display())))?;
    let mut counts: BTreeMap<(String, String, String), [usize; 3]> = BTreeMap::new();
    for r in &reports {
        let field = |k: &str| r.get(k).and_then(Value::as_str).unwrap_or("?").to_string();
        let c = counts.entry((field("theorem"), field("instance"), field("model"))).or_default();
        match r.get("verdict").and_then(Value::as_str) {
            Some("pass") => c[0] += 1,
            Some("fail") => c[1] += 1,
            _ => c[2] += 1,
        }
    }
    let rows: Vec<Vec<String>> = counts
        .into_iter()
        .map(|((t, i, m), c)| vec![t, i, m, c[0].to_string(), c[1].to_string(), c[2].to_string()])
        .collect();
    out!("{}", table(&["theorem", "instance", "model", "pass", "fail", "skip"], &rows));
    Ok(0)
}
