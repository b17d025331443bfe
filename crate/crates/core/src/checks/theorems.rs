//! The individual checks. Each returns a report whose margin is `lhs - rhs`;
//! inequalities involving n-th roots are decided exactly after raising both
//! sides to the n-th power, and the margin is then reported as an interval.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::instance::Model;
use crate::lattice::cone::{dual_cone, Pairing};
use crate::lattice::rational::{fmt_q, nth_root_interval, q, Interval, RationalVector, Q};
use crate::surface::dyadic_schedule;

use super::sample::Sampler;
use super::{CheckReport, Margin, Theorem};

fn root_width() -> Q {
    Q::new(BigInt::from(1), num_traits::pow(BigInt::from(10), 24))
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn label(x: &[Q]) -> String {
    RationalVector(x.to_vec()).to_string()
}

fn require_nef(m: &Model, x: &[Q], name: &str) -> Result<()> {
    Error::check_dim(m.rank(), x.len())?;
    if m.is_nef(x)? {
        Ok(())
    } else {
        Err(Error::input(format!("{name} = {} is not nef", label(x))))
    }
}

fn require_big(m: &Model, x: &[Q]) -> Result<()> {
    Error::check_dim(m.rank(), x.len())?;
    if m.is_big(x)? {
        Ok(())
    } else {
        Err(Error::NotBig(label(x)))
    }
}

/// `(a^{n-k} . b^k)`.
fn mixed(m: &Model, a: &[Q], b: &[Q], k: usize) -> Result<Q> {
    let n = m.dim();
    let mut args: Vec<&[Q]> = vec![a; n - k];
    args.extend(std::iter::repeat(b).take(k));
    m.intersection(&args)
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn exact_root(x: &Q, n: u32) -> Option<Q> {
    let (a, b) = (x.numer().nth_root(n), x.denom().nth_root(n));
    (num_traits::pow(a.clone(), n as usize) == *x.numer() && num_traits::pow(b.clone(), n as usize) == *x.denom())
        .then(|| Q::new(a, b))
}

/// Exact n-th root when rational, otherwise a narrow enclosure.
fn root(x: &Q, n: u32) -> Interval {
    exact_root(x, n).map(Interval::point).unwrap_or_else(|| nth_root_interval(x, n, &root_width()))
}

fn ipow(x: &Interval, k: u32) -> Interval {
    (0..k).fold(Interval::point(q(1)), |acc, _| acc.mul(x))
}

fn interval_label(i: &Interval) -> String {
    if i.lo == i.hi {
        fmt_q(&i.lo)
    } else {
        format!("{:.15}", i.midpoint_f64())
    }
}

fn exact_report(mut r: CheckReport, lhs: Q, rhs: Q) -> CheckReport {
    r.lhs = fmt_q(&lhs);
    r.rhs = fmt_q(&rhs);
    r.decide(Margin::exact(lhs - rhs), true)
}

pub fn check_morse(m: &Model, alpha: &[Q], beta: &[Q]) -> Result<CheckReport> {
    require_nef(m, alpha, "alpha")?;
    require_nef(m, beta, "beta")?;
    let n = m.dim();
    let lhs = m.volume(&sub(alpha, beta))?;
    let rhs = mixed(m, alpha, beta, 0)? - q(n as i64) * mixed(m, alpha, beta, 1)?;
    let r = CheckReport::new(Theorem::Morse, m, &[("alpha", alpha), ("beta", beta)]);
    Ok(exact_report(r, lhs, rhs))
}

/// The margin is the smaller of `vol(alpha - beta) - binomial bound` and
/// `Morse bound - binomial bound`.
pub fn check_binomial_morse(m: &Model, alpha: &[Q], beta: &[Q]) -> Result<CheckReport> {
    require_nef(m, alpha, "alpha")?;
    require_nef(m, beta, "beta")?;
    let n = m.dim();
    let lhs = m.volume(&sub(alpha, beta))?;
    let top = mixed(m, alpha, beta, 0)?;
    let morse = &top - q(n as i64) * mixed(m, alpha, beta, 1)?;
    let mut bound = top;
    for k in 1..=n {
        bound -= q(binomial(n, k)) * mixed(m, alpha, beta, k)?;
    }
    let margin = (&lhs - &bound).min(&morse - &bound);
    let mut r = CheckReport::new(Theorem::Binomial, m, &[("alpha", alpha), ("beta", beta)]);
    r.lhs = fmt_q(&lhs);
    r.rhs = fmt_q(&bound);
    Ok(r.note(format!("morse bound {}", fmt_q(&morse))).decide(Margin::exact(margin), true))
}

/// Exact one-sided derivatives against `n <alpha^{n-1}> . gamma`; symmetric
/// difference quotients at `h = 2^-k`, `k = 1..=steps`, are recorded in the
/// notes.
pub fn check_differentiability(m: &Model, alpha: &[Q], gamma: &[Q], steps: u32) -> Result<CheckReport> {
    require_big(m, alpha)?;
    Error::check_dim(m.rank(), gamma.len())?;
    let n = q(m.dim() as i64);
    let expected = &n * m.positive_product(alpha, gamma)?;
    let (left, right) = m.one_sided_derivatives(alpha, gamma)?;
    let mut r = CheckReport::new(Theorem::Diff, m, &[("alpha", alpha), ("gamma", gamma)]);
    let mut h = q(1);
    for k in 1..=steps {
        h /= q(2);
        let plus: Vec<Q> = alpha.iter().zip(gamma).map(|(a, g)| a + &h * g).collect();
        let minus: Vec<Q> = alpha.iter().zip(gamma).map(|(a, g)| a - &h * g).collect();
        let quotient = (m.volume(&plus)? - m.volume(&minus)?) / (q(2) * &h);
        if k == steps {
            r = r.note(format!("symmetric quotient at 2^-{k}: {}", fmt_q(&quotient)));
        }
    }
    r.lhs = format!("left {}, right {}", fmt_q(&left), fmt_q(&right));
    r.rhs = fmt_q(&expected);
    let margin = -((&left - &expected).abs() + (&right - &expected).abs());
    Ok(r.decide(Margin::exact(margin), true))
}

/// `vol(alpha) = alpha . <alpha^{n-1}>`; the margin is minus the absolute
/// difference.
pub fn check_orthogonality(m: &Model, alpha: &[Q]) -> Result<CheckReport> {
    require_big(m, alpha)?;
    let lhs = m.volume(alpha)?;
    let rhs = m.positive_product(alpha, alpha)?;
    let mut r = CheckReport::new(Theorem::Orth, m, &[("alpha", alpha)]);
    r.lhs = fmt_q(&lhs);
    r.rhs = fmt_q(&rhs);
    let margin = -(&lhs - &rhs).abs();
    Ok(r.decide(Margin::exact(margin), true))
}

/// Multiplying through by `vol(alpha)^{(n-1)/n}`, the inequality reads
/// `X >= (vol(beta) vol(alpha)^{n-1})^{1/n}` with
/// `X = vol(alpha) - (alpha - beta) . <alpha^{n-1}>`, which is decided
/// exactly as `X >= 0` and `X^n >= vol(beta) vol(alpha)^{n-1}`.
pub fn check_concavity(m: &Model, alpha: &[Q], beta: &[Q]) -> Result<CheckReport> {
    require_big(m, alpha)?;
    require_big(m, beta)?;
    let n = m.dim() as u32;
    let va = m.volume(alpha)?;
    let vb = m.volume(beta)?;
    let d = m.positive_product(alpha, &sub(alpha, beta))?;
    let x = &va - &d;
    let y = &vb * num_traits::pow(va.clone(), n as usize - 1);
    let holds = !x.is_negative() && num_traits::pow(x.clone(), n as usize) >= y;

    let (ra, rb) = (root(&va, n), root(&vb, n));
    let lhs = ra.sub(&rb);
    let rhs = Interval::point(d).div(&ipow(&ra, n - 1));
    let margin = lhs.sub(&rhs);
    let mut r = CheckReport::new(Theorem::Concave, m, &[("alpha", alpha), ("beta", beta)]);
    r.lhs = interval_label(&lhs);
    r.rhs = interval_label(&rhs);
    Ok(r.decide(Margin::from_interval(&margin), holds))
}

/// Decided exactly as `(a^{n-1} b)^n >= (a^n)^{n-1} (b^n)`.
pub fn check_khovanskii_teissier(m: &Model, alpha: &[Q], beta: &[Q]) -> Result<CheckReport> {
    require_nef(m, alpha, "alpha")?;
    require_nef(m, beta, "beta")?;
    let n = m.dim() as u32;
    let lhs = mixed(m, alpha, beta, 1)?;
    let an = mixed(m, alpha, beta, 0)?;
    let bn = mixed(m, alpha, beta, n as usize)?;
    let holds = !lhs.is_negative()
        && num_traits::pow(lhs.clone(), n as usize) >= num_traits::pow(an.clone(), n as usize - 1) * &bn;
    let rhs = ipow(&root(&an, n), n - 1).mul(&root(&bn, n));
    let margin = Interval::point(lhs.clone()).sub(&rhs);
    let mut r = CheckReport::new(Theorem::Kt, m, &[("alpha", alpha), ("beta", beta)]);
    r.lhs = fmt_q(&lhs);
    r.rhs = interval_label(&rhs);
    Ok(r.decide(Margin::from_interval(&margin), holds))
}

fn ray_list(rays: &[RationalVector]) -> String {
    rays.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
}

/// Surfaces: the dual of the psef cone under the intersection pairing equals
/// the nef cone, ray for ray. Threefolds: the dual of the psef cone contains
/// `samples` products of nef pairs, and each of its extremal rays is a
/// declared movable curve. The margin is minus the number of mismatches.
pub fn check_duality(m: &Model, samples: usize, sampler: &mut Sampler) -> Result<CheckReport> {
    let psef = m.psef_cone();
    let r = CheckReport::new(Theorem::Duality, m, &[]);
    match m.dim() {
        2 => {
            let dual = dual_cone(&psef, &m.surface_pairing()?)?;
            let nef = m.nef_cone();
            let missing = dual.generators().iter().filter(|g| !nef.generators().contains(g)).count()
                + nef.generators().iter().filter(|g| !dual.generators().contains(g)).count();
            let mut r = r;
            r.lhs = ray_list(dual.generators());
            r.rhs = ray_list(nef.generators());
            let ok = dual.same_as(&nef);
            Ok(r.decide(Margin::exact(-q(missing as i64)), ok))
        }
        3 => {
            let Model::Toric(fan) = m else {
                return Err(Error::input("threefold duality needs a toric model"));
            };
            let dual = dual_cone(&psef, &Pairing::standard(m.rank()))?;
            let nef_gens = m.nef_cone().generators().to_vec();
            let mut outside = 0;
            for _ in 0..samples {
                let a = sampler.combination(&nef_gens, false);
                let b = sampler.combination(&nef_gens, false);
                if !dual.contains(&fan.curve_of_product(&[&a, &b])?) {
                    outside += 1;
                }
            }
            let certificates: Vec<RationalVector> =
                fan.movable_curves().into_iter().map(|w| fan.wall_functional(w).primitive()).collect();
            let misdeclared = certificates.iter().filter(|c| !dual.contains(c)).count();
            let uncertified = dual.generators().iter().filter(|g| !certificates.contains(g)).count();
            let bad = outside + misdeclared + uncertified;
            let mut r = r;
            r.lhs = ray_list(dual.generators());
            r.rhs = ray_list(&certificates);
            let r = r.note(format!(
                "{samples} nef products, {outside} outside; {uncertified} rays without a certificate; {misdeclared} certificates outside"
            ));
            let ok = bad == 0 && dual.is_pointed();
            Ok(r.decide(Margin::exact(-q(bad as i64)), ok))
        }
        d => Err(Error::input(format!("duality is checked in dimensions 2 and 3, not {d}"))),
    }
}

/// Runs the approximate decomposition over `eps = 2^-j`, `j <= steps`; the
/// margin is the smallest `bound - (a_j . E_j)^2` over the schedule.
pub fn check_zariski_approximation(m: &Model, alpha: &[Q], steps: u32) -> Result<CheckReport> {
    let surface = m.as_surface()?;
    let rep = surface.approximate_zariski_experiment(alpha, &dyadic_schedule(steps))?;
    let worst = rep
        .rows
        .iter()
        .min_by(|a, b| (&a.bound - &a.pairing * &a.pairing).cmp(&(&b.bound - &b.pairing * &b.pairing)))
        .expect("nonempty schedule");
    let mut r = CheckReport::new(Theorem::ZariskiApprox, m, &[("alpha", alpha)]);
    r.lhs = fmt_q(&(&worst.pairing * &worst.pairing));
    r.rhs = fmt_q(&worst.bound);
    let margin = &worst.bound - &worst.pairing * &worst.pairing;
    let r = r.note(format!(
        "C = {}, shift {}, {} rows, worst at eps {}",
        fmt_q(&rep.c),
        fmt_q(&rep.shift),
        rep.rows.len(),
        fmt_q(&worst.epsilon)
    ));
    Ok(r.decide(Margin::exact(margin), rep.all_satisfied()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{builtin, Preference};
    use crate::lattice::rational::qr;

    fn toric(name: &str) -> Model {
        builtin(name, Preference::Toric).unwrap()
    }

    fn surf(name: &str) -> Model {
        builtin(name, Preference::Surface).unwrap()
    }

    #[test]
    fn morse_on_quadric() {
        let m = toric("P1xP1");
        let r = check_morse(&m, &[q(3), q(3)], &[q(1), q(1)]).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("8", "6"));
        assert!(r.passed());
        let b = check_binomial_morse(&m, &[q(3), q(3)], &[q(1), q(1)]).unwrap();
        assert_eq!(b.rhs, "4");
        assert!(b.passed());
    }

    #[test]
    fn morse_equality_on_f1() {
        // alpha = 2H - E, beta = H - E in the (H, E) basis
        for m in [toric("F1"), surf("F1")] {
            let r = check_morse(&m, &[q(2), q(-1)], &[q(1), q(-1)]).unwrap();
            assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("1", "1"));
            assert_eq!(r.margin, Margin::exact(q(0)));
        }
    }

    #[test]
    fn trivial_beta_is_equality() {
        let m = toric("P1^3");
        let a = [q(2), q(1), q(3)];
        let r = check_morse(&m, &a, &[q(0), q(0), q(0)]).unwrap();
        assert_eq!(r.margin, Margin::exact(q(0)));
        let r = check_binomial_morse(&m, &a, &[q(0), q(0), q(0)]).unwrap();
        assert_eq!(r.margin, Margin::exact(q(0)));
    }

    #[test]
    fn binomial_on_cube() {
        let m = toric("P1^3");
        let r = check_binomial_morse(&m, &[q(2), q(2), q(2)], &[q(1), q(1), q(1)]).unwrap();
        // 48 - 3*24 - 3*12 - 6
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("6", "-66"));
        assert!(r.passed());
    }

    #[test]
    fn non_nef_is_input_error() {
        let m = toric("F1");
        let e = check_morse(&m, &[q(0), q(1)], &[q(1), q(0)]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn differentiability_examples() {
        let s = surf("F1");
        let r = check_differentiability(&s, &[q(1), q(0)], &[q(0), q(1)], 8).unwrap();
        assert_eq!(r.lhs, "left 0, right 0");
        assert!(r.passed());
        let t = toric("F1");
        let r = check_differentiability(&t, &[q(1), qr(1, 2)], &[q(1), q(-1)], 8).unwrap();
        assert_eq!(r.rhs, "2");
        assert!(r.passed());
        let a = [q(3), q(-1)];
        let r = check_differentiability(&t, &a, &a, 4).unwrap();
        assert_eq!(r.rhs, fmt_q(&(q(2) * t.volume(&a).unwrap())));
        assert!(matches!(check_differentiability(&t, &[q(1), q(-1)], &[q(1), q(0)], 4), Err(Error::NotBig(_))));
    }

    #[test]
    fn orthogonality_examples() {
        let s = surf("F1");
        let r = check_orthogonality(&s, &[q(1), q(1)]).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("1", "1"));
        let t = toric("F1");
        assert!(check_orthogonality(&t, &[q(1), q(1)]).unwrap().passed());
        assert!(check_orthogonality(&toric("BlP3"), &[q(1), q(1)]).unwrap().passed());
    }

    #[test]
    fn concavity_examples() {
        let s = surf("F1");
        let r = check_concavity(&s, &[q(1), q(0)], &[q(2), q(-1)]).unwrap();
        assert!(r.passed());
        assert_eq!(r.rhs, "-1");
        assert!((r.margin.to_f64() - (2.0 - 3f64.sqrt())).abs() < 1e-12);
        assert!(r.tolerance < 1e-12 && r.tolerance > 0.0);
        let a = [q(3), q(1)];
        let r = check_concavity(&s, &a, &a).unwrap();
        assert_eq!(r.margin, Margin::exact(q(0)));
        let t = toric("P1^3");
        // beta on the ray of alpha: both sides agree
        let r = check_concavity(&t, &[q(2), q(2), q(2)], &[q(1), q(1), q(1)]).unwrap();
        assert!(r.passed());
        assert!(r.margin.to_f64().abs() < 1e-12);
    }

    #[test]
    fn khovanskii_teissier_examples() {
        let m = toric("P1xP1");
        let r = check_khovanskii_teissier(&m, &[q(1), q(2)], &[q(2), q(1)]).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("5", "4"));
        let a = [q(1), q(3)];
        let r = check_khovanskii_teissier(&m, &a, &a).unwrap();
        assert!(r.passed() && r.margin.to_f64().abs() < 1e-12 && r.tolerance < 1e-12);
        let b = [q(1), q(2)];
        assert_eq!(check_khovanskii_teissier(&m, &b, &b).unwrap().margin, Margin::exact(q(0)));
        let r = check_khovanskii_teissier(&m, &a, &[q(0), q(0)]).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("0", "0"));
    }

    #[test]
    fn duality_on_surfaces_and_threefolds() {
        let mut s = Sampler::new(1);
        for m in [surf("F1"), toric("F1"), surf("dP6"), toric("dP6"), toric("P2")] {
            let r = check_duality(&m, 0, &mut s).unwrap();
            assert!(r.passed(), "{} {}: {} vs {}", m.kind(), m.name(), r.lhs, r.rhs);
        }
        for name in ["P1^3", "BlP3"] {
            let r = check_duality(&toric(name), 20, &mut s).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.notes);
        }
    }

    #[test]
    fn zariski_approximation_on_f1() {
        let r = check_zariski_approximation(&surf("F1"), &[q(1), q(1)], 10).unwrap();
        assert!(r.passed());
    }
}
