//! Checks of the positivity statements on concrete instances, with exact
//! margins where the quantities are rational and rational interval
//! enclosures where n-th roots enter.

pub mod batch;
pub mod sample;
pub mod theorems;

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::rational::{fmt_q, q, to_f64, Interval, RationalVector, Q};

pub use batch::{reports_to_csv, run_batch, summarize, BatchSummary};
pub use sample::Sampler;
pub use theorems::{
    check_binomial_morse, check_concavity, check_differentiability, check_duality, check_khovanskii_teissier,
    check_morse, check_orthogonality, check_zariski_approximation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Morse,
    Binomial,
    Diff,
    Orth,
    Concave,
    Kt,
    Duality,
    ZariskiApprox,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::Morse,
        Theorem::Binomial,
        Theorem::Diff,
        Theorem::Orth,
        Theorem::Concave,
        Theorem::Kt,
        Theorem::Duality,
        Theorem::ZariskiApprox,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::Morse => "morse",
            Theorem::Binomial => "binomial",
            Theorem::Diff => "diff",
            Theorem::Orth => "orth",
            Theorem::Concave => "concave",
            Theorem::Kt => "kt",
            Theorem::Duality => "duality",
            Theorem::ZariskiApprox => "zariski-approx",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Theorem::Morse => "vol(a - b) >= (a^n) - n (a^{n-1} . b)",
            Theorem::Binomial => "vol(a - b) >= (a^n) - sum_k C(n,k) (a^{n-k} . b^k), below the Morse bound",
            Theorem::Diff => "d/dt vol(a + t g) = n <a^{n-1}> . g from both sides",
            Theorem::Orth => "vol(a) = a . <a^{n-1}>",
            Theorem::Concave => "vol(a)^{1/n} - vol(b)^{1/n} >= (a - b) . <a^{n-1}> / vol(a)^{(n-1)/n}",
            Theorem::Kt => "(a^{n-1} . b) >= (a^n)^{(n-1)/n} (b^n)^{1/n}",
            Theorem::Duality => "the dual of the pseudoeffective cone is the movable cone",
            Theorem::ZariskiApprox => "(a_j . E_j)^2 <= (4C / n^2) (vol(a) - a_j^2)",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL.into_iter().find(|t| t.id() == s).ok_or_else(|| Error::input(format!("unknown theorem {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

/// `lhs - rhs`, exact or enclosed in a rational interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Margin {
    Exact {
        #[serde(with = "crate::lattice::rational::serde_q")]
        value: Q,
    },
    Interval {
        #[serde(with = "crate::lattice::rational::serde_q")]
        lo: Q,
        #[serde(with = "crate::lattice::rational::serde_q")]
        hi: Q,
    },
}

impl Margin {
    pub fn exact(value: Q) -> Self {
        Margin::Exact { value }
    }

    pub fn from_interval(i: &Interval) -> Self {
        if i.lo == i.hi {
            Margin::Exact { value: i.lo.clone() }
        } else {
            Margin::Interval { lo: i.lo.clone(), hi: i.hi.clone() }
        }
    }

    /// Zero for exact margins, the enclosure width otherwise.
    pub fn tolerance(&self) -> f64 {
        match self {
            Margin::Exact { .. } => 0.0,
            Margin::Interval { lo, hi } => to_f64(&(hi - lo)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Margin::Exact { value } => to_f64(value),
            Margin::Interval { lo, hi } => 0.5 * (to_f64(lo) + to_f64(hi)),
        }
    }

    /// Midpoint of the enclosure is at least `-tolerance`.
    pub fn nonnegative_within_tolerance(&self) -> bool {
        match self {
            Margin::Exact { value } => !value.is_negative(),
            Margin::Interval { lo, hi } => {
                let mid = (lo + hi) / q(2);
                !(mid + (hi - lo)).is_negative()
            }
        }
    }
}

impl fmt::Display for Margin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Margin::Exact { value } => f.write_str(&fmt_q(value)),
            Margin::Interval { lo, hi } => write!(f, "[{:.15e}, {:.15e}]", to_f64(lo), to_f64(hi)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedClass {
    pub name: String,
    pub class: RationalVector,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub theorem: Theorem,
    pub instance: String,
    pub model: String,
    pub inputs: Vec<NamedClass>,
    pub lhs: String,
    pub rhs: String,
    pub margin: Margin,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub(crate) fn new(theorem: Theorem, model: &crate::instance::Model, inputs: &[(&str, &[Q])]) -> Self {
        CheckReport {
            theorem,
            instance: model.name().to_string(),
            model: model.kind().to_string(),
            inputs: inputs
                .iter()
                .map(|(n, c)| NamedClass { name: n.to_string(), class: RationalVector(c.to_vec()) })
                .collect(),
            lhs: String::new(),
            rhs: String::new(),
            margin: Margin::exact(Q::zero()),
            tolerance: 0.0,
            verdict: Verdict::Skip,
            seed: None,
            notes: vec![],
        }
    }

    /// Sets the margin; the verdict follows from it unless `extra` fails.
    pub(crate) fn decide(mut self, margin: Margin, extra: bool) -> Self {
        self.tolerance = margin.tolerance();
        self.verdict = if extra && margin.nonnegative_within_tolerance() { Verdict::Pass } else { Verdict::Fail };
        self.margin = margin;
        self
    }

    /// Skipped report for a check that declined its inputs.
    pub fn refused(theorem: Theorem, model: &crate::instance::Model, inputs: &[(&str, &[Q])], err: &Error) -> Self {
        Self::new(theorem, model, inputs).skipped(format!("refused: {err}"))
    }

    pub(crate) fn skipped(mut self, reason: String) -> Self {
        self.verdict = Verdict::Skip;
        self.notes.push(reason);
        self
    }

    pub(crate) fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::qr;

    #[test]
    fn theorem_ids_round_trip() {
        for t in Theorem::ALL {
            assert_eq!(t.id().parse::<Theorem>().unwrap(), t);
        }
        assert!("nope".parse::<Theorem>().is_err());
    }

    #[test]
    fn margin_tolerance() {
        assert!(Margin::exact(q(0)).nonnegative_within_tolerance());
        assert!(!Margin::exact(qr(-1, 1000)).nonnegative_within_tolerance());
        let m = Margin::Interval { lo: qr(-1, 10), hi: qr(1, 10) };
        assert!(m.nonnegative_within_tolerance());
        let m = Margin::Interval { lo: qr(-3, 10), hi: qr(-2, 10) };
        assert!(!m.nonnegative_within_tolerance());
        assert!((m.tolerance() - 0.1).abs() < 1e-15);
    }
}
