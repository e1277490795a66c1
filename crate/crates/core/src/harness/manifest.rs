//! The laws manifest: a versioned text rendering of every law's outcome over
//! a verification envelope, meant to be checked in and compared.

use std::fmt::Write as _;

use crate::process::FuzzyProcess;
use crate::scalar::Scalar;

use super::check::{classify_over, HarnessConfig, LawReport};
use super::enumerate::DomainSpec;
use super::laws::{registry, Law};
use super::HarnessError;

pub const MANIFEST_HEADER: &str = "fpcheck laws manifest v1";

/// Which domains each law is checked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Envelope {
    /// Crisp `|E| ≤ 3` for arity ≤ 3 and `|E| ≤ 2` beyond; grid `k = 2` with
    /// `|E| ≤ 2` for arity ≤ 2 and `|E| = 1` beyond. Both unrestricted and
    /// total-only.
    Default,
    Custom {
        max_universe: usize,
        grid: u32,
        total_only: bool,
    },
}

impl Envelope {
    pub fn domains(&self, arity: usize) -> Vec<DomainSpec> {
        let mut specs = Vec::new();
        let mut push = |grid: u32, max: usize, totals: &[bool]| {
            for universe_size in 1..=max {
                for &total_only in totals {
                    specs.push(DomainSpec {
                        universe_size,
                        grid,
                        total_only,
                    });
                }
            }
        };
        match *self {
            Envelope::Default => {
                push(1, if arity <= 3 { 3 } else { 2 }, &[false, true]);
                push(2, if arity <= 2 { 2 } else { 1 }, &[false, true]);
            }
            Envelope::Custom {
                max_universe,
                grid,
                total_only,
            } => {
                let totals: &[bool] = if total_only { &[true] } else { &[false, true] };
                push(1, max_universe, totals);
                if grid != 1 {
                    push(grid, max_universe, totals);
                }
            }
        }
        specs
    }

    fn describe(&self) -> String {
        match *self {
            Envelope::Default => "default".to_owned(),
            Envelope::Custom {
                max_universe,
                grid,
                total_only,
            } => format!("max-universe={max_universe} grid={grid} total-only={total_only}"),
        }
    }
}

pub struct ManifestEntry<T> {
    pub law: Law<T>,
    pub report: LawReport<T>,
}

pub struct Manifest<T> {
    pub envelope: Envelope,
    pub budget: u128,
    pub entries: Vec<ManifestEntry<T>>,
}

/// Checks every registered law over `envelope`.
pub fn run_laws<T: Scalar>(
    envelope: Envelope,
    config: &HarnessConfig<T>,
) -> Result<Manifest<T>, HarnessError> {
    let entries = registry::<T>()
        .into_iter()
        .map(|law| {
            let report = classify_over(&law, &envelope.domains(law.arity()), config)?;
            Ok(ManifestEntry { law, report })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(Manifest {
        envelope,
        budget: config.budget,
        entries,
    })
}

fn tuple<T: Scalar>(names: &[&str], args: &[FuzzyProcess<T>]) -> String {
    names
        .iter()
        .zip(args)
        .map(|(name, p)| format!("{name}={p}"))
        .collect::<Vec<_>>()
        .join(" ")
}

impl<T: Scalar> Manifest<T> {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MANIFEST_HEADER}");
        let _ = writeln!(out, "envelope: {}", self.envelope.describe());
        let _ = writeln!(out, "budget: {}", self.budget);
        let _ = writeln!(out, "membership values are shown as label:delta,gamma");
        for ManifestEntry { law, report } in &self.entries {
            let _ = writeln!(out);
            let _ = writeln!(out, "law {}", law.id);
            let _ = writeln!(out, "  source: {}", law.source);
            let _ = writeln!(out, "  level: {}", law.level);
            let _ = writeln!(out, "  arity: {}", law.arity());
            let _ = writeln!(out, "  claim: {}", law.statement);
            let _ = writeln!(out, "  class: {}", report.precondition_class);
            for outcome in &report.outcomes {
                let domain = outcome.domain.to_string();
                if outcome.passed() {
                    let _ = writeln!(
                        out,
                        "  {domain:<22} tuples={:<8} pass",
                        outcome.tuples_checked
                    );
                } else {
                    let _ = writeln!(
                        out,
                        "  {domain:<22} tuples={:<8} FAIL failures={}",
                        outcome.tuples_checked, outcome.failures
                    );
                    if let Some(first) = outcome.counterexamples.first() {
                        let _ = writeln!(out, "    first: {}", tuple(law.args, first));
                    }
                }
            }
        }
        out
    }

    /// One line per law: id, class, and overall status.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for ManifestEntry { law, report } in &self.entries {
            let failing = report.outcomes.iter().filter(|o| !o.passed()).count();
            let status = if failing == 0 {
                "pass".to_owned()
            } else {
                format!("fails on {failing}/{} domains", report.outcomes.len())
            };
            let _ = writeln!(
                out,
                "{:<28} {:<10} {:<21} {}",
                law.id, law.level, report.precondition_class, status
            );
        }
        out
    }
}

/// Line-level difference between an expected and an actual manifest.
pub fn diff(expected: &str, actual: &str) -> Option<String> {
    if expected == actual {
        return None;
    }
    let (e, a): (Vec<_>, Vec<_>) = (expected.lines().collect(), actual.lines().collect());
    let mut out = String::new();
    for i in 0..e.len().max(a.len()) {
        match (e.get(i), a.get(i)) {
            (Some(x), Some(y)) if x == y => {}
            (x, y) => {
                let _ = writeln!(out, "line {}:", i + 1);
                if let Some(x) = x {
                    let _ = writeln!(out, "- {x}");
                }
                if let Some(y) = y {
                    let _ = writeln!(out, "+ {y}");
                }
            }
        }
    }
    if out.is_empty() {
        // Only trailing newline differences.
        out.push_str("manifests differ in trailing whitespace\n");
    }
    Some(out)
}
