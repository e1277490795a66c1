//! Verification procedures built on the algebra.
//!
//! Refinement conclusions here are drawn at support level, where the
//! underlying equivalences are valid for total processes. Every procedure
//! attaches a warning for each non-total operand instead of assuming totality.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::error::CoreError;
use crate::harness::{enumerate, EnumerationDomain, HarnessError};
use crate::level::Level;
use crate::process::FuzzyProcess;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Harness(#[from] HarnessError),

    #[error("a chain needs at least one step")]
    EmptyChain,

    #[error("component {component} of level {level} has no replacement")]
    EmptyComponent { level: usize, component: usize },

    #[error("assertion `{kind}` takes {expected} operand(s), got {found}")]
    Arity {
        kind: AssertionKind,
        expected: usize,
        found: usize,
    },
}

/// A process together with the name it is reported under.
#[derive(Debug, Clone, PartialEq)]
pub struct Named<T> {
    pub name: String,
    pub process: FuzzyProcess<T>,
}

impl<T> Named<T> {
    pub fn new(name: impl Into<String>, process: FuzzyProcess<T>) -> Self {
        Self {
            name: name.into(),
            process,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WarningKind {
    NonTotalOperand,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub kind: WarningKind,
    pub operand: String,
    /// Rejected executions of the operand.
    pub labels: Vec<String>,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WarningKind::NonTotalOperand => write!(
                f,
                "non-total operand `{}` (rejections: {})",
                self.operand,
                self.labels.join(", ")
            ),
        }
    }
}

/// Evidence that a check failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(
    tag = "kind",
    rename_all = "kebab-case",
    bound(serialize = "T: Scalar")
)]
pub enum Witness<T> {
    /// The execution where the checked condition breaks.
    Execution { label: String },
    /// A tester passed by the specification but not by the implementation.
    Tester { tester: FuzzyProcess<T> },
    /// The chain component whose refinement fails, and where.
    Component {
        level: usize,
        component: usize,
        label: String,
    },
}

impl<T: Scalar> fmt::Display for Witness<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Execution { label } => write!(f, "execution {label}"),
            Witness::Tester { tester } => write!(f, "tester {tester}"),
            Witness::Component {
                level,
                component,
                label,
            } => write!(f, "level {level}, component {component}, execution {label}"),
        }
    }
}

/// An independently computed result reported next to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct Verdict<T> {
    pub check: String,
    pub holds: bool,
    pub level: Level,
    pub warnings: Vec<Warning>,
    pub witness: Option<Witness<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
}

impl<T: Scalar> Verdict<T> {
    fn new(check: &str, level: Level, witness: Option<Witness<T>>) -> Self {
        Self {
            check: check.to_owned(),
            holds: witness.is_none(),
            level,
            warnings: Vec::new(),
            witness,
            cross_check: None,
        }
    }

    fn warn_non_total<'a>(mut self, operands: impl IntoIterator<Item = &'a Named<T>>) -> Self {
        for operand in operands {
            if operand.process.is_total() || self.warnings.iter().any(|w| w.operand == operand.name)
            {
                continue;
            }
            self.warnings.push(Warning {
                kind: WarningKind::NonTotalOperand,
                operand: operand.name.clone(),
                labels: operand
                    .process
                    .rejections()
                    .into_iter()
                    .map(str::to_owned)
                    .collect(),
            });
        }
        self
    }

    fn with_cross_check(mut self, name: &str, holds: bool) -> Self {
        self.cross_check = Some(CrossCheck {
            name: name.to_owned(),
            holds,
        });
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serialization is infallible")
    }
}

fn label_at<T: Scalar>(p: &FuzzyProcess<T>, i: usize) -> Witness<T> {
    Witness::Execution {
        label: p.universe().label(i).to_owned(),
    }
}

/// Relative correctness: `q` works in the environment of `p`, i.e. `-p ⊗ q`
/// accepts every execution. Agrees with support refinement on total operands.
pub fn check_relative_correctness<T: Scalar>(
    p: &Named<T>,
    q: &Named<T>,
) -> Result<Verdict<T>, EngineError> {
    let composed = p.process.reflect().product(&q.process)?;
    let failure = (0..composed.universe().len()).find(|&i| !composed.acceptable_at(i));
    let reference = p.process.support_refines(&q.process)?;
    Ok(Verdict::new(
        "relative-correctness",
        Level::Support,
        failure.map(|i| label_at(&composed, i)),
    )
    .warn_non_total([p, q])
    .with_cross_check("support_refines", reference))
}

/// Testing refinement: every crisp total tester `r` with `r ⊗ p` accepting
/// everything also has `r ⊗ q` accepting everything.
pub fn check_testing_refinement<T: Scalar>(
    p: &Named<T>,
    q: &Named<T>,
    budget: u128,
) -> Result<Verdict<T>, EngineError> {
    if p.process.universe() != q.process.universe() {
        return Err(CoreError::UniverseMismatch.into());
    }
    let testers = EnumerationDomain::crisp(p.process.universe().clone()).total();
    let mut witness = None;
    for r in enumerate::<T>(&testers, budget)? {
        if r.product(&p.process)?.is_robust_support() && !r.product(&q.process)?.is_robust_support()
        {
            witness = Some(Witness::Tester { tester: r });
            break;
        }
    }
    let reference = p.process.support_refines(&q.process)?;
    Ok(Verdict::new("testing-refinement", Level::Support, witness)
        .warn_non_total([p, q])
        .with_cross_check("support_refines", reference))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct DesignSolution<T> {
    /// `p ⊕ -q`, the least solution of `p ⊑ q ⊗ r`.
    pub r_min: FuzzyProcess<T>,
    pub verification: Verdict<T>,
}

/// Solves the design inequality `p ⊑ q ⊗ r` for `r`.
pub fn solve_design_inequality<T: Scalar>(
    p: &Named<T>,
    q: &Named<T>,
) -> Result<DesignSolution<T>, EngineError> {
    let r_min = p.process.sum(&q.process.reflect())?;
    let composed = q.process.product(&r_min)?;
    let failure = p
        .process
        .support_refinement_failure(&composed)
        .map(|i| label_at(&composed, i));
    let named_r = Named::new("r_min", r_min.clone());
    let verification =
        Verdict::new("design-inequality", Level::Support, failure).warn_non_total([p, q, &named_r]);
    Ok(DesignSolution {
        r_min,
        verification,
    })
}

/// One component `a_j ⊑ b_j1 ⊗ b_j2 ⊗ ...` of a chain step.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComponent<T> {
    pub target: Named<T>,
    pub replacements: Vec<Named<T>>,
}

/// Step from `t_i` (the product of the component targets) to `t_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep<T> {
    pub level: usize,
    pub components: Vec<ChainComponent<T>>,
    /// `t_{i+1}` as a whole.
    pub refined: Named<T>,
}

fn product_of<'a, T: Scalar>(
    items: impl IntoIterator<Item = &'a FuzzyProcess<T>>,
) -> Result<Option<FuzzyProcess<T>>, CoreError> {
    let mut acc: Option<FuzzyProcess<T>> = None;
    for p in items {
        acc = Some(match acc {
            None => p.clone(),
            Some(a) => a.product(p)?,
        });
    }
    Ok(acc)
}

/// Checks a user-supplied refinement chain component by component.
///
/// Components are numbered from 1 within each level; levels from 0. The
/// verdict's cross-check compares `t_0` and `t_n` directly.
pub fn check_chain<T: Scalar>(steps: &[ChainStep<T>]) -> Result<Verdict<T>, EngineError> {
    let (first, last) = match (steps.first(), steps.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(EngineError::EmptyChain),
    };
    let mut witness = None;
    let mut operands: Vec<&Named<T>> = Vec::new();
    for step in steps {
        for (j, component) in step.components.iter().enumerate() {
            let combined = product_of(component.replacements.iter().map(|b| &b.process))?.ok_or(
                EngineError::EmptyComponent {
                    level: step.level,
                    component: j + 1,
                },
            )?;
            operands.push(&component.target);
            operands.extend(&component.replacements);
            if witness.is_some() {
                continue;
            }
            if let Some(i) = component
                .target
                .process
                .support_refinement_failure(&combined)
            {
                witness = Some(Witness::Component {
                    level: step.level,
                    component: j + 1,
                    label: combined.universe().label(i).to_owned(),
                });
            }
        }
    }
    let start = product_of(first.components.iter().map(|c| &c.target.process))?
        .ok_or(EngineError::EmptyChain)?;
    let direct = start.support_refines(&last.refined.process)?;
    Ok(Verdict::new("chain", Level::Support, witness)
        .warn_non_total(operands)
        .with_cross_check("support_refines(t_0, t_n)", direct))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct FactorReport<T> {
    pub robust: FuzzyProcess<T>,
    pub chaotic: FuzzyProcess<T>,
    pub robust_confirmed: bool,
    pub chaotic_confirmed: bool,
    pub reconstruction_exact: bool,
    /// Labels where `robust ⊗ chaotic` differs from the input.
    pub mismatched: Vec<String>,
    pub warnings: Vec<Warning>,
}

/// Splits `p` into a robust and a chaotic factor and checks the reconstruction.
pub fn factorize<T: Scalar>(p: &Named<T>) -> FactorReport<T> {
    let f = p.process.factor();
    let warnings = Verdict::<T>::new("factor", Level::Membership, None)
        .warn_non_total([p])
        .warnings;
    FactorReport {
        robust_confirmed: f.robust.is_robust(),
        chaotic_confirmed: f.chaotic.is_chaotic(),
        reconstruction_exact: f.reconstruction_exact(),
        mismatched: f.mismatched,
        robust: f.robust,
        chaotic: f.chaotic,
        warnings,
    }
}

/// Predicates available to `assert` statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssertionKind {
    Refines,
    SupportRefines,
    Robust,
    Chaotic,
    Total,
    Equal,
}

impl AssertionKind {
    pub const ALL: [AssertionKind; 6] = [
        AssertionKind::Refines,
        AssertionKind::SupportRefines,
        AssertionKind::Robust,
        AssertionKind::Chaotic,
        AssertionKind::Total,
        AssertionKind::Equal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AssertionKind::Refines => "refines",
            AssertionKind::SupportRefines => "support-refines",
            AssertionKind::Robust => "robust",
            AssertionKind::Chaotic => "chaotic",
            AssertionKind::Total => "total",
            AssertionKind::Equal => "equal",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            AssertionKind::Refines | AssertionKind::SupportRefines | AssertionKind::Equal => 2,
            AssertionKind::Robust | AssertionKind::Chaotic | AssertionKind::Total => 1,
        }
    }

    pub fn level(self) -> Level {
        match self {
            AssertionKind::SupportRefines | AssertionKind::Total => Level::Support,
            _ => Level::Membership,
        }
    }
}

impl fmt::Display for AssertionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssertionKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

/// Evaluates one assertion.
pub fn check_assertion<T: Scalar>(
    kind: AssertionKind,
    operands: &[Named<T>],
) -> Result<Verdict<T>, EngineError> {
    if operands.len() != kind.arity() {
        return Err(EngineError::Arity {
            kind,
            expected: kind.arity(),
            found: operands.len(),
        });
    }
    let p = &operands[0].process;
    let failure = match kind {
        AssertionKind::Refines => {
            p.fuzzy_refines(&operands[1].process)?;
            p.fuzzy_refinement_failure(&operands[1].process)
        }
        AssertionKind::SupportRefines => {
            p.support_refines(&operands[1].process)?;
            p.support_refinement_failure(&operands[1].process)
        }
        AssertionKind::Equal => {
            p.fuzzy_refines(&operands[1].process)?;
            p.first_difference(&operands[1].process)
        }
        AssertionKind::Robust => p.gamma().iter().position(|m| !m.is_one()),
        AssertionKind::Chaotic => p.delta().iter().position(|m| !m.is_one()),
        AssertionKind::Total => {
            (0..p.universe().len()).find(|&i| !p.accessible_at(i) && !p.acceptable_at(i))
        }
    };
    let verdict = Verdict::new(kind.as_str(), kind.level(), failure.map(|i| label_at(p, i)));
    Ok(match kind {
        AssertionKind::SupportRefines => verdict.warn_non_total(operands),
        _ => verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::EnumerationDomain;
    use crate::{ExecutionUniverse, Process, Rational};

    fn named(name: &str, p: &Process) -> Named<Rational> {
        Named::new(name, p.clone())
    }

    fn crisp_totals(n: usize) -> Vec<Process> {
        enumerate(
            &EnumerationDomain::crisp(ExecutionUniverse::numbered(n)).total(),
            1000,
        )
        .unwrap()
        .collect()
    }

    fn one(d: i64, g: i64) -> Process {
        let u = ExecutionUniverse::numbered(1);
        Process::from_maps(&u, [("e0", Rational::from(d))], [("e0", Rational::from(g))]).unwrap()
    }

    #[test]
    fn relative_correctness_is_reflexive() {
        let all: Vec<Process> = enumerate(
            &EnumerationDomain::fuzzy(ExecutionUniverse::numbered(2), 2),
            1000,
        )
        .unwrap()
        .collect();
        for p in &all {
            assert!(
                check_relative_correctness(&named("p", p), &named("p", p))
                    .unwrap()
                    .holds
            );
        }
    }

    #[test]
    fn relative_correctness_failure_has_witness() {
        let p = one(1, 1);
        let q = one(1, 0);
        let v = check_relative_correctness(&named("p", &p), &named("q", &q)).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::Execution { label: "e0".into() }));
        assert!(!v.cross_check.unwrap().holds);
        // Replay: -p ⊗ q really rejects e0.
        assert!(!p.reflect().product(&q).unwrap().acceptable_at(0));
    }

    #[test]
    fn non_total_operand_warns() {
        let p = one(0, 0);
        let v = check_relative_correctness(&named("p", &p), &named("q", &one(1, 1))).unwrap();
        assert_eq!(v.warnings.len(), 1);
        assert_eq!(
            v.warnings[0].to_string(),
            "non-total operand `p` (rejections: e0)"
        );
    }

    #[test]
    fn engine_checks_agree_on_crisp_totals() {
        for n in 1..=2 {
            let all = crisp_totals(n);
            for p in &all {
                for q in &all {
                    let reference = p.support_refines(q).unwrap();
                    let rel = check_relative_correctness(&named("p", p), &named("q", q)).unwrap();
                    let test =
                        check_testing_refinement(&named("p", p), &named("q", q), 1000).unwrap();
                    assert_eq!(rel.holds, reference, "{p} {q}");
                    assert_eq!(test.holds, reference, "{p} {q}");
                    assert!(rel.warnings.is_empty());
                }
            }
        }
    }

    #[test]
    fn testing_refinement_finds_tester_against_omega() {
        let omega = Process::omega(&ExecutionUniverse::numbered(1));
        let q = one(1, 0);
        let v = check_testing_refinement(&named("p", &omega), &named("q", &q), 1000).unwrap();
        assert!(!v.holds);
        let Some(Witness::Tester { tester }) = v.witness else {
            panic!("expected tester witness")
        };
        assert!(tester.product(&omega).unwrap().is_robust_support());
        assert!(!tester.product(&q).unwrap().is_robust_support());
    }

    #[test]
    fn testing_refinement_budget() {
        let omega = Process::omega(&ExecutionUniverse::numbered(3));
        let err =
            check_testing_refinement(&named("p", &omega), &named("q", &omega), 26).unwrap_err();
        assert!(matches!(
            err,
            EngineError::Harness(HarnessError::BudgetExceeded { required: 27, .. })
        ));
    }

    #[test]
    fn design_inequality_with_omega() {
        for p in crisp_totals(2) {
            let omega = Process::omega(p.universe());
            let sol = solve_design_inequality(&named("p", &p), &named("q", &omega)).unwrap();
            assert_eq!(sol.r_min, p);
            assert!(sol.verification.holds);
        }
    }

    #[test]
    fn design_inequality_minimality() {
        let all = crisp_totals(2);
        for p in &all {
            for q in &all {
                let sol = solve_design_inequality(&named("p", p), &named("q", q)).unwrap();
                assert!(sol.verification.holds);
                for r in &all {
                    let solves = p.support_refines(&q.product(r).unwrap()).unwrap();
                    assert_eq!(solves, sol.r_min.support_refines(r).unwrap());
                }
            }
        }
    }

    #[test]
    fn design_inequality_warns_for_non_total_q() {
        let sol =
            solve_design_inequality(&named("p", &one(1, 1)), &named("q", &one(0, 0))).unwrap();
        assert!(sol.verification.warnings.iter().any(|w| w.operand == "q"));
    }

    fn component(
        target: &Named<Rational>,
        replacements: &[&Named<Rational>],
    ) -> ChainComponent<Rational> {
        ChainComponent {
            target: target.clone(),
            replacements: replacements.iter().map(|&r| r.clone()).collect(),
        }
    }

    #[test]
    fn chain_reflexive_step() {
        let a = named("a", &one(1, 1));
        let steps = vec![ChainStep {
            level: 0,
            components: vec![component(&a, &[&a])],
            refined: a.clone(),
        }];
        let v = check_chain(&steps).unwrap();
        assert!(v.holds);
        assert!(v.cross_check.unwrap().holds);
    }

    #[test]
    fn chain_decomposition_against_whole() {
        // p = p1 ⊗ p2 with each part refined by q.
        let u = ExecutionUniverse::new(["a", "b"]).unwrap();
        let r = Rational::from;
        let p1 = Process::from_maps(&u, [("a", r(1)), ("b", r(1))], [("a", r(1))]).unwrap();
        let p2 = Process::from_maps(&u, [("a", r(1)), ("b", r(1))], [("b", r(1))]).unwrap();
        let q = Process::from_maps(&u, [("a", r(1))], [("a", r(1)), ("b", r(1))]).unwrap();
        let (p1, p2, q) = (named("p1", &p1), named("p2", &p2), named("q", &q));
        let steps = vec![ChainStep {
            level: 0,
            components: vec![component(&p1, &[&q]), component(&p2, &[&q])],
            refined: q.clone(),
        }];
        let v = check_chain(&steps).unwrap();
        assert!(v.holds && v.warnings.is_empty());
        let p = p1.process.product(&p2.process).unwrap();
        assert!(p.support_refines(&q.process).unwrap());
        assert!(v.cross_check.unwrap().holds);
    }

    #[test]
    fn chain_failure_names_component() {
        let good = named("good", &one(1, 1));
        let bad_target = named("t", &one(1, 1));
        let bad_repl = named("s", &one(1, 0));
        let steps = vec![ChainStep {
            level: 0,
            components: vec![
                component(&good, &[&good]),
                component(&bad_target, &[&bad_repl]),
            ],
            refined: named("next", &one(1, 0)),
        }];
        let v = check_chain(&steps).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::Component {
                level: 0,
                component: 2,
                label: "e0".into()
            })
        );
        assert_eq!(
            check_chain::<Rational>(&[]).unwrap_err(),
            EngineError::EmptyChain
        );
    }

    #[test]
    fn factorize_reports() {
        let u = ExecutionUniverse::numbered(2);
        let omega = Process::omega(&u);
        let f = factorize(&named("omega", &omega));
        assert_eq!(
            (f.robust.clone(), f.chaotic.clone()),
            (omega.clone(), omega)
        );
        assert!(f.reconstruction_exact && f.robust_confirmed && f.chaotic_confirmed);

        let f = factorize(&named("z", &one(0, 0)));
        assert!(!f.reconstruction_exact);
        assert_eq!(f.mismatched, ["e0"]);
        assert_eq!(f.warnings.len(), 1);
    }

    #[test]
    fn assertions() {
        let p = one(1, 0);
        let omega = one(1, 1);
        let ok = |kind, ops: &[Named<Rational>]| check_assertion(kind, ops).unwrap().holds;
        assert!(ok(
            AssertionKind::Refines,
            &[named("p", &p), named("o", &omega)]
        ));
        assert!(!ok(
            AssertionKind::Refines,
            &[named("o", &omega), named("p", &p)]
        ));
        assert!(!ok(AssertionKind::Robust, &[named("p", &p)]));
        assert!(ok(AssertionKind::Chaotic, &[named("p", &p)]));
        assert!(ok(AssertionKind::Total, &[named("p", &p)]));
        assert!(!ok(AssertionKind::Total, &[named("z", &one(0, 0))]));
        assert!(ok(AssertionKind::Equal, &[named("p", &p), named("p", &p)]));
        assert!(matches!(
            check_assertion(AssertionKind::Equal, &[named("p", &p)]),
            Err(EngineError::Arity {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert_eq!("support-refines".parse(), Ok(AssertionKind::SupportRefines));
    }

    #[test]
    fn verdict_json_shape() {
        let v = check_assertion(AssertionKind::Robust, &[named("p", &one(1, 0))]).unwrap();
        let json = v.to_json();
        assert_eq!(json["check"], "robust");
        assert_eq!(json["holds"], false);
        assert_eq!(json["level"], "membership");
        assert_eq!(json["witness"]["kind"], "execution");
        assert_eq!(json["witness"]["label"], "e0");
        assert!(json["warnings"].as_array().unwrap().is_empty());
    }
}
