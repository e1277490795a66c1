use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::level::Level;
use crate::membership::Membership;
use crate::process::FuzzyProcess;
use crate::scalar::Scalar;
use crate::universe::ExecutionUniverse;

use super::enumerate::{enumerate, DomainSpec, EnumerationDomain};
use super::laws::{Law, LawContext};
use super::HarnessError;

/// Default limit on evaluated tuples per law check.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

const CHUNK: u128 = 2048;

#[derive(Debug, Clone)]
pub struct HarnessConfig<T> {
    pub budget: u128,
    /// Membership assigned by product and sum on their vacuous clauses.
    pub vacuous: Membership<T>,
    pub counterexample_limit: usize,
}

impl<T: Scalar> Default for HarnessConfig<T> {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            vacuous: Membership::one(),
            counterexample_limit: 10,
        }
    }
}

impl<T: Scalar> HarnessConfig<T> {
    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn context(
        &self,
        universe: &Arc<ExecutionUniverse>,
        law: &Law<T>,
    ) -> Result<LawContext<T>, HarnessError> {
        let testers = if law.uses_testers {
            enumerate(
                &EnumerationDomain::crisp(Arc::clone(universe)).total(),
                self.budget,
            )?
            .collect()
        } else {
            Vec::new()
        };
        Ok(LawContext {
            universe: Arc::clone(universe),
            vacuous: self.vacuous.clone(),
            testers,
        })
    }

    /// Re-evaluates `law` on concrete arguments.
    pub fn replay(&self, law: &Law<T>, args: &[FuzzyProcess<T>]) -> Result<bool, HarnessError> {
        let universe = match args.first() {
            Some(p) => Arc::clone(p.universe()),
            None => return Err(HarnessError::MissingUniverse),
        };
        let ctx = self.context(&universe, law)?;
        let refs: Vec<&FuzzyProcess<T>> = args.iter().collect();
        Ok(law.holds(&ctx, &refs)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreconditionClass {
    Unconditional,
    TotalArgumentsOnly,
    Unknown,
}

impl fmt::Display for PreconditionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreconditionClass::Unconditional => "unconditional",
            PreconditionClass::TotalArgumentsOnly => "total-arguments-only",
            PreconditionClass::Unknown => "unknown",
        })
    }
}

/// Result of evaluating one law over the full Cartesian power of one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainOutcome<T> {
    pub domain: DomainSpec,
    pub tuples_checked: u128,
    pub failures: u128,
    /// First failing tuples in enumeration order, bounded by the configured limit.
    pub counterexamples: Vec<Vec<FuzzyProcess<T>>>,
}

impl<T> DomainOutcome<T> {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawReport<T> {
    pub law: &'static str,
    pub level: Level,
    pub arity: usize,
    pub passed: bool,
    pub precondition_class: PreconditionClass,
    pub outcomes: Vec<DomainOutcome<T>>,
}

impl<T> LawReport<T> {
    pub fn tuples_checked(&self) -> u128 {
        self.outcomes.iter().map(|o| o.tuples_checked).sum()
    }

    /// Counterexamples of all outcomes, in outcome order.
    pub fn counterexamples(&self) -> impl Iterator<Item = &Vec<FuzzyProcess<T>>> {
        self.outcomes.iter().flat_map(|o| o.counterexamples.iter())
    }

    pub fn outcome(&self, spec: &DomainSpec) -> Option<&DomainOutcome<T>> {
        self.outcomes.iter().find(|o| &o.domain == spec)
    }
}

struct ChunkResult<T> {
    failures: u128,
    counterexamples: Vec<Vec<FuzzyProcess<T>>>,
}

/// Evaluates `law` on every argument tuple drawn from `domain`.
pub fn evaluate<T: Scalar>(
    law: &Law<T>,
    domain: &EnumerationDomain,
    config: &HarnessConfig<T>,
) -> Result<DomainOutcome<T>, HarnessError> {
    let processes: Vec<FuzzyProcess<T>> = enumerate(domain, config.budget)?.collect();
    let n = processes.len() as u128;
    let arity = law.arity();
    let tuples = n
        .checked_pow(u32::try_from(arity).unwrap_or(u32::MAX))
        .unwrap_or(u128::MAX);
    let ctx = config.context(&domain.universe, law)?;
    let work = tuples.saturating_mul(ctx.testers.len().max(1) as u128);
    if work > config.budget {
        return Err(HarnessError::BudgetExceeded {
            what: format!("law {} on {}", law.id, domain.spec()),
            required: work,
            budget: config.budget,
        });
    }

    let chunks = tuples.div_ceil(CHUNK);
    let limit = config.counterexample_limit;
    let results: Vec<Result<ChunkResult<T>, HarnessError>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut out = ChunkResult {
                failures: 0,
                counterexamples: Vec::new(),
            };
            let mut args: Vec<&FuzzyProcess<T>> = Vec::with_capacity(arity);
            for t in c * CHUNK..((c + 1) * CHUNK).min(tuples) {
                decode(t, n, arity, &processes, &mut args);
                if !law.holds(&ctx, &args)? {
                    out.failures += 1;
                    if out.counterexamples.len() < limit {
                        out.counterexamples
                            .push(args.iter().map(|&p| p.clone()).collect());
                    }
                }
            }
            Ok(out)
        })
        .collect();

    let mut outcome = DomainOutcome {
        domain: domain.spec(),
        tuples_checked: tuples,
        failures: 0,
        counterexamples: Vec::new(),
    };
    for chunk in results {
        let chunk = chunk?;
        outcome.failures += chunk.failures;
        let room = limit - outcome.counterexamples.len();
        outcome
            .counterexamples
            .extend(chunk.counterexamples.into_iter().take(room));
    }
    Ok(outcome)
}

/// Mixed-radix decoding with the first argument most significant.
fn decode<'a, T>(
    mut t: u128,
    n: u128,
    arity: usize,
    processes: &'a [FuzzyProcess<T>],
    args: &mut Vec<&'a FuzzyProcess<T>>,
) {
    args.clear();
    args.resize(arity, &processes[0]);
    for slot in args.iter_mut().rev() {
        *slot = &processes[(t % n) as usize];
        t /= n;
    }
}

/// Checks `law` on `domain`.
///
/// The precondition class is derived by also evaluating the companion domain
/// (the total-only variant of an unrestricted domain, or vice versa) when the
/// requested domain alone cannot decide it. Only the requested domain's
/// outcome is reported.
pub fn check_law<T: Scalar>(
    law: &Law<T>,
    domain: &EnumerationDomain,
    config: &HarnessConfig<T>,
) -> Result<LawReport<T>, HarnessError> {
    let primary = evaluate(law, domain, config)?;
    let precondition_class = match (domain.total_only, primary.passed()) {
        (false, true) => PreconditionClass::Unconditional,
        (true, false) => PreconditionClass::Unknown,
        (false, false) => {
            if evaluate(law, &domain.clone().total(), config)?.passed() {
                PreconditionClass::TotalArgumentsOnly
            } else {
                PreconditionClass::Unknown
            }
        }
        (true, true) => {
            if evaluate(law, &domain.clone().unrestricted(), config)?.passed() {
                PreconditionClass::Unconditional
            } else {
                PreconditionClass::TotalArgumentsOnly
            }
        }
    };
    Ok(LawReport {
        law: law.id,
        level: law.level,
        arity: law.arity(),
        passed: primary.passed(),
        precondition_class,
        outcomes: vec![primary],
    })
}

/// Checks `law` on every listed domain and reports the strongest precondition
/// class consistent with all of them.
pub fn classify_over<T: Scalar>(
    law: &Law<T>,
    domains: &[DomainSpec],
    config: &HarnessConfig<T>,
) -> Result<LawReport<T>, HarnessError> {
    let outcomes = domains
        .iter()
        .map(|spec| evaluate(law, &spec.domain(), config))
        .collect::<Result<Vec<_>, _>>()?;
    let (total, unrestricted): (Vec<_>, Vec<_>) =
        outcomes.iter().partition(|o| o.domain.total_only);
    let precondition_class = if !total.iter().all(|o| o.passed()) {
        PreconditionClass::Unknown
    } else if !unrestricted.is_empty() && unrestricted.iter().all(|o| o.passed()) {
        PreconditionClass::Unconditional
    } else if !total.is_empty() {
        PreconditionClass::TotalArgumentsOnly
    } else {
        PreconditionClass::Unknown
    };
    Ok(LawReport {
        law: law.id,
        level: law.level,
        arity: law.arity(),
        passed: outcomes.iter().all(DomainOutcome::passed),
        precondition_class,
        outcomes,
    })
}

/// Universe sizes `1..=max_universe`, crisp and grid `grid_k`, each both
/// unrestricted and total-only.
pub fn classification_domains(max_universe: usize, grid_k: u32) -> Vec<DomainSpec> {
    let mut grids = vec![1];
    if grid_k != 1 {
        grids.push(grid_k);
    }
    let mut specs = Vec::new();
    for grid in grids {
        for universe_size in 1..=max_universe {
            for total_only in [false, true] {
                specs.push(DomainSpec {
                    universe_size,
                    grid,
                    total_only,
                });
            }
        }
    }
    specs
}

pub fn classify_preconditions<T: Scalar>(
    law: &Law<T>,
    max_universe: usize,
    grid_k: u32,
    config: &HarnessConfig<T>,
) -> Result<LawReport<T>, HarnessError> {
    classify_over(law, &classification_domains(max_universe, grid_k), config)
}
