use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::engine::{AssertionKind, ChainComponent, ChainStep, Named};
use crate::error::CoreError;
use crate::universe::ExecutionUniverse;
use crate::Process;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    /// `*`
    Product,
    /// `+`
    Sum,
    /// `|`
    Join,
    /// `&`
    Meet,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Product => '*',
            BinOp::Sum => '+',
            BinOp::Join => '|',
            BinOp::Meet => '&',
        }
    }

    /// Higher binds tighter.
    pub fn tier(self) -> u8 {
        match self {
            BinOp::Product | BinOp::Sum => 2,
            BinOp::Join | BinOp::Meet => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Name(String),
    Omega,
    Reflect(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Explicit parentheses; kept because they delimit chain components.
    Group(Box<Expr>),
}

impl Expr {
    /// Top-level `*` operands, left to right. Parentheses stop the flattening.
    pub fn components(&self) -> Vec<&Expr> {
        match self {
            Expr::Binary(BinOp::Product, lhs, rhs) => {
                let mut out = lhs.components();
                out.push(rhs);
                out
            }
            other => vec![other],
        }
    }

    /// Like [`components`](Self::components), but looks through one level of
    /// parentheses around the whole expression.
    pub fn factors(&self) -> Vec<&Expr> {
        match self {
            Expr::Group(inner) => inner.components(),
            other => other.components(),
        }
    }

    pub fn evaluate(&self, env: &Environment) -> Result<Process, CoreError> {
        Ok(match self {
            Expr::Name(name) => env
                .bindings
                .get(name)
                .cloned()
                .ok_or_else(|| CoreError::UnresolvedName(name.clone()))?,
            Expr::Omega => Process::omega(&env.universe),
            Expr::Reflect(inner) => inner.evaluate(env)?.reflect(),
            Expr::Group(inner) => inner.evaluate(env)?,
            Expr::Binary(op, lhs, rhs) => {
                let (l, r) = (lhs.evaluate(env)?, rhs.evaluate(env)?);
                match op {
                    BinOp::Product => l.product(&r)?,
                    BinOp::Sum => l.sum(&r)?,
                    BinOp::Join => l.join(&r)?,
                    BinOp::Meet => l.meet(&r)?,
                }
            }
        })
    }

    fn needs_parens_under(&self, parent: BinOp, right: bool) -> bool {
        match self {
            Expr::Binary(op, _, _) => {
                op.tier() < parent.tier()
                    || (op.tier() == parent.tier() && (right || *op != parent))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(name) => f.write_str(name),
            Expr::Omega => f.write_str("OMEGA"),
            Expr::Reflect(inner) => match **inner {
                Expr::Binary(..) => write!(f, "-({inner})"),
                _ => write!(f, "-{inner}"),
            },
            Expr::Group(inner) => write!(f, "({inner})"),
            Expr::Binary(op, lhs, rhs) => {
                let side = |e: &Expr, right: bool| {
                    if e.needs_parens_under(*op, right) {
                        format!("({e})")
                    } else {
                        e.to_string()
                    }
                };
                write!(
                    f,
                    "{} {} {}",
                    side(lhs, false),
                    op.symbol(),
                    side(rhs, true)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    /// Design inequality `p ⊑ q ⊗ r`.
    Solve {
        p: Expr,
        q: Expr,
    },
    Factor(Expr),
    Chain {
        name: String,
        levels: Vec<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Process {
        name: String,
        process: Process,
    },
    Let {
        name: String,
        expr: Expr,
    },
    Assert {
        kind: AssertionKind,
        args: Vec<Expr>,
    },
    Query(Query),
}

impl Statement {
    /// The statement as written in canonical form (one line, for reporting).
    pub fn headline(&self) -> String {
        match self {
            Statement::Process { name, .. } => format!("process {name}"),
            Statement::Let { name, expr } => format!("let {name} = {expr}"),
            Statement::Assert { kind, args } => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                format!("assert {kind} {}", args.join(" "))
            }
            Statement::Query(Query::Solve { p, q }) => format!("query solve {p} {q}"),
            Statement::Query(Query::Factor(p)) => format!("query factor {p}"),
            Statement::Query(Query::Chain { name, levels }) => {
                let levels: Vec<String> = levels.iter().map(ToString::to_string).collect();
                format!("query chain {name}: {}", levels.join(" => "))
            }
        }
    }
}

/// A parsed `.fps` file.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub universe: Arc<ExecutionUniverse>,
    pub statements: Vec<Statement>,
}

/// Name bindings visible at some point of a document.
#[derive(Debug, Clone)]
pub struct Environment {
    pub universe: Arc<ExecutionUniverse>,
    pub bindings: HashMap<String, Process>,
}

impl Environment {
    pub fn new(universe: Arc<ExecutionUniverse>) -> Self {
        Self {
            universe,
            bindings: HashMap::new(),
        }
    }

    /// Applies a process or let statement; other statements leave it unchanged.
    pub fn bind(&mut self, statement: &Statement) -> Result<(), CoreError> {
        match statement {
            Statement::Process { name, process } => {
                self.bindings.insert(name.clone(), process.clone());
            }
            Statement::Let { name, expr } => {
                let value = expr.evaluate(self)?;
                self.bindings.insert(name.clone(), value);
            }
            Statement::Assert { .. } | Statement::Query(_) => {}
        }
        Ok(())
    }

    pub fn named(&self, expr: &Expr) -> Result<Named<crate::Rational>, CoreError> {
        Ok(Named::new(expr.to_string(), expr.evaluate(self)?))
    }

    /// Builds the engine's chain steps for `levels`.
    ///
    /// Level `i + 1` must either have one top-level `*` operand per component
    /// of level `i` (pairwise refinement), or a single operand that every
    /// component is compared against; a single-component level is compared
    /// against all operands of the next.
    pub fn chain_steps(
        &self,
        levels: &[Expr],
    ) -> Result<Vec<ChainStep<crate::Rational>>, CoreError> {
        let mut steps = Vec::with_capacity(levels.len().saturating_sub(1));
        for (i, pair) in levels.windows(2).enumerate() {
            let targets = pair[0].components();
            let groups = pair[1].components();
            let mut components = Vec::with_capacity(targets.len());
            for (j, target) in targets.iter().enumerate() {
                let replacements: Vec<&Expr> = if targets.len() == groups.len() {
                    groups[j].factors()
                } else if targets.len() == 1 {
                    groups.clone()
                } else {
                    vec![&pair[1]]
                };
                components.push(ChainComponent {
                    target: self.named(target)?,
                    replacements: replacements
                        .into_iter()
                        .map(|e| self.named(e))
                        .collect::<Result<_, _>>()?,
                });
            }
            steps.push(ChainStep {
                level: i,
                components,
                refined: self.named(&pair[1])?,
            });
        }
        Ok(steps)
    }
}

/// Whether a chain step between these two levels can be formed.
pub(crate) fn chain_shapes_compatible(current: &Expr, next: &Expr) -> bool {
    let (m, n) = (current.components().len(), next.components().len());
    m == n || m == 1 || n == 1
}

fn write_map(out: &mut String, keyword: &str, labels: &[String], values: &[crate::Grade]) {
    let entries: Vec<String> = labels
        .iter()
        .zip(values)
        .filter(|(_, v)| v.is_positive())
        .map(|(l, v)| format!("{l}={v}"))
        .collect();
    if !entries.is_empty() {
        let _ = writeln!(out, "  {keyword} {}", entries.join(" "));
    }
}

impl Document {
    /// Canonical text: universe order within maps, lowest-term rationals,
    /// zero entries and empty maps omitted.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "universe {}", self.universe.labels().join(" "));
        for statement in &self.statements {
            match statement {
                Statement::Process { name, process } => {
                    let _ = writeln!(out, "process {name}");
                    write_map(&mut out, "delta", self.universe.labels(), process.delta());
                    write_map(&mut out, "gamma", self.universe.labels(), process.gamma());
                    out.push_str("end\n");
                }
                other => {
                    let _ = writeln!(out, "{}", other.headline());
                }
            }
        }
        out
    }

    /// Environment after every binding of the document.
    pub fn environment(&self) -> Result<Environment, CoreError> {
        let mut env = Environment::new(Arc::clone(&self.universe));
        for statement in &self.statements {
            env.bind(statement)?;
        }
        Ok(env)
    }

    pub fn to_json(&self) -> Value {
        let statements: Vec<Value> = self
            .statements
            .iter()
            .map(|s| match s {
                Statement::Process { name, process } => {
                    json!({"type": "process", "name": name, "process": process})
                }
                Statement::Let { name, expr } => json!({"type": "let", "name": name, "expr": expr.to_string()}),
                Statement::Assert { kind, args } => json!({
                    "type": "assert",
                    "kind": kind,
                    "args": args.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
                Statement::Query(Query::Solve { p, q }) => {
                    json!({"type": "query", "query": "solve", "args": [p.to_string(), q.to_string()]})
                }
                Statement::Query(Query::Factor(p)) => {
                    json!({"type": "query", "query": "factor", "args": [p.to_string()]})
                }
                Statement::Query(Query::Chain { name, levels }) => json!({
                    "type": "query",
                    "query": "chain",
                    "name": name,
                    "levels": levels.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            })
            .collect();
        json!({"universe": self.universe.labels(), "statements": statements})
    }
}
