use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fpcheck_core::dsl::{self, Document, Environment, Query, Statement};
use fpcheck_core::engine::{self, FactorReport, Named, Verdict};
use fpcheck_core::harness::manifest::{diff, run_laws, Envelope};
use fpcheck_core::harness::{HarnessConfig, DEFAULT_BUDGET};
use fpcheck_core::Rational;

/// Refinement checker for fuzzy process specifications.
///
/// Exit codes: 0 success, 1 a check failed (or manifest drift), 2 usage,
/// parse, or budget errors.
#[derive(Parser)]
#[command(name = "fpcheck", version)]
struct Cli {
    /// Tuple budget for exhaustive enumeration.
    #[arg(long, env = "FPCHECK_BUDGET", global = true)]
    budget: Option<u128>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every assertion and query of a `.fps` file.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the law harness and compare against (or write) the laws manifest.
    Laws(LawsArgs),
    /// Solve the design inequality `p ⊑ q ⊗ r` for the least `r`.
    Solve {
        file: PathBuf,
        /// Expression for the overall specification.
        #[arg(long)]
        p: String,
        /// Expression for the existing component.
        #[arg(long)]
        q: String,
        #[arg(long)]
        json: bool,
    },
    /// Split a process into its robust and chaotic factors.
    Factor {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct LawsArgs {
    /// Largest universe size checked (custom envelope).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_universe: Option<u32>,
    /// Membership grid `{0, 1/k, ..., 1}` (custom envelope).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    grid: Option<u32>,
    /// Only enumerate total processes.
    #[arg(long)]
    total_only: bool,
    /// Write the manifest instead of comparing against it.
    #[arg(long)]
    write: bool,
    #[arg(long, default_value = "laws.manifest")]
    manifest: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let result = match cli.command {
        Command::Check { file, json } => cmd_check(&file, json),
        Command::Laws(args) => cmd_laws(&args, budget),
        Command::Solve { file, p, q, json } => cmd_solve(&file, &p, &q, json),
        Command::Factor { file, p, json } => cmd_factor(&file, &p, json),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Document> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    dsl::parse(&text).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn operand(env: &Environment, text: &str, flag: &str) -> Result<Named<Rational>> {
    let expr = dsl::parse_expression(text, env).map_err(|e| anyhow!("{flag} {e}"))?;
    Ok(env.named(&expr)?)
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("JSON values always serialize")
    );
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Text and JSON renderings of one evaluated statement.
struct Outcome {
    lines: Vec<String>,
    json: Value,
}

fn verdict_lines(headline: &str, verdict: &Verdict<Rational>) -> Vec<String> {
    let mut lines = vec![match &verdict.witness {
        None => format!("ok    {headline}"),
        Some(w) => format!("FAIL  {headline}  [witness: {w}]"),
    }];
    if let Some(cross) = &verdict.cross_check {
        let status = if cross.holds { "holds" } else { "fails" };
        lines.push(format!("      cross-check {}: {status}", cross.name));
    }
    for warning in &verdict.warnings {
        lines.push(format!("      warning: {warning}"));
    }
    lines
}

fn solve_outcome(headline: &str, p: &Named<Rational>, q: &Named<Rational>) -> Result<Outcome> {
    let solution = engine::solve_design_inequality(p, q)?;
    let mut lines = vec![
        format!("query {headline}"),
        format!("      r_min = {}", solution.r_min),
    ];
    lines.extend(
        verdict_lines("verification: p ⊑ q ⊗ r_min", &solution.verification)
            .into_iter()
            .map(|l| format!("      {}", l.trim_start())),
    );
    let json = json!({
        "type": "query",
        "query": "solve",
        "statement": headline,
        "p": p.name,
        "q": q.name,
        "r_min": solution.r_min,
        "verification": solution.verification.to_json(),
    });
    Ok(Outcome { lines, json })
}

fn factor_outcome(headline: &str, p: &Named<Rational>) -> Outcome {
    let FactorReport {
        robust,
        chaotic,
        robust_confirmed,
        chaotic_confirmed,
        reconstruction_exact,
        mismatched,
        warnings,
    } = engine::factorize(p);
    let reconstruction = if reconstruction_exact {
        "exact"
    } else {
        "inexact"
    };
    let mut lines = vec![
        format!("query {headline}"),
        format!("      robust  = {robust}"),
        format!("      chaotic = {chaotic}"),
    ];
    if reconstruction_exact {
        lines.push("      reconstruction: exact".to_owned());
    } else {
        lines.push(format!(
            "      reconstruction: inexact (labels: {})",
            mismatched.join(", ")
        ));
    }
    for warning in &warnings {
        lines.push(format!("      warning: {warning}"));
    }
    let json = json!({
        "type": "query",
        "query": "factor",
        "statement": headline,
        "p": p.name,
        "robust": robust,
        "chaotic": chaotic,
        "robust_confirmed": robust_confirmed,
        "chaotic_confirmed": chaotic_confirmed,
        "reconstruction": reconstruction,
        "mismatched": mismatched,
        "warnings": warnings,
    });
    Outcome { lines, json }
}

fn cmd_check(path: &Path, as_json: bool) -> Result<ExitCode> {
    let doc = load(path)?;
    let mut env = Environment::new(doc.universe.clone());
    let mut outcomes = Vec::new();
    let (mut asserted, mut failed) = (0usize, 0usize);

    for statement in &doc.statements {
        env.bind(statement)?;
        let headline = statement.headline();
        let outcome = match statement {
            Statement::Process { .. } | Statement::Let { .. } => continue,
            Statement::Assert { kind, args } => {
                let operands = args
                    .iter()
                    .map(|e| env.named(e))
                    .collect::<Result<Vec<_>, _>>()?;
                let verdict = engine::check_assertion(*kind, &operands)?;
                asserted += 1;
                if !verdict.holds {
                    failed += 1;
                }
                Outcome {
                    lines: verdict_lines(&headline, &verdict),
                    json: json!({
                        "type": "assert",
                        "statement": headline,
                        "kind": kind,
                        "verdict": verdict.to_json(),
                    }),
                }
            }
            Statement::Query(Query::Solve { p, q }) => {
                let headline = headline.trim_start_matches("query ");
                solve_outcome(headline, &env.named(p)?, &env.named(q)?)?
            }
            Statement::Query(Query::Factor(p)) => {
                factor_outcome(headline.trim_start_matches("query "), &env.named(p)?)
            }
            Statement::Query(Query::Chain { name, levels }) => {
                let verdict = engine::check_chain(&env.chain_steps(levels)?)?;
                Outcome {
                    lines: verdict_lines(&headline, &verdict),
                    json: json!({
                        "type": "query",
                        "query": "chain",
                        "statement": headline,
                        "name": name,
                        "verdict": verdict.to_json(),
                    }),
                }
            }
        };
        outcomes.push(outcome);
    }

    let all_hold = failed == 0;
    if as_json {
        print_json(&json!({
            "file": path.display().to_string(),
            "universe": doc.universe.labels(),
            "results": outcomes.iter().map(|o| &o.json).collect::<Vec<_>>(),
            "assertions": asserted,
            "failed": failed,
            "all_hold": all_hold,
        }));
    } else {
        for outcome in &outcomes {
            for line in &outcome.lines {
                println!("{line}");
            }
        }
        println!(
            "{asserted} assertion(s): {} hold, {failed} fail",
            asserted - failed
        );
    }
    Ok(exit(all_hold))
}

fn cmd_solve(path: &Path, p: &str, q: &str, as_json: bool) -> Result<ExitCode> {
    let env = load(path)?.environment()?;
    let (p, q) = (operand(&env, p, "--p")?, operand(&env, q, "--q")?);
    let headline = format!("solve {} {}", p.name, q.name);
    let outcome = solve_outcome(&headline, &p, &q)?;
    emit(&outcome, as_json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_factor(path: &Path, p: &str, as_json: bool) -> Result<ExitCode> {
    let env = load(path)?.environment()?;
    let p = operand(&env, p, "--p")?;
    let outcome = factor_outcome(&format!("factor {}", p.name), &p);
    emit(&outcome, as_json);
    Ok(ExitCode::SUCCESS)
}

fn emit(outcome: &Outcome, as_json: bool) {
    if as_json {
        print_json(&outcome.json);
    } else {
        for line in &outcome.lines {
            println!("{line}");
        }
    }
}

fn cmd_laws(args: &LawsArgs, budget: u128) -> Result<ExitCode> {
    let envelope = if args.max_universe.is_none() && args.grid.is_none() && !args.total_only {
        Envelope::Default
    } else {
        Envelope::Custom {
            max_universe: args.max_universe.unwrap_or(2) as usize,
            grid: args.grid.unwrap_or(2),
            total_only: args.total_only,
        }
    };
    let config = HarnessConfig::<Rational>::default().with_budget(budget);
    let manifest = run_laws(envelope, &config)?;
    let rendered = manifest.render();
    print!("{}", manifest.summary());

    if args.write {
        fs::write(&args.manifest, &rendered)
            .with_context(|| format!("cannot write {}", args.manifest.display()))?;
        println!("wrote {}", args.manifest.display());
        return Ok(ExitCode::SUCCESS);
    }
    let expected = fs::read_to_string(&args.manifest).with_context(|| {
        format!(
            "cannot read manifest {} (use --write to create it)",
            args.manifest.display()
        )
    })?;
    match diff(&expected, &rendered) {
        None => {
            println!("manifest matches {}", args.manifest.display());
            Ok(ExitCode::SUCCESS)
        }
        Some(d) => {
            println!("manifest drift against {}:", args.manifest.display());
            print!("{d}");
            Ok(ExitCode::from(1))
        }
    }
}
