//! Subcommand bodies. Each returns rendered output plus an exit status:
//! 0 for the affirmative verdict, 1 for the negative one, 2 for tool errors.

use dkinterp_core::{
    a_formula, a_formula_t, check_proof, countermodel, parse_formula, parse_sequent,
    post_interpolant, pre_interpolant, proof_to_json, proof_to_latex, trace_to_json,
    verify_interpolant, CountermodelError, ElimTarget, Formula, FormulaMultiset,
    InterpolationError, InterpolationTrace, Logic, Prover, Sequent, TSequent, Verdict,
};

use crate::config::{OutputFormat, RandomCorpusSpec, SessionConfig};
use crate::render;
use crate::selftest;

/// What a subcommand produced: process exit status and both output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        CommandOutput { exit: 0, stdout, stderr: String::new() }
    }

    fn negative(stdout: String) -> Self {
        CommandOutput { exit: 1, stdout, stderr: String::new() }
    }

    fn error(message: impl Into<String>) -> Self {
        let mut text = message.into();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        CommandOutput { exit: 2, stdout: String::new(), stderr: text }
    }
}

/// Decides a sequent and renders the proof or the dead ends. Every emitted
/// proof is re-validated by the independent checker first.
pub fn cmd_prove(cfg: &SessionConfig, input: &str) -> CommandOutput {
    let sequent = match parse_sequent(input, &cfg.universe) {
        Ok(s) => s,
        Err(e) => return CommandOutput::error(format!("parse error: {e}")),
    };
    let mut prover = Prover::with_budget(cfg.logic, cfg.budget);
    match prover.prove(&sequent) {
        Err(e) => CommandOutput::error(e.to_string()),
        Ok(Verdict::Derivable(tree)) => {
            if let Err(e) = check_proof(cfg.logic, &tree) {
                return CommandOutput::error(format!(
                    "internal error: emitted proof failed re-checking: {e}"
                ));
            }
            let stats = prover.last_stats();
            let stdout = match cfg.format {
                OutputFormat::Text => format!("derivable\n{}", render::proof_text(&tree)),
                OutputFormat::Json => {
                    let value = serde_json::json!({
                        "verdict": "derivable",
                        "sequent": sequent.to_string(),
                        "proof": proof_to_json(&tree),
                        "nodes_expanded": stats.nodes_expanded,
                    });
                    format!("{value:#}\n")
                }
                OutputFormat::Latex => proof_to_latex(&tree),
                OutputFormat::Dot => render::proof_dot(&tree),
            };
            CommandOutput::ok(stdout)
        }
        Ok(Verdict::NotDerivable(dead_ends)) => {
            let stdout = match cfg.format {
                OutputFormat::Text => render::dead_ends_text(&dead_ends),
                OutputFormat::Json => {
                    let value = serde_json::json!({
                        "verdict": "not_derivable",
                        "sequent": sequent.to_string(),
                        "dead_ends": dead_ends
                            .iter()
                            .map(|g| g.to_string())
                            .collect::<Vec<_>>(),
                    });
                    format!("{value:#}\n")
                }
                OutputFormat::Latex => render::dead_ends_latex(&dead_ends),
                OutputFormat::Dot => {
                    let mut out = String::from("digraph dead_ends {\n  node [shape=box];\n");
                    for (i, goal) in dead_ends.iter().enumerate() {
                        out.push_str(&format!(
                            "  n{i} [label=\"{}\"];\n",
                            goal.to_string().replace('"', "\\\"")
                        ));
                    }
                    out.push_str("}\n");
                    out
                }
            };
            CommandOutput::negative(stdout)
        }
    }
}

/// Which elimination the interpolate command performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpolateMode {
    /// One (variable, agent) pair eliminated from a sequent.
    A,
    /// Strongest known consequence of a formula, over variable and agent lists.
    Pre,
    /// Weakest known antecedent of a formula, over variable and agent lists.
    Post,
}

/// Flags of the interpolate command, mode plus elimination targets.
#[derive(Debug, Clone)]
pub struct InterpolateRequest {
    pub mode: InterpolateMode,
    pub var: Option<String>,
    pub agent: Option<String>,
    pub vars: Vec<String>,
    pub agents_elim: Vec<String>,
    pub verify: bool,
}

/// Eliminates one (variable, agent) pair from a sequent, routing through the
/// store-based table when the logic calls for it.
pub fn eliminate_pair(
    prover: &mut Prover,
    target: &ElimTarget,
    sequent: &Sequent,
) -> Result<(Formula, InterpolationTrace), dkinterp_core::ProveError> {
    if prover.logic().uses_tsequents() {
        let t = TSequent::plain(sequent.antecedent.clone(), sequent.succedent.clone());
        a_formula_t(prover, target, &t)
    } else {
        a_formula(prover, target, sequent)
    }
}

fn render_formula_result(
    format: OutputFormat,
    result: &Formula,
    trace: Option<&InterpolationTrace>,
    verification: Option<&str>,
) -> String {
    match format {
        OutputFormat::Text => {
            let mut out = format!("{result}\n");
            if let Some(v) = verification {
                out.push_str(v);
            }
            out
        }
        OutputFormat::Json => {
            let mut value = serde_json::json!({ "formula": result.to_string() });
            if let Some(t) = trace {
                value["trace"] = trace_to_json(t);
            }
            if let Some(v) = verification {
                value["verification"] = serde_json::json!(v.trim_end());
            }
            format!("{value:#}\n")
        }
        OutputFormat::Latex => format!("\\[ {} \\]\n", render::formula_latex(result)),
        OutputFormat::Dot => match trace {
            Some(t) => render::trace_dot(t),
            None => format!("// {result}\n"),
        },
    }
}

/// Synthesizes the variable-and-agent eliminant of a sequent (mode `a`) or
/// the pre/post interpolants of a formula, optionally verifying the result.
pub fn cmd_interpolate(cfg: &SessionConfig, req: &InterpolateRequest, input: &str) -> CommandOutput {
    for agent in req.agent.iter().chain(req.agents_elim.iter()) {
        if !cfg.universe.contains(agent) {
            return CommandOutput::error(format!("unknown agent `{agent}`"));
        }
    }
    match req.mode {
        InterpolateMode::A => {
            let (Some(var), Some(agent)) = (req.var.as_ref(), req.agent.as_ref()) else {
                return CommandOutput::error("mode `a` needs --var and --agent");
            };
            let sequent = match parse_sequent(input, &cfg.universe) {
                Ok(s) => s,
                Err(e) => return CommandOutput::error(format!("parse error: {e}")),
            };
            let target = ElimTarget::new(var.clone(), agent.clone());
            let mut prover = Prover::with_budget(cfg.logic, cfg.budget);
            let (result, trace) = match eliminate_pair(&mut prover, &target, &sequent) {
                Ok(pair) => pair,
                Err(e) => return CommandOutput::error(e.to_string()),
            };
            let verification = if req.verify {
                match verify_interpolant(&mut prover, &target, &sequent, &result, &[]) {
                    Err(e) => return CommandOutput::error(e.to_string()),
                    Ok(report) => {
                        if !report.all_ok() {
                            return CommandOutput::error(format!(
                                "verification failed: vocabulary_ok={} implication_ok={}",
                                report.vocabulary_ok, report.implication_ok
                            ));
                        }
                        Some("verified: vocabulary ok, implication ok\n".to_string())
                    }
                }
            } else {
                None
            };
            CommandOutput::ok(render_formula_result(
                cfg.format,
                &result,
                Some(&trace),
                verification.as_deref(),
            ))
        }
        InterpolateMode::Pre | InterpolateMode::Post => {
            let alpha = match parse_formula(input, &cfg.universe) {
                Ok(f) => f,
                Err(e) => return CommandOutput::error(format!("parse error: {e}")),
            };
            let mut prover = Prover::with_budget(cfg.logic, cfg.budget);
            let outcome = if req.mode == InterpolateMode::Pre {
                pre_interpolant(&mut prover, &alpha, &req.vars, &req.agents_elim)
            } else {
                post_interpolant(&mut prover, &alpha, &req.vars, &req.agents_elim)
            };
            let result = match outcome {
                Ok(f) => f,
                Err(InterpolationError::EmptyElimination) => {
                    return CommandOutput::error(
                        "pre/post interpolation needs nonempty --vars and --agents-elim lists",
                    )
                }
                Err(InterpolationError::Prove(e)) => return CommandOutput::error(e.to_string()),
            };
            let verification = if req.verify {
                match verify_pre_post(&mut prover, req, &alpha, &result) {
                    Ok(line) => Some(line),
                    Err(e) => return CommandOutput::error(e),
                }
            } else {
                None
            };
            CommandOutput::ok(render_formula_result(
                cfg.format,
                &result,
                None,
                verification.as_deref(),
            ))
        }
    }
}

/// Pre interpolants must imply the source; post interpolants must be implied
/// by it. Either way the result must avoid every eliminated symbol while
/// staying inside the source's vocabulary.
fn verify_pre_post(
    prover: &mut Prover,
    req: &InterpolateRequest,
    alpha: &Formula,
    result: &Formula,
) -> Result<String, String> {
    let vocab = result.vocab();
    let source = alpha.vocab();
    for var in &req.vars {
        if vocab.vars.contains(var) {
            return Err(format!("verification failed: eliminated variable `{var}` survives"));
        }
    }
    for agent in &req.agents_elim {
        if vocab.agents.contains(agent) {
            return Err(format!("verification failed: eliminated agent `{agent}` survives"));
        }
    }
    if !vocab.vars.iter().all(|v| source.vars.contains(v))
        || !vocab.agents.iter().all(|a| source.agents.contains(a))
    {
        return Err("verification failed: result leaves the source vocabulary".to_string());
    }
    let (antecedent, succedent, direction) = if req.mode == InterpolateMode::Pre {
        (result.clone(), alpha.clone(), "pre implies source")
    } else {
        (alpha.clone(), result.clone(), "source implies post")
    };
    let implication = Sequent::new(
        FormulaMultiset::singleton(antecedent),
        FormulaMultiset::singleton(succedent),
    );
    match prover.prove(&implication) {
        Err(e) => Err(e.to_string()),
        Ok(v) if v.is_derivable() => Ok(format!("verified: vocabulary ok, {direction}\n")),
        Ok(_) => Err(format!("verification failed: {direction} is not derivable")),
    }
}

/// Builds and renders a finite countermodel for an underivable sequent.
pub fn cmd_countermodel(cfg: &SessionConfig, input: &str) -> CommandOutput {
    let sequent = match parse_sequent(input, &cfg.universe) {
        Ok(s) => s,
        Err(e) => return CommandOutput::error(format!("parse error: {e}")),
    };
    let mut prover = Prover::with_budget(cfg.logic, cfg.budget);
    match countermodel(&mut prover, &cfg.universe, &sequent) {
        Ok((model, witness)) => {
            let stdout = match cfg.format {
                OutputFormat::Text => render::model_text(&model, witness),
                OutputFormat::Json => {
                    format!("{:#}\n", render::model_json_with_witness(&model, witness))
                }
                OutputFormat::Latex => render::model_latex(&model, witness),
                OutputFormat::Dot => render::model_dot(&model),
            };
            CommandOutput::ok(stdout)
        }
        Err(CountermodelError::Derivable) => {
            CommandOutput::negative("derivable; no countermodel exists\n".to_string())
        }
        Err(e) => CommandOutput::error(e.to_string()),
    }
}

/// Runs the seeded self-test suites and prints the machine-readable report.
pub fn cmd_selftest(cfg: &SessionConfig, spec: &RandomCorpusSpec) -> CommandOutput {
    let (report, pass) = selftest::run(cfg, spec);
    let stdout = format!("{report:#}\n");
    if pass {
        CommandOutput::ok(stdout)
    } else {
        CommandOutput { exit: 1, stdout, stderr: String::new() }
    }
}

/// Logics in the order the suites sweep them.
pub const ALL_LOGICS: [Logic; 3] = [Logic::K, Logic::Kd, Logic::KtPlus];
