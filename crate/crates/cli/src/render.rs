//! Output rendering for proofs, dead ends, interpolation traces, and models.

use dkinterp_core::{
    formula_to_latex, goal_to_latex, model_to_dot, model_to_json, Goal, InterpolationTrace,
    ProofTree, PseudoModel, TraceNode,
};

fn escape_dot(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Indented one-line-per-node proof listing, premises under their conclusion.
pub fn proof_text(tree: &ProofTree) -> String {
    fn walk(node: &ProofTree, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{}  [{}]\n", node.conclusion, node.rule));
        for premise in &node.premises {
            walk(premise, depth + 1, out);
        }
    }
    let mut out = String::new();
    walk(tree, 0, &mut out);
    out
}

/// Graphviz rendering of a proof tree, edges from conclusions to premises.
pub fn proof_dot(tree: &ProofTree) -> String {
    fn walk(node: &ProofTree, id: &mut usize, out: &mut String) -> usize {
        let me = *id;
        *id += 1;
        out.push_str(&format!(
            "  n{me} [label=\"{}\\n[{}]\"];\n",
            escape_dot(&node.conclusion.to_string()),
            node.rule
        ));
        for premise in &node.premises {
            let child = walk(premise, id, out);
            out.push_str(&format!("  n{me} -> n{child};\n"));
        }
        me
    }
    let mut out = String::from("digraph proof {\n  node [shape=box];\n");
    let mut id = 0;
    walk(tree, &mut id, &mut out);
    out.push_str("}\n");
    out
}

/// Plain-text listing of the dead ends an exhausted search bottomed out at.
pub fn dead_ends_text(dead_ends: &[Goal]) -> String {
    let mut out = String::from("not derivable\ncritical dead ends:\n");
    for goal in dead_ends {
        out.push_str(&format!("  {goal}\n"));
    }
    out
}

pub fn dead_ends_latex(dead_ends: &[Goal]) -> String {
    let mut out = String::from("% not derivable; critical dead ends follow\n");
    for goal in dead_ends {
        out.push_str(&format!("\\[ {} \\]\n", goal_to_latex(goal)));
    }
    out
}

/// Indented listing of an elimination trace: table line, goal, and result.
pub fn trace_text(trace: &InterpolationTrace) -> String {
    fn walk(node: &TraceNode, depth: usize, out: &mut String) {
        let stored = matches!(node.goal, Goal::Stored(_));
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!(
            "line {}: {}  ~>  {}\n",
            node.line.label(stored),
            node.goal,
            node.result
        ));
        for child in &node.children {
            walk(child, depth + 1, out);
        }
    }
    let mut out = String::new();
    walk(&trace.root, 0, &mut out);
    out
}

/// Graphviz rendering of an elimination trace.
pub fn trace_dot(trace: &InterpolationTrace) -> String {
    fn walk(node: &TraceNode, id: &mut usize, out: &mut String) -> usize {
        let me = *id;
        *id += 1;
        let stored = matches!(node.goal, Goal::Stored(_));
        out.push_str(&format!(
            "  n{me} [label=\"line {}\\n{}\\n{}\"];\n",
            node.line.label(stored),
            escape_dot(&node.goal.to_string()),
            escape_dot(&node.result.to_string())
        ));
        for child in &node.children {
            let c = walk(child, id, out);
            out.push_str(&format!("  n{me} -> n{c};\n"));
        }
        me
    }
    let mut out = String::from("digraph trace {\n  node [shape=box];\n");
    let mut id = 0;
    walk(&trace.root, &mut id, &mut out);
    out.push_str("}\n");
    out
}

/// Human-readable model listing: states, valuation, relations, witness.
pub fn model_text(m: &PseudoModel, witness: usize) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "countermodel: states {}, falsifying state w{}\n",
        m.state_count(),
        witness
    ));
    for state in m.states() {
        let mut true_vars: Vec<&str> = m
            .valuation()
            .iter()
            .filter(|(_, states)| states.contains(&state))
            .map(|(name, _)| name.as_str())
            .collect();
        true_vars.sort_unstable();
        out.push_str(&format!("  w{state}: {{{}}}\n", true_vars.join(", ")));
    }
    for group in m.universe().groups() {
        let pairs: Vec<String> = m
            .relation(&group)
            .map(|set| set.iter().map(|(x, y)| format!("(w{x},w{y})")).collect())
            .unwrap_or_default();
        out.push_str(&format!("  R_{{{group}}}: {{{}}}\n", pairs.join(", ")));
    }
    out
}

pub fn model_json_with_witness(m: &PseudoModel, witness: usize) -> serde_json::Value {
    let mut value = model_to_json(m);
    value["witness"] = serde_json::json!(witness);
    value
}

pub fn model_latex(m: &PseudoModel, witness: usize) -> String {
    let mut out = String::from("\\begin{itemize}\n");
    out.push_str(&format!(
        "\\item states: $w_0,\\ldots,w_{{{}}}$; falsifying state $w_{{{witness}}}$\n",
        m.state_count().saturating_sub(1)
    ));
    for (name, states) in m.valuation() {
        let listed: Vec<String> = states.iter().map(|s| format!("w_{{{s}}}")).collect();
        out.push_str(&format!("\\item $V({name}) = \\{{{}\\}}$\n", listed.join(", ")));
    }
    for group in m.universe().groups() {
        let pairs: Vec<String> = m
            .relation(&group)
            .map(|set| {
                set.iter().map(|(x, y)| format!("(w_{{{x}}},w_{{{y}}})")).collect()
            })
            .unwrap_or_default();
        let members = group.members().join(",");
        out.push_str(&format!(
            "\\item $R_{{\\{{{members}\\}}}} = \\{{{}\\}}$\n",
            pairs.join(", ")
        ));
    }
    out.push_str("\\end{itemize}\n");
    out
}

pub fn model_dot(m: &PseudoModel) -> String {
    model_to_dot(m)
}

pub fn formula_latex(f: &dkinterp_core::Formula) -> String {
    formula_to_latex(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dkinterp_core::{parse_sequent, AgentUniverse, Logic, Prover, Verdict};

    #[test]
    fn proof_renderings_cover_every_node() {
        let u = AgentUniverse::new(["a"]).unwrap();
        let s = parse_sequent("p & q => q & p", &u).unwrap();
        let mut prover = Prover::new(Logic::K);
        let Verdict::Derivable(tree) = prover.prove(&s).unwrap() else {
            panic!("conjunction commutes");
        };
        let text = proof_text(&tree);
        assert_eq!(text.lines().count(), tree.node_count());
        assert!(text.starts_with("p & q => q & p"));
        let dot = proof_dot(&tree);
        assert!(dot.starts_with("digraph proof {"));
        assert_eq!(dot.matches("label=").count(), tree.node_count());
    }

    #[test]
    fn dead_end_listing_names_every_goal() {
        let u = AgentUniverse::new(["a"]).unwrap();
        let s = parse_sequent("=> D{a}false -> false", &u).unwrap();
        let mut prover = Prover::new(Logic::K);
        let Verdict::NotDerivable(deads) = prover.prove(&s).unwrap() else {
            panic!("deadlock-freedom is not a K theorem");
        };
        let text = dead_ends_text(&deads);
        assert!(text.starts_with("not derivable\n"));
        assert_eq!(text.lines().count(), 2 + deads.len());
    }
}
