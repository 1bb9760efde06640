use std::fmt::Write as _;

use serde_json::json;

use super::{ExploreReport, GraphDump, Step};
use crate::ir::{print_interaction, Signature};
use crate::traces::display_multitrace;

fn step_label(sig: &Signature, step: &Step) -> String {
    match step {
        Step::Execute(a, p) => format!("{}@{}", sig.display_action(*a), p),
        Step::Remove(h) => {
            let names: Vec<&str> = h.iter().map(|l| sig.lifeline_name(*l)).collect();
            format!("rmv{{{}}}", names.join(","))
        }
        Step::Ok => "ok".to_string(),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the recorded graph as a Graphviz digraph, or `None` when the
/// report was produced without `record_graph`.
pub fn export_dot(report: &ExploreReport) -> Option<String> {
    let g: &GraphDump = report.graph.as_ref()?;
    let sig = &g.signature;
    let mut out = String::from("digraph analysis {\n  node [shape=box, fontname=\"monospace\"];\n");
    for (id, dv) in g.vertices.iter().enumerate() {
        let label = format!(
            "{}\\n{}",
            escape(&print_interaction(sig, &dv.vertex.interaction)),
            escape(&display_multitrace(sig, &dv.vertex.mtrace))
        );
        let mut attrs = format!("label=\"{label}\"");
        if dv.loc_failed {
            attrs.push_str(", color=orange, style=dashed");
        } else if dv.dead {
            attrs.push_str(", color=red, style=bold");
        }
        let _ = writeln!(out, "  v{id} [{attrs}];");
    }
    if g.edges.iter().any(|(_, to, _)| to.is_none()) {
        out.push_str("  ok [shape=doublecircle, label=\"Ok\", color=darkgreen];\n");
    }
    for (from, to, step) in &g.edges {
        let target = to.map_or_else(|| "ok".to_string(), |t| format!("v{t}"));
        let _ = writeln!(out, "  v{from} -> {target} [label=\"{}\"];", escape(&step_label(sig, step)));
    }
    out.push_str("}\n");
    Some(out)
}

/// One JSON object per line: every vertex, then every edge.
pub fn export_jsonl(report: &ExploreReport) -> Option<String> {
    let g = report.graph.as_ref()?;
    let sig = &g.signature;
    let mut out = String::new();
    for (id, dv) in g.vertices.iter().enumerate() {
        let line = json!({
            "kind": "vertex",
            "id": id,
            "interaction": print_interaction(sig, &dv.vertex.interaction),
            "mtrace": display_multitrace(sig, &dv.vertex.mtrace),
            "dead": dv.dead,
            "loc_failed": dv.loc_failed,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    for (from, to, step) in &g.edges {
        let line = json!({
            "kind": "edge",
            "from": from,
            "to": to.map_or_else(|| json!("ok"), |t| json!(t)),
            "label": step_label(sig, step),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    Some(out)
}
