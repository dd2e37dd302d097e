use std::fmt::Write;

use super::{EdgeRole, Network, NodeKind};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering. Sources are boxes, terminals double circles with their
/// demands on a second label line, relays small points. Coded edges are labelled
/// with their id; direct edges are dashed.
pub(super) fn render(net: &Network) -> String {
    let mut out = String::new();
    let name = match net.meta.q {
        Some(q) => format!("{}_q{}", net.meta.family, q),
        None => net.meta.family.clone(),
    };
    writeln!(out, "digraph {} {{", quote(&name)).unwrap();
    if net.nodes.is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  rankdir=TB;\n");
    for n in &net.nodes {
        let attrs = match n.kind {
            NodeKind::Source => {
                let label = net
                    .sources
                    .iter()
                    .find(|s| s.node == n.id)
                    .map_or(n.id.as_str(), |s| s.label.as_str());
                format!("shape=box, label={}", quote(label))
            }
            NodeKind::Terminal => {
                let demands = net
                    .terminal(&n.id)
                    .map(|t| t.demands.join(", "))
                    .unwrap_or_default();
                format!(
                    "shape=doublecircle, label={}",
                    quote(&format!("{}\n{{{}}}", n.id, demands))
                )
            }
            NodeKind::Relay => "shape=point".to_string(),
            NodeKind::Intermediate => "shape=circle".to_string(),
        };
        writeln!(out, "  {} [{}];", quote(&n.id), attrs).unwrap();
    }
    for e in &net.edges {
        let attrs = match net.role(e) {
            EdgeRole::Coded => format!(" [label={}, penwidth=2]", quote(&e.id)),
            EdgeRole::Direct => " [style=dashed]".to_string(),
            EdgeRole::Forward => String::new(),
        };
        writeln!(out, "  {} -> {}{};", quote(&e.tail), quote(&e.head), attrs).unwrap();
    }
    out.push_str("}\n");
    out
}
