use std::collections::BTreeMap;
use std::fmt::Write;

use super::{Node, Ocdfg};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn export_dot(m: &Ocdfg) -> String {
    export_dot_with_comment(m, None)
}

/// Graphviz rendering of the model. Each object type gets its own color and
/// its own pair of start and end markers; edge labels are frequencies.
/// Output order follows the sorted activities, types and edges, so equal
/// models render to identical text.
pub fn export_dot_with_comment(m: &Ocdfg, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "// {line}");
        }
    }
    out.push_str("digraph ocdfg {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box, style=rounded, fontname=\"Helvetica\"];\n");
    out.push_str("  edge [fontname=\"Helvetica\"];\n");

    let act_id: BTreeMap<&str, String> = m
        .activities()
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), format!("a{i}")))
        .collect();
    for (a, id) in &act_id {
        let freq = m.node_freq().get(*a).copied().unwrap_or(0);
        let _ = writeln!(out, "  {id} [label={}];", quote(&format!("{a} ({freq})")));
    }

    let color: BTreeMap<&str, (usize, &str)> = m
        .object_types()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), (i, PALETTE[i % PALETTE.len()])))
        .collect();
    for (t, (i, c)) in &color {
        let _ = writeln!(
            out,
            "  s{i} [label={}, shape=circle, style=filled, fillcolor=\"{c}\", fontcolor=white];",
            quote(&format!("▷ {t}"))
        );
        let _ = writeln!(
            out,
            "  t{i} [label={}, shape=square, style=filled, fillcolor=\"{c}\", fontcolor=white];",
            quote(&format!("□ {t}"))
        );
    }

    for (edge, freq) in m.edges() {
        let (i, c) = color[edge.otype.as_str()];
        let end = |n: &Node| match n {
            Node::Start => format!("s{i}"),
            Node::End => format!("t{i}"),
            Node::Activity(a) => act_id[a.as_str()].clone(),
        };
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{freq}\", color=\"{c}\", fontcolor=\"{c}\"];",
            end(&edge.from),
            end(&edge.to)
        );
    }
    out.push_str("}\n");
    out
}
