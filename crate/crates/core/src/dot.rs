//! Graphviz export.

use std::fmt::Write;

use crate::causal_site::CausalSite;
use crate::hierarchic::HierarchicState;

/// Parent links as solid arrows, precedence as dashed arrows, χ as undirected
/// dotted edges.
pub fn site_to_dot(site: &CausalSite) -> String {
    let mut out = String::from("digraph site {\n  rankdir=TB;\n");
    for n in site.nodes() {
        writeln!(out, "  n{} [label=\"{} (t={})\"];", n.id, n.id, n.step).unwrap();
    }
    for n in site.nodes() {
        if let Some(p) = n.parent {
            writeln!(out, "  n{p} -> n{} [style=solid];", n.id).unwrap();
        }
    }
    for (a, b) in site.prec() {
        writeln!(out, "  n{a} -> n{b} [style=dashed];").unwrap();
    }
    for (a, b) in site.chi() {
        writeln!(out, "  n{a} -> n{b} [style=dotted, dir=none];").unwrap();
    }
    out.push_str("}\n");
    out
}

fn node_name(prefix: &[u8]) -> String {
    let mut s = String::from("w");
    for d in prefix {
        write!(s, "_{d}").unwrap();
    }
    s
}

/// The prefix tree of a hierarchic state; nodes carry their amplitudes.
/// Prefixes without an amplitude that are needed to connect the tree are
/// drawn as empty circles.
pub fn state_to_dot(state: &HierarchicState) -> String {
    let mut out = format!(
        "digraph hierarchic {{\n  label=\"p={} K={}\";\n  root [shape=point];\n",
        state.p(),
        state.depth()
    );
    let mut nodes = std::collections::BTreeSet::new();
    for w in state.terms().keys() {
        for len in 1..=w.len() {
            nodes.insert(w[..len].to_vec());
        }
    }
    for w in &nodes {
        let digits: Vec<String> = w.iter().map(|d| d.to_string()).collect();
        match state.terms().get(w) {
            Some(a) => writeln!(
                out,
                "  {} [label=\"{}\\n{:+.6}{:+.6}i\"];",
                node_name(w),
                digits.join(""),
                a.re,
                a.im
            )
            .unwrap(),
            None => writeln!(
                out,
                "  {} [label=\"{}\", shape=circle, style=dashed];",
                node_name(w),
                digits.join("")
            )
            .unwrap(),
        }
        let parent = if w.len() == 1 {
            "root".to_string()
        } else {
            node_name(&w[..w.len() - 1])
        };
        writeln!(out, "  {parent} -> {};", node_name(w)).unwrap();
    }
    out.push_str("}\n");
    out
}
