//! Serialized results.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use theta_closure::closure::{Decision, HasseDiagram};

pub const TOOL_VERSION: &str = concat!("theta-closure ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub orbits_ms: u64,
    pub closure_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseOutput {
    #[serde(flatten)]
    pub diagram: HasseDiagram,
    pub seed: u64,
    pub timings: Timings,
    pub config_hash: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideOutput {
    #[serde(flatten)]
    pub decision: Decision,
    pub seed: u64,
    pub config_hash: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub id: usize,
    pub characteristic: Vec<i64>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTable {
    pub orbits: Vec<OrbitRow>,
    pub seed: u64,
    pub config_hash: String,
    pub tool_version: String,
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// DOT with one rank per orbit dimension, largest at the top, and an
/// invisible chain of dimension labels on the left.
pub fn to_dot(out: &HasseOutput) -> String {
    let d = &out.diagram;
    let mut by_dim: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for n in &d.nodes {
        by_dim.entry(n.dim).or_default().push(n.id);
    }
    let mut s = String::new();
    writeln!(
        s,
        "// {} seed={} config={}",
        out.tool_version, out.seed, out.config_hash
    )
    .unwrap();
    s.push_str("digraph closure {\n  rankdir=TB;\n  node [shape=circle];\n");
    s.push_str("  subgraph dims {\n    node [shape=plaintext];\n");
    for dim in by_dim.keys().rev() {
        writeln!(s, "    d{dim} [label=\"{dim}\"];").unwrap();
    }
    s.push_str("  }\n");
    let chain: Vec<String> = by_dim.keys().rev().map(|k| format!("d{k}")).collect();
    if chain.len() > 1 {
        writeln!(s, "  {} [style=invis];", chain.join(" -> ")).unwrap();
    }
    for (dim, ids) in by_dim.iter().rev() {
        let names: Vec<String> = ids.iter().map(|i| format!("n{i}")).collect();
        writeln!(s, "  {{ rank=same; d{dim}; {}; }}", names.join("; ")).unwrap();
    }
    for n in &d.nodes {
        match &n.label {
            Some(l) => writeln!(s, "  n{} [shape=circle, label=\"{}\", comment=\"{l}\"];", n.id, n.id).unwrap(),
            None => writeln!(s, "  n{} [shape=circle, label=\"{}\"];", n.id, n.id).unwrap(),
        }
    }
    for (a, b) in &d.covering_edges {
        writeln!(s, "  n{a} -> n{b};").unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use theta_closure::closure::HasseNode;

    fn sample() -> HasseOutput {
        let node = |id, dim| HasseNode {
            id,
            characteristic: vec![1, 0, 2],
            dim,
            label: (id == 2).then(|| "bold".to_string()),
        };
        HasseOutput {
            diagram: HasseDiagram {
                nodes: vec![node(1, 8), node(2, 6), node(3, 6)],
                covering_edges: vec![(1, 2), (1, 3)],
                closure_pairs: vec![(1, 2), (1, 3)],
            },
            seed: 3,
            timings: Timings {
                orbits_ms: 12,
                closure_ms: 40,
            },
            config_hash: "ab".repeat(32),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let text = to_json(&sample());
        let back: HasseOutput = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn dot_ranks_share_dimension() {
        let dot = to_dot(&sample());
        assert!(dot.contains("{ rank=same; d6; n2; n3; }"));
        assert!(dot.contains("d8 -> d6 [style=invis];"));
        assert!(dot.contains("comment=\"bold\""));
    }
}
