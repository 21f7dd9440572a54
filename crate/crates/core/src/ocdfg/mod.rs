//! Object-centric directly-follows graphs.
//!
//! Nodes are the activities of a log plus a start and an end marker. Every
//! edge carries the object type whose objects produced it: for each object,
//! consecutive activities of its trace give one edge occurrence, and the
//! first and last activity are linked to the markers.

mod dot;
mod metrics;
mod report;

pub use dot::{export_dot, export_dot_with_comment};
pub use metrics::{density_improvement, model_density, model_size, size_improvement};
pub use report::{ComplexityReport, ModelStats};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::ocel::{object_traces, Ocel};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Node {
    Start,
    Activity(String),
    End,
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Start => f.write_str("▷"),
            Node::Activity(a) => f.write_str(a),
            Node::End => f.write_str("□"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypedEdge {
    pub otype: String,
    pub from: Node,
    pub to: Node,
}

impl TypedEdge {
    pub fn new(from: Node, to: Node, otype: impl Into<String>) -> Self {
        TypedEdge {
            otype: otype.into(),
            from,
            to,
        }
    }
}

impl fmt::Display for TypedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.from, self.to, self.otype)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ocdfg {
    activities: BTreeSet<String>,
    object_types: BTreeSet<String>,
    node_freq: BTreeMap<String, u64>,
    edge_freq: BTreeMap<TypedEdge, u64>,
}

impl Ocdfg {
    /// Builds a model from explicit parts, checking that every edge uses a
    /// known type and activity, that markers only appear as a start source
    /// or an end target, and that frequencies are positive. Activities
    /// missing from `node_freq` get frequency 0.
    pub fn from_parts(
        activities: impl IntoIterator<Item = impl Into<String>>,
        object_types: impl IntoIterator<Item = impl Into<String>>,
        node_freq: BTreeMap<String, u64>,
        edges: impl IntoIterator<Item = (TypedEdge, u64)>,
    ) -> Result<Ocdfg, ModelError> {
        let activities: BTreeSet<String> = activities.into_iter().map(Into::into).collect();
        let object_types: BTreeSet<String> = object_types.into_iter().map(Into::into).collect();
        if let Some(a) = node_freq.keys().find(|a| !activities.contains(*a)) {
            return Err(ModelError::InvalidEdge(format!("frequency given for unknown activity `{a}`")));
        }
        let node_freq = activities
            .iter()
            .map(|a| (a.clone(), node_freq.get(a).copied().unwrap_or(0)))
            .collect();

        let mut edge_freq = BTreeMap::new();
        for (edge, freq) in edges {
            let bad = |why: &str| ModelError::InvalidEdge(format!("{edge}: {why}"));
            if freq == 0 {
                return Err(bad("zero frequency"));
            }
            if !object_types.contains(&edge.otype) {
                return Err(bad("unknown object type"));
            }
            if matches!(edge.from, Node::End) || matches!(edge.to, Node::Start) {
                return Err(bad("marker on the wrong side"));
            }
            for n in [&edge.from, &edge.to] {
                if let Node::Activity(a) = n {
                    if !activities.contains(a) {
                        return Err(bad("unknown activity"));
                    }
                }
            }
            *edge_freq.entry(edge).or_insert(0) += freq;
        }
        Ok(Ocdfg {
            activities,
            object_types,
            node_freq,
            edge_freq,
        })
    }

    pub fn activities(&self) -> &BTreeSet<String> {
        &self.activities
    }

    pub fn object_types(&self) -> &BTreeSet<String> {
        &self.object_types
    }

    pub fn node_freq(&self) -> &BTreeMap<String, u64> {
        &self.node_freq
    }

    pub fn edges(&self) -> &BTreeMap<TypedEdge, u64> {
        &self.edge_freq
    }

    pub fn edge_freq(&self, edge: &TypedEdge) -> u64 {
        self.edge_freq.get(edge).copied().unwrap_or(0)
    }

    /// |A|: activities, markers excluded.
    pub fn n_nodes(&self) -> usize {
        self.activities.len()
    }

    /// |F|: typed edges, marker edges included.
    pub fn n_edges(&self) -> usize {
        self.edge_freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }
}

/// Per-object steps of a trace: marker edge, consecutive pairs, marker
/// edge. Empty traces produce nothing.
fn steps(trace: &[&str]) -> Vec<(Node, Node)> {
    let (Some(first), Some(last)) = (trace.first(), trace.last()) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(trace.len() + 1);
    out.push((Node::Start, Node::Activity(first.to_string())));
    for w in trace.windows(2) {
        out.push((Node::Activity(w[0].to_string()), Node::Activity(w[1].to_string())));
    }
    out.push((Node::Activity(last.to_string()), Node::End));
    out
}

/// Discovers the model of a log. Frequencies are plain sums over objects,
/// so the result does not depend on any iteration order.
pub fn discover(log: &Ocel) -> Ocdfg {
    let mut node_freq: BTreeMap<String, u64> = BTreeMap::new();
    for e in log.events() {
        *node_freq.entry(e.activity.clone()).or_insert(0) += 1;
    }
    let mut edge_freq: BTreeMap<TypedEdge, u64> = BTreeMap::new();
    for (obj, trace) in object_traces(log) {
        let otype = log.object_type_of(obj).expect("referenced objects exist");
        for (from, to) in steps(&trace) {
            *edge_freq.entry(TypedEdge::new(from, to, otype)).or_insert(0) += 1;
        }
    }
    Ocdfg {
        activities: node_freq.keys().cloned().collect(),
        object_types: log.object_types().clone(),
        node_freq,
        edge_freq,
    }
}

/// Share of the per-object consecutive activity pairs of `log` whose typed
/// edge exists in `m`. Marker edges are not counted. A log without any
/// pair is trivially replayed and scores 1.
pub fn fitness_proxy(m: &Ocdfg, log: &Ocel) -> f64 {
    let mut total = 0u64;
    let mut hit = 0u64;
    for (obj, trace) in object_traces(log) {
        let otype = log.object_type_of(obj).expect("referenced objects exist");
        for w in trace.windows(2) {
            total += 1;
            let edge = TypedEdge::new(
                Node::Activity(w[0].to_string()),
                Node::Activity(w[1].to_string()),
                otype,
            );
            if m.edge_freq.contains_key(&edge) {
                hit += 1;
            }
        }
    }
    if total == 0 {
        1.0
    } else {
        hit as f64 / total as f64
    }
}
