//! Weighted directed graph of a trace and its centrality features.
//!
//! Nodes are the distinct activities of the trace, edges the distinct
//! adjacent pairs of different activities, and each edge is weighted by how
//! often the pair occurs adjacently. Repeated activities (`a, a`) produce no
//! edge.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceGraph {
    nodes: Vec<String>,
    edges: BTreeMap<(usize, usize), u64>,
}

/// Edge weighting used for shortest paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathWeight {
    /// Edge weight is the adjacency frequency of the pair.
    #[default]
    Frequency,
    /// Every edge costs 1.
    Hops,
}

impl TraceGraph {
    pub fn from_trace<S: AsRef<str>>(activities: &[S]) -> TraceGraph {
        let mut nodes: Vec<String> = activities.iter().map(|a| a.as_ref().to_string()).collect();
        nodes.sort();
        nodes.dedup();
        let idx = |a: &str| nodes.binary_search_by(|n| n.as_str().cmp(a)).unwrap();
        let mut edges = BTreeMap::new();
        for pair in activities.windows(2) {
            let (x, y) = (pair[0].as_ref(), pair[1].as_ref());
            if x != y {
                *edges.entry((idx(x), idx(y))).or_insert(0) += 1;
            }
        }
        TraceGraph { nodes, edges }
    }

    /// General weighted digraph. Weights must be positive and edges must
    /// join distinct nodes.
    pub fn from_weighted_edges<S: AsRef<str>>(
        nodes: &[S],
        edges: &[(S, S, u64)],
    ) -> Result<TraceGraph, GraphError> {
        let mut names: Vec<String> = nodes.iter().map(|n| n.as_ref().to_string()).collect();
        names.sort();
        names.dedup();
        let mut g = TraceGraph {
            nodes: names,
            edges: BTreeMap::new(),
        };
        for (from, to, w) in edges {
            let (from, to) = (from.as_ref(), to.as_ref());
            let invalid = |reason| GraphError::InvalidEdge {
                from: from.to_string(),
                to: to.to_string(),
                reason,
            };
            if from == to {
                return Err(invalid("self-loop"));
            }
            if *w == 0 {
                return Err(invalid("weight must be positive"));
            }
            let (a, b) = (g.index(from)?, g.index(to)?);
            g.edges.insert((a, b), *w);
        }
        Ok(g)
    }

    fn index(&self, name: &str) -> Result<usize, GraphError> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(name))
            .map_err(|_| GraphError::UnknownNode(name.to_string()))
    }

    /// Nodes in sorted order.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u64)> + '_ {
        self.edges
            .iter()
            .map(|(&(a, b), &w)| (self.nodes[a].as_str(), self.nodes[b].as_str(), w))
    }

    pub fn freq(&self, from: &str, to: &str) -> Option<u64> {
        let (a, b) = (self.index(from).ok()?, self.index(to).ok()?);
        self.edges.get(&(a, b)).copied()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn in_degree(&self, node: &str) -> Result<usize, GraphError> {
        let v = self.index(node)?;
        Ok(self.edges.keys().filter(|&&(_, b)| b == v).count())
    }

    pub fn out_degree(&self, node: &str) -> Result<usize, GraphError> {
        let v = self.index(node)?;
        Ok(self.edges.keys().filter(|&&(a, _)| a == v).count())
    }

    fn adjacency(&self, weight: PathWeight) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (&(a, b), &w) in &self.edges {
            let cost = match weight {
                PathWeight::Frequency => w,
                PathWeight::Hops => 1,
            };
            adj[a].push((b, cost));
        }
        adj
    }
}

/// Dijkstra from `source`; `None` marks unreachable nodes.
fn single_source(adj: &[Vec<(usize, u64)>], source: usize) -> Vec<Option<u64>> {
    let mut dist: Vec<Option<u64>> = vec![None; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0u64, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v].is_some_and(|best| d > best) {
            continue;
        }
        for &(u, w) in &adj[v] {
            let nd = d + w;
            if dist[u].is_none_or(|cur| nd < cur) {
                dist[u] = Some(nd);
                heap.push(Reverse((nd, u)));
            }
        }
    }
    dist
}

/// Minimal total edge weight from `source` to `target`, `None` when
/// `target` is unreachable.
pub fn shortest_path_cost(
    g: &TraceGraph,
    source: &str,
    target: &str,
    weight: PathWeight,
) -> Result<Option<u64>, GraphError> {
    let s = g.index(source)?;
    let t = g.index(target)?;
    Ok(single_source(&g.adjacency(weight), s)[t])
}

/// Mean, sample variance (n - 1) and standard deviation of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub variance: f64,
    pub std: f64,
}

impl Aggregate {
    pub fn of(values: &[f64]) -> Aggregate {
        if values.is_empty() {
            return Aggregate::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        // sample variance; a single value has none
        let variance = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).max(0.0)
        };
        Aggregate {
            mean,
            variance,
            std: variance.sqrt(),
        }
    }
}

/// Per-node centralities, aligned with [`TraceGraph::nodes`].
#[derive(Debug, Clone, PartialEq)]
pub struct NodeCentralities {
    pub in_degree: Vec<f64>,
    pub out_degree: Vec<f64>,
    pub closeness: Vec<f64>,
    pub harmonic: Vec<f64>,
}

/// Degree counts are raw. Closeness is `(|V|-1) / sum of distances` over
/// reachable targets only (0 when nothing is reachable); harmonic sums
/// `(|V|-1) / distance` over reachable targets.
pub fn node_centralities(g: &TraceGraph, weight: PathWeight) -> NodeCentralities {
    let n = g.n_nodes();
    let mut in_degree = vec![0.0; n];
    let mut out_degree = vec![0.0; n];
    for &(a, b) in g.edges.keys() {
        out_degree[a] += 1.0;
        in_degree[b] += 1.0;
    }
    let adj = g.adjacency(weight);
    let scale = n.saturating_sub(1) as f64;
    let mut closeness = vec![0.0; n];
    let mut harmonic = vec![0.0; n];
    for v in 0..n {
        let dist = single_source(&adj, v);
        let mut total = 0u64;
        let mut h = 0.0;
        for (y, d) in dist.iter().enumerate() {
            if y == v {
                continue;
            }
            if let Some(d) = *d {
                total += d;
                h += scale / d as f64;
            }
        }
        closeness[v] = if total == 0 { 0.0 } else { scale / total as f64 };
        harmonic[v] = h;
    }
    NodeCentralities {
        in_degree,
        out_degree,
        closeness,
        harmonic,
    }
}

/// The 12 aggregated graph features of one object.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CentralityFeatures {
    pub in_degree: Aggregate,
    pub out_degree: Aggregate,
    pub closeness: Aggregate,
    pub harmonic: Aggregate,
}

impl CentralityFeatures {
    pub const NAMES: [&'static str; 12] = [
        "in_degree_centrality_mean",
        "in_degree_centrality_var",
        "in_degree_centrality_std",
        "out_degree_centrality_mean",
        "out_degree_centrality_var",
        "out_degree_centrality_std",
        "closeness_centrality_mean",
        "closeness_centrality_var",
        "closeness_centrality_std",
        "harmonic_centrality_mean",
        "harmonic_centrality_var",
        "harmonic_centrality_std",
    ];

    /// Values in the order of [`CentralityFeatures::NAMES`].
    pub fn values(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (i, agg) in [self.in_degree, self.out_degree, self.closeness, self.harmonic]
            .into_iter()
            .enumerate()
        {
            out[3 * i] = agg.mean;
            out[3 * i + 1] = agg.variance;
            out[3 * i + 2] = agg.std;
        }
        out
    }
}

pub fn centrality_features(g: &TraceGraph, weight: PathWeight) -> CentralityFeatures {
    let c = node_centralities(g, weight);
    CentralityFeatures {
        in_degree: Aggregate::of(&c.in_degree),
        out_degree: Aggregate::of(&c.out_degree),
        closeness: Aggregate::of(&c.closeness),
        harmonic: Aggregate::of(&c.harmonic),
    }
}
