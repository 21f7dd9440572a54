//! Shared generators and independent reference implementations.
//!
//! The oracles here deliberately avoid the library's own helpers: they
//! enumerate paths instead of running Dijkstra, fill a full edit-distance
//! table, and recompute profile distances straight from the profiles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use chrono::{DateTime, Duration, FixedOffset};
use ocel_cluster::ocel::{AttrValue, Event, ObjectRecord, Ocel};
use ocel_cluster::profile::{ObjectProfile, MISSING};
use ocel_cluster::sublog::Approach;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ACTIVITIES: [&str; 12] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"];

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/running_example.json")
}

pub fn fixture() -> Ocel {
    ocel_cluster::ocel::read_ocel_path(fixture_path()).unwrap()
}

fn base_time() -> DateTime<FixedOffset> {
    DateTime::parse_from_rfc3339("2022-03-01T08:00:00+00:00").unwrap()
}

/// Random log with at most 50 events, at most 20 objects and 2 or 3 object
/// types. Timestamps collide now and then so the id tie-break matters.
pub fn random_ocel(seed: u64) -> Ocel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_types = rng.gen_range(2..=3);
    let types: Vec<String> = (0..n_types).map(|t| format!("type{t}")).collect();
    let n_objects = rng.gen_range(n_types..=20);

    let objects: Vec<ObjectRecord> = (0..n_objects)
        .map(|i| {
            let otype = if i < n_types {
                types[i].clone()
            } else {
                types[rng.gen_range(0..n_types)].clone()
            };
            let mut o = ObjectRecord::new(format!("o{i:02}"), otype);
            if rng.gen_bool(0.7) {
                o = o.with_attr("size", AttrValue::Int(rng.gen_range(0..10)));
            }
            if rng.gen_bool(0.7) {
                o = o.with_attr("weight", AttrValue::Float(rng.gen_range(0.0..100.0)));
            }
            if rng.gen_bool(0.7) {
                let c = ["red", "green", "blue"].choose(&mut rng).unwrap();
                o = o.with_attr("color", AttrValue::Str(c.to_string()));
            }
            if rng.gen_bool(0.3) {
                o = o.with_attr("fragile", AttrValue::Bool(rng.gen()));
            }
            o
        })
        .collect();

    let n_events = rng.gen_range(1..=50);
    let events: Vec<Event> = (0..n_events)
        .map(|i| {
            let k = rng.gen_range(1..=4.min(n_objects));
            let omap: Vec<String> = (0..n_objects)
                .collect::<Vec<_>>()
                .choose_multiple(&mut rng, k)
                .map(|j| objects[*j].id.clone())
                .collect();
            let ts = base_time() + Duration::minutes(rng.gen_range(0..40));
            Event::new(format!("e{i:02}"), *ACTIVITIES[..6].choose(&mut rng).unwrap(), ts, omap)
        })
        .collect();

    Ocel::with_declared_types(events, objects, types).unwrap()
}

/// Random activity sequence over the first `alphabet` activities.
pub fn random_trace(rng: &mut impl Rng, max_len: usize, alphabet: usize) -> Vec<String> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| ACTIVITIES[rng.gen_range(0..alphabet)].to_string())
        .collect()
}

/// Trace graph built with maps: sorted nodes and the frequency of each
/// distinct adjacent pair of different activities.
pub fn naive_graph(trace: &[String]) -> (Vec<String>, BTreeMap<(String, String), u64>) {
    let nodes: BTreeSet<String> = trace.iter().cloned().collect();
    let mut edges = BTreeMap::new();
    for i in 1..trace.len() {
        if trace[i - 1] != trace[i] {
            *edges.entry((trace[i - 1].clone(), trace[i].clone())).or_insert(0) += 1;
        }
    }
    (nodes.into_iter().collect(), edges)
}

/// Cheapest simple path by exhaustive enumeration.
pub fn brute_force_sp(
    edges: &BTreeMap<(String, String), u64>,
    source: &str,
    target: &str,
    hops: bool,
) -> Option<u64> {
    fn walk(
        edges: &BTreeMap<(String, String), u64>,
        at: &str,
        target: &str,
        hops: bool,
        seen: &mut Vec<String>,
        cost: u64,
        best: &mut Option<u64>,
    ) {
        if at == target {
            *best = Some(best.map_or(cost, |b| b.min(cost)));
            return;
        }
        for ((x, y), w) in edges {
            if x == at && !seen.contains(y) {
                seen.push(y.clone());
                walk(edges, y, target, hops, seen, cost + if hops { 1 } else { *w }, best);
                seen.pop();
            }
        }
    }
    let mut best = None;
    walk(edges, source, target, hops, &mut vec![source.to_string()], 0, &mut best);
    best
}

/// In-degree, out-degree, closeness and harmonic centrality per node,
/// straight from the definitions with frequency-weighted paths.
pub fn naive_centralities(trace: &[String]) -> [Vec<f64>; 4] {
    let (nodes, edges) = naive_graph(trace);
    let n = nodes.len();
    let scale = n.saturating_sub(1) as f64;
    let mut out: [Vec<f64>; 4] = Default::default();
    for v in &nodes {
        out[0].push(edges.keys().filter(|(_, y)| y == v).count() as f64);
        out[1].push(edges.keys().filter(|(x, _)| x == v).count() as f64);
        let dists: Vec<u64> = nodes
            .iter()
            .filter(|y| *y != v)
            .filter_map(|y| brute_force_sp(&edges, v, y, false))
            .collect();
        let total: u64 = dists.iter().sum();
        out[2].push(if total == 0 { 0.0 } else { scale / total as f64 });
        out[3].push(dists.iter().map(|d| scale / *d as f64).sum());
    }
    out
}

/// Mean and n-1 variance through the sum-of-squares identity.
pub fn naive_aggregate(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let n = v.len() as f64;
    let sum: f64 = v.iter().sum();
    let sq: f64 = v.iter().map(|x| x * x).sum();
    let mean = sum / n;
    let var = if v.len() < 2 { 0.0 } else { ((sq - n * mean * mean) / (n - 1.0)).max(0.0) };
    (mean, var)
}

/// Edit distance with the full `(m+1) x (n+1)` table.
pub fn naive_levenshtein<T: PartialEq>(s: &[T], t: &[T]) -> usize {
    let mut d = vec![vec![0usize; t.len() + 1]; s.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=s.len() {
        for j in 1..=t.len() {
            let sub = d[i - 1][j - 1] + usize::from(s[i - 1] != t[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[s.len()][t.len()]
}

/// Profile distance recomputed from the profiles alone: normalized edit
/// distance, Euclidean distance over min-max scaled numerics (mean-imputed,
/// graph features included) divided by the square root of the dimension,
/// and the mismatch rate over categoricals with a missing marker.
pub fn formula_distance(profiles: &[ObjectProfile], i: usize, j: usize, w: (f64, f64, f64)) -> f64 {
    let (p, q) = (&profiles[i], &profiles[j]);
    let longest = p.trace.len().max(q.trace.len()).max(1) as f64;
    let trace = naive_levenshtein(&p.trace, &q.trace) as f64 / longest;

    let raw_names: BTreeSet<&String> = profiles.iter().flat_map(|p| p.numeric.keys()).collect();
    let column = |name: &String| -> Vec<f64> {
        let present: Vec<f64> = profiles.iter().filter_map(|p| p.numeric.get(name).copied()).collect();
        let mean = present.iter().sum::<f64>() / present.len() as f64;
        profiles.iter().map(|p| p.numeric.get(name).copied().unwrap_or(mean)).collect()
    };
    let mut columns: Vec<Vec<f64>> = raw_names.iter().map(|n| column(n)).collect();
    for f in 0..12 {
        columns.push(profiles.iter().map(|p| p.graph_features.values()[f]).collect());
    }
    let mut sq = 0.0;
    for col in &columns {
        let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s = |v: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
        sq += (s(col[i]) - s(col[j])).powi(2);
    }
    let numeric = sq.sqrt() / (columns.len() as f64).sqrt();

    let cat_names: BTreeSet<&String> = profiles.iter().flat_map(|p| p.categorical.keys()).collect();
    let categorical = if cat_names.is_empty() {
        0.0
    } else {
        let get = |p: &ObjectProfile, n: &String| p.categorical.get(n).cloned().unwrap_or(MISSING.to_string());
        cat_names.iter().filter(|n| get(p, n) != get(q, n)).count() as f64 / cat_names.len() as f64
    };

    (w.0 * trace + w.1 * numeric + w.2 * categorical) / (w.0 + w.1 + w.2)
}

/// Whether an event belongs to the sub-log of `cluster`, decided from the
/// event's omap and the object types alone.
pub fn belongs(log: &Ocel, event: &Event, cluster: &BTreeSet<String>, otype: &str, approach: Approach) -> bool {
    let typed: Vec<&String> = event
        .omap
        .iter()
        .filter(|o| log.object(o).map(|r| r.otype.as_str()) == Some(otype))
        .collect();
    match approach {
        Approach::Existence => event.omap.iter().any(|o| cluster.contains(o)),
        Approach::All => !typed.is_empty() && typed.iter().all(|o| cluster.contains(*o)),
    }
}

/// Random partition of the objects of `otype` into at most `k` clusters.
pub fn random_partition(log: &Ocel, otype: &str, k: usize, seed: u64) -> Vec<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clusters = vec![Vec::new(); k];
    for o in log.objects().filter(|o| o.otype == otype) {
        clusters[rng.gen_range(0..k)].push(o.id.clone());
    }
    clusters.retain(|c| !c.is_empty());
    clusters
}

/// Profiles of one type scattered in well-separated 2-D blobs of the numeric
/// attributes `x` and `y`. Traces are identical, so the graph features are
/// constant and only the blobs matter. Returns the profiles and the blob of
/// each one.
pub fn blob_profiles(centers: &[(f64, f64)], per_blob: usize, radius: f64, seed: u64) -> (Vec<ObjectProfile>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut profiles = Vec::new();
    let mut truth = Vec::new();
    for (b, (cx, cy)) in centers.iter().enumerate() {
        for _ in 0..per_blob {
            let id = format!("p{:03}", profiles.len());
            let numeric = BTreeMap::from([
                ("x".to_string(), cx + rng.gen_range(-radius..=radius)),
                ("y".to_string(), cy + rng.gen_range(-radius..=radius)),
            ]);
            profiles.push(ObjectProfile {
                object_id: id,
                otype: "blob".into(),
                trace: vec!["a".into(), "b".into()],
                categorical: BTreeMap::new(),
                numeric,
                graph_features: Default::default(),
            });
            truth.push(b);
        }
    }
    (profiles, truth)
}

/// Two labelings describe the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}
