mod common;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Duration};
use common::{fixture, random_ocel, random_partition};
use ocel_cluster::clustering::{Algorithm, Clustering};
use ocel_cluster::ocdfg::{
    density_improvement, discover, export_dot, fitness_proxy, model_density, model_size, size_improvement,
    ComplexityReport, Node, Ocdfg, TypedEdge,
};
use ocel_cluster::ocel::{Event, ObjectRecord, Ocel};
use ocel_cluster::sublog::{build_bundle, relevant_log, Approach};
use proptest::prelude::*;

type Edge = (String, String, String);

/// Typed edge counts by walking each object's events in log order, with
/// `>` and `#` standing for the start and end markers.
fn naive_edges(log: &Ocel) -> BTreeMap<Edge, u64> {
    let mut out = BTreeMap::new();
    for o in log.objects() {
        let acts: Vec<&str> = log
            .events()
            .iter()
            .filter(|e| e.omap.contains(&o.id))
            .map(|e| e.activity.as_str())
            .collect();
        if acts.is_empty() {
            continue;
        }
        let mut path = vec![">"];
        path.extend(&acts);
        path.push("#");
        for w in path.windows(2) {
            *out.entry((w[0].to_string(), w[1].to_string(), o.otype.clone())).or_insert(0) += 1;
        }
    }
    out
}

fn as_naive(m: &Ocdfg) -> BTreeMap<Edge, u64> {
    let name = |n: &Node| match n {
        Node::Start => ">".to_string(),
        Node::End => "#".to_string(),
        Node::Activity(a) => a.clone(),
    };
    m.edges().iter().map(|(e, f)| ((name(&e.from), name(&e.to), e.otype.clone()), *f)).collect()
}

fn act(a: &str) -> Node {
    Node::Activity(a.into())
}

fn log_of(traces: &[(&str, &str, &[&str])]) -> Ocel {
    let t0 = DateTime::parse_from_rfc3339("2021-01-01T00:00:00Z").unwrap();
    let mut events = Vec::new();
    for (obj, _, trace) in traces {
        for a in trace.iter() {
            let i = events.len();
            events.push(Event::new(format!("e{i:03}"), *a, t0 + Duration::minutes(i as i64), [obj.to_string()]));
        }
    }
    let objects = traces.iter().map(|(o, t, _)| ObjectRecord::new(*o, *t)).collect();
    Ocel::new(events, objects).unwrap()
}

/// The log with every event and object id prefixed.
fn renamed(log: &Ocel, prefix: &str) -> (Vec<Event>, Vec<ObjectRecord>) {
    let events = log
        .events()
        .iter()
        .map(|e| {
            let omap: Vec<String> = e.omap.iter().map(|o| format!("{prefix}{o}")).collect();
            Event::new(format!("{prefix}{}", e.id), e.activity.clone(), e.timestamp, omap)
        })
        .collect();
    let objects = log
        .objects()
        .map(|o| ObjectRecord {
            id: format!("{prefix}{}", o.id),
            ..o.clone()
        })
        .collect();
    (events, objects)
}

#[test]
fn minimal_models() {
    let m = discover(&log_of(&[("o", "t", &["a", "b"])]));
    assert_eq!(m.activities().iter().collect::<Vec<_>>(), ["a", "b"]);
    let want = [
        TypedEdge::new(Node::Start, act("a"), "t"),
        TypedEdge::new(act("a"), act("b"), "t"),
        TypedEdge::new(act("b"), Node::End, "t"),
    ];
    assert_eq!(m.edges().keys().cloned().collect::<Vec<_>>(), want);
    assert!(m.edges().values().all(|f| *f == 1));
    assert_eq!(fitness_proxy(&m, &log_of(&[("o", "t", &["a", "b"])])), 1.0);

    let dot = export_dot(&m);
    assert_eq!(dot.matches("->").count(), 3);
    assert_eq!(dot, export_dot(&m.clone()));
    assert_eq!(export_dot(&Ocdfg::default()).matches("->").count(), 0);

    let twice = discover(&log_of(&[("o", "t", &["a", "b"]), ("p", "t", &["a", "b"])]));
    assert_eq!(twice.edge_freq(&TypedEdge::new(act("a"), act("b"), "t")), 2);
    assert_eq!(model_size(&Ocdfg::default()), 0);
    assert!(model_density(&Ocdfg::default()).is_err());
}

#[test]
fn running_example_model() {
    let m = discover(&fixture());
    let got = as_naive(&m);
    let (print, load, create) = ("print of production order", "Loading", "order creation");
    let e = |a: &str, b: &str, t: &str| (a.to_string(), b.to_string(), t.to_string());
    let mut want = BTreeMap::new();
    for t in ["order", "customer"] {
        for (a, b) in [(">", create), (create, print), (print, load), (load, "#")] {
            want.insert(e(a, b, t), 1);
        }
    }
    for (a, b, f) in [(">", print, 2), (print, load, 1), (load, "#", 2), (print, "#", 1), (">", load, 1)] {
        want.insert(e(a, b, "batch"), f);
    }
    assert_eq!(got, want);
    assert!(!got.keys().any(|(a, b, t)| t == "batch" && (a == create || b == create)));
    assert_eq!((m.n_nodes(), m.n_edges(), model_size(&m)), (3, 13, 39));
}

#[test]
fn fitness_counts_pairs() {
    // 10 pairs in total, the model below covers 7 of them
    let log = log_of(&[("o1", "t", &["a", "b", "c", "d", "e", "f"]), ("o2", "t", &["a", "c", "b", "d", "e", "f"])]);
    let pairs = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f")];
    let m = Ocdfg::from_parts(
        ["a", "b", "c", "d", "e", "f"],
        ["t"],
        BTreeMap::new(),
        pairs.iter().map(|(x, y)| (TypedEdge::new(act(x), act(y), "t"), 1)),
    )
    .unwrap();
    let traces: Vec<Vec<&str>> = vec![vec!["a", "b", "c", "d", "e", "f"], vec!["a", "c", "b", "d", "e", "f"]];
    let (mut total, mut hit) = (0, 0);
    for t in &traces {
        for w in t.windows(2) {
            total += 1;
            hit += usize::from(pairs.contains(&(w[0], w[1])));
        }
    }
    assert_eq!((hit, total), (7, 10));
    assert!((fitness_proxy(&m, &log) - 0.7).abs() < 1e-12);
    assert!(fitness_proxy(&discover(&log), &log) == 1.0);
}

#[test]
fn invalid_parts() {
    let start = || TypedEdge::new(Node::Start, act("a"), "t");
    assert!(Ocdfg::from_parts(["a"], ["t"], BTreeMap::new(), [(start(), 0)]).is_err());
    assert!(Ocdfg::from_parts(["a"], ["u"], BTreeMap::new(), [(start(), 1)]).is_err());
    assert!(Ocdfg::from_parts(["b"], ["t"], BTreeMap::new(), [(start(), 1)]).is_err());
    assert!(Ocdfg::from_parts(["a"], ["t"], BTreeMap::new(), [(TypedEdge::new(Node::End, act("a"), "t"), 1)]).is_err());
}

fn weighted_oracle(main: f64, parts: &[(usize, f64)]) -> f64 {
    let n: f64 = parts.iter().map(|(c, _)| *c as f64).sum();
    main / (parts.iter().map(|(c, v)| *c as f64 * v).sum::<f64>() / n)
}

#[test]
fn improvement_examples() {
    let line = |len: usize, objects: usize| {
        let acts: Vec<String> = (0..len).map(|i| format!("a{i}")).collect();
        let refs: Vec<&str> = acts.iter().map(String::as_str).collect();
        let names: Vec<String> = (0..objects).map(|i| format!("x{i}")).collect();
        let traces: Vec<(&str, &str, &[&str])> = names.iter().map(|n| (n.as_str(), "t", refs.as_slice())).collect();
        discover(&log_of(&traces))
    };
    let m = line(4, 1);
    assert_eq!(size_improvement(&m, &[(5, &m)]).unwrap(), 1.0);
    assert_eq!(density_improvement(&m, &[(5, &m)]).unwrap(), 1.0);
    assert!(size_improvement(&m, &[]).is_err());
    assert!(size_improvement(&m, &[(0, &m)]).is_err());
    assert!(size_improvement(&m, &[(1, &Ocdfg::default())]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn discovery_matches_enumeration(seed in any::<u64>()) {
        let log = random_ocel(seed);
        let m = discover(&log);
        prop_assert_eq!(as_naive(&m), naive_edges(&log));
        prop_assert_eq!(m.node_freq().values().sum::<u64>(), log.len() as u64);
        prop_assert_eq!(model_size(&m), (m.activities().len() * m.edges().len()) as u64);
        prop_assert_eq!(fitness_proxy(&m, &log), 1.0);
        prop_assert_eq!(export_dot(&m), export_dot(&discover(&log)));
        for otype in log.object_types() {
            let flow: u64 = m.edges().iter().filter(|(e, _)| &e.otype == otype).map(|(_, f)| f).sum();
            let expected: u64 = log
                .objects()
                .filter(|o| &o.otype == otype)
                .map(|o| log.events().iter().filter(|e| e.omap.contains(&o.id)).count() as u64)
                .filter(|len| *len > 0)
                .map(|len| len + 1)
                .sum();
            prop_assert_eq!(flow, expected);
        }
    }

    #[test]
    fn discovery_is_additive(a in any::<u64>(), b in any::<u64>()) {
        let (la, lb) = (random_ocel(a), random_ocel(b));
        let (mut events, mut objects) = renamed(&la, "x");
        let (eb, ob) = renamed(&lb, "y");
        events.extend(eb);
        objects.extend(ob);
        let union = discover(&Ocel::new(events, objects).unwrap());
        let mut want = as_naive(&discover(&la));
        for (k, v) in as_naive(&discover(&lb)) {
            *want.entry(k).or_insert(0) += v;
        }
        prop_assert_eq!(as_naive(&union), want);
    }

    #[test]
    fn improvements_match_weighted_average(seed in any::<u64>(), k in 1usize..5) {
        let log = random_ocel(seed);
        let c = Clustering {
            otype: "type0".into(),
            method: Algorithm::KMeans,
            k,
            seed: None,
            linkage: None,
            clusters: random_partition(&log, "type0", k, seed),
            config_digest: None,
        };
        let main_log = relevant_log(&log, "type0").unwrap();
        prop_assume!(!main_log.is_empty());
        let main = discover(&main_log);
        let bundle = build_bundle(&log, &c, Approach::Existence).unwrap();
        let models: Vec<Ocdfg> = bundle.clusters.iter().map(|cl| discover(&cl.log)).collect();
        let weighted: Vec<(usize, &Ocdfg)> = bundle.clusters.iter().zip(&models).map(|(cl, m)| (cl.objects.len(), m)).collect();

        let size = |m: &Ocdfg| (naive_activities(m) * as_naive(m).len()) as f64;
        let density = |m: &Ocdfg| if naive_activities(m) == 0 { 0.0 } else { as_naive(m).len() as f64 / naive_activities(m) as f64 };
        let csi = weighted_oracle(size(&main), &weighted.iter().map(|(n, m)| (*n, size(m))).collect::<Vec<_>>());
        let cdi = weighted_oracle(density(&main), &weighted.iter().map(|(n, m)| (*n, density(m))).collect::<Vec<_>>());
        prop_assert!((size_improvement(&main, &weighted).unwrap() - csi).abs() <= 1e-12 * csi);
        prop_assert!((density_improvement(&main, &weighted).unwrap() - cdi).abs() <= 1e-12 * cdi);

        let report = ComplexityReport::new(&main_log, &main, &bundle, &models).unwrap();
        prop_assert_eq!(report.csi, Some(size_improvement(&main, &weighted).unwrap()));
        for (stats, m) in report.clusters.iter().zip(&models) {
            prop_assert_eq!(stats.size, (stats.n_nodes * stats.n_edges) as u64);
            prop_assert_eq!(stats.size, model_size(m));
            prop_assert_eq!(stats.fitness, 1.0);
        }
        if k == 1 {
            prop_assert!((report.csi.unwrap() - 1.0).abs() < 1e-9);
            prop_assert!((report.cdi.unwrap() - 1.0).abs() < 1e-9);
        }
    }
}

fn naive_activities(m: &Ocdfg) -> usize {
    let acts: BTreeSet<&String> = m.node_freq().keys().collect();
    acts.len()
}
