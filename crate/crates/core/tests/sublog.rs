mod common;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Duration};
use common::{belongs, fixture, random_ocel, random_partition};
use ocel_cluster::clustering::{Algorithm, Clustering};
use ocel_cluster::ocel::{flatten, parse_ocel, to_json_string, Event, ObjectRecord, Ocel};
use ocel_cluster::sublog::{all_sublog, build_bundle, existence_sublog, Approach, SubLogBundle};
use ocel_cluster::SublogError;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn clustering(otype: &str, clusters: Vec<Vec<String>>) -> Clustering {
    Clustering {
        otype: otype.into(),
        method: Algorithm::KMeans,
        k: clusters.len(),
        seed: None,
        linkage: None,
        clusters,
        config_digest: None,
    }
}

fn ids(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn event_ids(log: &Ocel) -> Vec<&str> {
    log.events().iter().map(|e| e.id.as_str()).collect()
}

/// Checks every bundle invariant against the per-event membership oracle.
fn check_bundle(log: &Ocel, c: &Clustering, bundle: &SubLogBundle) -> Result<(), TestCaseError> {
    let otype = c.otype.as_str();
    let typed: BTreeSet<&str> = flatten(log, otype).unwrap().events().map(|e| e.id.as_str()).collect();
    let members: Vec<BTreeSet<String>> = c.clusters.iter().map(|m| m.iter().cloned().collect()).collect();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();

    prop_assert_eq!(bundle.clusters.len(), c.clusters.len());
    for (cl, m) in bundle.clusters.iter().zip(&members) {
        let want: Vec<&str> = log
            .events()
            .iter()
            .filter(|e| belongs(log, e, m, otype, bundle.approach))
            .map(|e| e.id.as_str())
            .collect();
        prop_assert_eq!(event_ids(&cl.log), want);
        for e in cl.log.events() {
            *seen.entry(log.event(&e.id).unwrap().id.as_str()).or_insert(0) += 1;
            prop_assert_eq!(e, log.event(&e.id).unwrap());
        }
        // a valid OCEL restricted to the referenced objects
        let referenced: BTreeSet<&str> = cl.log.events().iter().flat_map(|e| e.omap.iter().map(String::as_str)).collect();
        let kept: BTreeSet<&str> = cl.log.objects().map(|o| o.id.as_str()).collect();
        prop_assert_eq!(kept, referenced);
        prop_assert_eq!(&parse_ocel(to_json_string(&cl.log).as_bytes()).unwrap(), &cl.log);
    }

    let covered: BTreeSet<&str> = seen.keys().copied().collect();
    let orphans: BTreeSet<&str> = bundle.orphan_events.iter().map(String::as_str).collect();
    prop_assert!(covered.is_subset(&typed));
    prop_assert!(covered.is_disjoint(&orphans));
    prop_assert_eq!(covered.union(&orphans).copied().collect::<BTreeSet<_>>(), typed.clone());
    match bundle.approach {
        Approach::All => prop_assert!(seen.values().all(|n| *n == 1)),
        Approach::Existence => {
            prop_assert!(orphans.is_empty());
            let cluster_of = c.assignment();
            for (e, n) in &seen {
                let touched: BTreeSet<usize> = log
                    .event(e)
                    .unwrap()
                    .omap
                    .iter()
                    .filter_map(|o| cluster_of.get(o.as_str()).copied())
                    .collect();
                prop_assert_eq!(*n, touched.len());
            }
        }
    }
    Ok(())
}

#[test]
fn split_batches_duplicate_or_orphan_the_shared_event() {
    let log = fixture();
    let c = clustering("batch", vec![ids(&["b1", "b2"]), ids(&["b3"])]);

    let ex = build_bundle(&log, &c, Approach::Existence).unwrap();
    assert_eq!(event_ids(&ex.clusters[0].log), ["e2", "e3"]);
    assert_eq!(event_ids(&ex.clusters[1].log), ["e3"]);
    assert!(ex.orphan_events.is_empty());

    let all = build_bundle(&log, &c, Approach::All).unwrap();
    assert_eq!(event_ids(&all.clusters[0].log), ["e2"]);
    assert!(all.clusters[1].log.is_empty());
    assert_eq!(all.orphan_events, ["e3"]);
    // non-clustered objects stay in the omap
    assert!(all.clusters[0].log.object("o1").is_some());
    assert!(all.clusters[0].log.object("b3").is_none());
}

#[test]
fn whole_type_cluster() {
    let log = fixture();
    let everything = ids(&["b1", "b2", "b3"]);
    let ex = existence_sublog(&log, &everything).unwrap();
    let all = all_sublog(&log, &everything, "batch").unwrap();
    assert_eq!(ex, all);
    assert_eq!(event_ids(&ex), ["e2", "e3"]);
}

#[test]
fn singletons_orphan_shared_events() {
    let log = fixture();
    let c = clustering("batch", vec![ids(&["b1"]), ids(&["b2"]), ids(&["b3"])]);
    let bundle = build_bundle(&log, &c, Approach::All).unwrap();
    assert_eq!(bundle.orphan_events, ["e2", "e3"]);
}

#[test]
fn invalid_clusterings() {
    let log = fixture();
    let check = |clusters: Vec<Vec<String>>| build_bundle(&log, &clustering("batch", clusters), Approach::All);
    assert!(matches!(check(vec![ids(&["b1"]), vec![]]), Err(SublogError::EmptyCluster(1))));
    assert!(matches!(check(vec![ids(&["b1", "o1"])]), Err(SublogError::WrongObjectType { .. })));
    assert!(matches!(check(vec![ids(&["b9"])]), Err(SublogError::Log(_))));
    assert!(existence_sublog(&log, &[]).is_err());
}

/// 20 events over 8 batches and 3 orders; each event carries an order and
/// one to three batches.
fn batch_log(seed: u64) -> Ocel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let batches: Vec<String> = (1..=8).map(|i| format!("b{i}")).collect();
    let mut objects: Vec<ObjectRecord> = batches.iter().map(|b| ObjectRecord::new(b.clone(), "batch")).collect();
    objects.extend((1..=3).map(|i| ObjectRecord::new(format!("o{i}"), "order")));
    let t0 = DateTime::parse_from_rfc3339("2021-06-01T00:00:00Z").unwrap();
    let events = (0..20)
        .map(|i| {
            let n = rng.gen_range(1..=3);
            let mut omap: Vec<String> = batches.choose_multiple(&mut rng, n).cloned().collect();
            omap.push(format!("o{}", rng.gen_range(1..=3)));
            let act = ["cut", "paint", "polish", "load"][rng.gen_range(0..4)];
            Event::new(format!("e{i:02}"), act, t0 + Duration::hours(i), omap)
        })
        .collect();
    Ocel::new(events, objects).unwrap()
}

#[test]
fn four_batch_clusters() {
    for seed in 0..20 {
        let log = batch_log(seed);
        let clusters = vec![ids(&["b1", "b2"]), ids(&["b3", "b4"]), ids(&["b5", "b6"]), ids(&["b7", "b8"])];
        let c = clustering("batch", clusters);
        for approach in [Approach::All, Approach::Existence] {
            let bundle = build_bundle(&log, &c, approach).unwrap();
            check_bundle(&log, &c, &bundle).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bundles_match_the_membership_oracle(seed in any::<u64>(), k in 1usize..5, pick in any::<prop::sample::Index>()) {
        let log = random_ocel(seed);
        let types: Vec<&String> = log.object_types().iter().collect();
        let otype = types[pick.index(types.len())].as_str();
        let c = clustering(otype, random_partition(&log, otype, k, seed));
        for approach in [Approach::All, Approach::Existence] {
            let bundle = build_bundle(&log, &c, approach).unwrap();
            check_bundle(&log, &c, &bundle)?;
        }
    }

    #[test]
    fn single_cluster_semantics_coincide(seed in any::<u64>()) {
        let log = random_ocel(seed);
        let c = clustering("type0", random_partition(&log, "type0", 1, seed));
        let ex = build_bundle(&log, &c, Approach::Existence).unwrap();
        let all = build_bundle(&log, &c, Approach::All).unwrap();
        prop_assert_eq!(&ex.clusters[0].log, &all.clusters[0].log);
        prop_assert!(all.orphan_events.is_empty());
    }
}
