//! Assignment of events to object clusters.
//!
//! Two semantics are supported. *Existence* puts an event into every
//! cluster holding at least one of its objects, so an event whose objects
//! of the clustered type are split across clusters is duplicated. *All*
//! puts an event into a cluster only when the cluster holds every object of
//! the clustered type in the event; split events belong to no cluster and
//! are reported as orphans. Objects of other types never influence the
//! assignment and stay in the omaps of the sub-logs.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{OcelError, SublogError};
use crate::ocel::{flatten, Ocel};
use crate::par::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    Existence,
    All,
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Approach::Existence => "existence",
            Approach::All => "all",
        })
    }
}

impl FromStr for Approach {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "existence" => Ok(Approach::Existence),
            "all" => Ok(Approach::All),
            other => Err(format!("unknown approach `{other}` (expected existence or all)")),
        }
    }
}

/// The part of the log that clustering on `otype` distributes: every event
/// with at least one object of the type. This is the log the main model is
/// discovered from when comparing against cluster models.
pub fn relevant_log(log: &Ocel, otype: &str) -> Result<Ocel, SublogError> {
    log.ensure_type(otype)?;
    Ok(log.retain_events(|e| e.omap.iter().any(|o| log.object_type_of(o) == Some(otype))))
}

/// Events sharing at least one object with the cluster.
pub fn existence_sublog(log: &Ocel, cluster: &[String]) -> Result<Ocel, SublogError> {
    if cluster.is_empty() {
        return Err(SublogError::EmptyCluster(0));
    }
    let members: HashSet<&str> = cluster.iter().map(String::as_str).collect();
    Ok(log.retain_events(|e| e.omap.iter().any(|o| members.contains(o.as_str()))))
}

/// Events with at least one object of `otype` whose objects of `otype` all
/// belong to the cluster.
pub fn all_sublog(log: &Ocel, cluster: &[String], otype: &str) -> Result<Ocel, SublogError> {
    if cluster.is_empty() {
        return Err(SublogError::EmptyCluster(0));
    }
    let members: HashSet<&str> = cluster.iter().map(String::as_str).collect();
    Ok(log.retain_events(|e| {
        let mut typed = e
            .omap
            .iter()
            .filter(|o| log.object_type_of(o) == Some(otype))
            .peekable();
        typed.peek().is_some() && typed.all(|o| members.contains(o.as_str()))
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLog {
    pub index: usize,
    pub objects: Vec<String>,
    pub log: Ocel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubLogBundle {
    pub approach: Approach,
    pub otype: String,
    pub clusters: Vec<ClusterLog>,
    /// Events of the flattened log assigned to no cluster, in log order.
    /// Always empty under the existence approach when every object of the
    /// type is clustered.
    pub orphan_events: Vec<String>,
}

pub fn build_bundle(
    log: &Ocel,
    clustering: &Clustering,
    approach: Approach,
) -> Result<SubLogBundle, SublogError> {
    build_bundle_with(log, clustering, approach, Execution::default())
}

pub fn build_bundle_with(
    log: &Ocel,
    clustering: &Clustering,
    approach: Approach,
    exec: Execution,
) -> Result<SubLogBundle, SublogError> {
    let otype = clustering.otype.as_str();
    log.ensure_type(otype)?;
    for (i, members) in clustering.clusters.iter().enumerate() {
        if members.is_empty() {
            return Err(SublogError::EmptyCluster(i));
        }
        for m in members {
            match log.object_type_of(m) {
                None => {
                    return Err(OcelError::ObjectNotInLog {
                        object: m.clone(),
                        otype: otype.to_string(),
                    }
                    .into())
                }
                Some(t) if t != otype => {
                    return Err(SublogError::WrongObjectType {
                        object: m.clone(),
                        found: t.to_string(),
                        expected: otype.to_string(),
                    })
                }
                Some(_) => {}
            }
        }
    }

    let clusters: Vec<ClusterLog> = par::map_range(exec, clustering.clusters.len(), |i| {
        let members = &clustering.clusters[i];
        let sub = match approach {
            Approach::Existence => existence_sublog(log, members),
            Approach::All => all_sublog(log, members, otype),
        }?;
        Ok(ClusterLog {
            index: i,
            objects: members.clone(),
            log: sub,
        })
    })
    .into_iter()
    .collect::<Result<_, SublogError>>()?;

    let covered: BTreeSet<&str> = clusters
        .iter()
        .flat_map(|c| c.log.events().iter().map(|e| e.id.as_str()))
        .collect();
    let orphan_events = flatten(log, otype)?
        .events()
        .filter(|e| !covered.contains(e.id.as_str()))
        .map(|e| e.id.clone())
        .collect();

    Ok(SubLogBundle {
        approach,
        otype: otype.to_string(),
        clusters,
        orphan_events,
    })
}
