//! Partitioning of objects into clusters and cluster-count selection.

mod agglomerative;
mod calinski;
mod embed;
mod kmeans;
mod kmedoids;
mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use agglomerative::{agglomerative, dendrogram, Dendrogram, Merge};
pub use calinski::{calinski_harabasz, calinski_harabasz_points};
pub use embed::{embed, Embedding};
pub use kmeans::{kmeans, kmeans_points, KMeansFit, MAX_ITERATIONS};
pub use kmedoids::{kmedoids, kmedoids_matrix};
pub use sweep::{cluster, sweep_k, ClusterMethod, SweepEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    KMeans,
    Agglomerative,
    KMedoids,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::KMeans => "kmeans",
            Algorithm::Agglomerative => "agglomerative",
            Algorithm::KMedoids => "kmedoids",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kmeans" | "k-means" => Ok(Algorithm::KMeans),
            "agglomerative" | "hierarchical" => Ok(Algorithm::Agglomerative),
            "kmedoids" | "k-medoids" => Ok(Algorithm::KMedoids),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// Linkage criterion for agglomerative clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Single,
    Complete,
    #[default]
    Average,
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        })
    }
}

impl FromStr for Linkage {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            other => Err(format!("unknown linkage `{other}`")),
        }
    }
}

/// A partition of the objects of one type into non-empty clusters.
///
/// Clusters are numbered by their first member in input row order, and
/// members keep input row order, so equal partitions serialize equally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub otype: String,
    pub method: Algorithm,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linkage: Option<Linkage>,
    pub clusters: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_digest: Option<String>,
}

impl Clustering {
    /// Builds a clustering from per-row labels. Labels may be arbitrary;
    /// they are renumbered canonically.
    pub fn from_labels(
        otype: impl Into<String>,
        ids: &[String],
        labels: &[usize],
        method: Algorithm,
        seed: Option<u64>,
        linkage: Option<Linkage>,
    ) -> Clustering {
        let canon = canonical_labels(labels);
        let k = canon.iter().copied().max().map_or(0, |m| m + 1);
        let mut clusters = vec![Vec::new(); k];
        for (id, &c) in ids.iter().zip(&canon) {
            clusters[c].push(id.clone());
        }
        Clustering {
            otype: otype.into(),
            method,
            k,
            seed,
            linkage,
            clusters,
            config_digest: None,
        }
    }

    /// Object id to cluster index.
    pub fn assignment(&self) -> BTreeMap<&str, usize> {
        self.clusters
            .iter()
            .enumerate()
            .flat_map(|(c, members)| members.iter().map(move |m| (m.as_str(), c)))
            .collect()
    }

    pub fn n_objects(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    /// Per-row labels for the given id order; `None` if an id is missing.
    pub fn labels_for(&self, ids: &[String]) -> Option<Vec<usize>> {
        let a = self.assignment();
        ids.iter().map(|id| a.get(id.as_str()).copied()).collect()
    }

    /// Checks that clusters are non-empty and pairwise disjoint.
    pub fn is_partition(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.clusters.iter().all(|c| !c.is_empty())
            && self.clusters.iter().flatten().all(|id| seen.insert(id.as_str()))
    }
}

/// Renumbers labels in order of first appearance.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}
