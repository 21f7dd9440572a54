use std::ops::RangeInclusive;

use serde::{Serialize, Serializer};

use super::{
    agglomerative::dendrogram, calinski_harabasz_points, embed, kmeans, kmedoids, Algorithm,
    Clustering, Linkage,
};
use crate::distance::{table_distance_matrix, DistanceMatrix, DistanceWeights};
use crate::error::ClusterError;
use crate::par::{self, Execution};
use crate::profile::FeatureTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterMethod {
    /// Lloyd's k-means over the table embedding.
    KMeans,
    /// k-medoids over the mixed profile distance.
    KMedoids { weights: DistanceWeights },
    /// Agglomerative clustering over the mixed profile distance.
    Agglomerative {
        linkage: Linkage,
        weights: DistanceWeights,
    },
}

impl ClusterMethod {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            ClusterMethod::KMeans => Algorithm::KMeans,
            ClusterMethod::KMedoids { .. } => Algorithm::KMedoids,
            ClusterMethod::Agglomerative { .. } => Algorithm::Agglomerative,
        }
    }

    fn matrix(&self, table: &FeatureTable, exec: Execution) -> Result<Option<DistanceMatrix>, ClusterError> {
        Ok(match self {
            ClusterMethod::KMeans => None,
            ClusterMethod::KMedoids { weights } | ClusterMethod::Agglomerative { weights, .. } => {
                Some(table_distance_matrix(table, weights, exec)?)
            }
        })
    }
}

/// Clusters every row of the table into `k` clusters.
pub fn cluster(
    table: &FeatureTable,
    k: usize,
    method: &ClusterMethod,
    seed: u64,
) -> Result<Clustering, ClusterError> {
    if table.is_empty() {
        return Err(ClusterError::Empty);
    }
    if k == 0 || k > table.len() {
        return Err(ClusterError::InvalidK { k, n: table.len() });
    }
    if table.len() == 1 {
        // a single object needs no distances
        return Ok(Clustering::from_labels(
            table.otype(),
            table.ids(),
            &[0],
            method.algorithm(),
            seed_of(method, seed),
            linkage_of(method),
        ));
    }
    match method {
        ClusterMethod::KMeans => kmeans(table, k, seed),
        ClusterMethod::KMedoids { .. } => {
            let m = method.matrix(table, Execution::default())?.unwrap();
            kmedoids(&m, k, seed)
        }
        ClusterMethod::Agglomerative { linkage, .. } => {
            let m = method.matrix(table, Execution::default())?.unwrap();
            super::agglomerative(&m, k, *linkage)
        }
    }
}

fn seed_of(method: &ClusterMethod, seed: u64) -> Option<u64> {
    match method {
        ClusterMethod::Agglomerative { .. } => None,
        _ => Some(seed),
    }
}

fn linkage_of(method: &ClusterMethod) -> Option<Linkage> {
    match method {
        ClusterMethod::Agglomerative { linkage, .. } => Some(*linkage),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub k: usize,
    #[serde(serialize_with = "score_json")]
    pub score: f64,
    pub best: bool,
    pub clustering: Clustering,
}

fn score_json<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("inf")
    }
}

/// Runs the method for every `k` in the range and scores each result with
/// the Calinski-Harabasz index. The highest score is flagged `best`
/// (smallest `k` on ties).
pub fn sweep_k(
    table: &FeatureTable,
    ks: RangeInclusive<usize>,
    method: &ClusterMethod,
    seed: u64,
) -> Result<Vec<SweepEntry>, ClusterError> {
    let (lo, hi) = (*ks.start(), *ks.end());
    if lo > hi {
        return Err(ClusterError::EmptyRange(lo, hi));
    }
    let n = table.len();
    if lo < 2 || hi >= n {
        let k = if lo < 2 { lo } else { hi };
        return Err(ClusterError::ScoreRange { k, n });
    }

    let exec = Execution::default();
    let points = embed(table).rows;
    let matrix = method.matrix(table, exec)?;
    let tree = match (method, &matrix) {
        (ClusterMethod::Agglomerative { linkage, .. }, Some(m)) => Some(dendrogram(m, *linkage)),
        _ => None,
    };

    let ks: Vec<usize> = (lo..=hi).collect();
    let mut entries: Vec<SweepEntry> = par::map_slice(exec, &ks, |&k| {
        let clustering = match method {
            ClusterMethod::KMeans => kmeans(table, k, seed)?,
            ClusterMethod::KMedoids { .. } => kmedoids(matrix.as_ref().unwrap(), k, seed)?,
            ClusterMethod::Agglomerative { linkage, .. } => Clustering::from_labels(
                table.otype(),
                table.ids(),
                &tree.as_ref().unwrap().cut(k)?,
                Algorithm::Agglomerative,
                None,
                Some(*linkage),
            ),
        };
        let labels = clustering.labels_for(table.ids()).expect("clustering covers the table");
        let score = calinski_harabasz_points(&points, &labels)?;
        Ok(SweepEntry {
            k,
            score,
            best: false,
            clustering,
        })
    })
    .into_iter()
    .collect::<Result<_, ClusterError>>()?;

    let best = entries
        .iter()
        .enumerate()
        .fold(0, |b, (i, e)| if e.score > entries[b].score { i } else { b });
    entries[best].best = true;
    Ok(entries)
}
