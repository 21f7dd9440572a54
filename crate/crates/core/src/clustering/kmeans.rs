use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{embed, Algorithm, Clustering};
use crate::error::ClusterError;
use crate::profile::FeatureTable;

pub const MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares after each assignment step.
    pub wcss_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl KMeansFit {
    pub fn wcss(&self) -> f64 {
        self.wcss_history.last().copied().unwrap_or(0.0)
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Seeded first pick, then repeatedly the point farthest from all chosen
/// centers (lowest index on ties, skipping already chosen points).
fn farthest_point_init(points: &[Vec<f64>], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = points.len();
    let mut chosen = vec![rng.gen_range(0..n)];
    let mut min_d: Vec<f64> = points.iter().map(|p| sq_dist(p, &points[chosen[0]])).collect();
    while chosen.len() < k {
        let next = (0..n)
            .filter(|i| !chosen.contains(i))
            .fold(None::<usize>, |best, i| match best {
                Some(b) if min_d[b] >= min_d[i] => Some(b),
                _ => Some(i),
            })
            .expect("k <= n");
        chosen.push(next);
        for (i, p) in points.iter().enumerate() {
            min_d[i] = min_d[i].min(sq_dist(p, &points[next]));
        }
    }
    chosen
}

/// Lloyd iterations on raw points. Ties keep the current label, so the
/// within-cluster sum of squares never increases between iterations.
pub fn kmeans_points(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansFit, ClusterError> {
    let n = points.len();
    if n == 0 {
        return Err(ClusterError::Empty);
    }
    if k == 0 || k > n {
        return Err(ClusterError::InvalidK { k, n });
    }
    let mut centroids: Vec<Vec<f64>> = farthest_point_init(points, k, seed)
        .into_iter()
        .map(|i| points[i].clone())
        .collect();

    let mut labels: Vec<usize> = vec![usize::MAX; n];
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut next = labels.clone();
        for (i, p) in points.iter().enumerate() {
            let mut best = next[i];
            let mut best_d = if best == usize::MAX {
                f64::INFINITY
            } else {
                sq_dist(p, &centroids[best])
            };
            for (c, centroid) in centroids.iter().enumerate() {
                let d = sq_dist(p, centroid);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            next[i] = best;
        }
        repair_empty(points, &mut next, &mut centroids);
        history.push(wcss(points, &next, &centroids));

        if next == labels {
            converged = true;
            break;
        }
        labels = next;
        centroids = means(points, &labels, &centroids);
    }

    Ok(KMeansFit {
        labels,
        centroids,
        wcss_history: history,
        iterations,
        converged,
    })
}

/// Gives each empty cluster the point farthest from its own centroid,
/// taken from a cluster that keeps at least one member.
fn repair_empty(points: &[Vec<f64>], labels: &mut [usize], centroids: &mut [Vec<f64>]) {
    let k = centroids.len();
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    for c in 0..k {
        if sizes[c] > 0 {
            continue;
        }
        let donor = (0..points.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .map(|i| (i, sq_dist(&points[i], &centroids[labels[i]])))
            .fold(None::<(usize, f64)>, |best, (i, d)| match best {
                Some((_, bd)) if bd >= d => best,
                _ => Some((i, d)),
            });
        if let Some((i, _)) = donor {
            sizes[labels[i]] -= 1;
            labels[i] = c;
            sizes[c] = 1;
            centroids[c] = points[i].clone();
        }
    }
}

fn wcss(points: &[Vec<f64>], labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(p, &l)| sq_dist(p, &centroids[l]))
        .sum()
}

fn means(points: &[Vec<f64>], labels: &[usize], old: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; old.len()];
    let mut counts = vec![0usize; old.len()];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    sums.into_iter()
        .zip(counts)
        .zip(old)
        .map(|((s, c), prev)| {
            if c == 0 {
                prev.clone()
            } else {
                s.into_iter().map(|v| v / c as f64).collect()
            }
        })
        .collect()
}

/// K-means over the table's embedding (see [`embed`](super::embed)).
pub fn kmeans(table: &FeatureTable, k: usize, seed: u64) -> Result<Clustering, ClusterError> {
    if table.is_empty() {
        return Err(ClusterError::Empty);
    }
    let emb = embed(table);
    let fit = kmeans_points(&emb.rows, k, seed)?;
    Ok(Clustering::from_labels(
        table.otype(),
        table.ids(),
        &fit.labels,
        Algorithm::KMeans,
        Some(seed),
        None,
    ))
}
