use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{kmeans::MAX_ITERATIONS, Algorithm, Clustering};
use crate::distance::DistanceMatrix;
use crate::error::ClusterError;

/// Alternating k-medoids on a precomputed matrix. Returns per-row labels
/// and the medoid row of each cluster.
pub fn kmedoids_matrix(
    matrix: &DistanceMatrix,
    k: usize,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), ClusterError> {
    let n = matrix.n();
    if n == 0 {
        return Err(ClusterError::Empty);
    }
    if k == 0 || k > n {
        return Err(ClusterError::InvalidK { k, n });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut medoids = vec![rng.gen_range(0..n)];
    while medoids.len() < k {
        let next = (0..n)
            .filter(|i| !medoids.contains(i))
            .map(|i| (i, medoids.iter().map(|&m| matrix.get(i, m)).fold(f64::INFINITY, f64::min)))
            .fold(None::<(usize, f64)>, |best, (i, d)| match best {
                Some((_, bd)) if bd >= d => best,
                _ => Some((i, d)),
            })
            .expect("k <= n")
            .0;
        medoids.push(next);
    }

    let mut labels = vec![usize::MAX; n];
    for _ in 0..MAX_ITERATIONS {
        let mut next = labels.clone();
        for (i, label) in next.iter_mut().enumerate() {
            if let Some(c) = medoids.iter().position(|&m| m == i) {
                *label = c;
                continue;
            }
            let mut best = *label;
            let mut best_d = if best == usize::MAX {
                f64::INFINITY
            } else {
                matrix.get(i, medoids[best])
            };
            for (c, &m) in medoids.iter().enumerate() {
                let d = matrix.get(i, m);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            *label = best;
        }
        labels = next;

        let new_medoids: Vec<usize> = (0..k)
            .map(|c| {
                let members: Vec<usize> = (0..n).filter(|&i| labels[i] == c).collect();
                members
                    .iter()
                    .map(|&cand| (cand, members.iter().map(|&o| matrix.get(cand, o)).sum::<f64>()))
                    .fold(None::<(usize, f64)>, |best, (i, cost)| match best {
                        Some((_, bc)) if bc <= cost => best,
                        _ => Some((i, cost)),
                    })
                    .map_or(medoids[c], |(i, _)| i)
            })
            .collect();
        if new_medoids == medoids {
            break;
        }
        medoids = new_medoids;
    }
    Ok((labels, medoids))
}

pub fn kmedoids(matrix: &DistanceMatrix, k: usize, seed: u64) -> Result<Clustering, ClusterError> {
    let (labels, _) = kmedoids_matrix(matrix, k, seed)?;
    Ok(Clustering::from_labels(
        matrix.otype(),
        matrix.ids(),
        &labels,
        Algorithm::KMedoids,
        Some(seed),
        None,
    ))
}
