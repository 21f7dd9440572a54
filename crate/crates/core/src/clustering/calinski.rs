use super::{canonical_labels, embed, Clustering};
use crate::error::ClusterError;
use crate::profile::FeatureTable;

/// Calinski-Harabasz index: between-cluster dispersion over `k - 1` divided
/// by within-cluster dispersion over `n - k`. Zero within-cluster
/// dispersion yields `f64::INFINITY`.
pub fn calinski_harabasz_points(points: &[Vec<f64>], labels: &[usize]) -> Result<f64, ClusterError> {
    let n = points.len();
    let labels = canonical_labels(labels);
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    if k < 2 || k >= n {
        return Err(ClusterError::ScoreRange { k, n });
    }
    let dim = points[0].len();

    let mut overall = vec![0.0; dim];
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(&labels) {
        counts[l] += 1;
        for d in 0..dim {
            overall[d] += p[d];
            sums[l][d] += p[d];
        }
    }
    overall.iter_mut().for_each(|v| *v /= n as f64);
    let centroids: Vec<Vec<f64>> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &c)| s.into_iter().map(|v| v / c as f64).collect())
        .collect();

    let between: f64 = centroids
        .iter()
        .zip(&counts)
        .map(|(c, &m)| m as f64 * c.iter().zip(&overall).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
        .sum();
    let within: f64 = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| p.iter().zip(&centroids[l]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
        .sum();

    if within == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((between / (k - 1) as f64) / (within / (n - k) as f64))
}

/// Index of a clustering over the table's embedding.
pub fn calinski_harabasz(table: &FeatureTable, clustering: &Clustering) -> Result<f64, ClusterError> {
    let labels = clustering
        .labels_for(table.ids())
        .ok_or_else(|| ClusterError::Mismatch("an object of the table has no cluster".into()))?;
    if clustering.n_objects() != table.len() {
        return Err(ClusterError::Mismatch(format!(
            "{} clustered objects for {} rows",
            clustering.n_objects(),
            table.len()
        )));
    }
    calinski_harabasz_points(&embed(table).rows, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_value() {
        // 1-D: {0, 2} and {10, 12}; centroids 1 and 11, grand mean 6
        // B = 2*25 + 2*25 = 100, W = 4*1 = 4, CH = (100/1)/(4/2) = 50
        let pts = vec![vec![0.0], vec![2.0], vec![10.0], vec![12.0]];
        assert_eq!(calinski_harabasz_points(&pts, &[0, 0, 1, 1]).unwrap(), 50.0);
    }

    #[test]
    fn identical_points_infinite() {
        let pts = vec![vec![1.0, 1.0]; 4];
        assert_eq!(calinski_harabasz_points(&pts, &[0, 0, 1, 1]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn out_of_range_k() {
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        assert!(matches!(calinski_harabasz_points(&pts, &[0, 0, 0]), Err(ClusterError::ScoreRange { k: 1, n: 3 })));
        assert!(matches!(calinski_harabasz_points(&pts, &[0, 1, 2]), Err(ClusterError::ScoreRange { k: 3, n: 3 })));
    }
}
