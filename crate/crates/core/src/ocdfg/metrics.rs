use super::Ocdfg;
use crate::error::ModelError;

/// |A| · |F|.
pub fn model_size(m: &Ocdfg) -> u64 {
    (m.n_nodes() * m.n_edges()) as u64
}

/// |F| / |A|, edges per activity.
pub fn model_density(m: &Ocdfg) -> Result<f64, ModelError> {
    if m.n_nodes() == 0 {
        return Err(ModelError::EmptyModel);
    }
    Ok(m.n_edges() as f64 / m.n_nodes() as f64)
}

/// Density used inside cluster averages, where a cluster whose sub-log is
/// empty yields an empty model that adds nothing to the complexity.
fn cluster_density(m: &Ocdfg) -> f64 {
    model_density(m).unwrap_or(0.0)
}

fn improvement(
    main: f64,
    clusters: &[(usize, &Ocdfg)],
    metric: impl Fn(&Ocdfg) -> f64,
) -> Result<f64, ModelError> {
    if clusters.is_empty() {
        return Err(ModelError::NoClusters);
    }
    if let Some(i) = clusters.iter().position(|(n, _)| *n == 0) {
        return Err(ModelError::ZeroObjects(i));
    }
    let total: f64 = clusters.iter().map(|(n, _)| *n as f64).sum();
    let weighted: f64 = clusters.iter().map(|(n, m)| *n as f64 * metric(m)).sum::<f64>() / total;
    if weighted == 0.0 {
        return Err(ModelError::ZeroDenominator);
    }
    Ok(main / weighted)
}

/// Size of the main model over the object-count-weighted mean size of the
/// cluster models. Values above 1 mean the clusters are simpler.
pub fn size_improvement(main: &Ocdfg, clusters: &[(usize, &Ocdfg)]) -> Result<f64, ModelError> {
    improvement(model_size(main) as f64, clusters, |m| model_size(m) as f64)
}

/// Density analogue of [`size_improvement`].
pub fn density_improvement(main: &Ocdfg, clusters: &[(usize, &Ocdfg)]) -> Result<f64, ModelError> {
    improvement(model_density(main)?, clusters, cluster_density)
}
