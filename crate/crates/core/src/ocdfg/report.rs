use std::fmt::Write;

use serde::Serialize;

use super::{density_improvement, fitness_proxy, model_density, model_size, size_improvement, Ocdfg};
use crate::error::ModelError;
use crate::ocel::Ocel;
use crate::sublog::{Approach, SubLogBundle};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelStats {
    pub label: String,
    /// Clustered objects; `None` for the main model.
    pub objects: Option<usize>,
    pub events: usize,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub size: u64,
    /// `None` for a model without activities.
    pub density: Option<f64>,
    pub fitness: f64,
}

impl ModelStats {
    fn of(label: String, objects: Option<usize>, model: &Ocdfg, log: &Ocel) -> ModelStats {
        ModelStats {
            label,
            objects,
            events: log.len(),
            n_nodes: model.n_nodes(),
            n_edges: model.n_edges(),
            size: model_size(model),
            density: model_density(model).ok(),
            fitness: fitness_proxy(model, log),
        }
    }
}

/// Complexity of the main model against the per-cluster models.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub otype: String,
    pub approach: Approach,
    pub main: ModelStats,
    pub clusters: Vec<ModelStats>,
    /// Object-count-weighted mean of the cluster fitness values.
    pub avg_fitness: f64,
    /// `None` when every cluster model is empty, so the ratio is undefined.
    pub csi: Option<f64>,
    pub cdi: Option<f64>,
    pub orphan_events: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_digest: Option<String>,
}

impl ComplexityReport {
    /// `log` is the log `main` was discovered from, normally
    /// [`relevant_log`](crate::sublog::relevant_log) of the clustered type.
    /// `models[i]` must be the model discovered from `bundle.clusters[i]`.
    pub fn new(
        log: &Ocel,
        main: &Ocdfg,
        bundle: &SubLogBundle,
        models: &[Ocdfg],
    ) -> Result<ComplexityReport, ModelError> {
        if bundle.clusters.is_empty() || models.is_empty() {
            return Err(ModelError::NoClusters);
        }
        assert_eq!(bundle.clusters.len(), models.len(), "one model per cluster");
        let weighted: Vec<(usize, &Ocdfg)> = bundle
            .clusters
            .iter()
            .zip(models)
            .map(|(c, m)| (c.objects.len(), m))
            .collect();
        let defined = |r: Result<f64, ModelError>| match r {
            Ok(v) => Ok(Some(v)),
            Err(ModelError::ZeroDenominator) => Ok(None),
            Err(e) => Err(e),
        };
        let csi = defined(size_improvement(main, &weighted))?;
        let cdi = defined(density_improvement(main, &weighted))?;

        let clusters: Vec<ModelStats> = bundle
            .clusters
            .iter()
            .zip(models)
            .map(|(c, m)| ModelStats::of(format!("cluster {}", c.index), Some(c.objects.len()), m, &c.log))
            .collect();
        let total: usize = clusters.iter().filter_map(|c| c.objects).sum();
        let avg_fitness = clusters
            .iter()
            .map(|c| c.objects.unwrap_or(0) as f64 * c.fitness)
            .sum::<f64>()
            / total as f64;

        Ok(ComplexityReport {
            otype: bundle.otype.clone(),
            approach: bundle.approach,
            main: ModelStats::of("main".into(), None, main, log),
            clusters,
            avg_fitness,
            csi,
            cdi,
            orphan_events: bundle.orphan_events.len(),
            config_digest: None,
        })
    }

    /// Aligned plain-text table, two decimals for real values. Bundle-level
    /// values are printed once, on the first cluster row.
    pub fn to_text(&self) -> String {
        const HEAD: [&str; 11] = [
            "Model", "Objects", "Events", "No. of Nodes", "No. of Edges", "Fitness", "Size", "Density",
            "Avg. Fitness", "CsI", "CdI",
        ];
        let f2 = |v: f64| format!("{v:.2}");
        let row = |s: &ModelStats| -> Vec<String> {
            vec![
                s.label.clone(),
                s.objects.map_or("-".into(), |n| n.to_string()),
                s.events.to_string(),
                s.n_nodes.to_string(),
                s.n_edges.to_string(),
                f2(s.fitness),
                s.size.to_string(),
                s.density.map_or("-".into(), f2),
                String::new(),
                String::new(),
                String::new(),
            ]
        };
        let mut rows = vec![HEAD.iter().map(|h| h.to_string()).collect::<Vec<_>>(), row(&self.main)];
        for (i, c) in self.clusters.iter().enumerate() {
            let mut r = row(c);
            if i == 0 {
                r[8] = f2(self.avg_fitness);
                r[9] = self.csi.map_or("-".into(), f2);
                r[10] = self.cdi.map_or("-".into(), f2);
            }
            rows.push(r);
        }
        let widths: Vec<usize> = (0..HEAD.len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();

        let mut out = String::new();
        let _ = writeln!(out, "object type: {}  approach: {}", self.otype, self.approach);
        if let Some(d) = &self.config_digest {
            let _ = writeln!(out, "config: {d}");
        }
        for (i, r) in rows.iter().enumerate() {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (v, w))| {
                    if c == 0 {
                        format!("{v:<w$}")
                    } else {
                        format!("{v:>w$}")
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
            if i == 0 {
                let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
            }
        }
        if self.approach == Approach::All {
            let _ = writeln!(out, "orphan events: {}", self.orphan_events);
        }
        out
    }
}
