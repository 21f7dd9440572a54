//! Object profiles and their encoded feature table.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::ProfileError;
use crate::ocel::{flatten, AttrValue, Ocel};
use crate::par::{self, Execution};
use crate::trace_graph::{centrality_features, CentralityFeatures, PathWeight, TraceGraph};

/// Categorical value used when an object lacks an attribute.
pub const MISSING: &str = "⊥missing";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectProfile {
    pub object_id: String,
    pub otype: String,
    pub trace: Vec<String>,
    pub categorical: BTreeMap<String, String>,
    pub numeric: BTreeMap<String, f64>,
    pub graph_features: CentralityFeatures,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ProfileOptions {
    pub path_weight: PathWeight,
    pub execution: Execution,
}

pub fn build_profiles(log: &Ocel, otype: &str) -> Result<Vec<ObjectProfile>, ProfileError> {
    build_profiles_with(log, otype, ProfileOptions::default())
}

/// One profile per object of `otype` that occurs in at least one event,
/// ordered by object id.
pub fn build_profiles_with(
    log: &Ocel,
    otype: &str,
    opts: ProfileOptions,
) -> Result<Vec<ObjectProfile>, ProfileError> {
    let fl = flatten(log, otype)?;
    let traces: Vec<_> = fl.traces().into_values().collect();
    par::map_slice(opts.execution, &traces, |trace| {
        let graph = TraceGraph::from_trace(&trace.activities);
        let graph_features = centrality_features(&graph, opts.path_weight);
        let record = log
            .object(&trace.object_id)
            .expect("flattened cases are objects of the log");
        let mut categorical = BTreeMap::new();
        let mut numeric = BTreeMap::new();
        for (name, value) in &record.ovmap {
            if CentralityFeatures::NAMES.contains(&name.as_str()) {
                return Err(ProfileError::ColumnCollision(name.clone()));
            }
            match value {
                AttrValue::Int(_) | AttrValue::Float(_) => {
                    numeric.insert(name.clone(), value.as_f64().unwrap());
                }
                other => {
                    categorical.insert(name.clone(), other.to_string());
                }
            }
        }
        Ok(ObjectProfile {
            object_id: trace.object_id.clone(),
            otype: otype.to_string(),
            trace: trace.activities.clone(),
            categorical,
            numeric,
            graph_features,
        })
    })
    .into_iter()
    .collect()
}

/// Min-max metadata of one numeric column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericColumn {
    pub name: String,
    pub min: f64,
    pub max: f64,
    /// Rows whose value was missing and filled with the column mean.
    pub imputed_rows: Vec<usize>,
}

impl NumericColumn {
    fn scale(&self, raw: f64) -> f64 {
        let range = self.max - self.min;
        if range > 0.0 {
            (raw - self.min) / range
        } else {
            0.0
        }
    }

    /// Inverse of the min-max scaling.
    pub fn unscale(&self, scaled: f64) -> f64 {
        self.min + scaled * (self.max - self.min)
    }
}

/// Encoded profiles: one row per object, a trace column, categorical
/// columns and min-max scaled numeric columns (raw attributes followed by
/// the 12 graph features).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    otype: String,
    ids: Vec<String>,
    row_index: HashMap<String, usize>,
    traces: Vec<Vec<String>>,
    categorical_columns: Vec<String>,
    categorical: Vec<Vec<String>>,
    numeric_columns: Vec<NumericColumn>,
    numeric: Vec<Vec<f64>>,
}

pub fn encode(profiles: &[ObjectProfile]) -> Result<FeatureTable, ProfileError> {
    let first = profiles.first().ok_or(ProfileError::Empty)?;

    let cat_names: BTreeSet<&str> = profiles
        .iter()
        .flat_map(|p| p.categorical.keys().map(String::as_str))
        .collect();
    let raw_num_names: BTreeSet<&str> = profiles
        .iter()
        .flat_map(|p| p.numeric.keys().map(String::as_str))
        .collect();
    for name in &raw_num_names {
        if cat_names.contains(name) || CentralityFeatures::NAMES.contains(name) {
            return Err(ProfileError::ColumnCollision(name.to_string()));
        }
    }
    if let Some(name) = cat_names.iter().find(|n| CentralityFeatures::NAMES.contains(n)) {
        return Err(ProfileError::ColumnCollision(name.to_string()));
    }

    let categorical_columns: Vec<String> = cat_names.iter().map(|s| s.to_string()).collect();
    let categorical = profiles
        .iter()
        .map(|p| {
            categorical_columns
                .iter()
                .map(|c| p.categorical.get(c).cloned().unwrap_or_else(|| MISSING.to_string()))
                .collect()
        })
        .collect();

    let names: Vec<&str> = raw_num_names
        .iter()
        .copied()
        .chain(CentralityFeatures::NAMES)
        .collect();
    let n_raw = raw_num_names.len();

    // raw values, None where missing
    let mut raw: Vec<Vec<Option<f64>>> = Vec::with_capacity(profiles.len());
    for p in profiles {
        let graph = p.graph_features.values();
        let mut row = Vec::with_capacity(names.len());
        for (j, name) in names.iter().enumerate() {
            let v = if j < n_raw {
                p.numeric.get(*name).copied()
            } else {
                Some(graph[j - n_raw])
            };
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(ProfileError::NonFinite {
                        object: p.object_id.clone(),
                        column: name.to_string(),
                        value: v,
                    });
                }
            }
            row.push(v);
        }
        raw.push(row);
    }

    let mut numeric_columns = Vec::with_capacity(names.len());
    for (j, name) in names.iter().enumerate() {
        let present: Vec<f64> = raw.iter().filter_map(|r| r[j]).collect();
        let mean = present.iter().sum::<f64>() / present.len() as f64;
        let mut imputed_rows = Vec::new();
        for (i, row) in raw.iter_mut().enumerate() {
            if row[j].is_none() {
                row[j] = Some(mean);
                imputed_rows.push(i);
            }
        }
        let (min, max) = raw
            .iter()
            .map(|r| r[j].unwrap())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        numeric_columns.push(NumericColumn {
            name: name.to_string(),
            min,
            max,
            imputed_rows,
        });
    }

    let numeric = raw
        .iter()
        .map(|r| {
            r.iter()
                .zip(&numeric_columns)
                .map(|(v, col)| col.scale(v.unwrap()))
                .collect()
        })
        .collect();

    let ids: Vec<String> = profiles.iter().map(|p| p.object_id.clone()).collect();
    Ok(FeatureTable {
        otype: first.otype.clone(),
        row_index: index_rows(&ids),
        ids,
        traces: profiles.iter().map(|p| p.trace.clone()).collect(),
        categorical_columns,
        categorical,
        numeric_columns,
        numeric,
    })
}

fn index_rows(ids: &[String]) -> HashMap<String, usize> {
    ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect()
}

impl FeatureTable {
    pub fn otype(&self) -> &str {
        &self.otype
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row_of(&self, object_id: &str) -> Option<usize> {
        self.row_index.get(object_id).copied()
    }

    pub fn trace(&self, row: usize) -> &[String] {
        &self.traces[row]
    }

    pub fn categorical_columns(&self) -> &[String] {
        &self.categorical_columns
    }

    pub fn categorical_row(&self, row: usize) -> &[String] {
        &self.categorical[row]
    }

    pub fn numeric_columns(&self) -> &[NumericColumn] {
        &self.numeric_columns
    }

    /// Scaled numeric values of a row, each in `[0, 1]`.
    pub fn numeric_row(&self, row: usize) -> &[f64] {
        &self.numeric[row]
    }

    /// Raw value of a numeric cell recovered from the scaling metadata.
    pub fn raw_numeric(&self, row: usize, col: usize) -> f64 {
        self.numeric_columns[col].unscale(self.numeric[row][col])
    }

    /// Total column count: trace, categorical and numeric.
    pub fn n_columns(&self) -> usize {
        1 + self.categorical_columns.len() + self.numeric_columns.len()
    }

    /// Sorted distinct activities over all traces.
    pub fn activity_alphabet(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.traces.iter().flatten().map(String::as_str).collect();
        set.into_iter().collect()
    }
}

/// Writes profiles as CSV: object id, `;`-joined trace, categorical
/// attributes, raw numeric attributes, then the graph features. Missing
/// attributes are empty cells. An optional `# ` comment line comes first.
pub fn write_profiles_csv<W: Write>(
    profiles: &[ObjectProfile],
    mut out: W,
    comment: Option<&str>,
) -> Result<(), ProfileError> {
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    let cats: BTreeSet<&str> = profiles
        .iter()
        .flat_map(|p| p.categorical.keys().map(String::as_str))
        .collect();
    let nums: BTreeSet<&str> = profiles
        .iter()
        .flat_map(|p| p.numeric.keys().map(String::as_str))
        .collect();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["object_id", "trace"];
    header.extend(cats.iter().copied());
    header.extend(nums.iter().copied());
    header.extend(CentralityFeatures::NAMES);
    w.write_record(&header)?;
    for p in profiles {
        let mut rec = vec![p.object_id.clone(), p.trace.join(";")];
        rec.extend(cats.iter().map(|c| p.categorical.get(*c).cloned().unwrap_or_default()));
        rec.extend(
            nums.iter()
                .map(|n| p.numeric.get(*n).map(|v| v.to_string()).unwrap_or_default()),
        );
        rec.extend(p.graph_features.values().iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
