use std::collections::BTreeSet;

use crate::profile::FeatureTable;

/// Real-valued view of a feature table for centroid-based methods.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub dims: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Vectorizes each row: relative activity frequencies of the trace over the
/// table's activity alphabet, one-hot categorical values, then the scaled
/// numeric columns. Every coordinate lies in `[0, 1]`.
pub fn embed(table: &FeatureTable) -> Embedding {
    let alphabet = table.activity_alphabet();
    let cat_values: Vec<Vec<&str>> = (0..table.categorical_columns().len())
        .map(|c| {
            let set: BTreeSet<&str> = (0..table.len())
                .map(|r| table.categorical_row(r)[c].as_str())
                .collect();
            set.into_iter().collect()
        })
        .collect();

    let mut dims: Vec<String> = alphabet.iter().map(|a| format!("trace:{a}")).collect();
    for (name, values) in table.categorical_columns().iter().zip(&cat_values) {
        dims.extend(values.iter().map(|v| format!("{name}={v}")));
    }
    dims.extend(table.numeric_columns().iter().map(|c| c.name.clone()));

    let rows = (0..table.len())
        .map(|r| {
            let mut row = Vec::with_capacity(dims.len());
            let trace = table.trace(r);
            let len = trace.len().max(1) as f64;
            row.extend(
                alphabet
                    .iter()
                    .map(|a| trace.iter().filter(|t| t.as_str() == *a).count() as f64 / len),
            );
            for (c, values) in cat_values.iter().enumerate() {
                let v = table.categorical_row(r)[c].as_str();
                row.extend(values.iter().map(|x| if *x == v { 1.0 } else { 0.0 }));
            }
            row.extend_from_slice(table.numeric_row(r));
            row
        })
        .collect();

    Embedding { dims, rows }
}
