//! Mixed-type dissimilarity between object profiles.
//!
//! A profile distance blends three components, each bounded by 1:
//! Levenshtein distance between traces divided by the longer trace length,
//! Euclidean distance over the scaled numeric columns divided by the square
//! root of their count, and the mean string-boolean mismatch over the
//! categorical columns. The blend is the weighted mean of the three.

use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DistanceError;
use crate::par::{self, Execution};
use crate::profile::{FeatureTable, ObjectProfile};

/// Edit distance with unit-cost substitution, insertion and deletion.
pub fn levenshtein<T: PartialEq>(s: &[T], t: &[T]) -> usize {
    if s.len() < t.len() {
        return levenshtein(t, s);
    }
    let mut prev: Vec<usize> = (0..=t.len()).collect();
    let mut cur = vec![0; t.len() + 1];
    for (i, a) in s.iter().enumerate() {
        cur[0] = i + 1;
        for (j, b) in t.iter().enumerate() {
            let sub = prev[j] + usize::from(a != b);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

pub fn euclidean(x: &[f64], y: &[f64]) -> Result<f64, DistanceError> {
    if x.len() != y.len() {
        return Err(DistanceError::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

/// 0 when the values are equal, 1 otherwise.
pub fn string_boolean(a: &str, b: &str) -> u8 {
    u8::from(a != b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceWeights {
    pub trace: f64,
    pub numeric: f64,
    pub categorical: f64,
}

impl DistanceWeights {
    pub fn new(trace: f64, numeric: f64, categorical: f64) -> Result<Self, DistanceError> {
        let ws = [trace, numeric, categorical];
        if ws.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(DistanceError::InvalidWeights("weights must be finite and non-negative"));
        }
        if ws.iter().all(|w| *w == 0.0) {
            return Err(DistanceError::InvalidWeights("at least one weight must be positive"));
        }
        Ok(DistanceWeights {
            trace,
            numeric,
            categorical,
        })
    }

    fn total(&self) -> f64 {
        self.trace + self.numeric + self.categorical
    }
}

impl Default for DistanceWeights {
    fn default() -> Self {
        DistanceWeights {
            trace: 1.0,
            numeric: 1.0,
            categorical: 1.0,
        }
    }
}

impl FromStr for DistanceWeights {
    type Err = DistanceError;

    /// Parses `trace,numeric,categorical`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| DistanceError::InvalidWeights("expected three comma-separated numbers"))?;
        match parts.as_slice() {
            [t, n, c] => DistanceWeights::new(*t, *n, *c),
            _ => Err(DistanceError::InvalidWeights("expected three comma-separated numbers")),
        }
    }
}

impl FeatureTable {
    /// Profile distance between two rows, in `[0, 1]`.
    pub fn row_distance(&self, i: usize, j: usize, w: &DistanceWeights) -> f64 {
        let (ti, tj) = (self.trace(i), self.trace(j));
        let longest = ti.len().max(tj.len()).max(1) as f64;
        let trace = levenshtein(ti, tj) as f64 / longest;

        let (xi, xj) = (self.numeric_row(i), self.numeric_row(j));
        let numeric = if xi.is_empty() {
            0.0
        } else {
            euclidean(xi, xj).expect("rows share the table schema") / (xi.len() as f64).sqrt()
        };

        let (ci, cj) = (self.categorical_row(i), self.categorical_row(j));
        let categorical = if ci.is_empty() {
            0.0
        } else {
            ci.iter()
                .zip(cj)
                .map(|(a, b)| f64::from(string_boolean(a, b)))
                .sum::<f64>()
                / ci.len() as f64
        };

        (w.trace * trace + w.numeric * numeric + w.categorical * categorical) / w.total()
    }
}

pub fn profile_distance(
    p: &ObjectProfile,
    q: &ObjectProfile,
    w: &DistanceWeights,
    table: &FeatureTable,
) -> Result<f64, DistanceError> {
    let row = |prof: &ObjectProfile| {
        table
            .row_of(&prof.object_id)
            .ok_or_else(|| DistanceError::NotInTable(prof.object_id.clone()))
    };
    Ok(table.row_distance(row(p)?, row(q)?, w))
}

/// Symmetric pairwise distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    otype: String,
    ids: Vec<String>,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix from row-major values, checking the invariants.
    pub fn from_values(
        otype: impl Into<String>,
        ids: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self, DistanceError> {
        let n = ids.len();
        if values.len() != n * n {
            return Err(DistanceError::InvalidMatrix(format!(
                "{} values for {n} ids",
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(DistanceError::InvalidMatrix(format!("non-zero diagonal at {i}")));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(DistanceError::InvalidMatrix(format!("bad value at ({i}, {j})")));
                }
                if v != values[j * n + i] {
                    return Err(DistanceError::InvalidMatrix(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(DistanceMatrix {
            otype: otype.into(),
            ids,
            values,
        })
    }

    pub fn otype(&self) -> &str {
        &self.otype
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), DistanceError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![""];
        header.extend(self.ids.iter().map(String::as_str));
        w.write_record(&header)?;
        for (i, id) in self.ids.iter().enumerate() {
            let mut rec = vec![id.clone()];
            rec.extend(self.row(i).iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn distance_matrix(
    profiles: &[ObjectProfile],
    w: &DistanceWeights,
    table: &FeatureTable,
) -> Result<DistanceMatrix, DistanceError> {
    distance_matrix_with(profiles, w, table, Execution::default())
}

pub fn distance_matrix_with(
    profiles: &[ObjectProfile],
    w: &DistanceWeights,
    table: &FeatureTable,
    exec: Execution,
) -> Result<DistanceMatrix, DistanceError> {
    if profiles.len() < 2 {
        return Err(DistanceError::TooFewProfiles(profiles.len()));
    }
    let rows: Vec<usize> = profiles
        .iter()
        .map(|p| {
            table
                .row_of(&p.object_id)
                .ok_or_else(|| DistanceError::NotInTable(p.object_id.clone()))
        })
        .collect::<Result<_, _>>()?;
    let ids = profiles.iter().map(|p| p.object_id.clone()).collect();
    Ok(fill_matrix(table, &rows, ids, w, exec))
}

/// Distance matrix over every row of the table, in table order.
pub fn table_distance_matrix(
    table: &FeatureTable,
    w: &DistanceWeights,
    exec: Execution,
) -> Result<DistanceMatrix, DistanceError> {
    if table.len() < 2 {
        return Err(DistanceError::TooFewProfiles(table.len()));
    }
    let rows: Vec<usize> = (0..table.len()).collect();
    Ok(fill_matrix(table, &rows, table.ids().to_vec(), w, exec))
}

fn fill_matrix(
    table: &FeatureTable,
    rows: &[usize],
    ids: Vec<String>,
    w: &DistanceWeights,
    exec: Execution,
) -> DistanceMatrix {
    let n = rows.len();
    // upper triangle per row, each cell computed independently
    let upper: Vec<Vec<f64>> = par::map_range(exec, n, |i| {
        (i + 1..n)
            .map(|j| table.row_distance(rows[i], rows[j], w))
            .collect()
    });
    let mut values = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (off, &d) in row.iter().enumerate() {
            let j = i + 1 + off;
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    DistanceMatrix {
        otype: table.otype().to_string(),
        ids,
        values,
    }
}
