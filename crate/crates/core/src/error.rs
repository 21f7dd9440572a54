use thiserror::Error;

/// Errors raised while reading, building or projecting an event log.
#[derive(Debug, Error)]
pub enum OcelError {
    #[error("malformed JSON-OCEL: {0}")]
    Json(#[from] serde_json::Error),

    #[error("missing mandatory key `{path}`")]
    MissingKey { path: String },

    #[error("unexpected value at `{path}`: expected {expected}")]
    WrongType { path: String, expected: &'static str },

    #[error("event `{event}` references undeclared object `{object}` (at `{path}`)")]
    DanglingObject {
        event: String,
        object: String,
        path: String,
    },

    #[error("event `{event}` has unparseable timestamp {value:?} (at `{path}`)")]
    BadTimestamp {
        event: String,
        value: String,
        path: String,
    },

    #[error("duplicate event id `{0}` in `ocel:events`")]
    DuplicateEvent(String),

    #[error("duplicate object id `{0}` in `ocel:objects`")]
    DuplicateObject(String),

    #[error("event `{0}` has an empty activity")]
    EmptyActivity(String),

    #[error("object `{0}` has an empty object type")]
    EmptyObjectType(String),

    #[error("unknown object type `{otype}`; known types: {known:?}")]
    UnknownObjectType { otype: String, known: Vec<String> },

    #[error("object `{object}` does not occur in the `{otype}`-flattened log")]
    ObjectNotInLog { object: String, otype: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node `{0}` is not part of the graph")]
    UnknownNode(String),

    #[error("invalid edge ({from}, {to}): {reason}")]
    InvalidEdge {
        from: String,
        to: String,
        reason: &'static str,
    },
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error(transparent)]
    Log(#[from] OcelError),

    #[error("cannot encode an empty profile set")]
    Empty,

    #[error("object `{object}` has non-finite value {value} in numeric column `{column}`")]
    NonFinite {
        object: String,
        column: String,
        value: f64,
    },

    #[error("attribute `{0}` collides with a graph feature or is both numeric and categorical")]
    ColumnCollision(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum DistanceError {
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid distance weights: {0}")]
    InvalidWeights(&'static str),

    #[error("object `{0}` is not a row of the feature table")]
    NotInTable(String),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("a distance matrix needs at least 2 profiles, got {0}")]
    TooFewProfiles(usize),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("k = {k} is invalid for {n} objects (need 1 <= k <= n)")]
    InvalidK { k: usize, n: usize },

    #[error("Calinski-Harabasz needs 2 <= k < n, got k = {k} with n = {n}")]
    ScoreRange { k: usize, n: usize },

    #[error("cannot cluster an empty table")]
    Empty,

    #[error("empty k range {0}..={1}")]
    EmptyRange(usize, usize),

    #[error("clustering does not cover the table: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Distance(#[from] DistanceError),
}

#[derive(Debug, Error)]
pub enum SublogError {
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("object `{object}` has type `{found}`, expected `{expected}`")]
    WrongObjectType {
        object: String,
        found: String,
        expected: String,
    },

    #[error(transparent)]
    Log(#[from] OcelError),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("density is undefined for a model without activities")]
    EmptyModel,

    #[error("improvement ratio needs at least one cluster")]
    NoClusters,

    #[error("cluster {0} has zero objects")]
    ZeroObjects(usize),

    #[error("weighted cluster average is zero")]
    ZeroDenominator,

    #[error("invalid edge {0}")]
    InvalidEdge(String),
}
