//! Object-centric event log model, JSON-OCEL I/O and flattening.

mod flatten;
mod json;
mod model;

pub use flatten::{flatten, object_traces, FlatEvent, FlattenedLog, Trace};
pub use json::{
    format_timestamp, parse_ocel, parse_timestamp, read_ocel, read_ocel_path, to_json_string,
    to_json_value, write_ocel_path,
};
pub use model::{AttrType, AttrValue, Event, ObjectRecord, Ocel, Timestamp};
