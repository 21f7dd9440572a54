//! JSON-OCEL import and export.
//!
//! The reader keeps the order and multiplicity of the `ocel:events` and
//! `ocel:objects` entries so duplicate ids are reported instead of being
//! silently overwritten. The writer emits keys in a fixed order so the same
//! log always serializes to the same bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};
use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::model::{AttrValue, Event, ObjectRecord, Ocel, Timestamp};
use crate::error::OcelError;

const EVENTS: &str = "ocel:events";
const OBJECTS: &str = "ocel:objects";
const GLOBAL_LOG: &str = "ocel:global-log";

/// Map entries in file order, duplicates included.
struct Entries(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;
        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Entries, A::Error> {
                let mut out = Vec::with_capacity(map.size_hint().unwrap_or(0));
                while let Some((k, v)) = map.next_entry::<String, Value>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(EntriesVisitor)
    }
}

#[derive(Deserialize)]
struct RawLog {
    #[serde(rename = "ocel:global-log", default)]
    global_log: Option<Value>,
    #[serde(rename = "ocel:events")]
    events: Option<Entries>,
    #[serde(rename = "ocel:objects")]
    objects: Option<Entries>,
}

pub fn parse_ocel(bytes: &[u8]) -> Result<Ocel, OcelError> {
    let raw: RawLog = serde_json::from_slice(bytes)?;
    let events = raw.events.ok_or_else(|| missing(EVENTS))?;
    let objects = raw.objects.ok_or_else(|| missing(OBJECTS))?;

    let mut seen_objects = BTreeSet::new();
    let mut parsed_objects = Vec::with_capacity(objects.0.len());
    for (id, value) in objects.0 {
        if !seen_objects.insert(id.clone()) {
            return Err(OcelError::DuplicateObject(id));
        }
        parsed_objects.push(parse_object(id, value)?);
    }

    let mut seen_events = BTreeSet::new();
    let mut parsed_events = Vec::with_capacity(events.0.len());
    for (id, value) in events.0 {
        if !seen_events.insert(id.clone()) {
            return Err(OcelError::DuplicateEvent(id));
        }
        let ev = parse_event(id, value)?;
        if let Some(obj) = ev.omap.iter().find(|o| !seen_objects.contains(*o)) {
            return Err(OcelError::DanglingObject {
                event: ev.id.clone(),
                object: obj.clone(),
                path: format!("{EVENTS}/{}/ocel:omap", ev.id),
            });
        }
        parsed_events.push(ev);
    }

    let declared: Vec<String> = raw
        .global_log
        .as_ref()
        .and_then(|g| g.get("ocel:object-types"))
        .and_then(Value::as_array)
        .map(|a| a.iter().filter_map(Value::as_str).map(str::to_string).collect())
        .unwrap_or_default();

    Ocel::with_declared_types(parsed_events, parsed_objects, declared)
}

pub fn read_ocel(mut reader: impl Read) -> Result<Ocel, OcelError> {
    let mut buf = Vec::new();
    reader.read_to_end(&mut buf)?;
    parse_ocel(&buf)
}

pub fn read_ocel_path(path: impl AsRef<Path>) -> Result<Ocel, OcelError> {
    parse_ocel(&std::fs::read(path)?)
}

fn missing(path: impl Into<String>) -> OcelError {
    OcelError::MissingKey { path: path.into() }
}

fn parse_event(id: String, value: Value) -> Result<Event, OcelError> {
    let base = format!("{EVENTS}/{id}");
    let Value::Object(mut obj) = value else {
        return Err(OcelError::WrongType {
            path: base,
            expected: "object",
        });
    };

    let activity = match obj.remove("ocel:activity") {
        Some(Value::String(s)) => s,
        Some(_) => {
            return Err(OcelError::WrongType {
                path: format!("{base}/ocel:activity"),
                expected: "string",
            })
        }
        None => return Err(missing(format!("{base}/ocel:activity"))),
    };

    let ts_path = format!("{base}/ocel:timestamp");
    let timestamp = match obj.remove("ocel:timestamp") {
        Some(Value::String(s)) => parse_timestamp(&s).ok_or(OcelError::BadTimestamp {
            event: id.clone(),
            value: s,
            path: ts_path,
        })?,
        Some(other) => {
            return Err(OcelError::BadTimestamp {
                event: id.clone(),
                value: other.to_string(),
                path: ts_path,
            })
        }
        None => return Err(missing(ts_path)),
    };

    let omap_path = format!("{base}/ocel:omap");
    let omap = match obj.remove("ocel:omap") {
        Some(Value::Array(items)) => items
            .into_iter()
            .map(|v| match v {
                Value::String(s) => Ok(s),
                _ => Err(OcelError::WrongType {
                    path: omap_path.clone(),
                    expected: "array of object ids",
                }),
            })
            .collect::<Result<BTreeSet<_>, _>>()?,
        Some(_) => {
            return Err(OcelError::WrongType {
                path: omap_path,
                expected: "array of object ids",
            })
        }
        None => return Err(missing(omap_path)),
    };

    let vmap = parse_attr_map(obj.remove("ocel:vmap"), &format!("{base}/ocel:vmap"))?;

    if activity.is_empty() {
        return Err(OcelError::EmptyActivity(id));
    }
    Ok(Event {
        id,
        activity,
        timestamp,
        omap,
        vmap,
    })
}

fn parse_object(id: String, value: Value) -> Result<ObjectRecord, OcelError> {
    let base = format!("{OBJECTS}/{id}");
    let Value::Object(mut obj) = value else {
        return Err(OcelError::WrongType {
            path: base,
            expected: "object",
        });
    };
    let otype = match obj.remove("ocel:type") {
        Some(Value::String(s)) => s,
        Some(_) => {
            return Err(OcelError::WrongType {
                path: format!("{base}/ocel:type"),
                expected: "string",
            })
        }
        None => return Err(missing(format!("{base}/ocel:type"))),
    };
    let ovmap = parse_attr_map(obj.remove("ocel:ovmap"), &format!("{base}/ocel:ovmap"))?;
    Ok(ObjectRecord { id, otype, ovmap })
}

fn parse_attr_map(
    value: Option<Value>,
    path: &str,
) -> Result<BTreeMap<String, AttrValue>, OcelError> {
    let map = match value {
        None | Some(Value::Null) => return Ok(BTreeMap::new()),
        Some(Value::Object(m)) => m,
        Some(_) => {
            return Err(OcelError::WrongType {
                path: path.to_string(),
                expected: "object",
            })
        }
    };
    Ok(map
        .into_iter()
        .filter_map(|(k, v)| attr_from_json(v).map(|a| (k, a)))
        .collect())
}

fn attr_from_json(v: Value) -> Option<AttrValue> {
    match v {
        Value::Null => None,
        Value::Bool(b) => Some(AttrValue::Bool(b)),
        Value::Number(n) => Some(match n.as_i64() {
            Some(i) => AttrValue::Int(i),
            None => AttrValue::Float(n.as_f64()?),
        }),
        Value::String(s) => Some(AttrValue::Str(s)),
        other => Some(AttrValue::Str(other.to_string())),
    }
}

/// Accepts RFC 3339 with `T` or a space separator; timestamps without an
/// offset are read as UTC.
pub fn parse_timestamp(s: &str) -> Option<Timestamp> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t);
    }
    for fmt in ["%Y-%m-%d %H:%M:%S%.f%:z", "%Y-%m-%d %H:%M:%S%.f%z", "%Y-%m-%dT%H:%M:%S%.f%z"] {
        if let Ok(t) = DateTime::parse_from_str(s, fmt) {
            return Some(t);
        }
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t.and_utc().fixed_offset());
        }
    }
    None
}

pub fn format_timestamp(t: &Timestamp) -> String {
    t.format("%Y-%m-%dT%H:%M:%S%.3f%:z").to_string()
}

fn attr_to_json(v: &AttrValue) -> Value {
    match v {
        AttrValue::Str(s) => Value::String(s.clone()),
        AttrValue::Int(i) => json!(i),
        AttrValue::Float(f) => json!(f),
        AttrValue::Bool(b) => Value::Bool(*b),
    }
}

fn attr_map_to_json(map: &BTreeMap<String, AttrValue>) -> Value {
    Value::Object(
        map.iter()
            .map(|(k, v)| (k.clone(), attr_to_json(v)))
            .collect(),
    )
}

/// Serializes a log. `extra_global` entries are appended to
/// `ocel:global-log` after the standard keys.
pub fn to_json_value(log: &Ocel, extra_global: &[(&str, Value)]) -> Value {
    let mut global = Map::new();
    global.insert("ocel:version".into(), json!("1.0"));
    global.insert("ocel:ordering".into(), json!("timestamp"));
    global.insert(
        "ocel:attribute-names".into(),
        json!(log.attribute_types().keys().collect::<Vec<_>>()),
    );
    global.insert(
        "ocel:object-types".into(),
        json!(log.object_types().iter().collect::<Vec<_>>()),
    );
    for (k, v) in extra_global {
        global.insert((*k).to_string(), v.clone());
    }

    let events: Map<String, Value> = log
        .events()
        .iter()
        .map(|e| {
            (
                e.id.clone(),
                json!({
                    "ocel:activity": e.activity,
                    "ocel:timestamp": format_timestamp(&e.timestamp),
                    "ocel:omap": e.omap.iter().collect::<Vec<_>>(),
                    "ocel:vmap": attr_map_to_json(&e.vmap),
                }),
            )
        })
        .collect();

    let objects: Map<String, Value> = log
        .objects()
        .map(|o| {
            (
                o.id.clone(),
                json!({
                    "ocel:type": o.otype,
                    "ocel:ovmap": attr_map_to_json(&o.ovmap),
                }),
            )
        })
        .collect();

    let mut root = Map::new();
    root.insert("ocel:global-event".into(), json!({"ocel:activity": "__INVALID__"}));
    root.insert("ocel:global-object".into(), json!({"ocel:type": "__INVALID__"}));
    root.insert(GLOBAL_LOG.into(), Value::Object(global));
    root.insert(EVENTS.into(), Value::Object(events));
    root.insert(OBJECTS.into(), Value::Object(objects));
    Value::Object(root)
}

pub fn to_json_string(log: &Ocel) -> String {
    serde_json::to_string_pretty(&to_json_value(log, &[])).expect("JSON values always serialize")
}

pub fn write_ocel_path(
    log: &Ocel,
    path: impl AsRef<Path>,
    extra_global: &[(&str, Value)],
) -> Result<(), OcelError> {
    let mut text = serde_json::to_string_pretty(&to_json_value(log, extra_global))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
