use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use chrono::{DateTime, FixedOffset, SubsecRound};
use serde::{Deserialize, Serialize};

use crate::error::OcelError;

/// Declared value type of an attribute name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrType {
    String,
    Integer,
    Float,
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
}

impl AttrValue {
    pub fn attr_type(&self) -> AttrType {
        match self {
            AttrValue::Str(_) => AttrType::String,
            AttrValue::Int(_) => AttrType::Integer,
            AttrValue::Float(_) => AttrType::Float,
            AttrValue::Bool(_) => AttrType::Boolean,
        }
    }

    /// Numeric view of the value, if it has one.
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            AttrValue::Int(i) => Some(i as f64),
            AttrValue::Float(f) => Some(f),
            _ => None,
        }
    }

    fn coerce(self, to: AttrType) -> AttrValue {
        match (to, self) {
            (AttrType::Float, AttrValue::Int(i)) => AttrValue::Float(i as f64),
            (AttrType::String, v @ AttrValue::Str(_)) => v,
            (AttrType::String, v) => AttrValue::Str(v.to_string()),
            (_, v) => v,
        }
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Str(s) => f.write_str(s),
            AttrValue::Int(i) => write!(f, "{i}"),
            AttrValue::Float(x) => write!(f, "{x}"),
            AttrValue::Bool(b) => write!(f, "{b}"),
        }
    }
}

pub type Timestamp = DateTime<FixedOffset>;

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub id: String,
    pub activity: String,
    pub timestamp: Timestamp,
    pub omap: BTreeSet<String>,
    pub vmap: BTreeMap<String, AttrValue>,
}

impl Event {
    pub fn new(
        id: impl Into<String>,
        activity: impl Into<String>,
        timestamp: Timestamp,
        omap: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        Event {
            id: id.into(),
            activity: activity.into(),
            timestamp,
            omap: omap.into_iter().map(Into::into).collect(),
            vmap: BTreeMap::new(),
        }
    }

    pub fn with_attr(mut self, name: impl Into<String>, value: AttrValue) -> Self {
        self.vmap.insert(name.into(), value);
        self
    }

    /// Total order over events: timestamp first, then event id.
    pub fn log_order(&self, other: &Event) -> Ordering {
        self.timestamp
            .cmp(&other.timestamp)
            .then_with(|| self.id.cmp(&other.id))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectRecord {
    pub id: String,
    pub otype: String,
    pub ovmap: BTreeMap<String, AttrValue>,
}

impl ObjectRecord {
    pub fn new(id: impl Into<String>, otype: impl Into<String>) -> Self {
        ObjectRecord {
            id: id.into(),
            otype: otype.into(),
            ovmap: BTreeMap::new(),
        }
    }

    pub fn with_attr(mut self, name: impl Into<String>, value: AttrValue) -> Self {
        self.ovmap.insert(name.into(), value);
        self
    }
}

/// An object-centric event log.
///
/// Immutable once built. Events are held in the log's total order
/// (ascending timestamp, ties broken by event id), every object referenced
/// by an event exists, and every attribute value conforms to the type
/// recorded for its name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ocel {
    events: Vec<Event>,
    index: HashMap<String, usize>,
    objects: BTreeMap<String, ObjectRecord>,
    object_types: BTreeSet<String>,
    attribute_types: BTreeMap<String, AttrType>,
}


impl Ocel {
    /// Validates and assembles a log. Object types are taken from the
    /// objects; use [`Ocel::with_declared_types`] to add types that have no
    /// objects.
    pub fn new(events: Vec<Event>, objects: Vec<ObjectRecord>) -> Result<Ocel, OcelError> {
        Self::with_declared_types(events, objects, std::iter::empty::<String>())
    }

    pub fn with_declared_types(
        mut events: Vec<Event>,
        objects: Vec<ObjectRecord>,
        declared: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Ocel, OcelError> {
        let mut object_map = BTreeMap::new();
        let mut object_types: BTreeSet<String> = declared.into_iter().map(Into::into).collect();
        for obj in objects {
            if obj.otype.is_empty() {
                return Err(OcelError::EmptyObjectType(obj.id));
            }
            object_types.insert(obj.otype.clone());
            let id = obj.id.clone();
            if object_map.insert(id.clone(), obj).is_some() {
                return Err(OcelError::DuplicateObject(id));
            }
        }

        let mut seen = BTreeSet::new();
        for ev in &mut events {
            if !seen.insert(ev.id.clone()) {
                return Err(OcelError::DuplicateEvent(ev.id.clone()));
            }
            if ev.activity.is_empty() {
                return Err(OcelError::EmptyActivity(ev.id.clone()));
            }
            if let Some(missing) = ev.omap.iter().find(|o| !object_map.contains_key(*o)) {
                return Err(OcelError::DanglingObject {
                    event: ev.id.clone(),
                    object: missing.clone(),
                    path: format!("ocel:events/{}/ocel:omap", ev.id),
                });
            }
            ev.timestamp = ev.timestamp.trunc_subsecs(3);
        }

        let attribute_types = unify_attribute_types(&mut events, &mut object_map);
        events.sort_by(Event::log_order);
        let index = build_index(&events);

        Ok(Ocel {
            events,
            index,
            objects: object_map,
            object_types,
            attribute_types,
        })
    }

    /// Events in log order.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event(&self, id: &str) -> Option<&Event> {
        self.index.get(id).map(|&i| &self.events[i])
    }

    /// Rank of an event in the log's total order.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn objects(&self) -> impl Iterator<Item = &ObjectRecord> {
        self.objects.values()
    }

    pub fn object(&self, id: &str) -> Option<&ObjectRecord> {
        self.objects.get(id)
    }

    pub fn object_type_of(&self, id: &str) -> Option<&str> {
        self.objects.get(id).map(|o| o.otype.as_str())
    }

    pub fn object_types(&self) -> &BTreeSet<String> {
        &self.object_types
    }

    pub fn attribute_types(&self) -> &BTreeMap<String, AttrType> {
        &self.attribute_types
    }

    /// Distinct activities of all events, sorted.
    pub fn activities(&self) -> BTreeSet<&str> {
        self.events.iter().map(|e| e.activity.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn ensure_type(&self, otype: &str) -> Result<(), OcelError> {
        if self.object_types.contains(otype) {
            Ok(())
        } else {
            Err(OcelError::UnknownObjectType {
                otype: otype.to_string(),
                known: self.object_types.iter().cloned().collect(),
            })
        }
    }

    /// Sub-log with the events accepted by `keep`. Full omaps and vmaps are
    /// kept; objects are restricted to those referenced by kept events.
    /// The declared object types are inherited unchanged.
    pub fn retain_events(&self, mut keep: impl FnMut(&Event) -> bool) -> Ocel {
        let events: Vec<Event> = self.events.iter().filter(|e| keep(e)).cloned().collect();
        let referenced: BTreeSet<&str> = events
            .iter()
            .flat_map(|e| e.omap.iter().map(String::as_str))
            .collect();
        let objects: BTreeMap<String, ObjectRecord> = referenced
            .into_iter()
            .map(|id| (id.to_string(), self.objects[id].clone()))
            .collect();
        let used: BTreeSet<&str> = events
            .iter()
            .flat_map(|e| e.vmap.keys())
            .chain(objects.values().flat_map(|o| o.ovmap.keys()))
            .map(String::as_str)
            .collect();
        let attribute_types = self
            .attribute_types
            .iter()
            .filter(|(k, _)| used.contains(k.as_str()))
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        let index = build_index(&events);
        Ocel {
            events,
            index,
            objects,
            object_types: self.object_types.clone(),
            attribute_types,
        }
    }
}

fn build_index(events: &[Event]) -> HashMap<String, usize> {
    events
        .iter()
        .enumerate()
        .map(|(i, e)| (e.id.clone(), i))
        .collect()
}

/// One type per attribute name: integers alone stay integers, integers
/// mixed with floats become floats, any other mix falls back to string.
fn unify_attribute_types(
    events: &mut [Event],
    objects: &mut BTreeMap<String, ObjectRecord>,
) -> BTreeMap<String, AttrType> {
    let mut types: BTreeMap<String, AttrType> = BTreeMap::new();
    let maps = events
        .iter()
        .map(|e| &e.vmap)
        .chain(objects.values().map(|o| &o.ovmap));
    for map in maps {
        for (name, value) in map {
            let t = value.attr_type();
            types
                .entry(name.clone())
                .and_modify(|cur| *cur = join(*cur, t))
                .or_insert(t);
        }
    }

    let maps = events
        .iter_mut()
        .map(|e| &mut e.vmap)
        .chain(objects.values_mut().map(|o| &mut o.ovmap));
    for map in maps {
        for (name, value) in map.iter_mut() {
            let target = types[name];
            if value.attr_type() != target {
                let v = std::mem::replace(value, AttrValue::Bool(false));
                *value = v.coerce(target);
            }
        }
    }
    types
}

fn join(a: AttrType, b: AttrType) -> AttrType {
    use AttrType::*;
    match (a, b) {
        (x, y) if x == y => x,
        (Integer, Float) | (Float, Integer) => Float,
        _ => String,
    }
}
