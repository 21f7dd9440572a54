use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::model::{Event, Ocel};
use crate::error::OcelError;

/// Projection of an [`Ocel`] onto one object type.
///
/// Holds the events that reference at least one object of the type, in the
/// parent log's order, together with the objects of that type per event.
#[derive(Debug, Clone)]
pub struct FlattenedLog<'a> {
    otype: String,
    entries: Vec<FlatEvent<'a>>,
}

#[derive(Debug, Clone)]
pub struct FlatEvent<'a> {
    pub event: &'a Event,
    /// Objects of the flattening type in the event's omap, sorted.
    pub cases: Vec<&'a str>,
}

/// Activity sequence of one object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub object_id: String,
    pub activities: Vec<String>,
}

impl Trace {
    pub fn new(object_id: impl Into<String>, activities: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Trace {
            object_id: object_id.into(),
            activities: activities.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }
}

pub fn flatten<'a>(log: &'a Ocel, otype: &str) -> Result<FlattenedLog<'a>, OcelError> {
    log.ensure_type(otype)?;
    let entries = log
        .events()
        .iter()
        .filter_map(|event| {
            let cases: Vec<&str> = event
                .omap
                .iter()
                .map(String::as_str)
                .filter(|o| log.object_type_of(o) == Some(otype))
                .collect();
            (!cases.is_empty()).then_some(FlatEvent { event, cases })
        })
        .collect();
    Ok(FlattenedLog {
        otype: otype.to_string(),
        entries,
    })
}

impl<'a> FlattenedLog<'a> {
    pub fn otype(&self) -> &str {
        &self.otype
    }

    pub fn entries(&self) -> &[FlatEvent<'a>] {
        &self.entries
    }

    pub fn events(&self) -> impl Iterator<Item = &'a Event> + '_ {
        self.entries.iter().map(|e| e.event)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn case_map(&self, event_id: &str) -> Option<&[&'a str]> {
        self.entries
            .iter()
            .find(|e| e.event.id == event_id)
            .map(|e| e.cases.as_slice())
    }

    /// All objects of the type that occur in at least one event.
    pub fn case_ids(&self) -> BTreeSet<&'a str> {
        self.entries
            .iter()
            .flat_map(|e| e.cases.iter().copied())
            .collect()
    }

    pub fn extract_trace(&self, object_id: &str) -> Result<Trace, OcelError> {
        let activities: Vec<String> = self
            .entries
            .iter()
            .filter(|e| e.cases.contains(&object_id))
            .map(|e| e.event.activity.clone())
            .collect();
        if activities.is_empty() {
            return Err(OcelError::ObjectNotInLog {
                object: object_id.to_string(),
                otype: self.otype.clone(),
            });
        }
        Ok(Trace {
            object_id: object_id.to_string(),
            activities,
        })
    }

    /// Traces of every case object in one pass, keyed by object id.
    pub fn traces(&self) -> BTreeMap<&'a str, Trace> {
        let mut out: BTreeMap<&'a str, Trace> = BTreeMap::new();
        for entry in &self.entries {
            for &case in &entry.cases {
                out.entry(case)
                    .or_insert_with(|| Trace {
                        object_id: case.to_string(),
                        activities: Vec::new(),
                    })
                    .activities
                    .push(entry.event.activity.clone());
            }
        }
        out
    }
}

/// Per-object activity sequences for every object in the log, in one pass
/// over the events. Equivalent to flattening on each object's own type.
pub fn object_traces(log: &Ocel) -> BTreeMap<&str, Vec<&str>> {
    let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for event in log.events() {
        for obj in &event.omap {
            out.entry(obj.as_str()).or_default().push(event.activity.as_str());
        }
    }
    out
}
