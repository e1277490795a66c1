//! JSON form of a process:
//! `{"universe": [...], "delta": {"a": "1/2"}, "gamma": {...}}`.
//!
//! Zero entries are omitted on output and default to zero on input. Values
//! are rationals in lowest terms, written as strings.

use std::collections::BTreeMap;

use serde::de::{Deserialize, Deserializer, Error as _};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{CoreError, Result};
use crate::membership::Membership;
use crate::process::FuzzyProcess;
use crate::rational::parse_rational;
use crate::scalar::Scalar;
use crate::universe::ExecutionUniverse;
use crate::{Process, Rational};

struct NonZero<'a, T>(&'a [String], &'a [Membership<T>]);

impl<T: Scalar> Serialize for NonZero<'_, T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<_> = self
            .0
            .iter()
            .zip(self.1)
            .filter(|(_, m)| m.is_positive())
            .collect();
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (label, value) in entries {
            map.serialize_entry(label, &value.to_string())?;
        }
        map.end()
    }
}

impl<T: Scalar> Serialize for FuzzyProcess<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let labels = self.universe().labels();
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("universe", labels)?;
        map.serialize_entry("delta", &NonZero(labels, self.delta()))?;
        map.serialize_entry("gamma", &NonZero(labels, self.gamma()))?;
        map.end()
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProcess {
    universe: Vec<String>,
    #[serde(default)]
    delta: BTreeMap<String, String>,
    #[serde(default)]
    gamma: BTreeMap<String, String>,
}

fn parse_entries(map: BTreeMap<String, String>) -> Result<Vec<(String, Rational)>> {
    map.into_iter()
        .map(|(label, text)| {
            parse_rational(&text)
                .map(|v| (label, v))
                .map_err(|_| CoreError::InvalidRational(text))
        })
        .collect()
}

impl RawProcess {
    fn build(self) -> Result<Process> {
        let universe = ExecutionUniverse::new(self.universe)?;
        Process::from_maps(
            &universe,
            parse_entries(self.delta)?,
            parse_entries(self.gamma)?,
        )
    }
}

impl<'de> Deserialize<'de> for Process {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        RawProcess::deserialize(deserializer)?
            .build()
            .map_err(D::Error::custom)
    }
}

impl Process {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("process serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawProcess =
            serde_json::from_str(text).map_err(|e| CoreError::Json(e.to_string()))?;
        raw.build()
    }
}
