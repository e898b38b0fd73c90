use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CoefficientSystem, CriticalOrbit, FloerData};
use crate::error::{Result, SwfError};

/// Wire form of [`FloerData`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloerDataJson {
    #[serde(default)]
    pub label: String,
    pub orbits: Vec<CriticalOrbit>,
    #[serde(default)]
    pub n: Vec<(String, String, i64)>,
    #[serde(default)]
    pub m: Vec<(String, String, i64)>,
    #[serde(default)]
    pub u: Vec<(String, i64)>,
    #[serde(default)]
    pub v: Vec<(String, i64)>,
}

fn pairs(
    rows: Vec<(String, String, i64)>,
    family: &str,
) -> Result<BTreeMap<(String, String), i64>> {
    let mut out = BTreeMap::new();
    for (a, b, k) in rows {
        let key = format!("{family}[{a},{b}]");
        if out.insert((a, b), k).is_some() {
            return Err(SwfError::constraint(key, "duplicate entry"));
        }
    }
    Ok(out)
}

fn singles(rows: Vec<(String, i64)>, family: &str) -> Result<BTreeMap<String, i64>> {
    let mut out = BTreeMap::new();
    for (a, k) in rows {
        let key = format!("{family}[{a}]");
        if out.insert(a, k).is_some() {
            return Err(SwfError::constraint(key, "duplicate entry"));
        }
    }
    Ok(out)
}

impl TryFrom<FloerDataJson> for FloerData {
    type Error = SwfError;

    fn try_from(j: FloerDataJson) -> Result<Self> {
        let coeffs = CoefficientSystem {
            n: pairs(j.n, "n")?,
            m: pairs(j.m, "m")?,
            u: singles(j.u, "u")?,
            v: singles(j.v, "v")?,
        };
        FloerData::new(j.label, j.orbits, coeffs)
    }
}

impl From<&FloerData> for FloerDataJson {
    fn from(d: &FloerData) -> Self {
        let c = d.coeffs();
        FloerDataJson {
            label: d.label().to_string(),
            orbits: d.orbits().to_vec(),
            n: c.n
                .iter()
                .map(|((a, b), k)| (a.clone(), b.clone(), *k))
                .collect(),
            m: c.m
                .iter()
                .map(|((a, b), k)| (a.clone(), b.clone(), *k))
                .collect(),
            u: c.u.iter().map(|(a, k)| (a.clone(), *k)).collect(),
            v: c.v.iter().map(|(a, k)| (a.clone(), *k)).collect(),
        }
    }
}

/// Deserializes JSON, reporting the path to the offending field on failure.
pub(crate) fn from_json_slice<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| SwfError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn parse(bytes: &[u8]) -> Result<FloerData> {
    let raw: FloerDataJson = from_json_slice(bytes)?;
    FloerData::try_from(raw)
}

pub fn serialize(data: &FloerData) -> Vec<u8> {
    serde_json::to_vec(&FloerDataJson::from(data)).expect("floer data always serializes")
}

pub fn serialize_pretty(data: &FloerData) -> Vec<u8> {
    serde_json::to_vec_pretty(&FloerDataJson::from(data)).expect("floer data always serializes")
}
