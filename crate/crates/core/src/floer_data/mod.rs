//! Abstract Floer data: graded critical orbits plus the integer counts
//! `n`, `m`, `u`, `v` that the boundary operators are assembled from.

pub(crate) mod generate;
pub(crate) mod json;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SwfError};

pub use generate::{generate_admissible, Profile};
pub use json::{parse, serialize, serialize_pretty, FloerDataJson};
pub use validate::validate;

/// Id given to the reducible orbit by the generators in this crate.
pub const THETA_ID: &str = "theta";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalOrbit {
    pub id: String,
    pub index: i64,
    pub reducible: bool,
}

impl CriticalOrbit {
    pub fn free(id: impl Into<String>, index: i64) -> Self {
        Self {
            id: id.into(),
            index,
            reducible: false,
        }
    }

    pub fn theta(index: i64) -> Self {
        Self {
            id: THETA_ID.into(),
            index,
            reducible: true,
        }
    }
}

/// Sparse integer counts. `u` is keyed by the target of θ → c, `v` by the source of a → θ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientSystem {
    pub n: BTreeMap<(String, String), i64>,
    pub m: BTreeMap<(String, String), i64>,
    pub u: BTreeMap<String, i64>,
    pub v: BTreeMap<String, i64>,
}

/// Address of a single coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoefficientKey {
    N(String, String),
    M(String, String),
    U(String),
    V(String),
}

impl fmt::Display for CoefficientKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientKey::N(a, b) => write!(f, "n[{a},{b}]"),
            CoefficientKey::M(a, c) => write!(f, "m[{a},{c}]"),
            CoefficientKey::U(c) => write!(f, "u[{c}]"),
            CoefficientKey::V(a) => write!(f, "v[{a}]"),
        }
    }
}

impl CoefficientSystem {
    pub fn get(&self, key: &CoefficientKey) -> i64 {
        let found = match key {
            CoefficientKey::N(a, b) => self.n.get(&(a.clone(), b.clone())),
            CoefficientKey::M(a, c) => self.m.get(&(a.clone(), c.clone())),
            CoefficientKey::U(c) => self.u.get(c),
            CoefficientKey::V(a) => self.v.get(a),
        };
        found.copied().unwrap_or(0)
    }

    pub fn set(&mut self, key: &CoefficientKey, value: i64) {
        match key {
            CoefficientKey::N(a, b) => self.n.insert((a.clone(), b.clone()), value),
            CoefficientKey::M(a, c) => self.m.insert((a.clone(), c.clone()), value),
            CoefficientKey::U(c) => self.u.insert(c.clone(), value),
            CoefficientKey::V(a) => self.v.insert(a.clone(), value),
        };
    }

    /// Copy without explicit zero entries.
    pub fn pruned(&self) -> Self {
        Self {
            n: self
                .n
                .iter()
                .filter(|(_, v)| **v != 0)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            m: self
                .m
                .iter()
                .filter(|(_, v)| **v != 0)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            u: self
                .u
                .iter()
                .filter(|(_, v)| **v != 0)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            v: self
                .v
                .iter()
                .filter(|(_, v)| **v != 0)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }
}

/// Orbits plus coefficients, with every key checked against the index constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloerData {
    label: String,
    orbits: Vec<CriticalOrbit>,
    coeffs: CoefficientSystem,
}

impl FloerData {
    /// Checks ids, the single-reducible rule and every coefficient key.
    pub fn new(
        label: impl Into<String>,
        mut orbits: Vec<CriticalOrbit>,
        coeffs: CoefficientSystem,
    ) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for o in &orbits {
            if !ids.insert(o.id.as_str()) {
                return Err(SwfError::constraint(
                    format!("orbit {}", o.id),
                    "duplicate orbit id",
                ));
            }
        }
        if orbits.iter().filter(|o| o.reducible).count() > 1 {
            return Err(SwfError::constraint(
                "orbits",
                "more than one reducible orbit",
            ));
        }
        orbits.sort_by(|a, b| (a.index, &a.id).cmp(&(b.index, &b.id)));
        let data = Self {
            label: label.into(),
            orbits,
            coeffs,
        };
        for key in data.keys() {
            data.check_key(&key)?;
        }
        Ok(data)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// All orbits, sorted by `(index, id)`.
    pub fn orbits(&self) -> &[CriticalOrbit] {
        &self.orbits
    }

    pub fn coeffs(&self) -> &CoefficientSystem {
        &self.coeffs
    }

    pub fn theta(&self) -> Option<&CriticalOrbit> {
        self.orbits.iter().find(|o| o.reducible)
    }

    pub fn theta_index(&self) -> Option<i64> {
        self.theta().map(|t| t.index)
    }

    /// Free orbits, sorted by `(index, id)`.
    pub fn free_orbits(&self) -> impl Iterator<Item = &CriticalOrbit> + '_ {
        self.orbits.iter().filter(|o| !o.reducible)
    }

    pub fn free_at(&self, index: i64) -> impl Iterator<Item = &CriticalOrbit> + '_ {
        self.free_orbits().filter(move |o| o.index == index)
    }

    pub fn orbit(&self, id: &str) -> Option<&CriticalOrbit> {
        self.orbits.iter().find(|o| o.id == id)
    }

    /// Least index over all orbits, θ included.
    pub fn min_index(&self) -> Option<i64> {
        self.orbits.first().map(|o| o.index)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.orbits.last().map(|o| o.index)
    }

    /// Every key present in the coefficient system, zero entries included.
    pub fn keys(&self) -> Vec<CoefficientKey> {
        let c = &self.coeffs;
        c.n.keys()
            .map(|(a, b)| CoefficientKey::N(a.clone(), b.clone()))
            .chain(
                c.m.keys()
                    .map(|(a, b)| CoefficientKey::M(a.clone(), b.clone())),
            )
            .chain(c.u.keys().map(|k| CoefficientKey::U(k.clone())))
            .chain(c.v.keys().map(|k| CoefficientKey::V(k.clone())))
            .collect()
    }

    /// Every key the index constraints allow, present or not.
    pub fn admissible_keys(&self) -> Vec<CoefficientKey> {
        let free: Vec<&CriticalOrbit> = self.free_orbits().collect();
        let mut keys = Vec::new();
        for a in &free {
            for b in &free {
                if a.index - b.index == 1 {
                    keys.push(CoefficientKey::N(a.id.clone(), b.id.clone()));
                }
                if a.index - b.index == 2 {
                    keys.push(CoefficientKey::M(a.id.clone(), b.id.clone()));
                }
            }
        }
        if let Some(t) = self.theta_index() {
            for c in &free {
                if t - c.index == 2 {
                    keys.push(CoefficientKey::U(c.id.clone()));
                }
                if c.index - t == 1 {
                    keys.push(CoefficientKey::V(c.id.clone()));
                }
            }
        }
        keys
    }

    fn free_index(&self, key: &CoefficientKey, id: &str) -> Result<i64> {
        match self.orbit(id) {
            Some(o) if !o.reducible => Ok(o.index),
            Some(_) => Err(SwfError::constraint(
                key.to_string(),
                format!("{id} is the reducible orbit"),
            )),
            None => Err(SwfError::constraint(
                key.to_string(),
                format!("unknown orbit {id}"),
            )),
        }
    }

    fn check_key(&self, key: &CoefficientKey) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(SwfError::constraint(key.to_string(), what.to_string()))
            }
        };
        match key {
            CoefficientKey::N(a, b) => {
                let (ia, ib) = (self.free_index(key, a)?, self.free_index(key, b)?);
                need(ia - ib == 1, "n needs index(a) - index(b) = 1")
            }
            CoefficientKey::M(a, c) => {
                let (ia, ic) = (self.free_index(key, a)?, self.free_index(key, c)?);
                need(ia - ic == 2, "m needs index(a) - index(c) = 2")
            }
            CoefficientKey::U(c) => {
                let t = self.theta_index().ok_or_else(|| {
                    SwfError::constraint(key.to_string(), "u entry without a reducible orbit")
                })?;
                let ic = self.free_index(key, c)?;
                need(t - ic == 2, "u needs index(theta) - index(c) = 2")
            }
            CoefficientKey::V(a) => {
                let t = self.theta_index().ok_or_else(|| {
                    SwfError::constraint(key.to_string(), "v entry without a reducible orbit")
                })?;
                let ia = self.free_index(key, a)?;
                need(ia - t == 1, "v needs index(a) - index(theta) = 1")
            }
        }
    }

    /// Copy with one coefficient replaced; the key must satisfy the index constraints.
    pub fn with_coefficient(&self, key: &CoefficientKey, value: i64) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.set(key, value);
        FloerData::new(self.label.clone(), self.orbits.clone(), coeffs)
    }

    /// Copy with every index (θ included) moved by `by`.
    pub fn shifted(&self, by: i64) -> Self {
        let orbits = self
            .orbits
            .iter()
            .map(|o| CriticalOrbit {
                index: o.index + by,
                ..o.clone()
            })
            .collect();
        Self {
            label: self.label.clone(),
            orbits,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The reducible point alone, at index 0.
    pub fn ex0() -> Self {
        FloerData::new(
            "EX0",
            vec![CriticalOrbit::theta(0)],
            CoefficientSystem::default(),
        )
        .expect("EX0 is well formed")
    }

    /// θ at 0 and one free orbit `a` at index 1 with `v(a) = 1`.
    pub fn ex1() -> Self {
        let mut coeffs = CoefficientSystem::default();
        coeffs.v.insert("a".into(), 1);
        FloerData::new(
            "EX1",
            vec![CriticalOrbit::theta(0), CriticalOrbit::free("a", 1)],
            coeffs,
        )
        .expect("EX1 is well formed")
    }
}
