//! Wall crossing: the chain maps `I`, `J` and the homotopy `H` between the
//! equivariant complexes on the two sides of a wall, their verification, and
//! the Euler-characteristic wall-crossing formulas.
//!
//! Side 0 carries `θ₀`, side 1 carries `θ₁` with `μ(θ₁) − μ(θ₀) = −2·sf_c`.
//! `I` goes from side 0 to side 1, `J` back, and `H` is a degree-one map on
//! side 0 with `id − J∘I = D₀H + HD₀`.

mod euler;
mod generate;
mod maps;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SwfError};
use crate::floer_data::json::from_json_slice;
use crate::floer_data::{FloerData, FloerDataJson};
use crate::linalg::{format_q, parse_q, Q};

pub use euler::{euler_from_equivariant, wallcross_check, RankMismatch, WallcrossReport};
pub use generate::{
    birth_crossing, death_crossing, double_crossing, same_chamber_crossing, solve_crossing,
};
pub use maps::{
    build_h, build_i, build_j, formal_h, formal_i, formal_j, identity_checks, verify_crossing,
    verify_crossing_with, CrossingReport, IdentityCheck,
};

/// Which map a family feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MapRole {
    I,
    J,
    H,
    /// Counts that enter only the boundary identities.
    Data,
}

/// Coefficient families. Primed orbits live on side 1, unprimed on side 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `η_a → η_a′` and `1_a → 1_a′`, same coefficient
    NI,
    /// `η_a → 1_b′`
    MI,
    /// `η_a → θ₁`
    RI,
    /// `1_a → θ₁`
    PI,
    /// `θ₀ → 1_b′`
    SI,
    /// `θ₀ → η_a′`
    TI,
    NJ,
    MJ,
    RJ,
    PJ,
    SJ,
    TJ,
    /// `η_a → η_b` with `+k`, `1_a → 1_b` with `−k`
    NP,
    /// `η_a → 1_c`
    MP,
    /// `η_a → θ₀`
    PTheta,
    /// `θ₀ → 1_b`
    PThetaOut,
    /// `θ₀ → η_a`
    HTheta,
    /// Obstruction counts `a → θ` on the side whose reducible sits lower.
    ObsLow,
    /// Obstruction counts `θ → a` on the side whose reducible sits higher.
    ObsHigh,
}

pub const FAMILIES: [Family; 19] = [
    Family::NI,
    Family::MI,
    Family::RI,
    Family::PI,
    Family::SI,
    Family::TI,
    Family::NJ,
    Family::MJ,
    Family::RJ,
    Family::PJ,
    Family::SJ,
    Family::TJ,
    Family::NP,
    Family::MP,
    Family::PTheta,
    Family::PThetaOut,
    Family::HTheta,
    Family::ObsLow,
    Family::ObsHigh,
];

/// Orbit part of a family term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum End {
    Eta,
    One,
    Theta,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::NI => "nI",
            Family::MI => "mI",
            Family::RI => "rI",
            Family::PI => "pI",
            Family::SI => "sI",
            Family::TI => "tI",
            Family::NJ => "nJ",
            Family::MJ => "mJ",
            Family::RJ => "rJ",
            Family::PJ => "pJ",
            Family::SJ => "sJ",
            Family::TJ => "tJ",
            Family::NP => "nP",
            Family::MP => "mP",
            Family::PTheta => "nPtheta",
            Family::PThetaOut => "nPtheta_out",
            Family::HTheta => "hTheta",
            Family::ObsLow => "obs_low",
            Family::ObsHigh => "obs_high",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        FAMILIES.into_iter().find(|f| f.name() == name)
    }

    pub fn role(self) -> MapRole {
        use Family::*;
        match self {
            NI | MI | RI | PI | SI | TI => MapRole::I,
            NJ | MJ | RJ | PJ | SJ | TJ => MapRole::J,
            NP | MP | PTheta | PThetaOut | HTheta => MapRole::H,
            ObsLow | ObsHigh => MapRole::Data,
        }
    }

    /// Whether the slot names two orbits.
    pub fn is_pair(self) -> bool {
        matches!(
            self,
            Family::NI | Family::MI | Family::NJ | Family::MJ | Family::NP | Family::MP
        )
    }

    /// `(from, to, sign)` for every term the family contributes to its map.
    pub(crate) fn terms(self) -> &'static [(End, End, i64)] {
        use Family::*;
        match self {
            NI | NJ => &[(End::Eta, End::Eta, 1), (End::One, End::One, 1)],
            NP => &[(End::Eta, End::Eta, 1), (End::One, End::One, -1)],
            MI | MJ | MP => &[(End::Eta, End::One, 1)],
            RI | RJ | PTheta => &[(End::Eta, End::Theta, 1)],
            PI | PJ => &[(End::One, End::Theta, 1)],
            SI | SJ | PThetaOut => &[(End::Theta, End::One, 1)],
            TI | TJ | HTheta => &[(End::Theta, End::Eta, 1)],
            ObsLow | ObsHigh => &[],
        }
    }

    /// For one-orbit map families, whether that orbit is the target.
    fn single_is_target(self) -> bool {
        matches!(self.terms().first(), Some((End::Theta, _, _)))
    }
}

/// One coefficient address: a family plus one or two orbit ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub family: Family,
    pub first: String,
    pub second: Option<String>,
}

impl Slot {
    pub fn pair(family: Family, a: impl Into<String>, b: impl Into<String>) -> Self {
        Self {
            family,
            first: a.into(),
            second: Some(b.into()),
        }
    }

    pub fn single(family: Family, a: impl Into<String>) -> Self {
        Self {
            family,
            first: a.into(),
            second: None,
        }
    }

    /// Source and target orbit ids for the map the slot feeds (`None` = θ).
    pub(crate) fn ends(&self) -> (Option<&str>, Option<&str>) {
        match &self.second {
            Some(b) => (Some(&self.first), Some(b)),
            None if self.family.single_is_target() => (None, Some(&self.first)),
            None => (Some(&self.first), None),
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.second {
            Some(b) => write!(f, "{}[{},{}]", self.family.name(), self.first, b),
            None => write!(f, "{}[{}]", self.family.name(), self.first),
        }
    }
}

pub type Families = BTreeMap<Slot, Q>;

/// Two sides of a wall with the coefficient families of `I`, `J`, `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingData {
    label: String,
    side0: FloerData,
    side1: FloerData,
    sf_c: i64,
    families: Families,
}

/// Side a family's source and target orbits live on.
fn sides(role: MapRole) -> (usize, usize) {
    match role {
        MapRole::I => (0, 1),
        MapRole::J => (1, 0),
        MapRole::H => (0, 0),
        MapRole::Data => unreachable!("data families have no map"),
    }
}

impl CrossingData {
    /// Checks the grading of the two reducibles and the index constraint of every slot.
    pub fn new(
        label: impl Into<String>,
        side0: FloerData,
        side1: FloerData,
        sf_c: i64,
        families: Families,
    ) -> Result<Self> {
        let t0 = side0.theta_index().ok_or(SwfError::MissingReducible)?;
        let t1 = side1.theta_index().ok_or(SwfError::MissingReducible)?;
        if t1 - t0 != -2 * sf_c {
            return Err(SwfError::constraint(
                "sf_c",
                format!(
                    "index(theta1) - index(theta0) = {} but -2*sf_c = {}",
                    t1 - t0,
                    -2 * sf_c
                ),
            ));
        }
        let cd = Self {
            label: label.into(),
            side0,
            side1,
            sf_c,
            families: families.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        };
        for slot in cd.families.keys() {
            cd.check_slot(slot)?;
        }
        Ok(cd)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn side0(&self) -> &FloerData {
        &self.side0
    }

    pub fn side1(&self) -> &FloerData {
        &self.side1
    }

    pub fn side(&self, which: usize) -> &FloerData {
        if which == 0 {
            &self.side0
        } else {
            &self.side1
        }
    }

    pub fn sf_c(&self) -> i64 {
        self.sf_c
    }

    pub fn families(&self) -> &Families {
        &self.families
    }

    pub fn get(&self, slot: &Slot) -> Q {
        self.families.get(slot).cloned().unwrap_or_else(Q::zero)
    }

    pub fn theta0(&self) -> i64 {
        self.side0.theta_index().expect("checked on construction")
    }

    pub fn theta1(&self) -> i64 {
        self.side1.theta_index().expect("checked on construction")
    }

    /// `(low, high)` side numbers by reducible index; `None` when they coincide.
    pub fn low_high(&self) -> Option<(usize, usize)> {
        match self.sf_c.signum() {
            -1 => Some((0, 1)),
            1 => Some((1, 0)),
            _ => None,
        }
    }

    /// Copy with a new family table, rechecked.
    pub fn with_families(&self, families: Families) -> Result<Self> {
        Self::new(
            self.label.clone(),
            self.side0.clone(),
            self.side1.clone(),
            self.sf_c,
            families,
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn free_index(&self, slot: &Slot, side: usize, id: &str) -> Result<i64> {
        match self.side(side).orbit(id) {
            Some(o) if !o.reducible => Ok(o.index),
            Some(_) => Err(SwfError::constraint(
                slot.to_string(),
                format!("{id} is the reducible orbit"),
            )),
            None => Err(SwfError::constraint(
                slot.to_string(),
                format!("no free orbit {id} on side{side}"),
            )),
        }
    }

    pub(crate) fn check_slot(&self, slot: &Slot) -> Result<()> {
        let family = slot.family;
        if family.is_pair() != slot.second.is_some() {
            let want = if family.is_pair() {
                "two orbits"
            } else {
                "one orbit"
            };
            return Err(SwfError::constraint(
                slot.to_string(),
                format!("family takes {want}"),
            ));
        }
        let fail = |what: String| Err(SwfError::constraint(slot.to_string(), what));
        if family.role() == MapRole::Data {
            let Some((low, high)) = self.low_high() else {
                return fail("obstruction counts need sf_c != 0".into());
            };
            let (side, offset) = if family == Family::ObsLow {
                (low, 2)
            } else {
                (high, -3)
            };
            let theta = self.side(side).theta_index().expect("checked");
            let index = self.free_index(slot, side, &slot.first)?;
            if index != theta + offset {
                return fail(format!("needs index {} on side{side}", theta + offset));
            }
            return Ok(());
        }
        let (s, t) = sides(family.role());
        let degree = i64::from(family.role() == MapRole::H);
        let (from, to) = slot.ends();
        let index_of = |side: usize, id: Option<&str>| -> Result<i64> {
            match id {
                Some(id) => self.free_index(slot, side, id),
                None => Ok(self.side(side).theta_index().expect("checked")),
            }
        };
        let (is, it) = (index_of(s, from)?, index_of(t, to)?);
        for (a, b, _) in family.terms() {
            let ds = is + i64::from(*a == End::One);
            let dt = it + i64::from(*b == End::One);
            if ds + degree != dt {
                return fail(format!(
                    "term {a:?} -> {b:?} would change degree from {ds} to {dt}"
                ));
            }
        }
        Ok(())
    }

    /// EX1 crossing to a lone reducible at index 2.
    pub fn ex1() -> Self {
        let side1 = FloerData::ex0().shifted(2).with_label("EX0+2");
        let mut fam = Families::new();
        fam.insert(Slot::single(Family::SJ, "a"), Q::from_integer(1.into()));
        fam.insert(Slot::single(Family::PI, "a"), Q::from_integer(1.into()));
        fam.insert(Slot::single(Family::HTheta, "a"), Q::from_integer(1.into()));
        CrossingData::new("EX1-crossing", FloerData::ex1(), side1, -1, fam)
            .expect("EX1 crossing is well formed")
    }

    /// The identity crossing of `data` onto itself.
    pub fn trivial(data: &FloerData) -> Result<Self> {
        let mut fam = Families::new();
        for o in data.free_orbits() {
            fam.insert(
                Slot::pair(Family::NI, &o.id, &o.id),
                Q::from_integer(1.into()),
            );
            fam.insert(
                Slot::pair(Family::NJ, &o.id, &o.id),
                Q::from_integer(1.into()),
            );
        }
        CrossingData::new(
            format!("{} trivial", data.label()),
            data.clone(),
            data.clone(),
            0,
            fam,
        )
    }
}

/// Wire form of a coefficient: integer or `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub(crate) fn from_q(value: &Q) -> Self {
        match (value.is_integer(), i64::try_from(value.numer())) {
            (true, Ok(n)) => Number::Int(n),
            _ => Number::Text(format_q(value)),
        }
    }

    pub(crate) fn to_q(&self) -> Option<Q> {
        match self {
            Number::Int(n) => Some(Q::from_integer((*n).into())),
            Number::Text(s) => parse_q(s),
        }
    }
}

/// One family row: `[a, b, k]` or `[a, k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Pair(String, String, Number),
    Single(String, Number),
}

/// Wire form of [`CrossingData`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingJson {
    #[serde(default)]
    pub label: String,
    pub side0: FloerDataJson,
    pub side1: FloerDataJson,
    pub sf_c: i64,
    #[serde(default, rename = "nI")]
    pub n_i: Vec<Entry>,
    #[serde(default, rename = "mI")]
    pub m_i: Vec<Entry>,
    #[serde(default, rename = "rI")]
    pub r_i: Vec<Entry>,
    #[serde(default, rename = "pI")]
    pub p_i: Vec<Entry>,
    #[serde(default, rename = "sI")]
    pub s_i: Vec<Entry>,
    #[serde(default, rename = "tI")]
    pub t_i: Vec<Entry>,
    #[serde(default, rename = "nJ")]
    pub n_j: Vec<Entry>,
    #[serde(default, rename = "mJ")]
    pub m_j: Vec<Entry>,
    #[serde(default, rename = "rJ")]
    pub r_j: Vec<Entry>,
    #[serde(default, rename = "pJ")]
    pub p_j: Vec<Entry>,
    #[serde(default, rename = "sJ")]
    pub s_j: Vec<Entry>,
    #[serde(default, rename = "tJ")]
    pub t_j: Vec<Entry>,
    #[serde(default, rename = "nP")]
    pub n_p: Vec<Entry>,
    #[serde(default, rename = "mP")]
    pub m_p: Vec<Entry>,
    #[serde(default, rename = "nPtheta")]
    pub p_theta: Vec<Entry>,
    #[serde(default, rename = "nPtheta_out")]
    pub p_theta_out: Vec<Entry>,
    #[serde(default, rename = "hTheta")]
    pub h_theta: Vec<Entry>,
    #[serde(default)]
    pub obs_low: Vec<Entry>,
    #[serde(default)]
    pub obs_high: Vec<Entry>,
}

impl CrossingJson {
    fn family_mut(&mut self, f: Family) -> &mut Vec<Entry> {
        match f {
            Family::NI => &mut self.n_i,
            Family::MI => &mut self.m_i,
            Family::RI => &mut self.r_i,
            Family::PI => &mut self.p_i,
            Family::SI => &mut self.s_i,
            Family::TI => &mut self.t_i,
            Family::NJ => &mut self.n_j,
            Family::MJ => &mut self.m_j,
            Family::RJ => &mut self.r_j,
            Family::PJ => &mut self.p_j,
            Family::SJ => &mut self.s_j,
            Family::TJ => &mut self.t_j,
            Family::NP => &mut self.n_p,
            Family::MP => &mut self.m_p,
            Family::PTheta => &mut self.p_theta,
            Family::PThetaOut => &mut self.p_theta_out,
            Family::HTheta => &mut self.h_theta,
            Family::ObsLow => &mut self.obs_low,
            Family::ObsHigh => &mut self.obs_high,
        }
    }
}

impl TryFrom<CrossingJson> for CrossingData {
    type Error = SwfError;

    fn try_from(mut j: CrossingJson) -> Result<Self> {
        let mut families = Families::new();
        for f in FAMILIES {
            for entry in std::mem::take(j.family_mut(f)) {
                let (slot, value) = match entry {
                    Entry::Pair(a, b, k) => (Slot::pair(f, a, b), k),
                    Entry::Single(a, k) => (Slot::single(f, a), k),
                };
                let q = value.to_q().ok_or_else(|| {
                    SwfError::constraint(slot.to_string(), "coefficient is not a rational")
                })?;
                if families.contains_key(&slot) {
                    return Err(SwfError::constraint(slot.to_string(), "duplicate entry"));
                }
                families.insert(slot, q);
            }
        }
        let side0 = FloerData::try_from(j.side0)?;
        let side1 = FloerData::try_from(j.side1)?;
        CrossingData::new(j.label, side0, side1, j.sf_c, families)
    }
}

impl From<&CrossingData> for CrossingJson {
    fn from(cd: &CrossingData) -> Self {
        let mut j = CrossingJson {
            label: cd.label.clone(),
            side0: FloerDataJson::from(&cd.side0),
            side1: FloerDataJson::from(&cd.side1),
            sf_c: cd.sf_c,
            n_i: vec![],
            m_i: vec![],
            r_i: vec![],
            p_i: vec![],
            s_i: vec![],
            t_i: vec![],
            n_j: vec![],
            m_j: vec![],
            r_j: vec![],
            p_j: vec![],
            s_j: vec![],
            t_j: vec![],
            n_p: vec![],
            m_p: vec![],
            p_theta: vec![],
            p_theta_out: vec![],
            h_theta: vec![],
            obs_low: vec![],
            obs_high: vec![],
        };
        for (slot, value) in &cd.families {
            let k = Number::from_q(value);
            let entry = match &slot.second {
                Some(b) => Entry::Pair(slot.first.clone(), b.clone(), k),
                None => Entry::Single(slot.first.clone(), k),
            };
            j.family_mut(slot.family).push(entry);
        }
        j
    }
}

pub fn parse_crossing(bytes: &[u8]) -> Result<CrossingData> {
    CrossingData::try_from(from_json_slice::<CrossingJson>(bytes)?)
}

pub fn serialize_crossing(cd: &CrossingData) -> Vec<u8> {
    serde_json::to_vec(&CrossingJson::from(cd)).expect("crossing data always serializes")
}

pub fn serialize_crossing_pretty(cd: &CrossingData) -> Vec<u8> {
    serde_json::to_vec_pretty(&CrossingJson::from(cd)).expect("crossing data always serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer_data::CriticalOrbit;

    #[test]
    fn ex1_round_trips() {
        let cd = CrossingData::ex1();
        let bytes = serialize_crossing(&cd);
        assert_eq!(parse_crossing(&bytes).unwrap(), cd);
    }

    #[test]
    fn grading_mismatch_is_refused() {
        let err = CrossingData::new("", FloerData::ex1(), FloerData::ex0(), -1, Families::new())
            .unwrap_err();
        assert!(matches!(err, SwfError::Constraint { ref key, .. } if key == "sf_c"));
    }

    #[test]
    fn bad_slots_name_their_key() {
        let side1 = FloerData::ex0().shifted(2);
        let mut fam = Families::new();
        fam.insert(Slot::single(Family::RJ, "a"), Q::from_integer(1.into()));
        let err = CrossingData::new("", FloerData::ex1(), side1.clone(), -1, fam).unwrap_err();
        assert!(matches!(err, SwfError::Constraint { ref key, .. } if key == "rJ[a]"));

        let mut fam = Families::new();
        fam.insert(Slot::single(Family::TI, "a"), Q::from_integer(1.into()));
        let err = CrossingData::new("", FloerData::ex1(), side1, -1, fam).unwrap_err();
        assert!(matches!(err, SwfError::Constraint { ref key, .. } if key == "tI[a]"));
    }

    #[test]
    fn pair_constraints() {
        let side = FloerData::new(
            "",
            vec![
                CriticalOrbit::theta(0),
                CriticalOrbit::free("a", 1),
                CriticalOrbit::free("b", 2),
            ],
            Default::default(),
        )
        .unwrap();
        let ok = |f: Family, a: &str, b: &str| {
            let mut fam = Families::new();
            fam.insert(Slot::pair(f, a, b), Q::from_integer(1.into()));
            CrossingData::new("", side.clone(), side.clone(), 0, fam).is_ok()
        };
        assert!(ok(Family::NI, "a", "a"));
        assert!(!ok(Family::NI, "a", "b"));
        assert!(ok(Family::MI, "b", "a"));
        assert!(ok(Family::NP, "a", "b"));
        assert!(!ok(Family::NP, "b", "a"));
        assert!(ok(Family::MP, "a", "a"));
    }

    #[test]
    fn unknown_fields_are_parse_errors() {
        let text = br#"{"side0":{"orbits":[]},"side1":{"orbits":[]},"sf_c":0,"bogus":[]}"#;
        assert!(matches!(parse_crossing(text), Err(SwfError::Parse { .. })));
    }
}
