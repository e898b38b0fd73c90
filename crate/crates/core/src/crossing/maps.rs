use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{sides, CrossingData, End, Family, MapRole, Slot};
use crate::chain::ChainMap;
use crate::complexes::{
    add_to, boundary_map, equivariant_complex, require_admissible, Chain, EquivariantComplex,
    FormalMap, GenKind, Generator, Layout,
};
use crate::error::Result;
use crate::linalg::{max_abs_numerator, q, SparseMatrix, Q};
use crate::parallel::Strategy;
use crate::report::{serialize_q, Violation};

pub(crate) fn kind(layout: &Layout, end: End, id: Option<&str>) -> GenKind {
    let pos = || {
        let id = id.expect("free end names an orbit");
        layout
            .position(id)
            .expect("slot orbits are checked on construction")
    };
    match end {
        End::Eta => GenKind::Eta(pos()),
        End::One => GenKind::One(pos()),
        End::Theta => GenKind::Theta,
    }
}

/// Adds `value` times the terms of `slot` to `map`.
pub(crate) fn add_slot(
    map: &mut FormalMap,
    source: &Layout,
    target: &Layout,
    slot: &Slot,
    value: &Q,
) {
    let (from, to) = slot.ends();
    for (a, b, sign) in slot.family.terms() {
        map.add(
            kind(source, *a, from),
            kind(target, *b, to),
            0,
            value * q(*sign),
        );
    }
}

/// The θ₀ → θ₁ (for `I`) or θ₁ → θ₀ (for `J`) component, present when the
/// power shift it needs is not positive.
pub(crate) fn unit(sf_c: i64, role: MapRole) -> Option<i64> {
    match role {
        MapRole::I if sf_c <= 0 => Some(sf_c),
        MapRole::J if sf_c >= 0 => Some(-sf_c),
        _ => None,
    }
}

fn formal(cd: &CrossingData, role: MapRole) -> FormalMap {
    let (s, t) = sides(role);
    let (ls, lt) = (Layout::new(cd.side(s)), Layout::new(cd.side(t)));
    let mut map = FormalMap::new();
    for (slot, value) in cd.families() {
        if slot.family.role() == role {
            add_slot(&mut map, &ls, &lt, slot, value);
        }
    }
    if let Some(shift) = unit(cd.sf_c(), role) {
        map.add(GenKind::Theta, GenKind::Theta, shift, Q::one());
    }
    map
}

pub fn formal_i(cd: &CrossingData) -> FormalMap {
    formal(cd, MapRole::I)
}

pub fn formal_j(cd: &CrossingData) -> FormalMap {
    formal(cd, MapRole::J)
}

pub fn formal_h(cd: &CrossingData) -> FormalMap {
    formal(cd, MapRole::H)
}

fn matrices(
    map: &FormalMap,
    source: &EquivariantComplex,
    target: &EquivariantComplex,
    degree: i64,
) -> Result<ChainMap> {
    let mut blocks = BTreeMap::new();
    if let Some((lo, hi)) = source.complex.degrees() {
        for d in lo..=hi {
            let mut triplets = Vec::new();
            for (col, g) in source.generators_at(d).iter().enumerate() {
                for (h, c) in map.apply(*g) {
                    let (dh, row) = target
                        .locate(h)
                        .expect("target truncation covers every image");
                    debug_assert_eq!(dh, d + degree);
                    triplets.push((row, col, c));
                }
            }
            blocks.insert(
                d,
                SparseMatrix::from_triplets(
                    target.complex.dim(d + degree),
                    source.complex.dim(d),
                    triplets,
                ),
            );
        }
    }
    ChainMap::new(
        source.complex.clone(),
        target.complex.clone(),
        degree,
        blocks,
    )
}

fn build(cd: &CrossingData, max_power: u32, role: MapRole) -> Result<ChainMap> {
    require_admissible(cd.side0())?;
    require_admissible(cd.side1())?;
    let (s, t) = sides(role);
    let reach = if role == MapRole::H {
        0
    } else {
        cd.sf_c().unsigned_abs() as u32
    };
    let source = equivariant_complex(cd.side(s), max_power)?;
    let target = equivariant_complex(cd.side(t), max_power + reach)?;
    let degree = i64::from(role == MapRole::H);
    matrices(&formal(cd, role), &source, &target, degree)
}

/// `I` on generators of power ≤ `N`, landing in side 1 truncated at `N + |sf_c|`.
pub fn build_i(cd: &CrossingData, max_power: u32) -> Result<ChainMap> {
    build(cd, max_power, MapRole::I)
}

/// `J` on generators of power ≤ `N`, landing in side 0 truncated at `N + |sf_c|`.
pub fn build_j(cd: &CrossingData, max_power: u32) -> Result<ChainMap> {
    build(cd, max_power, MapRole::J)
}

pub fn build_h(cd: &CrossingData, max_power: u32) -> Result<ChainMap> {
    build(cd, max_power, MapRole::H)
}

/// One of the boundary-counting identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// False when the identity is vacuous for this `sf_c`.
    pub applicable: bool,
    /// Largest absolute numerator of `lhs − rhs` over all instances.
    #[serde(serialize_with = "serialize_q")]
    pub residual: Q,
    pub holds: bool,
    /// Orbits at which an instance fails.
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingReport {
    pub ok: bool,
    pub sf_c: i64,
    pub max_power: u32,
    #[serde(serialize_with = "serialize_q")]
    pub residual_id_di: Q,
    #[serde(serialize_with = "serialize_q")]
    pub residual_jd_dj: Q,
    #[serde(serialize_with = "serialize_q")]
    pub residual_homotopy: Q,
    pub identity_checks: Vec<IdentityCheck>,
    /// First few nonzero residual entries.
    pub violations: Vec<Violation>,
}

const SHOWN_VIOLATIONS: usize = 20;

fn sub(a: &mut Chain, b: &Chain) {
    for (g, c) in b {
        add_to(a, *g, -c.clone());
    }
}

/// Residual chains `(generator label, chain)` of one identity over all generators.
fn residuals(
    gens: &[Generator],
    strategy: Strategy,
    residual: impl Fn(Generator) -> Chain + Sync,
) -> Vec<(Generator, Chain)> {
    strategy
        .map(gens, |g| (*g, residual(*g)))
        .into_iter()
        .filter(|(_, c)| !c.is_empty())
        .collect()
}

/// Checks `ID₀ = D₁I`, `JD₁ = D₀J`, `id − JI = D₀H + HD₀` on every generator of
/// power ≤ `N`, and evaluates the boundary-counting identities.
pub fn verify_crossing(cd: &CrossingData, max_power: u32) -> Result<CrossingReport> {
    verify_crossing_with(cd, max_power, Strategy::default())
}

pub fn verify_crossing_with(
    cd: &CrossingData,
    max_power: u32,
    strategy: Strategy,
) -> Result<CrossingReport> {
    require_admissible(cd.side0())?;
    require_admissible(cd.side1())?;
    let (l0, l1) = (Layout::new(cd.side0()), Layout::new(cd.side1()));
    let (d0, d1) = (boundary_map(cd.side0()), boundary_map(cd.side1()));
    let (i, j, h) = (formal_i(cd), formal_j(cd), formal_h(cd));
    let gens0 = l0.generators(max_power);
    let gens1 = l1.generators(max_power);

    let id_di = residuals(&gens0, strategy, |g| {
        let mut r = i.apply_chain(&d0.apply(g));
        sub(&mut r, &d1.apply_chain(&i.apply(g)));
        r
    });
    let jd_dj = residuals(&gens1, strategy, |g| {
        let mut r = j.apply_chain(&d1.apply(g));
        sub(&mut r, &d0.apply_chain(&j.apply(g)));
        r
    });
    let homotopy = residuals(&gens0, strategy, |g| {
        let mut r: Chain = [(g, Q::one())].into();
        sub(&mut r, &j.apply_chain(&i.apply(g)));
        sub(&mut r, &d0.apply_chain(&h.apply(g)));
        sub(&mut r, &h.apply_chain(&d0.apply(g)));
        r
    });

    let mut violations = Vec::new();
    let mut record =
        |name: &str, source: &Layout, target: &Layout, rows: &[(Generator, Chain)]| -> Q {
            for (g, chain) in rows {
                for (t, c) in chain {
                    if violations.len() < SHOWN_VIOLATIONS {
                        violations.push(Violation {
                            constraint: name.to_string(),
                            witness: vec![source.label(*g), target.label(*t)],
                            residual: c.clone(),
                        });
                    }
                }
            }
            Q::from_integer(max_abs_numerator(rows.iter().flat_map(|(_, c)| c.values())))
        };
    let residual_id_di = record("ID-DI", &l0, &l1, &id_di);
    let residual_jd_dj = record("JD-DJ", &l1, &l0, &jd_dj);
    let residual_homotopy = record("id-JI-DH-HD", &l0, &l0, &homotopy);

    let identity_checks = identity_checks(cd);
    let ok = residual_id_di.is_zero()
        && residual_jd_dj.is_zero()
        && residual_homotopy.is_zero()
        && identity_checks.iter().all(|c| c.holds);
    Ok(CrossingReport {
        ok,
        sf_c: cd.sf_c(),
        max_power,
        residual_id_di,
        residual_jd_dj,
        residual_homotopy,
        identity_checks,
        violations,
    })
}

fn integer(k: i64) -> Q {
    Q::from_integer(BigInt::from(k))
}

fn check(name: &str, applicable: bool, failures: Vec<(String, Q)>) -> IdentityCheck {
    IdentityCheck {
        name: name.into(),
        applicable,
        residual: Q::from_integer(max_abs_numerator(failures.iter().map(|(_, r)| r))),
        holds: failures.is_empty(),
        witness: failures.into_iter().map(|(w, _)| w).collect(),
    }
}

/// (C1) the disk count between the reducibles is one; (C2), (C3) the
/// obstruction counts close up on the low and high side.
pub fn identity_checks(cd: &CrossingData) -> Vec<IdentityCheck> {
    let Some((low, high)) = cd.low_high().filter(|_| cd.sf_c().abs() == 1) else {
        return ["C1", "C2", "C3"]
            .iter()
            .map(|n| check(n, false, Vec::new()))
            .collect();
    };
    let (s0, s1) = (cd.side0(), cd.side1());
    let get = |f: Family, id: &str| cd.get(&Slot::single(f, id));

    // J crosses from the high reducible's side when sf_c = −1, I when sf_c = +1
    let (from, to, s_family, r_family) = if cd.sf_c() == -1 {
        (s1, s0, Family::SJ, Family::RJ)
    } else {
        (s0, s1, Family::SI, Family::RI)
    };
    let t_to = to.theta_index().expect("checked");
    let mut c1 = Q::zero();
    for a in to.free_at(t_to + 1) {
        c1 += get(s_family, &a.id) * integer(to.coeffs().v.get(&a.id).copied().unwrap_or(0));
    }
    for a in from.free_at(t_to) {
        c1 += integer(from.coeffs().u.get(&a.id).copied().unwrap_or(0)) * get(r_family, &a.id);
    }
    let c1_fail = if c1 == Q::one() {
        vec![]
    } else {
        vec![("theta".to_string(), c1 - Q::one())]
    };

    let lside = cd.side(low);
    let tl = lside.theta_index().expect("checked");
    let lc = lside.coeffs();
    let mut c2_fail = Vec::new();
    for a3 in lside.free_at(tl + 3) {
        let mut r = Q::zero();
        for a1 in lside.free_at(tl + 1) {
            let m =
                lc.m.get(&(a3.id.clone(), a1.id.clone()))
                    .copied()
                    .unwrap_or(0);
            r += integer(m * lc.v.get(&a1.id).copied().unwrap_or(0));
        }
        for a2 in lside.free_at(tl + 2) {
            let n =
                lc.n.get(&(a3.id.clone(), a2.id.clone()))
                    .copied()
                    .unwrap_or(0);
            r -= integer(n) * get(Family::ObsLow, &a2.id);
        }
        if !r.is_zero() {
            c2_fail.push((a3.id.clone(), r));
        }
    }

    let hside = cd.side(high);
    let th = hside.theta_index().expect("checked");
    let hc = hside.coeffs();
    let mut c3_fail = Vec::new();
    for d in hside.free_at(th - 4) {
        let mut r = Q::zero();
        for a in hside.free_at(th - 3) {
            let n =
                hc.n.get(&(a.id.clone(), d.id.clone()))
                    .copied()
                    .unwrap_or(0);
            r += get(Family::ObsHigh, &a.id) * integer(n);
        }
        for c in hside.free_at(th - 2) {
            let m =
                hc.m.get(&(c.id.clone(), d.id.clone()))
                    .copied()
                    .unwrap_or(0);
            r -= integer(hc.u.get(&c.id).copied().unwrap_or(0) * m);
        }
        if !r.is_zero() {
            c3_fail.push((d.id.clone(), r));
        }
    }
    vec![
        check("C1", true, c1_fail),
        check("C2", true, c2_fail),
        check("C3", true, c3_fail),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer_data::FloerData;

    #[test]
    fn ex1_crossing_verifies() {
        let cd = CrossingData::ex1();
        let r = verify_crossing(&cd, 4).unwrap();
        assert!(r.ok, "{r:?}");
        assert!(r.identity_checks[0].applicable && r.identity_checks[0].holds);
        let i = build_i(&cd, 3).unwrap();
        assert!(i.commutator_residual().ok);
        let l0 = Layout::new(cd.side0());
        // I(Ωⁿθ₀) = Ωⁿ⁻¹θ₁ and I(θ₀) = 0
        assert!(formal_i(&cd)
            .apply(Generator::new(GenKind::Theta, 0))
            .is_empty());
        let image = formal_i(&cd).apply(Generator::new(GenKind::Theta, 2));
        assert_eq!(
            image,
            [(Generator::new(GenKind::Theta, 1), Q::one())].into()
        );
        assert_eq!(l0.free().len(), 1);
    }

    #[test]
    fn trivial_crossing_is_identity() {
        let cd = CrossingData::trivial(&FloerData::ex1()).unwrap();
        let r = verify_crossing(&cd, 3).unwrap();
        assert!(r.ok);
        assert!(r.identity_checks.iter().all(|c| !c.applicable));
        let i = build_i(&cd, 3).unwrap();
        let (lo, hi) = i.source.degrees().unwrap();
        for d in lo..=hi {
            assert_eq!(i.block(d), SparseMatrix::identity(i.source.dim(d)));
        }
        assert!(build_h(&cd, 3).unwrap().block(2).is_zero());
    }

    #[test]
    fn broken_crossing_reports_residuals() {
        let cd = CrossingData::ex1();
        let mut fam = cd.families().clone();
        fam.remove(&Slot::single(Family::HTheta, "a"));
        let broken = cd.with_families(fam).unwrap();
        let r = verify_crossing(&broken, 3).unwrap();
        assert!(!r.ok);
        assert!(r.residual_id_di.is_zero() && r.residual_jd_dj.is_zero());
        assert_eq!(r.residual_homotopy, Q::one());
        assert!(!r.violations.is_empty());
    }
}
