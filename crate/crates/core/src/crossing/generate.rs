//! Seeded crossing generators and the linear solver for `(I, H)` given `J`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::maps::{add_slot, formal_i, formal_j, unit};
use super::{CrossingData, End, Families, Family, MapRole, Slot, FAMILIES};
use crate::complexes::{add_to, boundary_map, Chain, FormalMap, GenKind, Generator, Layout};
use crate::error::{Result, SwfError};
use crate::floer_data::generate::{weight, ATTEMPTS};
use crate::floer_data::{
    generate_admissible, validate, CoefficientSystem, CriticalOrbit, FloerData, Profile,
};
use crate::linalg::{integer_kernel, q, DenseMatrix, Q};

/// Power at which maps are probed; high enough that no term is truncated.
const PROBE_POWER: i64 = 4;
/// Largest power whose identities the solver imposes.
const SOLVE_POWER: u32 = 3;

fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn retry<T>(
    seed: u64,
    what: &str,
    mut f: impl FnMut(u64, &mut ChaCha8Rng) -> Result<T>,
) -> Result<T> {
    let mut last = String::new();
    for attempt in 0..ATTEMPTS {
        let s = attempt_seed(seed, attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5157_4643);
        match f(s, &mut rng) {
            Ok(t) => return Ok(t),
            Err(e @ (SwfError::MissingReducible | SwfError::GenerationFailure { .. })) => {
                return Err(e)
            }
            Err(e) => last = e.to_string(),
        }
    }
    Err(SwfError::GenerationFailure {
        attempts: ATTEMPTS,
        message: format!("{what}: {last}"),
    })
}

fn base(seed: u64, profile: &Profile) -> Result<FloerData> {
    if !profile.with_reducible {
        return Err(SwfError::MissingReducible);
    }
    generate_admissible(seed, profile)
}

fn end_of(kind: GenKind) -> End {
    match kind {
        GenKind::Eta(_) => End::Eta,
        GenKind::One(_) => End::One,
        GenKind::Theta => End::Theta,
    }
}

fn kinds(layout: &Layout) -> Vec<GenKind> {
    let mut out: Vec<GenKind> = (0..layout.free().len())
        .flat_map(|a| [GenKind::Eta(a), GenKind::One(a)])
        .collect();
    if layout.theta().is_some() {
        out.push(GenKind::Theta);
    }
    out
}

/// Reads the families of a map of the given role off its values at a high power.
fn probe(
    role: MapRole,
    sf_c: i64,
    source: &Layout,
    target: &Layout,
    eval: impl Fn(Generator) -> Chain,
) -> Result<Families> {
    let mut out = Families::new();
    for kind in kinds(source) {
        let image = eval(Generator::new(kind, PROBE_POWER));
        let mut saw_unit = false;
        for (h, c) in image {
            let shift = h.power - PROBE_POWER;
            if kind == GenKind::Theta && h.kind == GenKind::Theta {
                if unit(sf_c, role) != Some(shift) || !c.is_one() {
                    return Err(SwfError::Infeasible(format!(
                        "reducible component {c} at power shift {shift}"
                    )));
                }
                saw_unit = true;
                continue;
            }
            if shift != 0 {
                return Err(SwfError::Infeasible(format!(
                    "{} -> {} at power shift {shift}",
                    source.label(Generator::new(kind, 0)),
                    target.label(Generator::new(h.kind, 0))
                )));
            }
            let (fe, te) = (end_of(kind), end_of(h.kind));
            let found = FAMILIES
                .into_iter()
                .filter(|f| f.role() == role)
                .find_map(|f| {
                    f.terms()
                        .iter()
                        .find(|(a, b, _)| (*a, *b) == (fe, te))
                        .map(|t| (f, t.2))
                });
            let Some((family, sign)) = found else {
                return Err(SwfError::Infeasible(format!(
                    "no family carries {fe:?} -> {te:?}"
                )));
            };
            let id = |l: &Layout, k: GenKind| match k {
                GenKind::Eta(a) | GenKind::One(a) => l.free()[a].id.clone(),
                GenKind::Theta => unreachable!("θ ends carry no id"),
            };
            let slot = match (fe, te) {
                (End::Theta, _) => Slot::single(family, id(target, h.kind)),
                (_, End::Theta) => Slot::single(family, id(source, kind)),
                _ => Slot::pair(family, id(source, kind), id(target, h.kind)),
            };
            let value = c / q(sign);
            match out.get(&slot) {
                Some(prev) if *prev != value => {
                    return Err(SwfError::Infeasible(format!(
                        "{slot} has inconsistent η and 1 components"
                    )));
                }
                _ => {
                    out.insert(slot, value);
                }
            }
        }
        if kind == GenKind::Theta && unit(sf_c, role).is_some() && !saw_unit {
            return Err(SwfError::Infeasible("reducible component missing".into()));
        }
    }
    // an η → η term with no matching 1 → 1 term (or the reverse) is not a family
    for (slot, value) in &out {
        if slot.family.terms().len() == 2 {
            let (a, b) = (
                slot.first.as_str(),
                slot.second.as_deref().expect("pair family"),
            );
            let (pa, pb) = (
                source.position(a).expect("probed"),
                target.position(b).expect("probed"),
            );
            for (from, to, sign) in slot.family.terms() {
                let fk = if *from == End::Eta {
                    GenKind::Eta(pa)
                } else {
                    GenKind::One(pa)
                };
                let tk = if *to == End::Eta {
                    GenKind::Eta(pb)
                } else {
                    GenKind::One(pb)
                };
                let got = eval(Generator::new(fk, PROBE_POWER))
                    .get(&Generator::new(tk, PROBE_POWER))
                    .cloned()
                    .unwrap_or_else(Q::zero);
                if got != value * q(*sign) {
                    return Err(SwfError::Infeasible(format!(
                        "{slot} has inconsistent η and 1 components"
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Random degree-one map from side 1 to side 0 between free orbits of both, in the `nP`/`mP` shapes.
fn random_homotopy(
    rng: &mut ChaCha8Rng,
    from: &Layout,
    to: &Layout,
    exclude: &[&str],
) -> FormalMap {
    let mut k = FormalMap::new();
    if rng.random_range(0..3) == 0 {
        return k;
    }
    for (x, ox) in from.free().iter().enumerate() {
        for (y, oy) in to.free().iter().enumerate() {
            if exclude.contains(&oy.id.as_str()) || rng.random_range(0..3) != 0 {
                continue;
            }
            let c = q(weight(rng));
            if oy.index == ox.index + 1 {
                k.add(GenKind::Eta(x), GenKind::Eta(y), 0, c.clone());
                k.add(GenKind::One(x), GenKind::One(y), 0, -c);
            } else if oy.index == ox.index {
                k.add(GenKind::Eta(x), GenKind::One(y), 0, c);
            }
        }
    }
    k
}

fn compose<'a>(outer: &'a FormalMap, inner: &'a FormalMap) -> impl Fn(Generator) -> Chain + 'a {
    move |g| outer.apply_chain(&inner.apply(g))
}

fn sum(chains: impl IntoIterator<Item = Chain>) -> Chain {
    let mut out = Chain::new();
    for c in chains {
        for (g, v) in c {
            add_to(&mut out, g, v);
        }
    }
    out
}

fn neg(c: Chain) -> Chain {
    c.into_iter().map(|(g, v)| (g, -v)).collect()
}

/// Unknowns `x` with `A x = b`, a particular solution plus a random integer
/// kernel element; `None` if inconsistent.
fn solve_with_kernel(rng: &mut ChaCha8Rng, a: &DenseMatrix, b: &[Q]) -> Option<Vec<Q>> {
    if a.cols() == 0 {
        return b.iter().all(Zero::is_zero).then(Vec::new);
    }
    let mut x = if a.rows() == 0 {
        vec![Q::zero(); a.cols()]
    } else {
        a.solve(b)?
    };
    let kernel = if a.rows() == 0 {
        (0..a.cols())
            .map(|i| {
                (0..a.cols())
                    .map(|j| if i == j { 1.into() } else { 0.into() })
                    .collect()
            })
            .collect()
    } else {
        integer_kernel(a)
    };
    for v in kernel {
        let w = weight(rng);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += Q::from_integer(vi * w);
        }
    }
    Some(x)
}

/// Obstruction counts making (C2) and (C3) hold.
fn obstructions(rng: &mut ChaCha8Rng, low: &FloerData, high: &FloerData) -> Result<Families> {
    let mut out = Families::new();
    let tl = low.theta_index().expect("sides carry θ");
    let lc = low.coeffs();
    let unknowns: Vec<&CriticalOrbit> = low.free_at(tl + 2).collect();
    let rows: Vec<&CriticalOrbit> = low.free_at(tl + 3).collect();
    let mut a = DenseMatrix::zeros(rows.len(), unknowns.len());
    let mut b = vec![Q::zero(); rows.len()];
    for (r, a3) in rows.iter().enumerate() {
        for (c, a2) in unknowns.iter().enumerate() {
            a.set(
                r,
                c,
                q(lc.n
                    .get(&(a3.id.clone(), a2.id.clone()))
                    .copied()
                    .unwrap_or(0)),
            );
        }
        for a1 in low.free_at(tl + 1) {
            let m =
                lc.m.get(&(a3.id.clone(), a1.id.clone()))
                    .copied()
                    .unwrap_or(0);
            b[r] += q(m * lc.v.get(&a1.id).copied().unwrap_or(0));
        }
    }
    let x = solve_with_kernel(rng, &a, &b)
        .ok_or_else(|| SwfError::Infeasible("no obstruction counts satisfy C2".into()))?;
    for (o, v) in unknowns.iter().zip(x) {
        out.insert(Slot::single(Family::ObsLow, &o.id), v);
    }

    let th = high.theta_index().expect("sides carry θ");
    let hc = high.coeffs();
    let unknowns: Vec<&CriticalOrbit> = high.free_at(th - 3).collect();
    let rows: Vec<&CriticalOrbit> = high.free_at(th - 4).collect();
    let mut a = DenseMatrix::zeros(rows.len(), unknowns.len());
    let mut b = vec![Q::zero(); rows.len()];
    for (r, d) in rows.iter().enumerate() {
        for (c, o) in unknowns.iter().enumerate() {
            a.set(
                r,
                c,
                q(hc.n
                    .get(&(o.id.clone(), d.id.clone()))
                    .copied()
                    .unwrap_or(0)),
            );
        }
        for c in high.free_at(th - 2) {
            let m =
                hc.m.get(&(c.id.clone(), d.id.clone()))
                    .copied()
                    .unwrap_or(0);
            b[r] += q(hc.u.get(&c.id).copied().unwrap_or(0) * m);
        }
    }
    let x = solve_with_kernel(rng, &a, &b)
        .ok_or_else(|| SwfError::Infeasible("no obstruction counts satisfy C3".into()))?;
    for (o, v) in unknowns.iter().zip(x) {
        out.insert(Slot::single(Family::ObsHigh, &o.id), v);
    }
    Ok(out)
}

fn unimodular(rng: &mut ChaCha8Rng, size: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let identity = |n: usize| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect()
    };
    let (mut p, mut inv) = (identity(size), identity(size));
    if size < 2 {
        if size == 1 && rng.random_bool(0.5) {
            p[0][0] = -1;
            inv[0][0] = -1;
        }
        return (p, inv);
    }
    for _ in 0..rng.random_range(0..=3) {
        let i = rng.random_range(0..size);
        let j = (i + rng.random_range(1..size)) % size;
        let c = if rng.random_bool(0.5) { 1 } else { -1 };
        // p ← (1 + c E_ij) p, inv ← inv (1 − c E_ij)
        let row_j = p[j].clone();
        for (x, y) in p[i].iter_mut().zip(row_j) {
            *x += c * y;
        }
        for row in inv.iter_mut() {
            let xi = row[i];
            row[j] -= c * xi;
        }
    }
    (p, inv)
}

fn bounded(v: i64, magnitude: i64) -> Result<i64> {
    if v.abs() <= magnitude {
        Ok(v)
    } else {
        Err(SwfError::Infeasible(format!(
            "coefficient {v} exceeds the magnitude bound"
        )))
    }
}

/// Both sides in one chamber: side 1 is side 0 in a new basis `P` (unimodular
/// per index), `I = P`, `J = P⁻¹`, then `J` and `H` are moved by a random homotopy.
pub fn same_chamber_crossing(seed: u64, profile: &Profile) -> Result<CrossingData> {
    retry(seed, "same-chamber crossing", |s, rng| {
        let data = base(s, profile)?;
        let ids: Vec<&CriticalOrbit> = data.free_orbits().collect();
        let mut p: BTreeMap<(String, String), i64> = BTreeMap::new();
        let mut inv: BTreeMap<(String, String), i64> = BTreeMap::new();
        let mut by_index: BTreeMap<i64, Vec<&str>> = BTreeMap::new();
        for o in &ids {
            by_index.entry(o.index).or_default().push(&o.id);
        }
        for group in by_index.values() {
            let (pm, im) = unimodular(rng, group.len());
            for (r, x) in group.iter().enumerate() {
                for (c, y) in group.iter().enumerate() {
                    if pm[r][c] != 0 {
                        p.insert((x.to_string(), y.to_string()), pm[r][c]);
                    }
                    if im[r][c] != 0 {
                        inv.insert((x.to_string(), y.to_string()), im[r][c]);
                    }
                }
            }
        }
        let pget = |m: &BTreeMap<(String, String), i64>, x: &str, y: &str| {
            m.get(&(x.into(), y.into())).copied().unwrap_or(0)
        };
        let c = data.coeffs();
        let same = |x: &str| by_index[&data.orbit(x).expect("known").index].clone();
        // column-vector convention: I(η_y) = Σ_x P[x][y] η_x
        let conj =
            |table: &BTreeMap<(String, String), i64>| -> Result<BTreeMap<(String, String), i64>> {
                let mut out = BTreeMap::new();
                for ((a, b), k) in table {
                    for a2 in same(a) {
                        for b2 in same(b) {
                            let v = pget(&inv, a, a2) * k * pget(&p, b2, b);
                            if v != 0 {
                                *out.entry((a2.to_string(), b2.to_string())).or_insert(0) += v;
                            }
                        }
                    }
                }
                out.retain(|_, v| *v != 0);
                for v in out.values() {
                    bounded(*v, profile.magnitude)?;
                }
                Ok(out)
            };
        let mut c1 = CoefficientSystem {
            n: conj(&c.n)?,
            m: conj(&c.m)?,
            ..Default::default()
        };
        for (a, k) in &c.v {
            for a2 in same(a) {
                *c1.v.entry(a2.to_string()).or_insert(0) += k * pget(&inv, a, a2);
            }
        }
        for (e, k) in &c.u {
            for e2 in same(e) {
                *c1.u.entry(e2.to_string()).or_insert(0) += pget(&p, e2, e) * k;
            }
        }
        let c1 = c1.pruned();
        let side1 = FloerData::new("", data.orbits().to_vec(), c1)?;
        if !validate(&side1).ok {
            return Err(SwfError::Infeasible(
                "conjugated side fails validation".into(),
            ));
        }
        let mut fam = Families::new();
        for ((x, y), k) in &p {
            fam.insert(Slot::pair(Family::NI, y, x), q(*k));
        }
        for ((x, y), k) in &inv {
            fam.insert(Slot::pair(Family::NJ, y, x), q(*k));
        }
        let cd = CrossingData::new(
            format!("same-chamber seed={seed}"),
            data.clone(),
            side1,
            0,
            fam,
        )?;
        let (l0, l1) = (Layout::new(cd.side0()), Layout::new(cd.side1()));
        let k = random_homotopy(rng, &l1, &l0, &[]);
        perturbed(&cd, &k, &FormalMap::new())
    })
}

/// Replaces `J` by `J + D₀K + KD₁` and `H` by `H − K∘I`, then adds `extra_h` to `H`.
fn perturbed(cd: &CrossingData, k: &FormalMap, extra_h: &FormalMap) -> Result<CrossingData> {
    if k.is_zero() && extra_h.is_zero() {
        return Ok(cd.clone());
    }
    let (l0, l1) = (Layout::new(cd.side0()), Layout::new(cd.side1()));
    let (d0, d1) = (boundary_map(cd.side0()), boundary_map(cd.side1()));
    let (i, j, h) = (formal_i(cd), formal_j(cd), super::formal_h(cd));
    let j2 = probe(MapRole::J, cd.sf_c(), &l1, &l0, |g| {
        sum([j.apply(g), compose(&d0, k)(g), compose(k, &d1)(g)])
    })?;
    let h2 = probe(MapRole::H, cd.sf_c(), &l0, &l0, |g| {
        sum([h.apply(g), neg(compose(k, &i)(g)), extra_h.apply(g)])
    })?;
    let mut fam: Families = cd
        .families()
        .iter()
        .filter(|(s, _)| !matches!(s.family.role(), MapRole::J | MapRole::H))
        .map(|(s, v)| (s.clone(), v.clone()))
        .collect();
    fam.extend(j2);
    fam.extend(h2);
    cd.with_families(fam)
}

struct Death {
    cd: CrossingData,
    /// Homotopy from side 1 to side 0 by which `J` was moved; `I` is unchanged.
    k: FormalMap,
    unperturbed: CrossingData,
}

fn fresh_id(data: &FloerData, stem: &str) -> String {
    (0..)
        .map(|i| {
            if i == 0 {
                stem.to_string()
            } else {
                format!("{stem}{i}")
            }
        })
        .find(|id| data.orbit(id).is_none())
        .expect("some id is free")
}

/// A free orbit at index 1 is born into `f` (shifted so its reducible sits at 2),
/// and the reducible drops to index 0.
fn death_from(f: &FloerData, rng: &mut ChaCha8Rng, magnitude: i64) -> Result<Death> {
    let t = f.theta_index().ok_or(SwfError::MissingReducible)?;
    let side1 = f.shifted(2 - t).with_label(format!("{} high", f.label()));
    let x = fresh_id(&side1, "x");
    let c1 = side1.coeffs();
    let mut c0 = CoefficientSystem {
        n: c1.n.clone(),
        m: c1.m.clone(),
        ..Default::default()
    };
    c0.v.insert(x.clone(), 1);
    for (c, k) in &c1.u {
        c0.n.insert((x.clone(), c.clone()), -k);
    }
    for (b, k) in &c1.v {
        c0.m.insert((b.clone(), x.clone()), *k);
    }
    let mut w: BTreeMap<String, i64> = BTreeMap::new();
    for e in side1.free_at(-1) {
        let k = weight(rng);
        if k != 0 {
            w.insert(e.id.clone(), k);
            c0.m.insert((x.clone(), e.id.clone()), k);
        }
    }
    for d in side1.free_at(-2) {
        let mut total = 0;
        for (c, k) in &c1.u {
            total += k * c1.m.get(&(c.clone(), d.id.clone())).copied().unwrap_or(0);
        }
        for (e, k) in &w {
            total += k * c1.n.get(&(e.clone(), d.id.clone())).copied().unwrap_or(0);
        }
        if total != 0 {
            c0.u.insert(d.id.clone(), bounded(total, magnitude)?);
        }
    }
    let mut orbits: Vec<CriticalOrbit> = side1.free_orbits().cloned().collect();
    orbits.push(CriticalOrbit::free(&x, 1));
    orbits.push(CriticalOrbit::theta(0));
    let side0 = FloerData::new(format!("{} low", f.label()), orbits, c0)?;
    if !validate(&side0).ok {
        return Err(SwfError::Infeasible("low side fails validation".into()));
    }

    let mut fam = Families::new();
    for o in side1.free_orbits() {
        fam.insert(Slot::pair(Family::NI, &o.id, &o.id), Q::one());
        fam.insert(Slot::pair(Family::NJ, &o.id, &o.id), Q::one());
    }
    fam.insert(Slot::single(Family::SJ, &x), Q::one());
    fam.insert(Slot::single(Family::PI, &x), Q::one());
    fam.insert(Slot::single(Family::HTheta, &x), Q::one());
    for (c, k) in &c1.u {
        fam.insert(Slot::single(Family::TI, c), q(*k));
    }
    for (e, k) in &w {
        fam.insert(Slot::single(Family::SI, e), q(-k));
    }
    fam.extend(obstructions(rng, &side0, &side1)?);
    let unperturbed = CrossingData::new("", side0, side1, -1, fam)?;
    let (l0, l1) = (
        Layout::new(unperturbed.side0()),
        Layout::new(unperturbed.side1()),
    );
    let k = random_homotopy(rng, &l1, &l0, &[&x]);
    let cd = perturbed(&unperturbed, &k, &FormalMap::new())?;
    Ok(Death { cd, k, unperturbed })
}

/// `sf_c = −1`: the reducible passes from index 2 down to 0 and a free orbit appears at index 1.
pub fn death_crossing(seed: u64, profile: &Profile) -> Result<CrossingData> {
    retry(seed, "death crossing", |s, rng| {
        let f = base(s, profile)?;
        Ok(death_from(&f, rng, profile.magnitude)?
            .cd
            .with_label(format!("death seed={seed}")))
    })
}

fn swapped_family(f: Family) -> Family {
    use Family::*;
    match f {
        NI => NJ,
        MI => MJ,
        RI => RJ,
        PI => PJ,
        SI => SJ,
        TI => TJ,
        NJ => NI,
        MJ => MI,
        RJ => RI,
        PJ => PI,
        SJ => SI,
        TJ => TI,
        other => other,
    }
}

/// The death crossing read backwards: `I = J_death`, `J = I_death`, `H = −I_death∘K`.
fn birth_from(death: &Death) -> Result<CrossingData> {
    let d = &death.cd;
    let mut fam = Families::new();
    for (slot, v) in d.families() {
        if slot.family.role() != MapRole::H {
            fam.insert(
                Slot {
                    family: swapped_family(slot.family),
                    ..slot.clone()
                },
                v.clone(),
            );
        }
    }
    let side0 = d.side1().shifted(-2);
    let side1 = d.side0().shifted(-2);
    let cd = CrossingData::new("", side0, side1, 1, fam)?;
    if death.k.is_zero() {
        return Ok(cd);
    }
    let l = Layout::new(cd.side0());
    let i = formal_i(&death.unperturbed);
    let h = probe(MapRole::H, 1, &l, &l, |g| neg(compose(&i, &death.k)(g)))?;
    let mut all = cd.families().clone();
    all.extend(h);
    cd.with_families(all)
}

/// `sf_c = +1`: a free orbit at index −1 merges into the reducible, which rises from −2 to 0.
pub fn birth_crossing(seed: u64, profile: &Profile) -> Result<CrossingData> {
    retry(seed, "birth crossing", |s, rng| {
        let f = base(s, profile)?;
        let death = death_from(&f, rng, profile.magnitude)?;
        Ok(birth_from(&death)?.with_label(format!("birth seed={seed}")))
    })
}

/// Two deaths (`sf_c = −2`) or two births (`sf_c = +2`) in a row. Only the
/// two outer sides are kept: the composite maps leave the family shapes.
pub fn double_crossing(seed: u64, profile: &Profile, sf_c: i64) -> Result<CrossingData> {
    if sf_c.abs() != 2 {
        return Err(SwfError::constraint(
            "sf_c",
            "a double crossing has sf_c = ±2",
        ));
    }
    retry(seed, "double crossing", |s, rng| {
        let f = base(s, profile)?;
        let first = death_from(&f, rng, profile.magnitude)?;
        let second = death_from(first.cd.side0(), rng, profile.magnitude)?;
        let low = second.cd.side0().clone().with_label("double low");
        let high = f
            .shifted(4 - f.theta_index().expect("base carries θ"))
            .with_label("double high");
        let (side0, side1) = if sf_c < 0 {
            (low, high)
        } else {
            (high.shifted(-4), low.shifted(-4))
        };
        CrossingData::new(
            format!("double seed={seed} sf={sf_c}"),
            side0,
            side1,
            sf_c,
            Families::new(),
        )
    })
}

/// Every slot of `role` that the index constraints allow.
pub(crate) fn admissible_slots(cd: &CrossingData, role: MapRole) -> Vec<Slot> {
    let (s, t) = super::sides(role);
    let src: Vec<String> = cd.side(s).free_orbits().map(|o| o.id.clone()).collect();
    let tgt: Vec<String> = cd.side(t).free_orbits().map(|o| o.id.clone()).collect();
    let mut out = Vec::new();
    for f in FAMILIES.into_iter().filter(|f| f.role() == role) {
        let candidates: Vec<Slot> = if f.is_pair() {
            src.iter()
                .flat_map(|a| tgt.iter().map(move |b| Slot::pair(f, a, b)))
                .collect()
        } else if matches!(f.terms()[0].0, End::Theta) {
            tgt.iter().map(|b| Slot::single(f, b)).collect()
        } else {
            src.iter().map(|a| Slot::single(f, a)).collect()
        };
        out.extend(candidates.into_iter().filter(|c| cd.check_slot(c).is_ok()));
    }
    out
}

/// Keeps `J` and the obstruction counts and solves the linear identities
/// `ID₀ = D₁I` and `id − JI = D₀H + HD₀` for the families of `I` and `H`, the
/// reducible component of `I` held at 1.
pub fn solve_crossing(cd: &CrossingData) -> Result<CrossingData> {
    let (l0, l1) = (Layout::new(cd.side0()), Layout::new(cd.side1()));
    let (d0, d1) = (boundary_map(cd.side0()), boundary_map(cd.side1()));
    let j = formal_j(cd);
    let gens = l0.generators(SOLVE_POWER);
    let mut unknowns = admissible_slots(cd, MapRole::I);
    unknowns.extend(admissible_slots(cd, MapRole::H));

    // one row per (identity, source generator, target generator): 0 for ID − DI, 1 for the homotopy
    type Rows = BTreeMap<(u8, Generator, Generator), usize>;
    let mut rows = Rows::new();
    let mut entries: Vec<(usize, usize, Q)> = Vec::new();
    let mut push = |rows: &mut Rows,
                    eq: u8,
                    source: Generator,
                    chain: Chain,
                    col: Option<usize>,
                    rhs: &mut BTreeMap<usize, Q>| {
        for (g, v) in chain {
            let next = rows.len();
            let r = *rows.entry((eq, source, g)).or_insert(next);
            match col {
                Some(c) => entries.push((r, c, v)),
                None => *rhs.entry(r).or_insert_with(Q::zero) -= v,
            }
        }
    };
    let mut rhs: BTreeMap<usize, Q> = BTreeMap::new();
    let mut fixed = FormalMap::new();
    if let Some(shift) = unit(cd.sf_c(), MapRole::I) {
        fixed.add(GenKind::Theta, GenKind::Theta, shift, Q::one());
    }
    for g in &gens {
        let mut id_di = fixed.apply_chain(&d0.apply(*g));
        for (h, v) in d1.apply_chain(&fixed.apply(*g)) {
            add_to(&mut id_di, h, -v);
        }
        push(&mut rows, 0, *g, id_di, None, &mut rhs);
        let mut homotopy = j.apply_chain(&fixed.apply(*g));
        add_to(&mut homotopy, *g, -Q::one());
        push(&mut rows, 1, *g, homotopy, None, &mut rhs);
    }
    for (col, slot) in unknowns.iter().enumerate() {
        let mut map = FormalMap::new();
        let role = slot.family.role();
        let (s, t) = super::sides(role);
        let layouts = [&l0, &l1];
        add_slot(&mut map, layouts[s], layouts[t], slot, &Q::one());
        for g in &gens {
            if role == MapRole::I {
                let mut a = map.apply_chain(&d0.apply(*g));
                for (h, v) in d1.apply_chain(&map.apply(*g)) {
                    add_to(&mut a, h, -v);
                }
                push(&mut rows, 0, *g, a, Some(col), &mut rhs);
                push(
                    &mut rows,
                    1,
                    *g,
                    j.apply_chain(&map.apply(*g)),
                    Some(col),
                    &mut rhs,
                );
            } else {
                let b = sum([
                    d0.apply_chain(&map.apply(*g)),
                    map.apply_chain(&d0.apply(*g)),
                ]);
                push(&mut rows, 1, *g, b, Some(col), &mut rhs);
            }
        }
    }
    let mut a = DenseMatrix::zeros(rows.len(), unknowns.len());
    for (r, c, v) in entries {
        let cur = a.get(r, c).clone();
        a.set(r, c, cur + v);
    }
    let mut b = vec![Q::zero(); rows.len()];
    for (r, v) in rhs {
        b[r] = v;
    }
    let x = if unknowns.is_empty() {
        b.iter().all(Zero::is_zero).then(Vec::new)
    } else {
        a.solve(&b)
    }
    .ok_or_else(|| SwfError::Infeasible("no I and H satisfy the identities for this J".into()))?;
    let mut fam: Families = cd
        .families()
        .iter()
        .filter(|(s, _)| matches!(s.family.role(), MapRole::J | MapRole::Data))
        .map(|(s, v)| (s.clone(), v.clone()))
        .collect();
    for (slot, v) in unknowns.into_iter().zip(x) {
        if !v.is_zero() {
            fam.insert(slot, v);
        }
    }
    cd.with_families(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossing::{verify_crossing, wallcross_check};

    fn profile() -> Profile {
        Profile::new(5, -3, 3, true)
    }

    #[test]
    fn generated_crossings_verify() {
        for seed in 0..6 {
            for cd in [
                same_chamber_crossing(seed, &profile()).unwrap(),
                death_crossing(seed, &profile()).unwrap(),
                birth_crossing(seed, &profile()).unwrap(),
            ] {
                let r = verify_crossing(&cd, 3).unwrap();
                assert!(r.ok, "{} {r:?}", cd.label());
                let solved = solve_crossing(&cd).unwrap();
                let r = verify_crossing(&solved, 3).unwrap();
                assert!(r.ok, "solved {} {r:?}", cd.label());
                assert!(wallcross_check(&cd, 6).unwrap().ok, "{}", cd.label());
            }
        }
    }

    #[test]
    fn ex1_is_recovered_by_the_solver() {
        let cd = CrossingData::ex1();
        let solved = solve_crossing(&cd).unwrap();
        assert!(verify_crossing(&solved, 4).unwrap().ok);
    }

    #[test]
    fn double_crossings_shift_casson_by_two() {
        for seed in 0..4 {
            for sf in [-2, 2] {
                let cd = double_crossing(seed, &profile(), sf).unwrap();
                let r = wallcross_check(&cd, 7).unwrap();
                assert!(r.ok, "{r:?}");
                assert_eq!(r.casson.1, r.casson.0 - sf);
            }
        }
    }

    #[test]
    fn crossings_repeat_per_seed() {
        assert_eq!(
            death_crossing(3, &profile()).unwrap(),
            death_crossing(3, &profile()).unwrap()
        );
        assert!(matches!(
            death_crossing(3, &Profile::new(3, -1, 1, false)),
            Err(SwfError::MissingReducible)
        ));
    }
}
