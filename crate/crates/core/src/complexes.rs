//! The equivariant complex `C_{*,U(1)}` with boundary `D`, truncated at a
//! maximal Ω-power, and the non-equivariant complex `C_*` with boundary `∂`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::chain::{homology_with, raw_betti, ChainComplex, HomologyTable};
use crate::error::{Result, SwfError};
use crate::floer_data::{validate, CriticalOrbit, FloerData};
use crate::linalg::{q, Q};
use crate::parallel::Strategy;

/// Orbit part of an equivariant generator; orbit positions index [`Layout::free`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    Eta(usize),
    One(usize),
    Theta,
}

/// `Ω^power ⊗ kind`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GenKind,
    pub power: i64,
}

impl Generator {
    pub fn new(kind: GenKind, power: i64) -> Self {
        Self { kind, power }
    }
}

/// Finite formal combination of generators.
pub type Chain = BTreeMap<Generator, Q>;

pub fn add_to(chain: &mut Chain, g: Generator, coef: Q) {
    if coef.is_zero() {
        return;
    }
    let entry = chain.entry(g).or_insert_with(Q::zero);
    *entry += coef;
    if entry.is_zero() {
        chain.remove(&g);
    }
}

/// An Ω-equivariant map given on orbit kinds: each term sends `Ωⁿ⊗from` to
/// `coef · Ω^{n+shift}⊗to`, and terms with a negative resulting power vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalMap {
    terms: BTreeMap<GenKind, BTreeMap<(GenKind, i64), Q>>,
}

impl FormalMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, from: GenKind, to: GenKind, shift: i64, coef: Q) {
        if coef.is_zero() {
            return;
        }
        let row = self.terms.entry(from).or_default();
        let entry = row.entry((to, shift)).or_insert_with(Q::zero);
        *entry += coef;
        if entry.is_zero() {
            row.remove(&(to, shift));
        }
    }

    pub fn add_scaled(&mut self, other: &FormalMap, factor: &Q) {
        for (from, row) in &other.terms {
            for ((to, shift), c) in row {
                self.add(*from, *to, *shift, c * factor);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (GenKind, GenKind, i64, &Q)> + '_ {
        self.terms.iter().flat_map(|(from, row)| {
            row.iter()
                .map(move |((to, shift), c)| (*from, *to, *shift, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(BTreeMap::is_empty)
    }

    pub fn apply(&self, g: Generator) -> Chain {
        let mut out = Chain::new();
        if let Some(row) = self.terms.get(&g.kind) {
            for ((to, shift), c) in row {
                let power = g.power + shift;
                if power >= 0 {
                    add_to(&mut out, Generator::new(*to, power), c.clone());
                }
            }
        }
        out
    }

    pub fn apply_chain(&self, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (g, c) in chain {
            for (h, d) in self.apply(*g) {
                add_to(&mut out, h, c * d);
            }
        }
        out
    }
}

/// Free orbits in `(index, id)` order, plus the reducible's index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    free: Vec<CriticalOrbit>,
    theta: Option<i64>,
    order: Vec<Option<usize>>,
    position: HashMap<String, usize>,
}

impl Layout {
    pub fn new(data: &FloerData) -> Self {
        let free: Vec<CriticalOrbit> = data.free_orbits().cloned().collect();
        let position = free
            .iter()
            .enumerate()
            .map(|(i, o)| (o.id.clone(), i))
            .collect();
        let mut next = 0;
        let order = data
            .orbits()
            .iter()
            .map(|o| {
                if o.reducible {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect();
        Self {
            free,
            theta: data.theta_index(),
            order,
            position,
        }
    }

    pub fn free(&self) -> &[CriticalOrbit] {
        &self.free
    }

    pub fn theta(&self) -> Option<i64> {
        self.theta
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.position.get(id).copied()
    }

    pub fn index(&self, kind: GenKind) -> i64 {
        match kind {
            GenKind::Eta(a) | GenKind::One(a) => self.free[a].index,
            GenKind::Theta => self
                .theta
                .expect("theta generator without a reducible orbit"),
        }
    }

    pub fn degree(&self, g: Generator) -> i64 {
        let base = self.index(g.kind) + 2 * g.power;
        match g.kind {
            GenKind::One(_) => base + 1,
            _ => base,
        }
    }

    pub fn label(&self, g: Generator) -> String {
        match g.kind {
            GenKind::Eta(a) => format!("eta[{}]^{}", self.free[a].id, g.power),
            GenKind::One(a) => format!("one[{}]^{}", self.free[a].id, g.power),
            GenKind::Theta => format!("theta^{}", g.power),
        }
    }

    /// Generators with power ≤ `max_power`: orbits in `(index, id)` order, powers ascending, η before 1.
    pub fn generators(&self, max_power: u32) -> Vec<Generator> {
        let mut out = Vec::new();
        for slot in &self.order {
            for n in 0..=max_power as i64 {
                match slot {
                    Some(a) => {
                        out.push(Generator::new(GenKind::Eta(*a), n));
                        out.push(Generator::new(GenKind::One(*a), n));
                    }
                    None => out.push(Generator::new(GenKind::Theta, n)),
                }
            }
        }
        out
    }

    /// Least index over all orbits, θ included.
    pub fn min_index(&self) -> Option<i64> {
        self.free.iter().map(|o| o.index).chain(self.theta).min()
    }
}

/// `D` on orbit kinds.
pub fn boundary_map(data: &FloerData) -> FormalMap {
    let layout = Layout::new(data);
    let c = data.coeffs();
    let pos = |id: &str| {
        layout
            .position(id)
            .expect("coefficient keys name free orbits")
    };
    let mut d = FormalMap::new();
    for ((a, b), k) in &c.n {
        d.add(GenKind::Eta(pos(a)), GenKind::Eta(pos(b)), 0, q(*k));
        d.add(GenKind::One(pos(a)), GenKind::One(pos(b)), 0, -q(*k));
    }
    for ((a, e), k) in &c.m {
        d.add(GenKind::Eta(pos(a)), GenKind::One(pos(e)), 0, q(*k));
    }
    for a in 0..layout.free().len() {
        d.add(GenKind::Eta(a), GenKind::One(a), -1, -Q::one());
    }
    for (a, k) in &c.v {
        d.add(GenKind::Eta(pos(a)), GenKind::Theta, 0, q(*k));
    }
    for (e, k) in &c.u {
        d.add(GenKind::Theta, GenKind::One(pos(e)), 0, q(*k));
    }
    d
}

/// The truncated equivariant complex together with its generator bookkeeping.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    pub layout: Layout,
    pub max_power: u32,
    pub complex: ChainComplex,
    position: HashMap<Generator, (i64, usize)>,
    generators: BTreeMap<i64, Vec<Generator>>,
}

impl EquivariantComplex {
    /// Degree and basis position of `g`, if it lies in the truncation.
    pub fn locate(&self, g: Generator) -> Option<(i64, usize)> {
        self.position.get(&g).copied()
    }

    pub fn generators_at(&self, d: i64) -> &[Generator] {
        self.generators.get(&d).map_or(&[], Vec::as_slice)
    }

    /// Coordinates of the degree-`d` part of `chain`; generators outside the truncation are ignored.
    pub fn coordinates(&self, d: i64, chain: &Chain) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.complex.dim(d)];
        for (g, c) in chain {
            if let Some((dg, i)) = self.locate(*g) {
                if dg == d {
                    out[i] = c.clone();
                }
            }
        }
        out
    }

    pub fn chain(&self, d: i64, coords: &[Q]) -> Chain {
        let mut out = Chain::new();
        for (g, c) in self.generators_at(d).iter().zip(coords) {
            add_to(&mut out, *g, c.clone());
        }
        out
    }
}

pub(crate) fn require_admissible(data: &FloerData) -> Result<()> {
    let report = validate(data);
    if report.ok {
        Ok(())
    } else {
        let v = &report.violations[0];
        Err(SwfError::Inadmissible(format!(
            "{} violations, first {} at ({})",
            report.violations.len(),
            v.constraint,
            v.witness.join(", ")
        )))
    }
}

/// Builds the complex for data whose admissibility the caller has already established.
pub(crate) fn assemble(data: &FloerData, max_power: u32) -> EquivariantComplex {
    let layout = Layout::new(data);
    let gens = layout.generators(max_power);
    let d = boundary_map(data);
    if gens.is_empty() {
        return EquivariantComplex {
            layout,
            max_power,
            complex: ChainComplex::empty(),
            position: HashMap::new(),
            generators: BTreeMap::new(),
        };
    }
    let degrees: Vec<i64> = gens.iter().map(|g| layout.degree(*g)).collect();
    let lo = *degrees.iter().min().expect("nonempty");
    let hi = *degrees.iter().max().expect("nonempty");
    let mut generators: BTreeMap<i64, Vec<Generator>> = BTreeMap::new();
    let mut position = HashMap::new();
    for (g, &deg) in gens.iter().zip(&degrees) {
        let list = generators.entry(deg).or_default();
        position.insert(*g, (deg, list.len()));
        list.push(*g);
    }
    let index: HashMap<Generator, usize> = gens.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let labelled: Vec<(i64, String)> = gens
        .iter()
        .zip(&degrees)
        .map(|(g, &deg)| (deg, layout.label(*g)))
        .collect();
    let mut entries = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        for (h, c) in d.apply(*g) {
            entries.push((i, index[&h], c));
        }
    }
    let complex =
        ChainComplex::from_generators(lo, hi, &labelled, entries).expect("D lowers degree by one");
    EquivariantComplex {
        layout,
        max_power,
        complex,
        position,
        generators,
    }
}

pub fn equivariant_complex(data: &FloerData, max_power: u32) -> Result<EquivariantComplex> {
    require_admissible(data)?;
    Ok(assemble(data, max_power))
}

/// All generators `Ωⁿ⊗η_a`, `Ωⁿ⊗1_a`, `Ωⁿ⊗θ` with `n ≤ max_power`, and the boundary `D`.
pub fn build_equivariant(data: &FloerData, max_power: u32) -> Result<ChainComplex> {
    Ok(equivariant_complex(data, max_power)?.complex)
}

/// The same complex without the admissibility check, so that `D² ≠ 0` can be observed.
pub fn build_equivariant_unchecked(data: &FloerData, max_power: u32) -> ChainComplex {
    assemble(data, max_power).complex
}

/// Degrees `[μ_min, 2N + μ_min − 1]` where the truncation does not affect homology.
pub fn certified_range(data: &FloerData, max_power: u32) -> Option<(i64, i64)> {
    let lo = data.min_index()?;
    let hi = lo + 2 * max_power as i64 - 1;
    (hi >= lo).then_some((lo, hi))
}

pub fn equivariant_homology(data: &FloerData, max_power: u32) -> Result<HomologyTable> {
    equivariant_homology_with(data, max_power, Strategy::default())
}

/// Homology ranks within the certified range; the Euler characteristic is
/// reported only when nothing outside that range survives.
pub fn equivariant_homology_with(
    data: &FloerData,
    max_power: u32,
    strategy: Strategy,
) -> Result<HomologyTable> {
    let ec = equivariant_complex(data, max_power)?;
    Ok(HomologyTable::new(
        raw_betti(&ec.complex, strategy),
        certified_range(data, max_power),
    )
    .restricted_to_certified())
}

/// Free orbits graded by index with `∂a = Σ n(a,b) b`; θ is left out.
pub fn build_nonequivariant(data: &FloerData) -> Result<ChainComplex> {
    require_admissible(data)?;
    Ok(nonequivariant_unchecked(data))
}

pub(crate) fn nonequivariant_unchecked(data: &FloerData) -> ChainComplex {
    let free: Vec<&CriticalOrbit> = data.free_orbits().collect();
    let (Some(lo), Some(hi)) = (
        free.iter().map(|o| o.index).min(),
        free.iter().map(|o| o.index).max(),
    ) else {
        return ChainComplex::empty();
    };
    let gens: Vec<(i64, String)> = free.iter().map(|o| (o.index, o.id.clone())).collect();
    let position: HashMap<&str, usize> = free
        .iter()
        .enumerate()
        .map(|(i, o)| (o.id.as_str(), i))
        .collect();
    let entries = data
        .coeffs()
        .n
        .iter()
        .map(|((a, b), k)| (position[a.as_str()], position[b.as_str()], q(*k)));
    // one empty degree on top so that every degree carrying orbits is certified
    ChainComplex::from_generators(lo, hi + 1, &gens, entries).expect("n lowers index by one")
}

pub fn swf_homology(data: &FloerData) -> Result<HomologyTable> {
    homology_with(&build_nonequivariant(data)?, Strategy::default())
}

/// `Σ_k (−1)^k dim SWH_k`.
pub fn casson(data: &FloerData) -> Result<i64> {
    Ok(swf_homology(data)?
        .euler
        .expect("non-equivariant homology is fully certified"))
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}^{}", self.kind, self.power)
    }
}
