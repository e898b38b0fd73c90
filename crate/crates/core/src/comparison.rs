//! Comparison between the equivariant and non-equivariant complexes: the
//! projection `i`, its kernel `Q`, the long exact sequence, the connecting
//! map `Δ` and the index-filtration spectral pages.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::chain::{
    connecting_map_oracle, homology_basis, induced_rank, matrix_rank, raw_betti, ChainComplex,
    ChainMap, HomologyTable, RepresentativePolicy, ShortExactSequence,
};
use crate::complexes::{
    boundary_map, certified_range, equivariant_complex, nonequivariant_unchecked, Chain,
    EquivariantComplex, GenKind, Generator,
};
use crate::crossing::Number;
use crate::error::{Result, SwfError};
use crate::floer_data::json::from_json_slice;
use crate::floer_data::FloerData;
use crate::linalg::{q_one, DenseMatrix, SparseMatrix, Q};
use crate::parallel::Strategy;
use crate::report::serialize_q;

/// The three complexes and the two maps of `0 → Q → C_{*,U(1)} → C_* → 0`.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub equivariant: EquivariantComplex,
    pub plain: ChainComplex,
    pub q: ChainComplex,
    pub ses: ShortExactSequence,
    pub certified: Option<(i64, i64)>,
}

fn is_bottom_eta(g: Generator) -> bool {
    matches!(g.kind, GenKind::Eta(_)) && g.power == 0
}

impl Comparison {
    pub fn new(data: &FloerData, max_power: u32) -> Result<Self> {
        let ec = equivariant_complex(data, max_power)?;
        let plain = nonequivariant_unchecked(data);
        let i = projection(&ec, &plain)?;
        let q = ec.complex.subcomplex(|d, label| {
            let position = ec
                .complex
                .index_of(d, label)
                .expect("label from this complex");
            !is_bottom_eta(ec.generators_at(d)[position])
        })?;
        let inclusion = include_q(&ec, &q)?;
        let ses = ShortExactSequence::new(inclusion, i)?;
        Ok(Self {
            certified: certified_range(data, max_power),
            equivariant: ec,
            plain,
            q,
            ses,
        })
    }

    pub fn projection(&self) -> &ChainMap {
        &self.ses.projection
    }
}

fn projection(ec: &EquivariantComplex, plain: &ChainComplex) -> Result<ChainMap> {
    let mut blocks = BTreeMap::new();
    if let Some((lo, hi)) = ec.complex.degrees() {
        for d in lo..=hi {
            let mut triplets = Vec::new();
            for (col, g) in ec.generators_at(d).iter().enumerate() {
                if let (GenKind::Eta(a), 0) = (g.kind, g.power) {
                    let id = &ec.layout.free()[a].id;
                    let row = plain
                        .index_of(d, id)
                        .expect("every free orbit is a plain generator");
                    triplets.push((row, col, q_one()));
                }
            }
            blocks.insert(
                d,
                SparseMatrix::from_triplets(plain.dim(d), ec.complex.dim(d), triplets),
            );
        }
    }
    ChainMap::new(ec.complex.clone(), plain.clone(), 0, blocks)
}

fn include_q(ec: &EquivariantComplex, q: &ChainComplex) -> Result<ChainMap> {
    let mut blocks = BTreeMap::new();
    if let Some((lo, hi)) = q.degrees() {
        for d in lo..=hi {
            let triplets = q.basis(d).iter().enumerate().map(|(col, label)| {
                let row = ec
                    .complex
                    .index_of(d, label)
                    .expect("Q generators live in the big complex");
                (row, col, q_one())
            });
            blocks.insert(
                d,
                SparseMatrix::from_triplets(ec.complex.dim(d), q.dim(d), triplets),
            );
        }
    }
    ChainMap::new(q.clone(), ec.complex.clone(), 0, blocks)
}

/// The projection `i`: `1⊗η_a ↦ a`, every other generator ↦ 0.
pub fn chain_map_i(data: &FloerData, max_power: u32) -> Result<ChainMap> {
    let ec = equivariant_complex(data, max_power)?;
    let plain = nonequivariant_unchecked(data);
    projection(&ec, &plain)
}

/// Kernel of `i`: every generator except the `1⊗η_a`.
pub fn q_complex(data: &FloerData, max_power: u32) -> Result<ChainComplex> {
    Ok(Comparison::new(data, max_power)?.q)
}

pub fn q_homology(data: &FloerData, max_power: u32) -> Result<HomologyTable> {
    let cmp = Comparison::new(data, max_power)?;
    Ok(q_table(&cmp, Strategy::default()))
}

fn q_table(cmp: &Comparison, strategy: Strategy) -> HomologyTable {
    HomologyTable::new(raw_betti(&cmp.q, strategy), cmp.certified).restricted_to_certified()
}

/// Ranks and exactness checks at one degree of the long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactNode {
    pub degree: i64,
    pub h_q: usize,
    pub h_equivariant: usize,
    pub h_plain: usize,
    /// `H_d(Q) → H_d(C_{*,U(1)})`
    pub rank_inclusion: usize,
    /// `H_d(C_{*,U(1)}) → H_d(C_*)`
    pub rank_projection: usize,
    /// `H_d(C_*) → H_{d−1}(Q)`
    pub rank_connecting: usize,
    pub exact_at_q: bool,
    pub exact_at_equivariant: bool,
    pub exact_at_plain: bool,
}

/// `dim SWH_d − dim SWH_{d+1}` against `dim SWH_{d,U(1)} − dim SWH_{d+1,U(1)} − 1` for even `d ≥ μ(θ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRelation {
    pub degree: i64,
    pub plain_difference: i64,
    pub equivariant_difference: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub certified: Option<(i64, i64)>,
    pub exact: bool,
    pub nodes: Vec<ExactNode>,
    pub relations: Vec<DimensionRelation>,
}

/// Rank-checks `… → H_d(Q) → SWH_{d,U(1)} → SWH_d → H_{d−1}(Q) → …` over the certified range.
pub fn long_exact_sequence(data: &FloerData, max_power: u32) -> Result<ExactnessReport> {
    if data.theta_index().is_none() {
        return Err(SwfError::MissingReducible);
    }
    let report = exactness_report(data, max_power)?;
    if let Some(bad) = report
        .nodes
        .iter()
        .find(|n| !(n.exact_at_q && n.exact_at_equivariant && n.exact_at_plain))
    {
        return Err(SwfError::ExactnessFailure { degree: bad.degree });
    }
    Ok(report)
}

/// The same report without failing on a broken node; without a reducible there are no dimension relations.
pub fn exactness_report(data: &FloerData, max_power: u32) -> Result<ExactnessReport> {
    let cmp = Comparison::new(data, max_power)?;
    exactness(&cmp, data.theta_index(), Strategy::default())
}

fn connecting_rank(cmp: &Comparison, d: i64) -> Result<usize> {
    Ok(matrix_rank(&connecting_map_oracle(
        &cmp.ses,
        d,
        RepresentativePolicy::Canonical,
    )?))
}

fn exactness(cmp: &Comparison, theta: Option<i64>, strategy: Strategy) -> Result<ExactnessReport> {
    let Some((lo, hi)) = cmp.certified else {
        return Ok(ExactnessReport {
            certified: None,
            exact: true,
            nodes: Vec::new(),
            relations: Vec::new(),
        });
    };
    let hq = raw_betti(&cmp.q, strategy);
    let hu = raw_betti(&cmp.equivariant.complex, strategy);
    let hc = raw_betti(&cmp.plain, strategy);
    let at = |m: &BTreeMap<i64, usize>, d: i64| m.get(&d).copied().unwrap_or(0);
    let degrees: Vec<i64> = (lo..=hi + 1).collect();
    let per_degree: Vec<Result<(usize, usize, usize)>> = strategy.map(&degrees, |&d| {
        Ok((
            induced_rank(&cmp.ses.inclusion, d),
            induced_rank(&cmp.ses.projection, d),
            connecting_rank(cmp, d)?,
        ))
    });
    let mut ranks = BTreeMap::new();
    for (d, r) in degrees.iter().zip(per_degree) {
        ranks.insert(*d, r?);
    }
    let mut nodes = Vec::new();
    for d in lo..=hi {
        let (j, i, delta) = ranks[&d];
        let delta_above = ranks[&(d + 1)].2;
        let node = ExactNode {
            degree: d,
            h_q: at(&hq, d),
            h_equivariant: at(&hu, d),
            h_plain: at(&hc, d),
            rank_inclusion: j,
            rank_projection: i,
            rank_connecting: delta,
            exact_at_q: at(&hq, d) == delta_above + j,
            exact_at_equivariant: at(&hu, d) == j + i,
            exact_at_plain: at(&hc, d) == i + delta,
        };
        nodes.push(node);
    }
    let mut relations = Vec::new();
    let mut d = theta.unwrap_or(hi);
    while d < hi {
        if d >= lo {
            let plain_difference = at(&hc, d) as i64 - at(&hc, d + 1) as i64;
            let equivariant_difference = at(&hu, d) as i64 - at(&hu, d + 1) as i64;
            relations.push(DimensionRelation {
                degree: d,
                plain_difference,
                equivariant_difference,
                holds: plain_difference == equivariant_difference - 1,
            });
        }
        d += 2;
    }
    let exact = nodes
        .iter()
        .all(|n| n.exact_at_q && n.exact_at_equivariant && n.exact_at_plain)
        && relations.iter().all(|r| r.holds);
    Ok(ExactnessReport {
        certified: cmp.certified,
        exact,
        nodes,
        relations,
    })
}

/// A chain of free orbits of a single index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub degree: i64,
    pub coefficients: BTreeMap<String, Q>,
}

impl Cycle {
    pub fn zero(degree: i64) -> Self {
        Self {
            degree,
            coefficients: BTreeMap::new(),
        }
    }

    /// Checks that every orbit is free of index `degree` and that `∂z = 0`.
    pub fn check(&self, data: &FloerData) -> Result<()> {
        for id in self.coefficients.keys() {
            match data.orbit(id) {
                Some(o) if !o.reducible && o.index == self.degree => {}
                _ => {
                    return Err(SwfError::NonCycle(format!(
                        "{id} is not a free orbit of index {}",
                        self.degree
                    )))
                }
            }
        }
        let mut image: BTreeMap<&str, Q> = BTreeMap::new();
        for ((a, b), k) in &data.coeffs().n {
            if let Some(x) = self.coefficients.get(a) {
                *image.entry(b.as_str()).or_insert_with(Q::zero) +=
                    x * Q::from_integer((*k).into());
            }
        }
        match image.iter().find(|(_, v)| !v.is_zero()) {
            Some((b, _)) => Err(SwfError::NonCycle(format!(
                "boundary has a nonzero {b} component"
            ))),
            None => Ok(()),
        }
    }

    pub fn vector(&self, plain: &ChainComplex) -> Vec<Q> {
        plain
            .basis(self.degree)
            .iter()
            .map(|id| self.coefficients.get(id).cloned().unwrap_or_else(Q::zero))
            .collect()
    }
}

/// Wire form of a [`Cycle`]: `{"degree": 1, "coefficients": {"a": 1, "b": "1/2"}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleJson {
    pub degree: i64,
    #[serde(default)]
    pub coefficients: BTreeMap<String, Number>,
}

impl TryFrom<CycleJson> for Cycle {
    type Error = SwfError;

    fn try_from(j: CycleJson) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        for (id, n) in j.coefficients {
            let value = n.to_q().ok_or_else(|| SwfError::Parse {
                path: format!("coefficients.{id}"),
                message: "not a rational".into(),
            })?;
            if !value.is_zero() {
                coefficients.insert(id, value);
            }
        }
        Ok(Cycle {
            degree: j.degree,
            coefficients,
        })
    }
}

impl From<&Cycle> for CycleJson {
    fn from(c: &Cycle) -> Self {
        CycleJson {
            degree: c.degree,
            coefficients: c
                .coefficients
                .iter()
                .map(|(k, v)| (k.clone(), Number::from_q(v)))
                .collect(),
        }
    }
}

pub fn parse_cycle(bytes: &[u8]) -> Result<Cycle> {
    Cycle::try_from(from_json_slice::<CycleJson>(bytes)?)
}

/// Result of the explicit chase for `Δ[z]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaResult {
    pub degree: i64,
    /// `k` with the image a multiple of `Ω^k⊗θ`; `None` when no such generator has degree `degree − 1`.
    pub power: Option<i64>,
    #[serde(serialize_with = "serialize_q")]
    pub coefficient: Q,
    #[serde(serialize_with = "serialize_q")]
    pub closed_form: Q,
    pub rounds: usize,
}

/// Lifts `Σ x_a a` to `Σ x_a 1⊗η_a`, applies `D`, and cancels non-θ
/// components above the reducible index from the top down by adding
/// boundaries `D(Ω^{j+1}⊗η_c)`; reads off the coefficient of `Ω^k⊗θ`.
pub fn connecting_delta(data: &FloerData, cycle: &Cycle, max_power: u32) -> Result<DeltaResult> {
    let theta = data.theta_index().ok_or(SwfError::MissingReducible)?;
    let ec = equivariant_complex(data, max_power)?;
    cycle.check(data)?;
    let layout = &ec.layout;
    let d = boundary_map(data);
    let shift = cycle.degree - 1 - theta;
    let power = (shift >= 0 && shift % 2 == 0).then_some(shift / 2);
    if let Some(k) = power {
        if k > max_power as i64 {
            return Err(SwfError::Uncertified {
                degree: cycle.degree - 1,
            });
        }
    }

    let mut y = Chain::new();
    for (id, x) in &cycle.coefficients {
        let a = layout.position(id).expect("checked free orbit");
        let lift: Chain = [(Generator::new(GenKind::Eta(a), 0), x.clone())].into();
        for (g, c) in d.apply_chain(&lift) {
            crate::complexes::add_to(&mut y, g, c);
        }
    }
    let levels: BTreeSet<i64> = layout.free().iter().map(|o| o.index).collect();
    let bound = levels.len() + 1;
    let mut rounds = 0;
    let mut current_level: Option<i64> = None;
    loop {
        let top = y
            .iter()
            .filter(|(g, _)| g.kind != GenKind::Theta && layout.index(g.kind) > theta)
            .max_by(|(g, _), (h, _)| {
                layout
                    .index(g.kind)
                    .cmp(&layout.index(h.kind))
                    .then(h.cmp(g))
            })
            .map(|(g, c)| (*g, c.clone()));
        let Some((g, c)) = top else { break };
        let level = layout.index(g.kind);
        if current_level != Some(level) {
            current_level = Some(level);
            rounds += 1;
            if rounds > bound {
                return Err(SwfError::NonTermination { rounds });
            }
        }
        match g.kind {
            GenKind::One(e) => {
                let purge: Chain = [(Generator::new(GenKind::Eta(e), g.power + 1), c)].into();
                for (h, v) in d.apply_chain(&purge) {
                    crate::complexes::add_to(&mut y, h, v);
                }
            }
            _ => return Err(SwfError::NonTermination { rounds }),
        }
    }
    let coefficient = power
        .map(|k| {
            y.get(&Generator::new(GenKind::Theta, k))
                .cloned()
                .unwrap_or_else(Q::zero)
        })
        .unwrap_or_else(Q::zero);
    Ok(DeltaResult {
        degree: cycle.degree,
        power,
        coefficient,
        closed_form: closed_form_delta(data, cycle),
        rounds,
    })
}

/// `Σ x_a m(a,c) m(c,e) ⋯ v(α)` over chains descending by two down to index `μ(θ) + 1`.
pub fn closed_form_delta(data: &FloerData, cycle: &Cycle) -> Q {
    let Some(theta) = data.theta_index() else {
        return Q::zero();
    };
    let gap = cycle.degree - (theta + 1);
    if gap < 0 || gap % 2 != 0 {
        return Q::zero();
    }
    let c = data.coeffs();
    let mut weights: BTreeMap<String, Q> = cycle.coefficients.clone();
    let mut level = cycle.degree;
    while level > theta + 1 {
        let mut next: BTreeMap<String, Q> = BTreeMap::new();
        for ((a, e), k) in &c.m {
            if let Some(w) = weights.get(a) {
                *next.entry(e.clone()).or_insert_with(Q::zero) += w * Q::from_integer((*k).into());
            }
        }
        weights = next;
        level -= 2;
    }
    weights
        .iter()
        .map(|(a, w)| w * Q::from_integer(c.v.get(a).copied().unwrap_or(0).into()))
        .sum()
}

/// A cycle of `Q` in degree `e` made of `Ω^k⊗θ` (at `position` of the
/// equivariant basis) and generators of orbits below the reducible.
///
/// `Ω^k⊗θ` alone is not closed once `u ≠ 0`; the generators below the
/// reducible span a subcomplex of `Q` with no homology in the certified range,
/// so any such completion represents the same class.
fn theta_cycle(cmp: &Comparison, e: i64, position: usize) -> Result<Vec<Q>> {
    let ec = &cmp.equivariant;
    let theta = ec.layout.theta().ok_or(SwfError::MissingReducible)?;
    let theta_label = &ec.complex.basis(e)[position];
    let allowed: Vec<usize> = (0..cmp.q.dim(e))
        .filter(|&i| {
            let label = &cmp.q.basis(e)[i];
            let p = ec.complex.index_of(e, label).expect("Q is a subcomplex");
            label == theta_label || ec.layout.index(ec.generators_at(e)[p].kind) < theta
        })
        .collect();
    let boundary = cmp.q.boundary(e).to_dense();
    let rows = boundary.rows();
    let mut system = DenseMatrix::zeros(rows + 1, allowed.len());
    let mut rhs = vec![Q::zero(); rows + 1];
    for (j, &i) in allowed.iter().enumerate() {
        for r in 0..rows {
            system.set(r, j, boundary.get(r, i).clone());
        }
        if &cmp.q.basis(e)[i] == theta_label {
            system.set(rows, j, q_one());
        }
    }
    rhs[rows] = q_one();
    let y = system.solve(&rhs).ok_or_else(|| SwfError::NonExact {
        degree: e,
        message: "no cycle completes the θ generator below the reducible".into(),
    })?;
    let mut full = vec![Q::zero(); cmp.q.dim(e)];
    for (j, &i) in allowed.iter().enumerate() {
        full[i] = y[j].clone();
    }
    Ok(full)
}

/// `Δ[z]` through the snake-lemma oracle, expressed as a multiple of `[Ω^k⊗θ]`.
pub fn delta_via_oracle(
    data: &FloerData,
    cycle: &Cycle,
    max_power: u32,
    policy: RepresentativePolicy,
) -> Result<Q> {
    let theta = data.theta_index().ok_or(SwfError::MissingReducible)?;
    let cmp = Comparison::new(data, max_power)?;
    cycle.check(data)?;
    let d = cycle.degree;
    let plain = homology_basis(&cmp.plain, d, policy);
    let coords = plain
        .coordinates(&cycle.vector(&cmp.plain))
        .ok_or_else(|| SwfError::NonCycle("not a cycle of the plain complex".into()))?;
    let matrix = connecting_map_oracle(&cmp.ses, d, policy)?;
    let image: Vec<Q> = matrix
        .iter()
        .map(|row| row.iter().zip(&coords).map(|(a, b)| a * b).sum())
        .collect();
    if image.iter().all(Zero::is_zero) {
        return Ok(Q::zero());
    }
    let shift = d - 1 - theta;
    if shift < 0 || shift % 2 != 0 {
        return Err(SwfError::NonExact {
            degree: d - 1,
            message: "connecting image has no θ generator to compare with".into(),
        });
    }
    let qb = homology_basis(&cmp.q, d - 1, policy);
    let target = Generator::new(GenKind::Theta, shift / 2);
    let (_, position) = cmp
        .equivariant
        .locate(target)
        .ok_or(SwfError::Uncertified { degree: d - 1 })?;
    let theta_vec = theta_cycle(&cmp, d - 1, position)?;
    let theta_coords = qb.coordinates(&theta_vec).expect("solved to be a cycle");
    let pivot = theta_coords
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| SwfError::NonExact {
            degree: d - 1,
            message: "the θ class vanishes".into(),
        })?;
    let ratio = &image[pivot] / &theta_coords[pivot];
    if image
        .iter()
        .zip(&theta_coords)
        .any(|(a, b)| *a != &ratio * b)
    {
        return Err(SwfError::NonExact {
            degree: d - 1,
            message: "connecting image is not a multiple of the θ class".into(),
        });
    }
    Ok(ratio)
}

/// Which complex the index filtration is taken on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Filtered {
    Equivariant,
    Q,
    Plain,
}

/// Ranks indexed by filtration degree `k` and complementary degree `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub page: u8,
    pub entries: BTreeMap<(i64, i64), usize>,
}

impl SpectralPage {
    pub fn get(&self, k: i64, l: i64) -> usize {
        self.entries.get(&(k, l)).copied().unwrap_or(0)
    }
}

impl Serialize for SpectralPage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for ((k, l), r) in &self.entries {
            seq.serialize_element(&(k, l, r))?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralPages {
    pub filtration: Filtered,
    pub certified: Option<(i64, i64)>,
    pub e0: SpectralPage,
    pub e1: SpectralPage,
}

/// `E⁰` and `E¹` of the index filtration, restricted to certified total degrees.
pub fn spectral_pages(data: &FloerData, max_power: u32, which: Filtered) -> Result<SpectralPages> {
    let mut pages = spectral_pages_unrestricted(data, max_power, which)?;
    if let Some((lo, hi)) = pages.certified {
        for page in [&mut pages.e0, &mut pages.e1] {
            page.entries
                .retain(|(k, l), _| (lo..=hi).contains(&(k + l)));
        }
    }
    Ok(pages)
}

/// Both pages over every total degree of the truncated complex.
pub fn spectral_pages_unrestricted(
    data: &FloerData,
    max_power: u32,
    which: Filtered,
) -> Result<SpectralPages> {
    let cmp = Comparison::new(data, max_power)?;
    let ec = &cmp.equivariant;
    let (complex, certified): (&ChainComplex, Option<(i64, i64)>) = match which {
        Filtered::Equivariant => (&ec.complex, cmp.certified),
        Filtered::Q => (&cmp.q, cmp.certified),
        Filtered::Plain => (&cmp.plain, cmp.plain.degrees().map(|(lo, hi)| (lo, hi - 1))),
    };
    // orbit index of the generator at (degree, position)
    let filtration = |d: i64, position: usize| -> i64 {
        if which == Filtered::Plain {
            return d;
        }
        let p = ec
            .complex
            .index_of(d, &complex.basis(d)[position])
            .expect("generator of the equivariant complex");
        ec.layout.index(ec.generators_at(d)[p].kind)
    };
    let mut e0 = BTreeMap::new();
    let mut columns: BTreeMap<i64, Vec<(i64, String)>> = BTreeMap::new();
    let mut filt: BTreeMap<(i64, usize), i64> = BTreeMap::new();
    if let Some((lo, hi)) = complex.degrees() {
        for d in lo..=hi {
            for (p, label) in complex.basis(d).iter().enumerate() {
                let k = filtration(d, p);
                filt.insert((d, p), k);
                *e0.entry((k, d - k)).or_insert(0) += 1;
                columns.entry(k).or_default().push((d, label.clone()));
            }
        }
    }
    let mut e1 = BTreeMap::new();
    if let Some((lo, hi)) = complex.degrees() {
        for (&k, gens) in &columns {
            let index: BTreeMap<&str, usize> = gens
                .iter()
                .enumerate()
                .map(|(i, (_, l))| (l.as_str(), i))
                .collect();
            let mut entries = Vec::new();
            for d in lo + 1..=hi {
                let bd = complex.boundary(d);
                for (r, c, v) in bd.entries() {
                    if filt[&(d, c)] == k && filt[&(d - 1, r)] == k {
                        let s = index[complex.basis(d)[c].as_str()];
                        let t = index[complex.basis(d - 1)[r].as_str()];
                        entries.push((s, t, v.clone()));
                    }
                }
            }
            let column = ChainComplex::from_generators(lo, hi, gens, entries)?;
            for (d, r) in raw_betti(&column, Strategy::Sequential) {
                if r > 0 {
                    e1.insert((k, d - k), r);
                }
            }
        }
    }
    Ok(SpectralPages {
        filtration: which,
        certified,
        e0: SpectralPage {
            page: 0,
            entries: e0,
        },
        e1: SpectralPage {
            page: 1,
            entries: e1,
        },
    })
}
