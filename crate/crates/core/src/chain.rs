//! Degree-graded chain complexes over `Q`, their homology, chain maps and the
//! snake-lemma connecting map.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Result, SwfError};
use crate::linalg::{independent_subset, DenseMatrix, SparseMatrix, Q};
use crate::parallel::Strategy;
use crate::report::{ValidationReport, Violation};

/// Free graded module with a boundary of degree −1.
///
/// Degrees form the closed interval `[lo, hi]` (empty when `lo > hi`).  The
/// boundary stored at degree `d` maps the basis at `d` to the basis at `d − 1`;
/// at the bottom degree it has zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    hi: i64,
    basis: Vec<Vec<String>>,
    boundary: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn empty() -> Self {
        Self {
            lo: 0,
            hi: -1,
            basis: Vec::new(),
            boundary: Vec::new(),
        }
    }

    pub fn new(
        lo: i64,
        hi: i64,
        basis: Vec<Vec<String>>,
        boundary: Vec<SparseMatrix>,
    ) -> Result<Self> {
        let len = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
        if basis.len() != len || boundary.len() != len {
            return Err(SwfError::Inadmissible(format!(
                "complex on [{lo}, {hi}] needs {len} basis lists and boundary blocks"
            )));
        }
        for (i, m) in boundary.iter().enumerate() {
            let below = if i == 0 { 0 } else { basis[i - 1].len() };
            if m.rows() != below || m.cols() != basis[i].len() {
                return Err(SwfError::Inadmissible(format!(
                    "boundary at degree {} has shape {}x{}, expected {}x{}",
                    lo + i as i64,
                    m.rows(),
                    m.cols(),
                    below,
                    basis[i].len()
                )));
            }
        }
        Ok(Self {
            lo,
            hi,
            basis,
            boundary,
        })
    }

    /// Builds a complex from `(degree, label)` generators and `(source, target, value)`
    /// boundary entries, both indexed into `generators`.
    pub fn from_generators(
        lo: i64,
        hi: i64,
        generators: &[(i64, String)],
        entries: impl IntoIterator<Item = (usize, usize, Q)>,
    ) -> Result<Self> {
        let len = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
        let mut basis = vec![Vec::new(); len];
        let mut position = Vec::with_capacity(generators.len());
        for (d, label) in generators {
            if *d < lo || *d > hi {
                return Err(SwfError::Inadmissible(format!(
                    "generator {label} at degree {d} outside [{lo}, {hi}]"
                )));
            }
            let slot = (d - lo) as usize;
            position.push((slot, basis[slot].len()));
            basis[slot].push(label.clone());
        }
        let mut triplets: Vec<Vec<(usize, usize, Q)>> = vec![Vec::new(); len];
        for (s, t, v) in entries {
            let (ds, cs) = position[s];
            let (dt, rt) = position[t];
            if dt + 1 != ds {
                return Err(SwfError::Inadmissible(format!(
                    "boundary entry {} -> {} does not lower degree by one",
                    generators[s].1, generators[t].1
                )));
            }
            triplets[ds].push((rt, cs, v));
        }
        let boundary = triplets
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                let rows = if i == 0 { 0 } else { basis[i - 1].len() };
                SparseMatrix::from_triplets(rows, basis[i].len(), t)
            })
            .collect();
        Self::new(lo, hi, basis, boundary)
    }

    /// Degree interval, or `None` for the empty complex.
    pub fn degrees(&self) -> Option<(i64, i64)> {
        (self.lo <= self.hi).then_some((self.lo, self.hi))
    }

    fn slot(&self, d: i64) -> Option<usize> {
        (d >= self.lo && d <= self.hi).then(|| (d - self.lo) as usize)
    }

    pub fn dim(&self, d: i64) -> usize {
        self.slot(d).map_or(0, |i| self.basis[i].len())
    }

    pub fn basis(&self, d: i64) -> &[String] {
        self.slot(d).map_or(&[], |i| &self.basis[i])
    }

    pub fn total_dim(&self) -> usize {
        self.basis.iter().map(Vec::len).sum()
    }

    /// Boundary from degree `d` to `d − 1` (a zero matrix of the right shape outside the interval).
    pub fn boundary(&self, d: i64) -> SparseMatrix {
        match self.slot(d) {
            Some(i) if d > self.lo => self.boundary[i].clone(),
            _ => SparseMatrix::zeros(self.dim(d - 1), self.dim(d)),
        }
    }

    pub fn index_of(&self, d: i64, label: &str) -> Option<usize> {
        self.basis(d).iter().position(|l| l == label)
    }

    /// The subcomplex spanned by the generators for which `keep(degree, label)` holds.
    ///
    /// Fails if the boundary of a kept generator has a component outside the kept set.
    pub fn subcomplex(&self, keep: impl Fn(i64, &str) -> bool) -> Result<ChainComplex> {
        let Some((lo, hi)) = self.degrees() else {
            return Ok(ChainComplex::empty());
        };
        let kept: Vec<Vec<usize>> = (lo..=hi)
            .map(|d| {
                (0..self.dim(d))
                    .filter(|&i| keep(d, &self.basis(d)[i]))
                    .collect()
            })
            .collect();
        let mut basis = Vec::new();
        let mut boundary = Vec::new();
        for (k, d) in (lo..=hi).enumerate() {
            let cols = &kept[k];
            basis.push(
                cols.iter()
                    .map(|&i| self.basis(d)[i].clone())
                    .collect::<Vec<_>>(),
            );
            let full = self.boundary(d);
            let rows: BTreeMap<usize, usize> = if k == 0 {
                BTreeMap::new()
            } else {
                kept[k - 1]
                    .iter()
                    .enumerate()
                    .map(|(new, &old)| (old, new))
                    .collect()
            };
            let mut triplets = Vec::new();
            for (new_c, &c) in cols.iter().enumerate() {
                for (r, v) in full.column(c) {
                    let Some(&new_r) = rows.get(r) else {
                        return Err(SwfError::Inadmissible(format!(
                            "generator {} has boundary outside the subcomplex",
                            self.basis(d)[c]
                        )));
                    };
                    triplets.push((new_r, new_c, v.clone()));
                }
            }
            let nrows = if k == 0 { 0 } else { kept[k - 1].len() };
            boundary.push(SparseMatrix::from_triplets(nrows, cols.len(), triplets));
        }
        ChainComplex::new(lo, hi, basis, boundary)
    }

    /// Copy with the basis at degree `d` reordered: new position `i` holds old generator `perm[i]`.
    pub fn permute_degree(&self, d: i64, perm: &[usize]) -> ChainComplex {
        let mut out = self.clone();
        let Some(i) = self.slot(d) else { return out };
        assert_eq!(perm.len(), self.basis[i].len());
        let inverse: Vec<usize> = {
            let mut inv = vec![0; perm.len()];
            for (new, &old) in perm.iter().enumerate() {
                inv[old] = new;
            }
            inv
        };
        out.basis[i] = perm.iter().map(|&p| self.basis[i][p].clone()).collect();
        let own = &self.boundary[i];
        out.boundary[i] = SparseMatrix::from_triplets(
            own.rows(),
            own.cols(),
            own.entries().map(|(r, c, v)| (r, inverse[c], v.clone())),
        );
        if i + 1 < self.basis.len() {
            let up = &self.boundary[i + 1];
            out.boundary[i + 1] = SparseMatrix::from_triplets(
                up.rows(),
                up.cols(),
                up.entries().map(|(r, c, v)| (inverse[r], c, v.clone())),
            );
        }
        out
    }
}

/// Triplet text form, one block per degree.
impl fmt::Display for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((lo, hi)) = self.degrees() else {
            return writeln!(f, "empty complex");
        };
        for d in lo..=hi {
            writeln!(f, "degree {d}: {}", self.basis(d).join(" "))?;
            if d > lo {
                write!(f, "{}", self.boundary(d))?;
            }
        }
        Ok(())
    }
}

/// Every nonzero entry of `∂_{d−1} ∘ ∂_d`.
pub fn check_d_squared(c: &ChainComplex) -> ValidationReport {
    check_d_squared_with(c, Strategy::default())
}

pub fn check_d_squared_with(c: &ChainComplex, strategy: Strategy) -> ValidationReport {
    let Some((lo, hi)) = c.degrees() else {
        return ValidationReport::from_violations(Vec::new());
    };
    let degrees: Vec<i64> = (lo + 2..=hi).collect();
    let per_degree = strategy.map(&degrees, |&d| {
        let square = c.boundary(d - 1).mul(&c.boundary(d));
        square
            .entries()
            .map(|(r, col, v)| Violation {
                constraint: "d2".into(),
                witness: vec![
                    format!("degree {d}"),
                    c.basis(d)[col].clone(),
                    c.basis(d - 2)[r].clone(),
                ],
                residual: v.clone(),
            })
            .collect::<Vec<_>>()
    });
    ValidationReport::from_violations(per_degree.into_iter().flatten().collect())
}

/// Per-degree homology ranks with the range in which they are trustworthy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    /// Nonzero ranks only.
    pub ranks: BTreeMap<i64, usize>,
    pub certified: Option<(i64, i64)>,
    pub euler: Option<i64>,
}

impl HomologyTable {
    /// Table from raw ranks; the Euler characteristic is defined only if every
    /// nonzero rank lies in the certified range.
    pub fn new(ranks: BTreeMap<i64, usize>, certified: Option<(i64, i64)>) -> Self {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let inside = |d: i64| certified.is_some_and(|(lo, hi)| lo <= d && d <= hi);
        let euler = ranks
            .iter()
            .all(|(&d, _)| inside(d))
            .then(|| ranks.iter().map(|(&d, &r)| sign(d) * r as i64).sum());
        Self {
            ranks,
            certified,
            euler,
        }
    }

    pub fn rank(&self, d: i64) -> usize {
        self.ranks.get(&d).copied().unwrap_or(0)
    }

    pub fn is_certified(&self, d: i64) -> bool {
        self.certified.is_some_and(|(lo, hi)| lo <= d && d <= hi)
    }

    /// Drops ranks outside the certified range, keeping the Euler verdict.
    pub fn restricted_to_certified(mut self) -> Self {
        let certified = self.certified;
        self.ranks
            .retain(|&d, _| certified.is_some_and(|(lo, hi)| lo <= d && d <= hi));
        self
    }

    /// Every degree (ranks and certified range) moved up by `by`.
    pub fn shifted(&self, by: i64) -> Self {
        Self {
            ranks: self.ranks.iter().map(|(&d, &r)| (d + by, r)).collect(),
            certified: self.certified.map(|(lo, hi)| (lo + by, hi + by)),
            euler: self.euler.map(|e| if by % 2 == 0 { e } else { -e }),
        }
    }
}

pub(crate) fn sign(d: i64) -> i64 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Rank of every boundary map `∂_d`, `d` in the degree interval.
pub fn boundary_ranks(c: &ChainComplex, strategy: Strategy) -> BTreeMap<i64, usize> {
    let Some((lo, hi)) = c.degrees() else {
        return BTreeMap::new();
    };
    let degrees: Vec<i64> = (lo..=hi).collect();
    let ranks = strategy.map(&degrees, |&d| c.boundary(d).rank());
    degrees.into_iter().zip(ranks).collect()
}

/// Homology with certified range = degree interval minus its top endpoint.
pub fn homology(c: &ChainComplex) -> Result<HomologyTable> {
    homology_with(c, Strategy::default())
}

pub fn homology_with(c: &ChainComplex, strategy: Strategy) -> Result<HomologyTable> {
    let report = check_d_squared_with(c, strategy);
    if !report.ok {
        let v = &report.violations[0];
        return Err(SwfError::SquareNonzero(format!(
            "{} violations, first at {}",
            report.violations.len(),
            v.witness.join(" / ")
        )));
    }
    let certified = c
        .degrees()
        .and_then(|(lo, hi)| (hi > lo).then_some((lo, hi - 1)));
    Ok(HomologyTable::new(raw_betti(c, strategy), certified))
}

/// `dim ker ∂_d − rank ∂_{d+1}` at every degree, taking the boundary above the top as zero.
pub fn raw_betti(c: &ChainComplex, strategy: Strategy) -> BTreeMap<i64, usize> {
    let ranks = boundary_ranks(c, strategy);
    ranks
        .iter()
        .map(|(&d, &r)| {
            let above = ranks.get(&(d + 1)).copied().unwrap_or(0);
            (d, c.dim(d) - r - above)
        })
        .collect()
}

/// Alternating count of basis elements.
pub fn euler_characteristic(c: &ChainComplex) -> i64 {
    c.degrees()
        .map(|(lo, hi)| (lo..=hi).map(|d| sign(d) * c.dim(d) as i64).sum())
        .unwrap_or(0)
}

/// Linear map between complexes raising degree by `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub degree: i64,
    blocks: BTreeMap<i64, SparseMatrix>,
}

impl ChainMap {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        degree: i64,
        blocks: BTreeMap<i64, SparseMatrix>,
    ) -> Result<Self> {
        for (&d, m) in &blocks {
            if m.cols() != source.dim(d) || m.rows() != target.dim(d + degree) {
                return Err(SwfError::Inadmissible(format!(
                    "map block at degree {d} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(d + degree),
                    source.dim(d)
                )));
            }
        }
        Ok(Self {
            source,
            target,
            degree,
            blocks,
        })
    }

    pub fn block(&self, d: i64) -> SparseMatrix {
        self.blocks.get(&d).cloned().unwrap_or_else(|| {
            SparseMatrix::zeros(self.target.dim(d + self.degree), self.source.dim(d))
        })
    }

    /// Degrees at which the source is nonzero.
    fn source_degrees(&self) -> Vec<i64> {
        self.source
            .degrees()
            .map(|(lo, hi)| (lo..=hi).collect())
            .unwrap_or_default()
    }

    /// Nonzero entries of `∂ f − (−1)^k f ∂` for a map of degree `k`.
    pub fn commutator_residual(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let s = if self.degree.rem_euclid(2) == 0 {
            Q::one()
        } else {
            -Q::one()
        };
        for d in self.source_degrees() {
            let left = self.target.boundary(d + self.degree).mul(&self.block(d));
            let right = self.block(d - 1).mul(&self.source.boundary(d));
            let scaled = SparseMatrix::from_triplets(
                right.rows(),
                right.cols(),
                right.entries().map(|(r, c, v)| (r, c, v * &s)),
            );
            for (r, c, v) in left.sub(&scaled).entries() {
                violations.push(Violation {
                    constraint: "chain-map".into(),
                    witness: vec![
                        format!("degree {d}"),
                        self.source.basis(d)[c].clone(),
                        self.target.basis(d + self.degree - 1)[r].clone(),
                    ],
                    residual: v.clone(),
                });
            }
        }
        ValidationReport::from_violations(violations)
    }
}

/// Which representatives to choose for homology classes.
///
/// `Shifted` adds a fixed boundary to every canonical representative; the
/// classes are the same, so anything computed on homology must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepresentativePolicy {
    Canonical,
    Shifted,
}

/// Cycle representatives of a basis of `H_d` together with an independent spanning set of `B_d`.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: i64,
    pub chain_dim: usize,
    pub representatives: Vec<Vec<Q>>,
    pub boundaries: Vec<Vec<Q>>,
}

impl HomologyBasis {
    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    fn system(&self) -> DenseMatrix {
        let cols: Vec<Vec<Q>> = self
            .representatives
            .iter()
            .chain(&self.boundaries)
            .cloned()
            .collect();
        DenseMatrix::from_columns(self.chain_dim, &cols)
    }

    /// Coordinates of the class of `z` in the representative basis, or `None` if `z` is not a cycle.
    pub fn coordinates(&self, z: &[Q]) -> Option<Vec<Q>> {
        if self.chain_dim == 0 {
            return Some(Vec::new());
        }
        let x = self.system().solve(z)?;
        Some(x[..self.rank()].to_vec())
    }

    pub fn is_boundary(&self, z: &[Q]) -> bool {
        if z.iter().all(Zero::is_zero) {
            return true;
        }
        if self.boundaries.is_empty() {
            return false;
        }
        DenseMatrix::from_columns(self.chain_dim, &self.boundaries)
            .solve(z)
            .is_some()
    }
}

pub fn homology_basis(c: &ChainComplex, d: i64, policy: RepresentativePolicy) -> HomologyBasis {
    let dim = c.dim(d);
    let cycles = if dim == 0 {
        Vec::new()
    } else {
        c.boundary(d).to_dense().nullspace()
    };
    let up = c.boundary(d + 1).to_dense();
    let spanning: Vec<Vec<Q>> = (0..up.cols()).map(|j| up.column(j)).collect();
    let boundaries: Vec<Vec<Q>> = independent_subset(dim, &spanning)
        .into_iter()
        .map(|i| spanning[i].clone())
        .collect();
    let candidates: Vec<Vec<Q>> = boundaries.iter().chain(&cycles).cloned().collect();
    let mut representatives: Vec<Vec<Q>> = independent_subset(dim, &candidates)
        .into_iter()
        .filter(|&i| i >= boundaries.len())
        .map(|i| candidates[i].clone())
        .collect();
    if policy == RepresentativePolicy::Shifted && !boundaries.is_empty() {
        for (k, rep) in representatives.iter_mut().enumerate() {
            let factor = Q::from_integer((k as i64 + 2).into());
            for b in &boundaries {
                for (x, y) in rep.iter_mut().zip(b) {
                    *x += &factor * y;
                }
            }
        }
    }
    HomologyBasis {
        degree: d,
        chain_dim: dim,
        representatives,
        boundaries,
    }
}

/// Rank of the map `H_d(source) → H_{d+k}(target)` induced by `f`.
pub fn induced_rank(f: &ChainMap, d: i64) -> usize {
    let source = homology_basis(&f.source, d, RepresentativePolicy::Canonical);
    let target = homology_basis(&f.target, d + f.degree, RepresentativePolicy::Canonical);
    let block = f.block(d);
    let images: Vec<Vec<Q>> = source
        .representatives
        .iter()
        .map(|z| block.apply(z))
        .collect();
    let with: Vec<Vec<Q>> = target.boundaries.iter().chain(&images).cloned().collect();
    independent_subset(target.chain_dim, &with).len() - target.boundaries.len()
}

/// `0 → sub → mid → quot → 0` given by an inclusion and a projection.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

impl ShortExactSequence {
    pub fn new(inclusion: ChainMap, projection: ChainMap) -> Result<Self> {
        if inclusion.degree != 0 || projection.degree != 0 || inclusion.target != projection.source
        {
            return Err(SwfError::NonExact {
                degree: 0,
                message: "maps must have degree zero and share the middle complex".into(),
            });
        }
        let ses = Self {
            inclusion,
            projection,
        };
        ses.check()?;
        Ok(ses)
    }

    fn check(&self) -> Result<()> {
        let mid = &self.inclusion.target;
        let mut degrees: Vec<i64> = Vec::new();
        for c in [&self.inclusion.source, mid, &self.projection.target] {
            if let Some((lo, hi)) = c.degrees() {
                degrees.extend(lo..=hi);
            }
        }
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            let i = self.inclusion.block(d);
            let p = self.projection.block(d);
            let fail = |message: &str| SwfError::NonExact {
                degree: d,
                message: message.into(),
            };
            if !p.mul(&i).is_zero() {
                return Err(fail("projection after inclusion is nonzero"));
            }
            let ri = i.rank();
            let rp = p.rank();
            if ri != self.inclusion.source.dim(d) {
                return Err(fail("inclusion is not injective"));
            }
            if rp != self.projection.target.dim(d) {
                return Err(fail("projection is not surjective"));
            }
            if ri + rp != mid.dim(d) {
                return Err(fail("middle is not exact"));
            }
        }
        Ok(())
    }

    pub fn sub(&self) -> &ChainComplex {
        &self.inclusion.source
    }

    pub fn mid(&self) -> &ChainComplex {
        &self.inclusion.target
    }

    pub fn quotient(&self) -> &ChainComplex {
        &self.projection.target
    }
}

/// Connecting map `H_d(quot) → H_{d−1}(sub)` as a matrix on the chosen homology bases.
///
/// Row `i`, column `j` is the `i`-th coordinate of the image of the `j`-th
/// representative.
pub fn connecting_map_oracle(
    ses: &ShortExactSequence,
    d: i64,
    policy: RepresentativePolicy,
) -> Result<Vec<Vec<Q>>> {
    let quot = homology_basis(ses.quotient(), d, policy);
    let sub = homology_basis(ses.sub(), d - 1, policy);
    let lift = ses.projection.block(d).to_dense();
    let pull = ses.inclusion.block(d - 1).to_dense();
    let boundary = ses.mid().boundary(d);
    let mut matrix = vec![vec![Q::zero(); quot.rank()]; sub.rank()];
    for (j, z) in quot.representatives.iter().enumerate() {
        let x = lift.solve(z).ok_or_else(|| SwfError::NonExact {
            degree: d,
            message: "representative has no lift".into(),
        })?;
        let y = boundary.apply(&x);
        let w = if pull.cols() == 0 {
            if y.iter().any(|v| !v.is_zero()) {
                return Err(SwfError::NonExact {
                    degree: d - 1,
                    message: "boundary of lift leaves the subcomplex".into(),
                });
            }
            Vec::new()
        } else {
            pull.solve(&y).ok_or_else(|| SwfError::NonExact {
                degree: d - 1,
                message: "boundary of lift leaves the subcomplex".into(),
            })?
        };
        let coords = sub.coordinates(&w).ok_or_else(|| SwfError::NonExact {
            degree: d - 1,
            message: "pulled-back element is not a cycle".into(),
        })?;
        for (i, v) in coords.into_iter().enumerate() {
            matrix[i][j] = v;
        }
    }
    Ok(matrix)
}

/// Rank of a row-major rational matrix.
pub fn matrix_rank(rows: &[Vec<Q>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let mut m = DenseMatrix::zeros(rows.len(), rows[0].len());
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn line(n: usize, values: &[i64]) -> ChainComplex {
        // generators g0..g{n-1} in degrees 0..n-1, ∂ g_{k} = values[k-1] g_{k-1}
        let gens: Vec<(i64, String)> = (0..n).map(|k| (k as i64, format!("g{k}"))).collect();
        let entries = (1..n).map(|k| (k, k - 1, q(values[k - 1])));
        ChainComplex::from_generators(0, n as i64 - 1, &gens, entries).unwrap()
    }

    #[test]
    fn zero_boundary_keeps_basis_sizes() {
        let c = line(3, &[0, 0]);
        assert!(check_d_squared(&c).ok);
        let h = homology(&c).unwrap();
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 1);
        assert_eq!(h.certified, Some((0, 1)));
    }

    #[test]
    fn identity_step_is_acyclic() {
        let c = line(2, &[1]);
        assert!(check_d_squared(&c).ok);
        let h = homology(&c).unwrap();
        assert!(h.ranks.is_empty());
        assert_eq!(h.euler, Some(0));
    }

    #[test]
    fn two_identities_fail_the_square() {
        let c = line(3, &[1, 1]);
        let report = check_d_squared(&c);
        assert!(!report.ok);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].residual, q(1));
        assert!(matches!(homology(&c), Err(SwfError::SquareNonzero(_))));
    }

    #[test]
    fn empty_complex() {
        let c = ChainComplex::empty();
        assert_eq!(euler_characteristic(&c), 0);
        let h = homology(&c).unwrap();
        assert_eq!(h.certified, None);
        assert_eq!(h.euler, Some(0));
    }

    #[test]
    fn euler_undefined_when_support_is_uncertified() {
        let c = line(2, &[0]);
        let h = homology(&c).unwrap();
        assert_eq!(h.rank(1), 1);
        assert_eq!(h.euler, None);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let bad = ChainComplex::new(
            0,
            1,
            vec![vec!["a".into()], vec!["b".into()]],
            vec![SparseMatrix::zeros(0, 1), SparseMatrix::zeros(2, 1)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn subcomplex_requires_closure() {
        let c = line(2, &[1]);
        assert!(c.subcomplex(|_, l| l == "g1").is_err());
        let sub = c.subcomplex(|_, l| l == "g0").unwrap();
        assert_eq!(sub.total_dim(), 1);
    }

    #[test]
    fn permutation_preserves_homology() {
        let gens: Vec<(i64, String)> = vec![
            (0, "x".into()),
            (0, "y".into()),
            (1, "e".into()),
            (1, "f".into()),
        ];
        let entries = vec![(2, 0, q(1)), (2, 1, q(-1)), (3, 1, q(2))];
        let c = ChainComplex::from_generators(0, 1, &gens, entries).unwrap();
        let p = c.permute_degree(0, &[1, 0]).permute_degree(1, &[1, 0]);
        assert_eq!(homology(&c).unwrap(), homology(&p).unwrap());
        assert_eq!(p.basis(0), &["y".to_string(), "x".to_string()]);
    }

    #[test]
    fn triplet_text_lists_degrees() {
        let text = line(2, &[3]).to_string();
        assert!(text.contains("degree 1: g1"));
        assert!(text.contains("0 0 3"));
    }

    #[test]
    fn connecting_map_of_a_cone() {
        // sub = Q·s in degree 0, mid = {e in 1, s in 0} with ∂e = s, quot = Q·e in degree 1
        let mid = ChainComplex::from_generators(
            0,
            1,
            &[(0, "s".into()), (1, "e".into())],
            [(1, 0, q(1))],
        )
        .unwrap();
        let sub = ChainComplex::from_generators(0, 1, &[(0, "s".into())], []).unwrap();
        let quot = ChainComplex::from_generators(0, 1, &[(1, "e".into())], []).unwrap();
        let inc = ChainMap::new(
            sub.clone(),
            mid.clone(),
            0,
            BTreeMap::from([(0, SparseMatrix::identity(1))]),
        )
        .unwrap();
        let proj = ChainMap::new(
            mid,
            quot,
            0,
            BTreeMap::from([(1, SparseMatrix::identity(1))]),
        )
        .unwrap();
        assert!(inc.commutator_residual().ok);
        assert!(proj.commutator_residual().ok);
        let ses = ShortExactSequence::new(inc, proj).unwrap();
        for policy in [
            RepresentativePolicy::Canonical,
            RepresentativePolicy::Shifted,
        ] {
            assert_eq!(
                connecting_map_oracle(&ses, 1, policy).unwrap(),
                vec![vec![q(1)]]
            );
        }
    }
}
