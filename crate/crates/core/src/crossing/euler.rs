use serde::Serialize;

use super::CrossingData;
use crate::chain::{sign, HomologyTable};
use crate::complexes::{casson, equivariant_homology};
use crate::error::{Result, SwfError};

/// `Σ_{k<s} (−1)^k b_k − s/2` for an even `s` past which the ranks are the
/// `R[Ω]` tail (1 in even degrees, 0 in odd), with the reducible normalised to
/// index 0. The value does not depend on which such `s` is used.
pub fn euler_from_equivariant(table: &HomologyTable) -> Result<i64> {
    let (lo, hi) = table
        .certified
        .ok_or_else(|| SwfError::NoTail("empty certified range".into()))?;
    let tail_from = |s: i64| (s..=hi).all(|k| table.rank(k) == usize::from(k.rem_euclid(2) == 0));
    let mut s = lo + lo.rem_euclid(2);
    while s < hi {
        if tail_from(s) {
            let head: i64 = table
                .ranks
                .range(..s)
                .map(|(&k, &b)| sign(k) * b as i64)
                .sum();
            return Ok(head - s / 2);
        }
        s += 2;
    }
    Err(SwfError::NoTail(format!("[{lo}, {hi}]")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankMismatch {
    pub degree: i64,
    pub side0: usize,
    /// Rank of side 1 at `degree + 2·sf_c`, reducible moved to index `μ(θ₀)`.
    pub side1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallcrossReport {
    pub ok: bool,
    pub sf_c: i64,
    /// `(λ(side0), λ(side1))` from the non-equivariant complexes.
    pub casson: (i64, i64),
    pub expected_casson1: i64,
    pub casson_ok: bool,
    /// The same invariants read off the equivariant ranks; `None` when the tail is not visible.
    pub euler_from_equivariant: (Option<i64>, Option<i64>),
    /// Side-0 degrees on which the two rank tables were compared.
    pub compared: Option<(i64, i64)>,
    pub rank_mismatches: Vec<RankMismatch>,
    pub ranks_ok: bool,
}

/// Checks `SWH_{k,U(1)}(side0) ≅ SWH_{k+2sf_c,U(1)}(side1)` (side 1 regraded so
/// that both reducibles sit at the same index) and `λ₁ = λ₀ − sf_c`.
pub fn wallcross_check(cd: &CrossingData, max_power: u32) -> Result<WallcrossReport> {
    let sf = cd.sf_c();
    let (t0, t1) = (cd.theta0(), cd.theta1());
    let h0 = equivariant_homology(cd.side0(), max_power)?;
    let h1 = equivariant_homology(cd.side1(), max_power)?.shifted(t0 - t1);
    let (c0, c1) = (casson(cd.side0())?, casson(cd.side1())?);

    let compared = match (h0.certified, h1.certified) {
        (Some((a, b)), Some((c, d))) => {
            let (lo, hi) = (a.max(c - 2 * sf), b.min(d - 2 * sf));
            (lo <= hi).then_some((lo, hi))
        }
        _ => None,
    };
    let mut rank_mismatches = Vec::new();
    if let Some((lo, hi)) = compared {
        for k in lo..=hi {
            let (r0, r1) = (h0.rank(k), h1.rank(k + 2 * sf));
            if r0 != r1 {
                rank_mismatches.push(RankMismatch {
                    degree: k,
                    side0: r0,
                    side1: r1,
                });
            }
        }
    }
    let euler = (
        euler_from_equivariant(&h0.shifted(-t0)).ok(),
        euler_from_equivariant(&h1.shifted(-t0)).ok(),
    );
    let ranks_ok = rank_mismatches.is_empty();
    let casson_ok = c1 == c0 - sf;
    Ok(WallcrossReport {
        ok: ranks_ok && casson_ok,
        sf_c: sf,
        casson: (c0, c1),
        expected_casson1: c0 - sf,
        casson_ok,
        euler_from_equivariant: euler,
        compared,
        rank_mismatches,
        ranks_ok,
    })
}
