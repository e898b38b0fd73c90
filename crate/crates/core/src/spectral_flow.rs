//! Finite-dimensional model of the chamber structure: spectral flow along a
//! sampled path of Hermitian matrices, wall detection, and the local
//! Kuranishi model at a simple crossing.
//!
//! This is the only floating-point module. Every comparison with zero uses the
//! path's `tol`: an eigenvalue with `|λ| ≤ tol` counts as zero.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SwfError};
use crate::floer_data::json::from_json_slice;
use crate::parallel::Strategy;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

pub const DEFAULT_TOL: f64 = 1e-9;
/// Bisection depth per sample interval before giving up.
pub const DEFAULT_DEPTH: u32 = 16;

/// Piecewise-linear path `t ↦ M(t)` through Hermitian samples, `t ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPath {
    dim: usize,
    tol: f64,
    samples: Vec<(f64, CMatrix)>,
}

impl HermitianPath {
    pub fn new(samples: Vec<(f64, CMatrix)>, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(SwfError::InvalidPath(format!(
                "tolerance {tol} is not a positive real"
            )));
        }
        if samples.len() < 2 {
            return Err(SwfError::InvalidPath(
                "a path needs at least two samples".into(),
            ));
        }
        let dim = samples[0].1.nrows();
        for (i, (t, m)) in samples.iter().enumerate() {
            if !(0.0..=1.0).contains(t) {
                return Err(SwfError::InvalidPath(format!(
                    "sample {i}: t = {t} outside [0, 1]"
                )));
            }
            if i > 0 && *t <= samples[i - 1].0 {
                return Err(SwfError::InvalidPath(format!(
                    "sample {i}: t is not increasing"
                )));
            }
            if m.nrows() != dim || m.ncols() != dim {
                return Err(SwfError::InvalidPath(format!(
                    "sample {i}: expected a {dim}x{dim} matrix"
                )));
            }
            let skew = (m - m.adjoint())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if skew > tol {
                return Err(SwfError::InvalidPath(format!(
                    "sample {i}: not Hermitian (deviation {skew:e})"
                )));
            }
        }
        Ok(Self { dim, tol, samples })
    }

    /// Path through real symmetric samples.
    pub fn from_real(samples: Vec<(f64, RMatrix)>, tol: f64) -> Result<Self> {
        Self::new(
            samples
                .into_iter()
                .map(|(t, m)| (t, m.map(|x| C64::new(x, 0.0))))
                .collect(),
            tol,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn samples(&self) -> &[(f64, CMatrix)] {
        &self.samples
    }

    /// `M(t)` by linear interpolation between neighbouring samples, clamped to the sampled range.
    pub fn at(&self, t: f64) -> CMatrix {
        let first = &self.samples[0];
        if t <= first.0 {
            return first.1.clone();
        }
        for w in self.samples.windows(2) {
            let ((a, ma), (b, mb)) = (&w[0], &w[1]);
            if t <= *b {
                let s = (t - a) / (b - a);
                return ma * C64::new(1.0 - s, 0.0) + mb * C64::new(s, 0.0);
            }
        }
        self.samples.last().expect("two samples").1.clone()
    }

    /// The path run backwards.
    pub fn reversed(&self) -> Self {
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|(t, m)| (1.0 - t, m.clone()))
            .collect();
        Self {
            dim: self.dim,
            tol: self.tol,
            samples,
        }
    }

    /// The two pieces on either side of `s`, each stretched back to `[0, 1]`.
    pub fn split(&self, s: f64) -> Result<(Self, Self)> {
        let (t0, t1) = (
            self.samples[0].0,
            self.samples.last().expect("two samples").0,
        );
        if !(t0 < s && s < t1) {
            return Err(SwfError::InvalidPath(format!(
                "split point {s} is not interior"
            )));
        }
        let junction = self.at(s);
        let mut left: Vec<(f64, CMatrix)> = self
            .samples
            .iter()
            .filter(|(t, _)| *t < s)
            .cloned()
            .collect();
        left.push((s, junction.clone()));
        let mut right = vec![(s, junction)];
        right.extend(self.samples.iter().filter(|(t, _)| *t > s).cloned());
        let stretch = |piece: Vec<(f64, CMatrix)>| {
            let (a, b) = (piece[0].0, piece.last().expect("nonempty").0);
            let samples = piece
                .into_iter()
                .map(|(t, m)| ((t - a) / (b - a), m))
                .collect();
            Self::new(samples, self.tol)
        };
        Ok((stretch(left)?, stretch(right)?))
    }

    /// `self` on `[0, ½]` followed by `next` on `[½, 1]`; the junction matrices must agree within `tol`.
    pub fn concat(&self, next: &Self) -> Result<Self> {
        let end = &self.samples.last().expect("two samples").1;
        let start = &next.samples[0].1;
        if end.shape() != start.shape() || (end - start).iter().any(|z| z.norm() > self.tol) {
            return Err(SwfError::InvalidPath("paths do not meet".into()));
        }
        let (a0, a1) = (self.samples[0].0, self.samples.last().expect("two").0);
        let (b0, b1) = (next.samples[0].0, next.samples.last().expect("two").0);
        let mut samples: Vec<(f64, CMatrix)> = self
            .samples
            .iter()
            .map(|(t, m)| (0.5 * (t - a0) / (a1 - a0), m.clone()))
            .collect();
        samples.extend(
            next.samples
                .iter()
                .skip(1)
                .map(|(t, m)| (0.5 + 0.5 * (t - b0) / (b1 - b0), m.clone())),
        );
        Self::new(samples, self.tol.max(next.tol))
    }
}

/// Wire form of a path: row-major real and imaginary parts per sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    pub dim: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    pub samples: Vec<SampleJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleJson {
    pub t: f64,
    pub re: Vec<Vec<f64>>,
    /// Omitted for real symmetric samples.
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl TryFrom<PathJson> for HermitianPath {
    type Error = SwfError;

    fn try_from(j: PathJson) -> Result<Self> {
        let n = j.dim;
        let mut samples = Vec::with_capacity(j.samples.len());
        for (i, s) in j.samples.into_iter().enumerate() {
            let square =
                |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
            if !square(&s.re) || !(s.im.is_empty() || square(&s.im)) {
                return Err(SwfError::InvalidPath(format!(
                    "sample {i}: expected {n}x{n} re and im parts"
                )));
            }
            let m = CMatrix::from_fn(n, n, |r, c| {
                C64::new(s.re[r][c], if s.im.is_empty() { 0.0 } else { s.im[r][c] })
            });
            samples.push((s.t, m));
        }
        HermitianPath::new(samples, j.tol)
    }
}

impl From<&HermitianPath> for PathJson {
    fn from(p: &HermitianPath) -> Self {
        let rows = |m: &CMatrix, part: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| part(&m[(r, c)])).collect())
                .collect()
        };
        PathJson {
            dim: p.dim,
            tol: p.tol,
            samples: p
                .samples
                .iter()
                .map(|(t, m)| SampleJson {
                    t: *t,
                    re: rows(m, |z| z.re),
                    im: rows(m, |z| z.im),
                })
                .collect(),
        }
    }
}

pub fn parse_path(bytes: &[u8]) -> Result<HermitianPath> {
    HermitianPath::try_from(from_json_slice::<PathJson>(bytes)?)
}

/// Eigenvalues in ascending order.
pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Number of eigenvalues with `|λ| ≤ tol`: the kernel-dimension proxy, 0 off the wall.
pub fn wall_signature(m: &CMatrix, tol: f64) -> usize {
    eigenvalues(m)
        .into_iter()
        .filter(|l| l.abs() <= tol)
        .count()
}

/// Signs of the eigenvalues of one sample, with near-zero eigenvalues keeping the previous sign.
fn advance(signs: &[i8], ev: &[f64], tol: f64) -> (Vec<i8>, i64) {
    let mut flow = 0;
    let next = signs
        .iter()
        .zip(ev)
        .map(|(&s, &l)| {
            if l.abs() <= tol {
                return s;
            }
            let n = if l > 0.0 { 1 } else { -1 };
            if n != s {
                flow += i64::from(n);
            }
            n
        })
        .collect();
    (next, flow)
}

fn signs_at(ev: &[f64]) -> Vec<i8> {
    ev.iter().map(|&l| if l > 0.0 { 1 } else { -1 }).collect()
}

/// Flow across `[a, b]` at bisection level `level`, and the signs reached at `b`.
fn flow_at_level(
    path: &HermitianPath,
    a: f64,
    b: f64,
    level: u32,
    signs: &[i8],
    strategy: Strategy,
) -> (i64, Vec<i8>) {
    let pieces = 1usize << level;
    let ts: Vec<f64> = (1..=pieces)
        .map(|i| a + (b - a) * i as f64 / pieces as f64)
        .collect();
    let spectra = strategy.map(&ts, |&t| eigenvalues(&path.at(t)));
    let mut current = signs.to_vec();
    let mut total = 0;
    for ev in &spectra {
        let (next, f) = advance(&current, ev, path.tol);
        current = next;
        total += f;
    }
    (total, current)
}

/// Signed count of eigenvalues crossing zero upwards minus downwards.
///
/// Eigenvalues are tracked in sorted order between consecutive points, which
/// is the minimal-displacement matching on the real line. Each sample interval
/// is bisected until the count agrees across three successive levels.
pub fn spectral_flow(path: &HermitianPath) -> Result<i64> {
    spectral_flow_with(path, DEFAULT_DEPTH, Strategy::default())
}

pub fn spectral_flow_with(path: &HermitianPath, depth: u32, strategy: Strategy) -> Result<i64> {
    for (t, m) in [path.samples.first(), path.samples.last()]
        .into_iter()
        .flatten()
    {
        if wall_signature(m, path.tol) > 0 {
            return Err(SwfError::EndpointOnWall { t: *t });
        }
    }
    let mut signs = signs_at(&eigenvalues(&path.samples[0].1));
    let mut total = 0;
    for w in path.samples.windows(2) {
        let (a, b) = (w[0].0, w[1].0);
        let mut history: Vec<i64> = Vec::new();
        let mut settled = None;
        for level in 0..=depth {
            let (f, s) = flow_at_level(path, a, b, level, &signs, strategy);
            history.push(f);
            if history.len() >= 3 && history[history.len() - 3..].iter().all(|&x| x == f) {
                settled = Some((f, s));
                break;
            }
        }
        let (f, s) = settled.ok_or(SwfError::Resolution { t0: a, t1: b })?;
        total += f;
        signs = s;
    }
    Ok(total)
}

/// `λ′(0)` and `γ` of the local model; the radius `r` only rescales `γ` by `r² > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalModelParams {
    pub lambda_prime: f64,
    pub gamma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KuranishiPrediction {
    /// Sign of the `t` at which the irreducible branch exists.
    pub branch_side: i8,
    /// Sign with which that irreducible counts in the invariant.
    pub branch_sign: i8,
    /// `λ(t > 0) − λ(t < 0)`.
    pub delta_lambda: i64,
    pub sf_c: i64,
}

/// Reads the wall-crossing from the branch `t = −λ′(0)/(r²γ)`.
///
/// The branch line is oriented by `sign(γ)·sf_c`, which puts `+1` on `t < 0`
/// and `−1` on `t > 0` in every quadrant. The jump is `−sf_c`.
pub fn kuranishi_crossing(p: LocalModelParams) -> Result<KuranishiPrediction> {
    for (name, v) in [("lambda_prime", p.lambda_prime), ("gamma", p.gamma)] {
        if v == 0.0 || !v.is_finite() {
            return Err(SwfError::DegenerateModel(format!("{name} = {v}")));
        }
    }
    let sign = |x: f64| if x > 0.0 { 1i8 } else { -1 };
    let sf_c = sign(p.lambda_prime);
    Ok(KuranishiPrediction {
        branch_side: sign(-p.lambda_prime / p.gamma),
        branch_sign: sign(p.gamma) * sf_c,
        delta_lambda: -i64::from(sf_c),
        sf_c: i64::from(sf_c),
    })
}

/// Net change of the invariant over consecutive simple crossings.
pub fn compose_crossings(crossings: &[KuranishiPrediction]) -> i64 {
    crossings.iter().map(|c| c.delta_lambda).sum()
}
