use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{format_q, DenseMatrix, Q};

/// Column-compressed sparse matrix over `Q`.
///
/// Each column holds `(row, value)` pairs sorted by row with no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Q)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.columns[i].push((i, super::q_one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Q)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "triplet ({r}, {c}) outside {rows}x{cols}"
            );
            *acc[c].entry(r).or_insert_with(Q::zero) += v;
        }
        let columns = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Self {
            rows,
            cols,
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, Q)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.columns[c]
            .binary_search_by_key(&r, |(row, _)| *row)
            .map(|i| self.columns[c][i].1.clone())
            .unwrap_or_else(|_| Q::zero())
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.entries().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let columns = rhs
            .columns
            .iter()
            .map(|rcol| {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (k, b) in rcol {
                    for (i, a) in &self.columns[*k] {
                        *acc.entry(*i).or_insert_with(Q::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &SparseMatrix, negate: bool) -> SparseMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in sum"
        );
        let triplets = self.entries().map(|(r, c, v)| (r, c, v.clone())).chain(
            rhs.entries()
                .map(|(r, c, v)| (r, c, if negate { -v.clone() } else { v.clone() })),
        );
        SparseMatrix::from_triplets(self.rows, self.cols, triplets)
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![Q::zero(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if x[c].is_zero() {
                continue;
            }
            for (r, v) in col {
                out[*r] += v * &x[c];
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            d.set(r, c, v.clone());
        }
        d
    }

    /// Rank by column reduction.
    ///
    /// Columns are processed sparsest first; each is reduced against earlier
    /// pivots keyed by their lowest nonzero row until it either vanishes or
    /// claims a new pivot row.
    pub fn rank(&self) -> usize {
        let mut order: Vec<usize> = (0..self.cols)
            .filter(|&c| !self.columns[c].is_empty())
            .collect();
        order.sort_by_key(|&c| (self.columns[c].len(), c));
        let mut pivots: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
        for c in order {
            let mut col = self.columns[c].clone();
            while let Some((low, lv)) = col.last().cloned() {
                match pivots.get(&low) {
                    Some(p) => {
                        let factor = &lv / &p.last().expect("pivot column is nonempty").1;
                        col = axpy_sparse(&col, p, &factor);
                    }
                    None => {
                        pivots.insert(low, col);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

/// `a - factor * b` for sorted sparse columns.
fn axpy_sparse(a: &[(usize, Q)], b: &[(usize, Q)], factor: &Q) -> Vec<(usize, Q)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let rb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ra < rb {
            out.push(a[i].clone());
            i += 1;
        } else if rb < ra {
            out.push((rb, -(factor * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - factor * &b[j].1;
            if !v.is_zero() {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Triplet text form: a `rows cols nnz` header followed by one `row col value` line per entry.
impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.nnz())?;
        for (r, c, v) in self.entries() {
            writeln!(f, "{r} {c} {}", format_q(v))?;
        }
        Ok(())
    }
}
