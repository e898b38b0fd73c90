use num_traits::{One, Zero};

use super::{SparseMatrix, Q};

/// Row-major dense matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Reduced row echelon form plus the pivot columns, in order.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            (0..self.rows)
                .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
                .filter_map(|(r, c)| {
                    let v = self.get(r, c);
                    (!v.is_zero()).then(|| (r, c, v.clone()))
                }),
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = Q::one() / m.get(row, col);
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c) - &factor * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space; each vector has a 1 in its free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let Echelon { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self * x = b`, free variables set to zero; `None` if inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = DenseMatrix::zeros(self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs.clone());
        }
        let Echelon { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !x[c].is_zero())
                    .fold(Q::zero(), |acc, c| acc + self.get(r, c) * &x[c])
            })
            .collect()
    }
}

/// Indices of a maximal linearly independent subset of `vectors`, scanning in order.
pub fn independent_subset(dim: usize, vectors: &[Vec<Q>]) -> Vec<usize> {
    let m = DenseMatrix::from_columns(dim, vectors);
    m.rref().pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn dm(rows: usize, cols: usize, data: &[i64]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(rows, cols);
        for (k, &v) in data.iter().enumerate() {
            m.set(k / cols, k % cols, q(v));
        }
        m
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let a = dm(2, 4, &[1, 2, 0, -1, 0, 0, 1, 3]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.apply(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = dm(2, 2, &[1, 1, 1, 1]);
        assert!(a.solve(&[q(1), q(2)]).is_none());
        let x = a.solve(&[q(3), q(3)]).unwrap();
        assert_eq!(a.apply(&x), vec![q(3), q(3)]);
        let b = dm(2, 2, &[2, 0, 0, 4]);
        assert_eq!(
            b.solve(&[q(1), q(1)]).unwrap()[1],
            Q::new(1.into(), 4.into())
        );
    }

    #[test]
    fn independent_subset_skips_dependents() {
        let vs = vec![vec![q(1), q(0)], vec![q(2), q(0)], vec![q(0), q(1)]];
        assert_eq!(independent_subset(2, &vs), vec![0, 2]);
    }
}
