//! Sparse matrices over Z_(p).

use crate::scalar::{self, Scalar};
use crate::Prime;
use num::Zero;
use std::collections::BTreeMap;

/// A rows x cols matrix over Z_(p), storing only nonzero entries.
///
/// Invariants: every stored entry is nonzero and p-local for the ambient
/// prime; indices are in range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zero(prime: Prime, rows: usize, cols: usize) -> Self {
        SparseMatrix { prime, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        let mut m = Self::zero(prime, n, n);
        for i in 0..n {
            m.set(i, i, scalar::int(1));
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Overwrites one entry. Zero deletes; non-p-local values are a bug.
    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            assert!(scalar::is_p_local(&value, self.prime), "matrix entry is not p-local");
            self.entries.insert((row, col), value);
        }
    }

    /// Adds to one entry, dropping it when the sum cancels.
    pub fn add_to(&mut self, row: usize, col: usize, value: Scalar) {
        if value.is_zero() {
            return;
        }
        let current = self.get(row, col);
        self.set(row, col, current + value);
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn column(&self, col: usize) -> Vec<Scalar> {
        assert!(col < self.cols);
        let mut v = vec![Scalar::zero(); self.rows];
        for (r, c, x) in self.iter() {
            if c == col {
                v[r] = x.clone();
            }
        }
        v
    }

    pub fn from_columns(prime: Prime, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zero(prime, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        m
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = SparseMatrix::zero(self.prime, self.rows, other.cols);
        // Group left entries by column so each pairs only with matching rows.
        let mut by_col: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (r, c, v) in self.iter() {
            by_col.entry(c).or_default().push((r, v));
        }
        for (r2, c2, v2) in other.iter() {
            if let Some(lefts) = by_col.get(&r2) {
                for &(r1, v1) in lefts {
                    out.add_to(r1, c2, v1 * v2);
                }
            }
        }
        out
    }

    /// Matrix-vector product self * v.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out = vec![Scalar::zero(); self.rows];
        for (r, c, x) in self.iter() {
            if !v[c].is_zero() {
                out[r] += x * &v[c];
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = SparseMatrix::zero(self.prime, self.rows, self.cols + other.cols);
        for (r, c, v) in self.iter() {
            out.set(r, c, v.clone());
        }
        for (r, c, v) in other.iter() {
            out.set(r, self.cols + c, v.clone());
        }
        out
    }

    /// Copy with rows and columns relabeled by the given permutations.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        assert_eq!(row_perm.len(), self.rows);
        assert_eq!(col_perm.len(), self.cols);
        let mut out = SparseMatrix::zero(self.prime, self.rows, self.cols);
        for (r, c, v) in self.iter() {
            out.set(row_perm[r], col_perm[c], v.clone());
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn from_dense(prime: Prime, data: &[Vec<Scalar>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = Self::zero(prime, rows, cols);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    /// Builds from integer rows; convenient in tests.
    pub fn from_int_rows(prime: Prime, data: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> =
            data.iter().map(|row| row.iter().map(|&n| scalar::int(n)).collect()).collect();
        Self::from_dense(prime, &dense)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn stores_only_nonzero() {
        let mut m = SparseMatrix::zero(p3(), 2, 2);
        m.set(0, 0, int(5));
        m.add_to(0, 0, int(-5));
        assert!(m.is_zero());
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    #[should_panic(expected = "not p-local")]
    fn rejects_non_local_entries() {
        let mut m = SparseMatrix::zero(p3(), 1, 1);
        m.set(0, 0, crate::scalar::ratio(1, 3));
    }

    #[test]
    fn multiplies() {
        let a = SparseMatrix::from_int_rows(p3(), &[&[1, 2], &[0, 1]]);
        let b = SparseMatrix::from_int_rows(p3(), &[&[3, 0], &[1, 1]]);
        let ab = a.mul(&b);
        assert_eq!(ab, SparseMatrix::from_int_rows(p3(), &[&[5, 2], &[1, 1]]));
    }

    #[test]
    fn applies_to_vectors() {
        let a = SparseMatrix::from_int_rows(p3(), &[&[1, 2], &[0, 1]]);
        assert_eq!(a.apply(&[int(1), int(1)]), vec![int(3), int(1)]);
    }
}
