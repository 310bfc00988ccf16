//! Smith normal form over the discrete valuation ring Z_(p).
//!
//! Over Z_(p) divisibility is total (a | b iff val(a) <= val(b)), so a single
//! sweep per pivot suffices: pick an entry of minimal p-valuation, move it to
//! the diagonal, normalize it to an exact power of p, and clear its row and
//! column by exact division. Choosing a globally minimal pivot at every step
//! makes the diagonal valuations nondecreasing.

use crate::linalg::SparseMatrix;
use crate::scalar::{self, Scalar};
use crate::Prime;
use num::{BigInt, BigRational, One, Zero};

/// Tie-breaking rule among entries of minimal valuation.
///
/// The default picks the lexicographically smallest (row, col). The opposite
/// rule exists so determinism audits can perturb pivoting and confirm that
/// every reported isomorphism type is unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    #[default]
    MinPosition,
    MaxPosition,
}

/// Result of diagonalizing A as left * A * right = diag.
///
/// Both transforms are invertible over Z_(p) (their inverses are stored and
/// p-local). The diagonal holds the nonzero entries only, each an exact power
/// p^e, with exponents nondecreasing.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    prime: Prime,
    rows: usize,
    cols: usize,
    diagonal: Vec<Scalar>,
    left: SparseMatrix,
    left_inv: SparseMatrix,
    right: SparseMatrix,
    right_inv: SparseMatrix,
}

pub fn smith_normal_form(a: &SparseMatrix) -> SmithDecomposition {
    smith_normal_form_with(a, PivotRule::MinPosition)
}

pub fn smith_normal_form_with(a: &SparseMatrix, rule: PivotRule) -> SmithDecomposition {
    Workspace::new(a).run(rule)
}

impl SmithDecomposition {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[Scalar] {
        &self.diagonal
    }

    /// Valuations of the nonzero diagonal entries, nondecreasing.
    pub fn diagonal_valuations(&self) -> Vec<u32> {
        self.diagonal
            .iter()
            .map(|d| scalar::valuation(d, self.prime).expect("diagonal entries are nonzero") as u32)
            .collect()
    }

    pub fn left(&self) -> &SparseMatrix {
        &self.left
    }

    pub fn left_inv(&self) -> &SparseMatrix {
        &self.left_inv
    }

    pub fn right(&self) -> &SparseMatrix {
        &self.right
    }

    pub fn right_inv(&self) -> &SparseMatrix {
        &self.right_inv
    }

    /// Checks left * a * right == diag and that the stored inverses invert.
    pub fn verify(&self, a: &SparseMatrix) -> bool {
        let product = self.left.mul(a).mul(&self.right);
        let mut expected = SparseMatrix::zero(self.prime, self.rows, self.cols);
        for (i, d) in self.diagonal.iter().enumerate() {
            expected.set(i, i, d.clone());
        }
        product == expected
            && self.left.mul(&self.left_inv) == SparseMatrix::identity(self.prime, self.rows)
            && self.right.mul(&self.right_inv) == SparseMatrix::identity(self.prime, self.cols)
    }

    /// Basis of ker A: the trailing columns of the right transform.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        (self.rank()..self.cols).map(|j| self.right.column(j)).collect()
    }

    /// Basis of im A inside the target: columns d_i * left_inv[:, i].
    pub fn image_basis(&self) -> Vec<Vec<Scalar>> {
        (0..self.rank())
            .map(|i| {
                let mut col = self.left_inv.column(i);
                for x in &mut col {
                    *x *= &self.diagonal[i];
                }
                col
            })
            .collect()
    }

    /// Exact solution x of A x = v, if one exists over Z_(p).
    pub fn solve(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let w = self.left.apply(v);
        let mut y = vec![Scalar::zero(); self.cols];
        for (i, wi) in w.iter().enumerate() {
            if i < self.rank() {
                let q = wi / &self.diagonal[i];
                if !scalar::is_p_local(&q, self.prime) {
                    return None;
                }
                y[i] = q;
            } else if !wi.is_zero() {
                return None;
            }
        }
        Some(self.right.apply(&y))
    }

    /// Coordinates of v in the image basis, if v lies in im A.
    pub fn image_coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let w = self.left.apply(v);
        let mut y = vec![Scalar::zero(); self.rank()];
        for (i, wi) in w.iter().enumerate() {
            if i < self.rank() {
                let q = wi / &self.diagonal[i];
                if !scalar::is_p_local(&q, self.prime) {
                    return None;
                }
                y[i] = q;
            } else if !wi.is_zero() {
                return None;
            }
        }
        Some(y)
    }
}

/// Dense elimination state. W is kept equal to L * A * R throughout; Linv and
/// Rinv accumulate the inverse operations on the opposite side.
struct Workspace {
    prime: Prime,
    rows: usize,
    cols: usize,
    w: Vec<Vec<Scalar>>,
    l: Vec<Vec<Scalar>>,
    l_inv: Vec<Vec<Scalar>>,
    r: Vec<Vec<Scalar>>,
    r_inv: Vec<Vec<Scalar>>,
}

impl Workspace {
    fn new(a: &SparseMatrix) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        let ident = |n: usize| -> Vec<Vec<Scalar>> {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
                .collect()
        };
        Workspace {
            prime: a.prime(),
            rows,
            cols,
            w: a.to_dense(),
            l: ident(rows),
            l_inv: ident(rows),
            r: ident(cols),
            r_inv: ident(cols),
        }
    }

    fn run(mut self, rule: PivotRule) -> SmithDecomposition {
        let steps = self.rows.min(self.cols);
        let mut diagonal = Vec::new();
        for k in 0..steps {
            let Some((pi, pj)) = self.find_pivot(k, rule) else { break };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            let (unit, e) = scalar::unit_and_exponent(&self.w[k][k].clone(), self.prime);
            self.scale_row(k, &(Scalar::one() / unit));
            let pivot = self.w[k][k].clone();
            debug_assert_eq!(pivot, power_of_p(self.prime, e));
            for i in 0..self.rows {
                if i != k && !self.w[i][k].is_zero() {
                    let f = &self.w[i][k] / &pivot;
                    self.add_row(i, k, &-f);
                }
            }
            for j in 0..self.cols {
                if j != k && !self.w[k][j].is_zero() {
                    let f = &self.w[k][j] / &pivot;
                    self.add_col(j, k, &-f);
                }
            }
            diagonal.push(pivot);
        }
        debug_assert!(is_nondecreasing(&diagonal, self.prime));
        SmithDecomposition {
            prime: self.prime,
            rows: self.rows,
            cols: self.cols,
            diagonal,
            left: SparseMatrix::from_dense(self.prime, &self.l),
            left_inv: SparseMatrix::from_dense(self.prime, &self.l_inv),
            right: SparseMatrix::from_dense(self.prime, &self.r),
            right_inv: SparseMatrix::from_dense(self.prime, &self.r_inv),
        }
    }

    /// Entry of minimal valuation in the trailing submatrix, ties broken by
    /// position according to the rule.
    fn find_pivot(&self, k: usize, rule: PivotRule) -> Option<(usize, usize)> {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..self.rows {
            for j in k..self.cols {
                let Some(v) = scalar::valuation(&self.w[i][j], self.prime) else { continue };
                let better = match best {
                    None => true,
                    Some((bv, bi, bj)) => {
                        v < bv
                            || (v == bv
                                && match rule {
                                    PivotRule::MinPosition => (i, j) < (bi, bj),
                                    PivotRule::MaxPosition => (i, j) > (bi, bj),
                                })
                    }
                };
                if better {
                    best = Some((v, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.w.swap(a, b);
        self.l.swap(a, b);
        for row in &mut self.l_inv {
            row.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in &mut self.w {
            row.swap(a, b);
        }
        for row in &mut self.r {
            row.swap(a, b);
        }
        self.r_inv.swap(a, b);
    }

    /// row_k *= u; the inverse scales column k of Linv by 1/u.
    fn scale_row(&mut self, k: usize, u: &Scalar) {
        if u.is_one() {
            return;
        }
        for x in &mut self.w[k] {
            if !x.is_zero() {
                *x *= u;
            }
        }
        for x in &mut self.l[k] {
            if !x.is_zero() {
                *x *= u;
            }
        }
        let uinv = Scalar::one() / u;
        for row in &mut self.l_inv {
            if !row[k].is_zero() {
                row[k] *= &uinv;
            }
        }
    }

    /// row_i += f * row_k; the inverse adds -f times column i to column k of Linv,
    /// i.e. Linv col_k -= f * col_i is undone by col_k += f * col_i.
    fn add_row(&mut self, i: usize, k: usize, f: &Scalar) {
        for j in 0..self.cols {
            if !self.w[k][j].is_zero() {
                let t = f * &self.w[k][j];
                self.w[i][j] += t;
            }
        }
        for j in 0..self.rows {
            if !self.l[k][j].is_zero() {
                let t = f * &self.l[k][j];
                self.l[i][j] += t;
            }
        }
        for row in &mut self.l_inv {
            if !row[i].is_zero() {
                let t = -(f * &row[i]);
                row[k] += t;
            }
        }
    }

    /// col_j += f * col_k; the inverse adds -f times row j to row k of Rinv.
    fn add_col(&mut self, j: usize, k: usize, f: &Scalar) {
        for i in 0..self.rows {
            if !self.w[i][k].is_zero() {
                let t = f * &self.w[i][k];
                self.w[i][j] += t;
            }
        }
        for row in &mut self.r {
            if !row[k].is_zero() {
                let t = f * &row[k];
                row[j] += t;
            }
        }
        let (rj, rk) = (j, k);
        for c in 0..self.cols {
            if !self.r_inv[rj][c].is_zero() {
                let t = -(f * &self.r_inv[rj][c]);
                self.r_inv[rk][c] += t;
            }
        }
    }
}

fn power_of_p(p: Prime, e: u32) -> Scalar {
    BigRational::from_integer(BigInt::from(p.get()).pow(e))
}

fn is_nondecreasing(diag: &[Scalar], p: Prime) -> bool {
    diag.windows(2).all(|w| {
        scalar::valuation(&w[0], p).unwrap_or(i64::MAX) <= scalar::valuation(&w[1], p).unwrap_or(i64::MAX)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let a = SparseMatrix::identity(p3(), 2);
        let s = smith_normal_form(&a);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.diagonal_valuations(), vec![0, 0]);
        assert!(s.verify(&a));
    }

    #[test]
    fn one_by_one_times_p() {
        let a = SparseMatrix::from_int_rows(p3(), &[&[3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal_valuations(), vec![1]);
        assert_eq!(s.diagonal()[0], int(3));
        assert!(s.verify(&a));
    }

    #[test]
    fn mixed_valuations() {
        // det = 27, minimal entry valuation 1, so the diagonal must be (3, 9).
        let a = SparseMatrix::from_int_rows(p3(), &[&[3, 3], &[3, 12]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal_valuations(), vec![1, 2]);
        assert_eq!(s.diagonal(), &[int(3), int(9)]);
        assert!(s.verify(&a));
    }

    #[test]
    fn empty_shapes() {
        for (r, c) in [(0usize, 3usize), (3, 0), (0, 0)] {
            let a = SparseMatrix::zero(p3(), r, c);
            let s = smith_normal_form(&a);
            assert_eq!(s.rank(), 0);
            assert!(s.verify(&a));
            assert_eq!(s.kernel_basis().len(), c);
        }
    }

    #[test]
    fn kernel_of_row_vector() {
        // (3 3) has kernel spanned by a single primitive vector.
        let a = SparseMatrix::from_int_rows(p3(), &[&[3, 3]]);
        let s = smith_normal_form(&a);
        let basis = s.kernel_basis();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert!(a.apply(v).iter().all(num::Zero::is_zero));
        // Primitive: some coordinate is a unit.
        assert!(v.iter().any(|x| scalar::valuation(x, p3()) == Some(0)));
    }

    #[test]
    fn solves_exactly() {
        let a = SparseMatrix::from_int_rows(p3(), &[&[3, 0], &[0, 9]]);
        let s = smith_normal_form(&a);
        let x = s.solve(&[int(6), int(9)]).expect("solvable");
        assert_eq!(a.apply(&x), vec![int(6), int(9)]);
        // 1 is not divisible by 3 in Z_(3).
        assert!(s.solve(&[int(1), int(0)]).is_none());
    }

    #[test]
    fn pivot_rules_agree_on_invariants() {
        let a = SparseMatrix::from_int_rows(p3(), &[&[3, 3, 6], &[3, 12, 9], &[6, 6, 12]]);
        let s1 = smith_normal_form_with(&a, PivotRule::MinPosition);
        let s2 = smith_normal_form_with(&a, PivotRule::MaxPosition);
        assert!(s1.verify(&a));
        assert!(s2.verify(&a));
        assert_eq!(s1.diagonal_valuations(), s2.diagonal_valuations());
    }
}
