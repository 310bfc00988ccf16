//! Subquotients ker(B) / im(A) with exact class coordinates.
//!
//! B is the outgoing map of a middle space, A the incoming one, with B*A = 0.
//! The quotient is computed by expressing the columns of A in a kernel basis
//! of B and reading invariant factors off a second Smith normal form. The
//! stored transforms let any cycle be mapped to canonical coordinates in the
//! quotient, and each invariant factor be lifted to a representative cycle.

use crate::linalg::{smith_normal_form_with, FinitePGroup, PivotRule, SmithDecomposition, SparseMatrix};
use crate::scalar::{self, Scalar};
use crate::{Error, Prime, Result};
use num::{BigInt, Zero};

/// Canonical coordinates of a cycle's class in a subquotient.
///
/// Torsion coordinates are residues in [0, p^e) aligned with the group's
/// ascending invariant factors; free coordinates are exact scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub torsion: Vec<BigInt>,
    pub free: Vec<Scalar>,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(Zero::is_zero) && self.free.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone)]
pub struct Subquotient {
    prime: Prime,
    ambient: usize,
    group: FinitePGroup,
    /// Rank of B; leading coordinates in the right_inv basis that must vanish
    /// on cycles.
    b_rank: usize,
    /// Inverse right transform of B: maps a cycle to kernel coordinates.
    b_right_inv: SparseMatrix,
    /// Kernel basis of B as columns (ambient x s).
    kernel: SparseMatrix,
    /// Smith data of the incoming map expressed in kernel coordinates.
    x: SmithDecomposition,
    /// Diagonal indices of x carrying each torsion factor, ascending exponent.
    torsion_slots: Vec<(usize, u32)>,
}

/// Structure of ker(B) / im(A), with coordinate data.
///
/// Errors when B * A != 0.
pub fn subquotient_structure(b: &SparseMatrix, a: &SparseMatrix) -> Result<Subquotient> {
    subquotient_structure_with(b, a, PivotRule::MinPosition)
}

pub fn subquotient_structure_with(
    b: &SparseMatrix,
    a: &SparseMatrix,
    rule: PivotRule,
) -> Result<Subquotient> {
    assert_eq!(b.prime(), a.prime(), "prime mismatch");
    assert_eq!(b.cols(), a.rows(), "middle dimension mismatch");
    if !b.mul(a).is_zero() {
        return Err(Error::NotComposable);
    }
    let prime = b.prime();
    let ambient = b.cols();
    let sb = smith_normal_form_with(b, rule);
    let b_rank = sb.rank();
    let s = ambient - b_rank;
    let kernel = SparseMatrix::from_columns(prime, ambient, &sb.kernel_basis());
    let b_right_inv = sb.right_inv().clone();

    // Kernel coordinates of each incoming column: the tail of right_inv * col.
    let mut x_cols = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let w = b_right_inv.apply(&a.column(j));
        x_cols.push(w[b_rank..].to_vec());
    }
    let x_mat = SparseMatrix::from_columns(prime, s, &x_cols);
    let x = smith_normal_form_with(&x_mat, rule);

    let mut torsion_slots = Vec::new();
    for (i, e) in x.diagonal_valuations().into_iter().enumerate() {
        if e > 0 {
            torsion_slots.push((i, e));
        }
    }
    let exponents: Vec<u32> = torsion_slots.iter().map(|&(_, e)| e).collect();
    let group = FinitePGroup::new(exponents, s - x.rank());

    Ok(Subquotient { prime, ambient, group, b_rank, b_right_inv, kernel, x, torsion_slots })
}

impl Subquotient {
    pub fn group(&self) -> &FinitePGroup {
        &self.group
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Kernel coordinates of a cycle; errors when the vector is not a cycle.
    fn kernel_coordinates(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        assert_eq!(z.len(), self.ambient, "dimension mismatch");
        let w = self.b_right_inv.apply(z);
        if w[..self.b_rank].iter().any(|x| !x.is_zero()) {
            return Err(Error::NotACycle { degree: 0 });
        }
        Ok(w[self.b_rank..].to_vec())
    }

    /// Canonical class coordinates of a cycle.
    pub fn coordinates(&self, z: &[Scalar]) -> Result<ClassCoordinates> {
        let y = self.kernel_coordinates(z)?;
        let t = self.x.left().apply(&y);
        let torsion = self
            .torsion_slots
            .iter()
            .map(|&(i, e)| scalar::residue(&t[i], self.prime, e))
            .collect();
        let free = t[self.x.rank()..].to_vec();
        Ok(ClassCoordinates { torsion, free })
    }

    pub fn is_zero_class(&self, z: &[Scalar]) -> Result<bool> {
        Ok(self.coordinates(z)?.is_zero())
    }

    /// Representative cycle of the i-th torsion factor (ascending exponents).
    pub fn torsion_representative(&self, i: usize) -> Vec<Scalar> {
        let (slot, _) = self.torsion_slots[i];
        let y = self.x.left_inv().column(slot);
        self.kernel.apply(&y)
    }

    /// Representative cycle of the i-th free factor.
    pub fn free_representative(&self, i: usize) -> Vec<Scalar> {
        let y = self.x.left_inv().column(self.x.rank() + i);
        self.kernel.apply(&y)
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
    fn quotient_by_multiplication() {
        // ker(0: Z -> Z) / im(3: Z -> Z) = Z/3.
        let b = SparseMatrix::zero(p3(), 1, 1);
        let a = SparseMatrix::from_int_rows(p3(), &[&[3]]);
        let sq = subquotient_structure(&b, &a).unwrap();
        assert_eq!(sq.group(), &FinitePGroup::new(vec![1], 0));
        assert!(!sq.is_zero_class(&[int(1)]).unwrap());
        assert!(sq.is_zero_class(&[int(3)]).unwrap());
        let rep = sq.torsion_representative(0);
        assert!(!sq.is_zero_class(&rep).unwrap());
    }

    #[test]
    fn zero_maps_leave_free_module() {
        let b = SparseMatrix::zero(p3(), 1, 2);
        let a = SparseMatrix::zero(p3(), 2, 1);
        let sq = subquotient_structure(&b, &a).unwrap();
        assert_eq!(sq.group(), &FinitePGroup::new(vec![], 2));
    }

    #[test]
    fn composability_checked() {
        let b = SparseMatrix::from_int_rows(p3(), &[&[1]]);
        let a = SparseMatrix::from_int_rows(p3(), &[&[1]]);
        assert!(matches!(subquotient_structure(&b, &a), Err(Error::NotComposable)));
    }

    #[test]
    fn representative_coordinates_are_unit_vectors() {
        // H = ker(3x + 3y... ) realistic small case: B = [3 3], A = 0.
        // ker B is one-dimensional, quotient is free of rank 1.
        let b = SparseMatrix::from_int_rows(p3(), &[&[3, 3]]);
        let a = SparseMatrix::zero(p3(), 2, 0);
        let sq = subquotient_structure(&b, &a).unwrap();
        assert_eq!(sq.group(), &FinitePGroup::new(vec![], 1));
        let rep = sq.free_representative(0);
        let coords = sq.coordinates(&rep).unwrap();
        assert_eq!(coords.free.len(), 1);
        assert_eq!(coords.free[0], int(1));
        // Non-cycles are rejected.
        assert!(sq.coordinates(&[int(1), int(0)]).is_err());
    }
}
