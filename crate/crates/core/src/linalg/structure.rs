//! Isomorphism types of finitely generated Z_(p)-modules and the maps that
//! produce them.

use crate::linalg::{smith_normal_form_with, PivotRule, SparseMatrix};
use crate::scalar::Scalar;
use crate::{Error, Prime, Result};
use serde::{Deserialize, Serialize};

/// Isomorphism type of a finitely generated module over Z_(p):
/// a direct sum of Z/p^e factors and a free part.
///
/// Exponents are sorted ascending and strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct FinitePGroup {
    exponents: Vec<u32>,
    free_rank: usize,
}

impl FinitePGroup {
    pub fn trivial() -> Self {
        FinitePGroup::default()
    }

    pub fn new(mut exponents: Vec<u32>, free_rank: usize) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable();
        FinitePGroup { exponents, free_rank }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty() && self.free_rank == 0
    }

    /// log_p of the torsion subgroup order.
    pub fn torsion_length(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    pub fn direct_sum(&self, other: &FinitePGroup) -> FinitePGroup {
        let mut exponents = self.exponents.clone();
        exponents.extend_from_slice(&other.exponents);
        FinitePGroup::new(exponents, self.free_rank + other.free_rank)
    }

    /// Human-readable description for a concrete prime, e.g. "Z/3 + Z/9".
    pub fn describe(&self, p: Prime) -> String {
        if self.is_trivial() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| format!("Z/{}", (p.get() as u128).pow(e)))
            .collect();
        if self.free_rank > 0 {
            parts.push(format!("Z({})^{}", p.get(), self.free_rank));
        }
        parts.join(" + ")
    }
}

/// Structure of coker(A) = Z_(p)^rows / im(A).
pub fn cokernel_structure(a: &SparseMatrix) -> FinitePGroup {
    cokernel_structure_with(a, PivotRule::MinPosition)
}

pub fn cokernel_structure_with(a: &SparseMatrix, rule: PivotRule) -> FinitePGroup {
    let s = smith_normal_form_with(a, rule);
    FinitePGroup::new(s.diagonal_valuations(), a.rows() - s.rank())
}

/// Basis of ker(A), free over Z_(p).
pub fn kernel_basis(a: &SparseMatrix) -> Vec<Vec<Scalar>> {
    smith_normal_form_with(a, PivotRule::MinPosition).kernel_basis()
}

/// Exact solution of A x = v over Z_(p), when v lies in the image.
pub fn image_membership(a: &SparseMatrix, v: &[Scalar]) -> Option<Vec<Scalar>> {
    smith_normal_form_with(a, PivotRule::MinPosition).solve(v)
}

/// Structure of span(gens) / span(rels) inside an ambient free module.
///
/// Requires span(rels) to be contained in span(gens); violating that is a
/// caller bug and reported as an error.
pub fn spanned_subquotient(
    prime: Prime,
    ambient: usize,
    gens: &[Vec<Scalar>],
    rels: &[Vec<Scalar>],
) -> Result<FinitePGroup> {
    spanned_subquotient_with(prime, ambient, gens, rels, PivotRule::MinPosition)
}

pub fn spanned_subquotient_with(
    prime: Prime,
    ambient: usize,
    gens: &[Vec<Scalar>],
    rels: &[Vec<Scalar>],
    rule: PivotRule,
) -> Result<FinitePGroup> {
    let g = SparseMatrix::from_columns(prime, ambient, gens);
    let s = smith_normal_form_with(&g, rule);
    // Coordinates of each relation in the image basis of the generator span.
    let mut coords = Vec::with_capacity(rels.len());
    for r in rels {
        let y = s.image_coordinates(r).ok_or(Error::SpanViolation)?;
        coords.push(y);
    }
    let y = SparseMatrix::from_columns(prime, s.rank(), &coords);
    Ok(cokernel_structure_with(&y, rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn group_normal_form() {
        let g = FinitePGroup::new(vec![2, 0, 1], 0);
        assert_eq!(g.exponents(), &[1, 2]);
        assert_eq!(g.describe(p3()), "Z/3 + Z/9");
        assert_eq!(g.torsion_length(), 3);
    }

    #[test]
    fn cokernel_of_p() {
        let a = SparseMatrix::from_int_rows(p3(), &[&[3]]);
        assert_eq!(cokernel_structure(&a), FinitePGroup::new(vec![1], 0));
    }

    #[test]
    fn cokernel_of_empty_is_free() {
        let a = SparseMatrix::zero(p3(), 2, 0);
        assert_eq!(cokernel_structure(&a), FinitePGroup::new(vec![], 2));
    }

    #[test]
    fn cokernel_of_diagonal() {
        let a = SparseMatrix::from_int_rows(p3(), &[&[1, 0, 0], &[0, 3, 0], &[0, 0, 9]]);
        assert_eq!(cokernel_structure(&a), FinitePGroup::new(vec![1, 2], 0));
    }

    #[test]
    fn membership_examples() {
        let a = SparseMatrix::from_int_rows(p3(), &[&[3]]);
        assert_eq!(image_membership(&a, &[int(6)]), Some(vec![int(2)]));
        assert!(image_membership(&a, &[int(1)]).is_none());
    }

    #[test]
    fn spanned_subquotient_examples() {
        // <e1> / <3 e1> = Z/3 inside Z^2.
        let gens = vec![vec![int(1), int(0)]];
        let rels = vec![vec![int(3), int(0)]];
        let g = spanned_subquotient(p3(), 2, &gens, &rels).unwrap();
        assert_eq!(g, FinitePGroup::new(vec![1], 0));
        // A relation outside the span is a caller bug.
        let bad = vec![vec![int(0), int(1)]];
        assert!(spanned_subquotient(p3(), 2, &gens, &bad).is_err());
    }
}
