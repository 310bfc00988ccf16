//! Modules presented degreewise as cokernels, and kernels of maps between
//! them.
//!
//! A presented module is Z_(p)^rank / im(relations). A map between presented
//! modules is given by a lift on generators that carries source relations into
//! the target relation span. Its kernel is the preimage of the target
//! relations, computed from one combined kernel basis, modulo the source
//! relations.

use crate::linalg::{
    kernel_basis, spanned_subquotient_with, FinitePGroup, PivotRule, SparseMatrix,
};
use crate::scalar::Scalar;
use crate::{Prime, Result};

/// Z_(p)^rank modulo the column span of `relations`.
#[derive(Debug, Clone)]
pub struct PresentedModule {
    prime: Prime,
    rank: usize,
    relations: SparseMatrix,
}

impl PresentedModule {
    pub fn new(prime: Prime, rank: usize, relations: SparseMatrix) -> Self {
        assert_eq!(relations.rows(), rank, "relation rows must match generator count");
        assert_eq!(relations.prime(), prime, "prime mismatch");
        PresentedModule { prime, rank, relations }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &SparseMatrix {
        &self.relations
    }

    pub fn relation_columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.relations.cols()).map(|j| self.relations.column(j)).collect()
    }

    pub fn structure(&self) -> FinitePGroup {
        self.structure_with(PivotRule::MinPosition)
    }

    pub fn structure_with(&self, rule: PivotRule) -> FinitePGroup {
        crate::linalg::cokernel_structure_with(&self.relations, rule)
    }

    /// Whether a generator-coordinate vector represents zero in the quotient.
    pub fn is_zero_element(&self, v: &[Scalar]) -> bool {
        crate::linalg::image_membership(&self.relations, v).is_some()
    }
}

/// Spanning vectors (in source generator coordinates) of the kernel of the
/// induced map source -> target, including the source relations.
///
/// `lift` maps source generators to target generator coordinates and must
/// carry every source relation into the target relation span; that holds by
/// construction for all callers here and is not rechecked.
pub fn map_kernel_generators(
    lift: &SparseMatrix,
    source: &PresentedModule,
    target: &PresentedModule,
) -> Vec<Vec<Scalar>> {
    assert_eq!(lift.rows(), target.rank(), "lift target mismatch");
    assert_eq!(lift.cols(), source.rank(), "lift source mismatch");
    let combined = lift.hstack(target.relations());
    let mut gens: Vec<Vec<Scalar>> =
        kernel_basis(&combined).into_iter().map(|v| v[..source.rank()].to_vec()).collect();
    gens.extend(source.relation_columns());
    gens
}

/// Isomorphism type of the kernel of the induced map source -> target.
pub fn map_kernel_structure(
    lift: &SparseMatrix,
    source: &PresentedModule,
    target: &PresentedModule,
) -> Result<FinitePGroup> {
    map_kernel_structure_with(lift, source, target, PivotRule::MinPosition)
}

pub fn map_kernel_structure_with(
    lift: &SparseMatrix,
    source: &PresentedModule,
    target: &PresentedModule,
    rule: PivotRule,
) -> Result<FinitePGroup> {
    let gens = map_kernel_generators(lift, source, target);
    spanned_subquotient_with(source.prime(), source.rank(), &gens, &source.relation_columns(), rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn cyclic(e: u32) -> PresentedModule {
        let rel = SparseMatrix::from_int_rows(p3(), &[&[3i64.pow(e)]]);
        PresentedModule::new(p3(), 1, rel)
    }

    #[test]
    fn structures() {
        assert_eq!(cyclic(1).structure(), FinitePGroup::new(vec![1], 0));
        assert_eq!(cyclic(2).structure(), FinitePGroup::new(vec![2], 0));
    }

    #[test]
    fn zero_elements() {
        let m = cyclic(1);
        assert!(m.is_zero_element(&[int(3)]));
        assert!(!m.is_zero_element(&[int(1)]));
    }

    #[test]
    fn kernel_of_multiplication_by_p() {
        // x3: Z/9 -> Z/9 has kernel Z/3.
        let m = cyclic(2);
        let lift = SparseMatrix::from_int_rows(p3(), &[&[3]]);
        let k = map_kernel_structure(&lift, &m, &m).unwrap();
        assert_eq!(k, FinitePGroup::new(vec![1], 0));
    }

    #[test]
    fn kernel_of_isomorphism_is_trivial() {
        let m = cyclic(2);
        let lift = SparseMatrix::from_int_rows(p3(), &[&[1]]);
        let k = map_kernel_structure(&lift, &m, &m).unwrap();
        assert!(k.is_trivial());
    }

    #[test]
    fn kernel_into_smaller_cyclic() {
        // Reduction Z/9 -> Z/3 has kernel Z/3 (generated by 3).
        let source = cyclic(2);
        let target = cyclic(1);
        let lift = SparseMatrix::from_int_rows(p3(), &[&[1]]);
        let k = map_kernel_structure(&lift, &source, &target).unwrap();
        assert_eq!(k, FinitePGroup::new(vec![1], 0));
    }
}
