//! Exact linear algebra over the local ring Z_(p).
//!
//! Sparse matrices with rational entries whose denominators are coprime to p,
//! Smith normal form with unit-determinant transforms on both sides, and the
//! structure extractors built on it: cokernels as finite p-groups, kernel
//! bases, exact image membership, and subquotients with class coordinates.

mod matrix;
mod presented;
mod smith;
mod structure;
mod subquotient;

pub use matrix::SparseMatrix;
pub use presented::{
    map_kernel_generators, map_kernel_structure, map_kernel_structure_with, PresentedModule,
};
pub use smith::{smith_normal_form, smith_normal_form_with, PivotRule, SmithDecomposition};
pub use structure::{
    cokernel_structure, cokernel_structure_with, image_membership, kernel_basis, spanned_subquotient,
    spanned_subquotient_with, FinitePGroup,
};
pub use subquotient::{subquotient_structure, subquotient_structure_with, ClassCoordinates, Subquotient};
