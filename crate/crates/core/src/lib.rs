//! Exact-arithmetic engine for chain-level Brown-Peterson homology of
//! elementary abelian p-groups.
//!
//! Everything is computed degreewise below a fixed even degree bound, over the
//! local ring Z_(p) with exact rational arithmetic. The main pipelines are:
//!
//! * [`coeff`] builds the p-series of the universal p-typical formal group law
//!   in Hazewinkel generators, truncated by degree.
//! * [`chain`] assembles the n-fold tensor power of the small BP chain model of
//!   the classifying space of Z/p and computes its homology.
//! * [`tables`] presents the reduced BP homology N of BZ/p, its tensor powers,
//!   the free summand modules L_k, and Tor groups, all degreewise.
//! * [`verify`] cross-checks the chain pipeline against the presentation
//!   pipeline: direct-sum decompositions, level decompositions, Tor
//!   identifications, reduction kernels, and torsion probes.
//! * [`cohomology`] carries the mod-p cohomology side: cup products, pullbacks
//!   along products of diagonal-like maps, Vandermonde surjectivity, products
//!   of degree-one classes, and the p = 2 counterexample computation.
//!
//! All comparisons are oracle-vs-oracle: the two sides of every verdict are
//! produced by independent code paths.

pub mod chain;
pub mod coeff;
pub mod cohomology;
pub mod error;
pub mod linalg;
pub mod prime;
pub mod report;
pub mod scalar;
pub mod tables;
pub mod verify;

pub use error::Error;
pub use prime::Prime;
pub use scalar::Scalar;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
