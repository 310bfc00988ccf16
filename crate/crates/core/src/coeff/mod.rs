//! The coefficient ring BP_* = Z_(p)[v_1, v_2, ...] truncated by degree, and
//! the p-series of the universal p-typical formal group law.
//!
//! Generator v_m sits in degree 2p^m - 2; only generators fitting under the
//! degree bound are stored. The p-series is computed from the Hazewinkel
//! logarithm by compositional inversion, with an exact integrality check on
//! every coefficient.

mod poly;
mod pseries;
mod series;
mod table;

pub use poly::GradedPolynomial;
pub use pseries::{
    compute_logarithm, compute_p_series, CoefficientScheme, PSeriesTable, SeriesPropertyReport,
};
pub use series::HomogeneousSeries;
pub use table::{monomial_basis, GeneratorTable, Monomial};
