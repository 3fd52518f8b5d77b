//! Exact multivariate polynomial algebra: homogeneous, harmonic and
//! polyharmonic spaces, the Laplacian, Almansi decompositions and bases.

mod almansi;
mod basis;
mod coeff;
mod dims;
pub(crate) mod linalg;
mod poly;
mod text;

pub use almansi::{harmonic_almansi, polyharmonic_almansi, polyharmonic_split, AlmansiDecomposition};
pub use basis::{
    harmonic_basis, orthonormal_harmonic_basis, orthonormal_polyharmonic_basis, polyharmonic_basis,
};
pub use coeff::{gaussian, rational, Coefficient, ExactCoeff};
pub use dims::{binomial, dim_h, dim_hp, dim_p, polyharmonic_nullity};
pub use poly::{monomials_of_degree, ExactPoly, Exponents, MultiPoly, NumericPoly};
pub use text::{parse_exact, parse_numeric};
