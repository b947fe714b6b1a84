//! 2x2 matrices over `F_q`, scalar polynomials, and matrix-coefficient
//! polynomials with right evaluation.

mod matpoly;
mod matrix;
mod poly;

pub use matpoly::{embed_fpoly, MatPoly};
pub use matrix::{enumerate_gl2, Mat2, ENUMERATION_LIMIT};
pub use poly::{classify_quadratic, fpoly_gcd, fpoly_lcm, min_poly, monic_polys_by_kind, FPoly, PolyKind};
