//! Exact algebra: integer polynomials, real algebraic numbers, `Q(beta)`.

pub mod field;
pub mod interval;
pub mod poly;
pub mod real;

pub use field::{BetaElement, BetaField};
pub use poly::{IntPoly, RatPoly};
pub use real::{isolate_real_roots, parse_rational, AlgebraicReal};
