//! Generating functions, characteristic polynomials and conjugate sets.

pub mod conjugates;
pub mod phi;
pub mod roots;

pub use conjugates::{conjugates, strip_spurious};
pub use phi::{
    char_poly, char_poly_of, eisenstein_any, eisenstein_certificate, eval_in_field, lemma2_check,
    phi_from_orbit, vanishes_at_beta, CharPoly, Minimality, PhiSeries, Provenance,
};
pub use roots::{all_roots, all_roots_partial, residual_bound, Cdd, ConjugateSet, Root};
