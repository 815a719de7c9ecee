//! Exact matrix powers two ways: repeated squaring, and closed forms driven by
//! the characteristic polynomial (Cayley-Hamilton), with the coefficient
//! sequences that feed them.

mod cayley;
mod charpoly;
mod matrix;
mod sequence;

pub use cayley::{power_via_cayley, power_via_cayley_general, CayleyCoefficients};
pub use charpoly::{adjugate_3, char_poly, char_poly_3, CharPoly3, CharPolyK};
pub use matrix::{mat_pow, SquareMatrix};
pub use sequence::{a_seq_closed_form, general_a_n, CoefficientSequence};
