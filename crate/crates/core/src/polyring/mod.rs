//! Homogeneous polynomials, Gröbner bases and graded quotient rings.
//!
//! The monomial order is graded reverse lexicographic with the declared
//! variable order (`x > y > z > ...`).

mod groebner;
mod monomial;
mod parse;
mod poly;
mod ring;

pub use groebner::{buchberger, normal_form, GroebnerBasis};
pub use monomial::{homog_basis, monomials_up_to, Monomial};
pub use parse::parse_poly_with;
pub use poly::HomogPoly;
pub use ring::{default_var_names, parse_poly, quotient_piece_dim, GradedPiece, RingSpec};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;
