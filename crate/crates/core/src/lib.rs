//! Exact commutative algebra for Ratliff-Rush filtrations, tangent cones,
//! blowup algebras and graded homological invariants of local rings
//! presented as quotients of polynomial rings.

pub mod artinian;
pub mod blowup;
pub mod config;
pub mod criteria;
pub mod error;
pub mod field;
pub mod groebner;
pub mod homology;
pub mod ideal;
pub mod linalg;
pub mod local;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod rr;

pub use error::{Error, Result};
pub use field::{Coeff, Field, Rational};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{Polynomial, Ring};
