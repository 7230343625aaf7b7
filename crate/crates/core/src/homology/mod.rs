//! Graded free resolutions, Betti tables, Ext strands, a-invariants and
//! grade computations.

pub mod ext;
pub mod koszul;
pub mod resolution;

pub use ext::{
    a_invariants, annihilator, ext_graded_piece, module_dimension, reg_from_a_invariants,
};
pub use koszul::{is_regular, koszul_grade, CyclicModule};
pub use resolution::{
    depth_and_reg, graded_resolution, BettiTable, GradedPresentation, Resolution,
};
