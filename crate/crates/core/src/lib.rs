//! Certified generation and verification for subshifts of finite type on
//! one- and two-dimensional lattices.

pub mod catalog;
pub mod classify;
pub mod fold;
pub mod formats;
pub mod generate;
pub mod lattice;
pub mod onedim;
pub mod recode;
pub mod search;
pub mod verify;

pub use lattice::{
    locally_admissible, lower_wang, pattern_union, shift_pattern, Alphabet, CubeKind, LatticeError, Pattern, Point,
    Region, SftSpec, Symbol, WangTile,
};
