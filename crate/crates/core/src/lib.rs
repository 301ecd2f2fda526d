//! Exact computations in algebraic supergeometry over Q: Z²-valued lengths and
//! orders, supermatrices and berezinians, supercycles, de Rham and Hodge
//! data of supercurves, stability of dual graphs, and Nori diagrams.

#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod artin;
pub mod cohomology;
pub mod curve;
pub mod cycles;
pub mod graded_linalg;
pub mod linalg;
pub mod moduli;
pub mod nori;
pub mod par;
pub mod poly;
pub mod rational;
pub mod z2;
