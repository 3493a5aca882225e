//! Verification workbench for the equational theory of Dedekind σ-complete
//! lattice-ordered groups and Riesz spaces.
//!
//! * [`term`]: the term language, parser and printer.
//! * [`semantics`]: exact evaluation in ℝ, including countable suprema.
//! * [`models`]: finite quotient-of-power models `ℝ^X/𝓘` and the weak-unit
//!   normalization pipeline.
//! * [`logic`]: axiom suites, equation and quasi-equation checking, and the
//!   quasi-equation compiler.

pub mod logic;
pub mod models;
pub mod rational;
pub mod sample;
pub mod semantics;
pub mod term;
