//! Decorated equational specifications and their parameterization.
//!
//! A decorated specification is a multi-sorted signature with equations in
//! which some operations are marked *pure*. This crate implements the
//! parameterization pass that threads a fresh parameter sort through every
//! non-pure operation, the pushout that adjoins a parameter constant, the
//! coKleisli presentation and its adjunction transpositions, the parameter
//! passing morphism, and a finite-model semantics that machine-checks the
//! model-level bijections these constructions induce.
//!
//! The crate is organized as:
//!
//! - [`core`]: sorts, operations, typed terms, equations, specifications,
//!   morphisms and 2-cells, with type-checking and substitution.
//! - [`dsl`]: the textual front-end (`.eqth`, `.model`, `.mor` files) with a
//!   canonical, bit-stable printer.
//! - [`construct`]: the transformation passes on presentations.
//! - [`semantics`]: finite models, exhaustive enumeration, terminal
//!   extensions, and the bijection verifiers.
//! - [`cli`]: the batch command-line surface.

pub mod cli;
#[cfg(test)]
pub(crate) mod testfix;
pub mod construct;
pub mod core;
pub mod dsl;
pub mod semantics;
