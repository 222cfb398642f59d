//! The syntactic universe: sorts, decorated operations, typed terms,
//! equations, specifications, morphisms and 2-cells.
//!
//! Everything here is immutable after construction and compared
//! syntactically. Equality of terms modulo equations is not decided at this
//! level; it is delegated to the finite-model semantics.

mod morphism;
mod spec;
mod term;

pub use morphism::{compose_morphisms, CellComponent, NatTransPresentation, TheoryMorphism};
pub use spec::{
    Context, DecoratedSpec, Equation, OpDecl, ProductType, SortName, ValidationIssue,
    ValidationReport,
};
pub use term::{
    is_pure_term, substitute, substitute_checked, typecheck_term, CoreError, Term,
};

/// Names that user specifications may not declare as sorts.
pub const RESERVED_SORT_NAMES: &[&str] = &["Unit", "p$"];

/// The reserved parameter variable threaded through translated equations.
pub const PARAM_VAR: &str = "p$";
