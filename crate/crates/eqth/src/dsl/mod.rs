//! Textual front-end for specifications (`.eqth`), finite models
//! (`.model`) and morphisms (`.mor`).
//!
//! The printer emits one canonical form: items in declaration order, one
//! item per line, two-space indentation, single spaces between tokens, LF
//! line endings. Parsing the printed form reproduces the value exactly, and
//! printing is bit-stable across runs.
//!
//! Concrete syntax, by example:
//!
//! ```text
//! spec Dm {
//!   sort G
//!   pure op prd : G, G -> G
//!   pure op unt : -> G
//!   op dif : G -> G
//!   eq (x:G) dif(dif(x)) = unt()
//! }
//! ```
//!
//! A bare identifier in a term is always a variable; constants are applied
//! with empty parentheses (`unt()`). `param sort` and `param const` declare
//! the distinguished parameter sort and constant. Models list carriers and
//! tables (`model M for Dm partial { sort G = { e, g } op prd = { (e, e) ->
//! e, ... } }`); morphisms list sort images and op images (`sort A -> ()`,
//! `op f(x1) -> prd(x1, x1)`).

mod lexer;
mod parser;
mod printer;

pub use parser::{parse_model, parse_morphism, parse_spec};
pub use printer::{print_model, print_morphism, print_spec};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::core::ValidationReport;

/// What a source file contains, keyed by its extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    /// `.eqth` specification files.
    Spec,
    /// `.model` finite model files.
    Model,
    /// `.mor` morphism files.
    Morphism,
}

/// A loaded UTF-8 source file; all diagnostics against it carry
/// line:column positions.
#[derive(Clone, Debug)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
    pub kind: SourceKind,
}

impl SourceFile {
    pub fn load(path: impl AsRef<Path>) -> std::io::Result<SourceFile> {
        let path = path.as_ref().to_path_buf();
        let kind = match path.extension().and_then(|e| e.to_str()) {
            Some("model") => SourceKind::Model,
            Some("mor") => SourceKind::Morphism,
            _ => SourceKind::Spec,
        };
        let text = std::fs::read_to_string(&path)?;
        Ok(SourceFile { path, text, kind })
    }
}

#[derive(Debug, Error)]
pub enum DslError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown element `{element}` of sort `{sort}`")]
    UnknownElement {
        line: usize,
        col: usize,
        sort: String,
        element: String,
    },
    #[error("{line}:{col}: table for `{op}` is missing an entry at ({at})")]
    MissingTableEntry {
        line: usize,
        col: usize,
        op: String,
        at: String,
    },
    #[error("{line}:{col}: duplicate table entry for `{op}` at ({at})")]
    DuplicateTableEntry {
        line: usize,
        col: usize,
        op: String,
        at: String,
    },
    #[error("invalid specification:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Core(#[from] crate::core::CoreError),
    #[error(transparent)]
    Semantics(#[from] crate::semantics::SemanticsError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{add_parameter, parameterize, passing_morphism};
    use crate::core::{SortName, Term};
    use crate::testfix::{dm, mon, nat, oper, sgp, st_base, z2_base};

    const SGP_TEXT: &str = "spec Sgp {\n  sort G\n  op prd : G, G -> G\n  eq (x:G, y:G, z:G) prd(x, prd(y, z)) = prd(prd(x, y), z)\n}\n";

    #[test]
    fn parse_oper() {
        let spec = parse_spec("spec Oper { sort X sort Y op f : X -> Y }").unwrap();
        assert_eq!(spec, oper());
    }

    #[test]
    fn parse_nat() {
        let spec =
            parse_spec("spec Nat { sort N pure op z : -> N op s : N -> N }").unwrap();
        assert_eq!(spec, nat());
    }

    #[test]
    fn parse_rejects_unknown_sort() {
        match parse_spec("spec Bad { op f : X -> Y }") {
            Err(DslError::Invalid(report)) => {
                assert!(report.issues.iter().any(|i| matches!(
                    i,
                    crate::core::ValidationIssue::UnknownSort { .. }
                )));
            }
            other => panic!("expected a validation failure, got {:?}", other),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_spec("spec Bad {\n  sort\n}") {
            Err(DslError::Syntax { line, col, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(col, 1);
            }
            other => panic!("expected a syntax error, got {:?}", other),
        }
    }

    #[test]
    fn print_sgp_matches_canonical_text() {
        assert_eq!(print_spec(&sgp()), SGP_TEXT);
    }

    #[test]
    fn spec_round_trips() {
        for spec in [oper(), sgp(), nat(), mon(), dm()] {
            assert_eq!(parse_spec(&print_spec(&spec)).unwrap(), spec);
        }
        // parameterized specs and specs with a constant round trip too
        let pr = parameterize(&dm()).unwrap();
        assert_eq!(parse_spec(&print_spec(&pr.param_spec)).unwrap(), pr.param_spec);
        let sa = add_parameter(&pr.param_spec).unwrap();
        assert_eq!(parse_spec(&print_spec(&sa)).unwrap(), sa);
    }

    #[test]
    fn printing_is_idempotent_on_parsed_text() {
        let text = print_spec(&parse_spec(SGP_TEXT).unwrap());
        assert_eq!(print_spec(&parse_spec(&text).unwrap()), text);
    }

    #[test]
    fn spec_without_equations_prints_no_eq_lines() {
        let text = print_spec(&oper());
        assert!(!text.contains("eq "));
    }

    #[test]
    fn parse_partial_model() {
        let text = "model M0 for Oper partial {\n  sort X = { x0, x1 }\n  sort Y = { y0, y1 }\n}\n";
        let m = parse_model(text, &oper()).unwrap();
        assert!(m.partial);
        assert!(m.tables.is_empty());
        assert_eq!(m.carriers[&SortName::from("X")], vec!["x0", "x1"]);
    }

    #[test]
    fn parse_total_monoid_model() {
        let text = "model Z2 for Mon {\n  sort G = { e, g }\n  op prd = { (e, e) -> e, (e, g) -> g, (g, e) -> g, (g, g) -> e }\n  op unt = { () -> e }\n}\n";
        let m = parse_model(text, &mon()).unwrap();
        assert!(m.same_interpretation(&z2_base()));
        assert!(crate::semantics::check_model(&m).unwrap().is_satisfied());
    }

    #[test]
    fn missing_table_entry_is_reported() {
        let text = "model M for Dm partial {\n  sort G = { e, g }\n  op prd = { (e, e) -> e, (e, g) -> g, (g, e) -> g }\n}\n";
        match parse_model(text, &dm()) {
            Err(DslError::MissingTableEntry { op, at, .. }) => {
                assert_eq!(op, "prd");
                assert_eq!(at, "g, g");
            }
            other => panic!("expected a missing entry, got {:?}", other),
        }
    }

    #[test]
    fn duplicate_and_unknown_entries_are_reported() {
        let dup = "model M for Oper partial {\n  sort X = { x0 }\n  sort Y = { y0 }\n  op f = { (x0) -> y0, (x0) -> y0 }\n}\n";
        assert!(matches!(
            parse_model(dup, &oper()),
            Err(DslError::DuplicateTableEntry { .. })
        ));
        let unk = "model M for Oper partial {\n  sort X = { x0 }\n  sort Y = { y0 }\n  op f = { (x9) -> y0 }\n}\n";
        assert!(matches!(
            parse_model(unk, &oper()),
            Err(DslError::UnknownElement { .. })
        ));
    }

    #[test]
    fn total_model_requires_all_tables() {
        let text = "model M for Oper {\n  sort X = { x0 }\n  sort Y = { y0 }\n}\n";
        assert!(matches!(parse_model(text, &oper()), Err(DslError::Syntax { .. })));
    }

    #[test]
    fn model_round_trips() {
        for m in [z2_base(), st_base()] {
            let text = print_model(&m);
            let parsed = parse_model(&text, &m.spec).unwrap();
            assert_eq!(parsed, m);
            assert_eq!(print_model(&parsed), text);
        }
    }

    #[test]
    fn parse_morphism_with_unit_image() {
        let pr = parameterize(&oper()).unwrap();
        let text = "morphism t_A : Oper_A -> Oper {\n  sort A -> ()\n  sort X -> X\n  sort Y -> Y\n  op f'(x) -> f(x)\n}\n";
        let m = parse_morphism(text, &pr.param_spec, &oper()).unwrap();
        assert_eq!(m.sort_map[&SortName::from("A")].len(), 0);
        let (_, img) = m.op_image_single("f'").unwrap();
        assert_eq!(img, &Term::app("f", vec![Term::var("x")]));
    }

    #[test]
    fn identity_morphism_file_round_trips() {
        let spec = dm();
        let id = crate::core::TheoryMorphism::identity(&spec);
        let text = print_morphism(&id);
        let parsed = parse_morphism(&text, &spec, &spec).unwrap();
        assert!(parsed.generator_equal(&id));
        assert_eq!(print_morphism(&parsed), text);
    }

    #[test]
    fn passing_morphism_prints_parameter_application() {
        let j = passing_morphism(&dm()).unwrap();
        let text = print_morphism(&j);
        assert!(text.contains("op dif(x1) -> dif'(a(), x1)"));
        let sa = add_parameter(&parameterize(&dm()).unwrap().param_spec).unwrap();
        let parsed = parse_morphism(&text, &dm(), &sa).unwrap();
        assert!(parsed.generator_equal(&j));
    }

    #[test]
    fn morphism_image_variables_must_be_distinct() {
        let spec = dm();
        let text = "morphism bad : Dm -> Dm {\n  sort G -> G\n  op prd(x, x) -> prd(x, x)\n  op unt() -> unt()\n  op dif(x) -> dif(x)\n}\n";
        assert!(matches!(
            parse_morphism(text, &spec, &spec),
            Err(DslError::Core(_))
        ));
    }

    #[test]
    fn morphism_image_variable_count_must_match_expansion() {
        let pr = parameterize(&oper()).unwrap();
        // A collapses to the unit, so f' takes one image variable, not two
        let text = "morphism bad : Oper_A -> Oper {\n  sort A -> ()\n  sort X -> X\n  sort Y -> Y\n  op f'(p, x) -> f(x)\n}\n";
        assert!(matches!(
            parse_morphism(text, &pr.param_spec, &oper()),
            Err(DslError::Syntax { .. })
        ));
    }
}
