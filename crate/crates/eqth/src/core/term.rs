use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::spec::{Context, DecoratedSpec, SortName};

/// A term over a specification: a variable of the ambient context or an
/// operation applied to argument terms. Constants are applications with no
/// arguments and print as `c()`, so a bare identifier is always a variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    /// A constant application `c()`.
    pub fn constant(op: impl Into<String>) -> Term {
        Term::App(op.into(), vec![])
    }

    /// All variable names occurring in the term, in first-occurrence order.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = vec![];
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// True when the operation name occurs anywhere in the term.
    pub fn mentions_op(&self, op: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(f, args) => f == op || args.iter().any(|a| a.mentions_op(op)),
        }
    }

    /// Replaces every application of the nullary op `name` by `replacement`.
    pub fn replace_constant(&self, name: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(v) => Term::Var(v.clone()),
            Term::App(f, args) if f == name && args.is_empty() => replacement.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter()
                    .map(|a| a.replace_constant(name, replacement))
                    .collect(),
            ),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) => {
                write!(f, "{}(", op)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", a)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Errors raised by type-checking, substitution and morphism application.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum CoreError {
    #[error("unbound variable `{var}`")]
    UnboundVariable { var: String },
    #[error("unknown op `{op}` in `{term}`")]
    UnknownOp { op: String, term: String },
    #[error("op `{op}` expects {expected} arguments, got {found} in `{term}`")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
        term: String,
    },
    #[error("expected sort `{expected}`, found sort `{found}` at `{term}`")]
    SortMismatch {
        expected: SortName,
        found: SortName,
        term: String,
    },
    #[error("symbol `{0}` is not mapped by the morphism")]
    UnmappedSymbol(String),
    #[error("morphism endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("term `{term}` collapses to the unit product under the morphism")]
    CollapsesToUnit { term: String },
    #[error("image of op `{op}` must have {expected} components, got {found}")]
    ImageArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("morphism is not decorated: pure op `{op}` maps to a non-pure term")]
    NotDecorated { op: String },
}

/// Computes the sort of `t` in `ctx` over `spec`.
pub fn typecheck_term(
    ctx: &Context,
    t: &Term,
    spec: &DecoratedSpec,
) -> Result<SortName, CoreError> {
    match t {
        Term::Var(v) => ctx
            .lookup(v)
            .cloned()
            .ok_or_else(|| CoreError::UnboundVariable { var: v.clone() }),
        Term::App(op, args) => {
            let decl = spec.op(op).ok_or_else(|| CoreError::UnknownOp {
                op: op.clone(),
                term: t.to_string(),
            })?;
            if decl.arity() != args.len() {
                return Err(CoreError::ArityMismatch {
                    op: op.clone(),
                    expected: decl.arity(),
                    found: args.len(),
                    term: t.to_string(),
                });
            }
            for (arg, expected) in args.iter().zip(decl.dom.factors()) {
                let found = typecheck_term(ctx, arg, spec)?;
                if &found != expected {
                    return Err(CoreError::SortMismatch {
                        expected: expected.clone(),
                        found,
                        term: arg.to_string(),
                    });
                }
            }
            Ok(decl.cod.clone())
        }
    }
}

/// True iff every operation symbol occurring in `t` is pure. Variables are
/// projections, hence always pure; compositions and tuples of pure terms
/// stay pure, so purity of a term reduces to purity of its symbols.
pub fn is_pure_term(ctx: &Context, t: &Term, spec: &DecoratedSpec) -> Result<bool, CoreError> {
    typecheck_term(ctx, t, spec)?;
    Ok(pure_unchecked(t, spec))
}

fn pure_unchecked(t: &Term, spec: &DecoratedSpec) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(op, args) => {
            spec.op(op).map(|d| d.pure).unwrap_or(false)
                && args.iter().all(|a| pure_unchecked(a, spec))
        }
    }
}

/// Capture-free simultaneous substitution. Variables without a binding are
/// left untouched. Terms have no binders, so no renaming is ever needed.
pub fn substitute(t: &Term, binding: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => binding.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(op, args) => Term::App(
            op.clone(),
            args.iter().map(|a| substitute(a, binding)).collect(),
        ),
    }
}

/// Substitution that checks each bound term against the sort of its
/// variable in `src_ctx`, typing the replacements in `dst_ctx`.
pub fn substitute_checked(
    spec: &DecoratedSpec,
    src_ctx: &Context,
    dst_ctx: &Context,
    t: &Term,
    binding: &BTreeMap<String, Term>,
) -> Result<Term, CoreError> {
    for (var, replacement) in binding {
        let expected = src_ctx
            .lookup(var)
            .cloned()
            .ok_or_else(|| CoreError::UnboundVariable { var: var.clone() })?;
        let found = typecheck_term(dst_ctx, replacement, spec)?;
        if found != expected {
            return Err(CoreError::SortMismatch {
                expected,
                found,
                term: replacement.to_string(),
            });
        }
    }
    Ok(substitute(t, binding))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{OpDecl, ProductType};

    fn sgp() -> DecoratedSpec {
        let g = SortName::from("G");
        let mut s = DecoratedSpec::new("Sgp");
        s.sorts.push(g.clone());
        s.ops.push(OpDecl::new(
            "prd",
            ProductType::new(vec![g.clone(), g.clone()]),
            g,
            false,
        ));
        s
    }

    fn nat() -> DecoratedSpec {
        let n = SortName::from("N");
        let mut s = DecoratedSpec::new("Nat");
        s.sorts.push(n.clone());
        s.ops
            .push(OpDecl::new("z", ProductType::unit(), n.clone(), true));
        s.ops
            .push(OpDecl::new("s", ProductType::single(n.clone()), n, false));
        s
    }

    fn ctx_xg() -> Context {
        Context::new(vec![("x".into(), SortName::from("G"))])
    }

    #[test]
    fn typecheck_application() {
        let t = Term::app("prd", vec![Term::var("x"), Term::var("x")]);
        assert_eq!(
            typecheck_term(&ctx_xg(), &t, &sgp()).unwrap(),
            SortName::from("G")
        );
    }

    #[test]
    fn typecheck_variable_lookup() {
        assert_eq!(
            typecheck_term(&ctx_xg(), &Term::var("x"), &sgp()).unwrap(),
            SortName::from("G")
        );
    }

    #[test]
    fn typecheck_arity_mismatch() {
        let t = Term::app("prd", vec![Term::var("x")]);
        match typecheck_term(&ctx_xg(), &t, &sgp()) {
            Err(CoreError::ArityMismatch { op, expected, found, .. }) => {
                assert_eq!(op, "prd");
                assert_eq!((expected, found), (2, 1));
            }
            other => panic!("expected arity mismatch, got {:?}", other),
        }
    }

    #[test]
    fn typecheck_unbound_variable() {
        assert!(matches!(
            typecheck_term(&Context::empty(), &Term::var("y"), &sgp()),
            Err(CoreError::UnboundVariable { .. })
        ));
    }

    #[test]
    fn purity_of_variables_and_constants() {
        let nat = nat();
        assert!(is_pure_term(&ctx_xg(), &Term::var("x"), &sgp()).unwrap());
        assert!(is_pure_term(&Context::empty(), &Term::constant("z"), &nat).unwrap());
        let szero = Term::app("s", vec![Term::constant("z")]);
        assert!(!is_pure_term(&Context::empty(), &szero, &nat).unwrap());
    }

    #[test]
    fn substitute_examples() {
        let t = Term::app("prd", vec![Term::var("x"), Term::var("y")]);
        let mut b = BTreeMap::new();
        b.insert("x".to_owned(), Term::constant("unt"));
        b.insert("y".to_owned(), Term::constant("unt"));
        assert_eq!(
            substitute(&t, &b),
            Term::app("prd", vec![Term::constant("unt"), Term::constant("unt")])
        );

        let mut b2 = BTreeMap::new();
        b2.insert("x".to_owned(), Term::app("s", vec![Term::constant("z")]));
        assert_eq!(
            substitute(&Term::var("x"), &b2),
            Term::app("s", vec![Term::constant("z")])
        );
    }

    #[test]
    fn substitute_checked_rejects_wrong_sort() {
        let nat = nat();
        let src = Context::new(vec![("x".into(), SortName::from("N"))]);
        // dst context binds y at a sort that does not exist in nat's ops
        let mut spec2 = nat.clone();
        spec2.sorts.push(SortName::from("M"));
        let dst = Context::new(vec![("y".into(), SortName::from("M"))]);
        let mut b = BTreeMap::new();
        b.insert("x".to_owned(), Term::var("y"));
        let r = substitute_checked(&spec2, &src, &dst, &Term::var("x"), &b);
        assert!(matches!(r, Err(CoreError::SortMismatch { .. })));
    }
}
