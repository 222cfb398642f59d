use std::fmt;

use super::term::{typecheck_term, CoreError, Term};
use super::RESERVED_SORT_NAMES;

/// The name of a sort (type) of a specification.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SortName(String);

impl SortName {
    pub fn new(name: impl Into<String>) -> Self {
        SortName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SortName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SortName {
    fn from(s: &str) -> Self {
        SortName(s.to_owned())
    }
}

/// A finite product of sorts in flat normal form. The empty sequence is the
/// unit type; there is no nesting.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ProductType {
    factors: Vec<SortName>,
}

impl ProductType {
    pub fn new(factors: Vec<SortName>) -> Self {
        ProductType { factors }
    }

    /// The unit type `1`.
    pub fn unit() -> Self {
        ProductType { factors: vec![] }
    }

    pub fn single(sort: SortName) -> Self {
        ProductType {
            factors: vec![sort],
        }
    }

    pub fn factors(&self) -> &[SortName] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The single factor, when there is exactly one.
    pub fn as_single(&self) -> Option<&SortName> {
        match self.factors.as_slice() {
            [s] => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for ProductType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("()");
        }
        for (i, s) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

/// An operation declaration with its purity decoration.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OpDecl {
    pub name: String,
    pub dom: ProductType,
    pub cod: SortName,
    pub pure: bool,
}

impl OpDecl {
    pub fn new(name: impl Into<String>, dom: ProductType, cod: SortName, pure: bool) -> Self {
        OpDecl {
            name: name.into(),
            dom,
            cod,
            pure,
        }
    }

    pub fn arity(&self) -> usize {
        self.dom.len()
    }
}

/// An ordered context of sorted variables. Variables correspond to
/// projections out of the product of their sorts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Context {
    bindings: Vec<(String, SortName)>,
}

impl Context {
    pub fn new(bindings: Vec<(String, SortName)>) -> Self {
        Context { bindings }
    }

    pub fn empty() -> Self {
        Context { bindings: vec![] }
    }

    pub fn bindings(&self) -> &[(String, SortName)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn lookup(&self, var: &str) -> Option<&SortName> {
        self.bindings
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, s)| s)
    }

    pub fn binds(&self, var: &str) -> bool {
        self.lookup(var).is_some()
    }

    pub fn push(&mut self, var: impl Into<String>, sort: SortName) {
        self.bindings.push((var.into(), sort));
    }

    /// A new context with `var:sort` prepended.
    pub fn prepended(&self, var: impl Into<String>, sort: SortName) -> Context {
        let mut bindings = Vec::with_capacity(self.bindings.len() + 1);
        bindings.push((var.into(), sort));
        bindings.extend(self.bindings.iter().cloned());
        Context { bindings }
    }

    pub(crate) fn names_distinct(&self) -> bool {
        for (i, (v, _)) in self.bindings.iter().enumerate() {
            if self.bindings[i + 1..].iter().any(|(w, _)| w == v) {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (v, s)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", v, s)?;
        }
        f.write_str(")")
    }
}

/// An equation between two terms of the same sort over a shared context.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Equation {
    pub context: Context,
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(context: Context, lhs: Term, rhs: Term) -> Self {
        Equation { context, lhs, rhs }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} = {}", self.context, self.lhs, self.rhs)
    }
}

/// A decorated specification: a multi-sorted signature with equations, a
/// purity flag per operation, and an optional designated parameter sort and
/// parameter constant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecoratedSpec {
    pub name: String,
    pub sorts: Vec<SortName>,
    pub ops: Vec<OpDecl>,
    pub eqs: Vec<Equation>,
    pub param_sort: Option<SortName>,
    pub param_const: Option<String>,
}

impl DecoratedSpec {
    pub fn new(name: impl Into<String>) -> Self {
        DecoratedSpec {
            name: name.into(),
            sorts: vec![],
            ops: vec![],
            eqs: vec![],
            param_sort: None,
            param_const: None,
        }
    }

    pub fn has_sort(&self, sort: &SortName) -> bool {
        self.sorts.contains(sort)
    }

    pub fn op(&self, name: &str) -> Option<&OpDecl> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn has_op(&self, name: &str) -> bool {
        self.op(name).is_some()
    }

    /// The operations belonging to the pure (wide) sub-specification.
    pub fn pure_ops(&self) -> impl Iterator<Item = &OpDecl> {
        self.ops.iter().filter(|o| o.pure)
    }

    pub fn non_pure_ops(&self) -> impl Iterator<Item = &OpDecl> {
        self.ops.iter().filter(|o| !o.pure)
    }

    /// Checks every structural invariant and returns the full list of
    /// violations. An empty report means the specification is valid.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = vec![];
        for (i, s) in self.sorts.iter().enumerate() {
            if s.as_str().is_empty() {
                issues.push(ValidationIssue::EmptySortName);
            }
            if RESERVED_SORT_NAMES.contains(&s.as_str()) {
                issues.push(ValidationIssue::ReservedSortName(s.clone()));
            }
            if s.as_str().contains('$') {
                issues.push(ValidationIssue::ReservedCharacter(s.to_string()));
            }
            if self.sorts[i + 1..].contains(s) {
                issues.push(ValidationIssue::DuplicateSort(s.clone()));
            }
        }
        for (i, op) in self.ops.iter().enumerate() {
            if op.name.contains('$') {
                issues.push(ValidationIssue::ReservedCharacter(op.name.clone()));
            }
            if self.ops[i + 1..].iter().any(|o| o.name == op.name) {
                issues.push(ValidationIssue::DuplicateOp(op.name.clone()));
            }
            if !self.has_sort(&op.cod) {
                issues.push(ValidationIssue::UnknownSort {
                    op: op.name.clone(),
                    sort: op.cod.clone(),
                });
            }
            for s in op.dom.factors() {
                if !self.has_sort(s) {
                    issues.push(ValidationIssue::UnknownSort {
                        op: op.name.clone(),
                        sort: s.clone(),
                    });
                }
            }
        }
        for (i, eq) in self.eqs.iter().enumerate() {
            if !eq.context.names_distinct() {
                issues.push(ValidationIssue::DuplicateVariable { eq_index: i });
                continue;
            }
            for (_, s) in eq.context.bindings() {
                if !self.has_sort(s) {
                    issues.push(ValidationIssue::UnknownSort {
                        op: format!("equation #{}", i + 1),
                        sort: s.clone(),
                    });
                }
            }
            match (
                typecheck_term(&eq.context, &eq.lhs, self),
                typecheck_term(&eq.context, &eq.rhs, self),
            ) {
                (Ok(l), Ok(r)) => {
                    if l != r {
                        issues.push(ValidationIssue::EquationSortMismatch {
                            eq_index: i,
                            lhs_sort: l,
                            rhs_sort: r,
                        });
                    }
                }
                (l, r) => {
                    for side in [l, r] {
                        if let Err(e) = side {
                            issues.push(ValidationIssue::IllTypedEquation { eq_index: i, error: e });
                        }
                    }
                }
            }
        }
        if let Some(ps) = &self.param_sort {
            if !self.has_sort(ps) {
                issues.push(ValidationIssue::UnknownSort {
                    op: "param sort".to_owned(),
                    sort: ps.clone(),
                });
            }
        }
        if let Some(pc) = &self.param_const {
            match &self.param_sort {
                None => issues.push(ValidationIssue::MissingParamSort),
                Some(ps) => match self.op(pc) {
                    None => issues.push(ValidationIssue::UnknownParamConst(pc.clone())),
                    Some(op) => {
                        if !op.dom.is_empty() || &op.cod != ps || op.pure {
                            issues.push(ValidationIssue::BadParamConst(pc.clone()));
                        }
                    }
                },
            }
        }
        ValidationReport { issues }
    }

    /// Convenience wrapper that turns a non-empty report into an error.
    pub fn validated(self) -> Result<Self, ValidationReport> {
        let report = self.validate();
        if report.is_valid() {
            Ok(self)
        } else {
            Err(report)
        }
    }
}

/// A single violation found by [`DecoratedSpec::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum ValidationIssue {
    EmptySortName,
    ReservedSortName(SortName),
    ReservedCharacter(String),
    DuplicateSort(SortName),
    DuplicateOp(String),
    UnknownSort { op: String, sort: SortName },
    DuplicateVariable { eq_index: usize },
    IllTypedEquation { eq_index: usize, error: CoreError },
    EquationSortMismatch { eq_index: usize, lhs_sort: SortName, rhs_sort: SortName },
    MissingParamSort,
    UnknownParamConst(String),
    BadParamConst(String),
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            EmptySortName => write!(f, "empty sort name"),
            ReservedSortName(s) => write!(f, "sort name `{}` is reserved", s),
            ReservedCharacter(n) => write!(f, "name `{}` uses the reserved character `$`", n),
            DuplicateSort(s) => write!(f, "duplicate sort `{}`", s),
            DuplicateOp(o) => write!(f, "duplicate op `{}`", o),
            UnknownSort { op, sort } => write!(f, "unknown sort `{}` in {}", sort, op),
            DuplicateVariable { eq_index } => {
                write!(f, "duplicate variable in context of equation #{}", eq_index + 1)
            }
            IllTypedEquation { eq_index, error } => {
                write!(f, "ill-typed equation #{}: {}", eq_index + 1, error)
            }
            EquationSortMismatch { eq_index, lhs_sort, rhs_sort } => write!(
                f,
                "equation #{} relates sort `{}` to sort `{}`",
                eq_index + 1,
                lhs_sort,
                rhs_sort
            ),
            MissingParamSort => write!(f, "param const declared without a param sort"),
            UnknownParamConst(c) => write!(f, "param const `{}` is not a declared op", c),
            BadParamConst(c) => write!(
                f,
                "param const `{}` must be a non-pure constant of the param sort",
                c
            ),
        }
    }
}

/// The outcome of validating a specification: empty means valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for issue in &self.issues {
            writeln!(f, "{}", issue)?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}
