//! Finite-model semantics: evaluation, satisfaction, reducts, exhaustive
//! enumeration, terminal extensions, and the machine-checked bijections.
//!
//! Models interpret sorts as finite ordered carriers of element labels and
//! operations as total tables. Elements are indices into carriers; labels
//! are the I/O representation. Everything is deterministic: carriers and
//! tables are ordered, and enumeration is lexicographic over op tables
//! under the declared element order.

mod enumerate;
mod terminal;
mod verify;

pub use enumerate::{models_extending, DEFAULT_TABLE_CAP};
pub use terminal::{
    check_terminality, extension_families, terminal_extension, unique_morphism_to,
    ExtensionFamily, TerminalityReport,
};
pub use verify::{
    check_nat_trans, morphisms_semantically_equal, param_passing_model,
    verify_adding_over, verify_bijection_adding, verify_bijection_passing,
    verify_exact_parameterization, verify_passing_over, CheckRecord, CheckStatus, VerifyReport,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::core::{CoreError, DecoratedSpec, ProductType, SortName, Term, TheoryMorphism};

/// An element of a carrier, as an index into its ordered label list.
pub type Elem = usize;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SemanticsError {
    #[error("partial model lacks an interpretation for `{0}`")]
    MissingInterpretation(String),
    #[error("sort `{0}` has no carrier")]
    MissingCarrier(SortName),
    #[error("unknown element `{element}` of sort `{sort}`")]
    UnknownElement { sort: SortName, element: String },
    #[error("table for `{op}` is missing an entry at ({at})")]
    MissingTableEntry { op: String, at: String },
    #[error("table for `{op}` has a duplicate entry at ({at})")]
    DuplicateTableEntry { op: String, at: String },
    #[error("search space of {candidates} candidate tables exceeds the cap of {cap}")]
    SearchSpaceOverflow { candidates: u128, cap: u64 },
    #[error("sort `{0}` is neither interpreted by the base model nor bounded")]
    MissingBound(SortName),
    #[error("reduct violates the source equations: {0}")]
    ReductViolatesEquations(String),
    #[error("models do not fit together: {0}")]
    SpecMismatch(String),
    #[error("no morphism over the base exists: {0}")]
    NoMorphism(String),
    #[error("naturality fails for `{op}` at ({at})")]
    NaturalityFailure { op: String, at: String },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A total table for one operation: output element per input tuple, stored
/// row-major over the domain carriers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct OpTable {
    shape: Vec<usize>,
    data: Vec<Elem>,
}

impl OpTable {
    pub fn new(shape: Vec<usize>, data: Vec<Elem>) -> Result<Self, SemanticsError> {
        let expected: usize = shape.iter().product();
        if data.len() != expected {
            return Err(SemanticsError::InvalidArgument(format!(
                "table holds {} entries but the domain has {}",
                data.len(),
                expected
            )));
        }
        Ok(OpTable { shape, data })
    }

    /// Builds a table by evaluating `f` on every input tuple.
    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[Elem]) -> Elem) -> Self {
        let data = tuples(&shape).map(|args| f(&args)).collect();
        OpTable { shape, data }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    fn index(&self, args: &[Elem]) -> usize {
        debug_assert_eq!(args.len(), self.shape.len());
        let mut idx = 0;
        for (a, s) in args.iter().zip(&self.shape) {
            debug_assert!(a < s);
            idx = idx * s + a;
        }
        idx
    }

    pub fn get(&self, args: &[Elem]) -> Elem {
        self.data[self.index(args)]
    }

    /// All input tuples in row-major order, aligned with `data`.
    pub fn inputs(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        tuples(&self.shape)
    }
}

/// Iterates all tuples over the given carrier sizes in row-major order.
/// The empty shape yields exactly the empty tuple; a zero size yields
/// nothing.
pub(crate) fn tuples(sizes: &[usize]) -> Tuples {
    let current = if sizes.contains(&0) {
        None
    } else {
        Some(vec![0; sizes.len()])
    };
    Tuples {
        sizes: sizes.to_vec(),
        current,
    }
}

pub(crate) struct Tuples {
    sizes: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.as_mut()?;
        let out = current.clone();
        for i in (0..current.len()).rev() {
            current[i] += 1;
            if current[i] < self.sizes[i] {
                return Some(out);
            }
            current[i] = 0;
        }
        self.current = None;
        Some(out)
    }
}

/// A finite interpretation of a specification: ordered carriers per sort
/// and total tables per op, with `partial` marking base models that omit
/// some sorts or ops.
#[derive(Clone, PartialEq, Debug)]
pub struct FinModel {
    pub name: String,
    pub spec: DecoratedSpec,
    pub carriers: BTreeMap<SortName, Vec<String>>,
    pub tables: BTreeMap<String, OpTable>,
    pub partial: bool,
}

impl FinModel {
    pub fn carrier(&self, sort: &SortName) -> Result<&Vec<String>, SemanticsError> {
        self.carriers
            .get(sort)
            .ok_or_else(|| SemanticsError::MissingCarrier(sort.clone()))
    }

    pub fn carrier_len(&self, sort: &SortName) -> Result<usize, SemanticsError> {
        self.carrier(sort).map(Vec::len)
    }

    pub fn elem_index(&self, sort: &SortName, label: &str) -> Result<Elem, SemanticsError> {
        self.carrier(sort)?
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| SemanticsError::UnknownElement {
                sort: sort.clone(),
                element: label.to_owned(),
            })
    }

    pub fn table(&self, op: &str) -> Result<&OpTable, SemanticsError> {
        self.tables
            .get(op)
            .ok_or_else(|| SemanticsError::MissingInterpretation(op.to_owned()))
    }

    /// True when every sort and every op of the spec is interpreted.
    pub fn is_total(&self) -> bool {
        self.spec.sorts.iter().all(|s| self.carriers.contains_key(s))
            && self.spec.ops.iter().all(|o| self.tables.contains_key(&o.name))
    }

    /// The interpretations agree where both models are defined, carriers
    /// and tables alike, ignoring names.
    pub fn same_interpretation(&self, other: &FinModel) -> bool {
        self.carriers == other.carriers && self.tables == other.tables
    }

    /// Structural well-formedness: label uniqueness, table shapes matching
    /// the carriers, outputs inside the codomain carrier, and totality
    /// unless the model is partial.
    pub fn validate(&self) -> Result<(), SemanticsError> {
        for (sort, labels) in &self.carriers {
            if !self.spec.has_sort(sort) {
                return Err(SemanticsError::SpecMismatch(format!(
                    "carrier for undeclared sort `{}`",
                    sort
                )));
            }
            for (i, l) in labels.iter().enumerate() {
                if labels[i + 1..].iter().any(|m| m == l) {
                    return Err(SemanticsError::InvalidArgument(format!(
                        "duplicate element `{}` in carrier of `{}`",
                        l, sort
                    )));
                }
            }
        }
        for (op_name, table) in &self.tables {
            let op = self.spec.op(op_name).ok_or_else(|| {
                SemanticsError::SpecMismatch(format!("table for undeclared op `{}`", op_name))
            })?;
            let shape: Vec<usize> = op
                .dom
                .factors()
                .iter()
                .map(|s| self.carrier_len(s))
                .collect::<Result<_, _>>()?;
            if shape != table.shape {
                return Err(SemanticsError::SpecMismatch(format!(
                    "table for `{}` has the wrong shape",
                    op_name
                )));
            }
            let cod_len = self.carrier_len(&op.cod)?;
            if table.data.iter().any(|&e| e >= cod_len) {
                return Err(SemanticsError::InvalidArgument(format!(
                    "table for `{}` maps outside the carrier of `{}`",
                    op_name, op.cod
                )));
            }
        }
        if !self.partial && !self.is_total() {
            let missing = self
                .spec
                .sorts
                .iter()
                .map(|s| s.to_string())
                .filter(|s| !self.carriers.contains_key(&SortName::new(s.clone())))
                .chain(
                    self.spec
                        .ops
                        .iter()
                        .map(|o| o.name.clone())
                        .filter(|o| !self.tables.contains_key(o)),
                )
                .next()
                .unwrap_or_default();
            return Err(SemanticsError::MissingInterpretation(missing));
        }
        Ok(())
    }

    /// Evaluates a term under an environment mapping variables to elements.
    pub fn eval(&self, env: &BTreeMap<String, Elem>, t: &Term) -> Result<Elem, SemanticsError> {
        match t {
            Term::Var(v) => env.get(v).copied().ok_or_else(|| {
                SemanticsError::Core(CoreError::UnboundVariable { var: v.clone() })
            }),
            Term::App(op, args) => {
                let table = self.table(op)?;
                let vals: Vec<Elem> = args
                    .iter()
                    .map(|a| self.eval(env, a))
                    .collect::<Result<_, _>>()?;
                Ok(table.get(&vals))
            }
        }
    }
}

/// Evaluates `t` in `model` under `env`; structural recursion over the
/// term, deterministic.
pub fn eval_term(
    model: &FinModel,
    env: &BTreeMap<String, Elem>,
    t: &Term,
) -> Result<Elem, SemanticsError> {
    model.eval(env, t)
}

/// One failed instance of one equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationFailure {
    pub eq_index: usize,
    pub env: Vec<(String, String)>,
}

/// Every failing (equation, environment) pair of a model; empty means the
/// model satisfies its specification.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SatisfactionReport {
    pub failures: Vec<EquationFailure>,
}

impl SatisfactionReport {
    pub fn is_satisfied(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SatisfactionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return writeln!(f, "all equations hold");
        }
        for fail in &self.failures {
            let env = fail
                .env
                .iter()
                .map(|(v, l)| format!("{}={}", v, l))
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(f, "equation #{} fails at [{}]", fail.eq_index + 1, env)?;
        }
        Ok(())
    }
}

/// Checks satisfaction of every equation of the model's spec by iterating
/// all environments over the context carriers.
pub fn check_model(model: &FinModel) -> Result<SatisfactionReport, SemanticsError> {
    let mut failures = vec![];
    for (eq_index, eq) in model.spec.eqs.iter().enumerate() {
        let sizes: Vec<usize> = eq
            .context
            .bindings()
            .iter()
            .map(|(_, s)| model.carrier_len(s))
            .collect::<Result<_, _>>()?;
        for tuple in tuples(&sizes) {
            let env: BTreeMap<String, Elem> = eq
                .context
                .bindings()
                .iter()
                .zip(&tuple)
                .map(|((v, _), &e)| (v.clone(), e))
                .collect();
            let lhs = model.eval(&env, &eq.lhs)?;
            let rhs = model.eval(&env, &eq.rhs)?;
            if lhs != rhs {
                let env_labels = eq
                    .context
                    .bindings()
                    .iter()
                    .zip(&tuple)
                    .map(|((v, s), &e)| {
                        (v.clone(), model.carrier(s).map(|c| c[e].clone()).unwrap_or_default())
                    })
                    .collect();
                failures.push(EquationFailure {
                    eq_index,
                    env: env_labels,
                });
            }
        }
    }
    Ok(SatisfactionReport { failures })
}

/// The label of a tuple over a product carrier: the bare label for a single
/// factor, `()` for the empty product, and a tuple rendering otherwise.
fn tuple_label(labels: &[&str]) -> String {
    match labels {
        [] => "()".to_owned(),
        [l] => (*l).to_owned(),
        many => format!("({})", many.join(",")),
    }
}

/// The ordered carrier of a product of sorts in `model`, together with the
/// factor sizes.
pub(crate) fn product_carrier(
    model: &FinModel,
    prod: &ProductType,
) -> Result<(Vec<String>, Vec<usize>), SemanticsError> {
    let factor_labels: Vec<&Vec<String>> = prod
        .factors()
        .iter()
        .map(|s| model.carrier(s))
        .collect::<Result<_, _>>()?;
    let sizes: Vec<usize> = factor_labels.iter().map(|c| c.len()).collect();
    let labels = tuples(&sizes)
        .map(|t| {
            let parts: Vec<&str> = t
                .iter()
                .zip(&factor_labels)
                .map(|(&e, c)| c[e].as_str())
                .collect();
            tuple_label(&parts)
        })
        .collect();
    Ok((labels, sizes))
}

pub(crate) fn mixed_radix_combine(digits: &[Elem], sizes: &[usize]) -> usize {
    let mut idx = 0;
    for (d, s) in digits.iter().zip(sizes) {
        idx = idx * s + d;
    }
    idx
}

pub(crate) fn mixed_radix_decode(mut idx: usize, sizes: &[usize]) -> Vec<Elem> {
    let mut out = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        out[i] = idx % sizes[i];
        idx /= sizes[i];
    }
    out
}

/// Precomposition of a model with a morphism, without checking that the
/// result satisfies the source equations. Carriers of the reduct are
/// products of target carriers; single-factor products keep their labels.
pub fn reduct_unchecked(
    model: &FinModel,
    m: &TheoryMorphism,
) -> Result<FinModel, SemanticsError> {
    let mut carriers = BTreeMap::new();
    let mut factor_sizes: BTreeMap<SortName, Vec<usize>> = BTreeMap::new();
    for s in &m.source.sorts {
        let prod = m.sort_image(s)?;
        let (labels, sizes) = product_carrier(model, prod)?;
        carriers.insert(s.clone(), labels);
        factor_sizes.insert(s.clone(), sizes);
    }
    let mut tables = BTreeMap::new();
    for op in &m.source.ops {
        let (ctx, image_terms) = m
            .op_map
            .get(&op.name)
            .ok_or_else(|| SemanticsError::Core(CoreError::UnmappedSymbol(op.name.clone())))?;
        let dom_shape: Vec<usize> = op
            .dom
            .factors()
            .iter()
            .map(|s| carriers[s].len())
            .collect();
        let cod_sizes = &factor_sizes[&op.cod];
        let mut data = Vec::with_capacity(dom_shape.iter().product());
        for input in tuples(&dom_shape) {
            // decode each slot into its factor elements and bind the
            // expanded context variables positionally
            let mut env = BTreeMap::new();
            let mut ctx_vars = ctx.bindings().iter();
            for (slot, &packed) in op.dom.factors().iter().zip(&input) {
                let digits = mixed_radix_decode(packed, &factor_sizes[slot]);
                for d in digits {
                    let (v, _) = ctx_vars.next().ok_or_else(|| {
                        SemanticsError::SpecMismatch(format!(
                            "image context of `{}` is shorter than its expanded domain",
                            op.name
                        ))
                    })?;
                    env.insert(v.clone(), d);
                }
            }
            let outputs: Vec<Elem> = image_terms
                .iter()
                .map(|t| model.eval(&env, t))
                .collect::<Result<_, _>>()?;
            data.push(mixed_radix_combine(&outputs, cod_sizes));
        }
        tables.insert(op.name.clone(), OpTable::new(dom_shape, data)?);
    }
    Ok(FinModel {
        name: format!("{}_along_{}", model.name, m.name),
        spec: m.source.clone(),
        carriers,
        tables,
        partial: false,
    })
}

/// Precomposition of a model with a morphism. The result is checked
/// against the source equations; a violation means the morphism does not
/// preserve equations and is reported as an error.
pub fn reduct(model: &FinModel, m: &TheoryMorphism) -> Result<FinModel, SemanticsError> {
    let out = reduct_unchecked(model, m)?;
    let report = check_model(&out)?;
    if !report.is_satisfied() {
        return Err(SemanticsError::ReductViolatesEquations(format!(
            "{} failing instances along `{}`",
            report.failures.len(),
            m.name
        )));
    }
    Ok(out)
}

/// A morphism of models of one specification: one component function per
/// sort, natural in every operation.
#[derive(Clone, PartialEq, Debug)]
pub struct ModelMorphism {
    pub source: FinModel,
    pub target: FinModel,
    pub components: BTreeMap<SortName, Vec<Elem>>,
}

impl ModelMorphism {
    pub fn component(&self, sort: &SortName) -> Result<&Vec<Elem>, SemanticsError> {
        self.components
            .get(sort)
            .ok_or_else(|| SemanticsError::MissingCarrier(sort.clone()))
    }

    /// Shape checks plus exhaustive naturality over every op and input.
    pub fn validate(&self) -> Result<(), SemanticsError> {
        if self.source.spec != self.target.spec {
            return Err(SemanticsError::SpecMismatch(
                "model morphism endpoints interpret different specifications".to_owned(),
            ));
        }
        for s in &self.source.spec.sorts {
            let comp = self.component(s)?;
            if comp.len() != self.source.carrier_len(s)? {
                return Err(SemanticsError::SpecMismatch(format!(
                    "component at `{}` has the wrong length",
                    s
                )));
            }
            let tgt_len = self.target.carrier_len(s)?;
            if comp.iter().any(|&e| e >= tgt_len) {
                return Err(SemanticsError::SpecMismatch(format!(
                    "component at `{}` maps outside the target carrier",
                    s
                )));
            }
        }
        for op in &self.source.spec.ops {
            let src_table = self.source.table(&op.name)?;
            let tgt_table = self.target.table(&op.name)?;
            let cod_comp = self.component(&op.cod)?;
            let shape: Vec<usize> = op
                .dom
                .factors()
                .iter()
                .map(|s| self.source.carrier_len(s))
                .collect::<Result<_, _>>()?;
            for input in tuples(&shape) {
                let mapped: Vec<Elem> = input
                    .iter()
                    .zip(op.dom.factors())
                    .map(|(&e, s)| Ok::<Elem, SemanticsError>(self.component(s)?[e]))
                    .collect::<Result<_, _>>()?;
                if cod_comp[src_table.get(&input)] != tgt_table.get(&mapped) {
                    let at = input
                        .iter()
                        .zip(op.dom.factors())
                        .map(|(&e, s)| self.source.carrier(s).map(|c| c[e].clone()))
                        .collect::<Result<Vec<_>, _>>()?
                        .join(", ");
                    return Err(SemanticsError::NaturalityFailure {
                        op: op.name.clone(),
                        at,
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{erasure_morphism, parameterize};
    use crate::core::TheoryMorphism;
    use crate::testfix::{dm, oper, oper_base, z2_base};

    fn z2_total() -> FinModel {
        let mut m = z2_base();
        m.name = "Z2dm".to_owned();
        // dif constant at the unit is the only differential structure
        m.tables
            .insert("dif".to_owned(), OpTable::new(vec![2], vec![0, 0]).unwrap());
        m.partial = false;
        m
    }

    #[test]
    fn eval_in_z2() {
        let m = z2_total();
        let mut env = BTreeMap::new();
        env.insert("x".to_owned(), 1);
        // prd(g, g) = e in the XOR monoid
        let t = Term::app("prd", vec![Term::var("x"), Term::var("x")]);
        assert_eq!(eval_term(&m, &env, &t).unwrap(), 0);
        assert_eq!(m.eval(&env, &Term::var("x")).unwrap(), 1);
        assert_eq!(m.eval(&env, &Term::constant("unt")).unwrap(), 0);
    }

    #[test]
    fn eval_missing_interpretation() {
        let m = z2_base();
        let env = BTreeMap::new();
        let t = Term::app("dif", vec![Term::constant("unt")]);
        assert!(matches!(
            m.eval(&env, &t),
            Err(SemanticsError::MissingInterpretation(op)) if op == "dif"
        ));
    }

    #[test]
    fn z2_satisfies_dm() {
        let report = check_model(&z2_total()).unwrap();
        assert!(report.is_satisfied());
    }

    #[test]
    fn identity_differential_fails() {
        let mut m = z2_total();
        m.tables
            .insert("dif".to_owned(), OpTable::new(vec![2], vec![0, 1]).unwrap());
        let report = check_model(&m).unwrap();
        assert!(!report.is_satisfied());
        // dif(dif(x)) = unt fails at x = g
        assert!(report
            .failures
            .iter()
            .any(|f| f.eq_index == 5 && f.env == vec![("x".to_owned(), "g".to_owned())]));
    }

    #[test]
    fn empty_carriers_satisfy_vacuously() {
        let mut m = z2_total();
        m.carriers.insert(SortName::from("G"), vec![]);
        m.tables.insert("prd".to_owned(), OpTable::new(vec![0, 0], vec![]).unwrap());
        m.tables.insert("dif".to_owned(), OpTable::new(vec![0], vec![]).unwrap());
        // unt cannot be interpreted in an empty carrier, so drop it; no
        // equation is ever instantiated because every context is empty
        m.tables.remove("unt");
        m.partial = true;
        assert!(check_model(&m).unwrap().is_satisfied());
    }

    #[test]
    fn reduct_along_identity() {
        let m = z2_total();
        let id = TheoryMorphism::identity(&dm());
        let r = reduct(&m, &id).unwrap();
        assert!(m.same_interpretation(&r));
    }

    #[test]
    fn reduct_along_erasure_interprets_parameter_as_singleton() {
        // the reduct of an Oper-model along the erasure is the Oper_A-model
        // that interprets the parameter sort as a singleton
        let pr = parameterize(&oper()).unwrap();
        let t_a = erasure_morphism(&pr);
        let mut m = oper_base();
        m.name = "M".to_owned();
        m.partial = false;
        // f = the swap x0 -> y1, x1 -> y0
        m.tables
            .insert("f".to_owned(), OpTable::new(vec![2], vec![1, 0]).unwrap());
        m.validate().unwrap();

        let r = reduct(&m, &t_a).unwrap();
        assert_eq!(r.spec, pr.param_spec);
        assert_eq!(r.carriers[&SortName::from("A")], vec!["()"]);
        assert_eq!(r.carriers[&SortName::from("X")], vec!["x0", "x1"]);
        assert_eq!(r.tables["f'"], OpTable::new(vec![1, 2], vec![1, 0]).unwrap());
    }

    #[test]
    fn tuples_edge_cases() {
        assert_eq!(tuples(&[]).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(tuples(&[0]).count(), 0);
        assert_eq!(
            tuples(&[2, 2]).collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }
}
