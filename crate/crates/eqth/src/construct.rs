//! Transformation passes on presentations: the parameterization pass, the
//! erasure that collapses the parameter sort, the pushout adjoining a
//! parameter constant, the coKleisli presentation, the adjunction
//! transpositions, the parameter passing morphism and its 2-cell, the
//! lax-colimit mediator, and the naturality square of the passing morphism.
//!
//! All passes work by structural recursion on presentations. The
//! parameterization pass prepends a fresh parameter sort `A` to the domain
//! of every non-pure operation and threads one shared parameter variable
//! through every equation; everything else is derived from it.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::core::{
    compose_morphisms, CellComponent, Context, CoreError, DecoratedSpec, Equation,
    NatTransPresentation, OpDecl, ProductType, SortName, Term, TheoryMorphism, PARAM_VAR,
};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ConstructError {
    #[error("specification `{0}` already has a parameter sort")]
    AlreadyParameterized(String),
    #[error("specification `{0}` already has a parameter constant")]
    AlreadyHasConstant(String),
    #[error("specification `{0}` has no parameter sort")]
    MissingParamSort(String),
    #[error("equation context already binds the reserved variable `{}`", PARAM_VAR)]
    ReservedVariableInUse,
    #[error("lax cocone is invalid: {0}")]
    ConeMismatch(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// The output of the parameterization pass: the parameterized specification
/// together with the operation renaming it introduced.
#[derive(Clone, Debug)]
pub struct ParamResult {
    /// The specification the pass was applied to.
    pub source: DecoratedSpec,
    /// The parameterized specification, with `param_sort` set.
    pub param_spec: DecoratedSpec,
    /// Maps each source op to its image op: `f ↦ f'` when non-pure,
    /// `f ↦ f` when pure.
    pub op_link: BTreeMap<String, String>,
    /// The reserved parameter variable threaded through equations.
    pub param_var: String,
}

impl ParamResult {
    /// The parameter sort of `param_spec`.
    pub fn param_sort(&self) -> &SortName {
        self.param_spec
            .param_sort
            .as_ref()
            .expect("parameterize always sets the parameter sort")
    }
}

fn fresh_sort(spec: &DecoratedSpec, base: &str) -> SortName {
    let mut candidate = base.to_owned();
    while spec.has_sort(&SortName::new(&candidate)) {
        candidate.push('\'');
    }
    SortName::new(candidate)
}

fn fresh_op(spec: &DecoratedSpec, base: &str) -> String {
    let mut candidate = base.to_owned();
    while spec.has_op(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// The canonical renaming of operations introduced by parameterization:
/// every non-pure op gets a fresh primed name, every pure op keeps its own.
pub fn op_link(spec: &DecoratedSpec) -> BTreeMap<String, String> {
    let mut link = BTreeMap::new();
    let mut taken: Vec<String> = spec.ops.iter().map(|o| o.name.clone()).collect();
    for op in &spec.ops {
        if op.pure {
            link.insert(op.name.clone(), op.name.clone());
        } else {
            let mut candidate = format!("{}'", op.name);
            while taken.contains(&candidate) {
                candidate.push('\'');
            }
            taken.push(candidate.clone());
            link.insert(op.name.clone(), candidate);
        }
    }
    link
}

fn translate_with_link(
    t: &Term,
    spec: &DecoratedSpec,
    link: &BTreeMap<String, String>,
    param_var: &str,
) -> Term {
    match t {
        Term::Var(v) => Term::Var(v.clone()),
        Term::App(op, args) => {
            let args: Vec<Term> = args
                .iter()
                .map(|a| translate_with_link(a, spec, link, param_var))
                .collect();
            let pure = spec.op(op).map(|d| d.pure).unwrap_or(false);
            if pure {
                Term::App(op.clone(), args)
            } else {
                let mut new_args = Vec::with_capacity(args.len() + 1);
                new_args.push(Term::var(param_var));
                new_args.extend(args);
                Term::App(link.get(op).cloned().unwrap_or_else(|| op.clone()), new_args)
            }
        }
    }
}

/// Translates a term of `spec` into the parameterized specification: pure
/// applications are kept, non-pure applications are renamed along the
/// canonical op link and receive `param_var` as an extra first argument. A
/// single shared parameter variable threads the whole term.
pub fn translate_term(t: &Term, spec: &DecoratedSpec, param_var: &str) -> Term {
    translate_with_link(t, spec, &op_link(spec), param_var)
}

/// The parameterization pass: adds a fresh parameter sort `A`, turns every
/// non-pure op `f: S1,...,Sn -> S` into `f': A,S1,...,Sn -> S`, keeps pure
/// ops unchanged (they record the pure sub-specification inside the
/// result), and threads the reserved parameter variable through every
/// equation.
pub fn parameterize(spec: &DecoratedSpec) -> Result<ParamResult, ConstructError> {
    if spec.param_sort.is_some() {
        return Err(ConstructError::AlreadyParameterized(spec.name.clone()));
    }
    if spec.eqs.iter().any(|eq| eq.context.binds(PARAM_VAR)) {
        return Err(ConstructError::ReservedVariableInUse);
    }
    let a = fresh_sort(spec, "A");
    let link = op_link(spec);

    let mut sorts = Vec::with_capacity(spec.sorts.len() + 1);
    sorts.push(a.clone());
    sorts.extend(spec.sorts.iter().cloned());

    let ops = spec
        .ops
        .iter()
        .map(|op| {
            if op.pure {
                op.clone()
            } else {
                let mut dom = Vec::with_capacity(op.arity() + 1);
                dom.push(a.clone());
                dom.extend(op.dom.factors().iter().cloned());
                OpDecl::new(&link[&op.name], ProductType::new(dom), op.cod.clone(), false)
            }
        })
        .collect();

    let eqs = spec
        .eqs
        .iter()
        .map(|eq| {
            Equation::new(
                eq.context.prepended(PARAM_VAR, a.clone()),
                translate_with_link(&eq.lhs, spec, &link, PARAM_VAR),
                translate_with_link(&eq.rhs, spec, &link, PARAM_VAR),
            )
        })
        .collect();

    let param_spec = DecoratedSpec {
        name: format!("{}_A", spec.name),
        sorts,
        ops,
        eqs,
        param_sort: Some(a),
        param_const: None,
    };
    Ok(ParamResult {
        source: spec.clone(),
        param_spec,
        op_link: link,
        param_var: PARAM_VAR.to_owned(),
    })
}

/// The erasure morphism `t_A` from the parameterized specification back to
/// its source: the parameter sort collapses to the unit product and every
/// primed op drops its parameter argument.
pub fn erasure_morphism(pr: &ParamResult) -> TheoryMorphism {
    let a = pr.param_sort().clone();
    let mut sort_map = BTreeMap::new();
    sort_map.insert(a.clone(), ProductType::unit());
    for s in &pr.source.sorts {
        sort_map.insert(s.clone(), ProductType::single(s.clone()));
    }
    let mut op_map = BTreeMap::new();
    for op in &pr.source.ops {
        let linked = &pr.op_link[&op.name];
        let offset = if op.pure { 0 } else { 1 };
        let ctx = Context::new(
            op.dom
                .factors()
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("x{}", i + 1 + offset), s.clone()))
                .collect(),
        );
        let args = ctx.bindings().iter().map(|(v, _)| Term::var(v)).collect();
        op_map.insert(linked.clone(), (ctx, vec![Term::app(&op.name, args)]));
    }
    TheoryMorphism {
        name: format!("t_A_{}", pr.source.name),
        source: pr.param_spec.clone(),
        target: pr.source.clone(),
        sort_map,
        op_map,
    }
}

fn spec_name_with_suffix(name: &str, old: &str, new: &str) -> String {
    match name.strip_suffix(old) {
        Some(stem) => format!("{}{}", stem, new),
        None => format!("{}{}", name, new),
    }
}

/// Adjoins a parameter constant `a : -> A` to a parameterized
/// specification, the pushout of the specification against the one-arrow
/// extension of the parameter sort. The constant becomes the first declared
/// op and is recorded as `param_const`.
pub fn add_parameter(spec_a: &DecoratedSpec) -> Result<DecoratedSpec, ConstructError> {
    let a_sort = spec_a
        .param_sort
        .clone()
        .ok_or_else(|| ConstructError::MissingParamSort(spec_a.name.clone()))?;
    if spec_a.param_const.is_some() {
        return Err(ConstructError::AlreadyHasConstant(spec_a.name.clone()));
    }
    let const_name = fresh_op(spec_a, "a");
    let mut out = spec_a.clone();
    out.name = spec_name_with_suffix(&spec_a.name, "_A", "_a");
    out.ops.insert(
        0,
        OpDecl::new(&const_name, ProductType::unit(), a_sort, false),
    );
    out.param_const = Some(const_name);
    Ok(out)
}

/// The coKleisli presentation of a parameterized specification: the same
/// sorts and equations, every existing op marked pure (together they
/// present the image of the parameterized theory), plus one fresh non-pure
/// constant of the parameter sort. A term of the coKleisli theory at `X -> Y`
/// is exactly a term `A × X -> Y` of the parameterized theory, here
/// rendered as a term in the indeterminate constant.
pub fn cokleisli(spec_a: &DecoratedSpec) -> Result<DecoratedSpec, ConstructError> {
    let a_sort = spec_a
        .param_sort
        .clone()
        .ok_or_else(|| ConstructError::MissingParamSort(spec_a.name.clone()))?;
    if spec_a.param_const.is_some() {
        return Err(ConstructError::AlreadyHasConstant(spec_a.name.clone()));
    }
    let const_name = fresh_op(spec_a, "a");
    let mut out = spec_a.clone();
    out.name = format!("{}_kl", spec_a.name);
    for op in &mut out.ops {
        op.pure = true;
    }
    out.ops.insert(
        0,
        OpDecl::new(&const_name, ProductType::unit(), a_sort, false),
    );
    out.param_const = Some(const_name);
    Ok(out)
}

/// Builds the morphism that sends every non-pure `f` to `f'(a(), vars)` and
/// every pure `f` to itself, into the given target.
fn passing_like(
    name: String,
    spec: &DecoratedSpec,
    target: &DecoratedSpec,
    link: &BTreeMap<String, String>,
    const_name: &str,
) -> TheoryMorphism {
    let sort_map = spec
        .sorts
        .iter()
        .map(|s| (s.clone(), ProductType::single(s.clone())))
        .collect();
    let mut op_map = BTreeMap::new();
    for op in &spec.ops {
        let ctx = Context::new(
            op.dom
                .factors()
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("x{}", i + 1), s.clone()))
                .collect(),
        );
        let vars: Vec<Term> = ctx.bindings().iter().map(|(v, _)| Term::var(v)).collect();
        let image = if op.pure {
            Term::app(&op.name, vars)
        } else {
            let mut args = Vec::with_capacity(vars.len() + 1);
            args.push(Term::constant(const_name));
            args.extend(vars);
            Term::app(&link[&op.name], args)
        };
        op_map.insert(op.name.clone(), (ctx, vec![image]));
    }
    TheoryMorphism {
        name,
        source: spec.clone(),
        target: target.clone(),
        sort_map,
        op_map,
    }
}

/// The unit of the adjunction at `spec`: the morphism into the coKleisli
/// presentation of the parameterized specification, sending each non-pure
/// `f` to `f'` applied at the indeterminate constant.
pub fn unit_morphism(spec: &DecoratedSpec) -> Result<TheoryMorphism, ConstructError> {
    let pr = parameterize(spec)?;
    let kl = cokleisli(&pr.param_spec)?;
    let const_name = kl.param_const.clone().expect("cokleisli sets the constant");
    Ok(passing_like(
        format!("unit_{}", spec.name),
        spec,
        &kl,
        &pr.op_link,
        &const_name,
    ))
}

/// The parameter passing morphism `j` from `spec` into its specification
/// with parameter, sending each non-pure `f` to `f'` applied at the
/// parameter constant.
pub fn passing_morphism(spec: &DecoratedSpec) -> Result<TheoryMorphism, ConstructError> {
    let pr = parameterize(spec)?;
    let sa = add_parameter(&pr.param_spec)?;
    let const_name = sa
        .param_const
        .clone()
        .expect("add_parameter sets the constant");
    Ok(passing_like(
        format!("j_{}", spec.name),
        spec,
        &sa,
        &pr.op_link,
        &const_name,
    ))
}

/// Renames the bindings of `ctx` to `x{start}, x{start+1}, ...` and returns
/// the renamed context together with the substitution realizing it.
fn shift_context(ctx: &Context, start: usize) -> (Context, BTreeMap<String, Term>) {
    let mut renamed = Context::empty();
    let mut subst = BTreeMap::new();
    for (i, (v, s)) in ctx.bindings().iter().enumerate() {
        let fresh = format!("x{}", start + i);
        renamed.push(fresh.clone(), s.clone());
        subst.insert(v.clone(), Term::var(fresh));
    }
    (renamed, subst)
}

/// Transposes `phi : S -> cokleisli(S_A)` across the adjunction to a
/// morphism `parameterize(S) -> S_A`: each primed op maps to the image of
/// its original with every occurrence of the indeterminate constant
/// replaced by the fresh parameter variable of the expanded domain.
pub fn transpose_up(
    phi: &TheoryMorphism,
    spec_a: &DecoratedSpec,
) -> Result<TheoryMorphism, ConstructError> {
    let kl = cokleisli(spec_a)?;
    if phi.target != kl {
        return Err(ConstructError::InvalidInput(format!(
            "target of `{}` is not the coKleisli presentation of `{}`",
            phi.name, spec_a.name
        )));
    }
    let const_name = kl.param_const.clone().expect("cokleisli sets the constant");
    let pr = parameterize(&phi.source)?;
    let a_src = pr.param_sort().clone();
    let a_tgt = spec_a
        .param_sort
        .clone()
        .ok_or_else(|| ConstructError::MissingParamSort(spec_a.name.clone()))?;

    let mut sort_map = phi.sort_map.clone();
    sort_map.insert(a_src, ProductType::single(a_tgt.clone()));

    let mut op_map = BTreeMap::new();
    for op in &phi.source.ops {
        let (ctx, terms) = phi
            .op_map
            .get(&op.name)
            .ok_or_else(|| CoreError::UnmappedSymbol(op.name.clone()))?;
        if op.pure {
            if terms.iter().any(|t| t.mentions_op(&const_name)) {
                return Err(CoreError::NotDecorated {
                    op: op.name.clone(),
                }
                .into());
            }
            op_map.insert(op.name.clone(), (ctx.clone(), terms.clone()));
        } else {
            let (shifted, subst) = shift_context(ctx, 2);
            let param = Term::var("x1");
            let new_terms = terms
                .iter()
                .map(|t| {
                    crate::core::substitute(t, &subst).replace_constant(&const_name, &param)
                })
                .collect();
            let new_ctx = shifted.prepended("x1", a_tgt.clone());
            op_map.insert(pr.op_link[&op.name].clone(), (new_ctx, new_terms));
        }
    }
    Ok(TheoryMorphism {
        name: format!("up_{}", phi.name),
        source: pr.param_spec,
        target: spec_a.clone(),
        sort_map,
        op_map,
    })
}

/// Transposes `psi : parameterize(source) -> S_A` back across the
/// adjunction: each original op maps to the image of its primed op with the
/// parameter slot instantiated at the indeterminate constant.
pub fn transpose_down(
    psi: &TheoryMorphism,
    source: &DecoratedSpec,
) -> Result<TheoryMorphism, ConstructError> {
    let pr = parameterize(source)?;
    if psi.source != pr.param_spec {
        return Err(ConstructError::InvalidInput(format!(
            "source of `{}` is not the parameterization of `{}`",
            psi.name, source.name
        )));
    }
    let a_src = pr.param_sort().clone();
    let a_tgt = psi
        .target
        .param_sort
        .clone()
        .ok_or_else(|| ConstructError::MissingParamSort(psi.target.name.clone()))?;
    if psi.sort_map.get(&a_src) != Some(&ProductType::single(a_tgt)) {
        return Err(ConstructError::InvalidInput(format!(
            "`{}` does not preserve the parameter sort",
            psi.name
        )));
    }
    let kl = cokleisli(&psi.target)?;
    let const_name = kl.param_const.clone().expect("cokleisli sets the constant");

    let mut sort_map = psi.sort_map.clone();
    sort_map.remove(&a_src);

    let mut op_map = BTreeMap::new();
    for op in &source.ops {
        let linked = &pr.op_link[&op.name];
        let (ctx, terms) = psi
            .op_map
            .get(linked)
            .ok_or_else(|| CoreError::UnmappedSymbol(linked.clone()))?;
        if op.pure {
            op_map.insert(op.name.clone(), (ctx.clone(), terms.clone()));
        } else {
            let (param_binding, rest) = ctx
                .bindings()
                .split_first()
                .ok_or_else(|| ConstructError::InvalidInput(format!(
                    "image context of `{}` lacks the parameter slot",
                    linked
                )))?;
            let (renamed, mut subst) = shift_context(&Context::new(rest.to_vec()), 1);
            subst.insert(param_binding.0.clone(), Term::constant(&const_name));
            let new_terms = terms
                .iter()
                .map(|t| crate::core::substitute(t, &subst))
                .collect();
            op_map.insert(op.name.clone(), (renamed, new_terms));
        }
    }
    Ok(TheoryMorphism {
        name: format!("down_{}", psi.name),
        source: source.clone(),
        target: kl,
        sort_map,
        op_map,
    })
}

/// The parameter passing 2-cell `t : j ∘ t_A ⇒ j_A`: the identity variable
/// at every sort of the source specification and the parameter constant at
/// the parameter sort.
pub fn passing_cell(spec: &DecoratedSpec) -> Result<NatTransPresentation, ConstructError> {
    let pr = parameterize(spec)?;
    let sa = add_parameter(&pr.param_spec)?;
    let const_name = sa
        .param_const
        .clone()
        .expect("add_parameter sets the constant");
    let j = passing_morphism(spec)?;
    let t_a = erasure_morphism(&pr);
    let j_a = TheoryMorphism::identity_like(
        format!("j_A_{}", spec.name),
        &pr.param_spec,
        &sa,
    );
    let source_mor = compose_morphisms(&j, &t_a)?;
    let a_sort = pr.param_sort().clone();
    let mut components = BTreeMap::new();
    for s in &pr.param_spec.sorts {
        if s == &a_sort {
            components.insert(
                s.clone(),
                CellComponent {
                    ctx: Context::empty(),
                    terms: vec![Term::constant(&const_name)],
                },
            );
        } else {
            components.insert(
                s.clone(),
                CellComponent {
                    ctx: Context::new(vec![("x1".to_owned(), s.clone())]),
                    terms: vec![Term::var("x1")],
                },
            );
        }
    }
    Ok(NatTransPresentation {
        source_mor,
        target_mor: j_a,
        components,
    })
}

/// A lax cocone over the erasure morphism of a parameterized specification:
/// two legs into a common apex and a 2-cell comparing them.
#[derive(Clone, Debug)]
pub struct LaxCocone {
    /// The base `t_A : S_A -> S`.
    pub base: TheoryMorphism,
    pub apex: DecoratedSpec,
    /// The leg `j'_A : S_A -> apex`.
    pub leg_a: TheoryMorphism,
    /// The leg `j' : S -> apex`.
    pub leg: TheoryMorphism,
    /// The 2-cell `t' : j' ∘ t_A ⇒ j'_A`.
    pub cell: NatTransPresentation,
}

/// The mediating morphism out of the specification with parameter: it
/// agrees with the cocone's parameterized leg on every generator and sends
/// the parameter constant to the cell's component at the parameter sort.
/// The three cocone equations are checked on generators and any failure is
/// reported as an invalid cone.
pub fn mediate(cone: &LaxCocone, pr: &ParamResult) -> Result<TheoryMorphism, ConstructError> {
    let t_a = erasure_morphism(pr);
    if !(cone.base.source == pr.param_spec && cone.base.target == pr.source) {
        return Err(ConstructError::ConeMismatch(
            "cone base does not sit over the erasure morphism".to_owned(),
        ));
    }
    if !cone.base.generator_equal(&t_a) {
        return Err(ConstructError::ConeMismatch(
            "cone base differs from the erasure morphism".to_owned(),
        ));
    }
    if cone.leg_a.source != pr.param_spec || cone.leg.source != pr.source {
        return Err(ConstructError::ConeMismatch(
            "cocone legs have the wrong sources".to_owned(),
        ));
    }
    if cone.leg_a.target != cone.apex || cone.leg.target != cone.apex {
        return Err(ConstructError::ConeMismatch(
            "cocone legs do not land in the apex".to_owned(),
        ));
    }
    cone.cell.validate()?;
    let a_sort_check = pr.param_sort();
    for (s, comp) in &cone.cell.components {
        if s == a_sort_check {
            continue;
        }
        let identity: Vec<Term> = comp.ctx.bindings().iter().map(|(v, _)| Term::var(v)).collect();
        if comp.terms != identity {
            return Err(ConstructError::ConeMismatch(format!(
                "cell component at `{}` is not the identity",
                s
            )));
        }
    }

    let sa = add_parameter(&pr.param_spec)?;
    let const_name = sa
        .param_const
        .clone()
        .expect("add_parameter sets the constant");
    let a_sort = pr.param_sort().clone();

    let mut op_map = cone.leg_a.op_map.clone();
    let a_component = cone
        .cell
        .components
        .get(&a_sort)
        .ok_or_else(|| ConstructError::ConeMismatch(format!(
            "cell lacks a component at the parameter sort `{}`",
            a_sort
        )))?;
    op_map.insert(
        const_name.clone(),
        (a_component.ctx.clone(), a_component.terms.clone()),
    );
    let h = TheoryMorphism {
        name: format!("mediator_{}", cone.apex.name),
        source: sa.clone(),
        target: cone.apex.clone(),
        sort_map: cone.leg_a.sort_map.clone(),
        op_map,
    };
    h.validate()?;

    // h ∘ j_A = j'_A holds by construction; check it anyway, together with
    // the two equations that constrain the parameter constant.
    let j_a = TheoryMorphism::identity_like("j_A", &pr.param_spec, &sa);
    if !compose_morphisms(&h, &j_a)?.generator_equal(&cone.leg_a) {
        return Err(ConstructError::ConeMismatch(
            "mediator does not restrict to the parameterized leg".to_owned(),
        ));
    }
    let j = passing_like("j".to_owned(), &pr.source, &sa, &pr.op_link, &const_name);
    if !compose_morphisms(&h, &j)?.generator_equal(&cone.leg) {
        return Err(ConstructError::ConeMismatch(
            "mediator does not factor the plain leg".to_owned(),
        ));
    }
    let t = passing_cell(&pr.source)?;
    if !t.whisker(&h)?.component_equal(&cone.cell) {
        return Err(ConstructError::ConeMismatch(
            "mediator does not carry the passing cell to the cocone cell".to_owned(),
        ));
    }
    Ok(h)
}

/// Extends a decorated morphism to the specifications with parameter on
/// both sides, sending the parameter sort and constant to their
/// counterparts and parameterizing every non-pure image term.
fn extend_with_parameter(sigma: &TheoryMorphism) -> Result<TheoryMorphism, ConstructError> {
    let pr_src = parameterize(&sigma.source)?;
    let pr_tgt = parameterize(&sigma.target)?;
    let sa_src = add_parameter(&pr_src.param_spec)?;
    let sa_tgt = add_parameter(&pr_tgt.param_spec)?;
    let a_src_const = sa_src.param_const.clone().expect("constant set");
    let a_tgt_const = sa_tgt.param_const.clone().expect("constant set");
    let a_src = pr_src.param_sort().clone();
    let a_tgt = pr_tgt.param_sort().clone();

    let mut sort_map = sigma.sort_map.clone();
    sort_map.insert(a_src, ProductType::single(a_tgt.clone()));

    let mut op_map = BTreeMap::new();
    op_map.insert(
        a_src_const,
        (Context::empty(), vec![Term::constant(&a_tgt_const)]),
    );
    for op in &sigma.source.ops {
        let (ctx, terms) = sigma
            .op_map
            .get(&op.name)
            .ok_or_else(|| CoreError::UnmappedSymbol(op.name.clone()))?;
        if op.pure {
            op_map.insert(op.name.clone(), (ctx.clone(), terms.clone()));
        } else {
            let (shifted, subst) = shift_context(ctx, 2);
            let new_terms = terms
                .iter()
                .map(|t| {
                    translate_with_link(
                        &crate::core::substitute(t, &subst),
                        &sigma.target,
                        &pr_tgt.op_link,
                        "x1",
                    )
                })
                .collect();
            let new_ctx = shifted.prepended("x1", a_tgt.clone());
            op_map.insert(pr_src.op_link[&op.name].clone(), (new_ctx, new_terms));
        }
    }
    Ok(TheoryMorphism {
        name: format!("ext_{}", sigma.name),
        source: sa_src,
        target: sa_tgt,
        sort_map,
        op_map,
    })
}

/// The two composites of the naturality square of the passing morphism at a
/// decorated morphism `σ : S -> S'`: passing after `σ`, and the extension
/// of `σ` after passing. Both are morphisms `S -> S'_a`; callers compare
/// them on generators or semantically.
pub fn naturality_square(
    sigma: &TheoryMorphism,
) -> Result<(TheoryMorphism, TheoryMorphism), ConstructError> {
    sigma.validate_decorated()?;
    let j_src = passing_morphism(&sigma.source)?;
    let j_tgt = passing_morphism(&sigma.target)?;
    let extended = extend_with_parameter(sigma)?;
    let left = compose_morphisms(&j_tgt, sigma)?;
    let right = compose_morphisms(&extended, &j_src)?;
    Ok((left, right))
}
