use std::collections::BTreeMap;

use super::spec::{Context, DecoratedSpec, ProductType, SortName};
use super::term::{is_pure_term, substitute, typecheck_term, CoreError, Term};

/// A generator-to-term map between specifications. Sorts map to flat sort
/// sequences (so a sort can collapse to the unit product), and each
/// operation maps to a tuple of terms over the image of its domain; the
/// tuple has one component per factor of the image of the codomain, which
/// is a single term for every ordinary operation.
#[derive(Clone, PartialEq, Debug)]
pub struct TheoryMorphism {
    pub name: String,
    pub source: DecoratedSpec,
    pub target: DecoratedSpec,
    pub sort_map: BTreeMap<SortName, ProductType>,
    pub op_map: BTreeMap<String, (Context, Vec<Term>)>,
}

/// The canonical context `(x1:S1, ..., xn:Sn)` over the factors of `dom`.
pub(crate) fn canonical_context(dom: &ProductType) -> Context {
    Context::new(
        dom.factors()
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("x{}", i + 1), s.clone()))
            .collect(),
    )
}

impl TheoryMorphism {
    /// The identity morphism on `spec`.
    pub fn identity(spec: &DecoratedSpec) -> TheoryMorphism {
        Self::identity_like(format!("id_{}", spec.name), spec, spec)
    }

    /// The morphism mapping every sort and op of `source` to itself in
    /// `target`. With `target = source` this is the identity; with a larger
    /// `target` it is the evident inclusion.
    pub fn identity_like(
        name: impl Into<String>,
        source: &DecoratedSpec,
        target: &DecoratedSpec,
    ) -> TheoryMorphism {
        let sort_map = source
            .sorts
            .iter()
            .map(|s| (s.clone(), ProductType::single(s.clone())))
            .collect();
        let op_map = source
            .ops
            .iter()
            .map(|op| {
                let ctx = canonical_context(&op.dom);
                let args = ctx.bindings().iter().map(|(v, _)| Term::var(v)).collect();
                (op.name.clone(), (ctx, vec![Term::app(&op.name, args)]))
            })
            .collect();
        TheoryMorphism {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            sort_map,
            op_map,
        }
    }

    /// The image of a single sort.
    pub fn sort_image(&self, sort: &SortName) -> Result<&ProductType, CoreError> {
        self.sort_map
            .get(sort)
            .ok_or_else(|| CoreError::UnmappedSymbol(sort.to_string()))
    }

    /// The image of a product, flattened to product normal form.
    pub fn product_image(&self, p: &ProductType) -> Result<ProductType, CoreError> {
        let mut factors = vec![];
        for s in p.factors() {
            factors.extend(self.sort_image(s)?.factors().iter().cloned());
        }
        Ok(ProductType::new(factors))
    }

    /// The image of a single op, when it is an ordinary one-component image.
    pub fn op_image_single(&self, op: &str) -> Result<(&Context, &Term), CoreError> {
        let (ctx, terms) = self
            .op_map
            .get(op)
            .ok_or_else(|| CoreError::UnmappedSymbol(op.to_owned()))?;
        match terms.as_slice() {
            [t] => Ok((ctx, t)),
            _ => Err(CoreError::CollapsesToUnit {
                term: format!("{}(...)", op),
            }),
        }
    }

    /// Expands a source context: a variable of a sort mapped to a k-factor
    /// product becomes k variables (keeping its name when k = 1, named
    /// `v$1..v$k` otherwise, and vanishing when k = 0). Returns the expanded
    /// context together with the per-variable expansion.
    pub fn expand_context(
        &self,
        ctx: &Context,
    ) -> Result<(Context, BTreeMap<String, Vec<String>>), CoreError> {
        let mut out = Context::empty();
        let mut expansion = BTreeMap::new();
        for (v, s) in ctx.bindings() {
            let prod = self.sort_image(s)?.clone();
            let names: Vec<String> = match prod.len() {
                0 => vec![],
                1 => vec![v.clone()],
                k => (1..=k).map(|i| format!("{}${}", v, i)).collect(),
            };
            for (n, sort) in names.iter().zip(prod.factors()) {
                out.push(n.clone(), sort.clone());
            }
            expansion.insert(v.clone(), names);
        }
        Ok((out, expansion))
    }

    /// Translates a term to the tuple of target terms it denotes, one per
    /// factor of the image of its sort.
    fn translate(
        &self,
        expansion: &BTreeMap<String, Vec<String>>,
        t: &Term,
    ) -> Result<Vec<Term>, CoreError> {
        match t {
            Term::Var(v) => expansion
                .get(v)
                .map(|names| names.iter().map(Term::var).collect())
                .ok_or_else(|| CoreError::UnboundVariable { var: v.clone() }),
            Term::App(op, args) => {
                let (img_ctx, img_terms) = self
                    .op_map
                    .get(op)
                    .ok_or_else(|| CoreError::UnmappedSymbol(op.clone()))?;
                let mut flat = vec![];
                for a in args {
                    flat.extend(self.translate(expansion, a)?);
                }
                if flat.len() != img_ctx.len() {
                    return Err(CoreError::ImageArityMismatch {
                        op: op.clone(),
                        expected: img_ctx.len(),
                        found: flat.len(),
                    });
                }
                let binding: BTreeMap<String, Term> = img_ctx
                    .bindings()
                    .iter()
                    .map(|(v, _)| v.clone())
                    .zip(flat)
                    .collect();
                Ok(img_terms.iter().map(|it| substitute(it, &binding)).collect())
            }
        }
    }

    /// Applies the morphism to a tuple of terms over a shared context.
    pub fn apply_tuple(
        &self,
        ctx: &Context,
        terms: &[Term],
    ) -> Result<(Context, Vec<Vec<Term>>), CoreError> {
        let (out_ctx, expansion) = self.expand_context(ctx)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            out.push(self.translate(&expansion, t)?);
        }
        Ok((out_ctx, out))
    }

    /// Applies the morphism to a single term whose sort has a one-sort
    /// image, yielding the image context and image term.
    pub fn apply(&self, ctx: &Context, t: &Term) -> Result<(Context, Term), CoreError> {
        let (out_ctx, mut tuples) = self.apply_tuple(ctx, std::slice::from_ref(t))?;
        let tuple = tuples.pop().expect("one tuple per input term");
        match <[Term; 1]>::try_from(tuple) {
            Ok([term]) => Ok((out_ctx, term)),
            Err(_) => Err(CoreError::CollapsesToUnit {
                term: t.to_string(),
            }),
        }
    }

    /// Checks typing: total sort and op maps, image contexts matching the
    /// expanded domains, and well-typed image tuples. Equation preservation
    /// is a semantic property and is checked by the model layer instead.
    pub fn validate(&self) -> Result<(), CoreError> {
        for s in &self.source.sorts {
            let img = self.sort_image(s)?;
            for f in img.factors() {
                if !self.target.has_sort(f) {
                    return Err(CoreError::UnmappedSymbol(f.to_string()));
                }
            }
        }
        for op in &self.source.ops {
            let (ctx, terms) = self
                .op_map
                .get(&op.name)
                .ok_or_else(|| CoreError::UnmappedSymbol(op.name.clone()))?;
            if !ctx.names_distinct() {
                return Err(CoreError::EndpointMismatch(format!(
                    "image context of op `{}` repeats a variable",
                    op.name
                )));
            }
            let expected_dom = self.product_image(&op.dom)?;
            let ctx_sorts: Vec<&SortName> = ctx.bindings().iter().map(|(_, s)| s).collect();
            if ctx_sorts.len() != expected_dom.len()
                || ctx_sorts
                    .iter()
                    .zip(expected_dom.factors())
                    .any(|(a, b)| *a != b)
            {
                return Err(CoreError::EndpointMismatch(format!(
                    "image context {} of op `{}` does not match expanded domain ({})",
                    ctx, op.name, expected_dom
                )));
            }
            let expected_cod = self.sort_image(&op.cod)?.clone();
            if terms.len() != expected_cod.len() {
                return Err(CoreError::ImageArityMismatch {
                    op: op.name.clone(),
                    expected: expected_cod.len(),
                    found: terms.len(),
                });
            }
            for (t, sort) in terms.iter().zip(expected_cod.factors()) {
                let found = typecheck_term(ctx, t, &self.target)?;
                if &found != sort {
                    return Err(CoreError::SortMismatch {
                        expected: sort.clone(),
                        found,
                        term: t.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Checks typing plus the decoration condition: every pure source op
    /// must map to a tuple of pure target terms.
    pub fn validate_decorated(&self) -> Result<(), CoreError> {
        self.validate()?;
        for op in self.source.pure_ops() {
            let (ctx, terms) = &self.op_map[&op.name];
            for t in terms {
                if !is_pure_term(ctx, t, &self.target)? {
                    return Err(CoreError::NotDecorated {
                        op: op.name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Generator-wise comparison up to renaming of image-context variables.
    pub fn generator_equal(&self, other: &TheoryMorphism) -> bool {
        if self.sort_map != other.sort_map {
            return false;
        }
        if self.op_map.len() != other.op_map.len() {
            return false;
        }
        self.op_map.iter().all(|(op, img)| {
            other
                .op_map
                .get(op)
                .is_some_and(|img2| alpha_normalize(img) == alpha_normalize(img2))
        })
    }
}

/// Composition `g` after `f`. Sort maps compose by flattening; op images
/// compose by applying `g` to the image tuples of `f`.
pub fn compose_morphisms(
    g: &TheoryMorphism,
    f: &TheoryMorphism,
) -> Result<TheoryMorphism, CoreError> {
    if f.target != g.source {
        return Err(CoreError::EndpointMismatch(format!(
            "`{}` ends at `{}` but `{}` starts at `{}`",
            f.name, f.target.name, g.name, g.source.name
        )));
    }
    let mut sort_map = BTreeMap::new();
    for s in &f.source.sorts {
        sort_map.insert(s.clone(), g.product_image(f.sort_image(s)?)?);
    }
    let mut op_map = BTreeMap::new();
    for op in &f.source.ops {
        let (ctx, terms) = f
            .op_map
            .get(&op.name)
            .ok_or_else(|| CoreError::UnmappedSymbol(op.name.clone()))?;
        let (out_ctx, tuples) = g.apply_tuple(ctx, terms)?;
        let flat: Vec<Term> = tuples.into_iter().flatten().collect();
        op_map.insert(op.name.clone(), (out_ctx, flat));
    }
    Ok(TheoryMorphism {
        name: format!("{}_after_{}", g.name, f.name),
        source: f.source.clone(),
        target: g.target.clone(),
        sort_map,
        op_map,
    })
}

/// Renames context variables positionally to `#1, #2, ...` so that image
/// comparison ignores variable naming. `#` cannot occur in identifiers.
fn alpha_normalize(img: &(Context, Vec<Term>)) -> (Vec<SortName>, Vec<Term>) {
    let (ctx, terms) = img;
    let renaming: BTreeMap<String, Term> = ctx
        .bindings()
        .iter()
        .enumerate()
        .map(|(i, (v, _))| (v.clone(), Term::var(format!("#{}", i + 1))))
        .collect();
    (
        ctx.bindings().iter().map(|(_, s)| s.clone()).collect(),
        terms.iter().map(|t| substitute(t, &renaming)).collect(),
    )
}

/// One component of a presented 2-cell: a tuple of terms over the context
/// that expands a single variable of the component's sort along the source
/// morphism.
#[derive(Clone, PartialEq, Debug)]
pub struct CellComponent {
    pub ctx: Context,
    pub terms: Vec<Term>,
}

/// A 2-cell between two parallel morphisms, presented by one component per
/// source sort.
#[derive(Clone, PartialEq, Debug)]
pub struct NatTransPresentation {
    pub source_mor: TheoryMorphism,
    pub target_mor: TheoryMorphism,
    pub components: BTreeMap<SortName, CellComponent>,
}

impl NatTransPresentation {
    /// The identity 2-cell on a morphism.
    pub fn identity(m: &TheoryMorphism) -> Result<NatTransPresentation, CoreError> {
        let mut components = BTreeMap::new();
        for s in &m.source.sorts {
            let single = Context::new(vec![("x1".to_owned(), s.clone())]);
            let (ctx, _) = m.expand_context(&single)?;
            let terms = ctx.bindings().iter().map(|(v, _)| Term::var(v)).collect();
            components.insert(s.clone(), CellComponent { ctx, terms });
        }
        Ok(NatTransPresentation {
            source_mor: m.clone(),
            target_mor: m.clone(),
            components,
        })
    }

    /// Endpoint and typing checks: for each source sort `X`, the component
    /// context must present the image of `X` under the source morphism and
    /// the component tuple must be typed at the image of `X` under the
    /// target morphism.
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.source_mor.source != self.target_mor.source
            || self.source_mor.target != self.target_mor.target
        {
            return Err(CoreError::EndpointMismatch(
                "2-cell endpoints disagree".to_owned(),
            ));
        }
        let spec = &self.source_mor.target;
        for s in &self.source_mor.source.sorts {
            let comp = self
                .components
                .get(s)
                .ok_or_else(|| CoreError::UnmappedSymbol(s.to_string()))?;
            if !comp.ctx.names_distinct() {
                return Err(CoreError::EndpointMismatch(format!(
                    "component context at `{}` repeats a variable",
                    s
                )));
            }
            let src_img = self.source_mor.sort_image(s)?;
            let ctx_sorts: Vec<&SortName> = comp.ctx.bindings().iter().map(|(_, t)| t).collect();
            if ctx_sorts.len() != src_img.len()
                || ctx_sorts.iter().zip(src_img.factors()).any(|(a, b)| *a != b)
            {
                return Err(CoreError::EndpointMismatch(format!(
                    "component context at `{}` does not present its source image",
                    s
                )));
            }
            let tgt_img = self.target_mor.sort_image(s)?;
            if comp.terms.len() != tgt_img.len() {
                return Err(CoreError::ImageArityMismatch {
                    op: format!("component at {}", s),
                    expected: tgt_img.len(),
                    found: comp.terms.len(),
                });
            }
            for (t, sort) in comp.terms.iter().zip(tgt_img.factors()) {
                let found = typecheck_term(&comp.ctx, t, spec)?;
                if &found != sort {
                    return Err(CoreError::SortMismatch {
                        expected: sort.clone(),
                        found,
                        term: t.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Whiskers the 2-cell with a morphism out of its target theory.
    pub fn whisker(&self, h: &TheoryMorphism) -> Result<NatTransPresentation, CoreError> {
        let mut components = BTreeMap::new();
        for (s, comp) in &self.components {
            let (ctx, tuples) = h.apply_tuple(&comp.ctx, &comp.terms)?;
            components.insert(
                s.clone(),
                CellComponent {
                    ctx,
                    terms: tuples.into_iter().flatten().collect(),
                },
            );
        }
        Ok(NatTransPresentation {
            source_mor: compose_morphisms(h, &self.source_mor)?,
            target_mor: compose_morphisms(h, &self.target_mor)?,
            components,
        })
    }

    /// Componentwise comparison up to renaming of context variables.
    pub fn component_equal(&self, other: &NatTransPresentation) -> bool {
        if self.components.len() != other.components.len() {
            return false;
        }
        self.components.iter().all(|(s, comp)| {
            other.components.get(s).is_some_and(|comp2| {
                alpha_normalize(&(comp.ctx.clone(), comp.terms.clone()))
                    == alpha_normalize(&(comp2.ctx.clone(), comp2.terms.clone()))
            })
        })
    }
}
