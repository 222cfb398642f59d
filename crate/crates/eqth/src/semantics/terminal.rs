use std::collections::BTreeMap;

use crate::construct::ParamResult;
use crate::core::{OpDecl, SortName};

use super::{
    check_model, models_extending, tuples, Elem, FinModel, ModelMorphism, OpTable,
    SemanticsError,
};

/// One candidate interpretation of the parameter: a function table per
/// non-pure operation of the source specification, over the base carriers.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionFamily {
    pub label: String,
    pub tables: BTreeMap<String, OpTable>,
}

fn check_extension_base(pr: &ParamResult, base: &FinModel) -> Result<(), SemanticsError> {
    for s in &pr.source.sorts {
        base.carrier(s)?;
    }
    for op in pr.source.pure_ops() {
        base.table(&op.name)?;
    }
    Ok(())
}

fn family_label(
    non_pure: &[&OpDecl],
    tables: &BTreeMap<String, OpTable>,
    base: &FinModel,
) -> Result<String, SemanticsError> {
    if non_pure.is_empty() {
        return Ok("unit".to_owned());
    }
    let mut parts = vec![];
    for op in non_pure {
        let cod_labels = base.carrier(&op.cod)?;
        let outs: Vec<&str> = tables[&op.name]
            .data()
            .iter()
            .map(|&e| cod_labels[e].as_str())
            .collect();
        let mut part = op.name.clone();
        for o in outs {
            part.push('_');
            part.push_str(o);
        }
        parts.push(part);
    }
    Ok(parts.join("__"))
}

/// Enumerates every family of operation tables over the base that
/// satisfies all translated equations when the parameter is interpreted as
/// that family. The test plugs the family into a probe model whose
/// parameter carrier is a singleton.
pub fn extension_families(
    pr: &ParamResult,
    base: &FinModel,
    cap: u64,
) -> Result<Vec<ExtensionFamily>, SemanticsError> {
    check_extension_base(pr, base)?;
    let non_pure: Vec<&OpDecl> = pr.source.non_pure_ops().collect();
    let shapes: Vec<Vec<usize>> = non_pure
        .iter()
        .map(|o| {
            o.dom
                .factors()
                .iter()
                .map(|s| base.carrier_len(s))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let cods: Vec<usize> = non_pure
        .iter()
        .map(|o| base.carrier_len(&o.cod))
        .collect::<Result<_, _>>()?;
    let lens: Vec<usize> = shapes.iter().map(|sh| sh.iter().product()).collect();

    let mut total: u128 = 1;
    for (&len, &cod) in lens.iter().zip(&cods) {
        let mut here: u128 = 1;
        for _ in 0..len {
            here = here.saturating_mul(cod as u128);
        }
        total = total.saturating_mul(here);
    }
    if total > cap as u128 {
        return Err(SemanticsError::SearchSpaceOverflow {
            candidates: total,
            cap,
        });
    }
    if lens.iter().zip(&cods).any(|(&len, &cod)| len > 0 && cod == 0) {
        return Ok(vec![]);
    }

    let a_sort = pr.param_sort().clone();
    let mut probe_carriers = BTreeMap::new();
    for s in &pr.source.sorts {
        probe_carriers.insert(s.clone(), base.carrier(s)?.clone());
    }
    probe_carriers.insert(a_sort, vec!["probe".to_owned()]);
    let pure_tables: BTreeMap<String, OpTable> = pr
        .source
        .pure_ops()
        .map(|op| Ok::<_, SemanticsError>((op.name.clone(), base.table(&op.name)?.clone())))
        .collect::<Result<_, _>>()?;

    let mut families = vec![];
    let mut candidate: Vec<Vec<Elem>> = lens.iter().map(|&l| vec![0; l]).collect();
    'families: loop {
        let mut tables = BTreeMap::new();
        for ((op, shape), data) in non_pure.iter().zip(&shapes).zip(&candidate) {
            tables.insert(op.name.clone(), OpTable::new(shape.clone(), data.clone())?);
        }
        // probe: the parameter carrier is the singleton holding this family
        let mut probe_tables = pure_tables.clone();
        for (op, shape) in non_pure.iter().zip(&shapes) {
            let mut probe_shape = Vec::with_capacity(shape.len() + 1);
            probe_shape.push(1);
            probe_shape.extend(shape.iter().copied());
            probe_tables.insert(
                pr.op_link[&op.name].clone(),
                OpTable::new(probe_shape, tables[&op.name].data().to_vec())?,
            );
        }
        let probe = FinModel {
            name: "probe".to_owned(),
            spec: pr.param_spec.clone(),
            carriers: probe_carriers.clone(),
            tables: probe_tables,
            partial: false,
        };
        if check_model(&probe)?.is_satisfied() {
            families.push(ExtensionFamily {
                label: family_label(&non_pure, &tables, base)?,
                tables,
            });
        }

        for i in (0..candidate.len()).rev() {
            for j in (0..candidate[i].len()).rev() {
                candidate[i][j] += 1;
                if candidate[i][j] < cods[i] {
                    continue 'families;
                }
                candidate[i][j] = 0;
            }
        }
        break;
    }
    Ok(families)
}

/// Builds the terminal model of the parameterized specification over the
/// base: its parameter carrier is the set of all equation-satisfying
/// operation families, and each parameterized op applies the family chosen
/// by its first argument. The result is checked before being returned.
pub fn terminal_extension(
    pr: &ParamResult,
    base: &FinModel,
    cap: u64,
) -> Result<FinModel, SemanticsError> {
    let families = extension_families(pr, base, cap)?;
    let non_pure: Vec<&OpDecl> = pr.source.non_pure_ops().collect();

    let mut carriers = BTreeMap::new();
    for s in &pr.source.sorts {
        carriers.insert(s.clone(), base.carrier(s)?.clone());
    }
    carriers.insert(
        pr.param_sort().clone(),
        families.iter().map(|f| f.label.clone()).collect(),
    );

    let mut tables: BTreeMap<String, OpTable> = pr
        .source
        .pure_ops()
        .map(|op| Ok::<_, SemanticsError>((op.name.clone(), base.table(&op.name)?.clone())))
        .collect::<Result<_, _>>()?;
    for op in &non_pure {
        let dom_shape: Vec<usize> = op
            .dom
            .factors()
            .iter()
            .map(|s| base.carrier_len(s))
            .collect::<Result<_, _>>()?;
        let mut shape = Vec::with_capacity(dom_shape.len() + 1);
        shape.push(families.len());
        shape.extend(dom_shape);
        // f'(alpha, args) = the table of the family alpha; row-major layout
        // makes this a plain concatenation
        let mut data = vec![];
        for family in &families {
            data.extend_from_slice(family.tables[&op.name].data());
        }
        tables.insert(pr.op_link[&op.name].clone(), OpTable::new(shape, data)?);
    }

    let model = FinModel {
        name: format!("{}_terminal", pr.param_spec.name),
        spec: pr.param_spec.clone(),
        carriers,
        tables,
        partial: false,
    };
    model.validate()?;
    let report = check_model(&model)?;
    if !report.is_satisfied() {
        return Err(SemanticsError::InvalidArgument(format!(
            "terminal extension fails its own equations ({} instances)",
            report.failures.len()
        )));
    }
    Ok(model)
}

/// The family realized by one parameter element of a model of the
/// parameterized specification.
fn family_signature(
    pr: &ParamResult,
    model: &FinModel,
    elem: Elem,
) -> Result<BTreeMap<String, OpTable>, SemanticsError> {
    let mut out = BTreeMap::new();
    for op in pr.source.non_pure_ops() {
        let table = model.table(&pr.op_link[&op.name])?;
        let dom_shape: Vec<usize> = op
            .dom
            .factors()
            .iter()
            .map(|s| model.carrier_len(s))
            .collect::<Result<_, _>>()?;
        let mut data = vec![];
        for tuple in tuples(&dom_shape) {
            let mut args = Vec::with_capacity(tuple.len() + 1);
            args.push(elem);
            args.extend(tuple);
            data.push(table.get(&args));
        }
        out.insert(op.name.clone(), OpTable::new(dom_shape, data)?);
    }
    Ok(out)
}

/// Computes the canonical morphism from `n` to `candidate` over their
/// shared base: identity components off the parameter sort, and at the
/// parameter sort each element maps to the candidate element realizing the
/// same operation family. Fails when some family of `n` is missing from the
/// candidate or when the result is not natural.
pub fn unique_morphism_to(
    candidate: &FinModel,
    n: &FinModel,
    pr: &ParamResult,
) -> Result<ModelMorphism, SemanticsError> {
    if candidate.spec != pr.param_spec || n.spec != pr.param_spec {
        return Err(SemanticsError::SpecMismatch(
            "both models must interpret the parameterized specification".to_owned(),
        ));
    }
    let a_sort = pr.param_sort().clone();
    for s in &pr.source.sorts {
        if candidate.carrier(s)? != n.carrier(s)? {
            return Err(SemanticsError::SpecMismatch(format!(
                "models disagree on the base carrier of `{}`",
                s
            )));
        }
    }
    let cand_sigs: Vec<BTreeMap<String, OpTable>> = (0..candidate.carrier_len(&a_sort)?)
        .map(|alpha| family_signature(pr, candidate, alpha))
        .collect::<Result<_, _>>()?;

    let mut at_a = vec![];
    for nu in 0..n.carrier_len(&a_sort)? {
        let sig = family_signature(pr, n, nu)?;
        match cand_sigs.iter().position(|s| s == &sig) {
            Some(alpha) => at_a.push(alpha),
            None => {
                return Err(SemanticsError::NoMorphism(format!(
                    "the family of `{}` is not an element of the candidate parameter carrier",
                    n.carrier(&a_sort)?[nu]
                )))
            }
        }
    }

    let mut components = BTreeMap::new();
    components.insert(a_sort, at_a);
    for s in &pr.source.sorts {
        components.insert(s.clone(), (0..n.carrier_len(s)?).collect());
    }
    let morphism = ModelMorphism {
        source: n.clone(),
        target: candidate.clone(),
        components,
    };
    morphism.validate()?;
    Ok(morphism)
}

/// The outcome of checking terminality of a candidate model.
#[derive(Clone, Debug)]
pub struct TerminalityReport {
    pub holds: bool,
    pub extensions_checked: usize,
    pub witnesses: Vec<ModelMorphism>,
    pub failures: Vec<String>,
}

/// Checks that every enumerated extension of the base admits exactly one
/// morphism to the candidate over the base: the canonical morphism must
/// exist and be natural, and the exhaustive search over parameter
/// components must find no other.
pub fn check_terminality(
    candidate: &FinModel,
    pr: &ParamResult,
    base: &FinModel,
    bounds: &BTreeMap<SortName, usize>,
    cap: u64,
) -> Result<TerminalityReport, SemanticsError> {
    check_extension_base(pr, base)?;
    let a_sort = pr.param_sort().clone();
    let extensions = models_extending(&pr.param_spec, Some(base), bounds, cap)?;
    let mut report = TerminalityReport {
        holds: true,
        extensions_checked: extensions.len(),
        witnesses: vec![],
        failures: vec![],
    };
    for n in &extensions {
        match unique_morphism_to(candidate, n, pr) {
            Ok(m) => report.witnesses.push(m),
            Err(SemanticsError::NoMorphism(why))
            | Err(SemanticsError::NaturalityFailure { op: _, at: why }) => {
                report.holds = false;
                report.failures.push(format!("{}: {}", n.name, why));
                continue;
            }
            Err(e) => return Err(e),
        }
        // exhaustive uniqueness over candidate parameter components
        let n_a = n.carrier_len(&a_sort)?;
        let cand_a = candidate.carrier_len(&a_sort)?;
        let space = (0..n_a).fold(1u128, |acc, _| acc.saturating_mul(cand_a as u128));
        if space > cap as u128 {
            return Err(SemanticsError::SearchSpaceOverflow {
                candidates: space,
                cap,
            });
        }
        let mut valid = 0usize;
        if cand_a == 0 && n_a > 0 {
            valid = 0;
        } else {
            let mut at_a = vec![0usize; n_a];
            'functions: loop {
                let mut components = BTreeMap::new();
                components.insert(a_sort.clone(), at_a.clone());
                for s in &pr.source.sorts {
                    components.insert(s.clone(), (0..n.carrier_len(s)?).collect());
                }
                let m = ModelMorphism {
                    source: n.clone(),
                    target: candidate.clone(),
                    components,
                };
                if m.validate().is_ok() {
                    valid += 1;
                }
                for i in (0..at_a.len()).rev() {
                    at_a[i] += 1;
                    if at_a[i] < cand_a {
                        continue 'functions;
                    }
                    at_a[i] = 0;
                }
                break;
            }
        }
        if valid != 1 {
            report.holds = false;
            report
                .failures
                .push(format!("{}: {} morphisms over the base", n.name, valid));
        }
    }
    Ok(report)
}
