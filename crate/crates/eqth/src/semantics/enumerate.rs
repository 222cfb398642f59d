use std::collections::BTreeMap;

use crate::core::{DecoratedSpec, OpDecl, SortName};

use super::{check_model, tuples, FinModel, OpTable, SemanticsError};

/// Default cap on the number of candidate tables visited by one search.
pub const DEFAULT_TABLE_CAP: u64 = 10_000_000;

fn pow_capped(base: u128, exp: usize, cap: u128) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = out.saturating_mul(base);
        if out > cap {
            return out;
        }
    }
    out
}

/// The number of candidate tables for one op under the given carriers.
fn op_candidates(
    op: &OpDecl,
    sizes: &BTreeMap<SortName, usize>,
    cap: u128,
) -> u128 {
    let dom: usize = op.dom.factors().iter().map(|s| sizes[s]).product();
    pow_capped(sizes[&op.cod] as u128, dom, cap)
}

/// Checks that every symbol interpreted by `base` exists in `spec` with the
/// same signature, so that `base` pins down a sub-interpretation.
fn check_base(spec: &DecoratedSpec, base: &FinModel) -> Result<(), SemanticsError> {
    for sort in base.carriers.keys() {
        if !spec.has_sort(sort) {
            return Err(SemanticsError::SpecMismatch(format!(
                "base interprets sort `{}` unknown to `{}`",
                sort, spec.name
            )));
        }
    }
    for op_name in base.tables.keys() {
        let in_spec = spec.op(op_name);
        let in_base = base.spec.op(op_name);
        match (in_spec, in_base) {
            (Some(a), Some(b)) if a.dom == b.dom && a.cod == b.cod => {}
            _ => {
                return Err(SemanticsError::SpecMismatch(format!(
                    "base interprets op `{}` with a different signature",
                    op_name
                )))
            }
        }
    }
    Ok(())
}

/// Exhaustive, duplicate-free enumeration of the total models of `spec`
/// that extend `base`, with carriers of sorts not fixed by the base ranging
/// over sizes `0..=bound`. The order is deterministic: carrier sizes first,
/// then lexicographic over op tables under the declared element order.
///
/// The total number of candidate tables is computed up front and the search
/// refuses to start past `cap`.
pub fn models_extending(
    spec: &DecoratedSpec,
    base: Option<&FinModel>,
    bounds: &BTreeMap<SortName, usize>,
    cap: u64,
) -> Result<Vec<FinModel>, SemanticsError> {
    if let Some(base) = base {
        check_base(spec, base)?;
    }
    let fixed_carriers: BTreeMap<SortName, Vec<String>> = base
        .map(|b| b.carriers.clone())
        .unwrap_or_default();
    let fixed_tables: BTreeMap<String, OpTable> =
        base.map(|b| b.tables.clone()).unwrap_or_default();

    let free_sorts: Vec<&SortName> = spec
        .sorts
        .iter()
        .filter(|s| !fixed_carriers.contains_key(s))
        .collect();
    for s in &free_sorts {
        if !bounds.contains_key(s) {
            return Err(SemanticsError::MissingBound((*s).clone()));
        }
    }
    let free_ops: Vec<&OpDecl> = spec
        .ops
        .iter()
        .filter(|o| !fixed_tables.contains_key(&o.name))
        .collect();

    // size assignments for the free sorts, smallest first
    let size_choices: Vec<usize> = free_sorts.iter().map(|s| bounds[s] + 1).collect();
    let assignments: Vec<Vec<usize>> = tuples(&size_choices).collect();

    // overflow check before any table is built
    let cap_u128 = cap as u128;
    let mut total: u128 = 0;
    for assignment in &assignments {
        let mut sizes: BTreeMap<SortName, usize> = fixed_carriers
            .iter()
            .map(|(s, c)| (s.clone(), c.len()))
            .collect();
        for (s, n) in free_sorts.iter().zip(assignment) {
            sizes.insert((*s).clone(), *n);
        }
        let mut here: u128 = 1;
        for op in &free_ops {
            here = here.saturating_mul(op_candidates(op, &sizes, cap_u128));
        }
        total = total.saturating_add(here);
        if total > cap_u128 {
            return Err(SemanticsError::SearchSpaceOverflow {
                candidates: total,
                cap,
            });
        }
    }

    let mut out = vec![];
    for assignment in &assignments {
        let mut carriers = fixed_carriers.clone();
        for (s, n) in free_sorts.iter().zip(assignment) {
            carriers.insert(
                (*s).clone(),
                (0..*n).map(|i| format!("{}{}", s, i)).collect(),
            );
        }
        let sizes: BTreeMap<SortName, usize> =
            carriers.iter().map(|(s, c)| (s.clone(), c.len())).collect();

        // a table candidate per free op: shapes and codomain sizes
        let shapes: Vec<Vec<usize>> = free_ops
            .iter()
            .map(|o| o.dom.factors().iter().map(|s| sizes[s]).collect())
            .collect();
        let cods: Vec<usize> = free_ops.iter().map(|o| sizes[&o.cod]).collect();
        let lens: Vec<usize> = shapes.iter().map(|sh| sh.iter().product()).collect();

        // a nullary-or-larger op with an empty codomain and a nonempty
        // domain product admits no table at all
        if lens
            .iter()
            .zip(&cods)
            .any(|(&len, &cod)| len > 0 && cod == 0)
        {
            continue;
        }

        let mut candidate: Vec<Vec<usize>> = lens.iter().map(|&l| vec![0; l]).collect();
        'tables: loop {
            let mut tables = fixed_tables.clone();
            for ((op, shape), data) in free_ops.iter().zip(&shapes).zip(&candidate) {
                tables.insert(op.name.clone(), OpTable::new(shape.clone(), data.clone())?);
            }
            let model = FinModel {
                name: String::new(),
                spec: spec.clone(),
                carriers: carriers.clone(),
                tables,
                partial: false,
            };
            if check_model(&model)?.is_satisfied() {
                out.push(model);
            }

            // advance the concatenated tables like a mixed-radix counter,
            // last table fastest
            for i in (0..candidate.len()).rev() {
                for j in (0..candidate[i].len()).rev() {
                    candidate[i][j] += 1;
                    if candidate[i][j] < cods[i] {
                        continue 'tables;
                    }
                    candidate[i][j] = 0;
                }
            }
            break;
        }
    }
    for (i, m) in out.iter_mut().enumerate() {
        m.name = format!("{}_n{}", spec.name, i);
    }
    Ok(out)
}
