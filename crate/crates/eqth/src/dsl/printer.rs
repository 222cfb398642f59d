use std::fmt::Write;

use crate::core::{DecoratedSpec, TheoryMorphism};
use crate::semantics::FinModel;

/// Prints the canonical form of a specification: declaration order, one
/// item per line, the parameter sort and constant rendered as `param`
/// items at their declared positions.
pub fn print_spec(spec: &DecoratedSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "spec {} {{", spec.name);
    for s in &spec.sorts {
        if Some(s) == spec.param_sort.as_ref() {
            let _ = writeln!(out, "  param sort {}", s);
        } else {
            let _ = writeln!(out, "  sort {}", s);
        }
    }
    for op in &spec.ops {
        if Some(&op.name) == spec.param_const.as_ref() {
            let _ = writeln!(out, "  param const {} : {}", op.name, op.cod);
            continue;
        }
        let pure = if op.pure { "pure " } else { "" };
        if op.dom.is_empty() {
            let _ = writeln!(out, "  {}op {} : -> {}", pure, op.name, op.cod);
        } else {
            let _ = writeln!(out, "  {}op {} : {} -> {}", pure, op.name, op.dom, op.cod);
        }
    }
    for eq in &spec.eqs {
        let _ = writeln!(out, "  eq {} {} = {}", eq.context, eq.lhs, eq.rhs);
    }
    out.push_str("}\n");
    out
}

/// Prints a finite model: carriers then tables, both in the declaration
/// order of the model's specification, table entries row-major under the
/// declared element order.
pub fn print_model(model: &FinModel) -> String {
    let mut out = String::new();
    let partial = if model.partial { " partial" } else { "" };
    let _ = writeln!(out, "model {} for {}{} {{", model.name, model.spec.name, partial);
    for s in &model.spec.sorts {
        if let Some(carrier) = model.carriers.get(s) {
            if carrier.is_empty() {
                let _ = writeln!(out, "  sort {} = {{ }}", s);
            } else {
                let _ = writeln!(out, "  sort {} = {{ {} }}", s, carrier.join(", "));
            }
        }
    }
    for op in &model.spec.ops {
        let Some(table) = model.tables.get(&op.name) else {
            continue;
        };
        let carriers: Vec<&Vec<String>> = op
            .dom
            .factors()
            .iter()
            .map(|s| &model.carriers[s])
            .collect();
        let cod = &model.carriers[&op.cod];
        let mut entries = vec![];
        for (i, tuple) in table.inputs().enumerate() {
            let labels: Vec<&str> = tuple
                .iter()
                .zip(&carriers)
                .map(|(&e, c)| c[e].as_str())
                .collect();
            entries.push(format!(
                "({}) -> {}",
                labels.join(", "),
                cod[table.data()[i]]
            ));
        }
        if entries.is_empty() {
            let _ = writeln!(out, "  op {} = {{ }}", op.name);
        } else {
            let _ = writeln!(out, "  op {} = {{ {} }}", op.name, entries.join(", "));
        }
    }
    out.push_str("}\n");
    out
}

/// Prints a morphism: sort images then op images, in the declaration order
/// of the source specification.
pub fn print_morphism(m: &TheoryMorphism) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "morphism {} : {} -> {} {{", m.name, m.source.name, m.target.name);
    for s in &m.source.sorts {
        match m.sort_map.get(s) {
            Some(img) if img.is_empty() => {
                let _ = writeln!(out, "  sort {} -> ()", s);
            }
            Some(img) => {
                let _ = writeln!(out, "  sort {} -> {}", s, img);
            }
            None => {}
        }
    }
    for op in &m.source.ops {
        let Some((ctx, terms)) = m.op_map.get(&op.name) else {
            continue;
        };
        let vars: Vec<&str> = ctx.bindings().iter().map(|(v, _)| v.as_str()).collect();
        let rhs = match terms.as_slice() {
            [t] => t.to_string(),
            many => format!(
                "({})",
                many.iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        };
        let _ = writeln!(out, "  op {}({}) -> {}", op.name, vars.join(", "), rhs);
    }
    out.push_str("}\n");
    out
}
