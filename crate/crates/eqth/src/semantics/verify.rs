use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::construct::{
    add_parameter, erasure_morphism, parameterize, passing_morphism, ParamResult,
};
use crate::core::{DecoratedSpec, NatTransPresentation, SortName, TheoryMorphism};

use super::{
    check_model, models_extending, reduct_unchecked, terminal_extension, tuples, Elem,
    FinModel, ModelMorphism, OpTable, SemanticsError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// One record of a verification run: a named check with optional
/// cardinalities on both sides of a bijection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: CheckStatus,
    pub left: Option<u64>,
    pub right: Option<u64>,
    pub detail: String,
}

impl CheckRecord {
    pub fn bijection(name: impl Into<String>, left: u64, right: u64, ok: bool, detail: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            left: Some(left),
            right: Some(right),
            detail: detail.into(),
        }
    }

    pub fn plain(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            left: None,
            right: None,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
        };
        write!(f, "[{}] {}", status, self.name)?;
        if let (Some(l), Some(r)) = (self.left, self.right) {
            write!(f, ": {} <-> {}", l, r)?;
        }
        if !self.detail.is_empty() {
            write!(f, " -- {}", self.detail)?;
        }
        Ok(())
    }
}

/// An ordered list of check records; renders one line per record.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub records: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: VerifyReport) {
        self.records.extend(other.records);
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.status == CheckStatus::Pass)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{}", r)?;
        }
        Ok(())
    }
}

fn construct_err(e: crate::construct::ConstructError) -> SemanticsError {
    SemanticsError::InvalidArgument(e.to_string())
}

/// The model of the source specification induced by one parameter element
/// of a model of the parameterized specification, together with the model
/// morphism that tags the reduct of the induced model with that element.
pub fn param_passing_model(
    pr: &ParamResult,
    m_a: &FinModel,
    alpha: Elem,
) -> Result<(FinModel, ModelMorphism), SemanticsError> {
    if m_a.spec != pr.param_spec {
        return Err(SemanticsError::SpecMismatch(
            "the model does not interpret the parameterized specification".to_owned(),
        ));
    }
    let a_sort = pr.param_sort().clone();
    if alpha >= m_a.carrier_len(&a_sort)? {
        return Err(SemanticsError::InvalidArgument(format!(
            "parameter element #{} is out of range",
            alpha
        )));
    }

    let mut carriers = BTreeMap::new();
    for s in &pr.source.sorts {
        carriers.insert(s.clone(), m_a.carrier(s)?.clone());
    }
    let mut tables = BTreeMap::new();
    for op in &pr.source.ops {
        if op.pure {
            tables.insert(op.name.clone(), m_a.table(&op.name)?.clone());
        } else {
            let table = m_a.table(&pr.op_link[&op.name])?;
            let shape: Vec<usize> = op
                .dom
                .factors()
                .iter()
                .map(|s| m_a.carrier_len(s))
                .collect::<Result<_, _>>()?;
            let mut data = vec![];
            for tuple in tuples(&shape) {
                let mut args = Vec::with_capacity(tuple.len() + 1);
                args.push(alpha);
                args.extend(tuple);
                data.push(table.get(&args));
            }
            tables.insert(op.name.clone(), OpTable::new(shape, data)?);
        }
    }
    let model = FinModel {
        name: format!("{}_at_{}", pr.source.name, m_a.carrier(&a_sort)?[alpha]),
        spec: pr.source.clone(),
        carriers,
        tables,
        partial: false,
    };
    let report = check_model(&model)?;
    if !report.is_satisfied() {
        return Err(SemanticsError::InvalidArgument(format!(
            "induced model violates {} equation instances, which contradicts the model assumption on `{}`",
            report.failures.len(),
            m_a.name
        )));
    }

    let r = reduct_unchecked(&model, &erasure_morphism(pr))?;
    let mut components = BTreeMap::new();
    components.insert(a_sort, vec![alpha]);
    for s in &pr.source.sorts {
        components.insert(s.clone(), (0..r.carrier_len(s)?).collect());
    }
    let morphism = ModelMorphism {
        source: r,
        target: m_a.clone(),
        components,
    };
    morphism.validate()?;
    Ok((model, morphism))
}

/// Verifies the parameter adding bijection for one total model of the
/// parameterized specification: the models of the specification with
/// parameter extending it correspond to its parameter elements by
/// evaluation at the constant.
pub fn verify_bijection_adding(m_a: &FinModel, cap: u64) -> Result<VerifyReport, SemanticsError> {
    if !m_a.is_total() {
        return Err(SemanticsError::MissingInterpretation(format!(
            "model `{}` must be total",
            m_a.name
        )));
    }
    let a_sort = m_a.spec.param_sort.clone().ok_or_else(|| {
        SemanticsError::InvalidArgument("model's specification has no parameter sort".to_owned())
    })?;
    let sa = add_parameter(&m_a.spec).map_err(construct_err)?;
    let const_name = sa.param_const.clone().expect("constant was just added");
    let extensions = models_extending(&sa, Some(m_a), &BTreeMap::new(), cap)?;
    let mut values: Vec<Elem> = extensions
        .iter()
        .map(|m| Ok::<Elem, SemanticsError>(m.table(&const_name)?.get(&[])))
        .collect::<Result<_, _>>()?;
    values.sort_unstable();
    let a_len = m_a.carrier_len(&a_sort)?;
    let ok = values == (0..a_len).collect::<Vec<_>>();
    let mut report = VerifyReport::default();
    report.push(CheckRecord::bijection(
        format!("adding[{}]", m_a.name),
        extensions.len() as u64,
        a_len as u64,
        ok && extensions.len() == a_len,
        "evaluation at the parameter constant",
    ));
    Ok(report)
}

/// Runs the adding bijection over every enumerated total model of the
/// parameterization of `spec`.
pub fn verify_adding_over(
    spec: &DecoratedSpec,
    base: Option<&FinModel>,
    bounds: &BTreeMap<SortName, usize>,
    cap: u64,
) -> Result<VerifyReport, SemanticsError> {
    let pr = parameterize(spec).map_err(construct_err)?;
    let models = models_extending(&pr.param_spec, base, bounds, cap)?;
    let mut report = VerifyReport::default();
    for m_a in &models {
        report.extend(verify_bijection_adding(m_a, cap)?);
    }
    let passed = report
        .records
        .iter()
        .filter(|r| r.status == CheckStatus::Pass)
        .count();
    report.push(CheckRecord::bijection(
        "adding(all)",
        passed as u64,
        models.len() as u64,
        passed == models.len(),
        "models for which the adding bijection holds",
    ));
    Ok(report)
}

/// The restriction of a model of the parameterized specification to the
/// pure part of the source: the base carriers and the pure op tables.
fn pure_restriction(pr: &ParamResult, m_a: &FinModel) -> Result<FinModel, SemanticsError> {
    let mut carriers = BTreeMap::new();
    for s in &pr.source.sorts {
        carriers.insert(s.clone(), m_a.carrier(s)?.clone());
    }
    let tables = pr
        .source
        .pure_ops()
        .map(|op| Ok::<_, SemanticsError>((op.name.clone(), m_a.table(&op.name)?.clone())))
        .collect::<Result<_, _>>()?;
    Ok(FinModel {
        name: format!("{}_pure", m_a.name),
        spec: pr.source.clone(),
        carriers,
        tables,
        partial: true,
    })
}

/// All pairs (M, m) with M an enumerated model of the source extending the
/// base and m a morphism from the reduct of M to `m_a` over the identity on
/// the base. A pair is encoded as (index into `models`, parameter element).
fn passing_pairs(
    pr: &ParamResult,
    m_a: &FinModel,
    models: &[FinModel],
) -> Result<Vec<(usize, Elem)>, SemanticsError> {
    let t_a = erasure_morphism(pr);
    let a_sort = pr.param_sort().clone();
    let a_len = m_a.carrier_len(&a_sort)?;
    let mut pairs = vec![];
    for (i, m) in models.iter().enumerate() {
        let r = reduct_unchecked(m, &t_a)?;
        for alpha in 0..a_len {
            let mut components = BTreeMap::new();
            components.insert(a_sort.clone(), vec![alpha]);
            for s in &pr.source.sorts {
                components.insert(s.clone(), (0..r.carrier_len(s)?).collect());
            }
            let candidate = ModelMorphism {
                source: r.clone(),
                target: m_a.clone(),
                components,
            };
            if candidate.validate().is_ok() {
                pairs.push((i, alpha));
            }
        }
    }
    Ok(pairs)
}

/// Verifies the parameter passing bijections for one total model of the
/// parameterized specification: the models with parameter extending it
/// correspond to the pairs (model of the source over the base, morphism
/// over the base), and so do the parameter elements directly.
pub fn verify_bijection_passing(
    pr: &ParamResult,
    m_a: &FinModel,
    cap: u64,
) -> Result<VerifyReport, SemanticsError> {
    if m_a.spec != pr.param_spec {
        return Err(SemanticsError::SpecMismatch(
            "the model does not interpret the parameterized specification".to_owned(),
        ));
    }
    let a_sort = pr.param_sort().clone();
    let a_len = m_a.carrier_len(&a_sort)?;
    let base0 = pure_restriction(pr, m_a)?;
    let models = models_extending(&pr.source, Some(&base0), &BTreeMap::new(), cap)?;
    let pairs = passing_pairs(pr, m_a, &models)?;
    let mut report = VerifyReport::default();

    // the models with parameter map to pairs through the passing morphism
    // and evaluation at the constant
    let sa = add_parameter(&pr.param_spec).map_err(construct_err)?;
    let const_name = sa.param_const.clone().expect("constant was just added");
    let j = passing_morphism(&pr.source).map_err(construct_err)?;
    let extensions = models_extending(&sa, Some(m_a), &BTreeMap::new(), cap)?;
    let mut mapped = vec![];
    for m_ext in &extensions {
        let along_j = reduct_unchecked(m_ext, &j)?;
        let alpha = m_ext.table(&const_name)?.get(&[]);
        let idx = models
            .iter()
            .position(|m| m.same_interpretation(&along_j))
            .ok_or_else(|| {
                SemanticsError::InvalidArgument(
                    "reduct along the passing morphism is not among the enumerated models"
                        .to_owned(),
                )
            })?;
        mapped.push((idx, alpha));
    }
    mapped.sort_unstable();
    let mut sorted_pairs = pairs.clone();
    sorted_pairs.sort_unstable();
    let ok32 = mapped == sorted_pairs && extensions.len() == pairs.len();
    report.push(CheckRecord::bijection(
        format!("passing(3.2)[{}]", m_a.name),
        extensions.len() as u64,
        pairs.len() as u64,
        ok32,
        "models with parameter against (model, morphism) pairs",
    ));

    // the parameter elements map to pairs through the induced models
    let mut hit = vec![];
    let mut all_found = true;
    for alpha in 0..a_len {
        let (m_alpha, morphism) = param_passing_model(pr, m_a, alpha)?;
        debug_assert_eq!(morphism.components[&a_sort], vec![alpha]);
        match models.iter().position(|m| m.same_interpretation(&m_alpha)) {
            Some(idx) => hit.push((idx, alpha)),
            None => all_found = false,
        }
    }
    hit.sort_unstable();
    let ok33 = all_found && hit == sorted_pairs && a_len == pairs.len();
    report.push(CheckRecord::bijection(
        format!("passing(3.3)[{}]", m_a.name),
        a_len as u64,
        pairs.len() as u64,
        ok33,
        "parameter elements against (model, morphism) pairs",
    ));
    Ok(report)
}

/// Runs the passing bijections over every enumerated total model of the
/// parameterization of `spec`.
pub fn verify_passing_over(
    spec: &DecoratedSpec,
    base: Option<&FinModel>,
    bounds: &BTreeMap<SortName, usize>,
    cap: u64,
) -> Result<VerifyReport, SemanticsError> {
    let pr = parameterize(spec).map_err(construct_err)?;
    let models = models_extending(&pr.param_spec, base, bounds, cap)?;
    let mut report = VerifyReport::default();
    for m_a in &models {
        report.extend(verify_bijection_passing(&pr, m_a, cap)?);
    }
    let passed = report
        .records
        .iter()
        .filter(|r| r.status == CheckStatus::Pass)
        .count();
    report.push(CheckRecord::bijection(
        "passing(all)",
        passed as u64,
        report.records.len() as u64,
        passed == report.records.len(),
        "passing checks that hold",
    ));
    Ok(report)
}

/// Verifies the exact parameterization bijection: the parameter carrier of
/// the terminal extension corresponds to the enumerated models of the
/// source specification over the base, through the induced models.
pub fn verify_exact_parameterization(
    spec: &DecoratedSpec,
    base: &FinModel,
    pr: &ParamResult,
    cap: u64,
) -> Result<VerifyReport, SemanticsError> {
    if pr.source != *spec {
        return Err(SemanticsError::SpecMismatch(
            "parameterization does not belong to this specification".to_owned(),
        ));
    }
    let terminal = terminal_extension(pr, base, cap)?;
    let a_sort = pr.param_sort().clone();
    let a_labels = terminal.carrier(&a_sort)?.clone();
    let models = models_extending(spec, Some(base), &BTreeMap::new(), cap)?;

    let mut pairing = vec![];
    let mut used = vec![false; models.len()];
    let mut ok = a_labels.len() == models.len();
    for (alpha, label) in a_labels.iter().enumerate() {
        let (m_alpha, _) = param_passing_model(pr, &terminal, alpha)?;
        match models.iter().position(|m| m.same_interpretation(&m_alpha)) {
            Some(idx) if !used[idx] => {
                used[idx] = true;
                pairing.push(format!("{} -> {}", label, models[idx].name));
            }
            _ => {
                ok = false;
            }
        }
    }
    ok = ok && used.iter().all(|&u| u);

    let mut report = VerifyReport::default();
    report.push(CheckRecord::bijection(
        "exact",
        a_labels.len() as u64,
        models.len() as u64,
        ok,
        format!("pairing: {}", pairing.join("; ")),
    ));
    Ok(report)
}

/// Evaluates every naturality square of the presented 2-cell in one finite
/// model of its target specification.
pub fn check_nat_trans(
    nt: &NatTransPresentation,
    model: &FinModel,
) -> Result<bool, SemanticsError> {
    nt.validate()?;
    if model.spec != nt.source_mor.target {
        return Err(SemanticsError::SpecMismatch(
            "model does not interpret the 2-cell's target specification".to_owned(),
        ));
    }
    let m_sigma = reduct_unchecked(model, &nt.source_mor)?;
    let m_tau = reduct_unchecked(model, &nt.target_mor)?;

    let mut components = BTreeMap::new();
    for s in &nt.source_mor.source.sorts {
        let comp = &nt.components[s];
        let src_sizes: Vec<usize> = nt
            .source_mor
            .sort_image(s)?
            .factors()
            .iter()
            .map(|f| model.carrier_len(f))
            .collect::<Result<_, _>>()?;
        let tgt_sizes: Vec<usize> = nt
            .target_mor
            .sort_image(s)?
            .factors()
            .iter()
            .map(|f| model.carrier_len(f))
            .collect::<Result<_, _>>()?;
        let mut values = vec![];
        for tuple in tuples(&src_sizes) {
            let env: BTreeMap<String, Elem> = comp
                .ctx
                .bindings()
                .iter()
                .zip(&tuple)
                .map(|((v, _), &e)| (v.clone(), e))
                .collect();
            let outs: Vec<Elem> = comp
                .terms
                .iter()
                .map(|t| model.eval(&env, t))
                .collect::<Result<_, _>>()?;
            values.push(super::mixed_radix_combine(&outs, &tgt_sizes));
        }
        components.insert(s.clone(), values);
    }
    let morphism = ModelMorphism {
        source: m_sigma,
        target: m_tau,
        components,
    };
    match morphism.validate() {
        Ok(()) => Ok(true),
        Err(SemanticsError::NaturalityFailure { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Decides whether two parallel morphisms agree on every enumerated model
/// of their target within the bounds, by comparing reducts.
pub fn morphisms_semantically_equal(
    f: &TheoryMorphism,
    g: &TheoryMorphism,
    bounds: &BTreeMap<SortName, usize>,
    cap: u64,
) -> Result<bool, SemanticsError> {
    if f.source != g.source || f.target != g.target {
        return Err(SemanticsError::SpecMismatch(
            "morphisms are not parallel".to_owned(),
        ));
    }
    let models = models_extending(&f.target, None, bounds, cap)?;
    for m in &models {
        let rf = reduct_unchecked(m, f)?;
        let rg = reduct_unchecked(m, g)?;
        if !rf.same_interpretation(&rg) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{naturality_square, passing_cell};
    use crate::core::{Context, OpDecl, ProductType, Term};
    use crate::semantics::DEFAULT_TABLE_CAP;
    use crate::testfix::{dm, oper, oper_base, sgp, z2_base};

    fn bounds(pairs: &[(&str, usize)]) -> BTreeMap<SortName, usize> {
        pairs
            .iter()
            .map(|(s, n)| (SortName::from(*s), *n))
            .collect()
    }

    #[test]
    fn adding_bijection_on_terminal_oper_model() {
        let pr = parameterize(&oper()).unwrap();
        let m_a = terminal_extension(&pr, &oper_base(), DEFAULT_TABLE_CAP).unwrap();
        let report = verify_bijection_adding(&m_a, DEFAULT_TABLE_CAP).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.records[0].left, Some(4));
        assert_eq!(report.records[0].right, Some(4));
    }

    #[test]
    fn adding_bijection_with_empty_parameter_carrier() {
        let pr = parameterize(&oper()).unwrap();
        let mut m_a = terminal_extension(&pr, &oper_base(), DEFAULT_TABLE_CAP).unwrap();
        m_a.carriers.insert(SortName::from("A"), vec![]);
        m_a.tables
            .insert("f'".to_owned(), OpTable::new(vec![0, 2], vec![]).unwrap());
        let report = verify_bijection_adding(&m_a, DEFAULT_TABLE_CAP).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.records[0].left, Some(0));
    }

    #[test]
    fn adding_bijection_on_dm_terminal() {
        let pr = parameterize(&dm()).unwrap();
        let m_a = terminal_extension(&pr, &z2_base(), DEFAULT_TABLE_CAP).unwrap();
        let report = verify_bijection_adding(&m_a, DEFAULT_TABLE_CAP).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.records[0].right, Some(1));
    }

    #[test]
    fn passing_bijections_on_fixtures() {
        let pr = parameterize(&oper()).unwrap();
        let m_a = terminal_extension(&pr, &oper_base(), DEFAULT_TABLE_CAP).unwrap();
        let report = verify_bijection_passing(&pr, &m_a, DEFAULT_TABLE_CAP).unwrap();
        assert!(report.all_passed(), "{}", report);
        assert_eq!(report.records[0].left, Some(4));

        let pr = parameterize(&dm()).unwrap();
        let m_a = terminal_extension(&pr, &z2_base(), DEFAULT_TABLE_CAP).unwrap();
        let report = verify_bijection_passing(&pr, &m_a, DEFAULT_TABLE_CAP).unwrap();
        assert!(report.all_passed(), "{}", report);
        assert_eq!(report.records[1].left, Some(1));
    }

    #[test]
    fn exact_parameterization_oper() {
        let spec = oper();
        let pr = parameterize(&spec).unwrap();
        let report =
            verify_exact_parameterization(&spec, &oper_base(), &pr, DEFAULT_TABLE_CAP).unwrap();
        assert!(report.all_passed(), "{}", report);
        assert_eq!(report.records[0].left, Some(4));
        assert_eq!(report.records[0].right, Some(4));
        assert!(report.records[0].detail.contains("f_y0_y0 ->"));
    }

    #[test]
    fn exact_parameterization_dm() {
        let spec = dm();
        let pr = parameterize(&spec).unwrap();
        let report =
            verify_exact_parameterization(&spec, &z2_base(), &pr, DEFAULT_TABLE_CAP).unwrap();
        assert!(report.all_passed(), "{}", report);
        assert_eq!(report.records[0].left, Some(1));
    }

    #[test]
    fn param_passing_model_swaps() {
        // the swap family of the terminal model induces the swap model
        let pr = parameterize(&oper()).unwrap();
        let m_a = terminal_extension(&pr, &oper_base(), DEFAULT_TABLE_CAP).unwrap();
        let swap = m_a
            .carrier(&SortName::from("A"))
            .unwrap()
            .iter()
            .position(|l| l == "f_y1_y0")
            .unwrap();
        let (m, morphism) = param_passing_model(&pr, &m_a, swap).unwrap();
        assert_eq!(m.tables["f"].data(), &[1, 0]);
        morphism.validate().unwrap();
    }

    #[test]
    fn param_passing_model_keeps_pure_ops() {
        let pr = parameterize(&dm()).unwrap();
        let m_a = terminal_extension(&pr, &z2_base(), DEFAULT_TABLE_CAP).unwrap();
        let (m, _) = param_passing_model(&pr, &m_a, 0).unwrap();
        assert_eq!(m.tables["prd"], m_a.tables["prd"]);
        assert_eq!(m.tables["dif"].data(), &[0, 0]);
    }

    #[test]
    fn passing_cell_is_natural_in_all_small_models() {
        let cell = passing_cell(&oper()).unwrap();
        let sa = cell.target_mor.target.clone();
        let models = models_extending(
            &sa,
            None,
            &bounds(&[("A", 2), ("X", 2), ("Y", 2)]),
            DEFAULT_TABLE_CAP,
        )
        .unwrap();
        assert!(!models.is_empty());
        for m in &models {
            assert!(check_nat_trans(&cell, m).unwrap());
        }
    }

    #[test]
    fn identity_cell_is_natural() {
        let pr = parameterize(&oper()).unwrap();
        let t_a = crate::construct::erasure_morphism(&pr);
        let cell = NatTransPresentation::identity(&t_a).unwrap();
        let mut m = oper_base();
        m.partial = false;
        m.tables
            .insert("f".to_owned(), OpTable::new(vec![2], vec![1, 0]).unwrap());
        assert!(check_nat_trans(&cell, &m).unwrap());
    }

    #[test]
    fn corrupted_cell_component_fails() {
        // extend Oper_a with a second constant b, interpret it differently
        // from a, and replace the component at A by b(): naturality breaks
        let spec = oper();
        let cell = passing_cell(&spec).unwrap();
        let mut sa2 = cell.target_mor.target.clone();
        sa2.ops.push(OpDecl::new(
            "b",
            ProductType::unit(),
            SortName::from("A"),
            false,
        ));
        let mut corrupted = cell.clone();
        corrupted.source_mor.target = sa2.clone();
        corrupted.target_mor.target = sa2.clone();
        corrupted.components.get_mut(&SortName::from("A")).unwrap().terms =
            vec![Term::constant("b")];

        let mut carriers = BTreeMap::new();
        carriers.insert(SortName::from("A"), vec!["a0".into(), "a1".into()]);
        carriers.insert(SortName::from("X"), vec!["x0".into(), "x1".into()]);
        carriers.insert(SortName::from("Y"), vec!["y0".into(), "y1".into()]);
        let mut tables = BTreeMap::new();
        // f'(a0, -) is constant y0, f'(a1, -) is constant y1
        tables.insert(
            "f'".to_owned(),
            OpTable::new(vec![2, 2], vec![0, 0, 1, 1]).unwrap(),
        );
        tables.insert("a".to_owned(), OpTable::new(vec![], vec![0]).unwrap());
        tables.insert("b".to_owned(), OpTable::new(vec![], vec![1]).unwrap());
        let model = FinModel {
            name: "corrupt".to_owned(),
            spec: sa2,
            carriers,
            tables,
            partial: false,
        };
        model.validate().unwrap();
        assert!(!check_nat_trans(&corrupted, &model).unwrap());
    }

    #[test]
    fn naturality_square_composites_semantically_equal() {
        let oper = oper();
        let sgp = sgp();
        let mut sort_map = BTreeMap::new();
        sort_map.insert(SortName::from("X"), ProductType::single(SortName::from("G")));
        sort_map.insert(SortName::from("Y"), ProductType::single(SortName::from("G")));
        let mut op_map = BTreeMap::new();
        op_map.insert(
            "f".to_owned(),
            (
                Context::new(vec![("x1".into(), SortName::from("G"))]),
                vec![Term::app("prd", vec![Term::var("x1"), Term::var("x1")])],
            ),
        );
        let sigma = TheoryMorphism {
            name: "sigma".to_owned(),
            source: oper,
            target: sgp,
            sort_map,
            op_map,
        };
        let (left, right) = naturality_square(&sigma).unwrap();
        assert!(morphisms_semantically_equal(
            &left,
            &right,
            &bounds(&[("A", 2), ("G", 2)]),
            DEFAULT_TABLE_CAP
        )
        .unwrap());
    }

    #[test]
    fn erasure_and_sort_permuted_variant_differ_semantically() {
        // a variant of the erasure that sends the parameter sort to X
        // instead of collapsing it is a valid morphism with different reducts
        let spec = oper();
        let pr = parameterize(&spec).unwrap();
        let t_a = crate::construct::erasure_morphism(&pr);
        let mut variant = t_a.clone();
        variant.name = "variant".to_owned();
        variant
            .sort_map
            .insert(SortName::from("A"), ProductType::single(SortName::from("X")));
        variant.op_map.insert(
            "f'".to_owned(),
            (
                Context::new(vec![
                    ("x1".into(), SortName::from("X")),
                    ("x2".into(), SortName::from("X")),
                ]),
                vec![Term::app("f", vec![Term::var("x2")])],
            ),
        );
        variant.validate().unwrap();
        assert!(morphisms_semantically_equal(
            &t_a,
            &t_a,
            &bounds(&[("X", 2), ("Y", 2)]),
            DEFAULT_TABLE_CAP
        )
        .unwrap());
        assert!(!morphisms_semantically_equal(
            &t_a,
            &variant,
            &bounds(&[("X", 2), ("Y", 2)]),
            DEFAULT_TABLE_CAP
        )
        .unwrap());
    }
}
