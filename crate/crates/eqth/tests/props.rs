//! Property tests for the core invariants: typing soundness, purity
//! closure, compatibility of morphism application with substitution, and
//! stability of the printed syntax.

use std::collections::BTreeMap;

use proptest::prelude::*;

use eqth::construct::passing_morphism;
use eqth::core::{
    compose_morphisms, is_pure_term, substitute, typecheck_term, Context, DecoratedSpec, OpDecl,
    ProductType, SortName, Term, TheoryMorphism,
};
use eqth::dsl::{parse_spec, print_spec};

fn dm() -> DecoratedSpec {
    parse_spec(include_str!("../fixtures/dm.eqth")).unwrap()
}

fn sgp() -> DecoratedSpec {
    parse_spec(include_str!("../fixtures/sgp.eqth")).unwrap()
}

/// Arbitrary trees over the dm signature plus a bogus symbol; most are
/// ill-typed, some are well-typed.
fn arb_tree() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just("x"), Just("y"), Just("w")].prop_map(Term::var),
        Just(Term::constant("unt")),
        Just(Term::constant("bogus")),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        (
            prop_oneof![Just("prd"), Just("dif"), Just("unt"), Just("nope")],
            prop::collection::vec(inner, 0..3),
        )
            .prop_map(|(op, args)| Term::app(op, args))
    })
}

/// Well-typed pure terms of sort G over the monoid part of dm.
fn arb_pure_g() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just("x"), Just("y")].prop_map(Term::var),
        Just(Term::constant("unt")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Term::app("prd", vec![a, b]))
    })
}

/// Well-typed terms of sort G over the full dm signature.
fn arb_g() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just("x"), Just("y")].prop_map(Term::var),
        Just(Term::constant("unt")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("prd", vec![a, b])),
            inner.prop_map(|a| Term::app("dif", vec![a])),
        ]
    })
}

fn ctx_xy() -> Context {
    Context::new(vec![
        ("x".into(), SortName::from("G")),
        ("y".into(), SortName::from("G")),
    ])
}

fn arity_ok(t: &Term, spec: &DecoratedSpec) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(op, args) => {
            spec.op(op).is_some_and(|d| d.arity() == args.len())
                && args.iter().all(|a| arity_ok(a, spec))
        }
    }
}

proptest! {
    /// Whenever the checker assigns a sort, every application in the tree
    /// matches a declared op at its declared arity.
    #[test]
    fn typing_soundness(t in arb_tree()) {
        let spec = dm();
        if typecheck_term(&ctx_xy(), &t, &spec).is_ok() {
            prop_assert!(arity_ok(&t, &spec));
        }
    }

    /// Substituting pure terms into a pure term stays pure.
    #[test]
    fn purity_closure(t in arb_pure_g(), u in arb_pure_g(), v in arb_pure_g()) {
        let spec = dm();
        let ctx = ctx_xy();
        prop_assert!(is_pure_term(&ctx, &t, &spec).unwrap());
        let mut binding = BTreeMap::new();
        binding.insert("x".to_owned(), u);
        binding.insert("y".to_owned(), v);
        let substituted = substitute(&t, &binding);
        prop_assert!(is_pure_term(&ctx, &substituted, &spec).unwrap());
    }

    /// Applying a morphism commutes with substitution.
    #[test]
    fn apply_respects_substitution(t in arb_g(), u in arb_g()) {
        let spec = dm();
        let ctx = ctx_xy();
        let j = passing_morphism(&spec).unwrap();

        let mut binding = BTreeMap::new();
        binding.insert("x".to_owned(), u.clone());
        let substituted_first = j.apply(&ctx, &substitute(&t, &binding)).unwrap().1;

        let (_, jt) = j.apply(&ctx, &t).unwrap();
        let (_, ju) = j.apply(&ctx, &u).unwrap();
        let mut jbinding = BTreeMap::new();
        jbinding.insert("x".to_owned(), ju);
        let applied_first = substitute(&jt, &jbinding);

        prop_assert_eq!(substituted_first, applied_first);
    }
}

/// Small random specifications: sorts, decorated ops, and chains of unary
/// applications as equations. Parsing the printed form is the identity.
fn arb_spec() -> impl Strategy<Value = DecoratedSpec> {
    let sorts = prop::collection::vec(0..3usize, 1..4).prop_map(|ids| {
        let mut out: Vec<usize> = ids;
        out.sort_unstable();
        out.dedup();
        out
    });
    (sorts, prop::collection::vec((0..3usize, 0..3usize, any::<bool>()), 0..5), 0..3usize)
        .prop_map(|(sort_ids, op_sigs, eqs)| {
            let mut spec = DecoratedSpec::new("Rand");
            for i in &sort_ids {
                spec.sorts.push(SortName::new(format!("S{}", i)));
            }
            let pick = |i: usize| spec.sorts[i % spec.sorts.len()].clone();
            for (k, (d, c, pure)) in op_sigs.iter().enumerate() {
                let dom = match d % 3 {
                    0 => ProductType::unit(),
                    1 => ProductType::single(pick(*d)),
                    _ => ProductType::new(vec![pick(*d), pick(d + 1)]),
                };
                spec.ops.push(OpDecl::new(format!("f{}", k), dom, pick(*c), *pure));
            }
            // equations: iterate a unary endo-op when one exists
            let endo = spec
                .ops
                .iter()
                .find(|o| o.dom.len() == 1 && o.dom.factors()[0] == o.cod)
                .map(|o| o.name.clone());
            if let Some(endo) = endo {
                let sort = spec.op(&endo).unwrap().cod.clone();
                for n in 0..eqs {
                    let ctx = Context::new(vec![("x".to_owned(), sort.clone())]);
                    let mut lhs = Term::var("x");
                    for _ in 0..=n {
                        lhs = Term::app(&endo, vec![lhs]);
                    }
                    spec.eqs.push(eqth::core::Equation::new(ctx, lhs, Term::var("x")));
                }
            }
            spec
        })
        .prop_filter("must validate", |s| s.validate().is_valid())
}

proptest! {
    /// The printed canonical form parses back to the same value.
    #[test]
    fn print_parse_round_trip(spec in arb_spec()) {
        let text = print_spec(&spec);
        let parsed = parse_spec(&text).unwrap();
        prop_assert_eq!(parsed, spec);
    }
}

#[test]
fn composition_is_associative_and_unital_on_generators() {
    let sgp = sgp();
    let oper = parse_spec(include_str!("../fixtures/oper.eqth")).unwrap();
    let sigma = eqth::dsl::parse_morphism(
        include_str!("../fixtures/sigma_oper_sgp.mor"),
        &oper,
        &sgp,
    )
    .unwrap();
    let j = passing_morphism(&sgp).unwrap();
    let pr = eqth::construct::parameterize(&sgp).unwrap();
    let sa = eqth::construct::add_parameter(&pr.param_spec).unwrap();
    let j_a = TheoryMorphism::identity_like("j_A", &pr.param_spec, &sa);
    let t_a_ext = {
        // the collapse out of the specification with parameter
        let cone = eqth::construct::LaxCocone {
            base: eqth::construct::erasure_morphism(&pr),
            apex: sgp.clone(),
            leg_a: eqth::construct::erasure_morphism(&pr),
            leg: TheoryMorphism::identity(&sgp),
            cell: eqth::core::NatTransPresentation::identity(
                &eqth::construct::erasure_morphism(&pr),
            )
            .unwrap(),
        };
        eqth::construct::mediate(&cone, &pr).unwrap()
    };

    // associativity over the chain sigma ; j ; t_a
    let left = compose_morphisms(&t_a_ext, &compose_morphisms(&j, &sigma).unwrap()).unwrap();
    let right = compose_morphisms(&compose_morphisms(&t_a_ext, &j).unwrap(), &sigma).unwrap();
    assert!(left.generator_equal(&right));

    // identities are units
    let id_src = TheoryMorphism::identity(&oper);
    let id_tgt = TheoryMorphism::identity(&sgp);
    assert!(compose_morphisms(&sigma, &id_src).unwrap().generator_equal(&sigma));
    assert!(compose_morphisms(&id_tgt, &sigma).unwrap().generator_equal(&sigma));

    // the erasure coequalizes through the inclusion: t_a . j_A = t_A
    let t_a = eqth::construct::erasure_morphism(&pr);
    assert!(compose_morphisms(&t_a_ext, &j_a).unwrap().generator_equal(&t_a));
}
