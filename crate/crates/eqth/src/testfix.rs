//! Shared fixture specifications and models for unit tests.

use std::collections::BTreeMap;

use crate::core::{Context, DecoratedSpec, Equation, OpDecl, ProductType, SortName, Term};
use crate::semantics::{FinModel, OpTable};

fn sort(s: &str) -> SortName {
    SortName::from(s)
}

fn prd(a: Term, b: Term) -> Term {
    Term::app("prd", vec![a, b])
}

/// One operation `f : X -> Y`, no equations, nothing pure.
pub fn oper() -> DecoratedSpec {
    let mut s = DecoratedSpec::new("Oper");
    s.sorts = vec![sort("X"), sort("Y")];
    s.ops = vec![OpDecl::new(
        "f",
        ProductType::single(sort("X")),
        sort("Y"),
        false,
    )];
    s.validated().unwrap()
}

/// Semigroups: one binary operation with associativity.
pub fn sgp() -> DecoratedSpec {
    let g = sort("G");
    let mut s = DecoratedSpec::new("Sgp");
    s.sorts = vec![g.clone()];
    s.ops = vec![OpDecl::new(
        "prd",
        ProductType::new(vec![g.clone(), g.clone()]),
        g.clone(),
        false,
    )];
    let ctx = Context::new(vec![
        ("x".into(), g.clone()),
        ("y".into(), g.clone()),
        ("z".into(), g),
    ]);
    s.eqs = vec![Equation::new(
        ctx,
        prd(Term::var("x"), prd(Term::var("y"), Term::var("z"))),
        prd(prd(Term::var("x"), Term::var("y")), Term::var("z")),
    )];
    s.validated().unwrap()
}

/// Naturals with a pure zero: `z : -> N` pure, `s : N -> N`.
pub fn nat() -> DecoratedSpec {
    let n = sort("N");
    let mut s = DecoratedSpec::new("Nat");
    s.sorts = vec![n.clone()];
    s.ops = vec![
        OpDecl::new("z", ProductType::unit(), n.clone(), true),
        OpDecl::new("s", ProductType::single(n.clone()), n, false),
    ];
    s.validated().unwrap()
}

fn monoid_equations(g: &SortName) -> Vec<Equation> {
    let ctx3 = Context::new(vec![
        ("x".into(), g.clone()),
        ("y".into(), g.clone()),
        ("z".into(), g.clone()),
    ]);
    let ctx1 = Context::new(vec![("x".into(), g.clone())]);
    let unt = Term::constant("unt");
    vec![
        Equation::new(
            ctx3,
            prd(Term::var("x"), prd(Term::var("y"), Term::var("z"))),
            prd(prd(Term::var("x"), Term::var("y")), Term::var("z")),
        ),
        Equation::new(ctx1.clone(), prd(Term::var("x"), unt.clone()), Term::var("x")),
        Equation::new(ctx1, prd(unt, Term::var("x")), Term::var("x")),
    ]
}

/// Monoids, entirely pure (the pure part of the differential monoids).
pub fn mon() -> DecoratedSpec {
    let g = sort("G");
    let mut s = DecoratedSpec::new("Mon");
    s.sorts = vec![g.clone()];
    s.ops = vec![
        OpDecl::new("prd", ProductType::new(vec![g.clone(), g.clone()]), g.clone(), true),
        OpDecl::new("unt", ProductType::unit(), g.clone(), true),
    ];
    s.eqs = monoid_equations(&g);
    s.validated().unwrap()
}

/// Differential monoids: a pure monoid with a non-pure differential.
pub fn dm() -> DecoratedSpec {
    let g = sort("G");
    let dif = |a: Term| Term::app("dif", vec![a]);
    let unt = Term::constant("unt");
    let mut s = DecoratedSpec::new("Dm");
    s.sorts = vec![g.clone()];
    s.ops = vec![
        OpDecl::new("prd", ProductType::new(vec![g.clone(), g.clone()]), g.clone(), true),
        OpDecl::new("unt", ProductType::unit(), g.clone(), true),
        OpDecl::new("dif", ProductType::single(g.clone()), g.clone(), false),
    ];
    let ctx2 = Context::new(vec![("x".into(), g.clone()), ("y".into(), g.clone())]);
    let ctx1 = Context::new(vec![("x".into(), g.clone())]);
    s.eqs = monoid_equations(&g);
    s.eqs.push(Equation::new(
        ctx2,
        dif(prd(Term::var("x"), Term::var("y"))),
        prd(dif(Term::var("x")), dif(Term::var("y"))),
    ));
    s.eqs
        .push(Equation::new(ctx1.clone(), dif(unt.clone()), unt.clone()));
    s.eqs.push(Equation::new(ctx1, dif(dif(Term::var("x"))), unt));
    s.validated().unwrap()
}

/// Observation of a state: locations, integers, and a non-pure lookup.
pub fn st() -> DecoratedSpec {
    let mut s = DecoratedSpec::new("St");
    s.sorts = vec![sort("L"), sort("Z")];
    s.ops = vec![OpDecl::new(
        "v",
        ProductType::single(sort("L")),
        sort("Z"),
        false,
    )];
    s.validated().unwrap()
}

/// The partial base model of `oper` with two-element carriers.
pub fn oper_base() -> FinModel {
    let mut carriers = BTreeMap::new();
    carriers.insert(sort("X"), vec!["x0".to_owned(), "x1".to_owned()]);
    carriers.insert(sort("Y"), vec!["y0".to_owned(), "y1".to_owned()]);
    FinModel {
        name: "M0_oper".to_owned(),
        spec: oper(),
        carriers,
        tables: BTreeMap::new(),
        partial: true,
    }
}

/// The Z/2 monoid as a partial model of `dm` (the differential is omitted).
pub fn z2_base() -> FinModel {
    let mut carriers = BTreeMap::new();
    carriers.insert(sort("G"), vec!["e".to_owned(), "g".to_owned()]);
    let mut tables = BTreeMap::new();
    // XOR table on {e, g}
    tables.insert(
        "prd".to_owned(),
        OpTable::new(vec![2, 2], vec![0, 1, 1, 0]).unwrap(),
    );
    tables.insert("unt".to_owned(), OpTable::new(vec![], vec![0]).unwrap());
    FinModel {
        name: "Z2".to_owned(),
        spec: dm(),
        carriers,
        tables,
        partial: true,
    }
}

/// The state base model with two locations and three integers.
pub fn st_base() -> FinModel {
    let mut carriers = BTreeMap::new();
    carriers.insert(sort("L"), vec!["l0".to_owned(), "l1".to_owned()]);
    carriers.insert(
        sort("Z"),
        vec!["z0".to_owned(), "z1".to_owned(), "z2".to_owned()],
    );
    FinModel {
        name: "M0_st".to_owned(),
        spec: st(),
        carriers,
        tables: BTreeMap::new(),
        partial: true,
    }
}
