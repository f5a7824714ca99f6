//! Printing a program and parsing it back gives the same program.

use drazin_core::{Complex64, GaussRat, Polynomial};
use opspec::ast::{Expr, Kind, Num, PointSpec, Prop, Query, QueryFn, Rel, Rhs, Spanned, Stmt};
use opspec::{parse, Program};
use proptest::prelude::*;

const FUNCS: [QueryFn; 12] = [
    QueryFn::Spectrum,
    QueryFn::DrazinSpectrum,
    QueryFn::Poles,
    QueryFn::Ies,
    QueryFn::AscSpectrum,
    QueryFn::DscSpectrum,
    QueryFn::LdSpectrum,
    QueryFn::RdSpectrum,
    QueryFn::Algebraic,
    QueryFn::Meromorphic,
    QueryFn::DrazinInverse,
    QueryFn::Profile,
];

fn gauss() -> impl Strategy<Value = GaussRat> + Clone {
    (-9i64..10, 1i64..5, -9i64..10, 1i64..5).prop_map(|(a, b, c, d)| GaussRat::from_parts(a, b, c, d))
}

fn real() -> impl Strategy<Value = GaussRat> {
    (-9i64..10, 1i64..5).prop_map(|(a, b)| GaussRat::ratio(a, b))
}

fn num() -> impl Strategy<Value = Num> + Clone {
    prop_oneof![
        gauss().prop_map(Num::Exact),
        (-1e3f64..1e3, prop_oneof![Just(0.0), -1e3f64..1e3]).prop_map(|(re, im)| Num::Approx(Complex64::new(re, im))),
    ]
}

fn name() -> impl Strategy<Value = String> {
    "[A-Z][A-Za-z0-9_]{0,3}"
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        (gauss(), gauss()).prop_map(|(c, q)| Kind::Geometric(c, q)),
        (gauss(), 1u32..4).prop_map(|(c, p)| Kind::Harmonic(c, p)),
        prop::collection::vec(gauss(), 1..4).prop_map(Kind::List),
    ]
}

fn point_spec() -> impl Strategy<Value = PointSpec> {
    prop_oneof![
        (gauss(), prop::option::of(1u64..5)).prop_map(|(v, m)| PointSpec::Point(v, m)),
        (kind(), gauss()).prop_map(|(k, l)| PointSpec::Seq(k, l)),
        (real(), real()).prop_map(|(lo, hi)| PointSpec::Dense(lo, hi)),
    ]
}

fn square<T: std::fmt::Debug + Clone>(entry: impl Strategy<Value = T> + Clone) -> impl Strategy<Value = Vec<Vec<T>>> {
    (1usize..4).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(entry.clone(), n), n))
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        name().prop_map(Expr::Var),
        square(num()).prop_map(Expr::Matrix),
        (
            prop::collection::vec((gauss(), prop::collection::vec(1usize..4, 1..3)), 1..3),
            prop::option::of(square(gauss()))
        )
            .prop_map(|(eigen, sim)| Expr::Jordan { eigen, sim }),
        prop::collection::vec(point_spec(), 1..4).prop_map(Expr::Diag),
        (kind(), prop::option::of(1u32..5)).prop_map(|(weights, nilpotent)| Expr::Shift { weights, nilpotent }),
    ]
}

fn bx(e: Expr) -> Box<Spanned<Expr>> {
    Box::new(Spanned::bare(e))
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone().prop_map(Spanned::bare), 1..4).prop_map(Expr::Dsum),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(bx(a), bx(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(bx(a), bx(b))),
            (inner.clone(), gauss()).prop_map(|(a, l)| Expr::ShiftBy(bx(a), l)),
            inner.clone().prop_map(|a| Expr::Adj(bx(a))),
            (inner, prop::collection::vec(gauss(), 1..4)).prop_map(|(a, c)| Expr::Poly(bx(a), Polynomial::new(c))),
        ]
    })
}

fn query() -> impl Strategy<Value = Query> {
    (prop::sample::select(FUNCS.to_vec()), name()).prop_map(|(func, n)| Query {
        func,
        arg: Spanned::bare(n),
    })
}

fn prop_() -> impl Strategy<Value = Prop> {
    let rhs = prop_oneof![
        query().prop_map(Rhs::Query),
        prop::collection::vec(num(), 0..4).prop_map(Rhs::Set),
        any::<bool>().prop_map(Rhs::Flag),
    ];
    (query(), prop_oneof![Just(Rel::Eq), Just(Rel::Subset)], rhs).prop_map(|(left, rel, right)| Prop {
        left,
        rel,
        right: Spanned::bare(right),
    })
}

fn stmt() -> impl Strategy<Value = Stmt> {
    prop_oneof![
        (name(), expr()).prop_map(|(n, e)| Stmt::Let(Spanned::bare(n), Spanned::bare(e))),
        prop_().prop_map(Stmt::Assert),
        query().prop_map(Stmt::Print),
    ]
}

fn program() -> impl Strategy<Value = Program> {
    prop::collection::vec(stmt().prop_map(Spanned::bare), 0..6).prop_map(|statements| Program { statements })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printed_programs_parse_back(p in program()) {
        let text = p.to_string();
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, p, "{}", text);
    }
}
