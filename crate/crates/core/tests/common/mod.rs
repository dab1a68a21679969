#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use while_core::env::Store;
use while_core::syntax::{AExp, BExp, Expr, ProcDecl, Stmt, TypeName, Value, VarDecl};

pub fn config() -> Config {
    Config {
        cases: 1000,
        rng_seed: RngSeed::Fixed(0x5eed_1234),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn aexp_over(vars: &'static [&'static str]) -> impl Strategy<Value = AExp> {
    let leaf = prop_oneof![
        (0u64..12).prop_map(AExp::Num),
        proptest::sample::select(vars).prop_map(AExp::var),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AExp::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AExp::sub(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| AExp::mul(a, b)),
        ]
    })
}

pub fn bexp_over(
    nats: &'static [&'static str],
    bools: &'static [&'static str],
) -> impl Strategy<Value = BExp> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(BExp::lit),
        proptest::sample::select(bools).prop_map(BExp::var),
        (aexp_over(nats), aexp_over(nats)).prop_map(|(a, b)| BExp::le(a, b)),
        (aexp_over(nats), aexp_over(nats)).prop_map(|(a, b)| BExp::eq(a, b)),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BExp::and(a, b)),
            inner.prop_map(BExp::not),
        ]
    })
}

const NAMES: &[&str] = &["x", "y", "z", "b"];
const PROCS: &[&str] = &["p", "q"];

/// A right-hand side whose parse is itself: a bare variable always reads
/// back as arithmetic.
fn rhs() -> impl Strategy<Value = Expr> {
    prop_oneof![
        aexp_over(NAMES).prop_map(Expr::Arith),
        bexp_over(NAMES, NAMES)
            .prop_filter("bare variable", |b| !matches!(b, BExp::Var(_)))
            .prop_map(Expr::Bool),
    ]
}

fn type_name() -> impl Strategy<Value = TypeName> {
    prop_oneof![Just(TypeName::Nat), Just(TypeName::Bool), Just(TypeName::Cmd)]
}

fn var_decl() -> impl Strategy<Value = VarDecl> {
    (type_name(), proptest::sample::select(NAMES), rhs())
        .prop_map(|(t, x, e)| VarDecl::new(t, x, e))
}

/// Arbitrary source-form statements, not necessarily well typed.
pub fn source_stmt() -> impl Strategy<Value = Stmt> {
    let leaf = prop_oneof![
        var_decl().prop_map(Stmt::Decl),
        (proptest::sample::select(NAMES), rhs()).prop_map(|(x, e)| Stmt::update(x, e)),
        proptest::sample::select(PROCS).prop_map(Stmt::call),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::par(a, b)),
            (bexp_over(NAMES, NAMES), inner.clone(), inner.clone())
                .prop_map(|(b, s, t)| Stmt::if_(b, s, t)),
            (bexp_over(NAMES, NAMES), inner.clone()).prop_map(|(b, s)| Stmt::while_(b, s)),
            inner.clone().prop_map(Stmt::protect),
            (
                proptest::collection::vec(var_decl(), 0..3),
                proptest::collection::vec(
                    (proptest::sample::select(PROCS), inner.clone())
                        .prop_map(|(p, s)| ProcDecl::new(p, s)),
                    0..2
                ),
                inner,
            )
                .prop_map(|(vs, ps, s)| Stmt::begin(vs, ps, s)),
        ]
    })
}

/// Source statements plus every runtime-only form, in any position.
pub fn runtime_stmt() -> impl Strategy<Value = Stmt> {
    let value = prop_oneof![
        (0u64..5).prop_map(Value::Nat),
        Just(Value::True),
        Just(Value::False),
        Just(Value::Void),
    ];
    let leaf = prop_oneof![
        source_stmt(),
        Just(Stmt::BeginScope),
        Just(Stmt::EndScope),
        Just(Stmt::Empty),
        value.prop_map(Stmt::Val),
        rhs().prop_map(Stmt::Expr),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::par(a, b)),
            inner.clone().prop_map(Stmt::protected),
            (proptest::sample::select(PROCS), inner).prop_map(|(p, s)| Stmt::Proc(ProcDecl::new(p, s))),
        ]
    })
}

pub const NATS: &[&str] = &["x", "y", "z"];
pub const BOOLS: &[&str] = &["b"];
pub const LEFT_NATS: &[&str] = &["x", "y"];
pub const LEFT_BOOLS: &[&str] = &["b"];
pub const RIGHT_NATS: &[&str] = &["z"];
pub const RIGHT_BOOLS: &[&str] = &["c"];

/// Initial store binding every generated global.
pub fn globals() -> Store {
    while_core::env::parse_store("({x=1, y=2, z=0, b=false, c=true})").unwrap()
}

fn typed_update(
    nats: &'static [&'static str],
    bools: &'static [&'static str],
) -> impl Strategy<Value = Stmt> {
    prop_oneof![
        3 => (proptest::sample::select(nats), aexp_over(nats)).prop_map(|(x, a)| Stmt::update(x, a)),
        1 => (proptest::sample::select(bools), bexp_over(nats, bools)).prop_map(|(x, b)| Stmt::update(x, b)),
    ]
}

fn small_aexp(vars: &'static [&'static str]) -> impl Strategy<Value = AExp> {
    let leaf = || {
        prop_oneof![
            (0u64..12).prop_map(AExp::Num),
            proptest::sample::select(vars).prop_map(AExp::var),
        ]
    };
    prop_oneof![
        leaf(),
        (leaf(), leaf()).prop_map(|(a, b)| AExp::add(a, b)),
        (leaf(), leaf()).prop_map(|(a, b)| AExp::sub(a, b)),
        (leaf(), leaf()).prop_map(|(a, b)| AExp::mul(a, b)),
    ]
}

fn small_bexp(
    nats: &'static [&'static str],
    bools: &'static [&'static str],
) -> impl Strategy<Value = BExp> {
    prop_oneof![
        any::<bool>().prop_map(BExp::lit),
        proptest::sample::select(bools).prop_map(BExp::var),
        proptest::sample::select(bools).prop_map(|b| BExp::not(BExp::var(b))),
        (small_aexp(nats), small_aexp(nats)).prop_map(|(a, b)| BExp::le(a, b)),
    ]
}

/// Updates, sequences and conditionals over small expressions.
pub fn straight_stmt(
    nats: &'static [&'static str],
    bools: &'static [&'static str],
) -> impl Strategy<Value = Stmt> {
    let update = prop_oneof![
        3 => (proptest::sample::select(nats), small_aexp(nats)).prop_map(|(x, a)| Stmt::update(x, a)),
        1 => (proptest::sample::select(bools), small_bexp(nats, bools)).prop_map(|(x, b)| Stmt::update(x, b)),
    ];
    update.prop_recursive(2, 6, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::seq(a, b)),
            (small_bexp(nats, bools), inner.clone(), inner).prop_map(|(b, s, t)| Stmt::if_(b, s, t)),
        ]
    })
}

/// Loops that always terminate: `n` counts down from a small literal.
fn counted(body: Stmt, n: u64) -> Stmt {
    Stmt::begin(
        vec![VarDecl::new(TypeName::Nat, "n", AExp::Num(n))],
        vec![],
        Stmt::while_(
            BExp::not(BExp::eq(AExp::var("n"), AExp::Num(0))),
            Stmt::seq(body, Stmt::update("n", AExp::sub(AExp::var("n"), AExp::Num(1)))),
        ),
    )
}

/// Par-free, protect-free statements over `nats`; loops are counted.
pub fn simple_stmt(nats: &'static [&'static str]) -> impl Strategy<Value = Stmt> {
    typed_update(nats, BOOLS).prop_recursive(3, 12, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::seq(a, b)),
            (bexp_over(nats, BOOLS), inner.clone(), inner.clone())
                .prop_map(|(b, s, t)| Stmt::if_(b, s, t)),
            (inner, 0u64..3).prop_map(|(s, n)| counted(s, n)),
        ]
    })
}

/// Well-typed, terminating, par-free programs under [`globals`] and the
/// matching type environment. Blocks declare fresh locals and procedures;
/// procedures only touch globals so every call is safe.
pub fn typed_stmt() -> impl Strategy<Value = Stmt> {
    let leaf = typed_update(NATS, BOOLS);
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::seq(a, b)),
            (bexp_over(NATS, BOOLS), inner.clone(), inner.clone())
                .prop_map(|(b, s, t)| Stmt::if_(b, s, t)),
            (inner.clone(), 0u64..3).prop_map(|(s, n)| counted(s, n)),
            (0u64..5, inner.clone(), inner.clone(), any::<bool>()).prop_map(|(v, pbody, s, call)| {
                let body = if call { Stmt::seq(s, Stmt::call("p")) } else { s };
                Stmt::begin(
                    vec![VarDecl::new(TypeName::Nat, "w", AExp::Num(v))],
                    vec![ProcDecl::new("p", pbody)],
                    Stmt::seq(Stmt::update("x", AExp::add(AExp::var("x"), AExp::var("w"))), body),
                )
            }),
            inner.prop_map(Stmt::protect),
        ]
    })
}

pub fn typed_globals() -> while_core::typesys::TypeEnv {
    [("x", TypeName::Nat), ("y", TypeName::Nat), ("z", TypeName::Nat), ("b", TypeName::Bool), ("c", TypeName::Bool)]
        .into_iter()
        .collect()
}

/// Replaces every `par` by `;`, everywhere including blocks and procedures.
pub fn sequentialize(s: &Stmt) -> Stmt {
    let f = |s: &Stmt| Box::new(sequentialize(s));
    match s {
        Stmt::Par(a, b) | Stmt::Seq(a, b) => Stmt::Seq(f(a), f(b)),
        Stmt::If(c, a, b) => Stmt::If(c.clone(), f(a), f(b)),
        Stmt::While(c, a) => Stmt::While(c.clone(), f(a)),
        Stmt::Protect(a) => Stmt::Protect(f(a)),
        Stmt::Protected(a) => Stmt::Protected(f(a)),
        Stmt::Proc(p) => Stmt::Proc(ProcDecl::new(&p.name, sequentialize(&p.body))),
        Stmt::Begin(vs, ps, body) => Stmt::Begin(
            vs.clone(),
            ps.iter().map(|p| ProcDecl::new(&p.name, sequentialize(&p.body))).collect(),
            f(body),
        ),
        other => other.clone(),
    }
}
