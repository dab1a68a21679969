//! One-step reduction over configurations `(σ, ρ, S)`.
//!
//! A step is found by decomposing the statement into a context and a redex,
//! contracting the redex with an axiom, and rebuilding outward. When the
//! rebuilt head of a sequence or a side of a `par` has become a value, the
//! rebuild applies the discharging rule (Seq2, Par2, Par4) instead of the
//! plain congruence (Seq1, Par1, Par3).

use std::fmt;

use thiserror::Error;

use crate::env::{self, EnvError, ProcEnv, Store};
use crate::syntax::context::{decompose_all, EvalContext, Frame, HoleSort, Node};
use crate::syntax::{pretty, AExp, BExp, Expr, Ident, Stmt, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub store: Store,
    pub procs: ProcEnv,
    pub stmt: Stmt,
}

impl Configuration {
    /// Empty global scopes.
    pub fn new(stmt: Stmt) -> Self {
        Configuration {
            store: Store::new(),
            procs: ProcEnv::new(),
            stmt,
        }
    }

    /// Seeds σ; ρ gets as many empty frames so both stacks stay level.
    pub fn with_store(stmt: Stmt, store: Store) -> Self {
        let mut procs = ProcEnv::new();
        while procs.depth() < store.depth() {
            procs = procs.pushed();
        }
        Configuration { store, procs, stmt }
    }

    pub fn is_terminal(&self) -> bool {
        is_terminal(self)
    }
}

pub fn is_terminal(c: &Configuration) -> bool {
    c.stmt.is_value()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Assign,
    Update,
    Seq1,
    Seq2,
    IfTrue,
    IfFalse,
    While,
    Begin,
    BeginScope,
    EndScope,
    Proc,
    Call,
    Par1,
    Par2,
    Par3,
    Par4,
    Protect,
    Protected,
    Empty,
    SeqDischarge,
    ExprVar,
    ExprAdd,
    ExprSub,
    ExprMult,
    ExprEq,
    ExprLe,
    ExprAnd,
    ExprNot,
    ExprVal,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Assign => "Assign",
            Rule::Update => "Update",
            Rule::Seq1 => "Seq1",
            Rule::Seq2 => "Seq2",
            Rule::IfTrue => "If-True",
            Rule::IfFalse => "If-False",
            Rule::While => "While",
            Rule::Begin => "Begin",
            Rule::BeginScope => "BeginScope",
            Rule::EndScope => "EndScope",
            Rule::Proc => "Proc",
            Rule::Call => "Call",
            Rule::Par1 => "Par1",
            Rule::Par2 => "Par2",
            Rule::Par3 => "Par3",
            Rule::Par4 => "Par4",
            Rule::Protect => "Protect",
            Rule::Protected => "Protected",
            Rule::Empty => "Empty",
            Rule::SeqDischarge => "Seq-discharge",
            Rule::ExprVar => "Expr-Var",
            Rule::ExprAdd => "Expr-Add",
            Rule::ExprSub => "Expr-Sub",
            Rule::ExprMult => "Expr-Mult",
            Rule::ExprEq => "Expr-Eq",
            Rule::ExprLe => "Expr-Le",
            Rule::ExprAnd => "Expr-And",
            Rule::ExprNot => "Expr-Not",
            Rule::ExprVal => "Expr-Val",
        }
    }

    /// Side of a `par` a congruence rule stepped, if it is one of Par1..Par4.
    pub fn par_side(self) -> Option<Side> {
        match self {
            Rule::Par1 | Rule::Par2 => Some(Side::Left),
            Rule::Par3 | Rule::Par4 => Some(Side::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// One labeled reduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// The axiom that rewrote the redex.
    pub rule: Rule,
    /// Congruence rules from the root down to the redex.
    pub via: Vec<Rule>,
    pub next: Configuration,
}

impl Step {
    /// `Seq2/Assign`-style label: congruences, then the axiom.
    pub fn label(&self) -> String {
        let mut s = String::new();
        for r in &self.via {
            s.push_str(r.name());
            s.push('/');
        }
        s.push_str(self.rule.name());
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Error)]
pub enum StuckReason {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Ident),
    #[error("unbound procedure `{0}`")]
    UnboundProcedure(Ident),
    #[error("`{0}` is already declared in the current scope")]
    Redeclared(Ident),
    #[error("expected {expected}, found {found}")]
    WrongOperand { expected: &'static str, found: Value },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("cannot pop the global scope")]
    GlobalScope,
    #[error("blocked by a protected region")]
    Blocked,
    #[error("no applicable rule")]
    NoRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StuckInfo {
    /// Printed form of the offending sub-statement.
    pub redex: String,
    pub reason: StuckReason,
}

impl fmt::Display for StuckInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stuck at `{}`: {}", self.redex, self.reason)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Successors {
    pub steps: Vec<Step>,
    /// Set iff `steps` is empty and the statement is not a value.
    pub stuck: Option<StuckInfo>,
}

/// `S` is an atomic region, pending (`protect`) or acquired (`protected`),
/// in head position.
pub fn protected_pred(s: &Stmt) -> bool {
    match s {
        Stmt::Protect(_) | Stmt::Protected(_) => true,
        Stmt::Seq(head, _) => protected_pred(head),
        Stmt::Par(l, r) => protected_pred(l) || protected_pred(r),
        _ => false,
    }
}

/// `S` holds the lock: an acquired region is in head position.
///
/// This is the gate for `par`: a side may step only while the other side
/// does not hold the lock. A pending `protect` competes for the lock like
/// any other step, so the region runs either entirely before or entirely
/// after each step of the other side.
pub fn holds_lock(s: &Stmt) -> bool {
    match s {
        Stmt::Protected(_) => true,
        Stmt::Seq(head, _) => holds_lock(head),
        Stmt::Par(l, r) => holds_lock(l) || holds_lock(r),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprStep {
    Expr(Expr),
    Value(Value),
    NoStep,
    Stuck(StuckReason),
}

/// One small step on a standalone expression.
pub fn eval_expr_step(store: &Store, e: &Expr) -> ExprStep {
    if e.is_value() {
        return ExprStep::NoStep;
    }
    let d = decompose_all(&Stmt::Expr(e.clone()));
    let Some((ctx, redex)) = d.redexes.into_iter().next() else {
        return ExprStep::NoStep;
    };
    let Stmt::Expr(r) = redex else {
        unreachable!("expression decomposes to an expression redex")
    };
    match contract_expr(store, &r, ctx.hole_sort()) {
        Ok((_, reduct)) => match ctx.plug(Stmt::Expr(reduct)) {
            Stmt::Expr(next) => match next.as_value() {
                Some(v) => ExprStep::Value(v),
                None => ExprStep::Expr(next),
            },
            other => unreachable!("plugging under ExprStmt yields an expression, got {other:?}"),
        },
        Err(reason) => ExprStep::Stuck(reason),
    }
}

fn var_value(store: &Store, x: &str, sort: HoleSort) -> Result<Expr, StuckReason> {
    let v = env::lookup_var(store, x).map_err(|_| StuckReason::UnboundVariable(x.to_string()))?;
    let wrong = |expected| StuckReason::WrongOperand { expected, found: v };
    match (sort, v) {
        (HoleSort::Arith, Value::Nat(n)) => Ok(Expr::num(n)),
        (HoleSort::Arith, _) => Err(wrong("a numeral")),
        (HoleSort::Bool, Value::True | Value::False) => Ok(Expr::Bool(BExp::lit(v == Value::True))),
        (HoleSort::Bool, _) => Err(wrong("a boolean")),
        _ => v.to_expr().ok_or(wrong("a numeral or boolean")),
    }
}

fn contract_expr(store: &Store, e: &Expr, sort: HoleSort) -> Result<(Rule, Expr), StuckReason> {
    let nums = |l: &AExp, r: &AExp| (l.as_num().expect("left numeral"), r.as_num().expect("right numeral"));
    match e {
        Expr::Arith(AExp::Var(x)) | Expr::Bool(BExp::Var(x)) => {
            Ok((Rule::ExprVar, var_value(store, x, sort)?))
        }
        Expr::Arith(a) => {
            let (rule, n) = match a {
                AExp::Add(l, r) => {
                    let (l, r) = nums(l, r);
                    (Rule::ExprAdd, l.checked_add(r).ok_or(StuckReason::Overflow)?)
                }
                // natural subtraction truncates at zero
                AExp::Sub(l, r) => {
                    let (l, r) = nums(l, r);
                    (Rule::ExprSub, l.saturating_sub(r))
                }
                AExp::Mul(l, r) => {
                    let (l, r) = nums(l, r);
                    (Rule::ExprMult, l.checked_mul(r).ok_or(StuckReason::Overflow)?)
                }
                AExp::Num(_) | AExp::Var(_) => unreachable!("not a redex: {a:?}"),
            };
            Ok((rule, Expr::num(n)))
        }
        Expr::Bool(b) => {
            let (rule, v) = match b {
                BExp::Eq(l, r) => {
                    let (l, r) = nums(l, r);
                    (Rule::ExprEq, l == r)
                }
                BExp::Le(l, r) => {
                    let (l, r) = nums(l, r);
                    (Rule::ExprLe, l <= r)
                }
                BExp::And(l, r) => (
                    Rule::ExprAnd,
                    l.as_bool().expect("left boolean") && r.as_bool().expect("right boolean"),
                ),
                BExp::Not(inner) => (Rule::ExprNot, !inner.as_bool().expect("boolean operand")),
                BExp::True | BExp::False | BExp::Var(_) => unreachable!("not a redex: {b:?}"),
            };
            Ok((rule, Expr::Bool(BExp::lit(v))))
        }
    }
}

struct Contracted {
    rule: Rule,
    reduct: Stmt,
    store: Store,
    procs: ProcEnv,
}

fn env_reason(e: EnvError) -> StuckReason {
    match e {
        EnvError::Redeclared(x) => StuckReason::Redeclared(x),
        EnvError::Unbound(x) => StuckReason::UnboundVariable(x),
        EnvError::GlobalScope => StuckReason::GlobalScope,
    }
}

/// Right-nested `beginscope; decls; procs; body; endscope`.
fn unfold_block(block: &Stmt) -> Stmt {
    let Stmt::Begin(vars, procs, body) = block else {
        unreachable!("unfold_block on non-block")
    };
    let mut items: Vec<Stmt> = vec![Stmt::BeginScope];
    items.extend(vars.iter().cloned().map(Stmt::Decl));
    items.extend(procs.iter().cloned().map(Stmt::Proc));
    items.push((**body).clone());
    let mut acc = Stmt::EndScope;
    for item in items.into_iter().rev() {
        acc = Stmt::seq(item, acc);
    }
    acc
}

fn contract(c: &Configuration, ctx: &EvalContext, redex: &Stmt) -> Result<Contracted, StuckReason> {
    let keep = |rule, reduct| {
        Ok(Contracted {
            rule,
            reduct,
            store: c.store.clone(),
            procs: c.procs.clone(),
        })
    };
    if let Stmt::Expr(e) = redex {
        let sort = ctx.hole_sort();
        if sort != HoleSort::Stmt {
            let (rule, e) = contract_expr(&c.store, e, sort)?;
            return keep(rule, Stmt::Expr(e));
        }
    }
    match redex {
        Stmt::Expr(e) => keep(
            Rule::ExprVal,
            Stmt::Val(e.as_value().expect("expression statement redex is a literal")),
        ),
        Stmt::Seq(_, rest) => keep(Rule::SeqDischarge, (**rest).clone()),
        Stmt::Decl(d) => {
            let v = d.init.as_value().expect("declaration redex has a literal");
            let store = env::declare_var(&c.store, &d.name, v).map_err(env_reason)?;
            Ok(Contracted {
                rule: Rule::Assign,
                reduct: Stmt::VOID,
                store,
                procs: c.procs.clone(),
            })
        }
        Stmt::Update(x, e) => {
            let v = e.as_value().expect("update redex has a literal");
            let store = env::update_var(&c.store, x, v).map_err(env_reason)?;
            Ok(Contracted {
                rule: Rule::Update,
                reduct: Stmt::VOID,
                store,
                procs: c.procs.clone(),
            })
        }
        Stmt::If(b, t, e) => match b {
            BExp::True => keep(Rule::IfTrue, (**t).clone()),
            BExp::False => keep(Rule::IfFalse, (**e).clone()),
            _ => unreachable!("if redex has a literal condition"),
        },
        Stmt::While(b, body) => keep(
            Rule::While,
            Stmt::if_(
                b.clone(),
                Stmt::seq((**body).clone(), redex.clone()),
                Stmt::VOID,
            ),
        ),
        Stmt::Begin(..) => keep(Rule::Begin, unfold_block(redex)),
        Stmt::BeginScope => {
            let (store, procs) = env::push_scope(&c.store, &c.procs);
            Ok(Contracted {
                rule: Rule::BeginScope,
                reduct: Stmt::VOID,
                store,
                procs,
            })
        }
        Stmt::EndScope => {
            let (store, procs) = env::pop_scope(&c.store, &c.procs).map_err(env_reason)?;
            Ok(Contracted {
                rule: Rule::EndScope,
                reduct: Stmt::VOID,
                store,
                procs,
            })
        }
        Stmt::Proc(p) => {
            let procs = env::declare_proc(&c.procs, &p.name, (*p.body).clone())
                .map_err(env_reason)?;
            Ok(Contracted {
                rule: Rule::Proc,
                reduct: Stmt::VOID,
                store: c.store.clone(),
                procs,
            })
        }
        Stmt::Call(p) => {
            let body = env::lookup_proc(&c.procs, p)
                .map_err(|_| StuckReason::UnboundProcedure(p.clone()))?;
            keep(Rule::Call, body)
        }
        Stmt::Protect(body) => keep(Rule::Protect, Stmt::Protected(body.clone())),
        Stmt::Protected(_) => keep(Rule::Protected, Stmt::VOID),
        Stmt::Empty => keep(Rule::Empty, Stmt::VOID),
        Stmt::Par(..) | Stmt::Val(_) => unreachable!("not a redex: {redex:?}"),
    }
}

/// Plugs the reduct back, choosing Seq1/Seq2 and Par1..Par4 on the way out.
fn rebuild(ctx: &EvalContext, reduct: Stmt) -> (Vec<Rule>, Stmt) {
    let mut node = Node::for_hole(reduct, ctx.hole_sort());
    let mut via = Vec::new();
    for frame in ctx.frames.iter().rev() {
        node = match frame {
            Frame::SeqFirst(rest) => {
                let head = node.into_stmt();
                if head == Stmt::VOID {
                    via.push(Rule::Seq2);
                    Node::S(rest.clone())
                } else {
                    via.push(Rule::Seq1);
                    Node::S(Stmt::seq(head, rest.clone()))
                }
            }
            Frame::ParLeft(right) => {
                let left = node.into_stmt();
                if left.is_value() {
                    via.push(Rule::Par2);
                    Node::S(right.clone())
                } else {
                    via.push(Rule::Par1);
                    Node::S(Stmt::par(left, right.clone()))
                }
            }
            Frame::ParRight(left) => {
                let right = node.into_stmt();
                if right.is_value() {
                    via.push(Rule::Par4);
                    Node::S(left.clone())
                } else {
                    via.push(Rule::Par3);
                    Node::S(Stmt::par(left.clone(), right))
                }
            }
            other => node.wrap(other),
        };
    }
    via.reverse();
    (via, node.into_stmt())
}

/// All one-step reducts, in decomposition order (left `par` side first).
pub fn successors(c: &Configuration) -> Successors {
    let d = decompose_all(&c.stmt);
    let mut out = Successors::default();
    let mut first_failure = None;
    for (ctx, redex) in &d.redexes {
        match contract(c, ctx, redex) {
            Ok(done) => {
                let (via, stmt) = rebuild(ctx, done.reduct);
                out.steps.push(Step {
                    rule: done.rule,
                    via,
                    next: Configuration {
                        store: done.store,
                        procs: done.procs,
                        stmt,
                    },
                });
            }
            Err(reason) => {
                first_failure.get_or_insert(StuckInfo {
                    redex: pretty(redex),
                    reason,
                });
            }
        }
    }
    if out.steps.is_empty() && !c.is_terminal() {
        out.stuck = Some(first_failure.unwrap_or_else(|| StuckInfo {
            redex: pretty(&c.stmt),
            reason: if d.blocked {
                StuckReason::Blocked
            } else {
                StuckReason::NoRule
            },
        }));
    }
    out
}
