//! Evaluation contexts: decomposition of a runtime statement into a context
//! and a redex, and the inverse `plug`.
//!
//! A context is a path of frames from the root to the hole. Sequential and
//! parallel composition contribute frames too (`SeqFirst`, `ParLeft`,
//! `ParRight`) so a step found under them can be labeled with the matching
//! congruence rule.

use super::ast::*;
use crate::semantics::holds_lock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Le,
}

impl ArithOp {
    pub fn build(self, l: AExp, r: AExp) -> AExp {
        match self {
            ArithOp::Add => AExp::add(l, r),
            ArithOp::Sub => AExp::sub(l, r),
            ArithOp::Mul => AExp::mul(l, r),
        }
    }
}

impl CmpOp {
    pub fn build(self, l: AExp, r: AExp) -> BExp {
        match self {
            CmpOp::Eq => BExp::eq(l, r),
            CmpOp::Le => BExp::le(l, r),
        }
    }
}

/// One step of a context path; each variant stores the siblings of the hole.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    SeqFirst(Stmt),
    ParLeft(Stmt),
    ParRight(Stmt),
    ProtectedBody,
    IfCond(Stmt, Stmt),
    DeclRhs(TypeName, Ident),
    UpdateRhs(Ident),
    ExprStmt,
    ArithLeft(ArithOp, AExp),
    ArithRight(ArithOp, u64),
    CmpLeft(CmpOp, AExp),
    CmpRight(CmpOp, u64),
    AndLeft(BExp),
    AndRight(bool),
    NotArg,
}

/// What may be plugged into a frame's hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoleSort {
    Stmt,
    /// Either sort of expression (right-hand sides, expression statements).
    AnyExpr,
    Arith,
    Bool,
}

impl Frame {
    pub fn hole_sort(&self) -> HoleSort {
        match self {
            Frame::SeqFirst(_) | Frame::ParLeft(_) | Frame::ParRight(_) | Frame::ProtectedBody => {
                HoleSort::Stmt
            }
            Frame::DeclRhs(..) | Frame::UpdateRhs(_) | Frame::ExprStmt => HoleSort::AnyExpr,
            Frame::ArithLeft(..) | Frame::ArithRight(..) | Frame::CmpLeft(..) | Frame::CmpRight(..) => {
                HoleSort::Arith
            }
            Frame::IfCond(..) | Frame::AndLeft(_) | Frame::AndRight(_) | Frame::NotArg => {
                HoleSort::Bool
            }
        }
    }
}

/// Partially rebuilt term while plugging outward.
#[derive(Clone, Debug)]
pub(crate) enum Node {
    S(Stmt),
    E(Expr),
}

impl Node {
    fn into_arith(self) -> AExp {
        match self {
            Node::E(Expr::Arith(a)) => a,
            other => panic!("context hole expects an arithmetic expression, got {other:?}"),
        }
    }

    fn into_bool(self) -> BExp {
        match self {
            Node::E(Expr::Bool(b)) => b,
            other => panic!("context hole expects a boolean expression, got {other:?}"),
        }
    }

    fn into_expr(self) -> Expr {
        match self {
            Node::E(e) => e,
            other => panic!("context hole expects an expression, got {other:?}"),
        }
    }

    pub(crate) fn into_stmt(self) -> Stmt {
        match self {
            Node::S(s) => s,
            Node::E(e) => panic!("context hole expects a statement, got expression {e:?}"),
        }
    }

    /// Wraps this node in one frame.
    pub(crate) fn wrap(self, frame: &Frame) -> Node {
        match frame {
            Frame::SeqFirst(rest) => Node::S(Stmt::seq(self.into_stmt(), rest.clone())),
            Frame::ParLeft(r) => Node::S(Stmt::par(self.into_stmt(), r.clone())),
            Frame::ParRight(l) => Node::S(Stmt::par(l.clone(), self.into_stmt())),
            Frame::ProtectedBody => Node::S(Stmt::protected(self.into_stmt())),
            Frame::IfCond(t, e) => Node::S(Stmt::If(
                self.into_bool(),
                Box::new(t.clone()),
                Box::new(e.clone()),
            )),
            Frame::DeclRhs(ty, name) => Node::S(Stmt::Decl(VarDecl {
                ty: *ty,
                name: name.clone(),
                init: self.into_expr(),
            })),
            Frame::UpdateRhs(x) => Node::S(Stmt::Update(x.clone(), self.into_expr())),
            Frame::ExprStmt => Node::S(Stmt::Expr(self.into_expr())),
            Frame::ArithLeft(op, r) => Node::E(Expr::Arith(op.build(self.into_arith(), r.clone()))),
            Frame::ArithRight(op, n) => Node::E(Expr::Arith(op.build(AExp::Num(*n), self.into_arith()))),
            Frame::CmpLeft(op, r) => Node::E(Expr::Bool(op.build(self.into_arith(), r.clone()))),
            Frame::CmpRight(op, n) => Node::E(Expr::Bool(op.build(AExp::Num(*n), self.into_arith()))),
            Frame::AndLeft(r) => Node::E(Expr::Bool(BExp::and(self.into_bool(), r.clone()))),
            Frame::AndRight(b) => Node::E(Expr::Bool(BExp::and(BExp::lit(*b), self.into_bool()))),
            Frame::NotArg => Node::E(Expr::Bool(BExp::not(self.into_bool()))),
        }
    }

    /// Lifts a filler statement to the sort the innermost frame expects.
    pub(crate) fn for_hole(filler: Stmt, sort: HoleSort) -> Node {
        match (sort, filler) {
            (HoleSort::Stmt, s) => Node::S(s),
            (_, Stmt::Expr(e)) => Node::E(e),
            (sort, s) => panic!("cannot plug statement {s:?} into a {sort:?} hole"),
        }
    }
}

/// A path of frames, outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EvalContext {
    pub frames: Vec<Frame>,
}

impl EvalContext {
    pub fn empty() -> Self {
        EvalContext::default()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Sort of the hole; an empty context holds a statement.
    pub fn hole_sort(&self) -> HoleSort {
        self.frames.last().map_or(HoleSort::Stmt, Frame::hole_sort)
    }

    /// Rebuilds the whole statement with `filler` at the hole. Expression
    /// holes take `Stmt::Expr` fillers of the right sort.
    ///
    /// Panics if the filler does not fit the hole.
    pub fn plug(&self, filler: Stmt) -> Stmt {
        let mut node = Node::for_hole(filler, self.hole_sort());
        for frame in self.frames.iter().rev() {
            node = node.wrap(frame);
        }
        node.into_stmt()
    }
}

pub fn plug(ctx: &EvalContext, s: Stmt) -> Stmt {
    ctx.plug(s)
}

/// Result of searching a statement for redexes.
#[derive(Debug, Default)]
pub struct Decomposition {
    pub redexes: Vec<(EvalContext, Stmt)>,
    /// Some parallel side was not scheduled because the other side is protected.
    pub blocked: bool,
}

/// Every decomposition `s = ctx[redex]`. Par-free statements have at most one.
pub fn decompose(s: &Stmt) -> Vec<(EvalContext, Stmt)> {
    decompose_all(s).redexes
}

pub fn decompose_all(s: &Stmt) -> Decomposition {
    let mut w = Walker {
        frames: Vec::new(),
        out: Decomposition::default(),
    };
    w.stmt(s);
    w.out
}

struct Walker {
    frames: Vec<Frame>,
    out: Decomposition,
}

impl Walker {
    fn found(&mut self, redex: Stmt) {
        let ctx = EvalContext {
            frames: self.frames.clone(),
        };
        self.out.redexes.push((ctx, redex));
    }

    fn under<F: FnOnce(&mut Self)>(&mut self, frame: Frame, f: F) {
        self.frames.push(frame);
        f(self);
        self.frames.pop();
    }

    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::Val(_) => {}
            Stmt::Seq(head, rest) => {
                if head.is_value() {
                    self.found(s.clone());
                } else {
                    self.under(Frame::SeqFirst((**rest).clone()), |w| w.stmt(head));
                }
            }
            Stmt::Par(l, r) => {
                if holds_lock(r) {
                    self.out.blocked = true;
                } else {
                    self.under(Frame::ParLeft((**r).clone()), |w| w.stmt(l));
                }
                if holds_lock(l) {
                    self.out.blocked = true;
                } else {
                    self.under(Frame::ParRight((**l).clone()), |w| w.stmt(r));
                }
            }
            Stmt::Protected(body) => {
                if body.is_value() {
                    self.found(s.clone());
                } else {
                    self.under(Frame::ProtectedBody, |w| w.stmt(body));
                }
            }
            Stmt::If(b, t, e) => {
                if b.as_bool().is_some() {
                    self.found(s.clone());
                } else {
                    self.under(Frame::IfCond((**t).clone(), (**e).clone()), |w| w.bexp(b));
                }
            }
            Stmt::Decl(d) => {
                if d.init.is_value() {
                    self.found(s.clone());
                } else {
                    self.under(Frame::DeclRhs(d.ty, d.name.clone()), |w| w.expr(&d.init));
                }
            }
            Stmt::Update(x, e) => {
                if e.is_value() {
                    self.found(s.clone());
                } else {
                    self.under(Frame::UpdateRhs(x.clone()), |w| w.expr(e));
                }
            }
            Stmt::Expr(e) => {
                if e.is_value() {
                    self.found(s.clone());
                } else {
                    self.under(Frame::ExprStmt, |w| w.expr(e));
                }
            }
            Stmt::While(..)
            | Stmt::Begin(..)
            | Stmt::Call(_)
            | Stmt::Protect(_)
            | Stmt::BeginScope
            | Stmt::EndScope
            | Stmt::Proc(_)
            | Stmt::Empty => self.found(s.clone()),
        }
    }

    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::Arith(a) => self.aexp(a),
            Expr::Bool(b) => self.bexp(b),
        }
    }

    fn aexp(&mut self, a: &AExp) {
        let (op, l, r) = match a {
            AExp::Num(_) => return,
            AExp::Var(_) => return self.found(Stmt::Expr(Expr::Arith(a.clone()))),
            AExp::Add(l, r) => (ArithOp::Add, l, r),
            AExp::Sub(l, r) => (ArithOp::Sub, l, r),
            AExp::Mul(l, r) => (ArithOp::Mul, l, r),
        };
        match (l.as_num(), r.as_num()) {
            (None, _) => self.under(Frame::ArithLeft(op, (**r).clone()), |w| w.aexp(l)),
            (Some(n), None) => self.under(Frame::ArithRight(op, n), |w| w.aexp(r)),
            (Some(_), Some(_)) => self.found(Stmt::Expr(Expr::Arith(a.clone()))),
        }
    }

    fn bexp(&mut self, b: &BExp) {
        let redex = || Stmt::Expr(Expr::Bool(b.clone()));
        match b {
            BExp::True | BExp::False => {}
            BExp::Var(_) => self.found(redex()),
            BExp::Eq(l, r) | BExp::Le(l, r) => {
                let op = if matches!(b, BExp::Eq(..)) { CmpOp::Eq } else { CmpOp::Le };
                match (l.as_num(), r.as_num()) {
                    (None, _) => self.under(Frame::CmpLeft(op, (**r).clone()), |w| w.aexp(l)),
                    (Some(n), None) => self.under(Frame::CmpRight(op, n), |w| w.aexp(r)),
                    (Some(_), Some(_)) => self.found(redex()),
                }
            }
            BExp::And(l, r) => match (l.as_bool(), r.as_bool()) {
                (None, _) => self.under(Frame::AndLeft((**r).clone()), |w| w.bexp(l)),
                (Some(v), None) => self.under(Frame::AndRight(v), |w| w.bexp(r)),
                (Some(_), Some(_)) => self.found(redex()),
            },
            BExp::Not(inner) => {
                if inner.as_bool().is_some() {
                    self.found(redex());
                } else {
                    self.under(Frame::NotArg, |w| w.bexp(inner));
                }
            }
        }
    }
}
