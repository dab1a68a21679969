//! Abstract syntax: source statements, expressions and the runtime-only forms
//! introduced by reduction.

use std::fmt;

pub type Ident = String;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AExp {
    Num(u64),
    Var(Ident),
    Add(Box<AExp>, Box<AExp>),
    Sub(Box<AExp>, Box<AExp>),
    Mul(Box<AExp>, Box<AExp>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BExp {
    True,
    False,
    Var(Ident),
    Eq(Box<AExp>, Box<AExp>),
    Le(Box<AExp>, Box<AExp>),
    And(Box<BExp>, Box<BExp>),
    Not(Box<BExp>),
}

/// Right-hand side of a declaration or update: either sort of expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Arith(AExp),
    Bool(BExp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Nat(u64),
    True,
    False,
    Void,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeName {
    Nat,
    Bool,
    Cmd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarDecl {
    pub ty: TypeName,
    pub name: Ident,
    pub init: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProcDecl {
    pub name: Ident,
    pub body: Box<Stmt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stmt {
    Seq(Box<Stmt>, Box<Stmt>),
    If(BExp, Box<Stmt>, Box<Stmt>),
    While(BExp, Box<Stmt>),
    Decl(VarDecl),
    Update(Ident, Expr),
    /// Declarations are stored flattened: no nested compositions, no ε entries.
    Begin(Vec<VarDecl>, Vec<ProcDecl>, Box<Stmt>),
    Call(Ident),
    Par(Box<Stmt>, Box<Stmt>),
    Protect(Box<Stmt>),

    // Runtime-only forms below.
    Protected(Box<Stmt>),
    BeginScope,
    EndScope,
    /// A procedure declaration in statement position, produced by unfolding a block.
    Proc(ProcDecl),
    Expr(Expr),
    Val(Value),
    Empty,
}

#[allow(clippy::should_implement_trait)]
impl AExp {
    pub fn var(x: &str) -> Self {
        AExp::Var(x.to_string())
    }

    pub fn add(a: AExp, b: AExp) -> Self {
        AExp::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: AExp, b: AExp) -> Self {
        AExp::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: AExp, b: AExp) -> Self {
        AExp::Mul(Box::new(a), Box::new(b))
    }

    pub fn as_num(&self) -> Option<u64> {
        match self {
            AExp::Num(n) => Some(*n),
            _ => None,
        }
    }
}

#[allow(clippy::should_implement_trait)]
impl BExp {
    pub fn var(x: &str) -> Self {
        BExp::Var(x.to_string())
    }

    pub fn eq(a: AExp, b: AExp) -> Self {
        BExp::Eq(Box::new(a), Box::new(b))
    }

    pub fn le(a: AExp, b: AExp) -> Self {
        BExp::Le(Box::new(a), Box::new(b))
    }

    pub fn and(a: BExp, b: BExp) -> Self {
        BExp::And(Box::new(a), Box::new(b))
    }

    pub fn not(b: BExp) -> Self {
        BExp::Not(Box::new(b))
    }

    pub fn lit(b: bool) -> Self {
        if b {
            BExp::True
        } else {
            BExp::False
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            BExp::True => Some(true),
            BExp::False => Some(false),
            _ => None,
        }
    }
}

impl Expr {
    pub fn num(n: u64) -> Self {
        Expr::Arith(AExp::Num(n))
    }

    /// The value this expression denotes if it is already a literal.
    pub fn as_value(&self) -> Option<Value> {
        match self {
            Expr::Arith(AExp::Num(n)) => Some(Value::Nat(*n)),
            Expr::Bool(BExp::True) => Some(Value::True),
            Expr::Bool(BExp::False) => Some(Value::False),
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        self.as_value().is_some()
    }
}

impl From<AExp> for Expr {
    fn from(a: AExp) -> Self {
        Expr::Arith(a)
    }
}

impl From<BExp> for Expr {
    fn from(b: BExp) -> Self {
        Expr::Bool(b)
    }
}

impl Value {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Value::True
        } else {
            Value::False
        }
    }

    /// The literal expression for this value; `void` has none.
    pub fn to_expr(self) -> Option<Expr> {
        match self {
            Value::Nat(n) => Some(Expr::Arith(AExp::Num(n))),
            Value::True => Some(Expr::Bool(BExp::True)),
            Value::False => Some(Expr::Bool(BExp::False)),
            Value::Void => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::True => f.write_str("true"),
            Value::False => f.write_str("false"),
            Value::Void => f.write_str("void"),
        }
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeName::Nat => "Nat",
            TypeName::Bool => "Bool",
            TypeName::Cmd => "Cmd",
        })
    }
}

impl VarDecl {
    pub fn new(ty: TypeName, name: &str, init: impl Into<Expr>) -> Self {
        VarDecl {
            ty,
            name: name.to_string(),
            init: init.into(),
        }
    }
}

impl ProcDecl {
    pub fn new(name: &str, body: Stmt) -> Self {
        ProcDecl {
            name: name.to_string(),
            body: Box::new(body),
        }
    }
}

impl Stmt {
    pub fn seq(a: Stmt, b: Stmt) -> Self {
        Stmt::Seq(Box::new(a), Box::new(b))
    }

    pub fn par(a: Stmt, b: Stmt) -> Self {
        Stmt::Par(Box::new(a), Box::new(b))
    }

    pub fn if_(b: BExp, then: Stmt, els: Stmt) -> Self {
        Stmt::If(b, Box::new(then), Box::new(els))
    }

    pub fn while_(b: BExp, body: Stmt) -> Self {
        Stmt::While(b, Box::new(body))
    }

    pub fn decl(ty: TypeName, name: &str, init: impl Into<Expr>) -> Self {
        Stmt::Decl(VarDecl::new(ty, name, init))
    }

    pub fn update(name: &str, e: impl Into<Expr>) -> Self {
        Stmt::Update(name.to_string(), e.into())
    }

    pub fn begin(vars: Vec<VarDecl>, procs: Vec<ProcDecl>, body: Stmt) -> Self {
        Stmt::Begin(vars, procs, Box::new(body))
    }

    pub fn call(p: &str) -> Self {
        Stmt::Call(p.to_string())
    }

    pub fn protect(s: Stmt) -> Self {
        Stmt::Protect(Box::new(s))
    }

    pub fn protected(s: Stmt) -> Self {
        Stmt::Protected(Box::new(s))
    }

    pub const VOID: Stmt = Stmt::Val(Value::Void);

    pub fn as_value(&self) -> Option<Value> {
        match self {
            Stmt::Val(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Stmt::Val(_))
    }

    /// True iff no runtime-only constructor occurs anywhere in the statement.
    pub fn is_source_form(&self) -> bool {
        match self {
            Stmt::Seq(a, b) | Stmt::If(_, a, b) | Stmt::Par(a, b) => {
                a.is_source_form() && b.is_source_form()
            }
            Stmt::While(_, s) | Stmt::Protect(s) => s.is_source_form(),
            Stmt::Begin(_, procs, body) => {
                procs.iter().all(|p| p.body.is_source_form()) && body.is_source_form()
            }
            Stmt::Decl(_) | Stmt::Update(..) | Stmt::Call(_) => true,
            Stmt::Protected(_)
            | Stmt::BeginScope
            | Stmt::EndScope
            | Stmt::Proc(_)
            | Stmt::Expr(_)
            | Stmt::Val(_)
            | Stmt::Empty => false,
        }
    }

    pub fn contains_par(&self) -> bool {
        match self {
            Stmt::Par(..) => true,
            Stmt::Seq(a, b) | Stmt::If(_, a, b) => a.contains_par() || b.contains_par(),
            Stmt::While(_, s) | Stmt::Protect(s) | Stmt::Protected(s) => s.contains_par(),
            Stmt::Begin(_, procs, body) => {
                procs.iter().any(|p| p.body.contains_par()) || body.contains_par()
            }
            Stmt::Proc(p) => p.body.contains_par(),
            _ => false,
        }
    }
}

impl From<VarDecl> for Stmt {
    fn from(d: VarDecl) -> Self {
        Stmt::Decl(d)
    }
}

impl From<ProcDecl> for Stmt {
    fn from(p: ProcDecl) -> Self {
        Stmt::Proc(p)
    }
}
