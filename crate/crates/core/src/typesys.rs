//! Static typing with ordered variable environments Γ and procedure
//! environments Δ. Every accepted term yields a full derivation tree.

use std::fmt;

use thiserror::Error;

use crate::syntax::{pretty, pretty_expr, AExp, BExp, Expr, Ident, ProcDecl, Stmt, TypeName, VarDecl};

/// Γ: ordered bindings, duplicates allowed, the last binding of a name wins.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypeEnv {
    bindings: Vec<(Ident, TypeName)>,
}

impl TypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bindings(&self) -> &[(Ident, TypeName)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn lookup(&self, x: &str) -> Option<TypeName> {
        self.bindings.iter().rev().find(|(y, _)| y == x).map(|(_, t)| *t)
    }

    pub fn extended(&self, x: &str, t: TypeName) -> Self {
        let mut g = self.clone();
        g.bindings.push((x.to_string(), t));
        g
    }

    pub fn is_prefix_of(&self, other: &TypeEnv) -> bool {
        other.bindings.starts_with(&self.bindings)
    }
}

impl<S: Into<Ident>> FromIterator<(S, TypeName)> for TypeEnv {
    fn from_iter<I: IntoIterator<Item = (S, TypeName)>>(iter: I) -> Self {
        TypeEnv {
            bindings: iter.into_iter().map(|(x, t)| (x.into(), t)).collect(),
        }
    }
}

impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}: {t}")?;
        }
        f.write_str("}")
    }
}

/// Δ: one entry per procedure, in first-declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ProcTypeEnv {
    entries: Vec<(Ident, TypeEnv)>,
}

impl ProcTypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[(Ident, TypeEnv)] {
        &self.entries
    }

    pub fn get(&self, p: &str) -> Option<&TypeEnv> {
        self.entries.iter().find(|(q, _)| q == p).map(|(_, g)| g)
    }

    /// Re-declaration overwrites in place.
    pub fn with(&self, p: &str, g: TypeEnv) -> Self {
        let mut d = self.clone();
        match d.entries.iter_mut().find(|(q, _)| q == p) {
            Some(slot) => slot.1 = g,
            None => d.entries.push((p.to_string(), g)),
        }
        d
    }
}

impl fmt::Display for ProcTypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, g)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}: {g}")?;
        }
        f.write_str("}")
    }
}

pub fn env_union(g1: &TypeEnv, g2: &TypeEnv) -> TypeEnv {
    let mut g = g1.clone();
    g.bindings.extend(g2.bindings.iter().cloned());
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{before} is not a prefix of {after}")]
pub struct PrefixError {
    pub after: TypeEnv,
    pub before: TypeEnv,
}

/// Bindings appended to `before` to obtain `after`.
pub fn env_diff(after: &TypeEnv, before: &TypeEnv) -> Result<TypeEnv, PrefixError> {
    if !before.is_prefix_of(after) {
        return Err(PrefixError {
            after: after.clone(),
            before: before.clone(),
        });
    }
    Ok(TypeEnv {
        bindings: after.bindings[before.len()..].to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Subject {
    Expr(Expr),
    Stmt(Stmt),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Expr(e) => f.write_str(&pretty_expr(e)),
            Subject::Stmt(s) => f.write_str(&pretty(s)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Judgment {
    pub gamma_in: TypeEnv,
    pub delta_in: ProcTypeEnv,
    pub subject: Subject,
    pub ty: TypeName,
    pub gamma_out: TypeEnv,
    pub delta_out: ProcTypeEnv,
    pub rule: &'static str,
    pub children: Vec<Judgment>,
}

impl Judgment {
    /// Pre-order walk over the tree.
    pub fn walk(&self) -> Vec<&Judgment> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }

    pub fn rules(&self) -> Vec<&'static str> {
        self.walk().into_iter().map(|j| j.rule).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cause {
    Mismatch { expected: TypeName, found: TypeName },
    UnboundVariable(Ident),
    UnboundProcedure(Ident),
    LoopModifiesEnv,
    RuntimeOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("error[{rule}] at {at}: {cause}")]
pub struct TypeError {
    pub rule: &'static str,
    /// Printed form of the subject of the failing rule.
    pub at: String,
    pub cause: Cause,
}

impl fmt::Display for Cause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cause::Mismatch { expected, found } => write!(f, "expected {expected}, found {found}"),
            Cause::UnboundVariable(x) => write!(f, "unbound variable {x}"),
            Cause::UnboundProcedure(p) => write!(f, "unbound procedure {p}"),
            Cause::LoopModifiesEnv => f.write_str("loop body modifies environment"),
            Cause::RuntimeOnly => f.write_str("runtime-only construct"),
        }
    }
}

type Checked = Result<Judgment, TypeError>;

struct Ctx<'a> {
    gamma: &'a TypeEnv,
    delta: &'a ProcTypeEnv,
}

impl Ctx<'_> {
    fn fail(&self, rule: &'static str, at: impl fmt::Display, cause: Cause) -> TypeError {
        TypeError {
            rule,
            at: at.to_string(),
            cause,
        }
    }

    fn expect(&self, rule: &'static str, at: &Subject, j: &Judgment, t: TypeName) -> Result<(), TypeError> {
        if j.ty == t {
            Ok(())
        } else {
            Err(self.fail(rule, at, Cause::Mismatch { expected: t, found: j.ty }))
        }
    }

    fn expr_judgment(&self, e: Expr, ty: TypeName, rule: &'static str, children: Vec<Judgment>) -> Judgment {
        Judgment {
            gamma_in: self.gamma.clone(),
            delta_in: self.delta.clone(),
            subject: Subject::Expr(e),
            ty,
            gamma_out: self.gamma.clone(),
            delta_out: self.delta.clone(),
            rule,
            children,
        }
    }

    /// Variables form one syntactic category whichever sort the parser
    /// placed them in, so the subject is always recorded the same way.
    fn var(&self, x: &str) -> Checked {
        match self.gamma.lookup(x) {
            Some(t) => Ok(self.expr_judgment(Expr::Arith(AExp::var(x)), t, "T-Var", vec![])),
            None => Err(self.fail("T-Var", x, Cause::UnboundVariable(x.to_string()))),
        }
    }

    fn aexp(&self, a: &AExp) -> Checked {
        let e = Expr::Arith(a.clone());
        let (rule, l, r) = match a {
            AExp::Num(_) => return Ok(self.expr_judgment(e, TypeName::Nat, "T-Nat", vec![])),
            AExp::Var(x) => return self.var(x),
            AExp::Add(l, r) => ("T-Add", l, r),
            AExp::Sub(l, r) => ("T-Sub", l, r),
            AExp::Mul(l, r) => ("T-Mult", l, r),
        };
        self.nat_operands(e, rule, l, r, TypeName::Nat)
    }

    fn nat_operands(&self, e: Expr, rule: &'static str, l: &AExp, r: &AExp, ty: TypeName) -> Checked {
        let at = Subject::Expr(e.clone());
        let jl = self.aexp(l)?;
        self.expect(rule, &at, &jl, TypeName::Nat)?;
        let jr = self.aexp(r)?;
        self.expect(rule, &at, &jr, TypeName::Nat)?;
        Ok(self.expr_judgment(e, ty, rule, vec![jl, jr]))
    }

    fn bexp(&self, b: &BExp) -> Checked {
        let e = Expr::Bool(b.clone());
        let at = Subject::Expr(e.clone());
        match b {
            BExp::True => Ok(self.expr_judgment(e, TypeName::Bool, "T-True", vec![])),
            BExp::False => Ok(self.expr_judgment(e, TypeName::Bool, "T-False", vec![])),
            BExp::Var(x) => self.var(x),
            BExp::Eq(l, r) => self.nat_operands(e, "T-Equal", l, r, TypeName::Bool),
            BExp::Le(l, r) => self.nat_operands(e, "T-LEqual", l, r, TypeName::Bool),
            BExp::And(l, r) => {
                let jl = self.bexp(l)?;
                self.expect("T-And", &at, &jl, TypeName::Bool)?;
                let jr = self.bexp(r)?;
                self.expect("T-And", &at, &jr, TypeName::Bool)?;
                Ok(self.expr_judgment(e, TypeName::Bool, "T-And", vec![jl, jr]))
            }
            BExp::Not(inner) => {
                let j = self.bexp(inner)?;
                self.expect("T-Not", &at, &j, TypeName::Bool)?;
                Ok(self.expr_judgment(e, TypeName::Bool, "T-Not", vec![j]))
            }
        }
    }

    fn expr(&self, e: &Expr) -> Checked {
        match e {
            Expr::Arith(a) => self.aexp(a),
            Expr::Bool(b) => self.bexp(b),
        }
    }
}

pub fn type_of_expr(gamma: &TypeEnv, delta: &ProcTypeEnv, e: &Expr) -> Checked {
    Ctx { gamma, delta }.expr(e)
}

struct StmtOut {
    ty: TypeName,
    gamma: TypeEnv,
    delta: ProcTypeEnv,
    rule: &'static str,
    children: Vec<Judgment>,
}

fn cmd(gamma: TypeEnv, delta: ProcTypeEnv, rule: &'static str, children: Vec<Judgment>) -> StmtOut {
    StmtOut {
        ty: TypeName::Cmd,
        gamma,
        delta,
        rule,
        children,
    }
}

fn additions(j: &Judgment) -> TypeEnv {
    env_diff(&j.gamma_out, &j.gamma_in).expect("statement checking only appends bindings")
}

fn right_nested(items: Vec<Stmt>) -> Stmt {
    let mut it = items.into_iter().rev();
    let last = it.next().unwrap_or(Stmt::Empty);
    it.fold(last, |acc, s| Stmt::seq(s, acc))
}

fn decls(vars: &[VarDecl]) -> Stmt {
    right_nested(vars.iter().cloned().map(Stmt::Decl).collect())
}

fn procs(ps: &[ProcDecl]) -> Stmt {
    right_nested(ps.iter().cloned().map(Stmt::Proc).collect())
}

/// Checks declaration lists and the empty declaration `ε` too; these are
/// the subjects of the first two premises of a block.
fn stmt_inner(gamma: &TypeEnv, delta: &ProcTypeEnv, s: &Stmt, in_block: bool) -> Checked {
    let ctx = Ctx { gamma, delta };
    let subject = Subject::Stmt(s.clone());
    let out = match s {
        Stmt::Decl(d) => {
            let j = ctx.expr(&d.init)?;
            ctx.expect("T-Assign", &subject, &j, d.ty)?;
            cmd(gamma.extended(&d.name, d.ty), delta.clone(), "T-Assign", vec![j])
        }
        Stmt::Update(x, e) => {
            let jx = ctx.var(x).map_err(|_| {
                ctx.fail("T-Update", &subject, Cause::UnboundVariable(x.clone()))
            })?;
            let je = ctx.expr(e)?;
            ctx.expect("T-Update", &subject, &je, jx.ty)?;
            cmd(gamma.clone(), delta.clone(), "T-Update", vec![jx, je])
        }
        Stmt::Seq(a, b) => {
            let ja = stmt_inner(gamma, delta, a, in_block)?;
            let jb = stmt_inner(&ja.gamma_out, &ja.delta_out, b, in_block)?;
            StmtOut {
                ty: jb.ty,
                gamma: jb.gamma_out.clone(),
                delta: jb.delta_out.clone(),
                rule: "T-Seq",
                children: vec![ja, jb],
            }
        }
        Stmt::If(b, t, e) => {
            let jb = ctx.bexp(b)?;
            ctx.expect("T-If", &subject, &jb, TypeName::Bool)?;
            let jt = stmt_inner(gamma, delta, t, false)?;
            let je = stmt_inner(gamma, delta, e, false)?;
            ctx.expect("T-If", &subject, &je, jt.ty)?;
            let g = env_union(&env_union(gamma, &additions(&jt)), &additions(&je));
            StmtOut {
                ty: jt.ty,
                gamma: g,
                delta: delta.clone(),
                rule: "T-If",
                children: vec![jb, jt, je],
            }
        }
        Stmt::While(b, body) => {
            let jb = ctx.bexp(b)?;
            ctx.expect("T-While", &subject, &jb, TypeName::Bool)?;
            let js = stmt_inner(gamma, delta, body, false)?;
            ctx.expect("T-While", &subject, &js, TypeName::Cmd)?;
            if js.gamma_out != *gamma || js.delta_out != *delta {
                return Err(ctx.fail("T-While", &subject, Cause::LoopModifiesEnv));
            }
            cmd(gamma.clone(), delta.clone(), "T-While", vec![jb, js])
        }
        Stmt::Begin(vars, ps, body) => {
            let jv = stmt_inner(gamma, delta, &decls(vars), true)?;
            let jp = stmt_inner(&jv.gamma_out, delta, &procs(ps), true)?;
            let js = stmt_inner(&jv.gamma_out, &jp.delta_out, body, false)?;
            ctx.expect("T-Begin", &subject, &js, TypeName::Cmd)?;
            cmd(gamma.clone(), delta.clone(), "T-Begin", vec![jv, jp, js])
        }
        Stmt::Proc(p) if in_block => {
            let js = stmt_inner(gamma, delta, &p.body, false)?;
            ctx.expect("T-Proc", &subject, &js, TypeName::Cmd)?;
            let added = additions(&js);
            cmd(gamma.clone(), delta.with(&p.name, added), "T-Proc", vec![js])
        }
        Stmt::Empty if in_block => cmd(gamma.clone(), delta.clone(), "T-Empty", vec![]),
        Stmt::Call(p) => match delta.get(p) {
            Some(g) => cmd(env_union(gamma, g), delta.clone(), "T-Call", vec![]),
            None => return Err(ctx.fail("T-Call", &subject, Cause::UnboundProcedure(p.clone()))),
        },
        Stmt::Par(a, b) => {
            let ja = stmt_inner(gamma, delta, a, false)?;
            let jb = stmt_inner(gamma, delta, b, false)?;
            let g = env_union(&env_union(gamma, &additions(&ja)), &additions(&jb));
            cmd(g, delta.clone(), "T-Par", vec![ja, jb])
        }
        Stmt::Protect(body) => {
            let js = stmt_inner(gamma, delta, body, false)?;
            cmd(js.gamma_out.clone(), delta.clone(), "T-Protect", vec![js])
        }
        Stmt::Proc(_)
        | Stmt::Empty
        | Stmt::Protected(_)
        | Stmt::BeginScope
        | Stmt::EndScope
        | Stmt::Expr(_)
        | Stmt::Val(_) => return Err(ctx.fail("check", &subject, Cause::RuntimeOnly)),
    };
    Ok(Judgment {
        gamma_in: gamma.clone(),
        delta_in: delta.clone(),
        subject,
        ty: out.ty,
        gamma_out: out.gamma,
        delta_out: out.delta,
        rule: out.rule,
        children: out.children,
    })
}

pub fn type_of_stmt(gamma: &TypeEnv, delta: &ProcTypeEnv, s: &Stmt) -> Checked {
    stmt_inner(gamma, delta, s, false)
}

/// Checks `s` from empty environments.
pub fn check_program(s: &Stmt) -> Checked {
    type_of_stmt(&TypeEnv::new(), &ProcTypeEnv::new(), s)
}

/// One line per judgment, children indented two spaces below their parent.
pub fn render_derivation(j: &Judgment) -> String {
    fn go(j: &Judgment, depth: usize, out: &mut String) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(&format!(
            "{}: {} {} ⊢ {} : {} ⊣ {} {}\n",
            j.rule, j.gamma_in, j.delta_in, j.subject, j.ty, j.gamma_out, j.delta_out
        ));
        for c in &j.children {
            go(c, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(j, 0, &mut out);
    out
}
