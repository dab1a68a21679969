//! Canonical printer. Parenthesizes and braces only where the parser's
//! precedence requires it, so `parse_program(pretty(s)) == s` for source
//! statements (given a boolean right-hand side is never a bare variable,
//! which the parser reads as arithmetic).

use super::ast::*;

const AND: u8 = 1;
const CMP: u8 = 2;
const ADD: u8 = 3;
const MUL: u8 = 4;
const NOT: u8 = 5;

const PAR: u8 = 0;
const SEQ: u8 = 1;
const UNIT: u8 = 2;

pub fn pretty(s: &Stmt) -> String {
    let mut out = String::new();
    stmt(&mut out, s, PAR);
    out
}

pub fn pretty_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr(&mut out, e);
    out
}

pub fn pretty_aexp(a: &AExp) -> String {
    let mut out = String::new();
    aexp(&mut out, a, 0);
    out
}

pub fn pretty_bexp(b: &BExp) -> String {
    let mut out = String::new();
    bexp(&mut out, b, 0);
    out
}

fn expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Arith(a) => aexp(out, a, 0),
        Expr::Bool(b) => bexp(out, b, 0),
    }
}

fn wrap(out: &mut String, parens: bool, body: impl FnOnce(&mut String)) {
    if parens {
        out.push('(');
    }
    body(out);
    if parens {
        out.push(')');
    }
}

fn aexp(out: &mut String, a: &AExp, min: u8) {
    match a {
        AExp::Num(n) => out.push_str(&n.to_string()),
        AExp::Var(x) => out.push_str(x),
        AExp::Add(l, r) | AExp::Sub(l, r) => wrap(out, min > ADD, |out| {
            aexp(out, l, ADD);
            out.push_str(if matches!(a, AExp::Add(..)) { " + " } else { " - " });
            aexp(out, r, MUL);
        }),
        AExp::Mul(l, r) => wrap(out, min > MUL, |out| {
            aexp(out, l, MUL);
            out.push_str(" * ");
            aexp(out, r, NOT);
        }),
    }
}

fn bexp(out: &mut String, b: &BExp, min: u8) {
    match b {
        BExp::True => out.push_str("true"),
        BExp::False => out.push_str("false"),
        BExp::Var(x) => out.push_str(x),
        BExp::Eq(l, r) | BExp::Le(l, r) => wrap(out, min > CMP, |out| {
            aexp(out, l, ADD);
            out.push_str(if matches!(b, BExp::Eq(..)) { " = " } else { " <= " });
            aexp(out, r, ADD);
        }),
        BExp::And(l, r) => wrap(out, min > AND, |out| {
            bexp(out, l, CMP);
            out.push_str(" and ");
            bexp(out, r, AND);
        }),
        BExp::Not(inner) => wrap(out, min > NOT, |out| {
            out.push_str("not ");
            bexp(out, inner, NOT);
        }),
    }
}

fn brace(out: &mut String, braces: bool, body: impl FnOnce(&mut String)) {
    if braces {
        out.push('{');
    }
    body(out);
    if braces {
        out.push('}');
    }
}

/// Leftmost unit statement is a declaration: inside `begin` it would be
/// swallowed by the declaration list.
fn starts_with_decl(s: &Stmt) -> bool {
    match s {
        Stmt::Decl(_) => true,
        Stmt::Seq(h, _) | Stmt::Par(h, _) => starts_with_decl(h),
        _ => false,
    }
}

fn var_decl(out: &mut String, d: &VarDecl) {
    out.push_str(&format!("var {} {} := ", d.ty, d.name));
    expr(out, &d.init);
}

fn proc_decl(out: &mut String, p: &ProcDecl) {
    out.push_str(&format!("proc {} is ", p.name));
    stmt(out, &p.body, UNIT);
}

fn stmt(out: &mut String, s: &Stmt, min: u8) {
    match s {
        Stmt::Par(l, r) => brace(out, min > PAR, |out| {
            stmt(out, l, PAR);
            out.push_str(" par ");
            stmt(out, r, SEQ);
        }),
        Stmt::Seq(h, t) => brace(out, min > SEQ, |out| {
            stmt(out, h, UNIT);
            out.push_str("; ");
            stmt(out, t, SEQ);
        }),
        Stmt::If(b, t, e) => {
            out.push_str("if ");
            bexp(out, b, 0);
            out.push_str(" then ");
            stmt(out, t, UNIT);
            out.push_str(" else ");
            stmt(out, e, UNIT);
        }
        Stmt::While(b, body) => {
            out.push_str("while ");
            bexp(out, b, 0);
            out.push_str(" do ");
            stmt(out, body, UNIT);
        }
        Stmt::Decl(d) => var_decl(out, d),
        Stmt::Update(x, e) => {
            out.push_str(x);
            out.push_str(" := ");
            expr(out, e);
        }
        Stmt::Begin(vars, procs, body) => {
            out.push_str("begin ");
            for d in vars {
                var_decl(out, d);
                out.push_str("; ");
            }
            for p in procs {
                proc_decl(out, p);
                out.push_str("; ");
            }
            let guard = procs.is_empty() && starts_with_decl(body);
            brace(out, guard, |out| stmt(out, body, PAR));
            out.push_str(" end");
        }
        Stmt::Call(p) => {
            out.push_str("call ");
            out.push_str(p);
        }
        Stmt::Protect(body) => {
            out.push_str("protect ");
            stmt(out, body, PAR);
            out.push_str(" end");
        }
        Stmt::Protected(body) => {
            out.push_str("protected ");
            stmt(out, body, PAR);
            out.push_str(" end");
        }
        Stmt::BeginScope => out.push_str("beginscope"),
        Stmt::EndScope => out.push_str("endscope"),
        Stmt::Proc(p) => proc_decl(out, p),
        Stmt::Expr(e) => expr(out, e),
        Stmt::Val(v) => out.push_str(&v.to_string()),
        Stmt::Empty => out.push('ε'),
    }
}
