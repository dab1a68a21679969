//! Recursive-descent parser for the surface grammar.
//!
//! Statement precedence, loosest first: `par` (left-assoc), `;` (right-assoc),
//! then unit statements. The bodies of `if`, `while` and `proc` are unit
//! statements; `{ .. }` groups anything. Expression precedence, loosest
//! first: `and` (right-assoc), `=`/`<=` (non-assoc), `+`/`-`, `*`, `not`.

use thiserror::Error;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {}", render_msg(.expected, .found))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

fn render_msg(expected: &[String], found: &str) -> String {
    match expected {
        [] => found.to_string(),
        [one] => format!("expected {one}, found {found}"),
        many => format!("expected one of {}, found {found}", many.join(", ")),
    }
}

impl ParseError {
    pub fn new(line: usize, col: usize, expected: Vec<String>, found: String) -> Self {
        ParseError {
            line,
            col,
            expected,
            found,
        }
    }
}

pub fn parse_program(text: &str) -> Result<Stmt, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let s = p.stmt()?;
    p.expect(Tok::Eof)?;
    Ok(s)
}

/// Parses a standalone expression (used by tests and tooling).
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    p.expect(Tok::Eof)?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Le,
    And,
}

/// Expression tree before sort classification.
#[derive(Debug)]
enum Raw {
    Num(u64, (usize, usize)),
    Var(String),
    Bool(bool, (usize, usize)),
    Bin(BinOp, Box<Raw>, Box<Raw>, (usize, usize)),
    Not(Box<Raw>, (usize, usize)),
}

impl Raw {
    fn is_arith(&self) -> bool {
        match self {
            Raw::Num(..) | Raw::Var(_) => true,
            Raw::Bin(op, ..) => matches!(op, BinOp::Add | BinOp::Sub | BinOp::Mul),
            _ => false,
        }
    }
}

const STMT_START: &[&str] = &[
    "`var`", "identifier", "`if`", "`while`", "`begin`", "`call`", "`protect`", "`{`",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(
            line,
            col,
            expected.iter().map(|s| s.to_string()).collect(),
            self.peek().to_string(),
        )
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            let want = t.to_string();
            Err(self.error(&[want.as_str()]))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(x)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn type_name(&mut self) -> Result<TypeName, ParseError> {
        let t = match self.peek() {
            Tok::TyNat => TypeName::Nat,
            Tok::TyBool => TypeName::Bool,
            Tok::TyCmd => TypeName::Cmd,
            _ => return Err(self.error(&["`Nat`", "`Bool`", "`Cmd`"])),
        };
        self.bump();
        Ok(t)
    }

    // ---- statements ----

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let mut lhs = self.seq()?;
        while self.eat(&Tok::Par) {
            let rhs = self.seq()?;
            lhs = Stmt::par(lhs, rhs);
        }
        Ok(lhs)
    }

    fn seq(&mut self) -> Result<Stmt, ParseError> {
        let head = self.unit()?;
        if self.eat(&Tok::Semi) {
            let tail = self.seq()?;
            Ok(Stmt::seq(head, tail))
        } else {
            Ok(head)
        }
    }

    fn unit(&mut self) -> Result<Stmt, ParseError> {
        match self.peek().clone() {
            Tok::Var => Ok(Stmt::Decl(self.var_decl()?)),
            Tok::Ident(x) => {
                self.bump();
                self.expect(Tok::Assign)?;
                Ok(Stmt::Update(x, self.expr()?))
            }
            Tok::If => {
                self.bump();
                let b = self.bexp()?;
                self.expect(Tok::Then)?;
                let t = self.unit()?;
                self.expect(Tok::Else)?;
                let e = self.unit()?;
                Ok(Stmt::if_(b, t, e))
            }
            Tok::While => {
                self.bump();
                let b = self.bexp()?;
                self.expect(Tok::Do)?;
                Ok(Stmt::while_(b, self.unit()?))
            }
            Tok::Begin => self.block(),
            Tok::Call => {
                self.bump();
                Ok(Stmt::Call(self.ident()?))
            }
            Tok::Protect => {
                self.bump();
                let s = self.stmt()?;
                self.expect(Tok::End)?;
                Ok(Stmt::protect(s))
            }
            Tok::LBrace => {
                self.bump();
                let s = self.stmt()?;
                self.expect(Tok::RBrace)?;
                Ok(s)
            }
            _ => Err(self.error(STMT_START)),
        }
    }

    fn var_decl(&mut self) -> Result<VarDecl, ParseError> {
        self.expect(Tok::Var)?;
        let ty = self.type_name()?;
        let name = self.ident()?;
        self.expect(Tok::Assign)?;
        let init = self.expr()?;
        Ok(VarDecl { ty, name, init })
    }

    fn block(&mut self) -> Result<Stmt, ParseError> {
        self.expect(Tok::Begin)?;
        let mut vars = Vec::new();
        while *self.peek() == Tok::Var {
            vars.push(self.var_decl()?);
            self.eat(&Tok::Semi);
        }
        let mut procs = Vec::new();
        while self.eat(&Tok::Proc) {
            let name = self.ident()?;
            self.expect(Tok::Is)?;
            let body = self.unit()?;
            procs.push(ProcDecl {
                name,
                body: Box::new(body),
            });
            self.eat(&Tok::Semi);
        }
        let body = self.stmt()?;
        self.expect(Tok::End)?;
        Ok(Stmt::Begin(vars, procs, Box::new(body)))
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let raw = self.and_expr()?;
        if raw.is_arith() {
            Ok(Expr::Arith(to_aexp(raw)?))
        } else {
            Ok(Expr::Bool(to_bexp(raw)?))
        }
    }

    fn bexp(&mut self) -> Result<BExp, ParseError> {
        let raw = self.and_expr()?;
        to_bexp(raw)
    }

    fn and_expr(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.cmp_expr()?;
        let at = self.here();
        if self.eat(&Tok::And) {
            let rhs = self.and_expr()?;
            Ok(Raw::Bin(BinOp::And, Box::new(lhs), Box::new(rhs), at))
        } else {
            Ok(lhs)
        }
    }

    fn cmp_expr(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.add_expr()?;
        let at = self.here();
        let op = match self.peek() {
            Tok::EqSign => BinOp::Eq,
            Tok::Le => BinOp::Le,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.add_expr()?;
        Ok(Raw::Bin(op, Box::new(lhs), Box::new(rhs), at))
    }

    fn add_expr(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.mul_expr()?;
        loop {
            let at = self.here();
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.mul_expr()?;
            lhs = Raw::Bin(op, Box::new(lhs), Box::new(rhs), at);
        }
    }

    fn mul_expr(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.here();
            if !self.eat(&Tok::Star) {
                return Ok(lhs);
            }
            let rhs = self.unary()?;
            lhs = Raw::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs), at);
        }
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        let at = self.here();
        if self.eat(&Tok::Not) {
            return Ok(Raw::Not(Box::new(self.unary()?), at));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        let at = self.here();
        let raw = match self.peek().clone() {
            Tok::Num(n) => Raw::Num(n, at),
            Tok::Ident(x) => Raw::Var(x),
            Tok::True => Raw::Bool(true, at),
            Tok::False => Raw::Bool(false, at),
            Tok::LParen => {
                self.bump();
                let e = self.and_expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            _ => {
                return Err(self.error(&[
                    "numeral",
                    "identifier",
                    "`true`",
                    "`false`",
                    "`not`",
                    "`(`",
                ]))
            }
        };
        self.bump();
        Ok(raw)
    }
}

fn sort_error(at: (usize, usize), want: &str, found: &str) -> ParseError {
    ParseError::new(at.0, at.1, vec![want.to_string()], found.to_string())
}

fn to_aexp(raw: Raw) -> Result<AExp, ParseError> {
    match raw {
        Raw::Num(n, _) => Ok(AExp::Num(n)),
        Raw::Var(x) => Ok(AExp::Var(x)),
        Raw::Bin(op @ (BinOp::Add | BinOp::Sub | BinOp::Mul), l, r, _) => {
            let (l, r) = (to_aexp(*l)?, to_aexp(*r)?);
            Ok(match op {
                BinOp::Add => AExp::add(l, r),
                BinOp::Sub => AExp::sub(l, r),
                _ => AExp::mul(l, r),
            })
        }
        Raw::Bin(_, _, _, at) | Raw::Not(_, at) => {
            Err(sort_error(at, "arithmetic expression", "boolean operator"))
        }
        Raw::Bool(b, at) => Err(sort_error(at, "arithmetic expression", &format!("`{b}`"))),
    }
}

fn to_bexp(raw: Raw) -> Result<BExp, ParseError> {
    match raw {
        Raw::Bool(b, _) => Ok(BExp::lit(b)),
        Raw::Var(x) => Ok(BExp::Var(x)),
        Raw::Not(b, _) => Ok(BExp::not(to_bexp(*b)?)),
        Raw::Bin(BinOp::And, l, r, _) => Ok(BExp::and(to_bexp(*l)?, to_bexp(*r)?)),
        Raw::Bin(op @ (BinOp::Eq | BinOp::Le), l, r, _) => {
            let (l, r) = (to_aexp(*l)?, to_aexp(*r)?);
            Ok(if op == BinOp::Eq {
                BExp::eq(l, r)
            } else {
                BExp::le(l, r)
            })
        }
        Raw::Bin(_, _, _, at) => Err(sort_error(at, "boolean expression", "arithmetic operator")),
        Raw::Num(n, at) => Err(sort_error(at, "boolean expression", &format!("numeral `{n}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> AExp {
        AExp::Num(n)
    }

    #[test]
    fn abstract_syntax_example_1() {
        let s = parse_program("var Nat y := 4; y := y + 1").unwrap();
        assert_eq!(
            s,
            Stmt::seq(
                Stmt::decl(TypeName::Nat, "y", nat(4)),
                Stmt::update("y", AExp::add(AExp::var("y"), nat(1)))
            )
        );
    }

    #[test]
    fn abstract_syntax_example_4() {
        let s = parse_program("begin var Nat w := 2 proc z is var Nat r := 4 call z; w := r end")
            .unwrap();
        assert_eq!(
            s,
            Stmt::begin(
                vec![VarDecl::new(TypeName::Nat, "w", nat(2))],
                vec![ProcDecl::new("z", Stmt::decl(TypeName::Nat, "r", nat(4)))],
                Stmt::seq(Stmt::call("z"), Stmt::update("w", AExp::var("r")))
            )
        );
    }

    #[test]
    fn separators_between_declarations_are_optional() {
        let a = parse_program("begin var Nat w := 2; proc z is var Nat r := 4; call z; w := r end")
            .unwrap();
        let b = parse_program("begin var Nat w := 2 proc z is var Nat r := 4 call z; w := r end")
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn abstract_syntax_example_2_and_5() {
        let s = parse_program("var Bool y := false; if ¬ y then var Nat z := 1 else var Nat z := 3")
            .unwrap();
        match s {
            Stmt::Seq(_, rest) => assert!(matches!(*rest, Stmt::If(BExp::Not(_), ..))),
            other => panic!("{other:?}"),
        }
        let s = parse_program("var Nat x := 0; protect x := 2; x := 4 end par x := 6").unwrap();
        let Stmt::Par(left, right) = s else {
            panic!("expected par at the root")
        };
        assert_eq!(*right, Stmt::update("x", nat(6)));
        assert!(matches!(*left, Stmt::Seq(_, ref p) if matches!(**p, Stmt::Protect(_))));
    }

    #[test]
    fn bare_expression_is_not_a_statement() {
        assert!(parse_program("0").is_err());
    }

    #[test]
    fn runtime_keywords_rejected() {
        for src in ["beginscope", "x := 1; endscope", "protected x := 1 end"] {
            let e = parse_program(src).unwrap_err();
            assert!(e.found.contains("runtime-only"), "{e}");
        }
    }

    #[test]
    fn error_location_and_expected_set() {
        let e = parse_program("x := 1;\n if x then").unwrap_err();
        assert_eq!((e.line, e.col), (2, 11));
        assert!(e.expected.iter().any(|t| t == "`var`"));
        assert!(parse_program("").is_err());
    }

    #[test]
    fn precedence() {
        let e = parse_expr("1 + 2 * 3 - 4").unwrap();
        assert_eq!(
            e,
            Expr::Arith(AExp::sub(
                AExp::add(nat(1), AExp::mul(nat(2), nat(3))),
                nat(4)
            ))
        );
        let e = parse_expr("not x and 1 <= y + 1 and true").unwrap();
        assert_eq!(
            e,
            Expr::Bool(BExp::and(
                BExp::not(BExp::var("x")),
                BExp::and(
                    BExp::le(nat(1), AExp::add(AExp::var("y"), nat(1))),
                    BExp::True
                )
            ))
        );
        // `;` binds tighter than `par`; `par` associates left
        let s = parse_program("a := 1; b := 2 par c := 3 par d := 4").unwrap();
        let Stmt::Par(l, _) = s else { panic!() };
        assert!(matches!(*l, Stmt::Par(ref ab, _) if matches!(**ab, Stmt::Seq(..))));
    }

    #[test]
    fn sort_errors() {
        assert!(parse_expr("1 + true").is_err());
        assert!(parse_expr("(1 = 1) + 2").is_err());
        assert!(parse_expr("1 = 2 = 3").is_err());
        assert!(parse_program("if 1 then x := 1 else x := 2").is_err());
        assert!(parse_expr("not x = 1").is_err());
    }

    #[test]
    fn bare_variable_is_arithmetic() {
        assert_eq!(parse_expr("y").unwrap(), Expr::Arith(AExp::var("y")));
        assert_eq!(parse_expr("(y)").unwrap(), Expr::Arith(AExp::var("y")));
        assert_eq!(
            parse_expr("y and z").unwrap(),
            Expr::Bool(BExp::and(BExp::var("y"), BExp::var("z")))
        );
    }
}
