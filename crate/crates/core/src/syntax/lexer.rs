use std::fmt;

use super::parser::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(u64),
    Ident(String),
    // keywords
    Var,
    If,
    Then,
    Else,
    While,
    Do,
    Begin,
    End,
    Proc,
    Is,
    Call,
    Par,
    Protect,
    True,
    False,
    Not,
    And,
    Void,
    TyNat,
    TyBool,
    TyCmd,
    /// `beginscope`, `endscope`, `protected`: reserved, never valid in source.
    RuntimeOnly(&'static str),
    // punctuation
    Plus,
    Minus,
    Star,
    EqSign,
    Le,
    Assign,
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Num(n) => return write!(f, "numeral `{n}`"),
            Tok::Ident(x) => return write!(f, "identifier `{x}`"),
            Tok::RuntimeOnly(k) => return write!(f, "runtime-only keyword `{k}`"),
            Tok::Eof => return f.write_str("end of input"),
            Tok::Var => "var",
            Tok::If => "if",
            Tok::Then => "then",
            Tok::Else => "else",
            Tok::While => "while",
            Tok::Do => "do",
            Tok::Begin => "begin",
            Tok::End => "end",
            Tok::Proc => "proc",
            Tok::Is => "is",
            Tok::Call => "call",
            Tok::Par => "par",
            Tok::Protect => "protect",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Not => "not",
            Tok::And => "and",
            Tok::Void => "void",
            Tok::TyNat => "Nat",
            Tok::TyBool => "Bool",
            Tok::TyCmd => "Cmd",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::EqSign => "=",
            Tok::Le => "<=",
            Tok::Assign => ":=",
            Tok::Semi => ";",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "var" => Tok::Var,
        "if" => Tok::If,
        "then" => Tok::Then,
        "else" => Tok::Else,
        "while" => Tok::While,
        "do" => Tok::Do,
        "begin" => Tok::Begin,
        "end" => Tok::End,
        "proc" => Tok::Proc,
        "is" => Tok::Is,
        "call" => Tok::Call,
        "par" => Tok::Par,
        "protect" => Tok::Protect,
        "true" => Tok::True,
        "false" => Tok::False,
        "not" => Tok::Not,
        "and" => Tok::And,
        "void" => Tok::Void,
        "Nat" => Tok::TyNat,
        "Bool" => Tok::TyBool,
        "Cmd" => Tok::TyCmd,
        "beginscope" => Tok::RuntimeOnly("beginscope"),
        "endscope" => Tok::RuntimeOnly("endscope"),
        "protected" => Tok::RuntimeOnly("protected"),
        _ => return None,
    })
}

pub fn is_reserved(word: &str) -> bool {
    keyword(word).is_some()
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let push = |tok: Tok, out: &mut Vec<Token>| {
            out.push(Token {
                tok,
                line: tline,
                col: tcol,
            })
        };
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let n = text.parse::<u64>().map_err(|_| {
                ParseError::new(tline, tcol, vec![], format!("numeral `{text}` out of range"))
            })?;
            push(Tok::Num(n), &mut out);
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            push(keyword(&word).unwrap_or(Tok::Ident(word)), &mut out);
            continue;
        }
        let two = |d: char| chars.get(i + 1) == Some(&d);
        let (tok, len) = match c {
            '+' => (Tok::Plus, 1),
            '-' | '−' => (Tok::Minus, 1),
            '*' => (Tok::Star, 1),
            '=' => (Tok::EqSign, 1),
            '<' if two('=') => (Tok::Le, 2),
            '≤' => (Tok::Le, 1),
            ':' if two('=') => (Tok::Assign, 2),
            ';' => (Tok::Semi, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '∧' => (Tok::And, 1),
            '¬' => (Tok::Not, 1),
            _ => {
                return Err(ParseError::new(
                    tline,
                    tcol,
                    vec![],
                    format!("unexpected character `{c}`"),
                ))
            }
        };
        push(tok, &mut out);
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
