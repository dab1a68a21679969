//! Leveled environments. Both the variable store and the procedure store are
//! non-empty stacks of frames; frame 0 is the global scope and the last frame
//! is the innermost block.
//!
//! Declarations go into the innermost frame only; lookups and updates act on
//! the innermost frame that binds the name.

use std::fmt;

use thiserror::Error;

use crate::syntax::{is_reserved, pretty, Ident, Stmt, Value};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("`{0}` is already declared in the current scope")]
    Redeclared(Ident),
    #[error("`{0}` is not bound")]
    Unbound(Ident),
    #[error("cannot pop the global scope")]
    GlobalScope,
}

/// An insertion-ordered map from names to `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frame<V> {
    entries: Vec<(Ident, V)>,
}

impl<V> Default for Frame<V> {
    fn default() -> Self {
        Frame {
            entries: Vec::new(),
        }
    }
}

impl<V> Frame<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, k: &str) -> Option<&V> {
        self.entries.iter().find(|(n, _)| n == k).map(|(_, v)| v)
    }

    pub fn contains(&self, k: &str) -> bool {
        self.get(k).is_some()
    }

    /// Binds `k`, replacing in place if already present.
    pub fn insert(&mut self, k: Ident, v: V) {
        match self.entries.iter_mut().find(|(n, _)| *n == k) {
            Some(slot) => slot.1 = v,
            None => self.entries.push((k, v)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, &V)> {
        self.entries.iter().map(|(k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<V> FromIterator<(Ident, V)> for Frame<V> {
    fn from_iter<I: IntoIterator<Item = (Ident, V)>>(iter: I) -> Self {
        let mut f = Frame::new();
        for (k, v) in iter {
            f.insert(k, v);
        }
        f
    }
}

/// A non-empty stack of frames.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scoped<V> {
    frames: Vec<Frame<V>>,
}

pub type Store = Scoped<Value>;
pub type ProcEnv = Scoped<Stmt>;

impl<V> Default for Scoped<V> {
    fn default() -> Self {
        Scoped {
            frames: vec![Frame::new()],
        }
    }
}

impl<V: Clone> Scoped<V> {
    /// A stack holding only the global scope.
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a stack from frames, oldest first. Returns `None` if `frames` is empty.
    pub fn from_frames(frames: Vec<Frame<V>>) -> Option<Self> {
        (!frames.is_empty()).then_some(Scoped { frames })
    }

    pub fn frames(&self) -> &[Frame<V>] {
        &self.frames
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    pub fn innermost(&self) -> &Frame<V> {
        self.frames.last().expect("scope stack is never empty")
    }

    pub fn pushed(&self) -> Self {
        let mut next = self.clone();
        next.frames.push(Frame::new());
        next
    }

    pub fn popped(&self) -> Result<Self, EnvError> {
        if self.frames.len() == 1 {
            return Err(EnvError::GlobalScope);
        }
        let mut next = self.clone();
        next.frames.pop();
        Ok(next)
    }

    /// Adds a binding to the innermost frame; shadowing outer frames is fine.
    pub fn declared(&self, k: &str, v: V) -> Result<Self, EnvError> {
        if self.innermost().contains(k) {
            return Err(EnvError::Redeclared(k.to_string()));
        }
        let mut next = self.clone();
        next.frames
            .last_mut()
            .expect("scope stack is never empty")
            .insert(k.to_string(), v);
        Ok(next)
    }

    /// Rebinds `k` in the innermost frame that has it.
    pub fn updated(&self, k: &str, v: V) -> Result<Self, EnvError> {
        let idx = self
            .frames
            .iter()
            .rposition(|f| f.contains(k))
            .ok_or_else(|| EnvError::Unbound(k.to_string()))?;
        let mut next = self.clone();
        next.frames[idx].insert(k.to_string(), v);
        Ok(next)
    }

    pub fn lookup(&self, k: &str) -> Result<&V, EnvError> {
        self.frames
            .iter()
            .rev()
            .find_map(|f| f.get(k))
            .ok_or_else(|| EnvError::Unbound(k.to_string()))
    }
}

pub fn push_scope(store: &Store, procs: &ProcEnv) -> (Store, ProcEnv) {
    (store.pushed(), procs.pushed())
}

pub fn pop_scope(store: &Store, procs: &ProcEnv) -> Result<(Store, ProcEnv), EnvError> {
    Ok((store.popped()?, procs.popped()?))
}

pub fn declare_var(store: &Store, x: &str, v: Value) -> Result<Store, EnvError> {
    store.declared(x, v)
}

pub fn update_var(store: &Store, x: &str, v: Value) -> Result<Store, EnvError> {
    store.updated(x, v)
}

pub fn lookup_var(store: &Store, x: &str) -> Result<Value, EnvError> {
    store.lookup(x).copied()
}

pub fn declare_proc(procs: &ProcEnv, p: &str, body: Stmt) -> Result<ProcEnv, EnvError> {
    procs.declared(p, body)
}

pub fn lookup_proc(procs: &ProcEnv, p: &str) -> Result<Stmt, EnvError> {
    procs.lookup(p).cloned()
}

fn render_frames<V>(
    f: &mut fmt::Formatter<'_>,
    frames: &[Frame<V>],
    show: impl Fn(&V) -> String,
) -> fmt::Result {
    f.write_str("(")?;
    for (i, frame) in frames.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str("{")?;
        for (j, (k, v)) in frame.iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={}", show(v))?;
        }
        f.write_str("}")?;
    }
    f.write_str(")")
}

/// Canonical rendering, e.g. `({a=3, b=5}, {a=4})`.
impl fmt::Display for Scoped<Value> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_frames(f, &self.frames, |v| v.to_string())
    }
}

impl fmt::Display for Scoped<Stmt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_frames(f, &self.frames, pretty)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid store at offset {offset}: {message}")]
pub struct StoreParseError {
    pub offset: usize,
    pub message: String,
}

/// Parses the canonical store rendering back into a store.
pub fn parse_store(text: &str) -> Result<Store, StoreParseError> {
    let mut p = StoreParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let store = p.store()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(store)
}

struct StoreParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl StoreParser<'_> {
    fn err(&self, message: &str) -> StoreParseError {
        StoreParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), StoreParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> &str {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice")
    }

    fn store(&mut self) -> Result<Store, StoreParseError> {
        self.expect(b'(')?;
        let mut frames = vec![self.frame()?];
        while self.eat(b',') {
            frames.push(self.frame()?);
        }
        self.expect(b')')?;
        Ok(Scoped { frames })
    }

    fn frame(&mut self) -> Result<Frame<Value>, StoreParseError> {
        self.expect(b'{')?;
        let mut frame = Frame::new();
        if self.eat(b'}') {
            return Ok(frame);
        }
        loop {
            let at = self.pos;
            let name = self.word().to_string();
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic())
                && !is_reserved(&name);
            if !valid {
                self.pos = at;
                return Err(self.err("expected identifier"));
            }
            if frame.contains(&name) {
                return Err(self.err(&format!("duplicate binding `{name}` in one frame")));
            }
            self.expect(b'=')?;
            let value = self.value()?;
            frame.insert(name, value);
            if self.eat(b'}') {
                return Ok(frame);
            }
            self.expect(b',')?;
        }
    }

    fn value(&mut self) -> Result<Value, StoreParseError> {
        let at = self.pos;
        let w = self.word().to_string();
        match w.as_str() {
            "true" => Ok(Value::True),
            "false" => Ok(Value::False),
            "void" => Ok(Value::Void),
            _ => w.parse::<u64>().map(Value::Nat).map_err(|_| {
                self.pos = at;
                self.err("expected a value")
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{AExp, TypeName};

    fn store(text: &str) -> Store {
        parse_store(text).unwrap()
    }

    #[test]
    fn push_adds_an_empty_innermost_frame() {
        let (s, p) = push_scope(&store("({a=3, b=5})"), &ProcEnv::new());
        assert_eq!(s.to_string(), "({a=3, b=5}, {})");
        assert_eq!(p.to_string(), "({}, {})");
        let (s, p) = push_scope(&Store::new(), &ProcEnv::new());
        assert_eq!((s.depth(), p.depth()), (2, 2));
    }

    #[test]
    fn pop_keeps_outer_changes() {
        let p2 = ProcEnv::new().pushed();
        let (s, p) = pop_scope(&store("({a=3, b=2}, {a=4})"), &p2).unwrap();
        assert_eq!(s.to_string(), "({a=3, b=2})");
        assert_eq!(p.to_string(), "({})");
        assert_eq!(
            pop_scope(&store("({x=1})"), &ProcEnv::new()),
            Err(EnvError::GlobalScope)
        );
        let s0 = store("({a=1})");
        let (s1, p1) = push_scope(&s0, &ProcEnv::new());
        assert_eq!(pop_scope(&s1, &p1).unwrap(), (s0, ProcEnv::new()));
    }

    #[test]
    fn declare_targets_innermost_frame() {
        let s = declare_var(&store("({a=3, b=5}, {})"), "a", Value::Nat(4)).unwrap();
        assert_eq!(s.to_string(), "({a=3, b=5}, {a=4})");
        assert_eq!(
            declare_var(&store("({}, {a=4})"), "a", Value::Nat(7)),
            Err(EnvError::Redeclared("a".into()))
        );
        let s = declare_var(&Store::new(), "x", Value::Nat(1)).unwrap();
        assert_eq!(s.to_string(), "({x=1})");
    }

    #[test]
    fn update_targets_innermost_binding() {
        let s = update_var(&store("({a=3, b=5}, {a=4})"), "b", Value::Nat(2)).unwrap();
        assert_eq!(s.to_string(), "({a=3, b=2}, {a=4})");
        let s = update_var(&store("({a=3}, {a=4})"), "a", Value::Nat(9)).unwrap();
        assert_eq!(s.to_string(), "({a=3}, {a=9})");
        assert_eq!(
            update_var(&Store::new(), "z", Value::Nat(1)),
            Err(EnvError::Unbound("z".into()))
        );
    }

    #[test]
    fn lookup_prefers_innermost() {
        assert_eq!(lookup_var(&store("({a=3}, {a=4})"), "a"), Ok(Value::Nat(4)));
        assert_eq!(lookup_var(&store("({a=3, b=5})"), "b"), Ok(Value::Nat(5)));
        assert!(lookup_var(&Store::new(), "x").is_err());
    }

    #[test]
    fn procedure_store() {
        let body = Stmt::decl(TypeName::Nat, "r", AExp::Num(4));
        let rho = declare_proc(&ProcEnv::new().pushed(), "z", body.clone()).unwrap();
        assert_eq!(rho.to_string(), "({}, {z=var Nat r := 4})");
        assert_eq!(lookup_proc(&rho, "z"), Ok(body.clone()));
        assert!(declare_proc(&rho, "z", Stmt::call("q")).is_err());
        let rho = declare_proc(&ProcEnv::new(), "p", Stmt::VOID).unwrap();
        assert_eq!(rho.to_string(), "({p=void})");
        let shadow = declare_proc(&rho.pushed(), "p", body.clone()).unwrap();
        assert_eq!(lookup_proc(&shadow, "p"), Ok(body));
        assert!(lookup_proc(&ProcEnv::new(), "q").is_err());
    }

    #[test]
    fn store_text_round_trips() {
        for text in ["({})", "({a=3, b=5})", "({a=3, b=2}, {a=4}, {})", "({t=true, f=false, v=void})"] {
            assert_eq!(store(text).to_string(), text);
        }
        assert_eq!(store(" ( { a = 1 } ) ").to_string(), "({a=1})");
        for bad in ["", "()", "{a=1}", "({a=})", "({a=1, a=2})", "({if=1})", "({a=1}) x", "({a=-1})"] {
            assert!(parse_store(bad).is_err(), "{bad}");
        }
    }
}
