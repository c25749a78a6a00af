//! Small closed-form expression language for problem data.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'x' | 'y' | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | tan | exp | log | sqrt | abs
//! ```

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn parse(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Tan => v.tan(),
            Func::Exp => v.exp(),
            Func::Log => v.ln(),
            Func::Sqrt => v.sqrt(),
            Func::Abs => v.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(f64),
    X,
    Y,
    T,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            Node::Const(c) => *c,
            Node::X => x,
            Node::Y => y,
            Node::T => t,
            Node::Neg(a) => -a.eval(x, y, t),
            Node::Add(a, b) => a.eval(x, y, t) + b.eval(x, y, t),
            Node::Sub(a, b) => a.eval(x, y, t) - b.eval(x, y, t),
            Node::Mul(a, b) => a.eval(x, y, t) * b.eval(x, y, t),
            Node::Div(a, b) => a.eval(x, y, t) / b.eval(x, y, t),
            Node::Pow(a, b) => {
                let base = a.eval(x, y, t);
                match **b {
                    Node::Const(2.0) => base * base,
                    _ => base.powf(b.eval(x, y, t)),
                }
            }
            Node::Call(f, a) => f.apply(a.eval(x, y, t)),
        }
    }

    fn uses_time(&self) -> bool {
        match self {
            Node::T => true,
            Node::Const(_) | Node::X | Node::Y => false,
            Node::Neg(a) | Node::Call(_, a) => a.uses_time(),
            Node::Add(a, b)
            | Node::Sub(a, b)
            | Node::Mul(a, b)
            | Node::Div(a, b)
            | Node::Pow(a, b) => a.uses_time() || b.uses_time(),
        }
    }

    /// Fold constant subtrees.
    fn fold(self) -> Node {
        let folded = match self {
            Node::Neg(a) => Node::Neg(Box::new(a.fold())),
            Node::Add(a, b) => Node::Add(Box::new(a.fold()), Box::new(b.fold())),
            Node::Sub(a, b) => Node::Sub(Box::new(a.fold()), Box::new(b.fold())),
            Node::Mul(a, b) => Node::Mul(Box::new(a.fold()), Box::new(b.fold())),
            Node::Div(a, b) => Node::Div(Box::new(a.fold()), Box::new(b.fold())),
            Node::Pow(a, b) => Node::Pow(Box::new(a.fold()), Box::new(b.fold())),
            Node::Call(f, a) => Node::Call(f, Box::new(a.fold())),
            leaf => return leaf,
        };
        let all_const = match &folded {
            Node::Neg(a) | Node::Call(_, a) => matches!(**a, Node::Const(_)),
            Node::Add(a, b)
            | Node::Sub(a, b)
            | Node::Mul(a, b)
            | Node::Div(a, b)
            | Node::Pow(a, b) => matches!(**a, Node::Const(_)) && matches!(**b, Node::Const(_)),
            _ => false,
        };
        if all_const {
            Node::Const(folded.eval(0.0, 0.0, 0.0))
        } else {
            folded
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Expression {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat(b'^') {
            return Ok(Node::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            None => self.err("unexpected end of expression"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "x" => Ok(Node::X),
                    "y" => Ok(Node::Y),
                    "t" => Ok(Node::T),
                    "pi" => Ok(Node::Const(std::f64::consts::PI)),
                    _ => match Func::parse(name) {
                        Some(f) => {
                            if !self.eat(b'(') {
                                return self.err(format!("expected '(' after {name}"));
                            }
                            let arg = self.expr()?;
                            if !self.eat(b')') {
                                return self.err("expected ')'");
                            }
                            Ok(Node::Call(f, Box::new(arg)))
                        }
                        None => {
                            self.pos = start;
                            self.err(format!("unknown identifier '{name}'"))
                        }
                    },
                }
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
        }
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        let bytes = self.src;
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = std::str::from_utf8(&bytes[start..end]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => {
                self.pos = end;
                Ok(Node::Const(v))
            }
            Err(_) => self.err(format!("malformed number '{text}'")),
        }
    }
}

/// A parsed scalar function of `(x, y, t)`.
#[derive(Clone, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
    time_dependent: bool,
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr> {
        let mut p = Parser {
            src: source.as_bytes(),
            pos: 0,
        };
        let root = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        let root = root.fold();
        Ok(Expr {
            source: source.trim().to_string(),
            time_dependent: root.uses_time(),
            root,
        })
    }

    pub fn constant(c: f64) -> Expr {
        Expr {
            source: format!("{c:?}"),
            root: Node::Const(c),
            time_dependent: false,
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, p: Point, t: f64) -> f64 {
        self.root.eval(p.x, p.y, t)
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.root {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?})", self.source)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        Expr::parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Expr, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => Expr::parse(&s).map_err(serde::de::Error::custom),
            Raw::Number(v) => Ok(Expr::constant(v)),
        }
    }
}
