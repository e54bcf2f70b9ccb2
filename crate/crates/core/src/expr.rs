//! Arithmetic expression trees over one or two real variables.
//!
//! The grammar is deliberately small: variables `t`/`x` (first axis) and
//! `s`/`y` (second axis), decimal literals, `+ - * / ^`, unary minus, and the
//! functions `abs`, `exp`, `ln`, `sqrt`, `sin`, `cos`. `^` is right
//! associative and binds tighter than unary minus, so `-t^2` is `-(t^2)`.
//!
//! Raising a negative base to a non-integer power is an evaluation error
//! rather than a NaN; callers that need `|f|^p` must wrap the base in `abs`.

use std::fmt;

use crate::error::{Error, Result};

/// Which variable slot a `Var` node reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// `t` or `x`.
    First,
    /// `s` or `y`.
    Second,
}

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "abs" => Func::Abs,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }
}

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Axis),
    Neg(Box<Expr>),
    Func(Func, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(axis: Axis) -> Expr {
        Expr::Var(axis)
    }

    pub fn func(f: Func, e: Expr) -> Expr {
        Expr::Func(f, Box::new(e))
    }

    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    /// True when the expression reads the given variable slot.
    pub fn uses(&self, axis: Axis) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(a) => *a == axis,
            Expr::Neg(e) | Expr::Func(_, e) => e.uses(axis),
            Expr::Bin(_, l, r) => l.uses(axis) || r.uses(axis),
        }
    }

    /// Number of variables the expression needs: 0 (constant), 1, or 2.
    ///
    /// An expression that reads the second axis has arity 2 even if it never
    /// reads the first.
    pub fn arity(&self) -> usize {
        if self.uses(Axis::Second) {
            2
        } else if self.uses(Axis::First) {
            1
        } else {
            0
        }
    }

    /// Evaluate at a single point of a one-dimensional domain.
    ///
    /// The caller is responsible for having checked `arity() <= 1`.
    pub fn eval1(&self, t: f64) -> Result<f64> {
        self.eval(t, 0.0)
    }

    /// Evaluate at a point of a two-dimensional domain.
    pub fn eval2(&self, x: f64, y: f64) -> Result<f64> {
        self.eval(x, y)
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(Axis::First) => x,
            Expr::Var(Axis::Second) => y,
            Expr::Neg(e) => -e.eval(x, y)?,
            Expr::Func(f, e) => {
                let u = e.eval(x, y)?;
                match f {
                    Func::Abs => u.abs(),
                    Func::Exp => u.exp(),
                    Func::Ln => u.ln(),
                    Func::Sqrt => u.sqrt(),
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                }
            }
            Expr::Bin(op, l, r) => {
                let a = l.eval(x, y)?;
                let b = r.eval(x, y)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => {
                        if a < 0.0 && b.fract() != 0.0 {
                            return Err(Error::NegativeBasePower {
                                base: a,
                                exponent: b,
                            });
                        }
                        a.powf(b)
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                context: format!("expression node `{}`", self.node_label()),
            })
        }
    }

    fn node_label(&self) -> String {
        match self {
            Expr::Const(c) => format!("{c}"),
            Expr::Var(Axis::First) => "t".into(),
            Expr::Var(Axis::Second) => "s".into(),
            Expr::Neg(_) => "-".into(),
            Expr::Func(f, _) => f.name().into(),
            Expr::Bin(op, _, _) => match op {
                BinOp::Add => "+".into(),
                BinOp::Sub => "-".into(),
                BinOp::Mul => "*".into(),
                BinOp::Div => "/".into(),
                BinOp::Pow => "^".into(),
            },
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(c) if *c < 0.0 => 1,
            Expr::Const(_) | Expr::Var(_) | Expr::Func(_, _) => 5,
            Expr::Neg(_) => 1,
            Expr::Bin(BinOp::Add | BinOp::Sub, _, _) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, _, _) => 2,
            Expr::Bin(BinOp::Pow, _, _) => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(Axis::First) => write!(f, "t"),
            Expr::Var(Axis::Second) => write!(f, "s"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                // unary minus grabs a whole negation chain or a power, so
                // anything looser needs parentheses to reproduce the tree
                if matches!(**e, Expr::Neg(_)) {
                    write!(f, "{e}")
                } else {
                    paren(f, e, 4)
                }
            }
            Expr::Func(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Bin(op, l, r) => match op {
                BinOp::Add => {
                    paren(f, l, 1)?;
                    write!(f, "+")?;
                    paren(f, r, 2)
                }
                BinOp::Sub => {
                    paren(f, l, 1)?;
                    write!(f, "-")?;
                    paren(f, r, 2)
                }
                BinOp::Mul => {
                    paren(f, l, 2)?;
                    write!(f, "*")?;
                    paren(f, r, 3)
                }
                BinOp::Div => {
                    paren(f, l, 2)?;
                    write!(f, "/")?;
                    paren(f, r, 3)
                }
                BinOp::Pow => {
                    paren(f, l, 5)?;
                    write!(f, "^")?;
                    // right operand may be another power or a negation
                    paren(f, r, 4)
                }
            },
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::bin(BinOp::Add, self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::bin(BinOp::Sub, self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::bin(BinOp::Mul, self, rhs)
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::bin(BinOp::Div, self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("invalid number literal `{text}`"),
                })?;
                toks.push((Tok::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.offset(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = lhs + rhs;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = lhs - rhs;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = lhs * rhs;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = lhs / rhs;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.factor()?;
            Ok(Expr::bin(BinOp::Pow, base, exp))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "t" | "x" => Ok(Expr::Var(Axis::First)),
                "s" | "y" => Ok(Expr::Var(Axis::Second)),
                _ => {
                    if let Some(func) = Func::from_name(&name) {
                        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "closing `)`")?;
                        Ok(Expr::func(func, arg))
                    } else {
                        Err(Error::UnknownIdentifier { name, offset })
                    }
                }
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(inner)
            }
            Some(_) => Err(Error::Syntax {
                offset,
                message: "expected an operand".into(),
            }),
            None => Err(Error::Syntax {
                offset,
                message: "expected an operand, found end of input".into(),
            }),
        }
    }
}

/// Parse an expression string into its tree form.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Syntax {
            offset: parser.offset(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(expr)
}
