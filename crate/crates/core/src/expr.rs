//! A small arithmetic language for coefficients and geometry maps.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! so `^` binds tighter than unary minus and is right-associative.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    X1,
    X2,
    X3,
    Theta,
}

impl Var {
    pub const ALL: [Var; 5] = [Var::X, Var::X1, Var::X2, Var::X3, Var::Theta];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::X3 => "x3",
            Var::Theta => "theta",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    fn apply(self, v: f64) -> Result<f64> {
        match self {
            Func::Log if v <= 0.0 => Err(Error::Eval(format!("log of non-positive value {v}"))),
            Func::Sqrt if v < 0.0 => Err(Error::Eval(format!("sqrt of negative value {v}"))),
            Func::Sin => Ok(v.sin()),
            Func::Cos => Ok(v.cos()),
            Func::Tan => Ok(v.tan()),
            Func::Exp => Ok(v.exp()),
            Func::Log => Ok(v.ln()),
            Func::Sqrt => Ok(v.sqrt()),
            Func::Sinh => Ok(v.sinh()),
            Func::Cosh => Ok(v.cosh()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// The constant π, kept symbolic so it prints back as `pi`.
    Pi,
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Variable bindings for [`Expr::evaluate`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Env {
    values: [Option<f64>; 5],
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Var, value: f64) -> Self {
        self.values[var.slot()] = Some(value);
        self
    }

    pub fn set(&mut self, var: Var, value: f64) {
        self.values[var.slot()] = Some(value);
    }

    pub fn get(&self, var: Var) -> Option<f64> {
        self.values[var.slot()]
    }

    /// Binds `x` only.
    pub fn x(x: f64) -> Self {
        Self::new().with(Var::X, x)
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0, len: src.len() };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(syntax(t.offset, format!("unexpected {}", t.kind.describe()))),
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax { offset, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' | b'-' | b'/' | b'^' => {
                out.push(Token { kind: Tok::Op(c as char), offset: start });
                i += 1;
            }
            b'*' => {
                if bytes.get(i + 1) == Some(&b'*') {
                    return Err(syntax(i + 1, "'**' is not an operator; use '^'"));
                }
                out.push(Token { kind: Tok::Op('*'), offset: start });
                i += 1;
            }
            b'(' => {
                out.push(Token { kind: Tok::LParen, offset: start });
                i += 1;
            }
            b')' => {
                out.push(Token { kind: Tok::RParen, offset: start });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| syntax(start, format!("malformed number '{text}'")))?;
                out.push(Token { kind: Tok::Num(v), offset: start });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token { kind: Tok::Ident(src[start..i].to_string()), offset: start });
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character '{ch}'")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token { kind: Tok::Op(c), .. }) => Some(*c),
            _ => None,
        }
    }

    fn next(&mut self) -> Result<Token> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| syntax(self.len, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.next()?;
        match t.kind {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen(t.offset)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(f) = Func::from_name(&name) {
                    match self.next()? {
                        Token { kind: Tok::LParen, offset } => {
                            let arg = self.expr()?;
                            self.expect_rparen(offset)?;
                            Ok(Expr::Call(f, Box::new(arg)))
                        }
                        other => Err(syntax(other.offset, format!("expected '(' after {name}"))),
                    }
                } else if let Some(v) = Var::from_name(&name) {
                    Ok(Expr::Var(v))
                } else if name == "pi" {
                    Ok(Expr::Pi)
                } else {
                    Err(syntax(t.offset, format!("unknown identifier '{name}'")))
                }
            }
            other => Err(syntax(t.offset, format!("unexpected {}", other.describe()))),
        }
    }

    fn expect_rparen(&mut self, open: usize) -> Result<()> {
        match self.peek() {
            Some(Token { kind: Tok::RParen, .. }) => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(syntax(t.offset, format!("expected ')' to close '(' at {open}"))),
            None => Err(syntax(self.len, format!("unclosed '(' at {open}"))),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        parse(src)
    }

    /// Evaluates in IEEE double precision. Division by zero, domain errors
    /// and non-finite results are errors rather than inf/NaN.
    pub fn evaluate(&self, env: &Env) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Pi => std::f64::consts::PI,
            Expr::Var(var) => env
                .get(*var)
                .ok_or_else(|| Error::Eval(format!("variable '{}' is not bound", var.name())))?,
            Expr::Neg(a) => -a.evaluate(env)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.evaluate(env)?, b.evaluate(env)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(Error::Eval("division by zero".into())),
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, a) => f.apply(a.evaluate(env)?)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Eval(format!("non-finite result in '{self}'")))
        }
    }

    /// Shorthand for evaluation with only `x` bound.
    pub fn eval_x(&self, x: f64) -> Result<f64> {
        self.evaluate(&Env::x(x))
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on(var),
            Expr::Bin(_, a, b) => a.depends_on(var) || b.depends_on(var),
        }
    }

    fn is_constant(&self) -> bool {
        Var::ALL.iter().all(|&v| !self.depends_on(v))
    }

    fn as_num(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            _ => None,
        }
    }

    /// Symbolic derivative with light constant folding.
    pub fn differentiate(&self, var: Var) -> Expr {
        use Expr::*;
        match self {
            Num(_) | Pi => Num(0.0),
            Var(v) => Num(if *v == var { 1.0 } else { 0.0 }),
            Neg(a) => neg(a.differentiate(var)),
            Bin(op, a, b) => {
                let (da, db) = (a.differentiate(var), b.differentiate(var));
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinOp::Add => add(da, db),
                    BinOp::Sub => sub(da, db),
                    BinOp::Mul => add(mul(da, b), mul(a, db)),
                    BinOp::Div if !b.depends_on(var) => div(da, b),
                    BinOp::Div => div(sub(mul(da, b.clone()), mul(a, db)), pow(b, Num(2.0))),
                    BinOp::Pow if !b.depends_on(var) => {
                        let exp = match b.as_num() {
                            Some(c) => Num(c - 1.0),
                            None => sub(b.clone(), Num(1.0)),
                        };
                        mul(mul(b, pow(a, exp)), da)
                    }
                    BinOp::Pow => {
                        // d(a^b) = a^b (b' log a + b a'/a)
                        let inner = add(mul(db, call(Func::Log, a.clone())), div(mul(b.clone(), da), a.clone()));
                        mul(pow(a, b), inner)
                    }
                }
            }
            Call(f, a) => {
                let da = a.differentiate(var);
                let a = (**a).clone();
                let outer = match f {
                    Func::Sin => call(Func::Cos, a),
                    Func::Cos => neg(call(Func::Sin, a)),
                    Func::Tan => div(Num(1.0), pow(call(Func::Cos, a), Num(2.0))),
                    Func::Exp => call(Func::Exp, a),
                    Func::Log => div(Num(1.0), a),
                    Func::Sqrt => div(Num(1.0), mul(Num(2.0), call(Func::Sqrt, a))),
                    Func::Sinh => call(Func::Cosh, a),
                    Func::Cosh => call(Func::Sinh, a),
                };
                mul(outer, da)
            }
        }
    }

    /// Binding strength used by the printer: 1 sums, 2 products,
    /// 3 unary minus, 4 powers, 5 atoms.
    fn level(&self) -> u8 {
        match self {
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => 3,
            Expr::Num(_) | Expr::Pi | Expr::Var(_) | Expr::Call(..) => 5,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Bin(BinOp::Pow, ..) => 4,
        }
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min_level: u8) -> fmt::Result {
    if e.level() < min_level {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    /// Prints with the fewest parentheses that reparse to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, 3)
            }
            Expr::Bin(op, a, b) => {
                let (left, right) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                write_at(f, a, left)?;
                f.write_str(op.symbol())?;
                write_at(f, b, right)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

fn fold(e: Expr) -> Expr {
    if e.is_constant() && !matches!(e, Expr::Num(_) | Expr::Pi) {
        if let Ok(v) = e.evaluate(&Env::new()) {
            return Expr::Num(v);
        }
    }
    e
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => Expr::Num(-v),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => fold(Expr::Bin(BinOp::Add, Box::new(a), Box::new(b))),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (_, Some(y)) if y == 0.0 => a,
        (Some(x), _) if x == 0.0 => neg(b),
        _ => fold(Expr::Bin(BinOp::Sub, Box::new(a), Box::new(b))),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Num(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        (Some(x), _) if x == -1.0 => neg(b),
        (_, Some(y)) if y == -1.0 => neg(a),
        _ => fold(Expr::Bin(BinOp::Mul, Box::new(a), Box::new(b))),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(x), _) if x == 0.0 => Expr::Num(0.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => fold(Expr::Bin(BinOp::Div, Box::new(a), Box::new(b))),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match b.as_num() {
        Some(y) if y == 0.0 => Expr::Num(1.0),
        Some(y) if y == 1.0 => a,
        _ => fold(Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b))),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    fold(Expr::Call(f, Box::new(a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> Result<f64> {
        parse(s)?.eval_x(x)
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(ev("2+3*x", 1.0).unwrap(), 5.0);
        assert_eq!(ev("(1+2*x)/2", 0.0).unwrap(), 0.5);
        assert_eq!(ev("sin(x)", 0.0).unwrap(), 0.0);
        assert!((ev("cosh(x)", 2.0).unwrap() - 3.7621956910836314).abs() < 1e-15);
        assert!(matches!(ev("1/x", 0.0), Err(Error::Eval(_))));
        assert!(matches!(ev("log(x)", -1.0), Err(Error::Eval(_))));
        assert!(matches!(parse("theta").unwrap().eval_x(1.0), Err(Error::Eval(_))));
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("-x^2", 3.0).unwrap(), -9.0);
        assert_eq!(ev("2^3^2", 0.0).unwrap(), 512.0);
        assert_eq!(ev("2^-1", 0.0).unwrap(), 0.5);
        assert_eq!(ev("8/2/2", 0.0).unwrap(), 2.0);
        assert_eq!(ev("1-2-3", 0.0).unwrap(), -4.0);
        assert!((ev("2*pi", 0.0).unwrap() - std::f64::consts::TAU).abs() < 1e-15);
        assert_eq!(ev("1.5e1 + 2E-1", 0.0).unwrap(), 15.2);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert!(matches!(parse("2**x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("foo(x)"), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("x + y"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse("(x + 1"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse("x $ 1"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("sin x"), Err(Error::Syntax { offset: 4, .. })));
    }

    #[test]
    fn derivative_examples() {
        let d = parse("sin(x)").unwrap().differentiate(Var::X);
        assert_eq!(d.eval_x(0.0).unwrap(), 1.0);
        let d = parse("(x+x^2)/2").unwrap().differentiate(Var::X);
        assert_eq!(d.to_string().replace(' ', ""), "(1+2*x)/2");
        assert_eq!(d.eval_x(1.0).unwrap(), 1.5);
        let d = parse("exp(2*x)").unwrap().differentiate(Var::X);
        assert_eq!(d.eval_x(0.0).unwrap(), 2.0);
        let d = parse("x^x").unwrap().differentiate(Var::X);
        assert!((d.eval_x(2.0).unwrap() - 4.0 * (1.0 + 2f64.ln())).abs() < 1e-13);
        assert_eq!(parse("x1*x2").unwrap().differentiate(Var::X), Expr::Num(0.0));
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        for s in ["x - (1 - x)", "-x^2", "(-x)^2", "x^-2", "2/(3*x)", "2*3/x", "sin(x)^2", "-(x + 1)"] {
            assert_eq!(parse(s).unwrap().to_string(), s);
        }
    }
}
