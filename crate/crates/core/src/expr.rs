//! Closed-form coordinate expressions.
//!
//! Every field in the toolkit (metric coefficients, Christoffel symbols,
//! one-forms, conformal factors) is a [`ScalarExpr`] over the coordinates of a
//! [`Chart`]. Expressions are parsed from a small infix grammar, evaluated at
//! points, and differentiated exactly.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)*
//! exponent := ['-'] integer | '(' ['-'] integer ')'
//! atom   := number | coordinate | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | ln | sqrt | tanh
//! ```
//!
//! Exponents are integers only; write `exp(b*ln(a))` for a general power.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Largest supported chart dimension.
pub const MAX_DIM: usize = 6;

const FUNCTION_NAMES: [&str; 6] = ["sin", "cos", "exp", "ln", "sqrt", "tanh"];

/// A coordinate chart: dimension plus coordinate names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("chart dimension {0} outside supported range 2..={MAX_DIM}")]
    Dimension(usize),
    #[error("invalid coordinate name {0:?}")]
    InvalidName(String),
    #[error("duplicate coordinate name {0:?}")]
    DuplicateName(String),
}

impl Chart {
    /// Chart with default coordinate names `x0..x{dim-1}`.
    pub fn new(dim: usize) -> Result<Self, ChartError> {
        Self::with_names((0..dim).map(|i| format!("x{i}")).collect())
    }

    pub fn with_names(names: Vec<String>) -> Result<Self, ChartError> {
        if !(2..=MAX_DIM).contains(&names.len()) {
            return Err(ChartError::Dimension(names.len()));
        }
        for (i, name) in names.iter().enumerate() {
            let mut chars = name.chars();
            let valid_start = chars
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
            let valid_rest = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid_start || !valid_rest || FUNCTION_NAMES.contains(&name.as_str()) {
                return Err(ChartError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(ChartError::DuplicateName(name.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Tanh,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
        }
    }

    fn apply(self, x: f64) -> Result<f64, EvalError> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Exp => Ok(x.exp()),
            Func::Ln if x <= 0.0 => Err(EvalError::LogNonPositive(x)),
            Func::Ln => Ok(x.ln()),
            Func::Sqrt if x < 0.0 => Err(EvalError::SqrtNegative(x)),
            Func::Sqrt => Ok(x.sqrt()),
            Func::Tanh => Ok(x.tanh()),
        }
    }
}

/// Expression tree over chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    Const(f64),
    Var(usize),
    Neg(Box<ScalarExpr>),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Div(Box<ScalarExpr>, Box<ScalarExpr>),
    Pow(Box<ScalarExpr>, i32),
    Call(Func, Box<ScalarExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    MalformedNumber(String),
    ExpectedIntegerExponent,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected token {t:?}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnknownIdentifier(id) => write!(f, "unknown identifier {id:?}"),
            ParseErrorKind::MalformedNumber(n) => write!(f, "malformed number {n:?}"),
            ParseErrorKind::ExpectedIntegerExponent => {
                write!(f, "exponent must be an integer literal")
            }
        }
    }
}

/// Parse failure with the byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of non-positive value {0}")]
    LogNonPositive(f64),
    #[error("square root of negative value {0}")]
    SqrtNegative(f64),
    #[error("non-finite result")]
    NonFinite,
    #[error("point has {found} coordinates, expression expects at least {expected}")]
    PointDimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
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

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Num(v) => v.to_string(),
            Token::Ident(s) => s.clone(),
            Token::Plus => "+".into(),
            Token::Minus => "-".into(),
            Token::Star => "*".into(),
            Token::Slash => "/".into(),
            Token::Caret => "^".into(),
            Token::LParen => "(".into(),
            Token::RParen => ")".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'+' => tokens.push((start, Token::Plus)),
            b'-' => tokens.push((start, Token::Minus)),
            b'*' => tokens.push((start, Token::Star)),
            b'/' => tokens.push((start, Token::Slash)),
            b'^' => tokens.push((start, Token::Caret)),
            b'(' => tokens.push((start, Token::LParen)),
            b')' => tokens.push((start, Token::RParen)),
            b'0'..=b'9' | b'.' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
                    pos += 1;
                }
                if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                    let mut look = pos + 1;
                    if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
                        look += 1;
                    }
                    if look < bytes.len() && bytes[look].is_ascii_digit() {
                        pos = look;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                    }
                }
                let literal = &text[start..pos];
                let value: f64 = literal.parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::MalformedNumber(literal.to_string()),
                })?;
                tokens.push((start, Token::Num(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                tokens.push((start, Token::Ident(text[start..pos].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        }
        pos += 1;
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        tok
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.error(ParseErrorKind::UnexpectedToken(t.describe())),
            None => self.error(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expect(&mut self, token: Token) -> Result<(), ParseError> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = ScalarExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = ScalarExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = ScalarExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = ScalarExpr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarExpr, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(ScalarExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let k = self.exponent()?;
            base = ScalarExpr::Pow(Box::new(base), k);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let parenthesized = self.peek() == Some(&Token::LParen);
        if parenthesized {
            self.pos += 1;
        }
        let negative = self.peek() == Some(&Token::Minus);
        if negative {
            self.pos += 1;
        }
        let k = match self.peek() {
            Some(Token::Num(v)) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => *v as i32,
            Some(Token::Num(_)) => return Err(self.error(ParseErrorKind::ExpectedIntegerExponent)),
            _ => return Err(self.error(ParseErrorKind::ExpectedIntegerExponent)),
        };
        self.pos += 1;
        if parenthesized {
            self.expect(Token::RParen)?;
        }
        Ok(if negative { -k } else { k })
    }

    fn atom(&mut self) -> Result<ScalarExpr, ParseError> {
        let offset = self.offset();
        match self.next() {
            Some(Token::Num(v)) => Ok(ScalarExpr::Const(v)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                if let Some(index) = self.chart.index_of(&name) {
                    return Ok(ScalarExpr::Var(index));
                }
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Token::LParen)?;
                    let arg = self.expr()?;
                    self.expect(Token::RParen)?;
                    return Ok(ScalarExpr::Call(func, Box::new(arg)));
                }
                Err(ParseError {
                    offset,
                    kind: ParseErrorKind::UnknownIdentifier(name),
                })
            }
            Some(_) => {
                self.pos -= 1;
                Err(self.unexpected())
            }
            None => Err(ParseError {
                offset,
                kind: ParseErrorKind::UnexpectedEnd,
            }),
        }
    }
}

impl ScalarExpr {
    /// Parse `text` against the coordinate names of `chart`.
    pub fn parse(text: &str, chart: &Chart) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end: text.len(),
            chart,
        };
        let expr = parser.expr()?;
        if parser.peek().is_some() {
            return Err(parser.unexpected());
        }
        Ok(expr)
    }

    pub fn constant(value: f64) -> Self {
        ScalarExpr::Const(value)
    }

    pub fn zero() -> Self {
        ScalarExpr::Const(0.0)
    }

    pub fn var(index: usize) -> Self {
        ScalarExpr::Var(index)
    }

    pub fn call(func: Func, arg: ScalarExpr) -> Self {
        match arg {
            ScalarExpr::Const(c) => match func.apply(c) {
                Ok(v) if v.is_finite() => ScalarExpr::Const(v),
                _ => ScalarExpr::Call(func, Box::new(arg)),
            },
            arg => ScalarExpr::Call(func, Box::new(arg)),
        }
    }

    pub fn powi(self, k: i32) -> Self {
        match (self, k) {
            (_, 0) => ScalarExpr::Const(1.0),
            (base, 1) => base,
            (ScalarExpr::Const(c), k) if c.powi(k).is_finite() => ScalarExpr::Const(c.powi(k)),
            (base, k) => ScalarExpr::Pow(Box::new(base), k),
        }
    }

    /// `Some(c)` if the expression is a literal constant.
    pub fn as_const(&self) -> Option<f64> {
        match self {
            ScalarExpr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    /// Smallest chart dimension this expression can be evaluated on.
    pub fn min_dim(&self) -> usize {
        match self {
            ScalarExpr::Const(_) => 0,
            ScalarExpr::Var(i) => i + 1,
            ScalarExpr::Neg(a) | ScalarExpr::Pow(a, _) | ScalarExpr::Call(_, a) => a.min_dim(),
            ScalarExpr::Add(a, b)
            | ScalarExpr::Sub(a, b)
            | ScalarExpr::Mul(a, b)
            | ScalarExpr::Div(a, b) => a.min_dim().max(b.min_dim()),
        }
    }

    /// Evaluate at `point`.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let needed = self.min_dim();
        if point.len() < needed {
            return Err(EvalError::PointDimension {
                expected: needed,
                found: point.len(),
            });
        }
        let value = self.eval_unchecked(point)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn eval_unchecked(&self, p: &[f64]) -> Result<f64, EvalError> {
        let v = match self {
            ScalarExpr::Const(c) => *c,
            ScalarExpr::Var(i) => p[*i],
            ScalarExpr::Neg(a) => -a.eval_unchecked(p)?,
            ScalarExpr::Add(a, b) => a.eval_unchecked(p)? + b.eval_unchecked(p)?,
            ScalarExpr::Sub(a, b) => a.eval_unchecked(p)? - b.eval_unchecked(p)?,
            ScalarExpr::Mul(a, b) => a.eval_unchecked(p)? * b.eval_unchecked(p)?,
            ScalarExpr::Div(a, b) => {
                let num = a.eval_unchecked(p)?;
                let den = b.eval_unchecked(p)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                num / den
            }
            ScalarExpr::Pow(a, k) => {
                let base = a.eval_unchecked(p)?;
                if base == 0.0 && *k < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                base.powi(*k)
            }
            ScalarExpr::Call(f, a) => f.apply(a.eval_unchecked(p)?)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Exact partial derivative with respect to coordinate `coord`.
    pub fn differentiate(&self, coord: usize) -> ScalarExpr {
        match self {
            ScalarExpr::Const(_) => ScalarExpr::zero(),
            ScalarExpr::Var(i) => ScalarExpr::Const(if *i == coord { 1.0 } else { 0.0 }),
            ScalarExpr::Neg(a) => -a.differentiate(coord),
            ScalarExpr::Add(a, b) => a.differentiate(coord) + b.differentiate(coord),
            ScalarExpr::Sub(a, b) => a.differentiate(coord) - b.differentiate(coord),
            ScalarExpr::Mul(a, b) => {
                a.differentiate(coord) * (**b).clone() + (**a).clone() * b.differentiate(coord)
            }
            ScalarExpr::Div(a, b) => {
                let da = a.differentiate(coord);
                let db = b.differentiate(coord);
                if db.is_zero() {
                    da / (**b).clone()
                } else {
                    (da * (**b).clone() - (**a).clone() * db) / (**b).clone().powi(2)
                }
            }
            ScalarExpr::Pow(a, k) => {
                let da = a.differentiate(coord);
                ScalarExpr::Const(*k as f64) * (**a).clone().powi(k - 1) * da
            }
            ScalarExpr::Call(f, a) => {
                let da = a.differentiate(coord);
                if da.is_zero() {
                    return ScalarExpr::zero();
                }
                let u = (**a).clone();
                let outer = match f {
                    Func::Sin => ScalarExpr::call(Func::Cos, u),
                    Func::Cos => -ScalarExpr::call(Func::Sin, u),
                    Func::Exp => ScalarExpr::call(Func::Exp, u),
                    Func::Ln => return da / u,
                    Func::Sqrt => {
                        return da / (ScalarExpr::Const(2.0) * ScalarExpr::call(Func::Sqrt, u))
                    }
                    Func::Tanh => ScalarExpr::Const(1.0) - ScalarExpr::call(Func::Tanh, u).powi(2),
                };
                outer * da
            }
        }
    }

    /// Render with the coordinate names of `chart`.
    pub fn display<'a>(&'a self, chart: &'a Chart) -> Display<'a> {
        Display {
            expr: self,
            names: Some(chart.names()),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, names: Option<&[String]>) -> fmt::Result {
        match self {
            ScalarExpr::Const(c) if c.is_sign_negative() => write!(f, "(-{:?})", -c),
            ScalarExpr::Const(c) => write!(f, "{c:?}"),
            ScalarExpr::Var(i) => match names.and_then(|n| n.get(*i)) {
                Some(name) => f.write_str(name),
                None => write!(f, "x{i}"),
            },
            ScalarExpr::Neg(a) => {
                f.write_str("(-")?;
                a.write(f, names)?;
                f.write_str(")")
            }
            ScalarExpr::Add(a, b) => binary(f, names, a, " + ", b),
            ScalarExpr::Sub(a, b) => binary(f, names, a, " - ", b),
            ScalarExpr::Mul(a, b) => binary(f, names, a, " * ", b),
            ScalarExpr::Div(a, b) => binary(f, names, a, " / ", b),
            ScalarExpr::Pow(a, k) => {
                f.write_str("(")?;
                a.write(f, names)?;
                write!(f, ")^({k})")
            }
            ScalarExpr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f, names)?;
                f.write_str(")")
            }
        }
    }
}

fn binary(
    f: &mut fmt::Formatter<'_>,
    names: Option<&[String]>,
    a: &ScalarExpr,
    op: &str,
    b: &ScalarExpr,
) -> fmt::Result {
    f.write_str("(")?;
    a.write(f, names)?;
    f.write_str(op)?;
    b.write(f, names)?;
    f.write_str(")")
}

/// Printer returned by [`ScalarExpr::display`]. Output re-parses to an
/// expression that evaluates bit-identically.
pub struct Display<'a> {
    expr: &'a ScalarExpr,
    names: Option<&'a [String]>,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.write(f, self.names)
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, None)
    }
}

fn fold(a: &ScalarExpr, b: &ScalarExpr, op: fn(f64, f64) -> f64) -> Option<ScalarExpr> {
    let v = op(a.as_const()?, b.as_const()?);
    v.is_finite().then_some(ScalarExpr::Const(v))
}

impl Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: ScalarExpr) -> ScalarExpr {
        if let Some(c) = fold(&self, &rhs, |a, b| a + b) {
            return c;
        }
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        ScalarExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: ScalarExpr) -> ScalarExpr {
        if let Some(c) = fold(&self, &rhs, |a, b| a - b) {
            return c;
        }
        if rhs.is_zero() {
            return self;
        }
        if self.is_zero() {
            return -rhs;
        }
        ScalarExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: ScalarExpr) -> ScalarExpr {
        if let Some(c) = fold(&self, &rhs, |a, b| a * b) {
            return c;
        }
        if self.is_zero() || rhs.is_zero() {
            return ScalarExpr::zero();
        }
        if self.as_const() == Some(1.0) {
            return rhs;
        }
        if rhs.as_const() == Some(1.0) {
            return self;
        }
        ScalarExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Div for ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: ScalarExpr) -> ScalarExpr {
        if rhs.as_const() != Some(0.0) {
            if let Some(c) = fold(&self, &rhs, |a, b| a / b) {
                return c;
            }
        }
        if rhs.as_const() == Some(1.0) {
            return self;
        }
        ScalarExpr::Div(Box::new(self), Box::new(rhs))
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        match self {
            ScalarExpr::Const(c) => ScalarExpr::Const(-c),
            ScalarExpr::Neg(inner) => *inner,
            e => ScalarExpr::Neg(Box::new(e)),
        }
    }
}
