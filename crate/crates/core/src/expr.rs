//! One-variable arithmetic expressions for the nonlinearity `f(u)` and the
//! boundary weight `g(t)`.
//!
//! The grammar is a small recursive-descent language: `+ - * /` are
//! left-associative, `^` is right-associative and binds tighter than unary
//! minus, and the function set is `exp, ln, sqrt, sin, cos, abs`. There is
//! no implicit multiplication.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
        }
    }
}

/// Parsed expression tree. The free variable is positional (`Var`), so the
/// same tree evaluates as a function of `u` or of `t` depending on how it
/// was parsed.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Const(f64),
    Var,
    Neg(Box<ExprAst>),
    Binary(BinaryOp, Box<ExprAst>, Box<ExprAst>),
    Call(Func, Box<ExprAst>),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{message} at byte offset {offset}")]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
}

impl ParseError {
    /// 1-based line/column of the error, for CLI diagnostics.
    pub fn line_col(&self, source: &str) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for (i, c) in source.char_indices() {
            if i >= self.offset {
                break;
            }
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("domain error: {op}({arg}) — {reason}")]
pub struct EvalError {
    pub op: String,
    pub arg: f64,
    pub reason: String,
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

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent part
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
                let value: f64 = text.parse().map_err(|_| ParseError {
                    message: format!("invalid number literal `{text}`"),
                    offset: start,
                })?;
                out.push((Token::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Token::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    message: format!("unexpected character `{c}`"),
                    offset: i,
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Token, usize)>,
    pos: usize,
    var: &'a str,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, o)| o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            message: message.into(),
            offset: self.offset(),
        }
    }

    fn sum(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Token::Plus) => BinaryOp::Add,
                Some(Token::Minus) => BinaryOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Token::Star) => BinaryOp::Mul,
                Some(Token::Slash) => BinaryOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            // right-associative; the exponent may carry a unary minus
            let exp = self.unary()?;
            return Ok(ExprAst::Binary(
                BinaryOp::Pow,
                Box::new(base),
                Box::new(exp),
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Token::Num(v)) => Ok(ExprAst::Const(v)),
            Some(Token::LParen) => {
                let inner = self.sum()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(ParseError {
                        message: "expected `)`".into(),
                        offset: self.toks.get(self.pos - 1).map(|&(_, o)| o).unwrap_or(self.end),
                    }),
                }
            }
            Some(Token::Ident(name)) => {
                if let Some(func) = Func::from_name(&name) {
                    match self.bump() {
                        Some(Token::LParen) => {}
                        _ => {
                            return Err(ParseError {
                                message: format!("expected `(` after function `{name}`"),
                                offset,
                            })
                        }
                    }
                    let arg = self.sum()?;
                    match self.bump() {
                        Some(Token::RParen) => Ok(ExprAst::Call(func, Box::new(arg))),
                        _ => Err(ParseError {
                            message: "expected `)`".into(),
                            offset,
                        }),
                    }
                } else if name == self.var {
                    Ok(ExprAst::Var)
                } else {
                    Err(ParseError {
                        message: format!(
                            "unknown identifier `{name}` (the free variable is `{}`)",
                            self.var
                        ),
                        offset,
                    })
                }
            }
            Some(_) => Err(ParseError {
                message: "expected a number, variable, function or `(`".into(),
                offset,
            }),
            None => Err(ParseError {
                message: "unexpected end of expression".into(),
                offset,
            }),
        }
    }
}

/// Parse `source` as an expression in the single free variable `variable`.
pub fn parse(source: &str, variable: &str) -> Result<ExprAst, ParseError> {
    if source.trim().is_empty() {
        return Err(ParseError {
            message: "empty expression".into(),
            offset: 0,
        });
    }
    let toks = tokenize(source)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        var: variable,
        end: source.len(),
    };
    let ast = parser.sum()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(ast)
}

impl ExprAst {
    /// Evaluate at `x`. Domain violations (negative sqrt argument,
    /// non-positive log, division by zero, fractional power of a negative
    /// base) are reported as errors rather than propagated as NaN. Overflow
    /// to infinity is allowed; the growth classifier relies on it.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = self.eval_inner(x)?;
        if v.is_nan() {
            return Err(EvalError {
                op: "expression".into(),
                arg: x,
                reason: "evaluation produced NaN".into(),
            });
        }
        Ok(v)
    }

    fn eval_inner(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            ExprAst::Const(c) => Ok(*c),
            ExprAst::Var => Ok(x),
            ExprAst::Neg(inner) => Ok(-inner.eval_inner(x)?),
            ExprAst::Binary(op, l, r) => {
                let a = l.eval_inner(x)?;
                let b = r.eval_inner(x)?;
                match op {
                    BinaryOp::Add => Ok(a + b),
                    BinaryOp::Sub => Ok(a - b),
                    BinaryOp::Mul => Ok(a * b),
                    BinaryOp::Div => {
                        if b == 0.0 {
                            Err(EvalError {
                                op: "divide".into(),
                                arg: a,
                                reason: "division by zero".into(),
                            })
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinaryOp::Pow => pow_checked(a, b),
                }
            }
            ExprAst::Call(func, arg) => {
                let a = arg.eval_inner(x)?;
                match func {
                    Func::Exp => Ok(a.exp()),
                    Func::Ln => {
                        if a <= 0.0 {
                            Err(EvalError {
                                op: "ln".into(),
                                arg: a,
                                reason: "argument must be positive".into(),
                            })
                        } else {
                            Ok(a.ln())
                        }
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            Err(EvalError {
                                op: "sqrt".into(),
                                arg: a,
                                reason: "argument must be nonnegative".into(),
                            })
                        } else {
                            Ok(a.sqrt())
                        }
                    }
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                    Func::Abs => Ok(a.abs()),
                }
            }
        }
    }

    /// Render with the given variable name; `parse(pretty(..), var)`
    /// reproduces a structurally identical tree.
    pub fn pretty(&self, var: &str) -> String {
        let mut out = String::new();
        self.write_pretty(&mut out, var, 0)
            .expect("string formatting cannot fail");
        out
    }

    // prec: 0 sum, 1 term, 2 unary, 3 power-base
    fn write_pretty(&self, out: &mut String, var: &str, prec: u8) -> fmt::Result {
        use fmt::Write;
        match self {
            ExprAst::Const(c) => {
                if *c < 0.0 || !c.is_finite() {
                    write!(out, "({c})")
                } else {
                    write!(out, "{c}")
                }
            }
            ExprAst::Var => write!(out, "{var}"),
            ExprAst::Neg(inner) => {
                let need = prec >= 3;
                if need {
                    out.push('(');
                }
                out.push('-');
                inner.write_pretty(out, var, 2)?;
                if need {
                    out.push(')');
                }
                Ok(())
            }
            ExprAst::Binary(op, l, r) => {
                let (sym, my_prec) = match op {
                    BinaryOp::Add => ("+", 0),
                    BinaryOp::Sub => ("-", 0),
                    BinaryOp::Mul => ("*", 1),
                    BinaryOp::Div => ("/", 1),
                    BinaryOp::Pow => ("^", 3),
                };
                let need = prec > my_prec;
                if need {
                    out.push('(');
                }
                if *op == BinaryOp::Pow {
                    // base binds as an atom, exponent re-enters at unary level
                    l.write_pretty(out, var, 4)?;
                    out.push('^');
                    r.write_pretty(out, var, 2)?;
                } else {
                    l.write_pretty(out, var, my_prec)?;
                    out.push_str(sym);
                    // left-associative: the right child needs one level more
                    r.write_pretty(out, var, my_prec + 1)?;
                }
                if need {
                    out.push(')');
                }
                Ok(())
            }
            ExprAst::Call(func, arg) => {
                use fmt::Write;
                write!(out, "{}(", func.name())?;
                arg.write_pretty(out, var, 0)?;
                out.push(')');
                Ok(())
            }
        }
    }
}

fn pow_checked(base: f64, exp: f64) -> Result<f64, EvalError> {
    let is_int = exp.fract() == 0.0 && exp.abs() < 1e15;
    if base < 0.0 && !is_int {
        return Err(EvalError {
            op: "pow".into(),
            arg: base,
            reason: format!("negative base with non-integer exponent {exp}"),
        });
    }
    if base == 0.0 && exp < 0.0 {
        return Err(EvalError {
            op: "pow".into(),
            arg: base,
            reason: "zero base with negative exponent".into(),
        });
    }
    if is_int && exp.abs() <= 127.0 {
        return Ok(base.powi(exp as i32));
    }
    Ok(base.powf(exp))
}
