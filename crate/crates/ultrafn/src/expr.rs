//! A small expression language for functions of one real variable.
//!
//! Grammar (whitespace insensitive, no implicit multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('+' | '-') factor | power
//! power  := atom ('^' factor)?            -- right associative
//! atom   := number | 'x' | 'i' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Known functions: exp, sin, cos, abs, ramp (max(0, x)), gauss
//! (exp(-x^2/2)). The literal `i` is the imaginary unit; evaluation is
//! complex throughout and real trees produce real values on real inputs.

use std::fmt;

use num_complex::Complex64;

use crate::error::ExprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
    Ramp,
    Gauss,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
            Func::Ramp => "ramp",
            Func::Gauss => "gauss",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            "ramp" => Func::Ramp,
            "gauss" => Func::Gauss,
            _ => return None,
        })
    }
}

/// Parsed expression tree over the single variable x.
#[derive(Debug, Clone, PartialEq)]
pub enum FuncExpr {
    Num(Complex64),
    Var,
    Neg(Box<FuncExpr>),
    Add(Box<FuncExpr>, Box<FuncExpr>),
    Sub(Box<FuncExpr>, Box<FuncExpr>),
    Mul(Box<FuncExpr>, Box<FuncExpr>),
    Div(Box<FuncExpr>, Box<FuncExpr>),
    Pow(Box<FuncExpr>, Box<FuncExpr>),
    Call(Func, Box<FuncExpr>),
}

// --- lexer ----------------------------------------------------------------

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

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ExprError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                return Ok(out);
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' | b'.' => lx.number(start)?,
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while lx.pos < lx.src.len()
                        && (lx.src[lx.pos].is_ascii_alphanumeric() || lx.src[lx.pos] == b'_')
                    {
                        lx.pos += 1;
                    }
                    Tok::Ident(String::from_utf8_lossy(&lx.src[start..lx.pos]).into_owned())
                }
                _ => {
                    return Err(ExprError::Syntax {
                        offset: start,
                        expected: vec!["number", "identifier", "operator", "parenthesis"],
                    })
                }
            };
            out.push((tok, start));
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok, ExprError> {
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // exponent part: e or E, optional sign, digits
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = mark; // bare 'e' belongs to an identifier, not this number
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>().map(Tok::Num).map_err(|_| ExprError::Syntax {
            offset: start,
            expected: vec!["number"],
        })
    }
}

// --- parser ----------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

const ATOM_EXPECTED: &[&str] = &["number", "'x'", "'i'", "function", "'('", "'+'", "'-'"];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, o)| o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<FuncExpr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = FuncExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = FuncExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<FuncExpr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = FuncExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = FuncExpr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<FuncExpr, ExprError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(FuncExpr::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FuncExpr, ExprError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let exp = self.factor()?; // right associative, unary signs allowed
            return Ok(FuncExpr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FuncExpr, ExprError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(FuncExpr::Num(Complex64::new(v, 0.0))),
            Some(Tok::Ident(name)) => {
                if name == "x" {
                    return Ok(FuncExpr::Var);
                }
                if name == "i" {
                    return Ok(FuncExpr::Num(Complex64::new(0.0, 1.0)));
                }
                match self.peek() {
                    Some(Tok::LParen) => {
                        let func = Func::from_name(&name)
                            .ok_or(ExprError::UnknownFunction { name, offset })?;
                        self.bump();
                        let arg = self.expr()?;
                        self.expect_rparen()?;
                        Ok(FuncExpr::Call(func, Box::new(arg)))
                    }
                    _ => Err(ExprError::UnknownFunction { name, offset }),
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            _ => Err(ExprError::Syntax {
                offset,
                expected: ATOM_EXPECTED.to_vec(),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::RParen) => Ok(()),
            _ => Err(ExprError::Syntax {
                offset,
                expected: vec!["')'"],
            }),
        }
    }
}

/// Parse an expression; errors carry the byte offset and expected tokens.
pub fn parse(src: &str) -> Result<FuncExpr, ExprError> {
    let toks = Lexer::tokens(src)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(ExprError::Syntax {
            offset: parser.offset(),
            expected: vec!["operator", "end of input"],
        });
    }
    Ok(e)
}

// --- evaluation -------------------------------------------------------------

impl FuncExpr {
    pub fn eval_complex(&self, x: Complex64) -> Result<Complex64, ExprError> {
        Ok(match self {
            FuncExpr::Num(c) => *c,
            FuncExpr::Var => x,
            FuncExpr::Neg(a) => -a.eval_complex(x)?,
            FuncExpr::Add(a, b) => a.eval_complex(x)? + b.eval_complex(x)?,
            FuncExpr::Sub(a, b) => a.eval_complex(x)? - b.eval_complex(x)?,
            FuncExpr::Mul(a, b) => a.eval_complex(x)? * b.eval_complex(x)?,
            FuncExpr::Div(a, b) => {
                let d = b.eval_complex(x)?;
                if d.norm() == 0.0 {
                    return Err(ExprError::DivisionByZero { x: x.re });
                }
                a.eval_complex(x)? / d
            }
            FuncExpr::Pow(a, b) => {
                let base = a.eval_complex(x)?;
                let exp = b.eval_complex(x)?;
                // integer powers stay exact on the real axis
                if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() <= 64.0 {
                    base.powi(exp.re as i32)
                } else {
                    base.powc(exp)
                }
            }
            FuncExpr::Call(f, a) => {
                let v = a.eval_complex(x)?;
                match f {
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Abs => Complex64::new(v.norm(), 0.0),
                    Func::Ramp => {
                        if v.re > 0.0 {
                            v
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    }
                    Func::Gauss => (-v * v / 2.0).exp(),
                }
            }
        })
    }

    pub fn eval(&self, x: f64) -> Result<Complex64, ExprError> {
        self.eval_complex(Complex64::new(x, 0.0))
    }

    /// Symbolic derivative. Non-smooth primitives (abs, ramp) and
    /// non-constant exponents are rejected.
    pub fn derivative(&self) -> Result<FuncExpr, ExprError> {
        use FuncExpr::*;
        Ok(match self {
            Num(_) => Num(Complex64::new(0.0, 0.0)),
            Var => Num(Complex64::new(1.0, 0.0)),
            Neg(a) => Neg(Box::new(a.derivative()?)),
            Add(a, b) => Add(Box::new(a.derivative()?), Box::new(b.derivative()?)),
            Sub(a, b) => Sub(Box::new(a.derivative()?), Box::new(b.derivative()?)),
            Mul(a, b) => Add(
                Box::new(Mul(Box::new(a.derivative()?), b.clone())),
                Box::new(Mul(a.clone(), Box::new(b.derivative()?))),
            ),
            Div(a, b) => Div(
                Box::new(Sub(
                    Box::new(Mul(Box::new(a.derivative()?), b.clone())),
                    Box::new(Mul(a.clone(), Box::new(b.derivative()?))),
                )),
                Box::new(Pow(b.clone(), Box::new(Num(Complex64::new(2.0, 0.0))))),
            ),
            Pow(a, b) => match b.as_ref() {
                Num(c) => {
                    // d/dx u^c = c * u^(c-1) * u'
                    let reduced = Pow(a.clone(), Box::new(Num(c - 1.0)));
                    Mul(
                        Box::new(Mul(Box::new(Num(*c)), Box::new(reduced))),
                        Box::new(a.derivative()?),
                    )
                }
                _ => {
                    return Err(ExprError::NotDifferentiable(
                        "non-constant exponent".into(),
                    ))
                }
            },
            Call(f, a) => {
                let inner = a.derivative()?;
                let outer = match f {
                    Func::Exp => Call(Func::Exp, a.clone()),
                    Func::Sin => Call(Func::Cos, a.clone()),
                    Func::Cos => Neg(Box::new(Call(Func::Sin, a.clone()))),
                    Func::Gauss => Neg(Box::new(Mul(a.clone(), Box::new(Call(Func::Gauss, a.clone()))))),
                    Func::Abs | Func::Ramp => {
                        return Err(ExprError::NotDifferentiable(format!(
                            "{} has a kink",
                            f.name()
                        )))
                    }
                };
                Mul(Box::new(outer), Box::new(inner))
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            FuncExpr::Add(..) | FuncExpr::Sub(..) => 1,
            FuncExpr::Mul(..) | FuncExpr::Div(..) => 2,
            FuncExpr::Neg(..) => 3,
            FuncExpr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < parent {
            write!(f, "(")?;
        }
        match self {
            FuncExpr::Num(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)?;
                } else if c.re == 0.0 && c.im == 1.0 {
                    write!(f, "i")?;
                } else if c.re == 0.0 {
                    write!(f, "{}*i", c.im)?;
                } else {
                    write!(f, "({}+{}*i)", c.re, c.im)?;
                }
            }
            FuncExpr::Var => write!(f, "x")?,
            FuncExpr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 4)?;
            }
            FuncExpr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            FuncExpr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            FuncExpr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?;
            }
            FuncExpr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)?;
            }
            FuncExpr::Pow(a, b) => {
                a.fmt_prec(f, 5)?;
                write!(f, "^")?;
                b.fmt_prec(f, 4)?;
            }
            FuncExpr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if prec < parent {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
