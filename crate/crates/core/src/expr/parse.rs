//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' unary) | ('/' number))*
//! unary   := '-' unary | power
//! power   := primary ('^' integer)?
//! primary := number | 'x' index | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals and are stored as exact rationals, so
//! `100/3` folds into a single constant.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{CheckedDiv, CheckedMul, Zero};

use super::Expr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = i + 1;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => out.push((pos, Token::Plus)),
            b'-' => out.push((pos, Token::Minus)),
            b'*' => out.push((pos, Token::Star)),
            b'/' => out.push((pos, Token::Slash)),
            b'^' => out.push((pos, Token::Caret)),
            b'(' => out.push((pos, Token::LParen)),
            b')' => out.push((pos, Token::RParen)),
            b'x' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(syntax(pos, "expected variable index after 'x'"));
                }
                let index = text[start..j]
                    .parse::<usize>()
                    .map_err(|_| syntax(pos, "variable index too large"))?;
                out.push((pos, Token::Var(index)));
                i = j;
                continue;
            }
            b'0'..=b'9' | b'.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                out.push((pos, Token::Num(parse_number(&text[i..j], pos)?)));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(pos, format!("unexpected character '{ch}'")));
            }
        }
        i += 1;
    }
    Ok(out)
}

fn parse_number(s: &str, pos: usize) -> Result<Rational64> {
    let overflow = || syntax(pos, format!("numeric literal '{s}' out of range"));
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(syntax(pos, format!("malformed number '{s}'")));
    }
    let digits = format!("{int}{frac}");
    let numer: i64 = digits.parse().map_err(|_| overflow())?;
    let denom = 10i64
        .checked_pow(frac.len() as u32)
        .ok_or_else(overflow)?;
    Ok(Rational64::new(numer, denom))
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Arc::new(lhs), Arc::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Arc::new(lhs), Arc::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = fold_mul(lhs, rhs);
                }
                Some(Token::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    let divisor = match self.bump() {
                        Some(Token::Num(c)) => c,
                        _ => return Err(syntax(pos, "division is only allowed by a numeric constant")),
                    };
                    if divisor.is_zero() {
                        return Err(syntax(pos, "division by zero"));
                    }
                    lhs = match lhs.as_const().and_then(|c| c.checked_div(&divisor)) {
                        Some(q) => Expr::Const(q),
                        None => Expr::Mul(Arc::new(lhs), Arc::new(Expr::Const(divisor.recip()))),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Token::Minus) = self.peek() {
            self.bump();
            return Ok(match self.unary()? {
                Expr::Const(c) => Expr::Const(-c),
                e => Expr::Neg(Arc::new(e)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if let Some(Token::Caret) = self.peek() {
            let pos = self.pos();
            self.bump();
            let k = match self.bump() {
                Some(Token::Num(c)) if c.is_integer() && *c.numer() >= 0 && *c.numer() <= u32::MAX as i64 => {
                    *c.numer() as u32
                }
                _ => return Err(syntax(pos, "exponent must be a nonnegative integer")),
            };
            return Ok(Expr::Pow(Arc::new(base), k));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Token::Num(c)) => Ok(Expr::Const(c)),
            Some(Token::Var(i)) => {
                if i == 0 || i > self.dim {
                    Err(Error::VariableIndex {
                        index: i,
                        dim: self.dim,
                    })
                } else {
                    Ok(Expr::Var(i))
                }
            }
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(syntax(pos, "unbalanced parenthesis")),
                }
            }
            Some(t) => Err(syntax(pos, format!("unexpected token {t:?}"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn fold_mul(a: Expr, b: Expr) -> Expr {
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        if let Some(p) = x.checked_mul(y) {
            return Expr::Const(p);
        }
    }
    Expr::Mul(Arc::new(a), Arc::new(b))
}

/// Parses `text` as a polynomial in `x1..x{dim}`.
pub fn parse(text: &str, dim: usize) -> Result<Expr> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        at: 0,
        end: text.len() + 1,
        dim,
    };
    let e = p.expr()?;
    if p.at < p.tokens.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}
