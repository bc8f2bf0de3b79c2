//! Recursive-descent parser for the expression DSL.
//!
//! Grammar (exact):
//!
//! ```text
//! expr     := ['-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := primary ('^' positive_integer)*
//! primary  := rational | "exp" "(" signed_integer "*" "x3" ")" | func | "(" expr ")"
//! func     := declared_symbol ("'")*
//! rational := integer ("/" positive_integer)?
//! ```
//!
//! Function symbols must be declared up front; anything else is rejected with
//! the byte offset of the offending token.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::expr::{Expr, Monomial, Rational};
use crate::expr::FuncAtom;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function symbol `{name}` at byte {offset} (symbols must be declared)")]
    UnknownSymbol { name: String, offset: usize },
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Primes(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token plus the byte offset where it starts.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::Eof, start));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'\'' => {
                let mut n = 0u32;
                while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
                    n += 1;
                    self.pos += 1;
                }
                Tok::Primes(n)
            }
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Int(BigInt::from_str(text).unwrap())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Ident(text.to_string())
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Tok,
    offset: usize,
    symbols: &'a BTreeSet<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, symbols: &'a BTreeSet<String>) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (current, offset) = lexer.next()?;
        Ok(Parser {
            lexer,
            current,
            offset,
            symbols,
        })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, offset) = self.lexer.next()?;
        self.current = tok;
        self.offset = offset;
        Ok(())
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.current == tok {
            self.bump()
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut negate = false;
        if self.current == Tok::Minus {
            negate = true;
            self.bump()?;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.current {
                Tok::Plus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.current == Tok::Star {
            self.bump()?;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while self.current == Tok::Caret {
            self.bump()?;
            let n = self.positive_integer()?;
            base = base.pow(n);
        }
        Ok(base)
    }

    fn positive_integer(&mut self) -> Result<u32, ParseError> {
        // powers beyond this have no use here and would blow up term counts
        const MAX_EXPONENT: u32 = 512;
        match &self.current {
            Tok::Int(n) if !n.is_zero() => {
                let v: u32 = n
                    .try_into()
                    .ok()
                    .filter(|v| *v <= MAX_EXPONENT)
                    .ok_or_else(|| ParseError::Syntax {
                        offset: self.offset,
                        message: "exponent too large".into(),
                    })?;
                self.bump()?;
                Ok(v)
            }
            _ => self.syntax("expected positive integer"),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.current.clone() {
            Tok::Int(n) => {
                self.bump()?;
                if self.current == Tok::Slash {
                    self.bump()?;
                    match &self.current {
                        Tok::Int(d) if !d.is_zero() => {
                            let r = Rational::new(n, d.clone());
                            self.bump()?;
                            Ok(Expr::from_rational(r))
                        }
                        _ => self.syntax("expected positive integer denominator"),
                    }
                } else {
                    Ok(Expr::from_rational(Rational::from(n)))
                }
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if name == "exp" => {
                let _ = self.bump();
                self.expect(Tok::LParen, "`(` after exp")?;
                let mut sign = 1i64;
                match self.current {
                    Tok::Minus => {
                        sign = -1;
                        self.bump()?;
                    }
                    Tok::Plus => {
                        self.bump()?;
                    }
                    _ => {}
                }
                let k = match &self.current {
                    Tok::Int(n) => {
                        let v: i64 = n.try_into().map_err(|_| ParseError::Syntax {
                            offset: self.offset,
                            message: "exponential weight too large".into(),
                        })?;
                        self.bump()?;
                        v
                    }
                    _ => return self.syntax("expected integer exponential weight"),
                };
                self.expect(Tok::Star, "`*` in exp(k*x3)")?;
                match &self.current {
                    Tok::Ident(x) if x == "x3" => self.bump()?,
                    _ => return self.syntax("expected `x3`"),
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::exp_weight(sign * k))
            }
            Tok::Ident(name) => {
                let offset = self.offset;
                if !self.symbols.contains(&name) {
                    return Err(ParseError::UnknownSymbol { name, offset });
                }
                self.bump()?;
                let order = if let Tok::Primes(n) = self.current {
                    self.bump()?;
                    n
                } else {
                    0
                };
                Ok(Expr::term(
                    Rational::from(BigInt::from(1)),
                    0,
                    Monomial::atom(FuncAtom::new(name, order)),
                ))
            }
            _ => self.syntax("expected rational, `exp`, function symbol or `(`"),
        }
    }
}

/// Parse a DSL expression against a set of declared function symbols.
pub fn parse_expr(text: &str, symbols: &BTreeSet<String>) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, symbols)?;
    let e = p.expr()?;
    if p.current != Tok::Eof {
        return p.syntax("trailing input");
    }
    Ok(e)
}
