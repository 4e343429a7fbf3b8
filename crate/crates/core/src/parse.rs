//! Expression parser for polynomials.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { "*" unary } ;
//! unary   = "-" unary | factor ;
//! factor  = primary [ "^" integer ] ;
//! primary = integer [ "/" integer ] | identifier | "(" expr ")" ;
//! ```
//!
//! Implicit multiplication (`2x`, `x y`) is a syntax error.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ if c.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().unwrap()), start));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.at(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(&self.unary()?);
        }
        match self.peek() {
            Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                self.err("implicit multiplication is not allowed; use `*`")
            }
            _ => Ok(acc),
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.at();
            match self.bump() {
                Tok::Int(e) => {
                    let e: u32 = e.try_into().map_err(|_| Error::Syntax { pos, msg: "exponent too large".into() })?;
                    Ok(base.pow(e))
                }
                Tok::Minus => Err(Error::Syntax { pos, msg: "exponent must be a non-negative integer".into() }),
                _ => Err(Error::Syntax { pos, msg: "exponent must be a non-negative integer".into() }),
            }
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.factor()
    }

    fn primary(&mut self) -> Result<Poly> {
        let pos = self.at();
        match self.bump() {
            Tok::Int(n) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dpos = self.at();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => Ok(Poly::constant(self.ring, Rational::new(n, d))),
                        Tok::Int(_) => Err(Error::Syntax { pos: dpos, msg: "division by zero".into() }),
                        _ => Err(Error::Syntax { pos: dpos, msg: "`/` is only allowed between integer literals".into() }),
                    }
                } else {
                    Ok(Poly::constant(self.ring, Rational::from_integer(n)))
                }
            }
            Tok::Ident(name) => match self.ring.var_index(&name) {
                Some(i) => Ok(Poly::var(self.ring, i)),
                None => Err(Error::UnknownVariable(name)),
            },
            Tok::LParen => {
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(e)
            }
            Tok::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            t => Err(Error::Syntax { pos, msg: format!("unexpected token {t:?}") }),
        }
    }
}

/// Parse an expression over `ring`.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<Poly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(out)
}
