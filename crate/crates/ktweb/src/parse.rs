//! Text grammar for polynomials in q1, q2.
//!
//! Variables `q1`, `q2`; integer and `a/b` rational literals; operators
//! `+ - * ^` with `^` taking a nonnegative integer literal; parentheses;
//! multiplication is always explicit; unary minus is allowed. This is the
//! wire format used by the CLI JSON fields.

use std::error::Error;
use std::fmt;

use num_bigint::BigInt;

use crate::poly::{Poly2, Var};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the offending input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

impl Error for ParseError {}

/// Parse an expression into canonical term-map form.
pub fn parse_poly(src: &str) -> Result<Poly2<Rational>, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            message: msg.into(),
        }
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

    fn expr(&mut self) -> Result<Poly2<Rational>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly2<Rational>, ParseError> {
        let mut acc = self.unary()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly2<Rational>, ParseError> {
        if let Some(b'-') = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Poly2<Rational>, ParseError> {
        let base = self.primary()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            let exp = self.exponent()?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'-') => Err(self.err("negative exponent")),
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                // a/b right after the exponent digits would be a rational power
                if self.src.get(self.pos) == Some(&b'/') {
                    return Err(self.err("non-integer exponent"));
                }
                digits
                    .parse::<u32>()
                    .map_err(|_| self.err("exponent too large"))
            }
            _ => Err(self.err("expected nonnegative integer exponent")),
        }
    }

    fn primary(&mut self) -> Result<Poly2<Rational>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<Poly2<Rational>, ParseError> {
        let numer: BigInt = self.digits().parse().expect("digit run");
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            match self.src.get(self.pos) {
                Some(c) if c.is_ascii_digit() => {
                    let denom: BigInt = self.digits().parse().expect("digit run");
                    if denom == BigInt::from(0) {
                        return Err(ParseError {
                            offset: at,
                            message: "zero denominator".into(),
                        });
                    }
                    Ok(Poly2::constant(Rational::new(numer, denom)))
                }
                _ => Err(self.err("expected denominator digits")),
            }
        } else {
            Ok(Poly2::constant(Rational::from_integer(numer)))
        }
    }

    fn identifier(&mut self) -> Result<Poly2<Rational>, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        match name.as_str() {
            "q1" => Ok(Poly2::var(Var::Q1)),
            "q2" => Ok(Poly2::var(Var::Q2)),
            _ => Err(ParseError {
                offset: start,
                message: format!("unknown identifier '{name}'"),
            }),
        }
    }
}
