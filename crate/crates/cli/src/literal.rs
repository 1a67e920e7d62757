//! Exact p-adic literals: rationals built from integers, `p`, `+ - * / ^`
//! and parentheses, e.g. `1+p^3`, `3*7^-2 + 5`, `22/7`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use padic_potts::PadicNumber;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { position, message: message.into() })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    prime: u32,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BigRational, ParseError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BigRational, ParseError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            if c == b'*' {
                acc *= rhs;
            } else {
                if rhs.is_zero() {
                    return err(at, "division by zero");
                }
                acc /= rhs;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BigRational, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<BigRational, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.integer()?;
        let e = match e.to_u32() {
            Some(e) if e <= 10_000 => e,
            _ => return err(at, "exponent too large"),
        };
        if negative && base.is_zero() {
            return err(at, "zero to a negative power");
        }
        let mut r = BigRational::one();
        for _ in 0..e {
            r *= &base;
        }
        Ok(if negative { r.recip() } else { r })
    }

    fn atom(&mut self) -> Result<BigRational, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'p') => {
                self.pos += 1;
                Ok(BigRational::from_integer(BigInt::from(self.prime)))
            }
            Some(b'O') => err(self.pos, "O(...) terms leave the valuation undetermined; give an exact value"),
            Some(c) if c.is_ascii_digit() => Ok(BigRational::from_integer(self.integer()?)),
            Some(c) => err(self.pos, format!("unexpected '{}'", c as char)),
            None => err(self.pos, "unexpected end of input"),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

/// The exact rational denoted by `text`, with `p` standing for `prime`.
pub fn parse_rational(text: &str, prime: u32) -> Result<BigRational, ParseError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0, prime };
    let v = parser.expr()?;
    if parser.peek().is_some() {
        return err(parser.pos, "trailing input");
    }
    Ok(v)
}

/// Parses `text` and converts it to `Q_prime` with `precision` unit digits.
pub fn parse_padic_literal(text: &str, prime: u32, precision: i64) -> Result<PadicNumber, ParseError> {
    let r = parse_rational(text, prime)?;
    if r.is_zero() {
        return Ok(PadicNumber::zero(prime));
    }
    PadicNumber::from_bigrational(&r, prime, precision).map_err(|e| ParseError { position: 0, message: e.to_string() })
}

/// The literal as a nonnegative machine integer, if it is one.
pub fn as_usize(r: &BigRational) -> Option<usize> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_usize()
    } else {
        None
    }
}
