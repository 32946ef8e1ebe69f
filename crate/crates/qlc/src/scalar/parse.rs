//! Recursive-descent reader for rational expressions.
//!
//! Accepts integers, context variables, `+ - * / ^`, unary minus and
//! parentheses. The rendered form `(num)/(den)` reads back bit-exactly.

use super::{Scalar, ScalarContext, ScalarError};
use num_bigint::BigInt;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a ScalarContext,
}

pub fn parse(text: &str, ctx: &ScalarContext) -> Result<Scalar, ScalarError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ctx };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e: i64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            if neg && base.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(Scalar::from_bigint(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                self.ctx.var(name)
            }
            _ => Err(self.err("expected number, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_rendered_forms() {
        let ctx = ScalarContext::standard();
        for text in ["(s^4+s^2+1)/(s^6)", "-3*s*alpha^2+beta-7", "(2*s-alpha)/(s^2+3)", "0", "-5"] {
            let v = ctx.parse(text).unwrap();
            assert_eq!(ctx.render(&v), text);
        }
        let v = ctx.parse("s - s^-1").unwrap();
        assert_eq!(ctx.render(&v), "(s^2-1)/(s)");
    }

    #[test]
    fn parse_errors() {
        let ctx = ScalarContext::standard();
        assert!(matches!(ctx.parse("s +"), Err(ScalarError::Parse { .. })));
        assert!(matches!(ctx.parse("x"), Err(ScalarError::UnknownVariable(_))));
        assert_eq!(ctx.parse("1/(s-s)"), Err(ScalarError::DivisionByZero));
    }
}
