//! Recursive-descent reader for exact numeric literals.
//!
//! Accepts integers, `p/q`, `sqrt(n)`, `+ - * /`, unary minus and parentheses, so
//! both `(u+v*sqrt(d))/w` and forms like `(1*sqrt(3)-1)/2` parse. Every value must
//! live in a single quadratic field.

use super::{ExtReal, QuadSurd, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c)))
        }
    }

    fn expr(&mut self) -> Result<QuadSurd> {
        let mut acc = self.term()?;
        loop {
            let at = self.pos;
            if self.eat('+') {
                let t = self.term()?;
                acc = combine(at, &acc, &t, |a, b| a + b)?;
            } else if self.eat('-') {
                let t = self.term()?;
                acc = combine(at, &acc, &t, |a, b| a - b)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QuadSurd> {
        let mut acc = self.unary()?;
        loop {
            let at = self.pos;
            if self.eat('*') {
                let t = self.unary()?;
                acc = combine(at, &acc, &t, |a, b| a * b)?;
            } else if self.eat('/') {
                let t = self.unary()?;
                if t.is_zero() {
                    return Err(Error::parse(at, "division by zero"));
                }
                acc = combine(at, &acc, &t, |a, b| a / b)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QuadSurd> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<QuadSurd> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(QuadSurd::rational(Rational::from_integer(n)))
            }
            Some('s') => {
                let start = self.pos;
                if !self.src[self.pos..].starts_with("sqrt") {
                    return Err(Error::parse(start, "unknown identifier"));
                }
                self.pos += 4;
                self.expect('(')?;
                let at = self.pos;
                let n = self.integer()?;
                self.expect(')')?;
                if n.is_negative() {
                    return Err(Error::parse(at, "negative radicand"));
                }
                Ok(QuadSurd::new(
                    Rational::zero(),
                    Rational::from_integer(1.into()),
                    n,
                ))
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected '{}'", c))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let digits: String = self.src[self.pos..]
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        if digits.is_empty() {
            return Err(Error::parse(start, "expected integer"));
        }
        self.pos += digits.len();
        digits
            .parse::<BigInt>()
            .map_err(|e| Error::parse(start, e.to_string()))
    }
}

fn combine(
    at: usize,
    a: &QuadSurd,
    b: &QuadSurd,
    f: impl FnOnce(&QuadSurd, &QuadSurd) -> QuadSurd,
) -> Result<QuadSurd> {
    if !a.is_rational() && !b.is_rational() && a.d() != b.d() {
        let same = super::exact_sqrt(&(a.d() * b.d())).is_some();
        if !same {
            return Err(Error::parse(at, "mixed radicands"));
        }
    }
    Ok(f(a, b))
}

/// Parses a finite exact value.
pub fn parse_surd(s: &str) -> Result<QuadSurd> {
    let mut p = Parser { src: s, pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    Ok(v)
}

/// Parses a finite value or `inf` / `+inf` / `-inf` / `∞`.
pub fn parse_ext_real(s: &str) -> Result<ExtReal> {
    match s.trim() {
        "inf" | "+inf" | "∞" | "infinity" => Ok(ExtReal::PosInf),
        "-inf" | "-∞" => Ok(ExtReal::NegInf),
        _ => parse_surd(s).map(ExtReal::Finite),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{big, int, rat};

    #[test]
    fn rationals() {
        assert_eq!(parse_surd("5/14").unwrap(), QuadSurd::rational(rat(5, 14)));
        assert_eq!(parse_surd("-3").unwrap(), QuadSurd::from_int(-3));
        assert_eq!(parse_surd(" 10/4 ").unwrap(), QuadSurd::rational(rat(5, 2)));
    }

    #[test]
    fn surds() {
        let t = parse_surd("(1*sqrt(3)-1)/2").unwrap();
        assert_eq!(t, QuadSurd::new(rat(-1, 2), rat(1, 2), big(3)));
        let u = parse_surd("(-1+1*sqrt(3))/2").unwrap();
        assert_eq!(t, u);
        assert_eq!(parse_surd("-sqrt(13)").unwrap(), -QuadSurd::sqrt(13));
        assert_eq!(parse_surd("sqrt(8)/2").unwrap(), QuadSurd::sqrt(2));
        assert_eq!(parse_surd("sqrt(9)").unwrap(), QuadSurd::rational(int(3)));
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "(-1+1*sqrt(3))/2",
            "(2-3*sqrt(5))/7",
            "(1*sqrt(13))",
            "-5/3",
        ] {
            let v = parse_surd(s).unwrap();
            assert_eq!(parse_surd(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_surd("1/0") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{:?}", other),
        }
        match parse_surd("2 + x") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{:?}", other),
        }
        assert!(parse_surd("sqrt(2)+sqrt(3)").is_err());
        assert_eq!(parse_ext_real("inf").unwrap(), ExtReal::PosInf);
    }
}
