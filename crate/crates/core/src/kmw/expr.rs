use std::fmt;
use std::ops;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};

/// Terms of the free algebra on `[F^×] ∪ {η}` with integer coefficients.
///
/// Concrete syntax:
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := factor ('*' factor)*
/// factor := '-' factor | atom ('^' nat)?
/// atom   := integer | 'eta' | '[' unit ']' | '(' expr ')'
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KmwExpr {
    Int(i64),
    Eta,
    Bracket(FieldElement),
    Add(Box<KmwExpr>, Box<KmwExpr>),
    Sub(Box<KmwExpr>, Box<KmwExpr>),
    Mul(Box<KmwExpr>, Box<KmwExpr>),
    Neg(Box<KmwExpr>),
    Pow(Box<KmwExpr>, u32),
}

impl KmwExpr {
    pub fn int(k: i64) -> Self {
        KmwExpr::Int(k)
    }

    pub fn eta() -> Self {
        KmwExpr::Eta
    }

    pub fn bracket(a: FieldElement) -> Self {
        KmwExpr::Bracket(a)
    }

    pub fn pow(self, k: u32) -> Self {
        KmwExpr::Pow(Box::new(self), k)
    }

    /// `<a> = 1 + η[a]`.
    pub fn unit_form(a: FieldElement) -> Self {
        KmwExpr::Int(1) + KmwExpr::Eta * KmwExpr::Bracket(a)
    }

    /// `h = 2 + η[-1]`.
    pub fn hyperbolic(field: FieldDescriptor) -> Self {
        KmwExpr::Int(2) + KmwExpr::Eta * KmwExpr::Bracket(field.int(-1))
    }

    /// `ε = -(1 + η[-1])`.
    pub fn epsilon(field: FieldDescriptor) -> Self {
        -(KmwExpr::Int(1) + KmwExpr::Eta * KmwExpr::Bracket(field.int(-1)))
    }

    /// Parses the concrete syntax; unit literals are read in `field`.
    pub fn parse(field: FieldDescriptor, text: &str) -> Result<Self> {
        let mut p = Parser { field, src: text, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(Error::parse(p.pos, "unexpected trailing input"));
        }
        Ok(e)
    }

    fn precedence(&self) -> u8 {
        match self {
            KmwExpr::Add(..) | KmwExpr::Sub(..) => 1,
            KmwExpr::Mul(..) => 2,
            KmwExpr::Neg(..) => 3,
            KmwExpr::Pow(..) => 4,
            KmwExpr::Int(k) if *k < 0 => 3,
            _ => 5,
        }
    }
}

impl ops::Add for KmwExpr {
    type Output = KmwExpr;
    fn add(self, rhs: KmwExpr) -> KmwExpr {
        KmwExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for KmwExpr {
    type Output = KmwExpr;
    fn sub(self, rhs: KmwExpr) -> KmwExpr {
        KmwExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for KmwExpr {
    type Output = KmwExpr;
    fn mul(self, rhs: KmwExpr) -> KmwExpr {
        KmwExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for KmwExpr {
    type Output = KmwExpr;
    fn neg(self) -> KmwExpr {
        KmwExpr::Neg(Box::new(self))
    }
}

struct Wrap<'a>(&'a KmwExpr, u8);

impl fmt::Display for Wrap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for KmwExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KmwExpr::Int(k) => write!(f, "{k}"),
            KmwExpr::Eta => write!(f, "eta"),
            KmwExpr::Bracket(a) => write!(f, "[{a}]"),
            KmwExpr::Add(a, b) => write!(f, "{} + {}", Wrap(a, 1), Wrap(b, 2)),
            KmwExpr::Sub(a, b) => write!(f, "{} - {}", Wrap(a, 1), Wrap(b, 2)),
            KmwExpr::Mul(a, b) => write!(f, "{}*{}", Wrap(a, 2), Wrap(b, 3)),
            KmwExpr::Neg(a) => write!(f, "-{}", Wrap(a, 3)),
            KmwExpr::Pow(a, k) => write!(f, "{}^{k}", Wrap(a, 5)),
        }
    }
}

struct Parser<'a> {
    field: FieldDescriptor,
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<KmwExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = lhs + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<KmwExpr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = lhs * self.factor()?;
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<KmwExpr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let k = self.digits()?;
            let k = k.parse::<u32>().map_err(|_| Error::parse(start, "exponent out of range"))?;
            return Ok(atom.pow(k));
        }
        Ok(atom)
    }

    fn digits(&mut self) -> Result<&str> {
        let start = self.pos;
        let len = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(Error::parse(start, "expected a natural number"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn atom(&mut self) -> Result<KmwExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let start = self.pos;
                let close = self.src[start..].find(']').ok_or_else(|| Error::parse(start, "unterminated bracket"))?;
                let unit = self.field.parse_element(&self.src[start..start + close]).map_err(|e| match e {
                    Error::Parse { offset, message } => Error::Parse { offset: offset + start, message },
                    other => other,
                })?;
                if unit.is_zero() {
                    return Err(Error::ZeroUnit);
                }
                self.pos = start + close + 1;
                Ok(KmwExpr::Bracket(unit))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let d = self.digits()?;
                d.parse::<i64>().map(KmwExpr::Int).map_err(|_| Error::parse(start, "integer out of range"))
            }
            Some(_) if self.src[self.pos..].starts_with("eta") => {
                self.pos += 3;
                Ok(KmwExpr::Eta)
            }
            Some(_) => Err(Error::parse(self.pos, "expected an integer, 'eta', '[' or '('")),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_grammar() {
        let q = FieldDescriptor::rationals();
        let e = KmwExpr::parse(q, "[2]*[3]+eta*[5]").unwrap();
        let expected =
            KmwExpr::bracket(q.int(2)) * KmwExpr::bracket(q.int(3)) + KmwExpr::eta() * KmwExpr::bracket(q.int(5));
        assert_eq!(e, expected);
        let e = KmwExpr::parse(q, " ( 2 + eta * [ -1 ] ) * eta ").unwrap();
        assert_eq!(e, KmwExpr::hyperbolic(q) * KmwExpr::eta());
        let e = KmwExpr::parse(q, "-[2]^3 - 4").unwrap();
        assert_eq!(e, -(KmwExpr::bracket(q.int(2)).pow(3)) - KmwExpr::int(4));
        let k = FieldDescriptor::quadratic(2).unwrap();
        let e = KmwExpr::parse(k, "[1+2*rt]").unwrap();
        assert_eq!(e, KmwExpr::bracket(k.parse_element("1+2*rt").unwrap()));
    }

    #[test]
    fn reports_errors() {
        let q = FieldDescriptor::rationals();
        assert!(matches!(KmwExpr::parse(q, "[2"), Err(Error::Parse { .. })));
        assert!(matches!(KmwExpr::parse(q, "[0]"), Err(Error::ZeroUnit)));
        assert!(matches!(KmwExpr::parse(q, "2 +"), Err(Error::Parse { .. })));
        assert!(matches!(KmwExpr::parse(q, "eta eta"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(KmwExpr::parse(q, "[x]"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(KmwExpr::parse(q, "[2]^"), Err(Error::Parse { .. })));
    }

    #[test]
    fn printing_reparses() {
        let q = FieldDescriptor::rationals();
        for text in ["[2]*[3] + eta*[5]", "-(1 + eta*[-1])", "(eta + 2)^3", "[1/2]*(3 - [-7])", "1 - (2 - 3)"] {
            let e = KmwExpr::parse(q, text).unwrap();
            assert_eq!(KmwExpr::parse(q, &e.to_string()).unwrap(), e, "{text}");
        }
    }
}
