//! Exact arithmetic, square detection and ordering oracles for the supported base fields.
//!
//! Four backends are available:
//!
//! * `Q`, the rationals;
//! * `Qsqrt:d`, the quadratic field `Q(sqrt d)` for squarefree `d`, with elements `a + b*rt`;
//! * `Fp`, the prime field of odd characteristic `p`;
//! * `Rclosed`, a model of a real closed field. Its elements are rationals, and every
//!   quadratic-form invariant is read off from signs alone, as it is in a genuine real
//!   closed field.
//!
//! Characteristic two is rejected when a descriptor is built.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nt;

/// The backend variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Rationals,
    QuadraticReal(i64),
    PrimeField(u64),
    RealClosedModel,
}

/// A validated field backend. Construct through [`FieldDescriptor::rationals`],
/// [`FieldDescriptor::quadratic`], [`FieldDescriptor::prime`] or
/// [`FieldDescriptor::real_closed`], or parse the CLI syntax (`Q`, `Qsqrt:2`, `F5`, `Rclosed`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldDescriptor(FieldKind);

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor(FieldKind::Rationals)
    }

    pub fn real_closed() -> Self {
        FieldDescriptor(FieldKind::RealClosedModel)
    }

    /// `Q(sqrt d)`; `d` must be squarefree and different from 0 and 1.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidField(format!("Qsqrt:{d} is not a quadratic field")));
        }
        let sf = nt::squarefree_part(&BigInt::from(d))?;
        if sf != BigInt::from(d) {
            return Err(Error::InvalidField(format!("{d} is not squarefree")));
        }
        Ok(FieldDescriptor(FieldKind::QuadraticReal(d)))
    }

    /// `F_p` for an odd prime `p`.
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if !nt::is_odd_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(FieldDescriptor(FieldKind::PrimeField(p)))
    }

    pub fn kind(&self) -> FieldKind {
        self.0
    }

    /// True when the field admits at least one ordering.
    pub fn is_real(&self) -> bool {
        !self.orderings().is_empty()
    }

    /// The integer `k` viewed in the field.
    pub fn int(&self, k: i64) -> FieldElement {
        match self.0 {
            FieldKind::PrimeField(p) => self.residue(k.rem_euclid(p as i64) as u64),
            FieldKind::QuadraticReal(_) => self.quad(BigRational::from_integer(k.into()), BigRational::zero()),
            _ => self.rat(BigRational::from_integer(k.into())),
        }
    }

    /// The rational `n/d`. Over `F_p` the denominator is inverted modulo `p`.
    pub fn rational(&self, n: i64, d: i64) -> Result<FieldElement> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        self.int(n).div(&self.int(d))
    }

    /// A rational number viewed in the field; over `F_p` the denominator must be invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        match self.0 {
            FieldKind::PrimeField(p) => {
                let d = nt::residue(q.denom(), p);
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(self.residue(nt::residue(q.numer(), p) * nt::mod_pow(d, p - 2, p) % p))
            }
            FieldKind::QuadraticReal(_) => Ok(self.quad(q.clone(), BigRational::zero())),
            _ => Ok(self.rat(q.clone())),
        }
    }

    /// `a + b*sqrt(d)` in a quadratic field.
    pub fn quadratic_element(&self, a: BigRational, b: BigRational) -> Result<FieldElement> {
        match self.0 {
            FieldKind::QuadraticReal(_) => Ok(self.quad(a, b)),
            _ => Err(Error::InvalidField(format!("{self} has no adjoined root"))),
        }
    }

    /// The adjoined root `sqrt(d)` of a quadratic field.
    pub fn root(&self) -> Result<FieldElement> {
        self.quadratic_element(BigRational::zero(), BigRational::one())
    }

    pub(crate) fn rat(&self, q: BigRational) -> FieldElement {
        FieldElement { field: *self, value: Value::Rational(q) }
    }

    pub(crate) fn quad(&self, a: BigRational, b: BigRational) -> FieldElement {
        FieldElement { field: *self, value: Value::Quadratic(a, b) }
    }

    pub(crate) fn residue(&self, r: u64) -> FieldElement {
        FieldElement { field: *self, value: Value::Residue(r) }
    }

    /// The complete list of orderings of the backend.
    pub fn orderings(&self) -> Vec<Ordering> {
        let tags: &[OrderingTag] = match self.0 {
            FieldKind::Rationals | FieldKind::RealClosedModel => &[OrderingTag::Unique],
            FieldKind::QuadraticReal(d) if d > 0 => &[OrderingTag::PlusRoot, OrderingTag::MinusRoot],
            _ => &[],
        };
        tags.iter().map(|&tag| Ordering { field: *self, tag }).collect()
    }

    /// Looks up an ordering by its CLI name (`unique`, `pos`, `neg`).
    pub fn ordering(&self, name: &str) -> Result<Ordering> {
        self.orderings()
            .into_iter()
            .find(|o| o.name() == name)
            .ok_or_else(|| Error::InvalidDescriptor(format!("{self} has no ordering named {name:?}")))
    }

    /// A fixed quadratic non-residue of `F_p`.
    pub(crate) fn nonresidue(&self) -> Option<u64> {
        match self.0 {
            FieldKind::PrimeField(p) => Some(nt::least_nonresidue(p)),
            _ => None,
        }
    }

    fn check(&self, other: &FieldDescriptor) -> Result<()> {
        if self != other {
            return Err(Error::FieldMismatch(self.to_string(), other.to_string()));
        }
        Ok(())
    }

    /// Parses a unit literal of this field.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        parse_element(*self, text)
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::QuadraticReal(d) => write!(f, "Qsqrt:{d}"),
            FieldKind::PrimeField(p) => write!(f, "F{p}"),
            FieldKind::RealClosedModel => write!(f, "Rclosed"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidField(format!("unrecognised field {s:?}"));
        match s {
            "Q" => Ok(Self::rationals()),
            "Rclosed" => Ok(Self::real_closed()),
            _ => {
                if let Some(d) = s.strip_prefix("Qsqrt:") {
                    Self::quadratic(d.trim().parse().map_err(|_| bad())?)
                } else if let Some(p) = s.strip_prefix('F') {
                    Self::prime(p.parse().map_err(|_| bad())?)
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Value {
    Rational(BigRational),
    Quadratic(BigRational, BigRational),
    Residue(u64),
}

/// An exact element of one of the backends, tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    field: FieldDescriptor,
    value: Value,
}

/// The arithmetic operations understood by [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// Applies `op` to `a` and `b` (`b` is ignored for [`ArithOp::Neg`]).
pub fn arith(op: ArithOp, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
        ArithOp::Neg => Ok(a.neg()),
    }
}

impl FieldElement {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// The rational value for `Q` and `Rclosed`, or the rational part `a = 0*rt` case of a
    /// quadratic element.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(q) => Some(q),
            Value::Quadratic(a, b) if b.is_zero() => Some(a),
            _ => None,
        }
    }

    /// `(a, b)` with the element equal to `a + b*sqrt(d)`.
    pub fn as_quadratic(&self) -> Option<(&BigRational, &BigRational)> {
        match &self.value {
            Value::Quadratic(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self.value {
            Value::Residue(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_zero(),
            Value::Quadratic(a, b) => a.is_zero() && b.is_zero(),
            Value::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.int(1)
    }

    /// Returns `self` unchanged if it is a unit, `ZeroUnit` otherwise.
    pub fn unit(self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::ZeroUnit)
        } else {
            Ok(self)
        }
    }

    fn modulus(&self) -> u64 {
        match self.field.kind() {
            FieldKind::PrimeField(p) => p,
            _ => unreachable!("residues only live in prime fields"),
        }
    }

    fn root_square(&self) -> BigRational {
        match self.field.kind() {
            FieldKind::QuadraticReal(d) => BigRational::from_integer(d.into()),
            _ => unreachable!("quadratic values only live in quadratic fields"),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.field.check(&other.field)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::Quadratic(a, b), Value::Quadratic(c, e)) => Value::Quadratic(a + c, b + e),
            (Value::Residue(a), Value::Residue(b)) => Value::Residue((a + b) % self.modulus()),
            _ => unreachable!("same field implies same representation"),
        };
        Ok(FieldElement { field: self.field, value })
    }

    pub fn neg(&self) -> Self {
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(-a),
            Value::Quadratic(a, b) => Value::Quadratic(-a, -b),
            Value::Residue(a) => Value::Residue((self.modulus() - a) % self.modulus()),
        };
        FieldElement { field: self.field, value }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.field.check(&other.field)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::Quadratic(a, b), Value::Quadratic(c, e)) => {
                let d = self.root_square();
                Value::Quadratic(a * c + b * e * d, a * e + b * c)
            }
            (Value::Residue(a), Value::Residue(b)) => {
                Value::Residue(((*a as u128 * *b as u128) % self.modulus() as u128) as u64)
            }
            _ => unreachable!("same field implies same representation"),
        };
        Ok(FieldElement { field: self.field, value })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(a.recip()),
            Value::Quadratic(a, b) => {
                let norm = a * a - b * b * self.root_square();
                Value::Quadratic(a / &norm, -b / &norm)
            }
            Value::Residue(a) => {
                let p = self.modulus();
                Value::Residue(nt::mod_pow(*a, p - 2, p))
            }
        };
        Ok(FieldElement { field: self.field, value })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.field.check(&other.field)?;
        self.mul(&other.inv()?)
    }

    /// The norm `a^2 - d b^2` of a quadratic element, or the rational value itself.
    pub fn norm(&self) -> Option<BigRational> {
        match &self.value {
            Value::Rational(q) => Some(q.clone()),
            Value::Quadratic(a, b) => Some(a * a - b * b * self.root_square()),
            Value::Residue(_) => None,
        }
    }

    /// True iff the element is a square in its field.
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroUnit);
        }
        Ok(match &self.value {
            Value::Residue(r) => nt::legendre(*r, self.modulus()) == 1,
            Value::Rational(q) => match self.field.kind() {
                FieldKind::RealClosedModel => q.is_positive(),
                _ => nt::rational_sqrt(q).is_some(),
            },
            Value::Quadratic(a, b) => {
                let d = self.root_square();
                if b.is_zero() {
                    nt::rational_sqrt(a).is_some() || nt::rational_sqrt(&(a / &d)).is_some()
                } else {
                    // (x + y rt)^2 = a + b rt forces x^2 - d y^2 = ±sqrt(norm) and x^2 = (a ± n)/2.
                    let norm = a * a - b * b * &d;
                    match nt::rational_sqrt(&norm) {
                        None => false,
                        Some(n) => {
                            let two = BigRational::from_integer(2.into());
                            [(a + &n) / &two, (a - &n) / &two]
                                .iter()
                                .any(|x2| !x2.is_zero() && nt::rational_sqrt(x2).is_some())
                        }
                    }
                }
            }
        })
    }

    /// A representative of the square class of a unit.
    ///
    /// `Q`: the squarefree integer; `F_p`: `1` or the least non-residue; `Rclosed`: `±1`.
    /// Quadratic elements are only scaled to coprime-ish integer coordinates, which keeps
    /// them small but is not a canonical form.
    pub fn square_class(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroUnit);
        }
        Ok(match (&self.value, self.field.kind()) {
            (Value::Rational(q), FieldKind::RealClosedModel) => self.field.int(if q.is_positive() { 1 } else { -1 }),
            (Value::Rational(q), _) => self.field.rat(BigRational::from_integer(nt::rational_square_class(q)?)),
            (Value::Residue(r), _) => {
                let p = self.modulus();
                if nt::legendre(*r, p) == 1 {
                    self.field.int(1)
                } else {
                    self.field.residue(nt::least_nonresidue(p))
                }
            }
            (Value::Quadratic(a, b), _) => {
                let l = a.denom().lcm(b.denom());
                let l2 = BigRational::from_integer(&l * &l);
                let (a, b) = ((a * &l2).to_integer(), (b * &l2).to_integer());
                let g = a.gcd(&b);
                let mut s = BigInt::one();
                if let Ok(fs) = nt::factor(&g) {
                    for (p, e) in fs {
                        s *= BigInt::from(p).pow((e / 2) as u32);
                    }
                }
                let s2 = &s * &s;
                self.field.quad(BigRational::from_integer(a / &s2), BigRational::from_integer(b / &s2))
            }
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(q) => write!(f, "{q}"),
            Value::Residue(r) => write!(f, "{r}"),
            Value::Quadratic(a, b) => {
                let root = |b: &BigRational| {
                    if b.is_one() {
                        "rt".to_string()
                    } else {
                        format!("{b}*rt")
                    }
                };
                if b.is_zero() {
                    write!(f, "{a}")
                } else if a.is_zero() {
                    if b.is_negative() {
                        write!(f, "-{}", root(&-b))
                    } else {
                        write!(f, "{}", root(b))
                    }
                } else if b.is_negative() {
                    write!(f, "{a}-{}", root(&-b))
                } else {
                    write!(f, "{a}+{}", root(b))
                }
            }
        }
    }
}

/// Which real embedding, or the unique ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrderingTag {
    /// The only ordering of `Q` or of the real closed model.
    Unique,
    /// `sqrt d > 0`.
    PlusRoot,
    /// `sqrt d < 0`.
    MinusRoot,
}

/// An ordering of a backend field, i.e. its positive cone viewed as a sign character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordering {
    field: FieldDescriptor,
    tag: OrderingTag,
}

/// The value of a sign character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    fn of(q: &BigRational) -> Sign {
        if q.is_negative() {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }
}

impl Ordering {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn tag(&self) -> OrderingTag {
        self.tag
    }

    /// `unique`, `pos` or `neg`.
    pub fn name(&self) -> &'static str {
        match self.tag {
            OrderingTag::Unique => "unique",
            OrderingTag::PlusRoot => "pos",
            OrderingTag::MinusRoot => "neg",
        }
    }

    /// `+1` iff `a` is in the positive cone.
    pub fn sign_at(&self, a: &FieldElement) -> Result<Sign> {
        self.field.check(&a.field)?;
        if a.is_zero() {
            return Err(Error::ZeroUnit);
        }
        Ok(match &a.value {
            Value::Rational(q) => Sign::of(q),
            Value::Quadratic(x, y) => {
                let y = if self.tag == OrderingTag::MinusRoot { -y } else { y.clone() };
                if y.is_zero() {
                    Sign::of(x)
                } else if x.is_zero() || x.is_positive() == y.is_positive() {
                    Sign::of(&y)
                } else if x * x > &y * &y * a.root_square() {
                    // |x| > |y| sqrt(d), and x^2 = y^2 d is impossible for squarefree d
                    Sign::of(x)
                } else {
                    Sign::of(&y)
                }
            }
            Value::Residue(_) => unreachable!("prime fields have no orderings"),
        })
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The complete list of orderings of `field`.
pub fn orderings(field: FieldDescriptor) -> Vec<Ordering> {
    field.orderings()
}

/// Parses a unit literal: `n`, `n/m`, and over `Qsqrt:d` also `a+b*rt`, `a-b*rt`, `rt`, `b*rt`.
/// Whitespace is ignored.
pub fn parse_element(field: FieldDescriptor, text: &str) -> Result<FieldElement> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parse(0, "empty field element"));
    }
    match field.kind() {
        FieldKind::QuadraticReal(_) => parse_quadratic(field, &s),
        _ => {
            let q = parse_rational(&s, 0)?;
            match field.kind() {
                FieldKind::PrimeField(p) => {
                    let n = nt::residue(q.numer(), p);
                    let d = nt::residue(q.denom(), p);
                    if d == 0 {
                        return Err(Error::parse(0, format!("denominator vanishes modulo {p}")));
                    }
                    field.residue(n).div(&field.residue(d))
                }
                _ => Ok(field.rat(q)),
            }
        }
    }
}

fn parse_rational(s: &str, offset: usize) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let int = |t: &str, off: usize| -> Result<BigInt> {
        let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(off, format!("expected an integer, found {t:?}")));
        }
        t.parse::<BigInt>().map_err(|e| Error::parse(off, e.to_string()))
    };
    let n = int(num, offset)?;
    let d = match den {
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return Err(Error::parse(offset + num.len() + 1, "signed denominator"));
            }
            int(d, offset + num.len() + 1)?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::parse(offset + num.len() + 1, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn parse_quadratic(field: FieldDescriptor, s: &str) -> Result<FieldElement> {
    // split into signed terms at top-level '+'/'-' that are not part of a leading sign
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' && bytes[i - 1] != b'/' {
            terms.push((start, &s[start..i]));
            start = i;
        }
    }
    terms.push((start, &s[start..]));
    let (mut a, mut b) = (BigRational::zero(), BigRational::zero());
    for (off, term) in terms {
        let (sign, body) = match term.as_bytes()[0] {
            b'-' => (-1, &term[1..]),
            b'+' => (1, &term[1..]),
            _ => (1, term),
        };
        let sign = BigRational::from_integer(sign.into());
        if body == "rt" {
            b += sign;
        } else if let Some(coef) = body.strip_suffix("*rt") {
            b += sign * parse_rational(coef, off)?;
        } else if let Some(coef) = body.strip_prefix("rt*") {
            b += sign * parse_rational(coef, off)?;
        } else {
            a += sign * parse_rational(body, off)?;
        }
    }
    Ok(field.quad(a, b))
}
