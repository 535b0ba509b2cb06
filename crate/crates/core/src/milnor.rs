//! Milnor K-theory: integer combinations of symbols, residues at orderings, the Milnor map
//! into `Gr_I`, and the homogeneous primes of `K^M_*`.
//!
//! No normal form for `K^M_*` is attempted. Membership questions go through the residue
//! maps, and zero tests use invariants that are complete for each backend:
//!
//! * degree 1: `K^M_1 = F^×`, so `sum c_j [a_j]` vanishes iff `prod a_j^{c_j} = 1`;
//! * `F_p`, degree >= 2: `K^M_n(F_p) = 0`;
//! * `Q`, degree 2: the real symbol and the tame symbols at odd primes (Tate);
//! * `Q` and the real closed model, degree >= 3 (resp. >= 2): the residue at the ordering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, FieldKind, Ordering, Sign};
use crate::nt;
use crate::witt::{pfister, WittClass};

/// `sum_j c_j [a_j1, ..., a_jn]` in `K^M_n(F)`; in degree 0 a single integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorElement {
    field: FieldDescriptor,
    degree: u32,
    terms: BTreeMap<Vec<FieldElement>, i64>,
}

impl MilnorElement {
    pub fn zero(field: FieldDescriptor, degree: u32) -> Self {
        MilnorElement { field, degree, terms: BTreeMap::new() }
    }

    /// The degree-0 element `k`.
    pub fn scalar(field: FieldDescriptor, k: i64) -> Self {
        Self::from_terms(field, 0, [(Vec::new(), k)])
    }

    /// The symbol `[a1, ..., an]`.
    pub fn symbol(field: FieldDescriptor, entries: &[FieldElement]) -> Result<Self> {
        for a in entries {
            if a.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), a.field().to_string()));
            }
            if a.is_zero() {
                return Err(Error::ZeroUnit);
            }
        }
        Ok(Self::from_terms(field, entries.len() as u32, [(entries.to_vec(), 1)]))
    }

    fn from_terms(
        field: FieldDescriptor,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<FieldElement>, i64)>,
    ) -> Self {
        let mut out = MilnorElement::zero(field, degree);
        for (sym, c) in terms {
            // [.., 1, ..] = 0 by multilinearity
            if c == 0 || sym.iter().any(FieldElement::is_one) {
                continue;
            }
            *out.terms.entry(sym).or_insert(0) += c;
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `(coefficient, symbol)` pairs of the stored representation.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &[FieldElement])> {
        self.terms.iter().map(|(s, &c)| (c, s.as_slice()))
    }

    /// The integer of a degree-0 element.
    pub fn as_integer(&self) -> Option<i64> {
        (self.degree == 0).then(|| self.terms.values().sum())
    }

    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &MilnorElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &MilnorElement) -> Result<MilnorElement> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree as i32, other.degree as i32));
        }
        let terms = self.terms.iter().chain(other.terms.iter()).map(|(s, &c)| (s.clone(), c));
        Ok(Self::from_terms(self.field, self.degree, terms))
    }

    pub fn scale(&self, k: i64) -> MilnorElement {
        Self::from_terms(self.field, self.degree, self.terms.iter().map(|(s, &c)| (s.clone(), c * k)))
    }

    pub fn neg(&self) -> MilnorElement {
        self.scale(-1)
    }

    pub fn sub(&self, other: &MilnorElement) -> Result<MilnorElement> {
        self.add(&other.neg())
    }

    /// Concatenation of symbols; degrees add.
    pub fn mul(&self, other: &MilnorElement) -> Result<MilnorElement> {
        self.check(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (s, &c) in &self.terms {
            for (t, &d) in &other.terms {
                let mut sym = s.clone();
                sym.extend(t.iter().cloned());
                terms.push((sym, c * d));
            }
        }
        Ok(Self::from_terms(self.field, self.degree + other.degree, terms))
    }

    /// Image modulo `([P_alpha], 2)`: degree 0 gives the integer mod 2; in degree `n >= 1`
    /// it is the number of symbols (with multiplicity) whose entries are all
    /// `alpha`-negative, mod 2.
    pub fn order_residue(&self, ordering: &Ordering) -> Result<u8> {
        if ordering.field() != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), ordering.field().to_string()));
        }
        let mut m = 0i64;
        for (sym, &c) in &self.terms {
            let mut all_negative = true;
            for a in sym {
                if ordering.sign_at(a)? == Sign::Pos {
                    all_negative = false;
                    break;
                }
            }
            if all_negative {
                m += c;
            }
        }
        Ok(m.rem_euclid(2) as u8)
    }

    /// `[a1, ..., an] -> <<-a1, ..., -an>>` modulo `I^{n+1}`.
    pub fn milnor_map(&self) -> Result<GrIClass> {
        if self.degree == 0 {
            let k = self.as_integer().unwrap_or(0);
            return Ok(GrIClass { degree: 0, class: WittClass::from_int(self.field, k) });
        }
        let mut form = WittClass::zero(self.field);
        for (sym, &c) in &self.terms {
            if c.rem_euclid(2) == 1 {
                let slots: Vec<FieldElement> = sym.iter().map(FieldElement::neg).collect();
                form = form.add(&WittClass::from_form(&pfister(self.field, &slots)?)?)?;
            }
        }
        Ok(GrIClass { degree: self.degree, class: form })
    }

    /// Zero test in `K^M_n(F)`.
    pub fn is_zero(&self) -> Result<bool> {
        if self.terms.is_empty() {
            return Ok(true);
        }
        match self.degree {
            0 => Ok(self.as_integer() == Some(0)),
            1 => {
                let mut prod = self.field.int(1);
                for (sym, &c) in &self.terms {
                    let base = if c < 0 { sym[0].inv()? } else { sym[0].clone() };
                    for _ in 0..c.unsigned_abs() {
                        prod = prod.mul(&base)?;
                    }
                }
                Ok(prod.is_one())
            }
            n => match self.field.kind() {
                FieldKind::PrimeField(_) => Ok(true),
                FieldKind::RealClosedModel => Ok(self.order_residue(&self.field.orderings()[0])? == 0),
                FieldKind::Rationals if n >= 3 => Ok(self.order_residue(&self.field.orderings()[0])? == 0),
                FieldKind::Rationals => self.rational_k2_is_zero(),
                FieldKind::QuadraticReal(_) => Err(Error::unsupported(self.field, format!("zero test in K^M_{n}"))),
            },
        }
    }

    /// `K_2(Q) = {±1} ⊕ ⊕_{p odd} F_p^×` via the real symbol and tame symbols.
    fn rational_k2_is_zero(&self) -> Result<bool> {
        if self.order_residue(&self.field.orderings()[0])? != 0 {
            return Ok(false);
        }
        let rat = |a: &FieldElement| a.as_rational().expect("rational backend").clone();
        let mut primes = BTreeSet::new();
        for sym in self.terms.keys() {
            for a in sym {
                let q = rat(a);
                for n in [q.numer(), q.denom()] {
                    for (p, _) in nt::factor(n)? {
                        if p != 2 {
                            primes.insert(p);
                        }
                    }
                }
            }
        }
        for p in primes {
            let mut acc = 1u64;
            for (sym, &c) in &self.terms {
                let t = tame_symbol(&rat(&sym[0]), &rat(&sym[1]), p);
                let t = if c < 0 { nt::mod_pow(t, p - 2, p) } else { t };
                acc = acc * nt::mod_pow(t, c.unsigned_abs(), p) % p;
            }
            if acc != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in one of the homogeneous primes of `K^M_*`.
    pub fn in_prime(&self, prime: &MilnorPrime) -> Result<bool> {
        prime.validate(self.field)?;
        let c = self.as_integer();
        Ok(match prime {
            MilnorPrime::Char(p) => match c {
                None => true,
                Some(c) if *p == 0 => c == 0,
                Some(c) => c.rem_euclid(*p as i64) == 0,
            },
            MilnorPrime::Cone2(alpha) => match c {
                Some(c) => c.rem_euclid(2) == 0,
                None => self.order_residue(alpha)? == 0,
            },
            MilnorPrime::AllUnits2 => c.is_none_or(|c| c.rem_euclid(2) == 0),
        })
    }
}

fn valuation_and_unit(q: &num_rational::BigRational, p: u64) -> (i64, u64) {
    let (vn, un) = nt::split_valuation(q.numer(), p);
    let (vd, ud) = nt::split_valuation(q.denom(), p);
    let un = nt::residue(&un, p);
    let ud = nt::residue(&ud, p);
    (i64::from(vn) - i64::from(vd), un * nt::mod_pow(ud, p - 2, p) % p)
}

/// `(-1)^{v(a)v(b)} a^{v(b)} / b^{v(a)}` reduced mod `p`.
fn tame_symbol(a: &num_rational::BigRational, b: &num_rational::BigRational, p: u64) -> u64 {
    let (va, ua) = valuation_and_unit(a, p);
    let (vb, ub) = valuation_and_unit(b, p);
    let pow = |u: u64, e: i64| {
        if e >= 0 {
            nt::mod_pow(u, e as u64, p)
        } else {
            nt::mod_pow(nt::mod_pow(u, p - 2, p), e.unsigned_abs(), p)
        }
    };
    let mut t = pow(ua, vb) * pow(nt::mod_pow(ub, p - 2, p), va) % p;
    if (va * vb).rem_euclid(2) == 1 {
        t = (p - t) % p;
    }
    t
}

impl fmt::Display for MilnorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "{}", self.as_integer().unwrap_or(0));
        }
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (sym, c)) in self.terms.iter().enumerate() {
            match (i, *c) {
                (0, -1) => write!(f, "-")?,
                (0, 1) => {}
                (0, c) => write!(f, "{c}")?,
                (_, -1) => write!(f, " - ")?,
                (_, 1) => write!(f, " + ")?,
                (_, c) if c < 0 => write!(f, " - {}", -c)?,
                (_, c) => write!(f, " + {c}")?,
            }
            write!(f, "[")?;
            for (j, a) in sym.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// A class in `I^n / I^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrIClass {
    degree: u32,
    class: WittClass,
}

impl GrIClass {
    /// Validates `class ∈ I^degree`.
    pub fn new(class: WittClass, degree: u32) -> Result<Self> {
        if !class.in_fundamental_power(degree as i32)? {
            return Err(Error::NotInFundamentalPower { degree: degree as i32 });
        }
        Ok(GrIClass { degree, class })
    }

    pub(crate) fn unchecked(class: WittClass, degree: u32) -> Self {
        GrIClass { degree, class }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn representative(&self) -> &WittClass {
        &self.class
    }

    /// Equality in `I^n / I^{n+1}`.
    pub fn equals(&self, other: &GrIClass) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(false);
        }
        self.class.sub(&other.class)?.in_fundamental_power(self.degree as i32 + 1)
    }

    pub fn is_zero(&self) -> Result<bool> {
        self.class.in_fundamental_power(self.degree as i32 + 1)
    }
}

/// The homogeneous primes of `K^M_*(F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MilnorPrime {
    /// `(K^M_1, p)` for `p` an odd prime, or `(K^M_1)` when `p = 0`.
    Char(u64),
    /// `([P_alpha], 2)`.
    Cone2(Ordering),
    /// `([F^×], 2) = (K^M_1, 2)`.
    AllUnits2,
}

impl MilnorPrime {
    fn validate(&self, field: FieldDescriptor) -> Result<()> {
        match self {
            MilnorPrime::Char(p) if *p != 0 && !nt::is_odd_prime(*p) => {
                Err(Error::InvalidDescriptor(format!("{p} is neither 0 nor an odd prime")))
            }
            MilnorPrime::Cone2(o) if o.field() != field => {
                Err(Error::InvalidDescriptor(format!("ordering {o} does not belong to {field}")))
            }
            _ => Ok(()),
        }
    }
}

/// `x ∈ J` for a homogeneous prime `J` of `K^M_*`.
pub fn in_prime_milnor(x: &MilnorElement, prime: &MilnorPrime) -> Result<bool> {
    x.in_prime(prime)
}
