//! Diagonal quadratic forms, the Grothendieck-Witt and Witt rings, and their invariants.
//!
//! A [`GwClass`] is a virtual form `pos - neg`. A [`WittClass`] is a single diagonal
//! form taken modulo hyperbolic planes `<1,-1>`; the stored representative is kept
//! small by square-class canonicalisation and a few Witt-neutral rewrites, but it is not
//! a normal form except over `F_p` and the real closed model.
//!
//! Pfister forms follow the product convention `<<b1,...,bn>> = <1,b1> ... <1,bn>`.
//!
//! Witt equivalence is decidable over `Q` (Hasse-Minkowski), `F_p` and the real closed
//! model. Over `Q(sqrt d)` only signatures and rank parity are available.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, FieldKind, Ordering, Sign};
use crate::hilbert::{hilbert_int, Place};
use crate::nt;

/// `<a1, ..., an>` with nonzero entries; the empty form is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    field: FieldDescriptor,
    entries: Vec<FieldElement>,
}

impl DiagonalForm {
    pub fn new(field: FieldDescriptor, entries: Vec<FieldElement>) -> Result<Self> {
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), e.field().to_string()));
            }
            if e.is_zero() {
                return Err(Error::ZeroUnit);
            }
        }
        Ok(DiagonalForm { field, entries })
    }

    pub fn empty(field: FieldDescriptor) -> Self {
        DiagonalForm { field, entries: Vec::new() }
    }

    /// `<k1, ..., kn>` for integer entries.
    pub fn from_ints(field: FieldDescriptor, entries: &[i64]) -> Result<Self> {
        Self::new(field, entries.iter().map(|&k| field.int(k)).collect())
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn rank_parity(&self) -> u8 {
        (self.entries.len() % 2) as u8
    }

    fn same_field(&self, other: &DiagonalForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn orthogonal_sum(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.same_field(other)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(DiagonalForm { field: self.field, entries })
    }

    pub fn tensor(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.same_field(other)?;
        let mut entries = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a.mul(b)?);
            }
        }
        Ok(DiagonalForm { field: self.field, entries })
    }

    /// `<-a1, ..., -an>`, the additive inverse in `W(F)`.
    pub fn negate(&self) -> DiagonalForm {
        DiagonalForm { field: self.field, entries: self.entries.iter().map(FieldElement::neg).collect() }
    }

    /// `sum_i sign_at(alpha, a_i)`.
    pub fn signature(&self, ordering: &Ordering) -> Result<i64> {
        self.entries.iter().map(|a| ordering.sign_at(a).map(Sign::as_i64)).sum()
    }

    /// Signature at every ordering of the field (empty for non-real fields).
    pub fn total_signature(&self) -> Result<BTreeMap<Ordering, i64>> {
        self.field.orderings().into_iter().map(|o| Ok((o, self.signature(&o)?))).collect()
    }

    /// `(-1)^(n(n-1)/2) * prod a_i`, returned as a square-class representative.
    pub fn signed_discriminant(&self) -> Result<FieldElement> {
        let n = self.rank();
        let mut d = self.field.int(if (n * n.saturating_sub(1) / 2) % 2 == 1 { -1 } else { 1 });
        for a in &self.entries {
            d = d.mul(&a.square_class()?)?.square_class()?;
        }
        d.square_class()
    }

    /// `prod_{i<j} (a_i, a_j)_v` over `Q`.
    pub fn hasse_invariant(&self, place: Place) -> Result<i8> {
        let ints = self.rational_classes("Hasse invariant")?;
        Ok(hasse_of_ints(&ints, place))
    }

    fn rational_classes(&self, operation: &str) -> Result<Vec<BigInt>> {
        if self.field.kind() != FieldKind::Rationals {
            return Err(Error::unsupported(self.field, operation));
        }
        self.entries.iter().map(|a| nt::rational_square_class(a.as_rational().expect("rational backend"))).collect()
    }

    /// Square-class canonicalised entries, sorted.
    fn canonical(&self) -> Result<DiagonalForm> {
        let mut entries = self.entries.iter().map(FieldElement::square_class).collect::<Result<Vec<_>>>()?;
        entries.sort();
        Ok(DiagonalForm { field: self.field, entries })
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ">")
    }
}

fn hasse_of_ints(entries: &[BigInt], place: Place) -> i8 {
    let mut s = 1i8;
    let mut prefix = BigInt::one();
    for a in entries {
        s *= hilbert_int(&prefix, a, place);
        prefix = nt::squarefree_mul(&prefix, a);
    }
    s
}

/// Pfister form `<<b1, ..., bn>> = <1,b1> ... <1,bn>`.
pub fn pfister(field: FieldDescriptor, slots: &[FieldElement]) -> Result<DiagonalForm> {
    let mut form = DiagonalForm::from_ints(field, &[1])?;
    for b in slots {
        let factor = DiagonalForm::new(field, vec![field.int(1), b.clone()])?;
        form = form.tensor(&factor)?;
    }
    Ok(form)
}

/// A virtual form `pos - neg` in `GW(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwClass {
    pos: DiagonalForm,
    neg: DiagonalForm,
}

impl GwClass {
    pub fn new(pos: DiagonalForm, neg: DiagonalForm) -> Result<Self> {
        pos.same_field(&neg)?;
        Ok(GwClass { pos, neg })
    }

    pub fn from_form(pos: DiagonalForm) -> Self {
        let neg = DiagonalForm::empty(pos.field);
        GwClass { pos, neg }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.pos.field
    }

    pub fn pos(&self) -> &DiagonalForm {
        &self.pos
    }

    pub fn neg(&self) -> &DiagonalForm {
        &self.neg
    }

    /// `|pos| - |neg|`.
    pub fn rank(&self) -> i64 {
        self.pos.rank() as i64 - self.neg.rank() as i64
    }

    pub fn signature(&self, ordering: &Ordering) -> Result<i64> {
        Ok(self.pos.signature(ordering)? - self.neg.signature(ordering)?)
    }

    pub fn total_signature(&self) -> Result<BTreeMap<Ordering, i64>> {
        self.field().orderings().into_iter().map(|o| Ok((o, self.signature(&o)?))).collect()
    }

    /// The image in `W(F)`: `pos + <-1> neg`.
    pub fn witt_class(&self) -> Result<WittClass> {
        WittClass::from_form(&self.pos.orthogonal_sum(&self.neg.negate())?)
    }
}

/// Orthogonal sum of both parts.
pub fn gw_add(x: &GwClass, y: &GwClass) -> Result<GwClass> {
    GwClass::new(x.pos.orthogonal_sum(&y.pos)?, x.neg.orthogonal_sum(&y.neg)?)
}

/// `(P - N)(P' - N') = (PP' + NN') - (PN' + NP')`.
pub fn gw_mul(x: &GwClass, y: &GwClass) -> Result<GwClass> {
    let pos = x.pos.tensor(&y.pos)?.orthogonal_sum(&x.neg.tensor(&y.neg)?)?;
    let neg = x.pos.tensor(&y.neg)?.orthogonal_sum(&x.neg.tensor(&y.pos)?)?;
    GwClass::new(pos, neg)
}

/// An element of the Witt ring `W(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittClass {
    form: DiagonalForm,
}

impl WittClass {
    pub fn from_form(form: &DiagonalForm) -> Result<Self> {
        Ok(WittClass { form: reduce(form)? })
    }

    pub fn zero(field: FieldDescriptor) -> Self {
        WittClass { form: DiagonalForm::empty(field) }
    }

    /// `k <1>`, i.e. `|k|` copies of `<1>` or of `<-1>`.
    pub fn from_int(field: FieldDescriptor, k: i64) -> Self {
        let e = field.int(if k < 0 { -1 } else { 1 });
        let form = DiagonalForm { field, entries: vec![e; k.unsigned_abs() as usize] };
        WittClass { form: reduce(&form).expect("units") }
    }

    /// The class of `<a>`.
    pub fn unit(a: &FieldElement) -> Result<Self> {
        Self::from_form(&DiagonalForm::new(a.field(), vec![a.clone()])?)
    }

    pub fn field(&self) -> FieldDescriptor {
        self.form.field
    }

    /// The stored representative.
    pub fn form(&self) -> &DiagonalForm {
        &self.form
    }

    /// True when the stored representative is the empty form.
    pub fn is_trivially_zero(&self) -> bool {
        self.form.entries.is_empty()
    }

    pub fn rank_parity(&self) -> u8 {
        self.form.rank_parity()
    }

    pub fn signature(&self, ordering: &Ordering) -> Result<i64> {
        self.form.signature(ordering)
    }

    pub fn total_signature(&self) -> Result<BTreeMap<Ordering, i64>> {
        self.form.total_signature()
    }

    pub fn signed_discriminant(&self) -> Result<FieldElement> {
        self.form.signed_discriminant()
    }

    pub fn add(&self, other: &WittClass) -> Result<WittClass> {
        Self::from_form(&self.form.orthogonal_sum(&other.form)?)
    }

    pub fn neg(&self) -> WittClass {
        WittClass { form: self.form.negate() }
    }

    pub fn sub(&self, other: &WittClass) -> Result<WittClass> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &WittClass) -> Result<WittClass> {
        Self::from_form(&self.form.tensor(&other.form)?)
    }

    pub fn scale(&self, k: i64) -> WittClass {
        let base = if k < 0 { self.neg() } else { self.clone() };
        let mut entries = Vec::with_capacity(base.form.rank() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            entries.extend(base.form.entries.iter().cloned());
        }
        WittClass { form: reduce(&DiagonalForm { field: self.field(), entries }).expect("units") }
    }

    /// True iff the class is zero in `W(F)`.
    pub fn is_zero(&self) -> Result<bool> {
        let form = &self.form;
        if form.entries.is_empty() {
            return Ok(true);
        }
        if form.rank_parity() == 1 {
            return Ok(false);
        }
        match form.field.kind() {
            FieldKind::RealClosedModel => Ok(form.signature(&form.field.orderings()[0])? == 0),
            FieldKind::PrimeField(_) => form.signed_discriminant().map(|d| d.is_one()),
            FieldKind::Rationals => rational_hyperbolic(form),
            FieldKind::QuadraticReal(_) => Err(Error::unsupported(form.field, "Witt equivalence")),
        }
    }

    /// Equality in `W(F)`.
    pub fn equivalent(&self, other: &WittClass) -> Result<bool> {
        self.sub(other)?.is_zero()
    }

    /// Membership in the `n`-th power of the fundamental ideal (`I^n = W` for `n <= 0`).
    pub fn in_fundamental_power(&self, n: i32) -> Result<bool> {
        if n <= 0 {
            return Ok(true);
        }
        if self.rank_parity() == 1 {
            return Ok(false);
        }
        if n == 1 {
            return Ok(true);
        }
        let field = self.field();
        match field.kind() {
            FieldKind::QuadraticReal(_) => Err(Error::unsupported(field, format!("membership in I^{n}"))),
            FieldKind::PrimeField(_) => self.is_zero(),
            FieldKind::RealClosedModel => {
                let s = self.signature(&field.orderings()[0])?;
                Ok(s % (1i64 << n) == 0)
            }
            FieldKind::Rationals => {
                if !self.signed_discriminant()?.is_one() {
                    return Ok(false);
                }
                if n == 2 {
                    return Ok(true);
                }
                // I^3(Q) is torsion free and detected by the signature, so an element of I^2
                // lies in I^n (n >= 3) iff 2^n divides its signature and it equals s<1>.
                let s = self.signature(&field.orderings()[0])?;
                if n >= 63 {
                    return Ok(s == 0 && self.is_zero()?);
                }
                if s % (1i64 << n) != 0 {
                    return Ok(false);
                }
                self.equivalent(&WittClass::from_int(field, s))
            }
        }
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

/// `x = y` in `W(F)`.
pub fn witt_equivalent(x: &GwClass, y: &GwClass) -> Result<bool> {
    x.witt_class()?.equivalent(&y.witt_class()?)
}

/// Membership of a Witt class in `I^n`.
pub fn in_fundamental_power(x: &WittClass, n: i32) -> Result<bool> {
    x.in_fundamental_power(n)
}

/// Places where some entry has odd valuation, plus 2 and the real place.
fn relevant_places(entries: &[BigInt]) -> Result<BTreeSet<Place>> {
    let mut places = BTreeSet::from([Place::RealPlace, Place::FinitePrime(2)]);
    for a in entries {
        for (p, _) in nt::factor(a)? {
            places.insert(Place::FinitePrime(p));
        }
    }
    Ok(places)
}

/// An even-rank rational form is hyperbolic iff it has the invariants of `m<1,-1>`:
/// signature 0, trivial signed discriminant and matching Hasse invariants everywhere.
fn rational_hyperbolic(form: &DiagonalForm) -> Result<bool> {
    let ints = form.rational_classes("Witt equivalence")?;
    if ints.iter().filter(|a| a.is_positive()).count() * 2 != ints.len() {
        return Ok(false);
    }
    if !form.signed_discriminant()?.is_one() {
        return Ok(false);
    }
    let hyperbolic: Vec<BigInt> = (0..ints.len()).map(|i| BigInt::from(if i % 2 == 0 { 1 } else { -1 })).collect();
    for place in relevant_places(&ints)? {
        if hasse_of_ints(&ints, place) != hasse_of_ints(&hyperbolic, place) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Witt-neutral simplification: canonical square classes, cancellation of `<a,-a>`,
/// and, where `4<1>` represents `a`, the rewrite `<a,a,a,a> -> 4<1>` (or `4<-1>`).
fn reduce(form: &DiagonalForm) -> Result<DiagonalForm> {
    let field = form.field;
    let canon = form.canonical()?;
    let mut counts: BTreeMap<FieldElement, i64> = BTreeMap::new();
    for e in canon.entries {
        *counts.entry(e).or_insert(0) += 1;
    }
    if let FieldKind::PrimeField(p) = field.kind() {
        return Ok(reduce_prime_field(field, p, &counts));
    }
    let one = field.int(1);
    let minus_one = field.int(-1).square_class()?;
    let orderings = field.orderings();
    let foldable = |a: &FieldElement| -> Result<Option<FieldElement>> {
        let real_backend =
            matches!(field.kind(), FieldKind::Rationals | FieldKind::RealClosedModel | FieldKind::QuadraticReal(_));
        if !real_backend || orderings.is_empty() {
            return Ok(None);
        }
        let signs = orderings.iter().map(|o| o.sign_at(a)).collect::<Result<Vec<_>>>()?;
        if signs.iter().all(|&s| s == Sign::Pos) {
            Ok(Some(one.clone()))
        } else if signs.iter().all(|&s| s == Sign::Neg) {
            Ok(Some(minus_one.clone()))
        } else {
            Ok(None)
        }
    };
    let mut changed = true;
    while changed {
        changed = false;
        // cancel hyperbolic pairs
        let keys: Vec<FieldElement> = counts.keys().cloned().collect();
        for a in &keys {
            let partner = a.neg().square_class()?;
            if partner == *a {
                // -1 is a square: <a,a> = <a,-a> is hyperbolic
                let c = counts[a];
                if c >= 2 {
                    counts.insert(a.clone(), c % 2);
                    changed = true;
                }
                continue;
            }
            let (ca, cb) = (counts[a], counts.get(&partner).copied().unwrap_or(0));
            let m = ca.min(cb);
            if m > 0 {
                counts.insert(a.clone(), ca - m);
                counts.insert(partner, cb - m);
                changed = true;
            }
        }
        // fold four copies into the sign class
        for a in &keys {
            let c = counts[a];
            if c >= 4 {
                if let Some(target) = foldable(a)? {
                    if target != *a {
                        counts.insert(a.clone(), c % 4);
                        *counts.entry(target).or_insert(0) += c - c % 4;
                        changed = true;
                    }
                }
            }
        }
        counts.retain(|_, c| *c > 0);
    }
    let entries = counts.into_iter().flat_map(|(a, c)| std::iter::repeat_n(a, c as usize)).collect();
    Ok(DiagonalForm { field, entries })
}

/// Normal form in `W(F_p)`: `Z/2[F*/F*^2]` for `p = 1 mod 4`, `Z/4` for `p = 3 mod 4`.
fn reduce_prime_field(field: FieldDescriptor, p: u64, counts: &BTreeMap<FieldElement, i64>) -> DiagonalForm {
    let one = field.int(1);
    let n = field.int(field.nonresidue().expect("prime field") as i64);
    let c1 = counts.get(&one).copied().unwrap_or(0);
    let cn = counts.get(&n).copied().unwrap_or(0);
    let entries = if p % 4 == 1 {
        let mut e = vec![one; (c1 % 2) as usize];
        e.extend(std::iter::repeat_n(n, (cn % 2) as usize));
        e
    } else {
        match (c1 - cn).rem_euclid(4) {
            0 => vec![],
            1 => vec![one],
            2 => vec![one.clone(), one],
            _ => vec![n],
        }
    };
    DiagonalForm { field, entries }
}
