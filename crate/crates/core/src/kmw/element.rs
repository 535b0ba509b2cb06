use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, FieldKind};
use crate::lstar::LStarElement;
use crate::milnor::MilnorElement;
use crate::nt;
use crate::witt::WittClass;

use super::expr::KmwExpr;

/// How much of the pullback condition was checked while building an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Compatibility {
    /// `Gr_I` agreement was decided exactly in every degree.
    Verified,
    /// Only parity and signature congruences were checked (real quadratic fields).
    NecessaryOnly,
}

/// One graded piece: the `L^*` part and, in degrees `n >= 0`, the Milnor part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub lstar: LStarElement,
    pub milnor: Option<MilnorElement>,
}

impl Component {
    fn zero(field: FieldDescriptor, degree: i32) -> Self {
        Component {
            lstar: LStarElement::zero(field, degree),
            milnor: (degree >= 0).then(|| MilnorElement::zero(field, degree as u32)),
        }
    }

    fn add(&self, other: &Component) -> Result<Component> {
        let milnor = match (&self.milnor, &other.milnor) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            _ => None,
        };
        Ok(Component { lstar: self.lstar.add(&other.lstar)?, milnor })
    }

    fn neg(&self) -> Component {
        Component { lstar: self.lstar.neg(), milnor: self.milnor.as_ref().map(MilnorElement::neg) }
    }

    fn is_formally_zero(&self) -> bool {
        self.lstar.class().is_trivially_zero() && self.milnor.as_ref().is_none_or(MilnorElement::is_formally_zero)
    }

    fn is_zero(&self) -> Result<bool> {
        if !self.lstar.is_zero()? {
            return Ok(false);
        }
        match &self.milnor {
            Some(m) => m.is_zero(),
            None => Ok(true),
        }
    }

    /// The integer `r` of a degree-0 component.
    pub fn rank(&self) -> Option<i64> {
        self.milnor.as_ref().and_then(MilnorElement::as_integer)
    }
}

/// An element of `K^MW_*(F)`, stored through its image in `L^* ×_{Gr_I} K^M_*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmwElement {
    field: FieldDescriptor,
    components: BTreeMap<i32, Component>,
    compatibility: Compatibility,
}

impl KmwElement {
    fn with(field: FieldDescriptor, components: BTreeMap<i32, Component>) -> Self {
        let compatibility = match field.kind() {
            FieldKind::QuadraticReal(_) => Compatibility::NecessaryOnly,
            _ => Compatibility::Verified,
        };
        let components = components.into_iter().filter(|(_, c)| !c.is_formally_zero()).collect();
        KmwElement { field, components, compatibility }
    }

    pub fn zero(field: FieldDescriptor) -> Self {
        Self::with(field, BTreeMap::new())
    }

    pub fn int(field: FieldDescriptor, k: i64) -> Self {
        let c = Component {
            lstar: LStarElement::unchecked(WittClass::from_int(field, k), 0),
            milnor: Some(MilnorElement::scalar(field, k)),
        };
        Self::with(field, BTreeMap::from([(0, c)]))
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Self::int(field, 1)
    }

    pub fn eta(field: FieldDescriptor) -> Self {
        let c = Component { lstar: LStarElement::eta(field), milnor: None };
        Self::with(field, BTreeMap::from([(-1, c)]))
    }

    /// `[a]`, with `L`-part `<a,-1>` in degree 1.
    pub fn bracket(a: &FieldElement) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroUnit);
        }
        let field = a.field();
        let q = WittClass::unit(a)?.add(&WittClass::from_int(field, -1))?;
        let c = Component {
            lstar: LStarElement::unchecked(q, 1),
            milnor: Some(MilnorElement::symbol(field, std::slice::from_ref(a))?),
        };
        Ok(Self::with(field, BTreeMap::from([(1, c)])))
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn compatibility(&self) -> Compatibility {
        self.compatibility
    }

    /// Nonzero-looking graded pieces, by degree.
    pub fn components(&self) -> &BTreeMap<i32, Component> {
        &self.components
    }

    /// The piece in degree `n` (zero if absent).
    pub fn component(&self, n: i32) -> Component {
        self.components.get(&n).cloned().unwrap_or_else(|| Component::zero(self.field, n))
    }

    fn check_field(&self, other: &KmwElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &KmwElement) -> Result<KmwElement> {
        self.check_field(other)?;
        let mut out = self.components.clone();
        for (&n, c) in &other.components {
            let sum = match out.get(&n) {
                Some(a) => a.add(c)?,
                None => c.clone(),
            };
            out.insert(n, sum);
        }
        Ok(Self::with(self.field, out))
    }

    pub fn neg(&self) -> KmwElement {
        let out = self.components.iter().map(|(&n, c)| (n, c.neg())).collect();
        Self::with(self.field, out)
    }

    pub fn sub(&self, other: &KmwElement) -> Result<KmwElement> {
        self.add(&other.neg())
    }

    /// Componentwise product; the pullback condition is re-checked in every degree.
    pub fn mul(&self, other: &KmwElement) -> Result<KmwElement> {
        self.check_field(other)?;
        let mut out: BTreeMap<i32, Component> = BTreeMap::new();
        for (&n, a) in &self.components {
            for (&m, b) in &other.components {
                let lstar = a.lstar.mul(&b.lstar)?;
                let milnor = match (&a.milnor, &b.milnor) {
                    (Some(x), Some(y)) => Some(x.mul(y)?),
                    _ if n + m >= 0 => Some(MilnorElement::zero(self.field, (n + m) as u32)),
                    _ => None,
                };
                let c = Component { lstar, milnor };
                let sum = match out.get(&(n + m)) {
                    Some(acc) => acc.add(&c)?,
                    None => c,
                };
                out.insert(n + m, sum);
            }
        }
        let product = Self::with(self.field, out);
        product.check_compatibility()?;
        Ok(product)
    }

    pub fn pow(&self, k: u32) -> Result<KmwElement> {
        let mut result = KmwElement::one(self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Checks `to_grI(L) = milnor_map(M)` in each degree `n >= 0`.
    ///
    /// Over real quadratic fields only the consequences visible to signatures are tested:
    /// matching parity in degree 0, and `sgn_alpha(L) = m_alpha 2^n mod 2^{n+1}` above it.
    pub fn check_compatibility(&self) -> Result<()> {
        for (&n, c) in &self.components {
            let Some(m) = &c.milnor else { continue };
            let q = c.lstar.class();
            let ok = match self.field.kind() {
                FieldKind::QuadraticReal(_) => {
                    if n == 0 {
                        i64::from(q.rank_parity()) == m.as_integer().unwrap_or(0).rem_euclid(2)
                    } else {
                        let mut ok = q.rank_parity() == 0;
                        for alpha in self.field.orderings() {
                            let s = q.signature(&alpha)?;
                            let expected = i128::from(m.order_residue(&alpha)?) << n;
                            let modulus = 1i128 << (n + 1).min(100);
                            ok &= (i128::from(s) - expected).rem_euclid(modulus) == 0;
                        }
                        ok
                    }
                }
                _ => {
                    let lhs = c.lstar.to_gr_i().expect("non-negative degree");
                    lhs.equals(&m.milnor_map()?)?
                }
            };
            if !ok {
                return Err(Error::PullbackMismatch(n));
            }
        }
        Ok(())
    }

    /// Zero test: every component vanishes in both `L^*` and `K^M_*`.
    pub fn is_zero(&self) -> Result<bool> {
        for c in self.components.values() {
            if !c.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &KmwElement) -> Result<bool> {
        self.sub(other)?.is_zero()
    }

    /// Degrees whose component is not zero.
    pub fn support(&self) -> Result<Vec<i32>> {
        let mut out = Vec::new();
        for (&n, c) in &self.components {
            if !c.is_zero()? {
                out.push(n);
            }
        }
        Ok(out)
    }

    /// The unique degree carrying a nonzero component (0 for the zero element).
    pub fn homogeneous_degree(&self) -> Result<i32> {
        match self.support()?.as_slice() {
            [] => Ok(0),
            [n] => Ok(*n),
            _ => Err(Error::NonHomogeneous),
        }
    }

    /// `K^MW_0 ≅ GW(F)`: the pair (rank, Witt class) of a degree-0 element.
    pub fn gw_of_degree_zero(&self) -> Result<(i64, WittClass)> {
        for (&n, c) in &self.components {
            if n != 0 && !c.is_zero()? {
                return Err(Error::NonHomogeneous);
            }
        }
        let c = self.component(0);
        Ok((c.rank().unwrap_or(0), c.lstar.class().clone()))
    }

    /// An expression that evaluates back to this element.
    ///
    /// Degree 0 and negative degrees are written with `<a> = 1 + η[a]` and `h`; positive
    /// degrees use a Milnor lift corrected by a multiple of `η[-1]^{n+1}`. Real quadratic
    /// fields are not covered, since the correction needs exact `I^n` membership.
    pub fn to_expression(&self) -> Result<KmwExpr> {
        let mut terms = Vec::new();
        for (&n, c) in &self.components {
            if c.is_zero()? {
                continue;
            }
            terms.push(self.component_expression(n, c)?);
        }
        Ok(sum(terms))
    }

    fn component_expression(&self, n: i32, c: &Component) -> Result<KmwExpr> {
        let field = self.field;
        let entries = c.lstar.class().form().entries().to_vec();
        if n < 0 {
            let eta = match n {
                -1 => KmwExpr::Eta,
                _ => KmwExpr::Eta.pow(n.unsigned_abs()),
            };
            return Ok(form_sum(&entries) * eta);
        }
        let m = c.milnor.as_ref().expect("non-negative degree");
        if n == 0 {
            let r = m.as_integer().unwrap_or(0);
            let k = (r - entries.len() as i64) / 2;
            let mut terms = vec![form_sum(&entries)];
            if k != 0 {
                terms.push(scaled(k, KmwExpr::hyperbolic(field)));
            }
            return Ok(sum(terms));
        }
        let minus_one = || KmwExpr::bracket(field.int(-1));
        match field.kind() {
            FieldKind::QuadraticReal(_) => Err(Error::unsupported(field, "printing positive-degree elements")),
            FieldKind::PrimeField(_) => {
                if n == 1 {
                    Ok(KmwExpr::bracket(milnor_product(m)?))
                } else {
                    Ok(KmwExpr::int(0))
                }
            }
            FieldKind::RealClosedModel => {
                let alpha = field.orderings()[0];
                let lift = if n == 1 {
                    KmwExpr::bracket(milnor_product(m)?)
                } else {
                    scaled(i64::from(m.order_residue(&alpha)?), minus_one().pow(n as u32))
                };
                self.eta_correction(n, c, lift)
            }
            FieldKind::Rationals if n == 1 => rational_degree_one(field, &entries, &milnor_product(m)?),
            FieldKind::Rationals => {
                let lift = sum(m
                    .terms()
                    .map(|(coeff, sym)| {
                        let prod = sym.iter().cloned().map(KmwExpr::bracket).reduce(|a, b| a * b).expect("n >= 1");
                        scaled(coeff, prod)
                    })
                    .collect());
                self.eta_correction(n, c, lift)
            }
        }
    }

    /// `lift + k η[-1]^{n+1}`, with `k` fixed by the signature of the `I^{n+1}` defect.
    fn eta_correction(&self, n: i32, c: &Component, lift: KmwExpr) -> Result<KmwExpr> {
        let field = self.field;
        let lifted = super::evaluate(field, &lift)?.component(n);
        let defect = c.lstar.class().sub(lifted.lstar.class())?;
        let s = defect.signature(&field.orderings()[0])?;
        let unit = (-2i128).pow(n as u32 + 1);
        let k = i128::from(s) / unit;
        if k == 0 {
            return Ok(lift);
        }
        let k = i64::try_from(k).map_err(|_| Error::TooLarge(k.to_string()))?;
        let correction = scaled(k, KmwExpr::Eta * KmwExpr::bracket(field.int(-1)).pow(n as u32 + 1));
        Ok(sum(vec![lift, correction].into_iter().filter(|e| *e != KmwExpr::Int(0)).collect()))
    }
}

fn sum(terms: Vec<KmwExpr>) -> KmwExpr {
    terms
        .into_iter()
        .reduce(|a, b| match b {
            KmwExpr::Neg(b) => a - *b,
            b => a + b,
        })
        .unwrap_or(KmwExpr::Int(0))
}

fn scaled(k: i64, e: KmwExpr) -> KmwExpr {
    match k {
        0 => KmwExpr::Int(0),
        1 => e,
        k if k < 0 => -scaled(-k, e),
        _ => KmwExpr::int(k) * e,
    }
}

/// `<d_1, ..., d_r>` as `1 + ... + 1 + (1 + η[d_i]) + ...`, folding the entries equal to 1.
fn form_sum(entries: &[FieldElement]) -> KmwExpr {
    let ones = entries.iter().filter(|a| a.is_one()).count() as i64;
    let mut terms = Vec::new();
    if ones > 0 {
        terms.push(KmwExpr::int(ones));
    }
    terms.extend(entries.iter().filter(|a| !a.is_one()).cloned().map(KmwExpr::unit_form));
    sum(terms)
}

/// `prod a_j^{c_j}` for a degree-1 Milnor element.
fn milnor_product(m: &MilnorElement) -> Result<FieldElement> {
    let mut prod = m.field().int(1);
    for (c, sym) in m.terms() {
        let base = if c < 0 { sym[0].inv()? } else { sym[0].clone() };
        for _ in 0..c.unsigned_abs() {
            prod = prod.mul(&base)?;
        }
    }
    Ok(prod)
}

/// Degree-one rational element with `L`-class `<d_1, ..., d_2k>` and Milnor part `[target]`.
///
/// Each pair gives `<u>[x] = <d_{2i-1}, d_{2i}>` with `u = -d_{2i}`, `x = -d_{2i-1}/d_{2i}`;
/// the Milnor parts then sum to `[X]`, and `X / target` is a square `c^2`, removed by `h[c]`.
fn rational_degree_one(field: FieldDescriptor, entries: &[FieldElement], target: &FieldElement) -> Result<KmwExpr> {
    let mut terms = Vec::new();
    let mut x_total = field.int(1);
    for pair in entries.chunks(2) {
        let [a, b] = pair else {
            return Err(Error::PullbackMismatch(1));
        };
        let u = b.neg();
        let x = a.div(b)?.neg();
        x_total = x_total.mul(&x)?;
        terms.push(KmwExpr::unit_form(u) * KmwExpr::bracket(x));
    }
    let ratio = x_total.div(target)?;
    let q = ratio.as_rational().expect("rational backend");
    let c = nt::rational_sqrt(q).ok_or(Error::PullbackMismatch(1))?;
    if !c.is_one() {
        let c = field.rat(c);
        terms.push(-(KmwExpr::hyperbolic(field) * KmwExpr::bracket(c)));
    }
    Ok(sum(terms))
}

impl fmt::Display for KmwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "deg {n}: L = {}", c.lstar.class())?;
            if let Some(m) = &c.milnor {
                write!(f, ", M = {m}")?;
            }
        }
        Ok(())
    }
}
