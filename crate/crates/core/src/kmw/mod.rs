//! Milnor-Witt K-theory: expressions over `[a]` and `η`, their evaluation into the pullback
//! `L^* ×_{Gr_I} K^M_*`, the defining relations, `ε`-commutativity and `K^MW_0 ≅ GW`.

mod element;
mod expr;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

pub use element::{Compatibility, Component, KmwElement};
pub use expr::KmwExpr;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldKind};
use crate::sampling::Sampler;
use crate::witt::WittClass;

/// Evaluates an expression in `K^MW_*(field)`.
pub fn evaluate(field: FieldDescriptor, e: &KmwExpr) -> Result<KmwElement> {
    match e {
        KmwExpr::Int(k) => Ok(KmwElement::int(field, *k)),
        KmwExpr::Eta => Ok(KmwElement::eta(field)),
        KmwExpr::Bracket(a) => {
            if a.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), a.field().to_string()));
            }
            KmwElement::bracket(a)
        }
        KmwExpr::Add(a, b) => evaluate(field, a)?.add(&evaluate(field, b)?),
        KmwExpr::Sub(a, b) => evaluate(field, a)?.sub(&evaluate(field, b)?),
        KmwExpr::Mul(a, b) => evaluate(field, a)?.mul(&evaluate(field, b)?),
        KmwExpr::Neg(a) => Ok(evaluate(field, a)?.neg()),
        KmwExpr::Pow(a, k) => evaluate(field, a)?.pow(*k),
    }
}

/// Parses and evaluates.
pub fn evaluate_str(field: FieldDescriptor, text: &str) -> Result<KmwElement> {
    evaluate(field, &KmwExpr::parse(field, text)?)
}

/// `ε = -(1 + η[-1])`.
pub fn epsilon(field: FieldDescriptor) -> KmwElement {
    evaluate(field, &KmwExpr::epsilon(field)).expect("-1 is a unit")
}

/// `xy - ε^{mn} yx` for homogeneous `x` of degree `m` and `y` of degree `n`.
pub fn epsilon_commutator(field: FieldDescriptor, x: &KmwExpr, y: &KmwExpr) -> Result<KmwElement> {
    let (ex, ey) = (evaluate(field, x)?, evaluate(field, y)?);
    let (m, n) = (ex.homogeneous_degree()?, ey.homogeneous_degree()?);
    let xy = ex.mul(&ey)?;
    let mut yx = ey.mul(&ex)?;
    if (m * n).rem_euclid(2) == 1 {
        yx = epsilon(field).mul(&yx)?;
    }
    xy.sub(&yx)
}

/// `(rank, Witt class)` of an element concentrated in degree 0.
pub fn gw_of_degree_zero(x: &KmwElement) -> Result<(i64, WittClass)> {
    x.gw_of_degree_zero()
}

/// The four defining relations of `K^MW_*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `[ab] - [a] - [b] - η[a][b]`
    TwistedLogarithm,
    /// `[a][1-a]`
    Steinberg,
    /// `[a]η - η[a]`
    Commutativity,
    /// `(2 + [-1]η)η`
    Witt,
}

impl Relation {
    pub const ALL: [Relation; 4] =
        [Relation::TwistedLogarithm, Relation::Steinberg, Relation::Commutativity, Relation::Witt];

    pub fn name(self) -> &'static str {
        match self {
            Relation::TwistedLogarithm => "twisted_logarithm",
            Relation::Steinberg => "steinberg",
            Relation::Commutativity => "commutativity",
            Relation::Witt => "witt",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A sampled instance of a relation that did not evaluate to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: Relation,
    pub expression: String,
}

/// Outcome of [`check_defining_relations`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub field: FieldDescriptor,
    pub samples: usize,
    pub seed: u64,
    pub checked: BTreeMap<Relation, usize>,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates each defining relation on `samples` random units and reports counterexamples.
pub fn check_defining_relations(field: FieldDescriptor, samples: usize, seed: u64) -> Result<RelationReport> {
    if let FieldKind::QuadraticReal(_) = field.kind() {
        return Err(Error::unsupported(field, "zero testing of relations"));
    }
    let mut sampler = Sampler::new(field, seed);
    let minus_one = KmwExpr::bracket(field.int(-1));
    let mut report = RelationReport { field, samples, seed, checked: BTreeMap::new(), failures: Vec::new() };
    for _ in 0..samples {
        let (a, b) = (sampler.unit(), sampler.unit());
        let (s, one_minus_s) = sampler.steinberg_pair();
        let ab = a.mul(&b)?;
        let (ba, bb) = (KmwExpr::bracket(a.clone()), KmwExpr::bracket(b));
        let instances = [
            (
                Relation::TwistedLogarithm,
                KmwExpr::bracket(ab) - ba.clone() - bb.clone() - KmwExpr::Eta * ba.clone() * bb,
            ),
            (Relation::Steinberg, KmwExpr::bracket(s) * KmwExpr::bracket(one_minus_s)),
            (Relation::Commutativity, ba.clone() * KmwExpr::Eta - KmwExpr::Eta * ba),
            (Relation::Witt, (KmwExpr::int(2) + minus_one.clone() * KmwExpr::Eta) * KmwExpr::Eta),
        ];
        for (relation, e) in instances {
            *report.checked.entry(relation).or_insert(0) += 1;
            if !evaluate(field, &e)?.is_zero()? {
                report.failures.push(RelationFailure { relation, expression: e.to_string() });
            }
        }
    }
    Ok(report)
}
