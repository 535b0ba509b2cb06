//! The homogeneous spectrum of `K^MW_*(F)`: the seven prime families, membership,
//! enumeration up to a bound on odd primes, the inclusion poset, Zariski basic opens and
//! the correspondences with the Harrison topology on orderings.
//!
//! Inclusion is decided semantically: a prime is contained in another iff each of its
//! generators is a member. Bracket generators are tested on a witness set that realises
//! every sign vector of the field, which is enough because membership of `[u]` only
//! depends on the signs of `u`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, FieldKind, Ordering, Sign};
use crate::kmw::{evaluate, KmwElement, KmwExpr};
use crate::nt;
use crate::sampling::Sampler;

/// One homogeneous prime of `K^MW_*(F)`.
///
/// Variants are ordered by family, then ordering, then `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeDescriptor {
    /// `([P_alpha], h)`
    A(Ordering),
    /// `([P_alpha], 2, η)`
    B(Ordering),
    /// `([P_alpha], h, p)`
    C(Ordering, u64),
    /// `([F^×], η, p)`
    D(u64),
    /// `([F^×], 2)`
    E2,
    /// `([F^×], η)`
    Eeta,
    /// `([F^×], 2, η)`
    E2eta,
}

impl PrimeDescriptor {
    /// Parses `A:<ord>`, `B:<ord>`, `C:<ord>:<p>`, `D:<p>`, `E2`, `Eeta`, `E2eta`.
    pub fn parse(field: FieldDescriptor, text: &str) -> Result<Self> {
        let text = text.trim();
        let parts: Vec<&str> = text.split(':').collect();
        let prime = |s: &str| -> Result<u64> {
            let p = s.parse::<u64>().map_err(|_| Error::InvalidDescriptor(format!("{s:?} is not a prime")))?;
            if !nt::is_odd_prime(p) {
                return Err(Error::InvalidDescriptor(format!("{p} is not an odd prime")));
            }
            Ok(p)
        };
        let d = match parts.as_slice() {
            ["A", o] => PrimeDescriptor::A(field.ordering(o)?),
            ["B", o] => PrimeDescriptor::B(field.ordering(o)?),
            ["C", o, p] => PrimeDescriptor::C(field.ordering(o)?, prime(p)?),
            ["D", p] => PrimeDescriptor::D(prime(p)?),
            ["E2"] => PrimeDescriptor::E2,
            ["Eeta"] => PrimeDescriptor::Eeta,
            ["E2eta"] => PrimeDescriptor::E2eta,
            _ => return Err(Error::InvalidDescriptor(format!("cannot parse {text:?}"))),
        };
        Ok(d)
    }

    pub fn family(&self) -> &'static str {
        match self {
            PrimeDescriptor::A(_) => "A",
            PrimeDescriptor::B(_) => "B",
            PrimeDescriptor::C(..) => "C",
            PrimeDescriptor::D(_) => "D",
            PrimeDescriptor::E2 => "E2",
            PrimeDescriptor::Eeta => "Eeta",
            PrimeDescriptor::E2eta => "E2eta",
        }
    }

    pub fn ordering(&self) -> Option<Ordering> {
        match self {
            PrimeDescriptor::A(o) | PrimeDescriptor::B(o) | PrimeDescriptor::C(o, _) => Some(*o),
            _ => None,
        }
    }

    pub fn p(&self) -> Option<u64> {
        match self {
            PrimeDescriptor::C(_, p) | PrimeDescriptor::D(p) => Some(*p),
            _ => None,
        }
    }

    /// Characteristic of the quotient ring: 0, 2 or `p`.
    pub fn char(&self) -> u64 {
        match self {
            PrimeDescriptor::A(_) | PrimeDescriptor::Eeta => 0,
            PrimeDescriptor::B(_) | PrimeDescriptor::E2 | PrimeDescriptor::E2eta => 2,
            PrimeDescriptor::C(_, p) | PrimeDescriptor::D(p) => *p,
        }
    }

    /// Checks that the ordering belongs to `field` and that `p` is an odd prime.
    pub fn validate(&self, field: FieldDescriptor) -> Result<()> {
        if let Some(o) = self.ordering() {
            if o.field() != field {
                return Err(Error::InvalidDescriptor(format!("ordering {o} of {} used over {field}", o.field())));
            }
        }
        match self.p() {
            Some(p) if !nt::is_odd_prime(p) => Err(Error::InvalidDescriptor(format!("{p} is not an odd prime"))),
            _ => Ok(()),
        }
    }

    /// Generators of the ideal other than brackets: a subset of `{h, 2, η, p}`.
    fn scalar_generators(&self, field: FieldDescriptor) -> Vec<KmwExpr> {
        let h = || KmwExpr::hyperbolic(field);
        match *self {
            PrimeDescriptor::A(_) => vec![h()],
            PrimeDescriptor::B(_) => vec![KmwExpr::int(2), KmwExpr::Eta],
            PrimeDescriptor::C(_, p) => vec![h(), KmwExpr::int(p as i64)],
            PrimeDescriptor::D(p) => vec![KmwExpr::Eta, KmwExpr::int(p as i64)],
            PrimeDescriptor::E2 => vec![KmwExpr::int(2)],
            PrimeDescriptor::Eeta => vec![KmwExpr::Eta],
            PrimeDescriptor::E2eta => vec![KmwExpr::int(2), KmwExpr::Eta],
        }
    }

    /// A finite generating set: `[u]` for witness units `u` in the cone, and the scalars.
    pub fn generators(&self, field: FieldDescriptor) -> Vec<KmwExpr> {
        let cone: Vec<FieldElement> = witness_units(field)
            .into_iter()
            .filter(|u| match self.ordering() {
                Some(o) => o.sign_at(u).map(|s| s == Sign::Pos).unwrap_or(false),
                None => true,
            })
            .collect();
        let mut out: Vec<KmwExpr> = cone.into_iter().map(KmwExpr::bracket).collect();
        out.extend(self.scalar_generators(field));
        out
    }
}

impl fmt::Display for PrimeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeDescriptor::A(o) => write!(f, "A:{o}"),
            PrimeDescriptor::B(o) => write!(f, "B:{o}"),
            PrimeDescriptor::C(o, p) => write!(f, "C:{o}:{p}"),
            PrimeDescriptor::D(p) => write!(f, "D:{p}"),
            other => f.write_str(other.family()),
        }
    }
}

/// Units realising every sign vector of the field, plus a few extra square classes.
pub fn witness_units(field: FieldDescriptor) -> Vec<FieldElement> {
    let mut out: Vec<FieldElement> = [1, -1, 2, -2, 3, -3].iter().map(|&k| field.int(k)).collect();
    match field.kind() {
        FieldKind::QuadraticReal(_) => {
            let rt = field.root().expect("quadratic field");
            out.push(rt.clone());
            out.push(rt.neg());
            out.push(field.int(1).add(&rt).expect("same field"));
            out.push(field.int(1).sub(&rt).expect("same field"));
        }
        FieldKind::PrimeField(_) => {
            let n = field.nonresidue().expect("prime field");
            out.push(field.int(n as i64));
        }
        _ => {}
    }
    out.retain(|u| !u.is_zero());
    out.sort();
    out.dedup();
    out
}

/// `x ∈ J`: every graded component of `x` lies in `J`.
pub fn member(x: &KmwElement, prime: &PrimeDescriptor) -> Result<bool> {
    prime.validate(x.field())?;
    for (&n, c) in x.components() {
        let q = c.lstar.class();
        let s = |o: &Ordering| q.signature(o);
        let r = c.rank().unwrap_or(0);
        let ok = match *prime {
            PrimeDescriptor::A(o) => s(&o)? == 0,
            PrimeDescriptor::C(o, p) => s(&o)?.rem_euclid(p as i64) == 0,
            PrimeDescriptor::B(o) => match n {
                n if n < 0 => true,
                0 => r.rem_euclid(2) == 0,
                _ => c.milnor.as_ref().expect("non-negative degree").order_residue(&o)? == 0,
            },
            PrimeDescriptor::D(p) => n != 0 || r.rem_euclid(p as i64) == 0,
            PrimeDescriptor::Eeta => n != 0 || r == 0,
            PrimeDescriptor::E2 => n >= 1 || q.rank_parity() == 0,
            PrimeDescriptor::E2eta => n != 0 || r.rem_euclid(2) == 0,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both membership rules for `([P_alpha], 2, η)`: the Milnor-side residue rule and the
/// signature rule `sgn_alpha ≡ 0 mod 2^{n+1}`, in that order.
pub fn b_membership_routes(x: &KmwElement, alpha: &Ordering) -> Result<(bool, bool)> {
    let milnor = member(x, &PrimeDescriptor::B(*alpha))?;
    let mut signature = true;
    for (&n, c) in x.components() {
        let s = i128::from(c.lstar.class().signature(alpha)?);
        signature &= match n {
            n if n < 0 => true,
            0 => c.rank().unwrap_or(0).rem_euclid(2) == 0,
            n => s.rem_euclid(1i128 << (n + 1).min(120)) == 0,
        };
    }
    Ok((milnor, signature))
}

/// Whether `p ⊆ q`.
pub fn includes(field: FieldDescriptor, p: &PrimeDescriptor, q: &PrimeDescriptor) -> Result<bool> {
    p.validate(field)?;
    q.validate(field)?;
    for g in p.generators(field) {
        if !member(&evaluate(field, &g)?, q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The spectrum enumerated up to an odd-prime bound, with its inclusion relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumView {
    field: FieldDescriptor,
    bound: u64,
    primes: Vec<PrimeDescriptor>,
    below: BTreeMap<PrimeDescriptor, BTreeSet<PrimeDescriptor>>,
}

/// Serialised form of one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeRecord {
    pub family: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub char: u64,
}

/// Serialised form of a spectrum view.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRecord {
    pub field: String,
    pub bound: u64,
    pub primes: Vec<PrimeRecord>,
}

/// All homogeneous primes with odd-prime parameter at most `bound`.
pub fn enumerate(field: FieldDescriptor, bound: u64) -> Result<SpectrumView> {
    let odd = nt::odd_primes_up_to(bound);
    let orderings = field.orderings();
    let mut primes = Vec::new();
    primes.extend(orderings.iter().map(|&o| PrimeDescriptor::A(o)));
    primes.extend(orderings.iter().map(|&o| PrimeDescriptor::B(o)));
    for &o in &orderings {
        primes.extend(odd.iter().map(|&p| PrimeDescriptor::C(o, p)));
    }
    primes.extend(odd.iter().map(|&p| PrimeDescriptor::D(p)));
    primes.extend([PrimeDescriptor::E2, PrimeDescriptor::Eeta, PrimeDescriptor::E2eta]);
    primes.sort();

    let mut generators = BTreeMap::new();
    for j in &primes {
        let gens = j.generators(field).iter().map(|g| evaluate(field, g)).collect::<Result<Vec<_>>>()?;
        generators.insert(*j, gens);
    }
    let mut below: BTreeMap<PrimeDescriptor, BTreeSet<PrimeDescriptor>> = BTreeMap::new();
    for q in &primes {
        let entry = below.entry(*q).or_default();
        for p in &primes {
            let mut contained = true;
            for g in &generators[p] {
                if !member(g, q)? {
                    contained = false;
                    break;
                }
            }
            if contained {
                entry.insert(*p);
            }
        }
    }
    Ok(SpectrumView { field, bound, primes, below })
}

impl SpectrumView {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// The enumerated primes in deterministic order.
    pub fn primes(&self) -> &[PrimeDescriptor] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, p: &PrimeDescriptor) -> bool {
        self.below.contains_key(p)
    }

    /// `p ⊆ q`, read from the precomputed relation.
    pub fn includes(&self, p: &PrimeDescriptor, q: &PrimeDescriptor) -> bool {
        self.below.get(q).is_some_and(|s| s.contains(p))
    }

    /// Pairs `(p, q)` with `p ⊊ q` and nothing strictly in between.
    pub fn covering(&self) -> Vec<(PrimeDescriptor, PrimeDescriptor)> {
        let strict = |a: &PrimeDescriptor, b: &PrimeDescriptor| a != b && self.includes(a, b);
        let mut out = Vec::new();
        for p in &self.primes {
            for q in &self.primes {
                if strict(p, q) && !self.primes.iter().any(|r| strict(p, r) && strict(r, q)) {
                    out.push((*p, *q));
                }
            }
        }
        out
    }

    /// The primes covering `p`.
    pub fn covers_of(&self, p: &PrimeDescriptor) -> BTreeSet<PrimeDescriptor> {
        self.covering().into_iter().filter(|(a, _)| a == p).map(|(_, b)| b).collect()
    }

    /// Upward closure, which is the Zariski closure in the homogeneous spectrum.
    pub fn closure(&self, set: &BTreeSet<PrimeDescriptor>) -> BTreeSet<PrimeDescriptor> {
        self.primes.iter().filter(|q| set.iter().any(|p| self.includes(p, q))).copied().collect()
    }

    /// `D(x) = {J : x ∉ J}`.
    pub fn basic_open_element(&self, x: &KmwElement) -> Result<BTreeSet<PrimeDescriptor>> {
        let mut out = BTreeSet::new();
        for j in &self.primes {
            if !member(x, j)? {
                out.insert(*j);
            }
        }
        Ok(out)
    }

    /// `D(q)` for an expression `q`.
    pub fn basic_open(&self, q: &KmwExpr) -> Result<BTreeSet<PrimeDescriptor>> {
        self.basic_open_element(&evaluate(self.field, q)?)
    }

    /// Minimal elements of the poset.
    pub fn minimal(&self) -> BTreeSet<PrimeDescriptor> {
        self.primes.iter().filter(|q| !self.primes.iter().any(|p| p != *q && self.includes(p, q))).copied().collect()
    }

    pub fn to_record(&self) -> SpectrumRecord {
        SpectrumRecord {
            field: self.field.to_string(),
            bound: self.bound,
            primes: self
                .primes
                .iter()
                .map(|j| PrimeRecord {
                    family: j.family(),
                    ordering: j.ordering().map(|o| o.name()),
                    p: j.p(),
                    char: j.char(),
                })
                .collect(),
        }
    }

    /// DOT digraph of the covering relation, smaller primes at the bottom.
    pub fn hasse_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
        for j in &self.primes {
            out.push_str(&format!("  \"{j}\";\n"));
        }
        for (p, q) in self.covering() {
            out.push_str(&format!("  \"{p}\" -> \"{q}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The ordering indexing `J`, recovered from which brackets `[a]` lie in `J`.
///
/// `units` supplements the witness set; the result is the unique ordering whose positive
/// cone agrees with bracket membership on all of them.
pub fn reconstruct_ordering(
    field: FieldDescriptor,
    prime: &PrimeDescriptor,
    units: &[FieldElement],
) -> Result<Ordering> {
    prime.validate(field)?;
    if prime.ordering().is_none() {
        return Err(Error::InvalidDescriptor(format!("{prime} carries no ordering")));
    }
    let mut tests = witness_units(field);
    tests.extend(units.iter().cloned());
    let mut observed = Vec::with_capacity(tests.len());
    for a in &tests {
        observed.push(member(&KmwElement::bracket(a)?, prime)?);
    }
    let mut found = None;
    for o in field.orderings() {
        let mut agrees = true;
        for (a, &inside) in tests.iter().zip(&observed) {
            if (o.sign_at(a)? == Sign::Pos) != inside {
                agrees = false;
                break;
            }
        }
        if agrees {
            if found.is_some() {
                return Err(Error::InvalidDescriptor(format!("{prime} does not determine an ordering")));
            }
            found = Some(o);
        }
    }
    found.ok_or_else(|| Error::InvalidDescriptor(format!("no ordering matches {prime}")))
}

/// Result of the Harrison-topology comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarrisonReport {
    pub field: String,
    pub units: usize,
    pub failures: Vec<String>,
}

impl HarrisonReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each unit `a` with `H(a) = {alpha : a >_alpha 0}`, checks that
/// `alpha -> A(alpha)` maps `H(a)` onto `D(-[-a])` (whose `L`-image is `<1,a> η^{-1}`) within
/// family A, and `alpha -> B(alpha)` maps it onto `D([-a])` within family B.
pub fn harrison_checks(field: FieldDescriptor, units: &[FieldElement]) -> Result<HarrisonReport> {
    if !field.is_real() {
        return Err(Error::unsupported(field, "Harrison topology checks (no orderings)"));
    }
    let view = enumerate(field, 0)?;
    let mut failures = Vec::new();
    for a in units {
        let mut h = BTreeSet::new();
        for o in field.orderings() {
            if o.sign_at(a)? == Sign::Pos {
                h.insert(o);
            }
        }
        let minus_a = a.neg();
        let sigma0 = view.basic_open(&-KmwExpr::bracket(minus_a.clone()))?;
        let sigma2 = view.basic_open(&KmwExpr::bracket(minus_a))?;
        let image_a: BTreeSet<_> = h.iter().map(|&o| PrimeDescriptor::A(o)).collect();
        let image_b: BTreeSet<_> = h.iter().map(|&o| PrimeDescriptor::B(o)).collect();
        let only = |set: &BTreeSet<PrimeDescriptor>, fam: &str| -> BTreeSet<PrimeDescriptor> {
            set.iter().filter(|j| j.family() == fam).copied().collect()
        };
        if only(&sigma0, "A") != image_a {
            failures.push(format!("A-family image of H({a}) differs from D(-[-a])"));
        }
        if only(&sigma2, "B") != image_b {
            failures.push(format!("B-family image of H({a}) differs from D([-a])"));
        }
    }
    Ok(HarrisonReport { field: field.to_string(), units: units.len(), failures })
}

/// Result of the sampled primality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimalityReport {
    pub field: String,
    pub bound: u64,
    pub primes: usize,
    pub pairs: usize,
    pub seed: u64,
    pub violations: Vec<String>,
}

impl PrimalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every enumerated prime and `pairs` random homogeneous `(x, y)`: `xy ∈ J` iff
/// `x ∈ J` or `y ∈ J`; `x ∈ J` forces `xy, yx ∈ J`; and `J` is closed under sums in a
/// single degree.
pub fn check_primality(field: FieldDescriptor, bound: u64, pairs: usize, seed: u64) -> Result<PrimalityReport> {
    let view = enumerate(field, bound)?;
    let mut sampler = Sampler::new(field, seed);
    let mut violations = Vec::new();
    for _ in 0..pairs {
        let (n, xe) = sampler.homogeneous_any();
        let (_, ye) = sampler.homogeneous_any();
        let ze = sampler.homogeneous(n);
        let (x, y, z) = (evaluate(field, &xe)?, evaluate(field, &ye)?, evaluate(field, &ze)?);
        let (xy, yx, xz) = (x.mul(&y)?, y.mul(&x)?, x.add(&z)?);
        for j in view.primes() {
            let (mx, my, mz) = (member(&x, j)?, member(&y, j)?, member(&z, j)?);
            let (mxy, myx, mxz) = (member(&xy, j)?, member(&yx, j)?, member(&xz, j)?);
            if mxy != (mx || my) {
                violations.push(format!("{j}: x = {xe}, y = {ye}: xy in J is {mxy}, x in J is {mx}, y in J is {my}"));
            }
            if (mx || my) && !myx {
                violations.push(format!("{j}: x = {xe}, y = {ye}: yx escapes the ideal"));
            }
            if mx && mz && !mxz {
                violations.push(format!("{j}: x = {xe}, z = {ze}: x + z escapes the ideal"));
            }
        }
    }
    Ok(PrimalityReport { field: field.to_string(), bound, primes: view.len(), pairs, seed, violations })
}

/// Result of comparing the two routes to membership in `([P_alpha], 2, η)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualRouteReport {
    pub field: String,
    pub samples: usize,
    pub seed: u64,
    pub disagreements: Vec<String>,
}

impl DualRouteReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Samples homogeneous elements and compares [`b_membership_routes`] at every ordering.
pub fn check_dual_route(field: FieldDescriptor, samples: usize, seed: u64) -> Result<DualRouteReport> {
    let mut sampler = Sampler::new(field, seed);
    let mut disagreements = Vec::new();
    for _ in 0..samples {
        let (_, e) = sampler.homogeneous_any();
        let x = evaluate(field, &e)?;
        for o in field.orderings() {
            let (m, s) = b_membership_routes(&x, &o)?;
            if m != s {
                disagreements.push(format!("{o}: {e}: residue rule {m}, signature rule {s}"));
            }
        }
    }
    Ok(DualRouteReport { field: field.to_string(), samples, seed, disagreements })
}

/// A generator of one prime that is missing from the other, if the two differ.
pub fn distinguishing_generator(
    field: FieldDescriptor,
    p: &PrimeDescriptor,
    q: &PrimeDescriptor,
) -> Result<Option<KmwExpr>> {
    for (a, b) in [(p, q), (q, p)] {
        for g in a.generators(field) {
            if !member(&evaluate(field, &g)?, b)? {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}
