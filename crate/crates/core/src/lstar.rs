//! The graded ring `L^* = ⊕_n I^n η^{-n}` inside `W(F)[η, η^{-1}]`, the model ring
//! `R = Z[η, y]/(ηy - 2)`, and membership in the homogeneous primes of `L^*`.
//!
//! A homogeneous element of degree `n` is stored as a Witt class `q` with `q ∈ I^n`
//! (no condition for `n <= 0`); it stands for `q η^{-n}`. The generator `η` is `<1>` in
//! degree `-1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldKind, Ordering};
use crate::milnor::GrIClass;
use crate::nt;
use crate::witt::WittClass;

/// `q η^{-n}` with `q ∈ I^{max(n, 0)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LStarElement {
    degree: i32,
    q: WittClass,
}

impl LStarElement {
    /// Validated constructor.
    ///
    /// Over `Q(sqrt d)`, where membership in `I^n` is not decidable here, only the necessary
    /// conditions are enforced: even rank for `n >= 1` and `2^n | sgn_alpha(q)` at every
    /// ordering.
    pub fn new(q: WittClass, degree: i32) -> Result<Self> {
        let ok = match q.field().kind() {
            FieldKind::QuadraticReal(_) if degree >= 2 => {
                q.rank_parity() == 0
                    && q.total_signature()?
                        .values()
                        .all(|s| degree >= 63 && *s == 0 || degree < 63 && s % (1i64 << degree) == 0)
            }
            _ => q.in_fundamental_power(degree)?,
        };
        if !ok {
            return Err(Error::NotInFundamentalPower { degree });
        }
        Ok(LStarElement { degree, q })
    }

    pub(crate) fn unchecked(q: WittClass, degree: i32) -> Self {
        LStarElement { degree, q }
    }

    pub fn zero(field: FieldDescriptor, degree: i32) -> Self {
        LStarElement { degree, q: WittClass::zero(field) }
    }

    /// `η = <1>` in degree `-1`.
    pub fn eta(field: FieldDescriptor) -> Self {
        LStarElement { degree: -1, q: WittClass::from_int(field, 1) }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn class(&self) -> &WittClass {
        &self.q
    }

    pub fn field(&self) -> FieldDescriptor {
        self.q.field()
    }

    pub fn add(&self, other: &LStarElement) -> Result<LStarElement> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(LStarElement { degree: self.degree, q: self.q.add(&other.q)? })
    }

    pub fn neg(&self) -> LStarElement {
        LStarElement { degree: self.degree, q: self.q.neg() }
    }

    pub fn sub(&self, other: &LStarElement) -> Result<LStarElement> {
        self.add(&other.neg())
    }

    /// Degrees add; `I^n I^m ⊆ I^{n+m}` keeps the product valid.
    pub fn mul(&self, other: &LStarElement) -> Result<LStarElement> {
        Ok(LStarElement { degree: self.degree + other.degree, q: self.q.mul(&other.q)? })
    }

    /// Multiplication by `η`: same class, degree lowered by one.
    pub fn eta_mul(&self) -> LStarElement {
        LStarElement { degree: self.degree - 1, q: self.q.clone() }
    }

    pub fn is_zero(&self) -> Result<bool> {
        self.q.is_zero()
    }

    /// The canonical homogeneous extension of the signature at `alpha`, landing in `R`.
    ///
    /// The coefficient is `sgn_alpha(q)` for `n <= 0` and `sgn_alpha(q) / 2^n` for `n > 0`,
    /// i.e. the coefficient of `y^n` once `η^{-1}` is identified with `y / 2`.
    pub fn sgn_plus(&self, alpha: &Ordering) -> Result<RElement> {
        let s = self.q.signature(alpha)?;
        let coeff = if self.degree > 0 {
            let d = 1i64 << self.degree;
            debug_assert_eq!(s % d, 0, "q ∈ I^n forces 2^n | sgn");
            s / d
        } else {
            s
        };
        Ok(RElement { degree: self.degree, coeff })
    }

    /// The class of `q` in `I^n / I^{n+1}`; `None` in negative degrees, where `Gr_I` vanishes.
    pub fn to_gr_i(&self) -> Option<GrIClass> {
        (self.degree >= 0).then(|| GrIClass::unchecked(self.q.clone(), self.degree as u32))
    }

    /// Membership in a homogeneous prime of `L^*`.
    pub fn in_prime(&self, prime: &LPrime) -> Result<bool> {
        prime.validate(self.field())?;
        let n = self.degree;
        let parity_even = self.q.rank_parity() == 0;
        Ok(match prime {
            LPrime::Jplus(alpha) => self.q.signature(alpha)? == 0,
            LPrime::JplusP(alpha, p) => self.q.signature(alpha)?.rem_euclid(*p as i64) == 0,
            LPrime::Jplus2Eta(alpha) => {
                let s = self.q.signature(alpha)?;
                match n {
                    n if n < 0 => true,
                    0 => s.rem_euclid(2) == 0,
                    n if n >= 62 => s == 0,
                    n => s.rem_euclid(1i64 << (n + 1)) == 0,
                }
            }
            LPrime::L1 => n >= 1 || parity_even,
            LPrime::L1Eta => n != 0 || parity_even,
        })
    }
}

impl fmt::Display for LStarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (degree {})", self.q, self.degree)
    }
}

/// `c y^n` (n > 0), `c` (n = 0) or `c η^{|n|}` (n < 0) in `R = Z[η, y]/(ηy - 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RElement {
    pub degree: i32,
    pub coeff: i64,
}

impl RElement {
    pub fn new(degree: i32, coeff: i64) -> Self {
        RElement { degree, coeff }
    }

    pub fn y() -> Self {
        RElement { degree: 1, coeff: 1 }
    }

    pub fn eta() -> Self {
        RElement { degree: -1, coeff: 1 }
    }

    /// Degrees add; each cancelled `ηy` pair contributes a factor 2.
    pub fn mul(&self, other: &RElement) -> RElement {
        let cancelled = if (self.degree > 0) != (other.degree > 0) && self.degree != 0 && other.degree != 0 {
            self.degree.abs().min(other.degree.abs())
        } else {
            0
        };
        RElement { degree: self.degree + other.degree, coeff: self.coeff * other.coeff * (1i64 << cancelled) }
    }
}

impl fmt::Display for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "{}y", self.coeff),
            -1 => write!(f, "{}eta", self.coeff),
            n if n > 0 => write!(f, "{}y^{n}", self.coeff),
            n => write!(f, "{}eta^{}", self.coeff, -n),
        }
    }
}

/// `r_mul` on the model ring.
pub fn r_mul(x: &RElement, y: &RElement) -> RElement {
    x.mul(y)
}

/// The homogeneous primes of `L^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LPrime {
    /// `J^+_alpha = ker sgn^+_alpha`.
    Jplus(Ordering),
    /// `(J^+_alpha, p)`, `p` an odd prime.
    JplusP(Ordering, u64),
    /// `(J^+_alpha, 2, η)`.
    Jplus2Eta(Ordering),
    /// `(L^1)`.
    L1,
    /// `(L^1, η)`.
    L1Eta,
}

impl LPrime {
    fn validate(&self, field: FieldDescriptor) -> Result<()> {
        let alpha = match self {
            LPrime::Jplus(a) | LPrime::Jplus2Eta(a) => Some(a),
            LPrime::JplusP(a, p) => {
                if !nt::is_odd_prime(*p) {
                    return Err(Error::InvalidDescriptor(format!("{p} is not an odd prime")));
                }
                Some(a)
            }
            LPrime::L1 | LPrime::L1Eta => None,
        };
        match alpha {
            Some(a) if a.field() != field => {
                Err(Error::InvalidDescriptor(format!("ordering {a} does not belong to {field}")))
            }
            _ => Ok(()),
        }
    }
}

/// `x ∈ J` for a homogeneous prime `J` of `L^*`.
pub fn in_prime_lstar(x: &LStarElement, prime: &LPrime) -> Result<bool> {
    x.in_prime(prime)
}
