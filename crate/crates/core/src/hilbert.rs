//! Hilbert symbols over the completions of `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldKind};
use crate::nt;

/// A place of `Q`: the real place or a finite prime (2 allowed).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    RealPlace,
    FinitePrime(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        if nt::is_prime(p) {
            Ok(Place::FinitePrime(p))
        } else {
            Err(Error::InvalidField(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::RealPlace => write!(f, "inf"),
            Place::FinitePrime(p) => write!(f, "{p}"),
        }
    }
}

/// `(a, b)_v` for rational units `a`, `b`: `+1` iff `a x^2 + b y^2 = z^2` has a
/// nontrivial solution over the completion at `v`.
pub fn hilbert_symbol(a: &FieldElement, b: &FieldElement, v: Place) -> Result<i8> {
    let int = |x: &FieldElement| -> Result<BigInt> {
        if x.field().kind() != FieldKind::Rationals {
            return Err(Error::unsupported(x.field(), "Hilbert symbol"));
        }
        let q = x.as_rational().expect("rational backend");
        if q.is_integer() && q.numer().abs() == BigInt::from(1) {
            return Ok(q.numer().clone());
        }
        nt::rational_square_class(q)
    };
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroUnit);
    }
    Ok(hilbert_int(&int(a)?, &int(b)?, v))
}

/// Hilbert symbol of two nonzero integers.
pub(crate) fn hilbert_int(a: &BigInt, b: &BigInt, v: Place) -> i8 {
    match v {
        Place::RealPlace => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::FinitePrime(p) => {
            let (alpha, u) = nt::split_valuation(a, p);
            let (beta, w) = nt::split_valuation(b, p);
            if p == 2 {
                let r = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u64().expect("small");
                let (u8_, w8) = (r(&u), r(&w));
                let eps = |x: u64| u64::from(x % 4 == 3);
                let omega = |x: u64| u64::from(x == 3 || x == 5);
                let e = eps(u8_) * eps(w8) + u64::from(alpha) * omega(w8) + u64::from(beta) * omega(u8_);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let mut s: i8 = if (u64::from(alpha) * u64::from(beta) * ((p - 1) / 2)) % 2 == 1 { -1 } else { 1 };
                if beta % 2 == 1 {
                    s *= nt::legendre(nt::residue(&u, p), p);
                }
                if alpha % 2 == 1 {
                    s *= nt::legendre(nt::residue(&w, p), p);
                }
                s
            }
        }
    }
}
