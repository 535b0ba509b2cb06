//! Exact Milnor-Witt K-theory of concrete fields.
//!
//! The ring `K^MW_*(F)` is modelled as the pullback of `L^* = ⊕ I^n η^{-n}` (built from the
//! Witt ring) and Milnor K-theory over the associated graded ring `Gr_I`. On top of that
//! model the crate decides membership in every homogeneous prime ideal, enumerates the
//! spectrum up to a bound on odd primes, and computes the inclusion poset.
//!
//! ```
//! use mwk_core::prelude::*;
//!
//! let q = FieldDescriptor::rationals();
//! let h = evaluate_str(q, "(2 + eta*[-1]) * eta").unwrap();
//! assert!(h.is_zero().unwrap());
//! ```

pub mod error;
pub mod field;
pub mod hilbert;
pub mod kmw;
pub mod lstar;
pub mod milnor;
mod nt;
pub mod sampling;
pub mod spectrum;
pub mod witt;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::field::{FieldDescriptor, FieldElement, FieldKind, Ordering, OrderingTag, Sign};
    pub use crate::hilbert::{hilbert_symbol, Place};
    pub use crate::kmw::{evaluate, evaluate_str, KmwElement, KmwExpr};
    pub use crate::lstar::{LPrime, LStarElement, RElement};
    pub use crate::milnor::{GrIClass, MilnorElement, MilnorPrime};
    pub use crate::spectrum::{PrimeDescriptor, SpectrumView};
    pub use crate::witt::{pfister, DiagonalForm, GwClass, WittClass};
}

/// Odd primes up to `bound`, ascending.
pub fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    nt::odd_primes_up_to(bound)
}
