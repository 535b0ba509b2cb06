//! Seeded random units and homogeneous expressions for the sampling harnesses.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldDescriptor, FieldElement, FieldKind};
use crate::kmw::KmwExpr;

/// Deterministic generator of test data over one field.
#[derive(Clone, Debug)]
pub struct Sampler {
    field: FieldDescriptor,
    rng: ChaCha8Rng,
}

const SMALL: [i64; 14] = [1, 2, 3, 5, 6, 7, 10, 11, 13, 15, 17, 21, 30, 35];

impl Sampler {
    pub fn new(field: FieldDescriptor, seed: u64) -> Self {
        Sampler { field, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// A seed for an independent sub-stream.
    pub fn fork(&mut self) -> u64 {
        self.rng.gen()
    }

    fn small_rational(&mut self) -> BigRational {
        let n = *SMALL.choose(&mut self.rng).expect("nonempty");
        let d = if self.rng.gen_bool(0.25) { *[2i64, 3, 4, 5, 9].choose(&mut self.rng).expect("nonempty") } else { 1 };
        let s = if self.rng.gen_bool(0.5) { -1 } else { 1 };
        BigRational::new(BigInt::from(s * n), BigInt::from(d))
    }

    /// A random nonzero element.
    pub fn unit(&mut self) -> FieldElement {
        let field = self.field;
        match field.kind() {
            FieldKind::PrimeField(p) => field.int(self.rng.gen_range(1..p) as i64),
            FieldKind::Rationals | FieldKind::RealClosedModel => field.rat(self.small_rational()),
            FieldKind::QuadraticReal(_) => loop {
                let a = BigInt::from(self.rng.gen_range(-6i64..=6));
                let b = BigInt::from(self.rng.gen_range(-3i64..=3));
                let x = field.quad(a.into(), b.into());
                if !x.is_zero() {
                    break x;
                }
            },
        }
    }

    /// A random unit `a` with `a ≠ 1`, paired with `1 - a`.
    pub fn steinberg_pair(&mut self) -> (FieldElement, FieldElement) {
        let one = self.field.int(1);
        loop {
            let a = self.unit();
            if a.is_one() {
                continue;
            }
            let b = one.sub(&a).expect("same field");
            return (a, b);
        }
    }

    /// A degree in `[-3, 3]`.
    pub fn degree(&mut self) -> i32 {
        self.rng.gen_range(-3..=3)
    }

    /// A small nonzero coefficient.
    fn coefficient(&mut self) -> i64 {
        *[-3i64, -2, -1, 1, 1, 2, 3].choose(&mut self.rng).expect("nonempty")
    }

    /// A random product of `k` brackets and `k - n` copies of `η`, in shuffled order.
    fn monomial(&mut self, n: i32) -> KmwExpr {
        let brackets = n.max(0) + i32::from(self.rng.gen_bool(0.3));
        let etas = brackets - n;
        let mut factors: Vec<KmwExpr> = (0..brackets).map(|_| KmwExpr::bracket(self.unit())).collect();
        factors.extend((0..etas).map(|_| KmwExpr::Eta));
        factors.shuffle(&mut self.rng);
        if self.rng.gen_bool(0.2) {
            factors.push(KmwExpr::unit_form(self.unit()));
        }
        let c = self.coefficient();
        let word = factors.into_iter().reduce(|a, b| a * b);
        match word {
            Some(w) if c == 1 => w,
            Some(w) => KmwExpr::int(c) * w,
            None => KmwExpr::int(c),
        }
    }

    /// A random expression homogeneous of degree `n`: a sum of one or two monomials.
    pub fn homogeneous(&mut self, n: i32) -> KmwExpr {
        let first = self.monomial(n);
        if self.rng.gen_bool(0.4) {
            first + self.monomial(n)
        } else {
            first
        }
    }

    /// A random expression of random degree in `[-3, 3]`, with its degree.
    pub fn homogeneous_any(&mut self) -> (i32, KmwExpr) {
        let n = self.degree();
        (n, self.homogeneous(n))
    }

    /// A random symbol `[a_1, ..., a_n]` as a list of units.
    pub fn symbol(&mut self, n: usize) -> Vec<FieldElement> {
        (0..n).map(|_| self.unit()).collect()
    }

    pub fn gen_range(&mut self, range: std::ops::RangeInclusive<i64>) -> i64 {
        self.rng.gen_range(range)
    }

    pub fn gen_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }
}
