//! Elementary number theory on machine and big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn is_odd_prime(p: u64) -> bool {
    p > 2 && num_prime::nt_funcs::is_prime64(p)
}

pub fn is_prime(p: u64) -> bool {
    num_prime::nt_funcs::is_prime64(p)
}

/// Odd primes `p <= bound`, ascending.
pub fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    (3..=bound).step_by(2).filter(|&p| is_odd_prime(p)).collect()
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a/p)` for an odd prime `p`; zero when `p | a`.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest quadratic non-residue modulo the odd prime `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a, p) == -1).expect("odd prime has a non-residue")
}

pub fn big_to_u64(n: &BigInt) -> Result<u64> {
    n.abs().to_u64().ok_or_else(|| Error::TooLarge(n.to_string()))
}

/// Prime factorisation of `|n|` (n nonzero).
pub fn factor(n: &BigInt) -> Result<Vec<(u64, usize)>> {
    let m = big_to_u64(n)?;
    Ok(num_prime::nt_funcs::factorize64(m).into_iter().collect())
}

/// Squarefree integer in the square class of the nonzero integer `n` (sign kept).
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let mut out = BigInt::one();
    for (p, e) in factor(n)? {
        if e % 2 == 1 {
            out *= p;
        }
    }
    if n.is_negative() {
        out = -out;
    }
    Ok(out)
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn rational_square_class(q: &BigRational) -> Result<BigInt> {
    squarefree_part(&(q.numer() * q.denom()))
}

/// Product of two squarefree integers reduced to its squarefree part, without factoring.
pub fn squarefree_mul(a: &BigInt, b: &BigInt) -> BigInt {
    let g = a.gcd(b);
    a * b / (&g * &g)
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Exact square root of a rational, if one exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    if is_square_int(n) && is_square_int(d) {
        Some(BigRational::new(n.sqrt(), d.sqrt()))
    } else {
        None
    }
}

/// p-adic valuation of a nonzero integer and the remaining cofactor.
pub fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    while !m.is_zero() && m.is_multiple_of(&p) {
        m /= &p;
        v += 1;
    }
    (v, m)
}

/// Residue of an integer modulo `p`, in `0..p`.
pub fn residue(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        let sf = |n: i64| squarefree_part(&BigInt::from(n)).unwrap();
        assert_eq!(sf(12), BigInt::from(3));
        assert_eq!(sf(-50), BigInt::from(-2));
        assert_eq!(sf(1), BigInt::from(1));
        assert_eq!(sf(-1), BigInt::from(-1));
        let q = BigRational::new(BigInt::from(4), BigInt::from(9));
        assert_eq!(rational_square_class(&q).unwrap(), BigInt::from(1));
        let q = BigRational::new(BigInt::from(-3), BigInt::from(8));
        assert_eq!(rational_square_class(&q).unwrap(), BigInt::from(-6));
    }

    #[test]
    fn squarefree_products() {
        let m = squarefree_mul(&BigInt::from(6), &BigInt::from(-10));
        assert_eq!(m, BigInt::from(-15));
    }

    #[test]
    fn residues_mod_five() {
        assert_eq!(legendre(1, 5), 1);
        assert_eq!(legendre(4, 5), 1);
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(3, 5), -1);
        assert_eq!(least_nonresidue(5), 2);
        assert_eq!(least_nonresidue(7), 3);
        assert_eq!(odd_primes_up_to(13), vec![3, 5, 7, 11, 13]);
    }

    #[test]
    fn rational_roots() {
        let q = BigRational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(rational_sqrt(&q), Some(BigRational::new(BigInt::from(3), BigInt::from(2))));
        assert_eq!(rational_sqrt(&BigRational::from_integer(2.into())), None);
    }
}
