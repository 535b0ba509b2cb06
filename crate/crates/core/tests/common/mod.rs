//! Independent oracles shared by the integration tests. Nothing here calls the invariant
//! machinery of the library; everything is recomputed from definitions.
#![allow(dead_code, clippy::needless_range_loop)]

use mwk_core::prelude::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn q() -> FieldDescriptor {
    FieldDescriptor::rationals()
}

pub fn qsqrt2() -> FieldDescriptor {
    FieldDescriptor::quadratic(2).unwrap()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|s| s >= 0 && s * s == n)
}

fn is_rational_square(q: &BigRational) -> bool {
    if q.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(q.numer()) && sq(q.denom())
}

/// Integer in the same square class: `n/d -> n*d`.
fn to_integer_class(q: &BigRational) -> BigInt {
    q.numer() * q.denom()
}

type Matrix = Vec<Vec<BigRational>>;

fn gram(entries: &[BigRational]) -> Matrix {
    let n = entries.len();
    (0..n).map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { BigRational::zero() }).collect()).collect()
}

fn bilinear(g: &Matrix, u: &[BigRational], v: &[BigRational]) -> BigRational {
    let mut s = BigRational::zero();
    for i in 0..u.len() {
        for j in 0..v.len() {
            if !g[i][j].is_zero() {
                s += &u[i] * &g[i][j] * &v[j];
            }
        }
    }
    s
}

/// Kernel of the linear map `x -> (a_1 . x, ..., a_k . x)` over `Q`.
fn kernel(rows: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Diagonalises a symmetric Gram matrix by congruence; returns the nonzero diagonal and
/// whether the form was degenerate.
fn diagonalise(mut g: Matrix) -> Option<Vec<BigRational>> {
    let n = g.len();
    let mut diag = Vec::new();
    let mut alive: Vec<usize> = (0..n).collect();
    while !alive.is_empty() {
        let pivot = alive.iter().copied().find(|&i| !g[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // all diagonal entries vanish: use e_i + e_j with g_ij != 0
                let (i, j) = alive
                    .iter()
                    .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !g[i][j].is_zero())?;
                for k in 0..n {
                    let t = g[j][k].clone();
                    g[i][k] += t;
                }
                for k in 0..n {
                    let t = g[k][j].clone();
                    g[k][i] += t;
                }
                i
            }
        };
        let d = g[pivot][pivot].clone();
        for &k in &alive {
            if k == pivot || g[k][pivot].is_zero() {
                continue;
            }
            let f = &g[k][pivot] / &d;
            for l in 0..n {
                let t = &f * &g[pivot][l];
                g[k][l] -= t;
            }
            for l in 0..n {
                let t = &f * &g[l][pivot];
                g[l][k] -= t;
            }
        }
        diag.push(d);
        alive.retain(|&k| k != pivot);
    }
    Some(diag)
}

/// Small integer vectors of dimension `n`, ordered by support size and then by max norm.
fn candidate_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let width = (2 * bound + 1) as usize;
    let total = width.pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let d = (c % width) as i64 - bound;
                c /= width;
                d
            })
            .collect();
        out.push(v);
    }
    out.sort_by_key(|v| (v.iter().filter(|&&x| x != 0).count(), v.iter().map(|x| x.abs()).max().unwrap_or(0)));
    out
}

/// Decides whether the diagonal rational form is hyperbolic by splitting off hyperbolic
/// planes found through a bounded search for isotropic vectors.
pub fn brute_force_hyperbolic(entries: &[BigRational]) -> bool {
    let n = entries.len();
    if n == 0 {
        return true;
    }
    if n % 2 == 1 {
        return false;
    }
    if n == 2 {
        return is_rational_square(&-(&entries[0] * &entries[1]));
    }
    let ints: Vec<i128> = entries.iter().map(|e| i128::try_from(to_integer_class(e)).expect("small entries")).collect();
    let bound = if n <= 4 { 12 } else { 4 };
    for v in candidate_vectors(n, bound) {
        let value: i128 = v.iter().zip(&ints).map(|(&x, &a)| a * i128::from(x) * i128::from(x)).sum();
        if value != 0 {
            continue;
        }
        // scale back to the original entries: the form with entries `ints` is the original
        // form after the change of basis e_i -> denom_i e_i
        let scaled: Vec<BigRational> = ints.iter().map(|&a| BigRational::from_integer(BigInt::from(a))).collect();
        let g = gram(&scaled);
        let vq: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        let bv: Vec<BigRational> = (0..n).map(|i| &g[i][i] * &vq[i]).collect();
        let Some(k) = (0..n).find(|&i| !bv[i].is_zero()) else { continue };
        let mut w = vec![BigRational::zero(); n];
        w[k] = BigRational::one() / &bv[k];
        let qw = bilinear(&g, &w, &w);
        let half = &qw / BigRational::from_integer(BigInt::from(2));
        for i in 0..n {
            let t = &half * &vq[i];
            w[i] -= t;
        }
        let bw: Vec<BigRational> = (0..n).map(|i| &g[i][i] * &w[i]).collect();
        let basis = kernel(&[bv, bw], n);
        let restricted: Matrix = basis.iter().map(|u| basis.iter().map(|t| bilinear(&g, u, t)).collect()).collect();
        let Some(diag) = diagonalise(restricted) else { return false };
        if diag.len() != n - 2 {
            return false;
        }
        return brute_force_hyperbolic(&diag);
    }
    false
}

/// `(a, b)_v` from the definition: solvability of `a x^2 + b y^2 = z^2` in the completion,
/// detected by primitive solutions modulo a high enough prime power.
pub fn hilbert_oracle(a: i64, b: i64, v: Place) -> i8 {
    match v {
        Place::RealPlace => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::FinitePrime(p) => {
            let m: i64 = if p == 2 { 64 } else { (p * p * p) as i64 };
            let mut square = vec![false; m as usize];
            for z in 0..m {
                square[(z * z % m) as usize] = true;
            }
            let p = p as i64;
            for x in 0..m {
                for y in 0..m {
                    let rhs = (a.rem_euclid(m) * (x * x % m) + b.rem_euclid(m) * (y * y % m)) % m;
                    if !square[rhs as usize] {
                        continue;
                    }
                    // some z with z^2 = rhs; primitive if x, y or z is a unit
                    if x % p != 0 || y % p != 0 {
                        return 1;
                    }
                    if (0..m).any(|z| z % p != 0 && z * z % m == rhs) {
                        return 1;
                    }
                }
            }
            -1
        }
    }
}

/// The spectrum size predicted by the indexing of the classification.
pub fn expected_spectrum_size(orderings: usize, bound: u64) -> usize {
    let odd = (3..=bound).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).count();
    2 * orderings + orderings * odd + odd + 3
}
