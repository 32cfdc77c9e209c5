//! Hadamard matrices from the Sylvester, Paley I, Paley II and Kronecker
//! constructions, over prime fields only.

use crate::error::{Error, Result};
use crate::exact::{is_hadamard, SignMatrix};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = u128::from(m);
    let mut b = u128::from(base) % m128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a | p)` by Euler's criterion.
pub fn quadratic_character(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if mod_pow(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

fn character_table(p: u64) -> Result<Vec<i8>> {
    (0..p as i64).map(|a| quadratic_character(a, p)).collect()
}

/// The `2^k` Sylvester matrix, the `k`-fold Kronecker power of `[[+,+],[+,-]]`.
pub fn sylvester(k: u32, cap: usize) -> Result<SignMatrix> {
    let order = 1usize
        .checked_shl(k)
        .filter(|&o| o <= cap && k < usize::BITS)
        .ok_or(Error::CapExceeded { order: 1usize.checked_shl(k).unwrap_or(usize::MAX), cap })?;
    Ok(SignMatrix::from_fn(order, |i, j| (i & j).count_ones() % 2 == 0))
}

/// Paley I: order `p + 1` for a prime `p ≡ 3 (mod 4)`.
///
/// `H = I + S` with `S` the skew conference matrix bordering the Jacobsthal
/// matrix `Q[x][y] = chi(y - x)`. The first row is all `+1`.
pub fn paley_one(p: u64) -> Result<SignMatrix> {
    if p % 4 != 3 {
        return Err(Error::Precondition(format!("paley_one needs p ≡ 3 mod 4, got {p}")));
    }
    let chi = character_table(p)?;
    let n = p as usize + 1;
    Ok(SignMatrix::from_fn(n, |i, j| match (i, j) {
        (0, _) => true,
        (_, 0) => false,
        _ if i == j => true,
        _ => chi[(j + p as usize - i) % p as usize] > 0,
    }))
}

/// Paley II: order `2(p + 1)` for a prime `p ≡ 1 (mod 4)`.
///
/// Each entry `c` of the symmetric conference matrix becomes a 2x2 block:
/// `c * [[+,-],[-,-]]` off the diagonal and `[[+,+],[+,-]]` on it. Columns
/// are then negated so the first row is all `+1`.
pub fn paley_two(p: u64) -> Result<SignMatrix> {
    if p % 4 != 1 {
        return Err(Error::Precondition(format!("paley_two needs p ≡ 1 mod 4, got {p}")));
    }
    let chi = character_table(p)?;
    let q = p as usize;
    let conference = |x: usize, y: usize| -> i8 {
        match (x, y) {
            (0, 0) => 0,
            (0, _) | (_, 0) => 1,
            _ => chi[(y + q - x) % q],
        }
    };
    const ZERO_BLOCK: [[i8; 2]; 2] = [[1, 1], [1, -1]];
    const UNIT_BLOCK: [[i8; 2]; 2] = [[1, -1], [-1, -1]];
    let mut h = SignMatrix::from_fn(2 * (q + 1), |i, j| {
        let c = conference(i / 2, j / 2);
        let v = if c == 0 { ZERO_BLOCK[i % 2][j % 2] } else { c * UNIT_BLOCK[i % 2][j % 2] };
        v > 0
    });
    for j in 0..h.order() {
        if h.get(0, j) < 0 {
            h.negate_col(j);
        }
    }
    Ok(h)
}

/// Kronecker product of two sign matrices, without any Hadamard check.
pub fn kronecker_product(a: &SignMatrix, b: &SignMatrix) -> SignMatrix {
    let nb = b.order();
    SignMatrix::from_fn(a.order() * nb, |i, j| a.get(i / nb, j / nb) * b.get(i % nb, j % nb) > 0)
}

/// Kronecker product of two Hadamard matrices.
pub fn kronecker(a: &SignMatrix, b: &SignMatrix, cap: usize) -> Result<SignMatrix> {
    let order = a.order() * b.order();
    if order > cap {
        return Err(Error::CapExceeded { order, cap });
    }
    if !is_hadamard(a) || !is_hadamard(b) {
        return Err(Error::NotHadamard);
    }
    Ok(kronecker_product(a, b))
}
