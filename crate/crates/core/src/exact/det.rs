use num_bigint::BigInt;

use super::matrix::IntegerMatrix;
use crate::ExactScalar;

/// Fraction-free (Bareiss) determinant.
///
/// The pivot for column `k` is the first nonzero entry at or below the
/// diagonal. Returns `None` only if a fixed-width `T` overflows.
pub fn bareiss_det<T: ExactScalar>(mut a: Vec<Vec<T>>) -> Option<T> {
    let n = a.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Some(T::zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let t = pivot.checked_mul(&row[j])?.checked_sub(&lead.checked_mul(&pivot_row[j])?)?;
                row[j] = t.exact_div(&prev);
            }
            row[k] = T::zero();
        }
        prev = pivot.clone();
    }
    let d = a[n - 1][n - 1].clone();
    Some(if negate { -d } else { d })
}

/// Exact determinant of any integer matrix.
///
/// Runs in `i128` first and redoes the elimination in [`BigInt`] on overflow.
pub fn det_exact<M: IntegerMatrix + ?Sized>(m: &M) -> BigInt {
    if let Some(d) = bareiss_det::<i128>(m.to_rows()) {
        return BigInt::from(d);
    }
    bareiss_det::<BigInt>(m.to_rows()).expect("BigInt arithmetic cannot overflow")
}

/// Pivot positions `(row, col)` of a fraction-free elimination with full
/// pivoting, in elimination order and in original indices.
///
/// At each step the pivot is the first nonzero entry of the remaining
/// submatrix in row-major order. The number of pivots is the rank, and the
/// first `d` pivots index a nonsingular `d x d` minor.
pub fn pivot_positions<T: ExactScalar>(mut a: Vec<Vec<T>>) -> Option<Vec<(usize, usize)>> {
    let n = a.len();
    let mut row_ids: Vec<usize> = (0..n).collect();
    let mut col_ids: Vec<usize> = (0..n).collect();
    let mut prev = T::one();
    let mut pivots = Vec::new();
    for k in 0..n {
        let found = (k..n).find_map(|i| (k..n).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)));
        let Some((pi, pj)) = found else { break };
        a.swap(k, pi);
        row_ids.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            col_ids.swap(k, pj);
        }
        pivots.push((row_ids[k], col_ids[k]));
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let t = pivot.checked_mul(&row[j])?.checked_sub(&lead.checked_mul(&pivot_row[j])?)?;
                row[j] = t.exact_div(&prev);
            }
            row[k] = T::zero();
        }
        prev = pivot.clone();
    }
    Some(pivots)
}

pub(crate) fn pivots_exact<M: IntegerMatrix + ?Sized>(m: &M) -> Vec<(usize, usize)> {
    if let Some(p) = pivot_positions::<i128>(m.to_rows()) {
        return p;
    }
    pivot_positions::<BigInt>(m.to_rows()).expect("BigInt arithmetic cannot overflow")
}

/// Natural logarithm of `|x|`, accurate for integers far beyond `f64` range.
pub fn ln_abs(x: &BigInt) -> f64 {
    use num_traits::{Signed, ToPrimitive};
    let x = x.abs();
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = &x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}
