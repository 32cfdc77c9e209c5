//! Exact integer matrix arithmetic on `{+1,-1}` and `{0,1}` matrices.

mod det;
mod matrix;

pub use det::{bareiss_det, det_exact, ln_abs, pivot_positions};
pub use matrix::{BinMatrix, IntegerMatrix, SignMatrix};

use crate::error::{Error, Result};

/// `M * M^T == order * I`, checked in exact integer arithmetic.
pub fn is_hadamard(m: &SignMatrix) -> bool {
    let n = m.order();
    let g = m.gram();
    (0..n).all(|i| (0..n).all(|k| g[i * n + k] == if i == k { n as i64 } else { 0 }))
}

/// Normalizes `a` so its first row and column are all `+1`, drops them, and
/// maps `-1 -> 1`, `+1 -> 0` in the remaining block.
///
/// `|det a| = 2^(n-1) * |det beta_map(a)|`.
pub fn beta_map(a: &SignMatrix) -> Result<BinMatrix> {
    let n = a.order();
    if n < 2 {
        return Err(Error::Precondition("beta_map needs order >= 2".into()));
    }
    let mut m = a.clone();
    for j in 0..n {
        if m.get(0, j) < 0 {
            m.negate_col(j);
        }
    }
    for i in 1..n {
        if m.get(i, 0) < 0 {
            m.negate_row(i);
        }
    }
    Ok(BinMatrix::from_fn(n - 1, |i, j| m.get(i + 1, j + 1) < 0))
}

/// Inverse of [`beta_map`]: borders with an all-`+1` first row and column
/// and maps `1 -> -1`, `0 -> +1`.
pub fn beta_inverse(b: &BinMatrix) -> SignMatrix {
    SignMatrix::from_fn(b.order() + 1, |i, j| i == 0 || j == 0 || b.get(i - 1, j - 1) == 0)
}

/// Sum of all entries.
pub fn excess(a: &SignMatrix) -> i64 {
    a.entries().iter().map(|&e| i64::from(e)).sum()
}

fn complement_of(idx: &[usize], h: usize) -> Vec<usize> {
    (0..h).filter(|i| !idx.contains(i)).collect()
}

fn validate_index_set(idx: &[usize], h: usize, what: &str) -> Result<()> {
    if idx.iter().any(|&i| i >= h) {
        return Err(Error::Precondition(format!("{what} index out of range for order {h}")));
    }
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != idx.len() {
        return Err(Error::Precondition(format!("{what} indices must be distinct")));
    }
    Ok(())
}

/// Splits `h` into `h[rows, cols]` (order `d`) and the block on the
/// complementary rows and columns (order `order - d`).
///
/// Index order within each part follows the original matrix; `rows` and
/// `cols` are sorted before extraction.
pub fn complementary_split(
    h: &SignMatrix,
    rows: &[usize],
    cols: &[usize],
) -> Result<(SignMatrix, SignMatrix)> {
    let n = h.order();
    let d = rows.len();
    if d != cols.len() || d == 0 || d >= n {
        return Err(Error::Precondition(format!(
            "need 0 < |rows| = |cols| < {n}, got {} and {}",
            rows.len(),
            cols.len()
        )));
    }
    validate_index_set(rows, n, "row")?;
    validate_index_set(cols, n, "column")?;
    let mut r = rows.to_vec();
    let mut c = cols.to_vec();
    r.sort_unstable();
    c.sort_unstable();
    let minor = h.submatrix(&r, &c);
    let complement = h.submatrix(&complement_of(&r, n), &complement_of(&c, n));
    Ok((minor, complement))
}

/// Sorted row and column index sets of size `d` whose minor is nonsingular,
/// taken from the first `d` pivots of a fraction-free elimination with
/// row-major pivot search. Fails if `h` is singular.
pub fn nonsingular_complement(h: &SignMatrix, d: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = h.order();
    if d == 0 || d >= n {
        return Err(Error::Precondition(format!("need 0 < d < {n}, got {d}")));
    }
    let pivots = det::pivots_exact(h);
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    let mut rows: Vec<usize> = pivots[..d].iter().map(|p| p.0).collect();
    let mut cols: Vec<usize> = pivots[..d].iter().map(|p| p.1).collect();
    rows.sort_unstable();
    cols.sort_unstable();
    Ok((rows, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    fn h2() -> SignMatrix {
        SignMatrix::from_rows(&[vec![1, 1], vec![1, -1]]).unwrap()
    }

    fn syl4() -> SignMatrix {
        SignMatrix::parse("4\n++++\n+-+-\n++--\n+--+\n").unwrap()
    }

    fn all_submatrix_dets(m: &SignMatrix, d: usize) -> Vec<BigInt> {
        fn subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|s| s.count_ones() as usize == d)
                .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
                .collect()
        }
        let n = m.order();
        let mut out = Vec::new();
        for r in subsets(n, d) {
            for c in subsets(n, d) {
                out.push(det_exact(&m.submatrix(&r, &c)));
            }
        }
        out
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_exact(&SignMatrix::all_ones(1)), BigInt::from(1));
        assert_eq!(det_exact(&h2()), BigInt::from(-2));
        let d = det_exact(&syl4());
        assert_eq!(&d * &d, BigInt::from(256));
        assert_eq!(d.abs(), BigInt::from(16));
    }

    #[test]
    fn hadamard_examples() {
        assert!(is_hadamard(&SignMatrix::all_ones(1)));
        assert!(is_hadamard(&syl4()));
        assert!(!is_hadamard(&SignMatrix::all_ones(3)));
        assert!(!is_hadamard(&SignMatrix::all_ones(2)));
    }

    #[test]
    fn beta_examples() {
        let b = beta_map(&h2()).unwrap();
        assert_eq!(b, BinMatrix::new(1, vec![1]).unwrap());
        let b4 = beta_map(&syl4()).unwrap();
        assert_eq!(b4.order(), 3);
        assert_eq!(det_exact(&b4).abs(), BigInt::from(2));

        let mut twin = syl4();
        for j in 0..4 {
            let v = twin.get(1, j) > 0;
            twin.set(2, j, v);
        }
        assert!(det_exact(&beta_map(&twin).unwrap()).is_zero());
        assert!(beta_map(&SignMatrix::all_ones(1)).is_err());
    }

    #[test]
    fn beta_inverse_examples() {
        let a = beta_inverse(&BinMatrix::new(1, vec![1]).unwrap());
        assert_eq!(a.order(), 2);
        assert_eq!(det_exact(&a).abs(), BigInt::from(2));
        let a = beta_inverse(&BinMatrix::identity(3));
        assert_eq!(det_exact(&a).abs(), BigInt::from(8));
        assert!(det_exact(&beta_inverse(&BinMatrix::zeros(2))).is_zero());
    }

    #[test]
    fn excess_examples() {
        assert_eq!(excess(&SignMatrix::all_ones(2)), 4);
        assert_eq!(excess(&h2()), 2);
        // Exhaustive row/column negation of the order-4 Sylvester matrix.
        let s = syl4();
        let best = (0u32..256)
            .map(|mask| {
                let mut m = s.clone();
                for i in 0..4 {
                    if mask >> i & 1 == 1 {
                        m.negate_row(i);
                    }
                    if mask >> (4 + i) & 1 == 1 {
                        m.negate_col(i);
                    }
                }
                excess(&m)
            })
            .max()
            .unwrap();
        assert_eq!(best, 8);
    }

    #[test]
    fn split_examples() {
        let (m, c) = complementary_split(&h2(), &[0], &[0]).unwrap();
        assert_eq!(m.get(0, 0), 1);
        assert_eq!(c.get(0, 0), -1);

        let (m, c) = complementary_split(&syl4(), &[3], &[3]).unwrap();
        assert_eq!(m.order(), 1);
        assert_eq!(det_exact(&c).abs(), BigInt::from(4));

        let (m, c) = complementary_split(&syl4(), &[0, 1], &[0, 1]).unwrap();
        assert_eq!(det_exact(&m).abs(), det_exact(&c).abs());
    }

    #[test]
    fn split_rejects_bad_indices() {
        let s = syl4();
        assert!(complementary_split(&s, &[0, 0], &[0, 1]).is_err());
        assert!(complementary_split(&s, &[4], &[0]).is_err());
        assert!(complementary_split(&s, &[0, 1], &[0]).is_err());
        assert!(complementary_split(&s, &[], &[]).is_err());
        assert!(complementary_split(&s, &[0, 1, 2, 3], &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn nonsingular_complement_examples() {
        let s = syl4();
        assert_eq!(nonsingular_complement(&s, 1).unwrap(), (vec![0], vec![0]));

        // Every nonsingular 2x2 minor of the order-4 Sylvester matrix has |det| 2.
        let two: Vec<BigInt> = all_submatrix_dets(&s, 2).into_iter().filter(|d| !d.is_zero()).collect();
        assert!(two.iter().all(|d| d.abs() == BigInt::from(2)));
        let (r, c) = nonsingular_complement(&s, 2).unwrap();
        assert_eq!(det_exact(&s.submatrix(&r, &c)).abs(), BigInt::from(2));

        let three: Vec<BigInt> = all_submatrix_dets(&s, 3);
        assert!(three.iter().all(|d| d.abs() == BigInt::from(4)));
        let (r, c) = nonsingular_complement(&s, 3).unwrap();
        assert_eq!(det_exact(&s.submatrix(&r, &c)).abs(), BigInt::from(4));

        assert!(matches!(nonsingular_complement(&SignMatrix::all_ones(4), 2), Err(Error::Singular)));
        assert!(nonsingular_complement(&s, 4).is_err());
    }

    #[test]
    fn text_format() {
        let s = syl4();
        assert_eq!(s.to_text(), "4\n++++\n+-+-\n++--\n+--+\n");
        assert_eq!(SignMatrix::parse(&s.to_text()).unwrap(), s);
        assert_eq!(SignMatrix::parse("2\n++\n+-").unwrap(), h2());
        assert!(SignMatrix::parse("2\n+++\n+-\n").is_err());
        assert!(SignMatrix::parse("2\n++\n").is_err());
        assert!(SignMatrix::parse("2\n++\n+-\n++\n").is_err());
        assert!(SignMatrix::parse("2\n+x\n+-\n").is_err());
        assert!(SignMatrix::parse("0\n").is_err());
        let b = BinMatrix::parse("2\n10\n01\n").unwrap();
        assert_eq!(b, BinMatrix::identity(2));
        assert_eq!(b.to_text(), "2\n10\n01\n");
        assert!(BinMatrix::parse("2\n1+\n01\n").is_err());
    }

    fn sign_matrix(lo: usize, hi: usize) -> impl Strategy<Value = SignMatrix> {
        (lo..=hi).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n)
                .prop_map(move |bits| SignMatrix::from_fn(n, |i, j| bits[i * n + j]))
        })
    }

    proptest! {
        #[test]
        fn beta_identity(a in sign_matrix(2, 8)) {
            let n = a.order();
            let lhs = det_exact(&a).abs();
            let rhs = det_exact(&beta_map(&a).unwrap()).abs() << (n - 1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn beta_round_trip(bits in proptest::collection::vec(any::<bool>(), 49), n in 1usize..8) {
            let b = BinMatrix::from_fn(n, |i, j| bits[i * 7 + j]);
            let a = beta_inverse(&b);
            prop_assert_eq!(det_exact(&a).abs(), det_exact(&b).abs() << n);
            prop_assert_eq!(det_exact(&beta_map(&a).unwrap()).abs(), det_exact(&b).abs());
        }

        #[test]
        fn det_divisible_by_power_of_two(a in sign_matrix(1, 9)) {
            let d = det_exact(&a);
            let unit = BigInt::from(1) << (a.order() - 1);
            prop_assert!((d % unit).is_zero());
        }

        #[test]
        fn text_round_trip(a in sign_matrix(1, 9)) {
            prop_assert_eq!(SignMatrix::parse(&a.to_text()).unwrap(), a);
        }
    }
}
