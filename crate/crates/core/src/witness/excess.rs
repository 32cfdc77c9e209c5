use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::{excess, SignMatrix};

/// Largest order searched exhaustively over all row sign patterns.
pub const EXHAUSTIVE_EXCESS_MAX_ORDER: usize = 8;

/// Outcome of an excess search within one switching class.
#[derive(Clone, Debug, Serialize)]
pub struct ExcessSearch {
    #[serde(skip)]
    pub matrix: SignMatrix,
    pub sigma_initial: i64,
    pub sigma: i64,
    pub exhaustive: bool,
}

struct SwitchState<'a> {
    h: &'a SignMatrix,
    rows: Vec<i8>,
    cols: Vec<i8>,
    /// `sum_j cols[j] h[i][j]`, before the row sign.
    row_sums: Vec<i64>,
    /// `sum_i rows[i] h[i][j]`, before the column sign.
    col_sums: Vec<i64>,
}

impl<'a> SwitchState<'a> {
    fn new(h: &'a SignMatrix, rows: Vec<i8>, cols: Vec<i8>) -> Self {
        let n = h.order();
        let row_sums = (0..n)
            .map(|i| (0..n).map(|j| i64::from(cols[j] * h.get(i, j))).sum())
            .collect();
        let col_sums = (0..n)
            .map(|j| (0..n).map(|i| i64::from(rows[i] * h.get(i, j))).sum())
            .collect();
        Self { h, rows, cols, row_sums, col_sums }
    }

    fn excess(&self) -> i64 {
        self.rows.iter().zip(&self.row_sums).map(|(&r, &s)| i64::from(r) * s).sum()
    }

    fn flip_row(&mut self, i: usize) {
        self.rows[i] = -self.rows[i];
        let r = i64::from(self.rows[i]);
        for (j, s) in self.col_sums.iter_mut().enumerate() {
            *s += 2 * r * i64::from(self.h.get(i, j));
        }
    }

    fn flip_col(&mut self, j: usize) {
        self.cols[j] = -self.cols[j];
        let c = i64::from(self.cols[j]);
        for (i, s) in self.row_sums.iter_mut().enumerate() {
            *s += 2 * c * i64::from(self.h.get(i, j));
        }
    }

    /// First-improvement sweeps over all single row/column flips until a
    /// full sweep finds none.
    fn climb(&mut self) {
        let n = self.h.order();
        loop {
            let mut improved = false;
            for i in 0..n {
                if i64::from(self.rows[i]) * self.row_sums[i] < 0 {
                    self.flip_row(i);
                    improved = true;
                }
            }
            for j in 0..n {
                if i64::from(self.cols[j]) * self.col_sums[j] < 0 {
                    self.flip_col(j);
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
    }

    fn matrix(&self) -> SignMatrix {
        apply_signs(self.h, &self.rows, &self.cols)
    }
}

fn apply_signs(h: &SignMatrix, rows: &[i8], cols: &[i8]) -> SignMatrix {
    SignMatrix::from_fn(h.order(), |i, j| rows[i] * cols[j] * h.get(i, j) > 0)
}

/// Maximum excess over the switching class of `h`, by enumerating row
/// signs; the best column signs follow from the column sums.
pub fn exhaustive_excess(h: &SignMatrix) -> (i64, SignMatrix) {
    let n = h.order();
    assert!(n < 24, "exhaustive excess search is exponential in the order");
    let mut best: Option<(i64, Vec<i8>, Vec<i8>)> = None;
    for mask in 0u32..1 << n {
        let rows: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let sums: Vec<i64> = (0..n)
            .map(|j| (0..n).map(|i| i64::from(rows[i] * h.get(i, j))).sum())
            .collect();
        let sigma: i64 = sums.iter().map(|s| s.abs()).sum();
        if best.as_ref().is_none_or(|b| sigma > b.0) {
            let cols = sums.iter().map(|&s| if s < 0 { -1 } else { 1 }).collect();
            best = Some((sigma, rows, cols));
        }
    }
    let (sigma, rows, cols) = best.expect("at least one sign pattern");
    (sigma, apply_signs(h, &rows, &cols))
}

/// Hill-climbs the excess over row/column negations of `h`: one climb from
/// `h` itself, then `restarts` climbs from seeded random sign patterns.
/// Orders up to [`EXHAUSTIVE_EXCESS_MAX_ORDER`] are finished exhaustively.
///
/// The result is switching-equivalent to `h`, never has smaller excess,
/// and depends only on `(h, restarts, seed)`.
pub fn search_excess(h: &SignMatrix, restarts: usize, seed: u64) -> ExcessSearch {
    let n = h.order();
    let sigma_initial = excess(h);
    let mut state = SwitchState::new(h, vec![1; n], vec![1; n]);
    state.climb();
    let mut best_sigma = state.excess();
    let mut best = state.matrix();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let rows = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        let cols = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        let mut s = SwitchState::new(h, rows, cols);
        s.climb();
        let sigma = s.excess();
        if sigma > best_sigma {
            best_sigma = sigma;
            best = s.matrix();
        }
    }

    let exhaustive = n <= EXHAUSTIVE_EXCESS_MAX_ORDER;
    if exhaustive {
        let (sigma, m) = exhaustive_excess(h);
        if sigma > best_sigma {
            best_sigma = sigma;
            best = m;
        }
    }
    debug_assert_eq!(excess(&best), best_sigma);
    ExcessSearch { matrix: best, sigma_initial, sigma: best_sigma, exhaustive }
}

/// The matrix of [`search_excess`].
pub fn maximize_excess(h: &SignMatrix, restarts: usize, seed: u64) -> SignMatrix {
    search_excess(h, restarts, seed).matrix
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{paley_one, paley_two, sylvester};
    use crate::exact::is_hadamard;

    /// Independent oracle: every row and column sign pattern.
    fn brute_force_excess(h: &SignMatrix) -> i64 {
        let n = h.order();
        (0u64..1 << (2 * n))
            .map(|mask| {
                let mut m = h.clone();
                for i in 0..n {
                    if mask >> i & 1 == 1 {
                        m.negate_row(i);
                    }
                    if mask >> (n + i) & 1 == 1 {
                        m.negate_col(i);
                    }
                }
                excess(&m)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn sylvester_maxima() {
        let s4 = sylvester(2, 64).unwrap();
        let s8 = sylvester(3, 64).unwrap();
        assert_eq!(brute_force_excess(&s4), 8);
        assert_eq!(brute_force_excess(&s8), 20);
        assert_eq!(search_excess(&s4, 32, 0).sigma, 8);
        assert_eq!(search_excess(&s8, 32, 0).sigma, 20);
        // The local search alone already reaches both maxima.
        assert_eq!(search_excess(&s8, 32, 0).sigma, exhaustive_excess(&s8).0);
    }

    #[test]
    fn preserves_hadamard_and_never_decreases() {
        for h in [paley_one(11).unwrap(), paley_two(5).unwrap(), paley_one(19).unwrap(), sylvester(4, 64).unwrap()] {
            for seed in 0..4 {
                let s = search_excess(&h, 8, seed);
                assert!(is_hadamard(&s.matrix));
                assert!(s.sigma >= s.sigma_initial);
                assert_eq!(excess(&s.matrix), s.sigma);
            }
        }
    }

    #[test]
    fn idempotent_on_local_optimum() {
        let h = paley_one(11).unwrap();
        let once = search_excess(&h, 16, 3);
        let twice = search_excess(&once.matrix, 0, 0);
        assert_eq!(twice.sigma, once.sigma);
    }

    #[test]
    fn deterministic_for_seed() {
        let h = paley_one(23).unwrap();
        assert_eq!(maximize_excess(&h, 10, 7), maximize_excess(&h, 10, 7));
    }

    #[test]
    fn meets_floor_up_to_order_20() {
        for (h, floor) in [(4usize, 6.383), (8, 18.06), (12, 33.17), (16, 51.07), (20, 71.37)] {
            let reg = crate::orders::OrderRegistry::build(64, crate::orders::RegistryMode::Constructive).unwrap();
            let s = search_excess(&reg.realize(h).unwrap(), 32, 0);
            assert!(s.sigma as f64 >= floor, "h={h} sigma={}", s.sigma);
        }
    }
}
