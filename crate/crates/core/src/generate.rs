//! Instance generators.
//!
//! Large instances are *implicit*: entries are computed on demand from a
//! keyed permutation, so an `n x n` instance costs O(1) memory and the solver
//! can be benchmarked at sizes whose dense form would not fit in RAM.
//! [`Matrix::materialize`] turns any of them into a dense matrix.

use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::{Matrix, MatrixSource};
use crate::oracle::brute_strict;

pub const NOSADDLE_MAX_TRIES: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("no saddlepoint-free instance found in {0} tries")]
    TooManyTries(usize),
    #[error("{kind} instances need at least {min} rows and columns")]
    TooSmall { kind: &'static str, min: usize },
}

/// SplitMix64 finalizer, used to derive independent seeds from one seed.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Pseudorandom bijection on `0..size`: a four-round Feistel network over
/// the next even power of two, restricted to the domain by cycle walking.
#[derive(Debug, Clone, Copy)]
pub struct KeyedPermutation {
    size: u64,
    half_bits: u32,
    key: u64,
}

impl KeyedPermutation {
    pub fn new(size: u64, key: u64) -> Self {
        assert!(size >= 1);
        let bits = (64 - (size - 1).leading_zeros()).max(2);
        KeyedPermutation {
            size,
            half_bits: bits.div_ceil(2),
            key: mix64(key),
        }
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    fn round(&self, x: u64) -> u64 {
        let mask = (1u64 << self.half_bits) - 1;
        let (mut left, mut right) = (x >> self.half_bits, x & mask);
        for round in 0..4u64 {
            let f = mix64(self.key ^ (round << 58) ^ right) & mask;
            (left, right) = (right, left ^ f);
        }
        (left << self.half_bits) | right
    }

    pub fn apply(&self, x: u64) -> u64 {
        assert!(x < self.size);
        let mut y = self.round(x);
        while y >= self.size {
            y = self.round(y);
        }
        y
    }
}

/// Implicit uniformly shuffled matrix with entries `1..=rows*cols`.
#[derive(Debug, Clone)]
pub struct ImplicitUniform {
    rows: usize,
    cols: usize,
    perm: KeyedPermutation,
}

impl ImplicitUniform {
    pub fn new(rows: usize, cols: usize, seed: u64) -> Self {
        assert!(rows >= 1 && cols >= 1);
        ImplicitUniform {
            rows,
            cols,
            perm: KeyedPermutation::new((rows * cols) as u64, mix64(seed ^ 0x756e_6966)),
        }
    }
}

impl MatrixSource for ImplicitUniform {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn entry(&self, row: usize, col: usize) -> i64 {
        self.perm.apply((row * self.cols + col) as u64) as i64 + 1
    }
}

/// Implicit matrix with pairwise distinct entries and a planted strict
/// saddlepoint.
///
/// Generic cells take the odd values `1, 3, ..., 2N - 1` in shuffled order.
/// The planted cell holds an even value `V` near `N`; the rest of its row
/// holds distinct even values below `V` and the rest of its column distinct
/// even values above `V`, so the planted cell is the strict maximum of its
/// row and strict minimum of its column, hence the unique strict
/// saddlepoint.
#[derive(Debug, Clone)]
pub struct ImplicitPlanted {
    rows: usize,
    cols: usize,
    cell: (usize, usize),
    planted: i64,
    row_step: i64,
    generic: KeyedPermutation,
    row_perm: KeyedPermutation,
    col_perm: KeyedPermutation,
}

impl ImplicitPlanted {
    pub fn new(rows: usize, cols: usize, seed: u64) -> Self {
        assert!(rows >= 1 && cols >= 1);
        let n = (rows * cols) as u64;
        let cell = (
            (mix64(seed ^ 0x0072_6f77) % rows as u64) as usize,
            (mix64(seed ^ 0x0063_6f6c) % cols as u64) as usize,
        );
        let half_space = (cols as u64).max(n / 2);
        ImplicitPlanted {
            rows,
            cols,
            cell,
            planted: 2 * half_space as i64,
            row_step: (half_space / cols as u64) as i64,
            generic: KeyedPermutation::new(n, mix64(seed ^ 0x67656e)),
            row_perm: KeyedPermutation::new(cols as u64, mix64(seed ^ 0x7270)),
            col_perm: KeyedPermutation::new(rows as u64, mix64(seed ^ 0x6370)),
        }
    }

    /// Coordinates of the planted saddlepoint.
    pub fn cell(&self) -> (usize, usize) {
        self.cell
    }

    pub fn planted_value(&self) -> i64 {
        self.planted
    }
}

impl MatrixSource for ImplicitPlanted {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn entry(&self, row: usize, col: usize) -> i64 {
        let (pr, pc) = self.cell;
        match (row == pr, col == pc) {
            (true, true) => self.planted,
            (true, false) => 2 * self.row_perm.apply(col as u64) as i64 * self.row_step,
            (false, true) => {
                self.planted + 2 + 2 * self.col_perm.apply(row as u64) as i64 * self.cols as i64
            }
            (false, false) => 2 * self.generic.apply((row * self.cols + col) as u64) as i64 + 1,
        }
    }
}

/// Dense planted instance and its saddlepoint coordinates.
pub fn planted_matrix(rows: usize, cols: usize, seed: u64) -> (Matrix, (usize, usize)) {
    let source = ImplicitPlanted::new(rows, cols, seed);
    (Matrix::materialize(&source), source.cell())
}

/// Uniformly random permutation of `1..=rows*cols`, row-major.
pub fn uniform_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries: Vec<i64> = (1..=(rows * cols) as i64).collect();
    entries.shuffle(&mut rng);
    Matrix::new(rows, cols, entries).expect("positive dimensions")
}

/// Uniform entries from `1..=max_value`, so duplicates are common.
pub fn small_values_matrix(rows: usize, cols: usize, max_value: i64, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..rows * cols)
        .map(|_| rng.gen_range(1..=max_value))
        .collect();
    Matrix::new(rows, cols, entries).expect("positive dimensions")
}

/// Uniform permutation matrix without a strict saddlepoint, by rejection.
pub fn nosaddle_matrix(rows: usize, cols: usize, seed: u64) -> Result<Matrix, GenerateError> {
    if rows < 2 || cols < 2 {
        return Err(GenerateError::TooSmall {
            kind: "nosaddle",
            min: 2,
        });
    }
    for attempt in 0..NOSADDLE_MAX_TRIES as u64 {
        let m = uniform_matrix(rows, cols, mix64(seed ^ attempt.rotate_left(32)));
        if brute_strict(&m).cells.is_empty() {
            return Ok(m);
        }
    }
    Err(GenerateError::TooManyTries(NOSADDLE_MAX_TRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_strict;
    use std::collections::HashSet;

    #[test]
    fn keyed_permutation_is_bijective() {
        for size in [1u64, 2, 3, 5, 17, 64, 1000, 4097] {
            let p = KeyedPermutation::new(size, size * 31);
            let image: HashSet<u64> = (0..size).map(|x| p.apply(x)).collect();
            assert_eq!(image.len() as u64, size);
            assert!(image.iter().all(|&y| y < size));
        }
    }

    #[test]
    fn planted_is_unique_strict_saddlepoint() {
        for (r, c) in [
            (1, 1),
            (1, 5),
            (5, 1),
            (2, 2),
            (3, 7),
            (8, 8),
            (17, 9),
            (64, 64),
        ] {
            for seed in 0..5 {
                let (m, cell) = planted_matrix(r, c, seed);
                let found = brute_strict(&m).first().map(|x| (x.row, x.col));
                assert_eq!(found, Some(cell), "{r}x{c} seed {seed}");
                let distinct: HashSet<i64> = m.entries().iter().copied().collect();
                assert_eq!(distinct.len(), r * c);
            }
        }
    }

    #[test]
    fn planted_value_is_mid_range() {
        let source = ImplicitPlanted::new(100, 100, 3);
        let below = Matrix::materialize(&source)
            .entries()
            .iter()
            .filter(|&&v| v < source.planted_value())
            .count();
        assert!((3000..7000).contains(&below), "{below}");
    }

    #[test]
    fn uniform_is_deterministic_permutation() {
        let a = uniform_matrix(3, 3, 9);
        assert_eq!(a, uniform_matrix(3, 3, 9));
        let mut e = a.entries().to_vec();
        e.sort();
        assert_eq!(e, (1..=9).collect::<Vec<_>>());

        let u = Matrix::materialize(&ImplicitUniform::new(7, 5, 1));
        let mut e = u.entries().to_vec();
        e.sort();
        assert_eq!(e, (1..=35).collect::<Vec<_>>());
    }

    #[test]
    fn nosaddle_has_none() {
        for seed in 0..20 {
            let m = nosaddle_matrix(4, 6, seed).unwrap();
            assert!(brute_strict(&m).cells.is_empty());
        }
        assert!(nosaddle_matrix(1, 6, 0).is_err());
    }
}
