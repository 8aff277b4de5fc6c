//! Matrix storage, instrumented entry access and live submatrix views.
//!
//! Every algorithm in this crate reads entries through a [`CountingAccess`],
//! which counts entry reads and comparisons. Ties between equal values are
//! broken by comparing [`LexKey`]s, i.e. `(value, row, col)` triples, which
//! turns any matrix into one with pairwise distinct entries without storing
//! a second copy.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("token {position}: {reason} ({token:?})")]
    Parse {
        position: usize,
        token: String,
        reason: &'static str,
    },
    #[error("expected {expected} entries after the dimensions, found {found}")]
    WrongTokenCount { expected: usize, found: usize },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("entry buffer has length {len}, expected {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("view compaction would remove every {0}")]
    DegenerateView(&'static str),
}

/// Read-only source of matrix entries.
///
/// Dense [`Matrix`] values implement it, as do the implicit instances in
/// [`crate::generate`] that compute entries on demand so the benchmarks can
/// run on matrices far larger than memory.
pub trait MatrixSource {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn entry(&self, row: usize, col: usize) -> i64;
}

impl<T: MatrixSource + ?Sized> MatrixSource for &T {
    fn rows(&self) -> usize {
        (**self).rows()
    }
    fn cols(&self) -> usize {
        (**self).cols()
    }
    fn entry(&self, row: usize, col: usize) -> i64 {
        (**self).entry(row, col)
    }
}

/// Dense row-major matrix of `i64` entries.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimension { rows, cols });
        }
        if rows.checked_mul(cols) != Some(entries.len()) {
            return Err(MatrixError::ShapeMismatch {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows. Panics on ragged or empty input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Matrix::new(rows.len(), cols, entries).expect("nonempty rectangular rows")
    }

    /// Copies every entry of `source` into a dense matrix.
    pub fn materialize<S: MatrixSource + ?Sized>(source: &S) -> Self {
        let (rows, cols) = (source.rows(), source.cols());
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(source.entry(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Parses the whitespace-separated text format: `rows cols e00 e01 ...`.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let mut tokens = text.split_whitespace().enumerate();
        let mut dimension = |what: &'static str| -> Result<usize, MatrixError> {
            let (position, token) = tokens.next().ok_or(MatrixError::Parse {
                position: 0,
                token: String::new(),
                reason: what,
            })?;
            let value: i64 = token.parse().map_err(|_| MatrixError::Parse {
                position,
                token: token.to_string(),
                reason: "not a decimal integer",
            })?;
            if value <= 0 {
                return Err(MatrixError::Parse {
                    position,
                    token: token.to_string(),
                    reason: "dimension must be positive",
                });
            }
            usize::try_from(value).map_err(|_| MatrixError::Parse {
                position,
                token: token.to_string(),
                reason: "dimension too large",
            })
        };
        let rows = dimension("missing row count")?;
        let cols = dimension("missing column count")?;
        let expected = rows.checked_mul(cols).ok_or(MatrixError::Parse {
            position: 1,
            token: cols.to_string(),
            reason: "dimension product overflows",
        })?;
        let mut entries = Vec::with_capacity(expected.min(1 << 24));
        for (position, token) in tokens {
            let value: i64 = token.parse().map_err(|_| MatrixError::Parse {
                position,
                token: token.to_string(),
                reason: "not a signed 64-bit decimal integer",
            })?;
            entries.push(value);
        }
        if entries.len() != expected {
            return Err(MatrixError::WrongTokenCount {
                expected,
                found: entries.len(),
            });
        }
        Matrix::new(rows, cols, entries)
    }

    /// Serializes to the text format: dimensions on the first line, then one
    /// line per row. `Matrix::parse(&m.to_text())` reproduces `m` exactly.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(i64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl MatrixSource for Matrix {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.cols + col]
    }
}

impl FromStr for Matrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Matrix::parse(s)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i64]> = (0..self.rows).map(|r| self.row(r)).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("entries", &rows)
            .finish()
    }
}

/// A matrix cell lifted to `(value, row, col)`, ordered lexicographically.
///
/// Two keys taken from the same matrix compare equal only when they name the
/// same cell, so the derived order is a strict total order on cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexKey {
    pub value: i64,
    pub row: usize,
    pub col: usize,
}

impl LexKey {
    pub fn new(value: i64, row: usize, col: usize) -> Self {
        LexKey { value, row, col }
    }
}

/// Entry-read and comparison counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub entry_reads: u64,
    pub comparisons: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, rhs: Self) {
        self.entry_reads += rhs.entry_reads;
        self.comparisons += rhs.comparisons;
    }
}

/// Instrumented access to a matrix: the only path by which the solver reads
/// entries or compares them.
pub struct CountingAccess<'a, S: MatrixSource + ?Sized> {
    source: &'a S,
    counters: Counters,
}

impl<'a, S: MatrixSource + ?Sized> CountingAccess<'a, S> {
    pub fn new(source: &'a S) -> Self {
        CountingAccess {
            source,
            counters: Counters::default(),
        }
    }

    pub fn source(&self) -> &'a S {
        self.source
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn rows(&self) -> usize {
        self.source.rows()
    }

    pub fn cols(&self) -> usize {
        self.source.cols()
    }

    /// Reads one raw entry.
    pub fn read(&mut self, row: usize, col: usize) -> i64 {
        self.counters.entry_reads += 1;
        self.source.entry(row, col)
    }

    /// Reads one entry as a lexicographic key.
    pub fn key(&mut self, row: usize, col: usize) -> LexKey {
        LexKey::new(self.read(row, col), row, col)
    }

    pub fn lex_compare(&mut self, a: &LexKey, b: &LexKey) -> Ordering {
        self.counters.comparisons += 1;
        a.cmp(b)
    }

    pub fn compare_values(&mut self, a: i64, b: i64) -> Ordering {
        self.counters.comparisons += 1;
        a.cmp(&b)
    }
}

/// Live submatrix: the surviving original row and column indices of a base
/// matrix, each in increasing order. The base itself is held by the
/// [`CountingAccess`] the view is used with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixView {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MatrixView {
    pub fn full(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty view");
        MatrixView {
            rows: (0..rows).collect(),
            cols: (0..cols).collect(),
        }
    }

    /// View over explicit index lists. Panics unless both are nonempty and
    /// strictly increasing.
    pub fn from_indices(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        assert!(!rows.is_empty() && !cols.is_empty(), "empty view");
        assert!(rows.windows(2).all(|w| w[0] < w[1]), "rows not increasing");
        assert!(cols.windows(2).all(|w| w[0] < w[1]), "cols not increasing");
        MatrixView { rows, cols }
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.cols.len()
    }

    pub fn alive_rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn alive_cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.rows.binary_search(&row).is_ok() && self.cols.binary_search(&col).is_ok()
    }

    /// Removes the given view-relative row and column positions, keeping the
    /// survivors in their original order. Cost is linear in the view size.
    pub fn compact(
        &mut self,
        remove_rows: &[usize],
        remove_cols: &[usize],
    ) -> Result<(), MatrixError> {
        let rows = retain_positions(&self.rows, remove_rows);
        let cols = retain_positions(&self.cols, remove_cols);
        if rows.is_empty() {
            return Err(MatrixError::DegenerateView("row"));
        }
        if cols.is_empty() {
            return Err(MatrixError::DegenerateView("column"));
        }
        self.rows = rows;
        self.cols = cols;
        Ok(())
    }

    /// Non-mutating form of [`MatrixView::compact`].
    pub fn compacted(
        &self,
        remove_rows: &[usize],
        remove_cols: &[usize],
    ) -> Result<MatrixView, MatrixError> {
        let mut view = self.clone();
        view.compact(remove_rows, remove_cols)?;
        Ok(view)
    }
}

fn retain_positions(alive: &[usize], remove: &[usize]) -> Vec<usize> {
    if remove.is_empty() {
        return alive.to_vec();
    }
    let mut dead = vec![false; alive.len()];
    for &p in remove {
        assert!(p < alive.len(), "removal position {p} out of range");
        dead[p] = true;
    }
    alive
        .iter()
        .zip(dead)
        .filter_map(|(&idx, d)| (!d).then_some(idx))
        .collect()
}
