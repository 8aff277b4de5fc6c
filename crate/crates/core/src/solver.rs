//! Las Vegas strict-saddlepoint solver.
//!
//! Square inputs are reduced level by level: a level of side `n` is shrunk to
//! height `s(n) = max(base, ceil(n / log2 n))` by [`reduce_matrix`], and the
//! result is treated as the next level, until the view fits the exhaustive
//! base case. All of this runs over [`LexKey`]s, so equal values never tie.
//! The single candidate that survives is finally checked against the raw
//! values of the input; ties manufactured by the lexicographic lifting fail
//! that check.
//!
//! A level whose reduction fails is retried with fresh words from the pool,
//! up to `max_restarts_per_level` times, and is then solved exhaustively, so
//! every call terminates with the correct answer.
//!
//! Rectangular inputs are covered by square windows along the long side; see
//! [`solve_rectangular`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::fraction::Fraction;
use crate::generate::mix64;
use crate::matrix::{Counters, CountingAccess, LexKey, MatrixSource, MatrixView};
use crate::oracle::Cell;
use crate::pivot::{ParamError, PivotParams};
use crate::random::{RandomPool, RngMode};
use crate::reduce::{reduce_matrix, ReduceParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Pivot constants exactly as published; one sample per row at any
    /// practical size, so pivot searches fail often and restarts are common.
    Paper,
    /// Logarithmic per-row sampling and a relaxed validity check.
    Practical,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Paper => "paper",
            Preset::Practical => "practical",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Preset::Paper),
            "practical" => Ok(Preset::Practical),
            other => Err(format!(
                "unknown preset {other:?} (expected paper|practical)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveParams {
    pub preset: Preset,
    /// Views with both sides at most this size are solved exhaustively.
    pub base_case_size: usize,
    pub max_restarts_per_level: usize,
    pub delete_fraction: Fraction,
    pub pivot: PivotParams,
    pub rng: RngMode,
}

impl SolveParams {
    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Paper => SolveParams {
                preset,
                base_case_size: 16,
                max_restarts_per_level: 20,
                delete_fraction: Fraction::new(1, 4),
                pivot: PivotParams::paper(),
                rng: RngMode::Full,
            },
            Preset::Practical => SolveParams {
                preset,
                base_case_size: 64,
                max_restarts_per_level: 20,
                delete_fraction: Fraction::new(1, 4),
                pivot: PivotParams::practical(),
                rng: RngMode::Full,
            },
        }
    }

    pub fn paper() -> Self {
        SolveParams::preset(Preset::Paper)
    }

    pub fn practical() -> Self {
        SolveParams::preset(Preset::Practical)
    }

    pub fn with_rng(mut self, rng: RngMode) -> Self {
        self.rng = rng;
        self
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.base_case_size < 4 {
            return Err(ParamError("base case size must be at least 4".into()));
        }
        if self.max_restarts_per_level < 1 {
            return Err(ParamError(
                "at least one restart per level is required".into(),
            ));
        }
        self.reduce_params(self.base_case_size).validate()
    }

    /// Reduction target for a level whose longer side is `side`.
    pub fn target_size(&self, side: usize) -> usize {
        let by_log = (side as f64 / (side as f64).log2()).ceil() as usize;
        self.base_case_size.max(by_log)
    }

    fn reduce_params(&self, target: usize) -> ReduceParams {
        ReduceParams {
            target_size: target,
            delete_fraction: self.delete_fraction,
            pivot: self.pivot,
        }
    }
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams::practical()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Found,
    None,
}

/// Result of one solve. Field names are the stable JSON schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub value: Option<i64>,
    pub comparisons: u64,
    pub entry_reads: u64,
    pub restarts: u64,
    pub random_words: u64,
    pub wall_time_ns: u64,
    pub seed: u64,
    pub preset: Preset,
}

impl SolveReport {
    pub fn found(&self) -> Option<Cell> {
        match (self.outcome, self.row, self.col, self.value) {
            (Outcome::Found, Some(row), Some(col), Some(value)) => Some(Cell { row, col, value }),
            _ => None,
        }
    }

    pub fn cell(&self) -> Option<(usize, usize)> {
        self.found().map(|c| (c.row, c.col))
    }
}

/// Per-solve mutable state: counters, random pool and restart tally.
struct Solver<'a, 'm, S: MatrixSource + ?Sized> {
    access: &'a mut CountingAccess<'m, S>,
    pool: RandomPool,
    params: &'a SolveParams,
    restarts: u64,
}

impl<S: MatrixSource + ?Sized> Solver<'_, '_, S> {
    /// Lexicographic strict saddlepoint of `view`, if any.
    fn solve_view(&mut self, mut view: MatrixView) -> Option<(usize, usize)> {
        loop {
            let side = view.height().max(view.width());
            if side <= self.params.base_case_size {
                return solve_base_case(self.access, &view);
            }
            let reduce = self.params.reduce_params(self.params.target_size(side));
            let mut reduced = None;
            for _ in 0..=self.params.max_restarts_per_level {
                match reduce_matrix(self.access, view.clone(), &reduce, &mut self.pool) {
                    Ok(v) => {
                        reduced = Some(v);
                        break;
                    }
                    Err(_) => self.restarts += 1,
                }
            }
            match reduced {
                Some(next) if next.height().max(next.width()) < side => view = next,
                // Either every attempt failed, or the view was already short
                // enough that reduction had nothing to do.
                Some(next) => return solve_base_case(self.access, &next),
                None => return solve_base_case(self.access, &view),
            }
        }
    }
}

/// Exhaustive scan of a view over lexicographic keys: the cell that is the
/// strict maximum of its row and strict minimum of its column. Reads every
/// entry of the view once.
pub fn solve_base_case<S: MatrixSource + ?Sized>(
    access: &mut CountingAccess<'_, S>,
    view: &MatrixView,
) -> Option<(usize, usize)> {
    let (h, w) = (view.height(), view.width());
    let mut keys = Vec::with_capacity(h * w);
    for &r in view.alive_rows() {
        for &c in view.alive_cols() {
            keys.push(access.key(r, c));
        }
    }
    let mut row_best = vec![0usize; h];
    for (i, best) in row_best.iter_mut().enumerate() {
        for j in 1..w {
            if access.lex_compare(&keys[i * w + j], &keys[i * w + *best]) == Ordering::Greater {
                *best = j;
            }
        }
    }
    let mut col_best = vec![0usize; w];
    for (j, best) in col_best.iter_mut().enumerate() {
        for i in 1..h {
            if access.lex_compare(&keys[i * w + j], &keys[*best * w + j]) == Ordering::Less {
                *best = i;
            }
        }
    }
    row_best
        .iter()
        .enumerate()
        .find(|&(i, &j)| col_best[j] == i)
        .map(|(i, &j)| {
            let k: LexKey = keys[i * w + j];
            (k.row, k.col)
        })
}

/// Whether `(row, col)` is a strict saddlepoint by raw value. Short-circuits
/// on the first violation; a true candidate costs exactly
/// `(cols - 1) + (rows - 1)` comparisons.
pub fn verify_strict_candidate_counted<S: MatrixSource + ?Sized>(
    access: &mut CountingAccess<'_, S>,
    row: usize,
    col: usize,
) -> bool {
    let (rows, cols) = (access.rows(), access.cols());
    assert!(
        row < rows && col < cols,
        "candidate ({row}, {col}) out of range"
    );
    let v = access.read(row, col);
    for c in (0..cols).filter(|&c| c != col) {
        let e = access.read(row, c);
        if access.compare_values(e, v) != Ordering::Less {
            return false;
        }
    }
    for r in (0..rows).filter(|&r| r != row) {
        let e = access.read(r, col);
        if access.compare_values(e, v) != Ordering::Greater {
            return false;
        }
    }
    true
}

pub fn verify_strict_candidate<S: MatrixSource + ?Sized>(m: &S, row: usize, col: usize) -> bool {
    verify_strict_candidate_counted(&mut CountingAccess::new(m), row, col)
}

/// Raw-value strict check restricted to the rows and columns of `view`.
fn verify_in_view<S: MatrixSource + ?Sized>(
    access: &mut CountingAccess<'_, S>,
    view: &MatrixView,
    row: usize,
    col: usize,
) -> bool {
    let v = access.read(row, col);
    for &c in view.alive_cols().iter().filter(|&&c| c != col) {
        let e = access.read(row, c);
        if access.compare_values(e, v) != Ordering::Less {
            return false;
        }
    }
    for &r in view.alive_rows().iter().filter(|&&r| r != row) {
        let e = access.read(r, col);
        if access.compare_values(e, v) != Ordering::Greater {
            return false;
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn report(
    cell: Option<(usize, usize)>,
    value: Option<i64>,
    counters: Counters,
    restarts: u64,
    random_words: u64,
    started: Instant,
    seed: u64,
    preset: Preset,
) -> SolveReport {
    SolveReport {
        outcome: if cell.is_some() {
            Outcome::Found
        } else {
            Outcome::None
        },
        row: cell.map(|c| c.0),
        col: cell.map(|c| c.1),
        value,
        comparisons: counters.comparisons,
        entry_reads: counters.entry_reads,
        restarts,
        random_words,
        wall_time_ns: started.elapsed().as_nanos() as u64,
        seed,
        preset,
    }
}

/// Finds the strict saddlepoint of `matrix` or reports that none exists.
/// The answer is always correct; randomness affects only the cost.
pub fn find_strict_saddlepoint<S: MatrixSource + ?Sized>(
    matrix: &S,
    params: &SolveParams,
    seed: u64,
) -> SolveReport {
    if matrix.rows() != matrix.cols() {
        return solve_rectangular(matrix, params, seed);
    }
    let started = Instant::now();
    let n = matrix.rows();
    let mut access = CountingAccess::new(matrix);
    let mut solver = Solver {
        access: &mut access,
        pool: RandomPool::new(seed, n, params.rng),
        params,
        restarts: 0,
    };
    let candidate = solver.solve_view(MatrixView::full(n, n));
    let (restarts, words) = (solver.restarts, solver.pool.words_used());
    let cell = candidate.filter(|&(r, c)| verify_strict_candidate_counted(&mut access, r, c));
    let value = cell.map(|(r, c)| matrix.entry(r, c));
    report(
        cell,
        value,
        access.counters(),
        restarts,
        words,
        started,
        seed,
        params.preset,
    )
}

/// Seed of the pool used for window `index` of a rectangular solve.
pub fn window_seed(seed: u64, index: usize) -> u64 {
    mix64(seed ^ mix64(index as u64 + 1))
}

/// Start offsets of the `ceil(long / short)` windows covering the long side;
/// the last window is aligned to the end.
pub fn window_starts(long: usize, short: usize) -> Vec<usize> {
    let count = long.div_ceil(short);
    (0..count)
        .map(|i| {
            if i + 1 == count {
                long - short
            } else {
                i * short
            }
        })
        .collect()
}

/// Rectangular inputs: solve every square window along the long side, then
/// test the one candidate the local saddlepoints allow.
///
/// For a tall matrix each window spans full rows, so a local saddlepoint is
/// the maximum of a full row and therefore at least the global saddlepoint,
/// which lies in some window and is local there: only the minimum local
/// saddlepoint can be global. Wide matrices are the mirror image, with the
/// maximum.
pub fn solve_rectangular<S: MatrixSource + ?Sized>(
    matrix: &S,
    params: &SolveParams,
    seed: u64,
) -> SolveReport {
    let started = Instant::now();
    let (rows, cols) = (matrix.rows(), matrix.cols());
    let tall = rows > cols;
    let (long, short) = if tall { (rows, cols) } else { (cols, rows) };
    let mut access = CountingAccess::new(matrix);
    let mut restarts = 0;
    let mut words = 0;
    let mut local: Vec<LexKey> = Vec::new();
    for (index, start) in window_starts(long, short).into_iter().enumerate() {
        let span: Vec<usize> = (start..start + short).collect();
        let view = if tall {
            MatrixView::from_indices(span, (0..cols).collect())
        } else {
            MatrixView::from_indices((0..rows).collect(), span)
        };
        let mut solver = Solver {
            access: &mut access,
            pool: RandomPool::new(window_seed(seed, index), short, params.rng),
            params,
            restarts: 0,
        };
        let candidate = solver.solve_view(view.clone());
        restarts += solver.restarts;
        words += solver.pool.words_used();
        if let Some((r, c)) = candidate {
            if verify_in_view(&mut access, &view, r, c) {
                let key = LexKey::new(matrix.entry(r, c), r, c);
                if !local.contains(&key) {
                    local.push(key);
                }
            }
        }
    }

    let pick = if tall {
        Ordering::Less
    } else {
        Ordering::Greater
    };
    let mut best: Option<LexKey> = None;
    for key in local {
        best = match best {
            Some(b) if access.compare_values(key.value, b.value) != pick => Some(b),
            _ => Some(key),
        };
    }
    let cell = best
        .map(|k| (k.row, k.col))
        .filter(|&(r, c)| verify_strict_candidate_counted(&mut access, r, c));
    let value = cell.map(|(r, c)| matrix.entry(r, c));
    report(
        cell,
        value,
        access.counters(),
        restarts,
        words,
        started,
        seed,
        params.preset,
    )
}
