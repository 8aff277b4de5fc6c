//! Randomized two-phase search for horizontal and vertical pivots.
//!
//! A *horizontal pivot* of a view is a cell `p` such that every row of the
//! view contains an entry `>= p` and at least `floor(k/4)` entries of `p`'s own
//! row are smaller than `p` (`k` = width). Every column holding one of those
//! smaller entries in `p`'s row can then be deleted without losing a strict
//! saddlepoint. A *vertical pivot* is the order-dual notion on columns.
//!
//! The search samples:
//!
//! 1. **Threshold pruning.** While more than `floor(m^stop)` rows remain, draw
//!    one uniform entry per row, take the `ceil(3/4 |R|)`-th smallest sample as
//!    a candidate threshold, lower the running threshold `t` to it, and drop
//!    every row whose sample exceeds `t`.
//! 2. **Per-row quantiles.** Each surviving row gets `c` samples with
//!    replacement; their `max(1, floor(2/5 c))`-th smallest is the row's
//!    estimate. The pivot candidate `p` is the minimum estimate.
//!
//! The candidate is rejected as [`Failed`] unless `p <= t` and a scan of
//! `p`'s row finds enough smaller entries. Those two checks alone make every
//! returned pivot valid: dropped rows hold a sample `> t >= p`, and surviving
//! rows hold their estimate `>= p`.
//!
//! The vertical search runs the same code with rows and columns exchanged and
//! the order reversed, reading columns through the view.

use std::cmp::Ordering;

use thiserror::Error;

use crate::fraction::Fraction;
use crate::matrix::{CountingAccess, LexKey, MatrixSource, MatrixView};
use crate::random::RandomPool;
use crate::select::select_kth_by;

/// A pivot search, or a reduction built on one, gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("pivot selection failed")]
pub struct Failed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid pivot parameter: {0}")]
pub struct ParamError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PivotParams {
    /// Quantile of the per-row samples used as the next threshold.
    pub phase1_quantile: Fraction,
    /// Threshold pruning stops once at most `floor(m^stop_exponent)` rows remain.
    pub stop_exponent: Fraction,
    /// Per-row sample count grows as `floor(m^sample_exponent)`.
    pub sample_exponent: Fraction,
    /// Lower bound on the per-row sample count.
    pub sample_floor: usize,
    /// Adds `ceil(sample_log_factor * log2 m)` as a further lower bound; zero
    /// disables it.
    pub sample_log_factor: usize,
    /// Order statistic of the per-row samples, as a fraction of the count.
    pub order_fraction: Fraction,
    /// Required fraction of the pivot's line that must lie strictly below it.
    pub validity_fraction: Fraction,
}

impl PivotParams {
    /// Constants exactly as in the original procedure.
    pub const fn paper() -> Self {
        PivotParams {
            phase1_quantile: Fraction::new(3, 4),
            stop_exponent: Fraction::new(19, 20),
            sample_exponent: Fraction::new(1, 20),
            sample_floor: 1,
            sample_log_factor: 0,
            order_fraction: Fraction::new(2, 5),
            validity_fraction: Fraction::new(1, 4),
        }
    }

    /// Enough per-row samples that pivot failure is rare at desk scale.
    pub const fn practical() -> Self {
        PivotParams {
            sample_floor: 32,
            sample_log_factor: 4,
            validity_fraction: Fraction::new(1, 8),
            ..PivotParams::paper()
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let half = Fraction::new(1, 2);
        let checks = [
            (
                self.phase1_quantile.is_proper(),
                "phase1 quantile must lie in (0, 1)",
            ),
            (
                self.stop_exponent.is_proper(),
                "stop exponent must lie in (0, 1)",
            ),
            (
                self.sample_exponent.is_proper(),
                "sample exponent must lie in (0, 1)",
            ),
            (
                self.order_fraction.is_proper(),
                "order fraction must lie in (0, 1)",
            ),
            (
                self.validity_fraction.num() > 0 && self.validity_fraction <= half,
                "validity fraction must lie in (0, 1/2]",
            ),
            (self.sample_floor >= 1, "sample floor must be at least 1"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(ParamError(msg.to_string())),
            None => Ok(()),
        }
    }

    /// Per-row sample count `c` for a view with `m` lines.
    pub fn sample_count(&self, m: usize) -> usize {
        let by_power = self.sample_exponent.floor_pow(m);
        let by_log = if self.sample_log_factor == 0 || m < 2 {
            0
        } else {
            (self.sample_log_factor as f64 * (m as f64).log2()).ceil() as usize
        };
        self.sample_floor.max(by_power).max(by_log)
    }

    /// Rank (1-based) of the per-row order statistic among `c` samples.
    pub fn order_rank(&self, c: usize) -> usize {
        self.order_fraction.floor_mul(c).max(1)
    }
}

impl Default for PivotParams {
    fn default() -> Self {
        PivotParams::paper()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PivotResult {
    pub row: usize,
    pub col: usize,
    pub key: LexKey,
}

/// Internal progress of one pivot search, for tests and diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PivotTrace {
    /// Number of live lines at the start of each pruning round, plus the
    /// final count.
    pub phase1_sizes: Vec<usize>,
    /// Running threshold after each pruning round.
    pub thresholds: Vec<LexKey>,
    /// Pruning ended because a round removed nothing.
    pub stalled: bool,
    pub phase2_lines: usize,
    pub samples_per_line: usize,
}

pub fn find_horizontal_pivot<S: MatrixSource + ?Sized>(
    access: &mut CountingAccess<'_, S>,
    view: &MatrixView,
    pool: &mut RandomPool,
    params: &PivotParams,
) -> Result<PivotResult, Failed> {
    find_pivot(Axis::Horizontal, access, view, pool, params, None)
}

pub fn find_vertical_pivot<S: MatrixSource + ?Sized>(
    access: &mut CountingAccess<'_, S>,
    view: &MatrixView,
    pool: &mut RandomPool,
    params: &PivotParams,
) -> Result<PivotResult, Failed> {
    find_pivot(Axis::Vertical, access, view, pool, params, None)
}

/// Lines of a view along one axis: rows for a horizontal search, columns for
/// a vertical one.
struct Lines<'v> {
    axis: Axis,
    view: &'v MatrixView,
}

impl Lines<'_> {
    fn count(&self) -> usize {
        match self.axis {
            Axis::Horizontal => self.view.height(),
            Axis::Vertical => self.view.width(),
        }
    }

    fn len(&self) -> usize {
        match self.axis {
            Axis::Horizontal => self.view.width(),
            Axis::Vertical => self.view.height(),
        }
    }

    /// Original coordinates of position `idx` along line `line`.
    fn cell(&self, line: usize, idx: usize) -> (usize, usize) {
        match self.axis {
            Axis::Horizontal => (self.view.alive_rows()[line], self.view.alive_cols()[idx]),
            Axis::Vertical => (self.view.alive_rows()[idx], self.view.alive_cols()[line]),
        }
    }
}

fn oriented<S: MatrixSource + ?Sized>(
    access: &mut CountingAccess<'_, S>,
    axis: Axis,
    a: &LexKey,
    b: &LexKey,
) -> Ordering {
    let o = access.lex_compare(a, b);
    match axis {
        Axis::Horizontal => o,
        Axis::Vertical => o.reverse(),
    }
}

/// The pivot search along `axis`. Random draws are consumed in a fixed
/// order: lines in alive order, samples in index order.
pub fn find_pivot<S: MatrixSource + ?Sized>(
    axis: Axis,
    access: &mut CountingAccess<'_, S>,
    view: &MatrixView,
    pool: &mut RandomPool,
    params: &PivotParams,
    mut trace: Option<&mut PivotTrace>,
) -> Result<PivotResult, Failed> {
    let lines = Lines { axis, view };
    let m = lines.count();
    let k = lines.len();

    // Phase 1: threshold pruning.
    let stop = params.stop_exponent.floor_pow(m);
    let mut live: Vec<usize> = (0..m).collect();
    let mut samples: Vec<LexKey> = Vec::with_capacity(m);
    let mut scratch: Vec<LexKey> = Vec::with_capacity(m);
    let mut threshold: Option<LexKey> = None;
    while live.len() > stop {
        if let Some(tr) = trace.as_deref_mut() {
            tr.phase1_sizes.push(live.len());
        }
        samples.clear();
        for &line in &live {
            let idx = pool.rand_uniform(k) - 1;
            let (r, c) = lines.cell(line, idx);
            samples.push(access.key(r, c));
        }
        scratch.clear();
        scratch.extend_from_slice(&samples);
        let rank = params.phase1_quantile.ceil_mul(scratch.len()).max(1);
        let q = select_kth_by(&mut scratch, rank, |a, b| oriented(access, axis, a, b))
            .expect("rank within bounds");
        let t = match threshold {
            Some(t) if oriented(access, axis, &t, &q) != Ordering::Greater => t,
            _ => q,
        };
        threshold = Some(t);
        if let Some(tr) = trace.as_deref_mut() {
            tr.thresholds.push(t);
        }

        let before = live.len();
        let mut kept = 0;
        for i in 0..before {
            if oriented(access, axis, &samples[i], &t) != Ordering::Greater {
                live[kept] = live[i];
                kept += 1;
            }
        }
        live.truncate(kept);
        if kept == before {
            if let Some(tr) = trace.as_deref_mut() {
                tr.stalled = true;
            }
            break;
        }
    }

    // Phase 2: per-line order statistics.
    let c = params.sample_count(m);
    let rank = params.order_rank(c);
    if let Some(tr) = trace {
        tr.phase1_sizes.push(live.len());
        tr.phase2_lines = live.len();
        tr.samples_per_line = c;
    }
    let mut best: Option<(LexKey, usize)> = None;
    let mut row_samples: Vec<LexKey> = Vec::with_capacity(c);
    for &line in &live {
        row_samples.clear();
        for _ in 0..c {
            let idx = pool.rand_uniform(k) - 1;
            let (r, col) = lines.cell(line, idx);
            row_samples.push(access.key(r, col));
        }
        let estimate = select_kth_by(&mut row_samples, rank, |a, b| oriented(access, axis, a, b))
            .expect("rank within bounds");
        best = match best {
            Some((b, l)) if oriented(access, axis, &b, &estimate) != Ordering::Greater => {
                Some((b, l))
            }
            _ => Some((estimate, line)),
        };
    }
    let (p, p_line) = best.expect("phase 1 never empties the line set");

    if let Some(t) = threshold {
        if oriented(access, axis, &p, &t) == Ordering::Greater {
            return Err(Failed);
        }
    }

    let needed = params.validity_fraction.floor_mul(k);
    let mut below = 0;
    for idx in 0..k {
        let (r, c) = lines.cell(p_line, idx);
        if (r, c) == (p.row, p.col) {
            continue;
        }
        let e = access.key(r, c);
        if oriented(access, axis, &e, &p) == Ordering::Less {
            below += 1;
        }
    }
    if below < needed {
        return Err(Failed);
    }
    Ok(PivotResult {
        row: p.row,
        col: p.col,
        key: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::oracle::{is_horizontal_pivot, is_vertical_pivot};
    use crate::random::RngMode;

    #[test]
    fn presets_validate() {
        PivotParams::paper().validate().unwrap();
        PivotParams::practical().validate().unwrap();
        let bad = PivotParams {
            validity_fraction: Fraction::new(3, 4),
            ..PivotParams::paper()
        };
        assert!(bad.validate().is_err());
        let bad = PivotParams {
            order_fraction: Fraction::new(1, 1),
            ..PivotParams::paper()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sample_counts() {
        let paper = PivotParams::paper();
        assert_eq!(paper.sample_count(64), 1);
        assert_eq!(paper.sample_count(1 << 16), 1);
        assert_eq!(paper.sample_count(1 << 20), 2);
        assert_eq!(paper.order_rank(1), 1);
        assert_eq!(paper.order_rank(5), 2);
        let practical = PivotParams::practical();
        assert_eq!(practical.sample_count(1), 32);
        assert_eq!(practical.sample_count(4096), 48);
        assert_eq!(practical.sample_count(65536), 64);
        assert_eq!(practical.order_rank(48), 19);
    }

    #[test]
    fn single_row_outcomes_enumerated() {
        // One row [1, 2, 3, 4]: pruning is skipped, the single sample is the
        // candidate, and it needs floor(4/4) = 1 smaller entry.
        let m = Matrix::from_rows(&[[1, 2, 3, 4]]);
        let view = MatrixView::full(1, 4);
        let mut seen = [0u32; 5];
        let mut failed = 0;
        for seed in 0..400 {
            let mut acc = CountingAccess::new(&m);
            let mut pool = RandomPool::new(seed, 4, RngMode::Full);
            match find_horizontal_pivot(&mut acc, &view, &mut pool, &PivotParams::paper()) {
                Ok(p) => {
                    assert!((2..=4).contains(&p.key.value));
                    seen[p.key.value as usize] += 1;
                }
                Err(Failed) => failed += 1,
            }
            assert_eq!(pool.words_used(), 1);
        }
        assert!(seen[2] > 0 && seen[3] > 0 && seen[4] > 0 && failed > 0);
    }

    #[test]
    fn single_column_outcomes_enumerated() {
        let m = Matrix::from_rows(&[[1], [2], [3], [4]]);
        let view = MatrixView::full(4, 1);
        let mut failed = 0;
        for seed in 0..400 {
            let mut acc = CountingAccess::new(&m);
            let mut pool = RandomPool::new(seed, 4, RngMode::Full);
            match find_vertical_pivot(&mut acc, &view, &mut pool, &PivotParams::paper()) {
                Ok(p) => assert!((1..=3).contains(&p.key.value)),
                Err(Failed) => failed += 1,
            }
        }
        assert!(failed > 0 && failed < 400);
    }

    #[test]
    fn results_are_valid_pivots_on_ties() {
        let m = Matrix::from_rows(&[[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]]);
        let view = MatrixView::full(3, 4);
        for seed in 0..50 {
            let mut acc = CountingAccess::new(&m);
            let mut pool = RandomPool::new(seed, 4, RngMode::Full);
            if let Ok(p) = find_horizontal_pivot(&mut acc, &view, &mut pool, &PivotParams::paper())
            {
                assert!(is_horizontal_pivot(
                    &m,
                    &view,
                    p.row,
                    p.col,
                    Fraction::new(1, 4)
                ));
            }
            if let Ok(p) = find_vertical_pivot(&mut acc, &view, &mut pool, &PivotParams::paper()) {
                assert!(is_vertical_pivot(
                    &m,
                    &view,
                    p.row,
                    p.col,
                    Fraction::new(1, 4)
                ));
            }
        }
    }

    #[test]
    fn pruning_stalls_on_three_lines() {
        // m = 3 > floor(3^(19/20)) = 2, but a round can only remove
        // floor(3/4) = 0 lines when t equals the quantile.
        let m = Matrix::from_rows(&[[1, 2], [3, 4], [5, 6]]);
        let view = MatrixView::full(3, 2);
        let mut stalls = 0;
        for seed in 0..100 {
            let mut acc = CountingAccess::new(&m);
            let mut pool = RandomPool::new(seed, 3, RngMode::Full);
            let mut trace = PivotTrace::default();
            let _ = find_pivot(
                Axis::Horizontal,
                &mut acc,
                &view,
                &mut pool,
                &PivotParams::paper(),
                Some(&mut trace),
            );
            assert_eq!(trace.phase1_sizes.first(), Some(&3));
            stalls += trace.stalled as u32;
        }
        assert_eq!(stalls, 100);
    }
}
