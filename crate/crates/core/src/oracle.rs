//! Brute-force ground truth.
//!
//! These functions read entries directly (no counters) and compare raw
//! values, except for the pivot validators which use the same lexicographic
//! order as the pivot search they check.
#![allow(clippy::needless_range_loop)]

use serde::Serialize;

use crate::fraction::Fraction;
use crate::matrix::{LexKey, MatrixSource, MatrixView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Strict,
    Nonstrict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub kind: OracleKind,
    pub cells: Vec<Cell>,
}

impl OracleResult {
    /// The saddlepoint value shared by all returned cells.
    pub fn value(&self) -> Option<i64> {
        self.cells.first().map(|c| c.value)
    }

    pub fn first(&self) -> Option<Cell> {
        self.cells.first().copied()
    }
}

/// Running extreme of a line and how often it occurs.
struct Extreme {
    value: i64,
    count: usize,
}

impl Extreme {
    fn new(value: i64) -> Self {
        Extreme { value, count: 0 }
    }

    fn push_max(&mut self, v: i64) {
        if v > self.value {
            *self = Extreme { value: v, count: 1 };
        } else if v == self.value {
            self.count += 1;
        }
    }

    fn push_min(&mut self, v: i64) {
        if v < self.value {
            *self = Extreme { value: v, count: 1 };
        } else if v == self.value {
            self.count += 1;
        }
    }
}

fn extremes<S: MatrixSource + ?Sized>(m: &S) -> (Vec<Extreme>, Vec<Extreme>) {
    let mut row_max: Vec<Extreme> = (0..m.rows()).map(|_| Extreme::new(i64::MIN)).collect();
    let mut col_min: Vec<Extreme> = (0..m.cols()).map(|_| Extreme::new(i64::MAX)).collect();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.entry(r, c);
            row_max[r].push_max(v);
            col_min[c].push_min(v);
        }
    }
    (row_max, col_min)
}

/// The strict saddlepoint by raw value: the unique maximum of its row and
/// unique minimum of its column.
pub fn brute_strict<S: MatrixSource + ?Sized>(m: &S) -> OracleResult {
    let (row_max, col_min) = extremes(m);
    let mut cells = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.entry(r, c);
            if row_max[r].value == v
                && row_max[r].count == 1
                && col_min[c].value == v
                && col_min[c].count == 1
            {
                cells.push(Cell {
                    row: r,
                    col: c,
                    value: v,
                });
            }
        }
    }
    debug_assert!(cells.len() <= 1);
    OracleResult {
        kind: OracleKind::Strict,
        cells,
    }
}

/// Every cell equal to both its row maximum and its column minimum.
pub fn brute_nonstrict<S: MatrixSource + ?Sized>(m: &S) -> OracleResult {
    let (row_max, col_min) = extremes(m);
    let mut cells = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.entry(r, c);
            if row_max[r].value == v && col_min[c].value == v {
                cells.push(Cell {
                    row: r,
                    col: c,
                    value: v,
                });
            }
        }
    }
    OracleResult {
        kind: OracleKind::Nonstrict,
        cells,
    }
}

fn lex<S: MatrixSource + ?Sized>(m: &S, r: usize, c: usize) -> LexKey {
    LexKey::new(m.entry(r, c), r, c)
}

/// Full-scan check that `(row, col)` is a horizontal pivot of `view` under
/// lexicographic order: at least `floor(fraction * width)` entries of its row
/// are smaller, and every row of the view has an entry at least as large.
pub fn is_horizontal_pivot<S: MatrixSource + ?Sized>(
    m: &S,
    view: &MatrixView,
    row: usize,
    col: usize,
    fraction: Fraction,
) -> bool {
    if !view.contains(row, col) {
        return false;
    }
    let p = lex(m, row, col);
    let smaller = view
        .alive_cols()
        .iter()
        .filter(|&&c| lex(m, row, c) < p)
        .count();
    smaller >= fraction.floor_mul(view.width())
        && view
            .alive_rows()
            .iter()
            .all(|&r| view.alive_cols().iter().any(|&c| lex(m, r, c) >= p))
}

/// Order-dual of [`is_horizontal_pivot`] on columns.
pub fn is_vertical_pivot<S: MatrixSource + ?Sized>(
    m: &S,
    view: &MatrixView,
    row: usize,
    col: usize,
    fraction: Fraction,
) -> bool {
    if !view.contains(row, col) {
        return false;
    }
    let p = lex(m, row, col);
    let larger = view
        .alive_rows()
        .iter()
        .filter(|&&r| lex(m, r, col) > p)
        .count();
    larger >= fraction.floor_mul(view.height())
        && view
            .alive_cols()
            .iter()
            .all(|&c| view.alive_rows().iter().any(|&r| lex(m, r, c) <= p))
}

/// The cell that is the strict row maximum and strict column minimum of the
/// view under lexicographic order, found by exhaustive scan.
pub fn lex_strict_in_view<S: MatrixSource + ?Sized>(
    m: &S,
    view: &MatrixView,
) -> Option<(usize, usize)> {
    let rows = view.alive_rows();
    let cols = view.alive_cols();
    let row_argmax: Vec<usize> = rows
        .iter()
        .map(|&r| {
            *cols
                .iter()
                .max_by_key(|&&c| lex(m, r, c))
                .expect("nonempty")
        })
        .collect();
    for (i, &r) in rows.iter().enumerate() {
        let c = row_argmax[i];
        let p = lex(m, r, c);
        if rows.iter().all(|&r2| r2 == r || lex(m, r2, c) > p) {
            return Some((r, c));
        }
    }
    None
}
