//! Shrinks a view by alternating horizontal and vertical pivot deletions
//! until its height is at most the target size.

use std::cmp::Ordering;

use crate::fraction::Fraction;
use crate::matrix::{CountingAccess, MatrixSource, MatrixView};
use crate::pivot::{find_horizontal_pivot, find_vertical_pivot, Failed, ParamError, PivotParams};
use crate::random::RandomPool;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceParams {
    pub target_size: usize,
    /// Fraction of the width (height) removed per horizontal (vertical) step.
    pub delete_fraction: Fraction,
    pub pivot: PivotParams,
}

impl ReduceParams {
    pub fn new(target_size: usize, pivot: PivotParams) -> Self {
        ReduceParams {
            target_size,
            delete_fraction: Fraction::new(1, 4),
            pivot,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.target_size < 4 {
            return Err(ParamError("reduction target must be at least 4".into()));
        }
        if !self.delete_fraction.is_proper() {
            return Err(ParamError("delete fraction must lie in (0, 1)".into()));
        }
        self.pivot.validate()
    }
}

/// Shape of the view before the loop and after each full iteration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReduceTrace {
    pub shapes: Vec<(usize, usize)>,
}

pub fn reduce_matrix<S: MatrixSource + ?Sized>(
    access: &mut CountingAccess<'_, S>,
    view: MatrixView,
    params: &ReduceParams,
    pool: &mut RandomPool,
) -> Result<MatrixView, Failed> {
    reduce_matrix_traced(access, view, params, pool, None)
}

/// Runs the reduction loop. Each iteration deletes
/// `floor(delete_fraction * width)` columns lying left of the horizontal
/// pivot in value, then the same fraction of rows below the vertical pivot.
/// Qualifying columns (rows) are taken in alive order. When the pivot's line
/// has fewer qualifying entries than that (possible only if the pivot's
/// validity fraction is below the delete fraction), all of them are deleted.
///
/// A strict saddlepoint of the input view (lexicographic order) is never
/// deleted. Returns [`Failed`] if a pivot search fails or an iteration
/// removes nothing.
pub fn reduce_matrix_traced<S: MatrixSource + ?Sized>(
    access: &mut CountingAccess<'_, S>,
    mut view: MatrixView,
    params: &ReduceParams,
    pool: &mut RandomPool,
    mut trace: Option<&mut ReduceTrace>,
) -> Result<MatrixView, Failed> {
    assert!(params.target_size >= 4, "reduction target below 4");
    if let Some(tr) = trace.as_deref_mut() {
        tr.shapes.push((view.height(), view.width()));
    }
    while view.height() > params.target_size {
        let p = find_horizontal_pivot(access, &view, pool, &params.pivot)?;
        let quota = params.delete_fraction.floor_mul(view.width());
        let mut dead_cols = Vec::with_capacity(quota);
        for (pos, &c) in view.alive_cols().iter().enumerate() {
            if dead_cols.len() == quota {
                break;
            }
            if c == p.col {
                continue;
            }
            let e = access.key(p.row, c);
            if access.lex_compare(&e, &p.key) == Ordering::Less {
                dead_cols.push(pos);
            }
        }
        view.compact(&[], &dead_cols)
            .expect("quota is below the width");

        let q = find_vertical_pivot(access, &view, pool, &params.pivot)?;
        let quota = params.delete_fraction.floor_mul(view.height());
        let mut dead_rows = Vec::with_capacity(quota);
        for (pos, &r) in view.alive_rows().iter().enumerate() {
            if dead_rows.len() == quota {
                break;
            }
            if r == q.row {
                continue;
            }
            let e = access.key(r, q.col);
            if access.lex_compare(&e, &q.key) == Ordering::Greater {
                dead_rows.push(pos);
            }
        }
        view.compact(&dead_rows, &[])
            .expect("quota is below the height");

        if let Some(tr) = trace.as_deref_mut() {
            tr.shapes.push((view.height(), view.width()));
        }
        if dead_cols.is_empty() && dead_rows.is_empty() {
            return Err(Failed);
        }
    }
    Ok(view)
}
