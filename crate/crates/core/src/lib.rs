//! Strict saddlepoints of matrices in the comparison model.
//!
//! A strict saddlepoint is an entry that is strictly larger than every other
//! entry of its row and strictly smaller than every other entry of its
//! column; it is unique when it exists. [`find_strict_saddlepoint`] finds it
//! (or reports that there is none) with a randomized algorithm whose work is
//! linear in the side length with high probability and whose answer is
//! always correct.
//!
//! ```
//! use saddlepoint::{find_strict_saddlepoint, Matrix, SolveParams};
//!
//! let m = Matrix::from_rows(&[[1, 2], [4, 3]]);
//! let report = find_strict_saddlepoint(&m, &SolveParams::practical(), 7);
//! assert_eq!(report.cell(), Some((0, 1)));
//! ```
//!
//! Every entry read and comparison is counted (see [`CountingAccess`]), so
//! costs can be measured exactly and reproduced from the seed.

pub mod bench;
pub mod fraction;
pub mod generate;
pub mod lowerbound;
pub mod matrix;
pub mod oracle;
pub mod pivot;
pub mod random;
pub mod reduce;
pub mod select;
pub mod solver;

pub use fraction::Fraction;
pub use matrix::{Counters, CountingAccess, LexKey, Matrix, MatrixError, MatrixSource, MatrixView};
pub use oracle::{brute_nonstrict, brute_strict, Cell, OracleKind, OracleResult};
pub use pivot::{find_horizontal_pivot, find_vertical_pivot, Failed, PivotParams, PivotResult};
pub use random::{RandomPool, RngMode};
pub use reduce::{reduce_matrix, ReduceParams};
pub use select::select_kth;
pub use solver::{
    find_strict_saddlepoint, solve_base_case, solve_rectangular, verify_strict_candidate,
    verify_strict_candidate_counted, Outcome, Preset, SolveParams, SolveReport,
};
