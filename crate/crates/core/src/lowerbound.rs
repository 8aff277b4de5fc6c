//! Hard input distribution for non-strict saddlepoints and a harness that
//! runs query strategies against it under a read budget.
//!
//! Instances start all-zero, get one `2` per row at a uniform column, and one
//! of those `2`s (uniform) becomes `+1` or `-1` with equal probability. Call
//! that entry `t`. With `t = -1` every zero in `t`'s row is a saddlepoint of
//! value 0. With `t = +1` there is a saddlepoint (of value 1, at `t`) only if
//! every `2` sits in `t`'s column. An algorithm that never reads `t` cannot
//! tell the cases apart.
//!
//! Nothing here proves anything about arbitrary algorithms; the strategies
//! are instruments for measuring how the bundled baselines fare.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::generate::mix64;
use crate::matrix::{CountingAccess, Matrix};
use crate::oracle::brute_nonstrict;
use crate::random::{RandomPool, RngMode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardInstance {
    pub matrix: Matrix,
    /// Column of the nonzero entry of each row.
    pub special_cols: Vec<usize>,
    pub t_row: usize,
    pub t_col: usize,
    pub t_value: i64,
}

impl HardInstance {
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }
}

/// Draws an instance of side `n`. The pool must serve `rand_uniform(n)` and
/// `rand_uniform(2)`.
pub fn gen_hard_matrix(n: usize, pool: &mut RandomPool) -> HardInstance {
    assert!(n >= 1, "n must be positive");
    let mut entries = vec![0i64; n * n];
    let special_cols: Vec<usize> = (0..n).map(|_| pool.rand_uniform(n) - 1).collect();
    for (r, &c) in special_cols.iter().enumerate() {
        entries[r * n + c] = 2;
    }
    let t_row = pool.rand_uniform(n) - 1;
    let t_col = special_cols[t_row];
    let t_value = if pool.rand_uniform(2) == 1 { 1 } else { -1 };
    entries[t_row * n + t_col] = t_value;
    HardInstance {
        matrix: Matrix::new(n, n, entries).expect("n >= 1"),
        special_cols,
        t_row,
        t_col,
        t_value,
    }
}

/// A strategy's verdict on a hard instance, or the ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Value(i64),
    NoSaddle,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Value(v) => write!(f, "{v}"),
            Answer::NoSaddle => f.write_str("none"),
        }
    }
}

impl Serialize for Answer {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Saddlepoint value from the structure of the instance alone.
pub fn classify_hard_instance(inst: &HardInstance) -> Answer {
    if inst.t_value == -1 {
        // A 1x1 instance has no zero to fall back on.
        if inst.n() == 1 {
            Answer::Value(-1)
        } else {
            Answer::Value(0)
        }
    } else if inst.special_cols.iter().all(|&c| c == inst.t_col) {
        Answer::Value(1)
    } else {
        Answer::NoSaddle
    }
}

/// Ground truth by brute force, for cross-checking the classifier.
pub fn brute_answer(m: &Matrix) -> Answer {
    brute_nonstrict(m)
        .value()
        .map_or(Answer::NoSaddle, Answer::Value)
}

/// Read access that stops answering once `budget` entries have been read.
pub struct BudgetedAccess<'a> {
    inner: CountingAccess<'a, Matrix>,
    budget: u64,
    exceeded: bool,
}

impl<'a> BudgetedAccess<'a> {
    pub fn new(matrix: &'a Matrix, budget: u64) -> Self {
        BudgetedAccess {
            inner: CountingAccess::new(matrix),
            budget,
            exceeded: false,
        }
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn reads(&self) -> u64 {
        self.inner.counters().entry_reads
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.reads()
    }

    pub fn exceeded(&self) -> bool {
        self.exceeded
    }

    /// `None` once the budget is spent; the attempt is recorded.
    pub fn read(&mut self, row: usize, col: usize) -> Option<i64> {
        if self.reads() >= self.budget {
            self.exceeded = true;
            return None;
        }
        Some(self.inner.read(row, col))
    }
}

/// A query algorithm for the hard distribution.
pub trait Strategy {
    fn name(&self) -> &'static str;
    fn run(&mut self, access: &mut BudgetedAccess<'_>, pool: &mut RandomPool) -> Answer;
}

/// What a strategy has seen so far, and the best guess it supports.
struct Evidence {
    n: usize,
    t: Option<(usize, usize, i64)>,
    /// Column of each row's nonzero entry, where seen.
    special: Vec<Option<usize>>,
}

impl Evidence {
    fn new(n: usize) -> Self {
        Evidence {
            n,
            t: None,
            special: vec![None; n],
        }
    }

    fn observe(&mut self, r: usize, c: usize, v: i64) {
        if v != 0 {
            self.special[r] = Some(c);
        }
        if v == 1 || v == -1 {
            self.t = Some((r, c, v));
        }
    }

    fn guess(&self) -> Answer {
        match self.t {
            Some((_, _, -1)) if self.n == 1 => Answer::Value(-1),
            Some((_, _, -1)) => Answer::Value(0),
            Some((_, tc, _)) => {
                if self.special.iter().all(|s| *s == Some(tc)) {
                    Answer::Value(1)
                } else {
                    Answer::NoSaddle
                }
            }
            // Both signs of t are equally likely; value 0 is the likelier
            // answer since +1 rarely yields a saddlepoint.
            None => Answer::Value(0),
        }
    }
}

/// Reads entries in row-major order until the budget runs out. Given a
/// budget of at least `n^2` it sees the whole matrix and is always right.
#[derive(Debug, Default, Clone, Copy)]
pub struct RowScan;

impl Strategy for RowScan {
    fn name(&self) -> &'static str {
        "row-scan"
    }

    fn run(&mut self, access: &mut BudgetedAccess<'_>, _pool: &mut RandomPool) -> Answer {
        let n = access.n();
        let mut evidence = Evidence::new(n);
        let mut seen = Vec::with_capacity(n * n);
        'scan: for r in 0..n {
            for c in 0..n {
                if access.remaining() == 0 {
                    break 'scan;
                }
                let v = access.read(r, c).expect("budget checked");
                evidence.observe(r, c, v);
                seen.push(v);
            }
        }
        if seen.len() == n * n {
            brute_answer(&Matrix::new(n, n, seen).expect("n >= 1"))
        } else {
            evidence.guess()
        }
    }
}

/// Reads uniformly random cells (with replacement) until the budget runs out.
#[derive(Debug, Default, Clone, Copy)]
pub struct RandomProbe;

impl Strategy for RandomProbe {
    fn name(&self) -> &'static str {
        "random-probe"
    }

    fn run(&mut self, access: &mut BudgetedAccess<'_>, pool: &mut RandomPool) -> Answer {
        let n = access.n();
        let mut evidence = Evidence::new(n);
        while access.remaining() > 0 {
            let r = pool.rand_uniform(n) - 1;
            let c = pool.rand_uniform(n) - 1;
            let v = access.read(r, c).expect("budget checked");
            evidence.observe(r, c, v);
        }
        evidence.guess()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub budget: u64,
    pub reads: u64,
    pub answer: Answer,
    pub truth: Answer,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HistogramBin {
    pub lo: u64,
    pub hi: u64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub strategy: &'static str,
    pub n: usize,
    pub budget: u64,
    pub trials: usize,
    pub successes: usize,
    pub mean_reads: f64,
    /// Ten equal-width bins over `0..=budget`.
    pub histogram: Vec<HistogramBin>,
    #[serde(skip)]
    pub rows: Vec<TrialRecord>,
}

impl ExperimentRecord {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Seed of the pool for trial `trial` of an experiment.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    mix64(seed ^ mix64(trial as u64).rotate_left(17))
}

/// Runs `strategy` on `trials` fresh instances with a budget of
/// `floor(n^2 / budget_divisor)` reads each. A trial succeeds when the
/// answer matches the classifier and the budget was never overrun.
pub fn run_budget_experiment(
    strategy: &mut dyn Strategy,
    n: usize,
    trials: usize,
    budget_divisor: u64,
    seed: u64,
) -> ExperimentRecord {
    assert!(n >= 1 && trials >= 1 && budget_divisor >= 1);
    let budget = (n * n) as u64 / budget_divisor;
    let mut rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut pool = RandomPool::new(trial_seed(seed, trial), n.max(2), RngMode::Full);
        let inst = gen_hard_matrix(n, &mut pool);
        let truth = classify_hard_instance(&inst);
        let mut access = BudgetedAccess::new(&inst.matrix, budget);
        let answer = strategy.run(&mut access, &mut pool);
        rows.push(TrialRecord {
            n,
            trial,
            budget,
            reads: access.reads(),
            answer,
            truth,
            success: answer == truth && !access.exceeded(),
        });
    }
    let width = (budget + 1).div_ceil(10).max(1);
    let mut histogram: Vec<HistogramBin> = (0..10)
        .map(|i| HistogramBin {
            lo: i * width,
            hi: ((i + 1) * width).min(budget + 1) - 1,
            count: 0,
        })
        .filter(|b| b.lo <= budget)
        .collect();
    for r in &rows {
        histogram[(r.reads / width) as usize].count += 1;
    }
    ExperimentRecord {
        strategy: strategy.name(),
        n,
        budget,
        trials,
        successes: rows.iter().filter(|r| r.success).count(),
        mean_reads: rows.iter().map(|r| r.reads as f64).sum::<f64>() / trials as f64,
        histogram,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool(seed: u64, n: usize) -> RandomPool {
        RandomPool::new(seed, n.max(2), RngMode::Full)
    }

    #[test]
    fn single_cell_instances() {
        for seed in 0..20 {
            let inst = gen_hard_matrix(1, &mut pool(seed, 1));
            assert_eq!((inst.t_row, inst.t_col), (0, 0));
            assert!(inst.matrix.get(0, 0).abs() == 1);
            assert_eq!(classify_hard_instance(&inst), brute_answer(&inst.matrix));
        }
    }

    #[test]
    fn structure() {
        for seed in 0..200 {
            let inst = gen_hard_matrix(8, &mut pool(seed, 8));
            let e = inst.matrix.entries();
            assert_eq!(e.iter().filter(|&&v| v == 2).count(), 7);
            assert_eq!(e.iter().filter(|&&v| v == 1 || v == -1).count(), 1);
            assert_eq!(e.iter().filter(|&&v| v == 0).count(), 56);
            for r in 0..8 {
                assert_eq!(inst.matrix.row(r).iter().filter(|&&v| v != 0).count(), 1);
                assert_ne!(inst.matrix.get(r, inst.special_cols[r]), 0);
            }
        }
    }

    #[test]
    fn constructed_cases() {
        // t = +1 with every special element in t's column.
        let mut m = vec![0i64; 16];
        for r in 0..4 {
            m[r * 4 + 2] = 2;
        }
        m[4 + 2] = 1;
        let inst = HardInstance {
            matrix: Matrix::new(4, 4, m.clone()).unwrap(),
            special_cols: vec![2; 4],
            t_row: 1,
            t_col: 2,
            t_value: 1,
        };
        assert_eq!(classify_hard_instance(&inst), Answer::Value(1));
        assert_eq!(brute_answer(&inst.matrix), Answer::Value(1));

        // Move one special element elsewhere: no saddlepoint.
        m[2] = 0;
        m[0] = 2;
        let split = HardInstance {
            matrix: Matrix::new(4, 4, m).unwrap(),
            special_cols: vec![0, 2, 2, 2],
            ..inst.clone()
        };
        assert_eq!(classify_hard_instance(&split), Answer::NoSaddle);
        assert_eq!(brute_answer(&split.matrix), Answer::NoSaddle);

        let neg = HardInstance {
            t_value: -1,
            ..split
        };
        assert_eq!(classify_hard_instance(&neg), Answer::Value(0));
    }

    #[test]
    fn budget_is_enforced() {
        let m = Matrix::new(3, 3, vec![0; 9]).unwrap();
        let mut acc = BudgetedAccess::new(&m, 4);
        for _ in 0..4 {
            assert_eq!(acc.read(0, 0), Some(0));
        }
        assert!(!acc.exceeded());
        assert_eq!(acc.read(1, 1), None);
        assert!(acc.exceeded());
        assert_eq!(acc.reads(), 4);
    }

    struct Greedy;
    impl Strategy for Greedy {
        fn name(&self) -> &'static str {
            "greedy"
        }
        fn run(&mut self, access: &mut BudgetedAccess<'_>, _: &mut RandomPool) -> Answer {
            let n = access.n();
            for i in 0..=access.budget() as usize {
                let _ = access.read(i % n, 0);
            }
            Answer::Value(0)
        }
    }

    #[test]
    fn overrunning_strategy_always_fails() {
        let rec = run_budget_experiment(&mut Greedy, 6, 50, 2, 1);
        assert_eq!(rec.successes, 0);
        assert!(rec.rows.iter().all(|r| r.reads == r.budget));
    }

    #[test]
    fn full_budget_full_scan_always_succeeds() {
        let rec = run_budget_experiment(&mut RowScan, 2, 100, 1, 0);
        assert_eq!(rec.budget, 4);
        assert_eq!(rec.successes, 100);
        let rec = run_budget_experiment(&mut RowScan, 9, 100, 1, 5);
        assert_eq!(rec.success_rate(), 1.0);
        assert_eq!(rec.mean_reads, 81.0);
        assert_eq!(rec.histogram.iter().map(|b| b.count).sum::<usize>(), 100);
    }

    #[test]
    fn random_probe_respects_budget() {
        let rec = run_budget_experiment(&mut RandomProbe, 50, 30, 10, 2);
        assert_eq!(rec.budget, 250);
        assert!(rec.rows.iter().all(|r| r.reads == 250));
    }

    #[test]
    fn answers_render_for_csv() {
        assert_eq!(Answer::Value(0).to_string(), "0");
        assert_eq!(Answer::Value(-1).to_string(), "-1");
        assert_eq!(Answer::NoSaddle.to_string(), "none");
    }
}
