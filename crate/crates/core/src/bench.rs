//! Doubling benchmark: solve implicit instances at `n, 2n, 4n, ...` and
//! summarize how the median cost grows.

use std::str::FromStr;

use serde::Serialize;

use crate::generate::{mix64, ImplicitPlanted, ImplicitUniform};
use crate::solver::{find_strict_saddlepoint, Outcome, SolveParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchKind {
    /// Planted strict saddlepoint; the solver must find it.
    Planted,
    /// Shuffled `1..=n^2`; usually no strict saddlepoint.
    Uniform,
}

impl FromStr for BenchKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "planted" => Ok(BenchKind::Planted),
            "uniform" => Ok(BenchKind::Uniform),
            other => Err(format!(
                "unknown bench kind {other:?} (expected planted|uniform)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub min_n: usize,
    pub max_n: usize,
    pub trials: usize,
    pub kind: BenchKind,
    pub params: SolveParams,
    /// Trial `t` at size `n` uses solver seed `seed + t`.
    pub seed: u64,
}

impl BenchConfig {
    pub fn sizes(&self) -> Vec<usize> {
        std::iter::successors(Some(self.min_n), |&n| n.checked_mul(2))
            .take_while(|&n| n <= self.max_n)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub comparisons: u64,
    pub entry_reads: u64,
    pub restarts: u64,
    pub time_ns: u64,
    pub found: bool,
}

/// Runs one trial. Planted trials panic if the solver misses the plant.
pub fn bench_trial(n: usize, seed: u64, kind: BenchKind, params: &SolveParams) -> BenchRow {
    let instance_seed = mix64(seed ^ (n as u64).rotate_left(40));
    let report = match kind {
        BenchKind::Planted => {
            let m = ImplicitPlanted::new(n, n, instance_seed);
            let r = find_strict_saddlepoint(&m, params, seed);
            assert_eq!(
                r.cell(),
                Some(m.cell()),
                "planted cell missed at n={n} seed={seed}"
            );
            r
        }
        BenchKind::Uniform => {
            find_strict_saddlepoint(&ImplicitUniform::new(n, n, instance_seed), params, seed)
        }
    };
    BenchRow {
        n,
        seed,
        comparisons: report.comparisons,
        entry_reads: report.entry_reads,
        restarts: report.restarts,
        time_ns: report.wall_time_ns,
        found: report.outcome == Outcome::Found,
    }
}

/// All trials, sorted by `(n, seed)`.
pub fn run_bench(config: &BenchConfig) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for n in config.sizes() {
        for t in 0..config.trials as u64 {
            rows.push(bench_trial(n, config.seed + t, config.kind, &config.params));
        }
    }
    rows.sort_by_key(|r| (r.n, r.seed));
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    pub trials: usize,
    pub median_entry_reads: f64,
    pub median_comparisons: f64,
    pub median_time_ns: f64,
    pub max_restarts: u64,
    /// Median entry reads relative to the previous (half) size.
    pub ratio_to_previous: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSummary {
    pub sizes: Vec<SizeSummary>,
    /// Smallest `C` with `entry_reads <= C * n` for every trial.
    pub fitted_c: f64,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

pub fn summarize(rows: &[BenchRow]) -> ScalingSummary {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.dedup();
    sizes.sort();
    sizes.dedup();
    let mut out: Vec<SizeSummary> = Vec::new();
    for n in sizes {
        let at: Vec<&BenchRow> = rows.iter().filter(|r| r.n == n).collect();
        let med = |f: &dyn Fn(&BenchRow) -> u64| {
            median(&mut at.iter().map(|r| f(r) as f64).collect::<Vec<_>>())
        };
        let median_entry_reads = med(&|r| r.entry_reads);
        let ratio_to_previous = out
            .last()
            .filter(|p| p.n * 2 == n)
            .map(|p| median_entry_reads / p.median_entry_reads);
        out.push(SizeSummary {
            n,
            trials: at.len(),
            median_entry_reads,
            median_comparisons: med(&|r| r.comparisons),
            median_time_ns: med(&|r| r.time_ns),
            max_restarts: at.iter().map(|r| r.restarts).max().unwrap_or(0),
            ratio_to_previous,
        });
    }
    let fitted_c = rows
        .iter()
        .map(|r| r.entry_reads as f64 / r.n as f64)
        .fold(0.0, f64::max);
    ScalingSummary {
        sizes: out,
        fitted_c,
    }
}
