use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use saddlepoint::bench::{run_bench, summarize, BenchConfig, BenchKind};
use saddlepoint::generate::{nosaddle_matrix, planted_matrix, uniform_matrix};
use saddlepoint::lowerbound::{
    classify_hard_instance, gen_hard_matrix, run_budget_experiment, Answer, RandomProbe, RowScan,
    Strategy,
};
use saddlepoint::random::DEFAULT_DWISE_D;
use saddlepoint::solver::Preset;
use saddlepoint::{
    brute_nonstrict, brute_strict, find_strict_saddlepoint, verify_strict_candidate, Fraction,
    Matrix, RandomPool, RngMode, SolveParams,
};

/// Strict saddlepoints in linear expected time, with oracles, generators,
/// benchmarks and a lower-bound lab.
#[derive(Parser)]
#[command(name = "sp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated matrix and its truth sidecar.
    Generate(GenerateArgs),
    /// Find the strict saddlepoint of a matrix file.
    Solve(SolveArgs),
    /// Brute-force saddlepoints of a matrix file, as JSON.
    Oracle(OracleArgs),
    /// Doubling benchmark on generated instances.
    Bench(BenchArgs),
    /// Budgeted query experiment on the hard distribution.
    Lb(LbArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Planted,
    Uniform,
    Nosaddle,
    Hard,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Matrix file; the sidecar goes next to it as `<name>.truth.json`.
    /// Without it the matrix is printed and no sidecar is written.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Paper,
    Practical,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Paper => Preset::Paper,
            PresetArg::Practical => Preset::Practical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RngArg {
    Full,
    Dwise,
}

/// Solver configuration shared by `solve` and `bench`.
#[derive(Args)]
struct ParamArgs {
    #[arg(long, value_enum, default_value = "practical")]
    preset: PresetArg,
    #[arg(long, value_enum, default_value = "full")]
    rng: RngArg,
    /// Independence degree for `--rng dwise` (even, at least 2).
    #[arg(long, default_value_t = DEFAULT_DWISE_D)]
    dwise_d: u32,
    #[arg(long)]
    base_case_size: Option<usize>,
    #[arg(long)]
    max_restarts: Option<usize>,
    #[arg(long)]
    delete_fraction: Option<Fraction>,
    #[arg(long)]
    pivot_phase1_quantile: Option<Fraction>,
    #[arg(long)]
    pivot_stop_exponent: Option<Fraction>,
    #[arg(long)]
    pivot_sample_exponent: Option<Fraction>,
    #[arg(long)]
    pivot_sample_floor: Option<usize>,
    #[arg(long)]
    pivot_sample_log_factor: Option<usize>,
    #[arg(long)]
    pivot_order_fraction: Option<Fraction>,
    #[arg(long)]
    pivot_validity_fraction: Option<Fraction>,
}

impl ParamArgs {
    fn params(&self) -> Result<SolveParams> {
        let rng = match self.rng {
            RngArg::Full => RngMode::Full,
            RngArg::Dwise => RngMode::dwise(self.dwise_d)?,
        };
        let mut p = SolveParams::preset(self.preset.into()).with_rng(rng);
        if let Some(v) = self.base_case_size {
            p.base_case_size = v;
        }
        if let Some(v) = self.max_restarts {
            p.max_restarts_per_level = v;
        }
        if let Some(v) = self.delete_fraction {
            p.delete_fraction = v;
        }
        let pv = &mut p.pivot;
        if let Some(v) = self.pivot_phase1_quantile {
            pv.phase1_quantile = v;
        }
        if let Some(v) = self.pivot_stop_exponent {
            pv.stop_exponent = v;
        }
        if let Some(v) = self.pivot_sample_exponent {
            pv.sample_exponent = v;
        }
        if let Some(v) = self.pivot_sample_floor {
            pv.sample_floor = v;
        }
        if let Some(v) = self.pivot_sample_log_factor {
            pv.sample_log_factor = v;
        }
        if let Some(v) = self.pivot_order_fraction {
            pv.order_fraction = v;
        }
        if let Some(v) = self.pivot_validity_fraction {
            pv.validity_fraction = v;
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: ParamArgs,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Report a wall time of zero, so repeated runs print identical output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Nonstrict,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "strict")]
    mode: Mode,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchKindArg {
    Planted,
    Uniform,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 4096)]
    min_n: usize,
    #[arg(long, default_value_t = 65536)]
    max_n: usize,
    #[arg(long, default_value_t = 11)]
    trials: usize,
    #[arg(long, value_enum, default_value = "planted")]
    kind: BenchKindArg,
    /// Trial `t` uses solver seed `seed + t`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    RowScan,
    RandomProbe,
}

#[derive(Args)]
struct LbArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Each trial may read `floor(n^2 / divisor)` entries.
    #[arg(long, default_value_t = 1)]
    budget_divisor: u64,
    #[arg(long, value_enum, default_value = "row-scan")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Contents of a `<name>.truth.json` sidecar.
#[derive(Serialize)]
struct Truth {
    kind: &'static str,
    rows: usize,
    cols: usize,
    seed: u64,
    /// Strict saddlepoint as `[row, col]`, when known by construction.
    saddlepoint: Option<[usize; 2]>,
    value: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hard: Option<HardTruth>,
}

#[derive(Serialize)]
struct HardTruth {
    special_cols: Vec<usize>,
    t_row: usize,
    t_col: usize,
    t_value: i64,
    answer: Answer,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}.truth.json"))
}

fn generate(args: GenerateArgs) -> Result<()> {
    let (rows, cols, seed) = (args.rows, args.cols, args.seed);
    ensure!(rows >= 1 && cols >= 1, "rows and cols must be at least 1");
    let mut truth = Truth {
        kind: "",
        rows,
        cols,
        seed,
        saddlepoint: None,
        value: None,
        hard: None,
    };
    let matrix = match args.kind {
        Kind::Planted => {
            ensure!(
                rows >= 2 && cols >= 2,
                "planted instances need at least 2 rows and columns"
            );
            let (m, (r, c)) = planted_matrix(rows, cols, seed);
            truth.kind = "planted";
            truth.saddlepoint = Some([r, c]);
            truth.value = Some(m.get(r, c));
            m
        }
        Kind::Uniform => {
            truth.kind = "uniform";
            uniform_matrix(rows, cols, seed)
        }
        Kind::Nosaddle => {
            truth.kind = "nosaddle";
            nosaddle_matrix(rows, cols, seed)?
        }
        Kind::Hard => {
            ensure!(rows == cols, "hard instances are square");
            let mut pool = RandomPool::new(seed, rows.max(2), RngMode::Full);
            let inst = gen_hard_matrix(rows, &mut pool);
            truth.kind = "hard";
            truth.hard = Some(HardTruth {
                special_cols: inst.special_cols.clone(),
                t_row: inst.t_row,
                t_col: inst.t_col,
                t_value: inst.t_value,
                answer: classify_hard_instance(&inst),
            });
            inst.matrix
        }
    };
    match args.out {
        Some(path) => {
            fs::write(&path, matrix.to_text())
                .with_context(|| format!("writing {}", path.display()))?;
            let side = sidecar_path(&path);
            fs::write(&side, serde_json::to_string_pretty(&truth)? + "\n")
                .with_context(|| format!("writing {}", side.display()))?;
        }
        None => io::stdout().write_all(matrix.to_text().as_bytes())?,
    }
    Ok(())
}

fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Matrix::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn solve(args: SolveArgs) -> Result<()> {
    let matrix = read_matrix(&args.input)?;
    let params = args.params.params()?;
    let mut report = find_strict_saddlepoint(&matrix, &params, args.seed);
    if let Some(c) = report.found() {
        if !verify_strict_candidate(&matrix, c.row, c.col) {
            bail!(
                "defect: reported cell ({}, {}) is not a strict saddlepoint",
                c.row,
                c.col
            );
        }
    }
    if args.no_timing {
        report.wall_time_ns = 0;
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    match report.found() {
        Some(c) => println!("found row={} col={} value={}", c.row, c.col, c.value),
        None => println!("none"),
    }
    println!(
        "comparisons={} entry_reads={} restarts={} random_words={} wall_time_ns={}",
        report.comparisons,
        report.entry_reads,
        report.restarts,
        report.random_words,
        report.wall_time_ns
    );
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let matrix = read_matrix(&args.input)?;
    let result = match args.mode {
        Mode::Strict => brute_strict(&matrix),
        Mode::Nonstrict => brute_nonstrict(&matrix),
    };
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    ensure!(
        args.min_n >= 1 && args.min_n <= args.max_n,
        "need 1 <= min-n <= max-n"
    );
    ensure!(args.trials >= 1, "need at least one trial");
    let config = BenchConfig {
        min_n: args.min_n,
        max_n: args.max_n,
        trials: args.trials,
        kind: match args.kind {
            BenchKindArg::Planted => BenchKind::Planted,
            BenchKindArg::Uniform => BenchKind::Uniform,
        },
        params: args.params.params()?,
        seed: args.seed,
    };
    let started = Instant::now();
    let rows = run_bench(&config);
    if let Some(path) = &args.csv {
        let mut w =
            csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    let summary = summarize(&rows);
    println!(
        "{:>8} {:>7} {:>14} {:>14} {:>9} {:>12} {:>8}",
        "n", "trials", "median_reads", "median_cmps", "reads/n", "max_restarts", "ratio"
    );
    for s in &summary.sizes {
        let ratio = s
            .ratio_to_previous
            .map_or("-".to_string(), |r| format!("{r:.3}"));
        println!(
            "{:>8} {:>7} {:>14.0} {:>14.0} {:>9.1} {:>12} {:>8}",
            s.n,
            s.trials,
            s.median_entry_reads,
            s.median_comparisons,
            s.median_entry_reads / s.n as f64,
            s.max_restarts,
            ratio
        );
    }
    println!("fitted C (max entry_reads / n) = {:.2}", summary.fitted_c);
    println!("total time {:.1}s", started.elapsed().as_secs_f64());
    Ok(())
}

fn lb(args: LbArgs) -> Result<()> {
    ensure!(
        args.n >= 1 && args.trials >= 1,
        "need n >= 1 and trials >= 1"
    );
    ensure!(
        args.budget_divisor >= 1,
        "budget divisor must be at least 1"
    );
    let mut strategy: Box<dyn Strategy> = match args.strategy {
        StrategyArg::RowScan => Box::new(RowScan),
        StrategyArg::RandomProbe => Box::new(RandomProbe),
    };
    let record = run_budget_experiment(
        strategy.as_mut(),
        args.n,
        args.trials,
        args.budget_divisor,
        args.seed,
    );
    if let Some(path) = &args.csv {
        let mut w =
            csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        for row in &record.rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    println!(
        "strategy={} n={} budget={} trials={} successes={} success_rate={:.4} mean_reads={:.1}",
        record.strategy,
        record.n,
        record.budget,
        record.trials,
        record.successes,
        record.success_rate(),
        record.mean_reads
    );
    for bin in &record.histogram {
        println!("reads {:>8}..={:<8} {}", bin.lo, bin.hi, bin.count);
    }
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Oracle(a) => oracle(a),
        Command::Bench(a) => bench(a),
        Command::Lb(a) => lb(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sp: {e:#}");
            ExitCode::FAILURE
        }
    }
}
