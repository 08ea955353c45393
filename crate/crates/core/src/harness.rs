//! Experiment runner: seeded paired trials over a dataset, per-strategy
//! aggregation, result files, scaling benchmarks and the δ-schedule sweep.
//!
//! Trial `t` (0-based) shuffles the dataset with seed `base_seed + t` and
//! hands the same stream to every strategy, which also receives
//! `base_seed + t` as its own seed. Percentiles use the nearest-rank rule and
//! boxplot whiskers the 1.5×IQR convention. Wall time covers the decision
//! loop only, never generation or I/O.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::DeltaSchedule;
use crate::data::{self, DataError, Dataset};
use crate::engine::{self, EngineError};
use crate::strategies::{StrategyConfig, StrategyError, StrategyKind, StrategyParams};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("{strategy} failed on trial {trial}: {source}")]
    Run {
        strategy: String,
        trial: usize,
        source: EngineError,
    },
    #[error("config line {line}: {reason}")]
    ConfigSyntax { line: usize, reason: String },
    #[error("invalid setting `{key}`: {reason}")]
    Setting { key: String, reason: String },
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum DatasetSpec {
    Synthetic { n: usize, d: usize, seed: u64 },
    /// Rows of a CSV file, optionally truncated to the first `limit`.
    Csv { path: PathBuf, limit: Option<usize> },
}

impl DatasetSpec {
    pub fn load(&self) -> Result<Dataset> {
        match self {
            DatasetSpec::Synthetic { n, d, seed } => Ok(data::generate_random_walks(*n, *d, *seed)?),
            DatasetSpec::Csv { path, limit } => {
                let mut ds = data::load_csv(path)?;
                if let Some(l) = *limit {
                    if l > ds.len() {
                        return Err(HarnessError::Invalid(format!(
                            "{} has {} rows, {l} requested",
                            path.display(),
                            ds.len()
                        )));
                    }
                    ds.rows.truncate(l);
                }
                Ok(ds)
            }
        }
    }
}

/// One strategy column of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyEntry {
    pub label: String,
    pub params: StrategyParams,
}

impl StrategyEntry {
    pub fn new(params: StrategyParams) -> Self {
        Self {
            label: params.kind().name().to_string(),
            params,
        }
    }

    pub fn labeled(label: impl Into<String>, params: StrategyParams) -> Self {
        Self {
            label: label.into(),
            params,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub strategies: Vec<StrategyEntry>,
    pub budget: usize,
    pub trials: usize,
    pub base_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HarnessError::Invalid("trials must be >= 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(HarnessError::Invalid("no strategies selected".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for s in &self.strategies {
            if !seen.insert(&s.label) {
                return Err(HarnessError::Invalid(format!("duplicate strategy label {}", s.label)));
            }
        }
        Ok(())
    }
}

/// One strategy on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub strategy: String,
    pub trial: usize,
    pub seed: u64,
    pub reward: f64,
    pub failed: bool,
    /// Seconds.
    pub time: f64,
}

/// Nearest-rank percentile of sorted data, `p` in `[0, 1]`.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "percentile of empty data");
    let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyStats {
    pub strategy: String,
    pub trials: usize,
    /// Percent of trials with at least one forced acceptance.
    pub failure_rate: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
    pub mean_time: f64,
}

impl StrategyStats {
    /// Summary of one strategy's records. Panics on an empty slice.
    pub fn from_records(strategy: &str, records: &[&TrialRecord]) -> Self {
        let mut rewards: Vec<f64> = records.iter().map(|r| r.reward).collect();
        rewards.sort_by(f64::total_cmp);
        let failures = records.iter().filter(|r| r.failed).count();
        let q1 = nearest_rank(&rewards, 0.25);
        let q3 = nearest_rank(&rewards, 0.75);
        let iqr = q3 - q1;
        let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        let inside: Vec<f64> = rewards.iter().copied().filter(|r| (lo..=hi).contains(r)).collect();
        Self {
            strategy: strategy.to_string(),
            trials: records.len(),
            failure_rate: 100.0 * failures as f64 / records.len() as f64,
            median: nearest_rank(&rewards, 0.5),
            q1,
            q3,
            whisker_low: inside.first().copied().unwrap_or(q1),
            whisker_high: inside.last().copied().unwrap_or(q3),
            outliers: rewards.iter().copied().filter(|r| !(lo..=hi).contains(r)).collect(),
            mean_time: records.iter().map(|r| r.time).sum::<f64>() / records.len() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub dataset: String,
    pub n: usize,
    pub d: usize,
    pub b: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub strategies: Vec<StrategyStats>,
}

impl RunStats {
    pub fn get(&self, label: &str) -> Option<&StrategyStats> {
        self.strategies.iter().find(|s| s.strategy == label)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub stats: RunStats,
    /// Sorted by strategy (config order), then trial.
    pub records: Vec<TrialRecord>,
}

impl ExperimentResult {
    pub fn records_of<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a TrialRecord> + 'a {
        self.records.iter().filter(move |r| r.strategy == label)
    }
}

/// Seed of trial `t`.
pub fn trial_seed(base_seed: u64, trial: usize) -> u64 {
    base_seed.wrapping_add(trial as u64)
}

/// Runs every strategy on every trial stream of an already loaded dataset.
pub fn run_on_dataset(config: &ExperimentConfig, dataset: &Dataset) -> Result<ExperimentResult> {
    config.validate()?;
    let n = dataset.len();
    let b = config.budget;
    // fail fast on bad parameters before any trial runs
    for s in &config.strategies {
        StrategyConfig::new(s.params, b, n, 0).validate()?;
    }
    let per_trial: Vec<Result<Vec<TrialRecord>>> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(config.base_seed, t);
            let stream = data::reshuffle(dataset, seed);
            config
                .strategies
                .iter()
                .map(|s| {
                    let sc = StrategyConfig::new(s.params, b, n, seed);
                    let started = Instant::now();
                    let trace = engine::run(&sc, &stream).map_err(|source| HarnessError::Run {
                        strategy: s.label.clone(),
                        trial: t,
                        source,
                    })?;
                    let time = started.elapsed().as_secs_f64();
                    Ok(TrialRecord {
                        strategy: s.label.clone(),
                        trial: t,
                        seed,
                        reward: trace.reward,
                        failed: trace.failed,
                        time,
                    })
                })
                .collect()
        })
        .collect();

    let mut records = Vec::with_capacity(config.trials * config.strategies.len());
    for r in per_trial {
        records.extend(r?);
    }
    let order: BTreeMap<&str, usize> = config
        .strategies
        .iter()
        .enumerate()
        .map(|(i, s)| (s.label.as_str(), i))
        .collect();
    records.sort_by_key(|r| (order[r.strategy.as_str()], r.trial));

    let strategies = config
        .strategies
        .iter()
        .map(|s| {
            let rs: Vec<&TrialRecord> = records.iter().filter(|r| r.strategy == s.label).collect();
            StrategyStats::from_records(&s.label, &rs)
        })
        .collect();
    Ok(ExperimentResult {
        stats: RunStats {
            dataset: dataset.name.clone(),
            n,
            d: dataset.dim(),
            b,
            trials: config.trials,
            base_seed: config.base_seed,
            strategies,
        },
        records,
    })
}

/// Loads the configured dataset and runs the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let dataset = config.dataset.load()?;
    run_on_dataset(config, &dataset)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format `{other}` (expected csv or json)")),
        }
    }
}

pub const CSV_HEADER: &str = "strategy,trial,seed,reward,failed,time";

/// Per-trial CSV. `with_time = false` drops the timing column, leaving the
/// part that is a pure function of the config.
pub fn records_csv(records: &[TrialRecord], with_time: bool) -> String {
    let mut out = String::new();
    if with_time {
        out.push_str(CSV_HEADER);
    } else {
        out.push_str("strategy,trial,seed,reward,failed");
    }
    out.push('\n');
    for r in records {
        let _ = write!(out, "{},{},{},{:?},{}", r.strategy, r.trial, r.seed, r.reward, u8::from(r.failed));
        if with_time {
            let _ = write!(out, ",{:.6e}", r.time);
        }
        out.push('\n');
    }
    out
}

/// Reads back a results CSV written by [`emit_results`].
pub fn parse_records_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let mut lines = text.lines().enumerate();
    let with_time = match lines.next() {
        Some((_, h)) if h == CSV_HEADER => true,
        Some((_, "strategy,trial,seed,reward,failed")) => false,
        _ => {
            return Err(HarnessError::ConfigSyntax {
                line: 1,
                reason: "unexpected results header".into(),
            })
        }
    };
    let bad = |line: usize, reason: &str| HarnessError::ConfigSyntax {
        line: line + 1,
        reason: reason.to_string(),
    };
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != if with_time { 6 } else { 5 } {
                return Err(bad(i, "wrong column count"));
            }
            Ok(TrialRecord {
                strategy: f[0].to_string(),
                trial: f[1].parse().map_err(|_| bad(i, "bad trial"))?,
                seed: f[2].parse().map_err(|_| bad(i, "bad seed"))?,
                reward: f[3].parse().map_err(|_| bad(i, "bad reward"))?,
                failed: match f[4] {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad(i, "bad failed flag")),
                },
                time: if with_time {
                    f[5].parse().map_err(|_| bad(i, "bad time"))?
                } else {
                    0.0
                },
            })
        })
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `results.csv` and/or `summary.json` into `dir`, creating it if
/// needed. Returns the written paths.
pub fn emit_results(result: &ExperimentResult, dir: &Path, formats: &[OutputFormat]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut written = Vec::new();
    for f in formats {
        let (name, body) = match f {
            OutputFormat::Csv => ("results.csv", records_csv(&result.records, true)),
            OutputFormat::Json => ("summary.json", serde_json::to_string_pretty(&result.stats)? + "\n"),
        };
        let path = dir.join(name);
        write_file(&path, &body)?;
        written.push(path);
    }
    Ok(written)
}

/// Text table with one row per strategy and one `f̄ | D̄` column per run, in
/// the order given. Strategies missing from a run show `-`.
pub fn render_table(columns: &[(&str, &RunStats)]) -> String {
    let mut labels: Vec<&str> = Vec::new();
    for (_, stats) in columns {
        for s in &stats.strategies {
            if !labels.contains(&s.strategy.as_str()) {
                labels.push(&s.strategy);
            }
        }
    }
    let cells: Vec<Vec<String>> = labels
        .iter()
        .map(|l| {
            columns
                .iter()
                .map(|(_, stats)| {
                    stats
                        .get(l)
                        .map_or_else(|| "-".to_string(), |s| format!("{:.1} | {:.2}", s.failure_rate, s.median))
                })
                .collect()
        })
        .collect();
    let first = labels.iter().map(|l| l.len()).max().unwrap_or(0).max("strategy".len());
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(c, (head, _))| {
            cells
                .iter()
                .map(|row| row[c].chars().count())
                .max()
                .unwrap_or(0)
                .max(head.chars().count())
        })
        .collect();

    let mut out = String::new();
    let _ = write!(out, "{:<first$}", "strategy");
    for ((head, _), w) in columns.iter().zip(&widths) {
        let _ = write!(out, "  {head:>w$}");
    }
    out.push('\n');
    let _ = write!(out, "{:<first$}", "");
    for w in &widths {
        let _ = write!(out, "  {:>w$}", "f% | D");
    }
    out.push('\n');
    for (label, row) in labels.iter().zip(&cells) {
        let _ = write!(out, "{label:<first$}");
        for (cell, w) in row.iter().zip(&widths) {
            let _ = write!(out, "  {cell:>w$}");
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    /// Median seconds over the repetitions.
    pub median_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub strategy: String,
    pub d: usize,
    pub b: usize,
    pub rows: Vec<ScalingRow>,
    /// `time(n_{i+1}) / time(n_i)` for consecutive sizes.
    pub ratios: Vec<f64>,
}

/// Median wall time of `reps` runs of `params` on synthetic streams of each
/// size in `sizes` (increasing).
pub fn scaling_benchmark(
    params: StrategyParams,
    sizes: &[usize],
    reps: usize,
    d: usize,
    b: usize,
    seed: u64,
) -> Result<ScalingTable> {
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HarnessError::Invalid("sizes must be strictly increasing".into()));
    }
    if reps == 0 && !sizes.is_empty() {
        return Err(HarnessError::Invalid("reps must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let dataset = data::generate_random_walks(n, d, seed)?;
        let config = StrategyConfig::new(params, b, n, seed);
        config.validate()?;
        let mut times = Vec::with_capacity(reps);
        for r in 0..reps {
            let stream = data::reshuffle(&dataset, trial_seed(seed, r));
            let started = Instant::now();
            engine::run(&config, &stream).map_err(|source| HarnessError::Run {
                strategy: params.kind().name().to_string(),
                trial: r,
                source,
            })?;
            times.push(started.elapsed().as_secs_f64());
        }
        times.sort_by(f64::total_cmp);
        rows.push(ScalingRow {
            n,
            median_time: nearest_rank(&times, 0.5),
        });
    }
    let ratios = rows.windows(2).map(|w| w[1].median_time / w[0].median_time).collect();
    Ok(ScalingTable {
        strategy: params.kind().name().to_string(),
        d,
        b,
        rows,
        ratios,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunePoint {
    pub shift: f64,
    pub scale: f64,
    pub median: f64,
    pub failure_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneReport {
    pub constant_median: f64,
    pub constant_failure_rate: f64,
    pub grid: Vec<TunePoint>,
    /// Highest median among points within the failure budget; ties keep the
    /// earlier grid point.
    pub best: Option<TunePoint>,
}

/// Sweeps exponential schedules over `shifts × scales` against the constant
/// schedule, FRM only, on the trials of `base`. Points whose failure rate
/// exceeds `max_failure_rate` (percent) are never chosen as best.
pub fn tune_delta(
    base: &ExperimentConfig,
    shifts: &[f64],
    scales: &[f64],
    cutoff: Option<usize>,
    max_failure_rate: f64,
) -> Result<TuneReport> {
    let mut entries = vec![StrategyEntry::labeled(
        "CONSTANT",
        StrategyParams::Frm {
            delta: DeltaSchedule::Constant,
            cutoff,
        },
    )];
    for &shift in shifts {
        for &scale in scales {
            entries.push(StrategyEntry::labeled(
                format!("EXP_{shift}_{scale}"),
                StrategyParams::Frm {
                    delta: DeltaSchedule::exponential(shift, scale).map_err(|e| HarnessError::Setting {
                        key: "v1/v2".into(),
                        reason: e.to_string(),
                    })?,
                    cutoff,
                },
            ));
        }
    }
    let config = ExperimentConfig {
        strategies: entries,
        ..base.clone()
    };
    let result = run_experiment(&config)?;
    let stats = &result.stats.strategies;
    let grid: Vec<TunePoint> = stats[1..]
        .iter()
        .zip(shifts.iter().flat_map(|&v1| scales.iter().map(move |&v2| (v1, v2))))
        .map(|(s, (shift, scale))| TunePoint {
            shift,
            scale,
            median: s.median,
            failure_rate: s.failure_rate,
        })
        .collect();
    let best = grid
        .iter()
        .filter(|p| p.failure_rate <= max_failure_rate)
        .fold(None::<&TunePoint>, |acc, p| match acc {
            Some(a) if a.median >= p.median => Some(a),
            _ => Some(p),
        })
        .cloned();
    Ok(TuneReport {
        constant_median: stats[0].median,
        constant_failure_rate: stats[0].failure_rate,
        grid,
        best,
    })
}

/// Parses a flat `key = value` file. Blank lines and lines starting with
/// `#` are ignored; later keys override earlier ones.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(HarnessError::ConfigSyntax {
                line: i + 1,
                reason: format!("expected key=value, got `{line}`"),
            });
        };
        let k = k.trim();
        if k.is_empty() {
            return Err(HarnessError::ConfigSyntax {
                line: i + 1,
                reason: "empty key".into(),
            });
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Every knob of the `run` command. Command-line flags fill it first; a
/// config file then overrides individual keys via [`Settings::apply`].
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// `synthetic` or `csv:PATH`.
    pub dataset: String,
    pub n: usize,
    pub d: usize,
    pub b: usize,
    pub trials: usize,
    pub seed: u64,
    pub strategies: Vec<StrategyKind>,
    pub out: PathBuf,
    pub formats: Vec<OutputFormat>,
    /// FRM δ schedule: `None` uses the tuned exponential default.
    pub frm_delta: Option<DeltaSchedule>,
    pub frm_cutoff: Option<usize>,
    /// SINGLE_REF `(cutoff fraction, reference rank)`, required for budgets
    /// without built-in defaults.
    pub single_ref: Option<(f64, usize)>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            dataset: "synthetic".into(),
            n: 5000,
            d: 256,
            b: 10,
            trials: 100,
            seed: 0,
            strategies: vec![
                StrategyKind::Frm,
                StrategyKind::Kleinberg,
                StrategyKind::Optimistic,
                StrategyKind::Mean,
                StrategyKind::Submodular,
            ],
            out: PathBuf::from("results"),
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
            frm_delta: None,
            frm_cutoff: None,
            single_ref: None,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|e: T::Err| HarnessError::Setting {
                key: key.into(),
                reason: e.to_string(),
            })
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| HarnessError::Setting {
        key: key.into(),
        reason: format!("`{value}`: {e}"),
    })
}

impl Settings {
    /// Applies config-file keys. Recognized keys: `dataset`, `n`, `d`, `b`,
    /// `trials`, `seed`, `strategies`, `out`, `format`, `frm.delta`
    /// (`constant` or `exponential`), `frm.v1`, `frm.v2`, `frm.cutoff`,
    /// `single_ref.fraction`, `single_ref.rank`.
    pub fn apply(&mut self, map: &BTreeMap<String, String>) -> Result<()> {
        let mut exp: Option<(f64, f64)> = match self.frm_delta {
            Some(DeltaSchedule::Exponential { shift, scale }) => Some((shift, scale)),
            _ => None,
        };
        let mut fraction = self.single_ref.map(|s| s.0);
        let mut rank = self.single_ref.map(|s| s.1);
        for (k, v) in map {
            match k.as_str() {
                "dataset" => self.dataset = v.clone(),
                "n" => self.n = parse_one(k, v)?,
                "d" => self.d = parse_one(k, v)?,
                "b" => self.b = parse_one(k, v)?,
                "trials" => self.trials = parse_one(k, v)?,
                "seed" => self.seed = parse_one(k, v)?,
                "strategies" => self.strategies = parse_list(k, v)?,
                "out" => self.out = PathBuf::from(v),
                "format" => self.formats = parse_list(k, v)?,
                "frm.delta" => match v.as_str() {
                    "constant" => {
                        self.frm_delta = Some(DeltaSchedule::Constant);
                        exp = None;
                    }
                    "exponential" => {
                        exp.get_or_insert(match DeltaSchedule::TUNED {
                            DeltaSchedule::Exponential { shift, scale } => (shift, scale),
                            DeltaSchedule::Constant => unreachable!("tuned schedule is exponential"),
                        });
                    }
                    other => {
                        return Err(HarnessError::Setting {
                            key: k.clone(),
                            reason: format!("`{other}` is not constant or exponential"),
                        })
                    }
                },
                "frm.v1" => exp.get_or_insert((0.0, 1.0)).0 = parse_one(k, v)?,
                "frm.v2" => exp.get_or_insert((0.0, 1.0)).1 = parse_one(k, v)?,
                "frm.cutoff" => self.frm_cutoff = Some(parse_one(k, v)?),
                "single_ref.fraction" => fraction = Some(parse_one(k, v)?),
                "single_ref.rank" => rank = Some(parse_one(k, v)?),
                _ => {
                    return Err(HarnessError::Setting {
                        key: k.clone(),
                        reason: "unknown key".into(),
                    })
                }
            }
        }
        if let Some((shift, scale)) = exp {
            self.frm_delta = Some(DeltaSchedule::exponential(shift, scale).map_err(|e| HarnessError::Setting {
                key: "frm.v1/frm.v2".into(),
                reason: e.to_string(),
            })?);
        }
        self.single_ref = match (fraction, rank) {
            (Some(f), Some(r)) => Some((f, r)),
            (None, None) => None,
            _ => {
                return Err(HarnessError::Setting {
                    key: "single_ref".into(),
                    reason: "fraction and rank must be given together".into(),
                })
            }
        };
        Ok(())
    }

    pub fn dataset_spec(&self) -> Result<DatasetSpec> {
        if self.dataset == "synthetic" {
            Ok(DatasetSpec::Synthetic {
                n: self.n,
                d: self.d,
                seed: self.seed,
            })
        } else if let Some(path) = self.dataset.strip_prefix("csv:") {
            Ok(DatasetSpec::Csv {
                path: PathBuf::from(path),
                limit: Some(self.n),
            })
        } else {
            Err(HarnessError::Setting {
                key: "dataset".into(),
                reason: format!("`{}` is not synthetic or csv:PATH", self.dataset),
            })
        }
    }

    fn params_for(&self, kind: StrategyKind) -> Result<StrategyParams> {
        Ok(match kind {
            StrategyKind::Frm => StrategyParams::Frm {
                delta: self.frm_delta.unwrap_or(DeltaSchedule::TUNED),
                cutoff: self.frm_cutoff,
            },
            StrategyKind::SingleRef => match self.single_ref {
                Some((cutoff_fraction, reference_rank)) => StrategyParams::SingleRef {
                    cutoff_fraction,
                    reference_rank,
                },
                None => StrategyParams::defaults(kind, self.b)?,
            },
            other => StrategyParams::defaults(other, self.b)?,
        })
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let strategies = self
            .strategies
            .iter()
            .map(|&k| self.params_for(k).map(StrategyEntry::new))
            .collect::<Result<_>>()?;
        let config = ExperimentConfig {
            dataset: self.dataset_spec()?,
            strategies,
            budget: self.b,
            trials: self.trials,
            base_seed: self.seed,
        };
        config.validate()?;
        Ok(config)
    }
}
