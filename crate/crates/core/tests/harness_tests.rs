use std::path::PathBuf;

use streamdiv::data;
use streamdiv::engine;
use streamdiv::harness::{
    self, DatasetSpec, ExperimentConfig, OutputFormat, RunStats, Settings, StrategyEntry, StrategyStats, TrialRecord,
};
use streamdiv::strategies::{StrategyConfig, StrategyKind, StrategyParams};

fn entries(b: usize, kinds: &[StrategyKind]) -> Vec<StrategyEntry> {
    kinds
        .iter()
        .map(|&k| StrategyEntry::new(StrategyParams::defaults(k, b).unwrap()))
        .collect()
}

const FIVE: [StrategyKind; 5] = [
    StrategyKind::Frm,
    StrategyKind::Kleinberg,
    StrategyKind::Optimistic,
    StrategyKind::Mean,
    StrategyKind::Submodular,
];

fn mini(n: usize, seed: u64, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        dataset: DatasetSpec::Synthetic { n, d: 8, seed },
        strategies: entries(4, &FIVE),
        budget: 4,
        trials,
        base_seed: seed,
    }
}

#[test]
fn single_trial_median_is_the_reward() {
    let result = harness::run_experiment(&mini(150, 3, 1)).unwrap();
    for s in &result.stats.strategies {
        let rec: Vec<&TrialRecord> = result.records_of(&s.strategy).collect();
        assert_eq!(rec.len(), 1);
        assert_eq!(s.median, rec[0].reward);
        assert_eq!((s.q1, s.q3), (rec[0].reward, rec[0].reward));
        assert!(s.outliers.is_empty());
    }
}

#[test]
fn records_replay_as_paired_trials() {
    let config = mini(200, 5, 6);
    let dataset = config.dataset.load().unwrap();
    let result = harness::run_on_dataset(&config, &dataset).unwrap();
    assert_eq!(result.records.len(), 5 * 6);
    for rec in &result.records {
        assert_eq!(rec.seed, 5 + rec.trial as u64);
        let entry = config.strategies.iter().find(|e| e.label == rec.strategy).unwrap();
        let stream = data::reshuffle(&dataset, rec.seed);
        let cfg = StrategyConfig::new(entry.params, 4, 200, rec.seed);
        let trace = engine::run(&cfg, &stream).unwrap();
        assert_eq!(trace.reward.to_bits(), rec.reward.to_bits(), "{} t{}", rec.strategy, rec.trial);
        assert_eq!(trace.failed, rec.failed);
    }
    // config order, then trial
    let order: Vec<(String, usize)> = result.records.iter().map(|r| (r.strategy.clone(), r.trial)).collect();
    let want: Vec<(String, usize)> = FIVE
        .iter()
        .flat_map(|k| (0..6).map(move |t| (k.name().to_string(), t)))
        .collect();
    assert_eq!(order, want);
}

#[test]
fn csv_and_json_agree() {
    let result = harness::run_experiment(&mini(180, 1, 7)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let written = harness::emit_results(&result, dir.path(), &[OutputFormat::Csv, OutputFormat::Json]).unwrap();
    assert_eq!(written.len(), 2);

    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(harness::CSV_HEADER));
    let rows = harness::parse_records_csv(&csv).unwrap();
    assert_eq!(rows.len(), 5 * 7);

    let summary: RunStats =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary, result.stats);
    for s in &summary.strategies {
        let mine: Vec<&TrialRecord> = rows.iter().filter(|r| r.strategy == s.strategy).collect();
        let failed = mine.iter().filter(|r| r.failed).count();
        assert!((s.failure_rate - 100.0 * failed as f64 / mine.len() as f64).abs() < 1e-12);
        let mut rewards: Vec<f64> = mine.iter().map(|r| r.reward).collect();
        rewards.sort_by(f64::total_cmp);
        // nearest rank: the ⌈p·T⌉-th smallest
        assert_eq!(s.median, rewards[(0.5f64 * 7.0).ceil() as usize - 1]);
        assert_eq!(s.q1, rewards[1]);
        assert_eq!(s.q3, rewards[5]);
    }
}

#[test]
fn whiskers_and_outliers() {
    let recs: Vec<TrialRecord> = [1.0, 2.0, 2.0, 3.0, 3.0, 3.0, 4.0, 4.0, 30.0]
        .iter()
        .enumerate()
        .map(|(t, &r)| TrialRecord {
            strategy: "X".into(),
            trial: t,
            seed: t as u64,
            reward: r,
            failed: t == 0,
            time: 1.0,
        })
        .collect();
    let refs: Vec<&TrialRecord> = recs.iter().collect();
    let s = StrategyStats::from_records("X", &refs);
    // q1 = 3rd smallest, q3 = 7th: fences at 2 - 3 and 4 + 3
    assert_eq!((s.q1, s.median, s.q3), (2.0, 3.0, 4.0));
    assert_eq!((s.whisker_low, s.whisker_high), (1.0, 4.0));
    assert_eq!(s.outliers, vec![30.0]);
    assert!((s.failure_rate - 100.0 / 9.0).abs() < 1e-12);
}

/// Three small synthetic datasets, fixed seeds, rendered side by side.
fn golden_table() -> String {
    let runs: Vec<(String, RunStats)> = [(120, 11), (200, 12), (320, 13)]
        .iter()
        .map(|&(n, seed)| {
            let stats = harness::run_experiment(&mini(n, seed, 9)).unwrap().stats;
            (format!("N={n}"), stats)
        })
        .collect();
    let cols: Vec<(&str, &RunStats)> = runs.iter().map(|(h, s)| (h.as_str(), s)).collect();
    harness::render_table(&cols)
}

#[test]
fn table_matches_golden_file() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/table_mini.txt");
    let table = golden_table();
    if std::env::var_os("STREAMDIV_BLESS").is_some() {
        std::fs::write(&path, &table).unwrap();
    }
    let want = std::fs::read_to_string(&path).expect("golden file missing; rerun with STREAMDIV_BLESS=1");
    assert_eq!(table, want);
}

#[test]
fn table_layout() {
    let table = golden_table();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 2 + FIVE.len());
    assert!(lines[0].starts_with("strategy") && lines[0].contains("N=320"));
    assert_eq!(lines[1].matches("f% | D").count(), 3);
    for (line, k) in lines[2..].iter().zip(FIVE) {
        assert!(line.starts_with(k.name()));
        assert_eq!(line.matches(" | ").count(), 3);
    }
}

#[test]
fn config_file_overrides_flags() {
    let text = "# mini run\n\n n = 300 \nb=5\ntrials = 3\nstrategies = FRM, single-ref, dyn_simplek\nformat=json\nfrm.delta = constant\nseed=9\n";
    let map = harness::parse_config(text).unwrap();
    assert_eq!(map["n"], "300");
    let mut s = Settings {
        n: 9999,
        ..Settings::default()
    };
    s.apply(&map).unwrap();
    assert_eq!((s.n, s.b, s.trials, s.seed), (300, 5, 3, 9));
    assert_eq!(
        s.strategies,
        vec![StrategyKind::Frm, StrategyKind::SingleRef, StrategyKind::DynSimpleK]
    );
    assert_eq!(s.formats, vec![OutputFormat::Json]);
    let config = s.experiment().unwrap();
    assert_eq!(config.strategies.len(), 3);
    assert!(matches!(
        config.strategies[0].params,
        StrategyParams::Frm {
            delta: streamdiv::analytics::DeltaSchedule::Constant,
            ..
        }
    ));
    assert_eq!(
        config.dataset,
        DatasetSpec::Synthetic {
            n: 300,
            d: 256,
            seed: 9
        }
    );
}

#[test]
fn config_errors_are_specific() {
    assert!(matches!(
        harness::parse_config("n 300"),
        Err(harness::HarnessError::ConfigSyntax { line: 1, .. })
    ));
    let mut s = Settings::default();
    let err = s.apply(&harness::parse_config("bogus = 1").unwrap()).unwrap_err();
    assert!(err.to_string().contains("bogus"));
    let err = s.apply(&harness::parse_config("b = ten").unwrap()).unwrap_err();
    assert!(err.to_string().contains("ten"));
    assert!(s.apply(&harness::parse_config("single_ref.rank = 2").unwrap()).is_err());
    // SINGLE_REF has no defaults at b = 7
    let s = Settings {
        b: 7,
        strategies: vec![StrategyKind::SingleRef],
        ..Settings::default()
    };
    assert!(s.experiment().is_err());
    let s = Settings {
        dataset: "parquet:x".into(),
        ..Settings::default()
    };
    assert!(s.dataset_spec().is_err());
}

#[test]
fn csv_dataset_through_the_harness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walks.csv");
    data::write_csv(&data::generate_random_walks(90, 6, 2).unwrap(), &path).unwrap();
    let config = ExperimentConfig {
        dataset: DatasetSpec::Csv {
            path: path.clone(),
            limit: Some(80),
        },
        strategies: entries(3, &[StrategyKind::Frm, StrategyKind::Mean]),
        budget: 3,
        trials: 4,
        base_seed: 0,
    };
    let r = harness::run_experiment(&config).unwrap();
    assert_eq!((r.stats.n, r.stats.d, r.records.len()), (80, 6, 8));
    let too_many = ExperimentConfig {
        dataset: DatasetSpec::Csv { path, limit: Some(91) },
        ..config
    };
    assert!(harness::run_experiment(&too_many).is_err());
}

#[test]
fn reproducible_csv_without_time() {
    let a = harness::run_experiment(&mini(160, 4, 5)).unwrap();
    let b = harness::run_experiment(&mini(160, 4, 5)).unwrap();
    assert_eq!(
        harness::records_csv(&a.records, false),
        harness::records_csv(&b.records, false)
    );
}
