//! Acceptance criteria 1–10. Runs as a plain binary so every criterion
//! prints one PASS/FAIL line (plus details) regardless of output capture,
//! and runs sequentially so the timing criterion is not disturbed.
//! The process exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use rand::seq::index::sample;
use rand::Rng;
use streamdiv::analytics::{self, DeltaSchedule};
use streamdiv::data::{self, Dataset};
use streamdiv::engine::{self, replay};
use streamdiv::harness::{self, DatasetSpec, ExperimentConfig, ExperimentResult, StrategyEntry};
use streamdiv::oracle;
use streamdiv::strategies::{StrategyConfig, StrategyKind, StrategyParams};

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            details: vec![],
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }
}

// ------------------------------------------------------------------ 1

fn crit1() -> Outcome {
    let mut o = Outcome::new();
    let started = Instant::now();
    let draws = 100_000;
    // empirical mean and standard error of the b-th smallest of c distinct
    // ranks drawn uniformly from 1..=n
    let mc = |n: usize, b: usize, c: usize, seed: u64| -> (f64, f64) {
        let mut r = rng(seed);
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..draws {
            let mut ranks: Vec<usize> = sample(&mut r, n, c).into_iter().map(|i| i + 1).collect();
            ranks.sort_unstable();
            let x = ranks[b - 1] as f64;
            s += x;
            s2 += x * x;
        }
        let mean = s / draws as f64;
        let var = (s2 / draws as f64 - mean * mean) * draws as f64 / (draws - 1) as f64;
        (mean, (var / draws as f64).sqrt())
    };

    let g = analytics::gamma(1, 9, 100).unwrap();
    o.check(g == 10.1, format!("gamma(b=1, c=9, n=100) = {g} (exact 10.1)"));
    let (m, se) = mc(100, 1, 9, 1);
    o.check((m - 10.1).abs() <= 0.15, format!("MC mean {m:.4} (se {se:.4}), |diff| <= 0.15"));

    let mut seed = 10;
    for n in [50, 100, 200] {
        for b in [1, 2, 3] {
            for c in [5, 9, 14] {
                seed += 1;
                let g = analytics::gamma(b, c, n).unwrap();
                let (m, se) = mc(n, b, c, seed);
                let z = (m - g) / se;
                o.check(
                    z.abs() <= 3.0,
                    format!("n={n:<3} b={b} c={c:<2}: formula {g:8.4}  MC {m:8.4} +/- {se:.4}  z={z:+.1}"),
                );
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    o.check(secs < 30.0, format!("runtime {secs:.1}s < 30s"));
    o
}

// ------------------------------------------------------------------ 2, 3

fn random_rounds(seed: u64, count: usize) -> Vec<(usize, usize)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(4..2000);
            let c = r.random_range(1..n);
            (c, n)
        })
        .chain([(1, 4), (9, 100), (21, 500), (44, 2000)])
        .collect()
}

fn crit2() -> Outcome {
    let mut o = Outcome::new();
    let rounds = random_rounds(2, 20);
    let (mut boundaries, mut monotone, mut sigma) = (true, true, 0.0f64);
    for &(c, n) in &rounds {
        boundaries &= analytics::mu(c, c, n).unwrap() == 0.0 && analytics::mu(n, c, n).unwrap() == 1.0;
        let mut prev = -1.0;
        for j in c..=n {
            let m = analytics::mu(j, c, n).unwrap();
            monotone &= m >= prev;
            prev = m;
            sigma = sigma.max((analytics::sigma(j, c, n).unwrap() - (m - m * m).sqrt()).abs());
        }
    }
    o.check(boundaries, format!("mu(c,c,n) = 0 and mu(n,c,n) = 1 exactly on {} rounds", rounds.len()));
    o.check(monotone, "mu non-decreasing in j over every full scan".into());
    o.check(sigma <= 1e-12, format!("max |sigma - sqrt(mu - mu^2)| = {sigma:.1e}"));
    o
}

fn crit3() -> Outcome {
    let mut o = Outcome::new();
    let rounds = random_rounds(3, 20);
    let (mut bracket, mut single_flip) = (true, true);
    for &(c, n) in &rounds {
        let js = analytics::switch_index(c, n).unwrap();
        let before = analytics::mu(js - 1, c, n).unwrap();
        let at = analytics::mu(js, c, n).unwrap();
        bracket &= before < 0.5 && 0.5 <= at;
        let guards: Vec<bool> = (c..=n).map(|j| analytics::relaxation_guard(j, c, n).unwrap()).collect();
        let flips = guards.windows(2).filter(|w| w[0] != w[1]).count();
        single_flip &= flips == 1 && guards[js - c] && !guards[js - c - 1];
        if !(before < 0.5 && 0.5 <= at) {
            o.note(format!("c={c} n={n} j*={js}: mu {before} / {at}"));
        }
    }
    o.check(bracket, format!("mu(j*-1) < 1/2 <= mu(j*) on {} rounds", rounds.len()));
    o.check(single_flip, "guard false before j*, true from j* on, one flip".into());
    o
}

// ------------------------------------------------------------------ 4, 5

/// Defaults where they exist; SINGLE_REF elsewhere gets explicit parameters.
fn params(kind: StrategyKind, b: usize) -> StrategyParams {
    StrategyParams::defaults(kind, b).unwrap_or(StrategyParams::SingleRef {
        cutoff_fraction: 0.25,
        reference_rank: 2,
    })
}

fn crit4() -> Outcome {
    let mut o = Outcome::new();
    for kind in StrategyKind::ALL {
        let mut r = rng(400 + kind as u64);
        let (mut runs, mut bad) = (0, Vec::new());
        while runs < 200 {
            let b = r.random_range(2..=6);
            let n = r.random_range(b + 1..=100);
            let d = r.random_range(1..=8);
            let cfg = StrategyConfig::new(params(kind, b), b, n, r.random());
            if cfg.validate().is_err() {
                continue;
            }
            runs += 1;
            let stream = random_stream(&mut r, n, d);
            let trace = engine::run(&cfg, &stream).unwrap();
            let layout = cfg.build().unwrap().layout();
            let report = replay(&trace, &stream, Some(&layout));
            let chosen: Vec<&[f64]> = trace.positions.iter().map(|&p| stream[p - 1].vector.as_slice()).collect();
            let reference = ref_min_pairwise(&chosen);
            let mut k = 0;
            let mut forced_ok = true;
            for (i, dec) in trace.decisions.iter().enumerate() {
                forced_ok &= !dec.forced || layout.is_forced(i + 1, k);
                k += usize::from(dec.accept);
            }
            let ok = report.passed
                && trace.accepted_count() == b
                && (trace.reward - reference).abs() <= 1e-12 * (1.0 + reference)
                && forced_ok
                && trace.failed == (trace.forced_count() > 0);
            if !ok {
                bad.push(format!("N={n} b={b} d={d}: {}", report.message));
            }
        }
        o.check(bad.is_empty(), format!("{:<11} 200 streams, {} inconsistent", kind.name(), bad.len()));
        bad.iter().take(3).for_each(|l| o.note(l.clone()));
    }
    o
}

fn crit5() -> Outcome {
    let mut o = Outcome::new();
    let started = Instant::now();
    let (n, b) = (12, 3);
    let mut r = rng(5);
    let kinds: Vec<StrategyKind> = StrategyKind::ALL
        .into_iter()
        .filter(|&k| StrategyConfig::new(params(k, b), b, n, 0).validate().is_ok())
        .collect();
    let mut above = vec![0usize; kinds.len()];
    let (mut greedy_bad, mut oracle_bad) = (0, 0);
    for i in 0..500 {
        let d = r.random_range(1..=8);
        let stream = random_stream(&mut r, n, d);
        let exact = oracle::brute_force(&stream, b).unwrap();
        let best = ref_optimum(&stream, b);
        oracle_bad += usize::from((exact.value - best).abs() > 1e-12 * (1.0 + best));
        let g = oracle::greedy_maxmin(&stream, b).unwrap().value;
        greedy_bad += usize::from(!(g >= exact.value / 2.0 && g <= exact.value));
        for (slot, &k) in kinds.iter().enumerate() {
            let t = engine::run(&StrategyConfig::new(params(k, b), b, n, i), &stream).unwrap();
            above[slot] += usize::from(t.reward > exact.value);
        }
    }
    o.check(oracle_bad == 0, format!("brute force equals bitmask reference on 500/500 ({oracle_bad} off)"));
    for (k, a) in kinds.iter().zip(&above) {
        o.check(*a == 0, format!("{:<11} reward <= D* on all 500 ({a} above)", k.name()));
    }
    o.check(greedy_bad == 0, format!("greedy in [D*/2, D*] on all 500 ({greedy_bad} outside)"));
    let secs = started.elapsed().as_secs_f64();
    o.check(secs < 60.0, format!("runtime {secs:.1}s < 60s"));
    o
}

// ------------------------------------------------------------------ 6–10

const N: usize = 5000;
const B: usize = 10;
const D: usize = 256;
const T: usize = 100;
const SEED: u64 = 0;

const MAIN: [StrategyKind; 5] = [
    StrategyKind::Frm,
    StrategyKind::Mean,
    StrategyKind::Kleinberg,
    StrategyKind::Optimistic,
    StrategyKind::Submodular,
];

fn main_config() -> ExperimentConfig {
    ExperimentConfig {
        dataset: DatasetSpec::Synthetic { n: N, d: D, seed: SEED },
        strategies: MAIN
            .iter()
            .map(|&k| StrategyEntry::new(StrategyParams::defaults(k, B).unwrap()))
            .collect(),
        budget: B,
        trials: T,
        base_seed: SEED,
    }
}

fn crit6(dataset: &Dataset, result: &ExperimentResult) -> Outcome {
    let mut o = Outcome::new();
    let bounds: [(StrategyKind, f64, f64); 5] = [
        (StrategyKind::Frm, 0.0, 2.0),
        (StrategyKind::Mean, 0.0, 2.0),
        (StrategyKind::Kleinberg, 85.0, 100.0),
        (StrategyKind::Optimistic, 75.0, 100.0),
        (StrategyKind::Submodular, 90.0, 100.0),
    ];
    for (kind, lo, hi) in bounds {
        let s = result.stats.get(kind.name()).unwrap();
        o.check(
            (lo..=hi).contains(&s.failure_rate),
            format!(
                "{:<11} failure {:5.1}% in [{lo}, {hi}], median D {:.3}",
                kind.name(),
                s.failure_rate,
                s.median
            ),
        );
    }
    // no b = 10 parameters ship for SINGLE_REF: b = 5 defaults at b = 5
    let config = ExperimentConfig {
        strategies: vec![StrategyEntry::new(StrategyParams::defaults(StrategyKind::SingleRef, 5).unwrap())],
        budget: 5,
        ..main_config()
    };
    let s = harness::run_on_dataset(&config, dataset).unwrap().stats.strategies.remove(0);
    o.check(
        (45.0..=80.0).contains(&s.failure_rate),
        format!(
            "SINGLE_REF  failure {:5.1}% in [45, 80] at b=5, median D {:.3}",
            s.failure_rate, s.median
        ),
    );
    o
}

fn crit7(result: &ExperimentResult) -> Outcome {
    let mut o = Outcome::new();
    let rewards = |kind: StrategyKind| -> Vec<f64> { result.records_of(kind.name()).map(|r| r.reward).collect() };
    let frm = rewards(StrategyKind::Frm);
    let others: Vec<(StrategyKind, Vec<f64>)> = MAIN[1..].iter().map(|&k| (k, rewards(k))).collect();
    let median = |v: &[f64], idx: &[usize]| {
        let mut s: Vec<f64> = idx.iter().map(|&i| v[i]).collect();
        s.sort_by(f64::total_cmp);
        harness::nearest_rank(&s, 0.5)
    };
    let mut r = rng(7);
    let mut wins = 0;
    let mut per = vec![0; others.len()];
    for _ in 0..100 {
        let idx: Vec<usize> = (0..T).map(|_| r.random_range(0..T)).collect();
        let f = median(&frm, &idx);
        let beat: Vec<bool> = others.iter().map(|(_, v)| f > median(v, &idx)).collect();
        beat.iter().zip(per.iter_mut()).for_each(|(&w, c)| *c += usize::from(w));
        wins += usize::from(beat.iter().all(|&w| w));
    }
    for ((k, _), c) in others.iter().zip(&per) {
        o.note(format!("FRM median > {:<11} in {c}/100 resamples", k.name()));
    }
    o.check(wins >= 95, format!("FRM strictly best in {wins}/100 bootstrap resamples (>= 95)"));
    o
}

fn crit8(dataset: &Dataset) -> Outcome {
    let mut o = Outcome::new();
    // tune on a different dataset and trial seeds than the evaluation run
    let tune_base = ExperimentConfig {
        dataset: DatasetSpec::Synthetic { n: N, d: D, seed: 800 },
        trials: 30,
        base_seed: 800,
        ..main_config()
    };
    let report = harness::tune_delta(&tune_base, &[200.0, 300.0, 412.0, 500.0], &[36.0, 72.0, 144.0], None, 2.0)
        .unwrap();
    let Some(best) = report.best else {
        o.check(false, "no exponential schedule within 2% failure during tuning".into());
        return o;
    };
    o.note(format!(
        "tuned on 30 separate trials: v1={} v2={} (median {:.3}, constant {:.3})",
        best.shift, best.scale, best.median, report.constant_median
    ));
    let frm = |delta| StrategyParams::Frm { delta, cutoff: None };
    let config = ExperimentConfig {
        strategies: vec![
            StrategyEntry::labeled("CONSTANT", frm(DeltaSchedule::Constant)),
            StrategyEntry::labeled("TUNED", frm(DeltaSchedule::exponential(best.shift, best.scale).unwrap())),
        ],
        ..main_config()
    };
    let stats = harness::run_on_dataset(&config, dataset).unwrap().stats;
    let (c, t) = (stats.get("CONSTANT").unwrap(), stats.get("TUNED").unwrap());
    o.check(
        t.median >= c.median,
        format!("evaluation median: tuned {:.3} >= constant {:.3}", t.median, c.median),
    );
    o.check(t.failure_rate <= 2.0, format!("tuned failure {:.1}% <= 2%", t.failure_rate));
    o
}

fn crit9() -> Outcome {
    let mut o = Outcome::new();
    let sizes = [2000, 4000, 8000];
    for (kind, ok) in [
        (StrategyKind::Frm, (|r: f64| r <= 2.5) as fn(f64) -> bool),
        (StrategyKind::DynSimpleK, |r: f64| r >= 3.2),
    ] {
        let table =
            harness::scaling_benchmark(StrategyParams::defaults(kind, 10).unwrap(), &sizes, 5, 64, 10, 9).unwrap();
        let times: Vec<String> = table.rows.iter().map(|r| format!("{:.4}s", r.median_time)).collect();
        let ratios: Vec<String> = table.ratios.iter().map(|r| format!("{r:.2}")).collect();
        let bound = if kind == StrategyKind::Frm { "<= 2.5" } else { ">= 3.2" };
        o.check(
            table.ratios.iter().all(|&r| ok(r)),
            format!(
                "{:<11} times {}  doubling ratios {} ({bound})",
                kind.name(),
                times.join(" "),
                ratios.join(", ")
            ),
        );
    }
    o
}

fn crit10(dataset: &Dataset, first: &ExperimentResult) -> Outcome {
    let mut o = Outcome::new();
    let again = harness::run_on_dataset(&main_config(), dataset).unwrap();
    let (a, b) = (
        harness::records_csv(&first.records, false),
        harness::records_csv(&again.records, false),
    );
    o.check(
        a == b,
        format!("{} rows, {} bytes, identical across two executions", first.records.len(), a.len()),
    );
    o
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |id: usize, title: &str, run: &mut dyn FnMut() -> Outcome| {
        let started = Instant::now();
        let out = run();
        println!(
            "criterion {id:>2} {}: {title} ({:.1}s)",
            if out.pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
        for line in &out.details {
            println!("    {line}");
        }
        all &= out.pass;
    };

    report(1, "rank expectation vs Monte Carlo", &mut crit1);
    report(2, "acceptance mean boundaries, monotonicity, deviation", &mut crit2);
    report(3, "switch index brackets one half; single guard flip", &mut crit3);
    report(4, "engine and metrics consistency on random streams", &mut crit4);
    report(5, "oracle dominance at N=12, b=3", &mut crit5);

    let dataset = data::generate_random_walks(N, D, SEED).unwrap();
    let started = Instant::now();
    let main_result = harness::run_on_dataset(&main_config(), &dataset).unwrap();
    println!(
        "(main experiment N={N} b={B} d={D} T={T} seed={SEED}: {:.1}s)",
        started.elapsed().as_secs_f64()
    );
    print!("{}", harness::render_table(&[("synthetic", &main_result.stats)]));

    report(6, "failure-rate replication", &mut || crit6(&dataset, &main_result));
    report(7, "quality ordering under bootstrap", &mut || crit7(&main_result));
    report(8, "tuned exponential schedule vs constant", &mut || crit8(&dataset));
    report(9, "wall-time scaling", &mut crit9);
    report(10, "determinism of result CSV", &mut || crit10(&dataset, &main_result));

    if all {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: at least one criterion failed");
        ExitCode::FAILURE
    }
}
