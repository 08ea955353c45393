//! Grid over exponential δ schedules against δ = 1 for FRM on synthetic
//! walks.
//!
//! cargo run --release --example tune_delta -- [trials]

use streamdiv::harness::{self, DatasetSpec, ExperimentConfig, StrategyEntry};
use streamdiv::strategies::{StrategyKind, StrategyParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials: usize = std::env::args().nth(1).map_or(Ok(20), |a| a.parse())?;
    let base = ExperimentConfig {
        dataset: DatasetSpec::Synthetic { n: 5000, d: 64, seed: 2 },
        strategies: vec![StrategyEntry::new(StrategyParams::defaults(StrategyKind::Frm, 10)?)],
        budget: 10,
        trials,
        base_seed: 100,
    };
    let report = harness::tune_delta(&base, &[250.0, 350.0, 412.0], &[36.0, 72.0], None, 2.0)?;
    println!("constant: median {:.3}, failure {:.1}%", report.constant_median, report.constant_failure_rate);
    for p in &report.grid {
        println!("v1={} v2={}: median {:.3}, failure {:.1}%", p.shift, p.scale, p.median, p.failure_rate);
    }
    if let Some(b) = report.best {
        println!("best v1={} v2={}", b.shift, b.scale);
    }
    Ok(())
}
