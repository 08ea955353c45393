//! Paired comparison of every strategy on shuffled synthetic random walks.
//!
//! cargo run --release --example synthetic_experiment -- [trials] [b]

use streamdiv::harness::{self, DatasetSpec, ExperimentConfig, StrategyEntry};
use streamdiv::strategies::{StrategyKind, StrategyParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let trials: usize = args.next().map_or(Ok(20), |a| a.parse())?;
    let b: usize = args.next().map_or(Ok(10), |a| a.parse())?;

    let mut strategies = Vec::new();
    for kind in [
        StrategyKind::Frm,
        StrategyKind::Kleinberg,
        StrategyKind::Optimistic,
        StrategyKind::Mean,
        StrategyKind::Submodular,
        StrategyKind::SingleRef,
    ] {
        match StrategyParams::defaults(kind, b) {
            Ok(p) => strategies.push(StrategyEntry::new(p)),
            Err(e) => eprintln!("skipping {}: {e}", kind.name()),
        }
    }
    let config = ExperimentConfig {
        dataset: DatasetSpec::Synthetic { n: 5000, d: 256, seed: 1 },
        strategies,
        budget: b,
        trials,
        base_seed: 1,
    };
    let result = harness::run_experiment(&config)?;
    println!("{}", harness::render_table(&[("random walks", &result.stats)]));
    for s in &result.stats.strategies {
        println!(
            "{:<12} q1={:.3} median={:.3} q3={:.3} mean time={:.4}s",
            s.strategy, s.q1, s.median, s.q3, s.mean_time
        );
    }
    Ok(())
}
