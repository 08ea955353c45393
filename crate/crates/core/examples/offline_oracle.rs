//! Online strategies against the exact offline optimum and the
//! farthest-point greedy on a small random instance.

use streamdiv::strategies::{StrategyConfig, StrategyKind};
use streamdiv::{data, engine, oracle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, b) = (12, 3);
    let ds = data::generate_random_walks(n, 8, 42)?;
    let stream = data::reshuffle(&ds, 7);

    let exact = oracle::brute_force(&stream, b)?;
    let greedy = oracle::greedy_maxmin(&stream, b)?;
    println!("exact  D*={:.4} at {:?}", exact.value, exact.positions);
    println!("greedy D ={:.4} at {:?}", greedy.value, greedy.positions);

    for kind in [StrategyKind::Kleinberg, StrategyKind::Optimistic, StrategyKind::Mean, StrategyKind::Submodular] {
        let cfg = StrategyConfig::with_defaults(kind, b, n, 7)?;
        let trace = engine::run(&cfg, &stream)?;
        println!(
            "{:<11} reward {:.4} ({:.0}% of D*) at {:?} failed={}",
            kind.name(),
            trace.reward,
            100.0 * trace.reward / exact.value,
            trace.positions,
            trace.failed
        );
    }
    Ok(())
}
