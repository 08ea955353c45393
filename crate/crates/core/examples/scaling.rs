//! Wall-time growth of FRM against the quadratic DYN_SIMPLEK.
//!
//! cargo run --release --example scaling

use streamdiv::harness;
use streamdiv::strategies::{StrategyKind, StrategyParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sizes = [1000, 2000, 4000];
    for kind in [StrategyKind::Frm, StrategyKind::DynSimpleK] {
        let table = harness::scaling_benchmark(StrategyParams::defaults(kind, 10)?, &sizes, 3, 64, 10, 0)?;
        let times: Vec<String> = table.rows.iter().map(|r| format!("{:.4}s", r.median_time)).collect();
        let ratios: Vec<String> = table.ratios.iter().map(|r| format!("{r:.2}")).collect();
        println!("{:<12} {}  doubling ratios {}", table.strategy, times.join(" "), ratios.join(" "));
    }
    Ok(())
}
