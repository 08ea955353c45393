//! Run FRM, serialize the decision trace, parse it back and verify it
//! against the stream with the independent replayer.

use streamdiv::strategies::{StrategyConfig, StrategyKind};
use streamdiv::{data, engine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = data::generate_random_walks(400, 32, 3)?;
    let stream = data::reshuffle(&ds, 11);
    let cfg = StrategyConfig::with_defaults(StrategyKind::Frm, 4, 400, 11)?;
    let trace = engine::run(&cfg, &stream)?;

    let text = engine::write_trace(&trace);
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("... {} lines", text.lines().count());

    let parsed = engine::parse_trace(&text)?;
    let report = engine::replay(&parsed, &stream, None);
    println!("replay passed: {} {}", report.passed, report.message);

    let mut tampered = parsed.clone();
    let step = tampered.positions[1] - 1;
    tampered.decisions[step].accept = false;
    let report = engine::replay(&tampered, &stream, None);
    println!(
        "tampered replay passed: {} (first divergence {:?})",
        report.passed, report.first_divergence
    );
    Ok(())
}
