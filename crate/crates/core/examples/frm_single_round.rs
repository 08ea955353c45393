//! One FRM round driven by a hand-written score sequence, showing the static
//! threshold, the switch and the relaxed thresholds.

use streamdiv::analytics::{DeltaSchedule, RoundParams};
use streamdiv::strategies::frm_round;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scores = [4.0, 7.0, 5.0, 3.0, 4.5, 2.0, 1.0, 6.0, 1.0];
    // cutoff 2, switch at step 4, δ = 1 per step
    let params = RoundParams::with_switch(scores.len(), 2, 4, DeltaSchedule::Constant)?;
    let out = frm_round(&scores, &params);
    for (j, (s, d)) in scores.iter().zip(&out.decisions).enumerate() {
        let thr = d.threshold.map_or("-".to_string(), |t| format!("{t}"));
        println!("step {} score {s:<4} threshold {thr:<4} accept {}", j + 1, d.accept);
    }
    println!("accepted at step {} (forced: {})", out.accepted_at, out.forced);

    // decreasing scores never beat the learning maximum: the round ends forced
    let falling: Vec<f64> = (0..9).rev().map(f64::from).collect();
    let static_only = RoundParams::with_cutoff(9, 2, DeltaSchedule::exponential(1e6, 1.0)?)?;
    let out = frm_round(&falling, &static_only);
    println!("falling scores: accepted at {} forced {}", out.accepted_at, out.forced);
    Ok(())
}
