//! Round-level model behind FRM: rank expectation, conditional acceptance
//! mean and deviation, switch index and δ schedules.
//!
//! cargo run --example switch_and_schedule -- [round length]

use streamdiv::analytics::{self, DeltaSchedule, RoundParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(500), |a| a.parse())?;
    let c = analytics::cutoff(n)?;
    let switch = analytics::switch_index(c, n)?;
    println!("n={n} cutoff c={c} switch j*={switch}");
    println!("gamma(1,c) = {:.4}", analytics::gamma(1, c, n)?);

    for j in [c, c + 1, (c + switch) / 2, switch - 1, switch, (switch + n) / 2, n] {
        let mu = analytics::mu(j, c, n)?;
        println!(
            "j={j:>4} mu={mu:.4} sigma={:.4} relax={}",
            analytics::sigma_from_mu(mu),
            analytics::relaxation_guard(j, c, n)?
        );
    }

    let tuned = DeltaSchedule::TUNED;
    for j in [switch, 412, 450, n] {
        println!("delta_{j}: constant={} tuned={}", DeltaSchedule::Constant.delta(j), tuned.delta(j));
    }
    let p = RoundParams::new(n, tuned)?;
    println!("{p:?}");
    Ok(())
}
