//! Plugging a user-defined policy into the engine: accept whenever the score
//! beats a fixed value. The engine still enforces the budget and fills the
//! tail when the stream is about to run out.

use streamdiv::engine;
use streamdiv::strategies::{Layout, Proposal, StepView, Strategy, StrategyKind};
use streamdiv::data;

struct FixedThreshold {
    value: f64,
    budget: usize,
    horizon: usize,
}

impl Strategy for FixedThreshold {
    fn kind(&self) -> StrategyKind {
        // reported name in the trace; pick the closest family
        StrategyKind::SingleRef
    }

    fn layout(&self) -> Layout {
        Layout::single(self.horizon, self.budget)
    }

    fn decide(&mut self, view: &StepView<'_>) -> Proposal {
        Proposal::strict(view.score, Some(self.value))
    }

    fn commit(&mut self, _view: &StepView<'_>, _accepted: bool) {}
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = data::generate_random_walks(1000, 32, 1)?;
    let stream = data::reshuffle(&ds, 1);
    for value in [5.0, 8.0, 9.5] {
        let mut s = FixedThreshold {
            value,
            budget: 6,
            horizon: stream.len(),
        };
        let trace = engine::run_strategy(&mut s, 6, &stream)?;
        println!(
            "threshold {value}: positions {:?} reward {:.3} forced {}",
            trace.positions,
            trace.reward,
            trace.forced_count()
        );
    }
    Ok(())
}
