//! Classic secretary inside each of `b` rounds: reject the first
//! `⌊N/(b·e)⌋` steps of the round, then take the first score above the
//! best of them. Exactly one acceptance per round.

use super::{Layout, Proposal, StepView, Strategy, StrategyKind};

#[derive(Debug, Clone)]
pub struct Submodular {
    cutoff: usize,
    layout: Layout,
    round: usize,
    best: Option<f64>,
}

impl Submodular {
    pub fn new(budget: usize, horizon: usize) -> Self {
        let cutoff = (horizon as f64 / (budget as f64 * std::f64::consts::E)).floor() as usize;
        Self {
            cutoff,
            layout: Layout::rounds(horizon, budget),
            round: 0,
            best: None,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn sync(&mut self, step: usize) -> usize {
        let r = self.layout.segment_of(step);
        if r != self.round {
            self.round = r;
            self.best = None;
        }
        step + 1 - self.layout.segments[r].start
    }
}

impl Strategy for Submodular {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Submodular
    }

    fn layout(&self) -> Layout {
        self.layout.clone()
    }

    fn decide(&mut self, view: &StepView<'_>) -> Proposal {
        let i = self.sync(view.step);
        if self.round == 0 || i <= self.cutoff {
            return Proposal::reject();
        }
        Proposal::strict(view.score, self.best)
    }

    fn commit(&mut self, view: &StepView<'_>, _accepted: bool) {
        let i = self.sync(view.step);
        if i <= self.cutoff {
            if let Some(s) = view.score {
                self.best = Some(self.best.map_or(s, |b| b.max(s)));
            }
        }
    }
}
