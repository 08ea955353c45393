//! Single learning phase of `⌊N/e⌋` steps; with `k` instances selected the
//! threshold is the `(b−k)`-th best learning-phase score.

use super::kleinberg::secretary_cutoff;
use super::{DescendingScores, Layout, Proposal, StepView, Strategy, StrategyKind};

pub(crate) fn cutoff(horizon: usize) -> usize {
    secretary_cutoff(horizon)
}

#[derive(Debug, Clone)]
pub struct Optimistic {
    budget: usize,
    horizon: usize,
    cutoff: usize,
    learning: DescendingScores,
}

impl Optimistic {
    pub fn new(budget: usize, horizon: usize) -> Self {
        Self {
            budget,
            horizon,
            cutoff: cutoff(horizon),
            learning: DescendingScores::default(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Threshold in force with `selected` instances already accepted.
    pub fn threshold(&self, selected: usize) -> Option<f64> {
        self.learning.rank_clamped(self.budget.saturating_sub(selected))
    }
}

impl Strategy for Optimistic {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Optimistic
    }

    fn layout(&self) -> Layout {
        Layout::single(self.horizon, self.budget)
    }

    fn decide(&mut self, view: &StepView<'_>) -> Proposal {
        if view.step <= self.cutoff {
            return Proposal::reject();
        }
        Proposal::strict(view.score, self.threshold(view.selected()))
    }

    fn commit(&mut self, view: &StepView<'_>, _accepted: bool) {
        if view.step <= self.cutoff {
            if let Some(s) = view.score {
                self.learning.insert(s);
            }
        }
    }
}
