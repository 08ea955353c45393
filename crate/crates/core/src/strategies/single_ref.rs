//! Single reference: reject the first `⌊f·N⌋` steps, then accept any score
//! above the `r`-th best learning-phase score until the budget is filled.

use super::{DescendingScores, Layout, Proposal, StepView, Strategy, StrategyKind};

/// Published `(cutoff fraction, reference rank)` pairs.
pub(crate) fn default_params(budget: usize) -> Option<(f64, usize)> {
    match budget {
        5 => Some((0.2525, 2)),
        50 => Some((0.1536, 9)),
        _ => None,
    }
}

pub(crate) fn cutoff(fraction: f64, horizon: usize) -> usize {
    // tolerate representation error in fractions such as 0.1536
    (fraction * horizon as f64 + 1e-9).floor() as usize
}

#[derive(Debug, Clone)]
pub struct SingleRef {
    budget: usize,
    horizon: usize,
    cutoff: usize,
    rank: usize,
    learning: DescendingScores,
}

impl SingleRef {
    pub fn new(budget: usize, horizon: usize, cutoff_fraction: f64, reference_rank: usize) -> Self {
        Self {
            budget,
            horizon,
            cutoff: cutoff(cutoff_fraction, horizon),
            rank: reference_rank,
            learning: DescendingScores::default(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn threshold(&self) -> Option<f64> {
        self.learning.rank_clamped(self.rank)
    }
}

impl Strategy for SingleRef {
    fn kind(&self) -> StrategyKind {
        StrategyKind::SingleRef
    }

    fn layout(&self) -> Layout {
        Layout::single(self.horizon, self.budget)
    }

    fn decide(&mut self, view: &StepView<'_>) -> Proposal {
        if view.step <= self.cutoff {
            return Proposal::reject();
        }
        Proposal::strict(view.score, self.threshold())
    }

    fn commit(&mut self, view: &StepView<'_>, _accepted: bool) {
        if view.step <= self.cutoff {
            if let Some(s) = view.score {
                self.learning.insert(s);
            }
        }
    }
}
