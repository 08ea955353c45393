//! Hiring above the mean: accept an arriving instance when its score beats
//! the average leave-one-out score of the current selection.
//!
//! Bootstrap: the second instance is always rejected and its distance to the
//! first becomes the first instance's score until a second one is selected.

use super::{Layout, Proposal, StepView, Strategy, StrategyKind};

#[derive(Debug, Clone)]
pub struct Mean {
    budget: usize,
    horizon: usize,
    bootstrap: Option<f64>,
}

impl Mean {
    pub fn new(budget: usize, horizon: usize) -> Self {
        Self {
            budget,
            horizon,
            bootstrap: None,
        }
    }

    pub fn bootstrap(&self) -> Option<f64> {
        self.bootstrap
    }
}

impl Strategy for Mean {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Mean
    }

    fn layout(&self) -> Layout {
        Layout::single(self.horizon, self.budget)
    }

    fn decide(&mut self, view: &StepView<'_>) -> Proposal {
        if view.step <= 2 {
            return Proposal::reject();
        }
        let threshold = match view.selected() {
            0 => None,
            1 => self.bootstrap,
            k => Some(view.selection.selected_scores().iter().sum::<f64>() / k as f64),
        };
        Proposal::strict(view.score, threshold)
    }

    fn commit(&mut self, view: &StepView<'_>, _accepted: bool) {
        if view.step == 2 {
            self.bootstrap = view.score;
        }
    }
}
