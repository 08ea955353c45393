//! Recursive multiple-choice secretary.
//!
//! A node covering steps `[start, end)` with budget `b` draws
//! `m ~ Binom(end − start, 1/2)`, delegates the prefix `[start, start + m)`
//! to a child with budget `⌊b/2⌋`, and after the prefix accepts anything
//! beating the `⌊b/2⌋`-th best score seen in the prefix until its budget is
//! used. A budget-1 node is the classic secretary rule with cutoff
//! `⌊len/e⌋`. Slots the child leaves unused roll into the post-prefix phase.
//!
//! All Binomial draws are made up front from the strategy seed, so the tree
//! depends on nothing but the seed and the horizon.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{DescendingScores, Layout, Proposal, StepView, Strategy, StrategyKind};

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf {
        cutoff: usize,
        best: Option<f64>,
    },
    Split {
        mid: usize,
        keep: usize,
        prefix: DescendingScores,
        child: Box<Node>,
    },
}

#[derive(Debug, Clone)]
struct Node {
    start: usize,
    end: usize,
    budget: usize,
    accepted: usize,
    kind: NodeKind,
}

impl Node {
    fn build(start: usize, end: usize, budget: usize, rng: &mut ChaCha8Rng) -> Self {
        let len = end - start;
        let kind = if budget <= 1 {
            NodeKind::Leaf {
                cutoff: secretary_cutoff(len),
                best: None,
            }
        } else {
            let m = Binomial::new(len as u64, 0.5)
                .expect("p = 1/2 is a valid probability")
                .sample(rng) as usize;
            let keep = budget / 2;
            NodeKind::Split {
                mid: start + m,
                keep,
                prefix: DescendingScores::default(),
                child: Box::new(Node::build(start, start + m, keep, rng)),
            }
        };
        Node {
            start,
            end,
            budget,
            accepted: 0,
            kind,
        }
    }

    fn decide(&self, pos: usize, score: Option<f64>) -> Proposal {
        debug_assert!(pos >= self.start && pos < self.end);
        if self.accepted >= self.budget {
            return Proposal::reject();
        }
        match &self.kind {
            NodeKind::Leaf { cutoff, best } => {
                if pos < self.start + cutoff {
                    Proposal::reject()
                } else {
                    Proposal::strict(score, *best)
                }
            }
            NodeKind::Split {
                mid,
                keep,
                prefix,
                child,
            } => {
                if pos < *mid {
                    child.decide(pos, score)
                } else {
                    Proposal::strict(score, prefix.rank_clamped(*keep))
                }
            }
        }
    }

    fn record(&mut self, pos: usize, score: Option<f64>, accepted: bool) {
        if accepted {
            self.accepted += 1;
        }
        let start = self.start;
        match &mut self.kind {
            NodeKind::Leaf { cutoff, best } => {
                if pos < start + *cutoff {
                    if let Some(s) = score {
                        *best = Some(best.map_or(s, |b: f64| b.max(s)));
                    }
                }
            }
            NodeKind::Split {
                mid, prefix, child, ..
            } => {
                if pos < *mid {
                    if let Some(s) = score {
                        prefix.insert(s);
                    }
                    child.record(pos, score, accepted);
                }
            }
        }
    }

    /// Prefix split points from the root down, for inspection.
    fn splits(&self, out: &mut Vec<(usize, usize)>) {
        if let NodeKind::Split {
            mid, keep, child, ..
        } = &self.kind
        {
            out.push((*mid, *keep));
            child.splits(out);
        }
    }
}

/// Classic secretary cutoff `⌊len/e⌋`.
pub(crate) fn secretary_cutoff(len: usize) -> usize {
    (len as f64 / std::f64::consts::E).floor() as usize
}

#[derive(Debug, Clone)]
pub struct Kleinberg {
    budget: usize,
    horizon: usize,
    root: Node,
}

impl Kleinberg {
    pub fn new(budget: usize, horizon: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            budget,
            horizon,
            root: Node::build(0, horizon, budget, &mut rng),
        }
    }

    /// `(prefix end, prefix budget)` of each recursion level, 0-based
    /// exclusive ends, outermost first.
    pub fn splits(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.root.splits(&mut out);
        out
    }

    /// Cutoff of the innermost (budget-1) secretary node, with its range.
    pub fn leaf(&self) -> (usize, usize, usize) {
        let mut node = &self.root;
        loop {
            match &node.kind {
                NodeKind::Leaf { cutoff, .. } => return (node.start, node.end, *cutoff),
                NodeKind::Split { child, .. } => node = child,
            }
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

impl Strategy for Kleinberg {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Kleinberg
    }

    fn layout(&self) -> Layout {
        Layout::single(self.horizon, self.budget)
    }

    fn decide(&mut self, view: &StepView<'_>) -> Proposal {
        self.root.decide(view.step - 1, view.score)
    }

    fn commit(&mut self, view: &StepView<'_>, accepted: bool) {
        self.root.record(view.step - 1, view.score, accepted);
    }
}
