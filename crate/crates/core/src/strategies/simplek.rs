//! Half-stream storage strategies.
//!
//! The first `⌊N/2⌋` instances are stored and rejected. From them an offline
//! threshold `γ_off` is computed: the largest pairwise distance value for
//! which a greedy left-to-right pass over the stored instances still keeps
//! `b` of them pairwise at least that far apart. The next instance is
//! accepted unconditionally; afterwards an instance is accepted when its
//! score is at least the threshold.
//!
//! The dynamic variant caps `γ_off` by `γ_j`, the empirical
//! `(1 − (b−k)/(N−j))`-quantile of the current scores of every stored and
//! previously seen unselected instance. Maintaining those scores and taking
//! the quantile costs `O(N)` per step, `O(N²)` overall.

use super::{Layout, Proposal, StepView, Strategy, StrategyKind};
use crate::metrics::{squared_l2, Instance};

/// Number of instances a greedy pass keeps when every kept instance must be
/// at least `threshold` away from all previously kept ones. Stops counting
/// at `limit`.
pub fn greedy_chain_count(stored: &[Instance], threshold: f64, limit: usize) -> usize {
    let mut kept: Vec<&Instance> = Vec::with_capacity(limit);
    for x in stored {
        if kept.len() >= limit {
            break;
        }
        if kept
            .iter()
            .all(|k| squared_l2(&k.vector, &x.vector).sqrt() >= threshold)
        {
            kept.push(x);
        }
    }
    kept.len()
}

/// Offline threshold `γ_off` for budget `budget`, by binary search over the
/// sorted distinct pairwise distances of `stored`.
///
/// Returns `None` when fewer than `budget` instances are stored.
pub fn simplek_offline_threshold(stored: &[Instance], budget: usize) -> Option<f64> {
    if stored.len() < budget || budget == 0 {
        return None;
    }
    if stored.len() < 2 {
        // no pairs to choose from
        return Some(0.0);
    }
    let mut dists = Vec::with_capacity(stored.len() * (stored.len() - 1) / 2);
    for (i, a) in stored.iter().enumerate() {
        for b in &stored[i + 1..] {
            dists.push(squared_l2(&a.vector, &b.vector).sqrt());
        }
    }
    dists.sort_unstable_by(f64::total_cmp);
    dists.dedup();
    // the smallest pairwise distance keeps every stored instance
    let (mut lo, mut hi) = (0usize, dists.len());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if greedy_chain_count(stored, dists[mid], budget) >= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(dists[lo])
}

/// Empirical quantile by the nearest-rank rule on an unsorted buffer.
fn nearest_rank(values: &mut [f64], q: f64) -> f64 {
    let m = values.len();
    let rank = ((q * m as f64).ceil() as usize).clamp(1, m);
    let (_, v, _) = values.select_nth_unstable_by(rank - 1, f64::total_cmp);
    *v
}

#[derive(Debug, Clone)]
pub struct SimpleK {
    budget: usize,
    horizon: usize,
    half: usize,
    dynamic: bool,
    stored: Vec<Instance>,
    offline: Option<f64>,
    pool: Vec<Vec<f64>>,
    pool_min: Vec<f64>,
    scratch: Vec<f64>,
}

impl SimpleK {
    pub fn new(budget: usize, horizon: usize, dynamic: bool) -> Self {
        let half = horizon / 2;
        Self {
            budget,
            horizon,
            half,
            dynamic,
            stored: Vec::with_capacity(half),
            offline: None,
            pool: Vec::new(),
            pool_min: Vec::new(),
            scratch: Vec::new(),
        }
    }

    pub fn offline_threshold(&self) -> Option<f64> {
        self.offline
    }

    /// The dynamic threshold `γ_j` at 1-based `step` with `selected`
    /// instances accepted.
    pub fn quantile_threshold(&mut self, step: usize, selected: usize) -> f64 {
        let remaining = self.horizon - step;
        let slots = self.budget.saturating_sub(selected);
        if remaining == 0 || slots >= remaining || self.pool_min.is_empty() {
            return 0.0;
        }
        let q = 1.0 - slots as f64 / remaining as f64;
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.pool_min);
        nearest_rank(&mut self.scratch, q)
    }

    fn absorb_selected(&mut self, x: &Instance) {
        for (v, m) in self.pool.iter().zip(self.pool_min.iter_mut()) {
            *m = m.min(squared_l2(v, &x.vector).sqrt());
        }
    }
}

impl Strategy for SimpleK {
    fn kind(&self) -> StrategyKind {
        if self.dynamic {
            StrategyKind::DynSimpleK
        } else {
            StrategyKind::SimpleK
        }
    }

    fn layout(&self) -> Layout {
        Layout {
            accepts_first: false,
            ..Layout::single(self.horizon, self.budget)
        }
    }

    fn decide(&mut self, view: &StepView<'_>) -> Proposal {
        if view.step <= self.half {
            return Proposal::reject();
        }
        if view.step == self.half + 1 {
            return Proposal {
                accept: true,
                threshold: None,
            };
        }
        let offline = self.offline.unwrap_or(0.0);
        let threshold = if self.dynamic {
            offline.min(self.quantile_threshold(view.step, view.selected()))
        } else {
            offline
        };
        let accept = view.score.is_some_and(|s| s >= threshold);
        Proposal {
            accept,
            threshold: Some(threshold),
        }
    }

    fn commit(&mut self, view: &StepView<'_>, accepted: bool) {
        if view.step <= self.half {
            self.stored.push(view.instance.clone());
            if view.step == self.half {
                self.offline = simplek_offline_threshold(&self.stored, self.budget);
                if self.dynamic {
                    self.pool = self.stored.iter().map(|x| x.vector.clone()).collect();
                    self.pool_min = vec![f64::INFINITY; self.pool.len()];
                }
            }
            return;
        }
        if !self.dynamic {
            return;
        }
        if accepted {
            self.absorb_selected(view.instance);
        } else {
            self.pool.push(view.instance.vector.clone());
            self.pool_min.push(view.score.unwrap_or(f64::INFINITY));
        }
    }
}
