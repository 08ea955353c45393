//! Objective layer: distances, set minimum distances, instance scores, the
//! final reward and the failure indicator.
//!
//! Every score in this crate is a minimum Euclidean distance:
//!
//! - a *candidate score* is the distance from an arriving instance to the
//!   closest already-selected instance;
//! - a *selected score* is the leave-one-out version of the same quantity for
//!   an instance that is already in the selection;
//! - the *reward* of a complete selection is the smallest pairwise distance
//!   inside it, which is also the smallest selected score.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("instance set is empty")]
    EmptySet,
    #[error("need at least {needed} instances, got {got}")]
    TooFewInstances { needed: usize, got: usize },
    #[error("no instance has been selected yet")]
    EmptySelection,
    #[error("selection index {index} out of range for {len} selected instances")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("selection is incomplete: {selected} of {budget} slots filled")]
    IncompleteSelection { selected: usize, budget: usize },
    #[error("empty sequence of trial flags")]
    NoTrials,
    #[error("unsupported metric: {0}")]
    UnsupportedMetric(String),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

/// Distance used between instances. Only Euclidean is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
}

impl std::str::FromStr for Metric {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Ok(Metric::Euclidean),
            other => Err(MetricsError::UnsupportedMetric(other.to_string())),
        }
    }
}

/// One element of a stream: a `d`-dimensional vector and its 1-based
/// position in the stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub id: usize,
    pub vector: Vec<f64>,
}

impl Instance {
    pub fn new(id: usize, vector: Vec<f64>) -> Self {
        Self { id, vector }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }
}

/// Euclidean distance between two coordinate slices.
pub fn distance_slices(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(MetricsError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(squared_l2(a, b).sqrt())
}

#[inline]
pub(crate) fn squared_l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let diff = x - y;
            diff * diff
        })
        .sum()
}

/// Euclidean distance between two instances.
pub fn distance(a: &Instance, b: &Instance) -> Result<f64> {
    distance_slices(&a.vector, &b.vector)
}

/// Minimum distance over all cross pairs `(u, v)` with `u ∈ left`, `v ∈ right`.
pub fn mindist_between(left: &[Instance], right: &[Instance]) -> Result<f64> {
    if left.is_empty() || right.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let mut best = f64::INFINITY;
    for u in left {
        for v in right {
            best = best.min(distance(u, v)?);
        }
    }
    Ok(best)
}

/// Minimum distance over all unordered pairs of distinct members of `set`.
pub fn mindist_within(set: &[Instance]) -> Result<f64> {
    if set.len() < 2 {
        return Err(MetricsError::TooFewInstances {
            needed: 2,
            got: set.len(),
        });
    }
    let mut best = f64::INFINITY;
    for (i, u) in set.iter().enumerate() {
        for v in &set[i + 1..] {
            best = best.min(distance(u, v)?);
        }
    }
    Ok(best)
}

/// The ordered set of accepted instances together with their leave-one-out
/// scores.
///
/// Scores are maintained incrementally on [`SelectionState::push`]: the new
/// instance costs one distance evaluation per already-selected instance.
/// Because `min` is exact in floating point, the maintained values are
/// bit-identical to a from-scratch recomputation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SelectionState {
    selected: Vec<Instance>,
    positions: Vec<usize>,
    selected_scores: Vec<f64>,
}

impl SelectionState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a state from instances in acceptance order. Positions are the
    /// instances' stream ids and must be strictly increasing.
    pub fn from_instances(instances: impl IntoIterator<Item = Instance>) -> Result<Self> {
        let mut state = Self::new();
        for inst in instances {
            state.push(inst)?;
        }
        Ok(state)
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn selected(&self) -> &[Instance] {
        &self.selected
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Leave-one-out scores, aligned with [`SelectionState::selected`]. With a
    /// single selected instance the only score is `+inf` (no other instance).
    pub fn selected_scores(&self) -> &[f64] {
        &self.selected_scores
    }

    /// Appends an accepted instance.
    ///
    /// # Panics
    ///
    /// Panics if the instance's position does not come after the last
    /// selected position.
    pub fn push(&mut self, instance: Instance) -> Result<()> {
        if let Some(&last) = self.positions.last() {
            assert!(
                instance.id > last,
                "selection positions must be strictly increasing ({} after {last})",
                instance.id
            );
        }
        if let Some(first) = self.selected.first() {
            if first.dim() != instance.dim() {
                return Err(MetricsError::DimensionMismatch {
                    left: first.dim(),
                    right: instance.dim(),
                });
            }
        }
        let mut own = f64::INFINITY;
        for (other, score) in self.selected.iter().zip(self.selected_scores.iter_mut()) {
            let dist = squared_l2(&other.vector, &instance.vector).sqrt();
            *score = score.min(dist);
            own = own.min(dist);
        }
        self.positions.push(instance.id);
        self.selected.push(instance);
        self.selected_scores.push(own);
        Ok(())
    }

    /// Minimum distance from `vector` to any selected instance (no dimension
    /// check; used on the engine hot path).
    pub(crate) fn min_distance_to(&self, vector: &[f64]) -> f64 {
        self.selected
            .iter()
            .map(|s| squared_l2(&s.vector, vector).sqrt())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Score of an arriving instance: its minimum distance to the selection.
pub fn candidate_score(state: &SelectionState, x: &Instance) -> Result<f64> {
    if state.is_empty() {
        return Err(MetricsError::EmptySelection);
    }
    mindist_between(state.selected(), std::slice::from_ref(x))
}

/// Leave-one-out score of the selected instance at 0-based `index`,
/// recomputed from scratch.
pub fn selected_score(state: &SelectionState, index: usize) -> Result<f64> {
    let k = state.len();
    if k < 2 {
        return Err(MetricsError::TooFewInstances { needed: 2, got: k });
    }
    if index >= k {
        return Err(MetricsError::IndexOutOfRange { index, len: k });
    }
    let target = &state.selected()[index];
    let mut best = f64::INFINITY;
    for (l, other) in state.selected().iter().enumerate() {
        if l != index {
            best = best.min(distance(other, target)?);
        }
    }
    Ok(best)
}

/// Reward of a complete selection of `budget` instances.
///
/// Evaluates both formulations (minimum leave-one-out score and minimum
/// pairwise distance); they are equal by construction and the first is
/// returned.
pub fn reward(state: &SelectionState, budget: usize) -> Result<f64> {
    if state.len() != budget {
        return Err(MetricsError::IncompleteSelection {
            selected: state.len(),
            budget,
        });
    }
    let by_scores = state
        .selected_scores()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let by_pairs = mindist_within(state.selected())?;
    debug_assert_eq!(by_scores.to_bits(), by_pairs.to_bits());
    Ok(by_scores)
}

/// Failure indicator at 1-based step `step` of a stream of length
/// `horizon`, with `selected` instances accepted out of `budget`: true when
/// the remaining instances exactly match the remaining slots.
pub fn is_failure(step: usize, horizon: usize, selected: usize, budget: usize) -> bool {
    debug_assert!(step >= 1 && step <= horizon);
    budget > selected && horizon + 1 - step == budget - selected
}

/// Fraction of trials in which at least one failure occurred.
pub fn failure_rate(flags: &[bool]) -> Result<f64> {
    if flags.is_empty() {
        return Err(MetricsError::NoTrials);
    }
    Ok(flags.iter().filter(|&&f| f).count() as f64 / flags.len() as f64)
}
