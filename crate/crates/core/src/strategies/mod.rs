//! Online selection policies behind one interface.
//!
//! A [`Strategy`] sees the stream one step at a time through a [`StepView`]
//! and proposes accept/reject. The [`engine`](crate::engine) owns everything
//! that is a property of the setting rather than of a policy: the automatic
//! acceptance of the first instance, budget caps and forced fills.
//!
//! Implemented policies:
//!
//! | kind            | idea                                                        |
//! |-----------------|-------------------------------------------------------------|
//! | `FRM`           | one pick per round, threshold relaxed after a solved switch |
//! | `KLEINBERG`     | recursive secretary on a Binomial prefix, then `l`-th best  |
//! | `OPTIMISTIC`    | `⌊N/e⌋` learning, `(b−k)`-th best learning score            |
//! | `MEAN`          | beat the mean leave-one-out score of the selection          |
//! | `SUBMODULAR`    | classic secretary inside each of `b` rounds                 |
//! | `SINGLE_REF`    | fixed cutoff fraction and reference rank                    |
//! | `SIMPLEK`       | offline threshold from the stored first half                |
//! | `DYN_SIMPLEK`   | `SIMPLEK` capped by an empirical quantile threshold         |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{AnalyticsError, DeltaSchedule};
use crate::metrics::{Instance, SelectionState};

mod frm;
mod kleinberg;
mod mean;
mod optimistic;
mod simplek;
mod single_ref;
mod submodular;

pub use frm::{frm_round, Frm, FrmRound, RoundOutcome};
pub use kleinberg::Kleinberg;
pub use mean::Mean;
pub use optimistic::Optimistic;
pub use simplek::{greedy_chain_count, simplek_offline_threshold, SimpleK};
pub use single_ref::SingleRef;
pub use submodular::Submodular;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyError {
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("budget {budget} exceeds horizon {horizon}")]
    BudgetExceedsHorizon { budget: usize, horizon: usize },
    #[error("{kind}: {reason}")]
    Precondition { kind: StrategyKind, reason: String },
    #[error("unknown strategy `{0}`")]
    UnknownKind(String),
    #[error("no default SINGLE_REF parameters for budget {0}; pass cutoff fraction and reference rank")]
    NoSingleRefDefaults(usize),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}

pub type Result<T> = std::result::Result<T, StrategyError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StrategyKind {
    Kleinberg,
    Optimistic,
    Mean,
    Submodular,
    SingleRef,
    SimpleK,
    DynSimpleK,
    Frm,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 8] = [
        StrategyKind::Kleinberg,
        StrategyKind::Optimistic,
        StrategyKind::Mean,
        StrategyKind::Submodular,
        StrategyKind::SingleRef,
        StrategyKind::SimpleK,
        StrategyKind::DynSimpleK,
        StrategyKind::Frm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Frm => "FRM",
            StrategyKind::Kleinberg => "KLEINBERG",
            StrategyKind::Optimistic => "OPTIMISTIC",
            StrategyKind::Mean => "MEAN",
            StrategyKind::Submodular => "SUBMODULAR",
            StrategyKind::SingleRef => "SINGLE_REF",
            StrategyKind::SimpleK => "SIMPLEK",
            StrategyKind::DynSimpleK => "DYN_SIMPLEK",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match norm.as_str() {
            "frm" => StrategyKind::Frm,
            "kleinberg" => StrategyKind::Kleinberg,
            "optimistic" => StrategyKind::Optimistic,
            "mean" | "hiringabovethemean" => StrategyKind::Mean,
            "submodular" => StrategyKind::Submodular,
            "singleref" => StrategyKind::SingleRef,
            "simplek" => StrategyKind::SimpleK,
            "dynsimplek" => StrategyKind::DynSimpleK,
            _ => return Err(StrategyError::UnknownKind(s.to_string())),
        })
    }
}

/// Per-kind tunables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StrategyParams {
    Frm {
        delta: DeltaSchedule,
        /// Learning-phase length per round; `None` uses `max(1, ⌊√n − 1⌋)`.
        cutoff: Option<usize>,
    },
    Kleinberg,
    Optimistic,
    Mean,
    Submodular,
    SingleRef {
        cutoff_fraction: f64,
        reference_rank: usize,
    },
    SimpleK,
    DynSimpleK,
}

impl StrategyParams {
    pub fn kind(&self) -> StrategyKind {
        match self {
            StrategyParams::Frm { .. } => StrategyKind::Frm,
            StrategyParams::Kleinberg => StrategyKind::Kleinberg,
            StrategyParams::Optimistic => StrategyKind::Optimistic,
            StrategyParams::Mean => StrategyKind::Mean,
            StrategyParams::Submodular => StrategyKind::Submodular,
            StrategyParams::SingleRef { .. } => StrategyKind::SingleRef,
            StrategyParams::SimpleK => StrategyKind::SimpleK,
            StrategyParams::DynSimpleK => StrategyKind::DynSimpleK,
        }
    }

    /// Default parameters for `kind` at budget `budget`.
    pub fn defaults(kind: StrategyKind, budget: usize) -> Result<Self> {
        Ok(match kind {
            StrategyKind::Frm => StrategyParams::Frm {
                delta: DeltaSchedule::TUNED,
                cutoff: None,
            },
            StrategyKind::Kleinberg => StrategyParams::Kleinberg,
            StrategyKind::Optimistic => StrategyParams::Optimistic,
            StrategyKind::Mean => StrategyParams::Mean,
            StrategyKind::Submodular => StrategyParams::Submodular,
            StrategyKind::SingleRef => {
                let (cutoff_fraction, reference_rank) = single_ref::default_params(budget)
                    .ok_or(StrategyError::NoSingleRefDefaults(budget))?;
                StrategyParams::SingleRef {
                    cutoff_fraction,
                    reference_rank,
                }
            }
            StrategyKind::SimpleK => StrategyParams::SimpleK,
            StrategyKind::DynSimpleK => StrategyParams::DynSimpleK,
        })
    }
}

/// Everything needed to instantiate one strategy for one stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub params: StrategyParams,
    pub budget: usize,
    pub horizon: usize,
    pub rng_seed: u64,
}

impl StrategyConfig {
    pub fn new(params: StrategyParams, budget: usize, horizon: usize, rng_seed: u64) -> Self {
        Self {
            params,
            budget,
            horizon,
            rng_seed,
        }
    }

    /// Config for `kind` with its default parameters.
    pub fn with_defaults(kind: StrategyKind, budget: usize, horizon: usize, rng_seed: u64) -> Result<Self> {
        Ok(Self::new(
            StrategyParams::defaults(kind, budget)?,
            budget,
            horizon,
            rng_seed,
        ))
    }

    pub fn kind(&self) -> StrategyKind {
        self.params.kind()
    }

    pub fn validate(&self) -> Result<()> {
        let (b, n) = (self.budget, self.horizon);
        if b == 0 {
            return Err(StrategyError::ZeroBudget);
        }
        if b > n {
            return Err(StrategyError::BudgetExceedsHorizon { budget: b, horizon: n });
        }
        let fail = |reason: String| {
            Err(StrategyError::Precondition {
                kind: self.kind(),
                reason,
            })
        };
        match self.params {
            StrategyParams::Frm { delta, cutoff } => {
                delta.validate()?;
                if b < 2 {
                    return fail("needs b >= 2".into());
                }
                let round = n / b;
                if round < 4 {
                    return fail(format!("round length {round} < 4"));
                }
                if let Some(c) = cutoff {
                    if c == 0 || c >= round {
                        return fail(format!("cutoff {c} outside 1..{round}"));
                    }
                }
            }
            StrategyParams::Kleinberg | StrategyParams::Mean if n < b + 1 => {
                return fail(format!("needs N >= b + 1, got N={n}, b={b}"));
            }
            StrategyParams::Kleinberg | StrategyParams::Mean => {}
            StrategyParams::Optimistic => {
                let c = optimistic::cutoff(n);
                if b > n - c {
                    return fail(format!("needs b <= N - floor(N/e) = {}", n - c));
                }
            }
            StrategyParams::Submodular => {
                if n / b < 2 {
                    return fail(format!("round length {} < 2", n / b));
                }
            }
            StrategyParams::SingleRef {
                cutoff_fraction,
                reference_rank,
            } => {
                if !(cutoff_fraction > 0.0 && cutoff_fraction < 1.0) {
                    return fail(format!("cutoff fraction {cutoff_fraction} outside (0, 1)"));
                }
                let c = single_ref::cutoff(cutoff_fraction, n);
                if reference_rank == 0 || reference_rank > c {
                    return fail(format!("reference rank {reference_rank} outside 1..={c}"));
                }
            }
            StrategyParams::SimpleK | StrategyParams::DynSimpleK => {
                if n < 2 * b + 2 {
                    return fail(format!("needs N >= 2b + 2, got N={n}, b={b}"));
                }
            }
        }
        Ok(())
    }

    /// Validates and instantiates the strategy.
    pub fn build(&self) -> Result<Box<dyn Strategy>> {
        self.validate()?;
        let (b, n) = (self.budget, self.horizon);
        Ok(match self.params {
            StrategyParams::Frm { delta, cutoff } => Box::new(Frm::new(b, n, delta, cutoff)?),
            StrategyParams::Kleinberg => Box::new(Kleinberg::new(b, n, self.rng_seed)),
            StrategyParams::Optimistic => Box::new(Optimistic::new(b, n)),
            StrategyParams::Mean => Box::new(Mean::new(b, n)),
            StrategyParams::Submodular => Box::new(Submodular::new(b, n)),
            StrategyParams::SingleRef {
                cutoff_fraction,
                reference_rank,
            } => Box::new(SingleRef::new(b, n, cutoff_fraction, reference_rank)),
            StrategyParams::SimpleK => Box::new(SimpleK::new(b, n, false)),
            StrategyParams::DynSimpleK => Box::new(SimpleK::new(b, n, true)),
        })
    }
}

/// A contiguous range of 1-based steps `start..=end` by whose end at least
/// `quota` instances (cumulative, from the start of the stream) must have
/// been accepted, and after which no more than `quota` may be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub quota: usize,
}

/// Quota structure a strategy runs under.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub segments: Vec<Segment>,
    /// Whether the engine accepts step 1 on the strategy's behalf.
    pub accepts_first: bool,
}

impl Layout {
    /// The whole stream as one segment with quota `budget`.
    pub fn single(horizon: usize, budget: usize) -> Self {
        Self {
            segments: vec![Segment {
                start: 1,
                end: horizon,
                quota: budget,
            }],
            accepts_first: true,
        }
    }

    /// `budget` rounds of `⌊horizon/budget⌋` steps, one acceptance each; the
    /// remainder is appended to the last round.
    pub fn rounds(horizon: usize, budget: usize) -> Self {
        let len = horizon / budget;
        let segments = (0..budget)
            .map(|r| Segment {
                start: r * len + 1,
                end: if r + 1 == budget { horizon } else { (r + 1) * len },
                quota: r + 1,
            })
            .collect();
        Self {
            segments,
            accepts_first: true,
        }
    }

    /// Index of the segment containing 1-based `step`.
    pub fn segment_of(&self, step: usize) -> usize {
        self.segments.partition_point(|s| s.end < step)
    }

    /// Whether `step` must be accepted regardless of the policy, given
    /// `selected` acceptances so far: the steps left in the current segment
    /// equal the slots still owed by its end.
    pub fn is_forced(&self, step: usize, selected: usize) -> bool {
        let seg = &self.segments[self.segment_of(step)];
        seg.quota > selected && seg.end + 1 - step == seg.quota - selected
    }

    /// Whether another acceptance at `step` stays within the segment quota.
    pub fn has_room(&self, step: usize, selected: usize) -> bool {
        selected < self.segments[self.segment_of(step)].quota
    }
}

/// What a strategy can see at step `step`: the arriving instance, its score
/// against the current selection (absent while nothing is selected), and the
/// selection itself. Nothing about later steps.
#[derive(Debug, Clone, Copy)]
pub struct StepView<'a> {
    pub step: usize,
    pub horizon: usize,
    pub budget: usize,
    pub instance: &'a Instance,
    pub score: Option<f64>,
    pub selection: &'a SelectionState,
}

impl StepView<'_> {
    pub fn selected(&self) -> usize {
        self.selection.len()
    }
}

/// A strategy's proposal for one step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Proposal {
    pub accept: bool,
    pub threshold: Option<f64>,
}

impl Proposal {
    pub fn reject() -> Self {
        Self::default()
    }

    /// Accept iff `score > threshold`; a missing score never passes, a
    /// missing threshold always does.
    pub fn strict(score: Option<f64>, threshold: Option<f64>) -> Self {
        let accept = match (score, threshold) {
            (Some(s), Some(t)) => s > t,
            (Some(_), None) => true,
            (None, _) => false,
        };
        Self { accept, threshold }
    }
}

/// An online selection policy. One instance handles exactly one stream.
pub trait Strategy: Send {
    fn kind(&self) -> StrategyKind;

    fn layout(&self) -> Layout;

    /// Proposes a decision for the current step.
    fn decide(&mut self, view: &StepView<'_>) -> Proposal;

    /// Reports the final decision for the step (after engine overrides).
    /// `view.selection` is the state before the decision is applied.
    fn commit(&mut self, view: &StepView<'_>, accepted: bool);
}

/// Scores kept sorted in descending order.
#[derive(Debug, Clone, Default)]
pub(crate) struct DescendingScores(Vec<f64>);

impl DescendingScores {
    pub fn insert(&mut self, score: f64) {
        let at = self.0.partition_point(|&v| v >= score);
        self.0.insert(at, score);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn first(&self) -> Option<f64> {
        self.0.first().copied()
    }

    /// 1-based rank, clamped to the smallest recorded score.
    pub fn rank_clamped(&self, rank: usize) -> Option<f64> {
        if self.0.is_empty() {
            return None;
        }
        Some(self.0[rank.clamp(1, self.0.len()) - 1])
    }

    /// 0-based index of the first (highest) entry equal to `value`, or where
    /// it would be inserted.
    pub fn position_of(&self, value: f64) -> usize {
        self.0.partition_point(|&v| v > value)
    }

    pub fn get(&self, index: usize) -> f64 {
        self.0[index]
    }
}
