//! Failure-rate-minimizing selection: the stream is cut into `b` rounds and
//! exactly one instance is picked per round.
//!
//! Inside a round of length `n` with cutoff `c`:
//!
//! 1. steps `1..=c` are rejected and the best learning score becomes `τ`;
//! 2. before the switch `j*` the threshold stays at `τ`;
//! 3. from `j*` on, the threshold walks down the descending list of scores
//!    seen so far in the round by `δ_j` positions per step;
//! 4. the first score strictly above the threshold is accepted, and the last
//!    step of the round is accepted by default.

use super::{DescendingScores, Layout, Proposal, Result, StepView, Strategy, StrategyKind};
use crate::analytics::{cutoff, DeltaSchedule, RoundParams};
use crate::engine::Decision;

/// Result of driving one round over a full score sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub decisions: Vec<Decision>,
    /// 1-based step of the acceptance.
    pub accepted_at: usize,
    pub forced: bool,
}

/// Online state of one round. Feed scores in order with [`FrmRound::step`].
#[derive(Debug, Clone)]
pub struct FrmRound {
    params: RoundParams,
    seen: DescendingScores,
    threshold: f64,
    step: usize,
    done: bool,
}

impl FrmRound {
    pub fn new(params: RoundParams) -> Self {
        Self {
            params,
            seen: DescendingScores::default(),
            threshold: f64::NEG_INFINITY,
            step: 0,
            done: false,
        }
    }

    pub fn params(&self) -> &RoundParams {
        &self.params
    }

    /// Steps consumed so far.
    pub fn position(&self) -> usize {
        self.step
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Consumes the next score and proposes a decision by the threshold rule
    /// alone (the default acceptance at the round end is left to the caller).
    pub fn step(&mut self, score: f64) -> Proposal {
        self.step += 1;
        let j = self.step;
        if self.done {
            return Proposal::reject();
        }
        if j <= self.params.c {
            self.seen.insert(score);
            if j == self.params.c {
                self.threshold = self.seen.first().unwrap_or(f64::NEG_INFINITY);
            }
            return Proposal::reject();
        }
        if self.params.is_dynamic(j) {
            let p = self.seen.position_of(self.threshold);
            let idx = p.saturating_add(self.params.delta.delta(j)).min(self.seen.len() - 1);
            self.threshold = self.seen.get(idx);
        }
        let proposal = Proposal::strict(Some(score), Some(self.threshold));
        self.seen.insert(score);
        proposal
    }

    /// Records that the round's acceptance happened (by rule or by default).
    pub fn finish(&mut self) {
        self.done = true;
    }
}

/// Runs one round over `scores`, revealing them one at a time.
pub fn frm_round(scores: &[f64], params: &RoundParams) -> RoundOutcome {
    assert_eq!(scores.len(), params.n, "round needs exactly n scores");
    let mut round = FrmRound::new(*params);
    let mut decisions = Vec::with_capacity(params.n);
    let mut accepted_at = 0;
    let mut forced = false;
    for (i, &s) in scores.iter().enumerate() {
        let j = i + 1;
        if accepted_at != 0 {
            break;
        }
        let p = round.step(s);
        let mut d = Decision {
            accept: p.accept,
            threshold: p.threshold,
            forced: false,
        };
        if !d.accept && j == params.n {
            d.accept = true;
            d.forced = true;
            forced = true;
        }
        if d.accept {
            accepted_at = j;
            round.finish();
        }
        decisions.push(d);
    }
    RoundOutcome {
        decisions,
        accepted_at,
        forced,
    }
}

#[derive(Debug, Clone)]
pub struct Frm {
    budget: usize,
    horizon: usize,
    layout: Layout,
    delta: DeltaSchedule,
    cutoff_override: Option<usize>,
    round: Option<(usize, FrmRound)>,
}

impl Frm {
    pub fn new(budget: usize, horizon: usize, delta: DeltaSchedule, cutoff: Option<usize>) -> Result<Self> {
        if budget < 2 || budget > horizon {
            return Err(super::StrategyError::Precondition {
                kind: StrategyKind::Frm,
                reason: format!("needs 2 <= b <= N, got b={budget}, N={horizon}"),
            });
        }
        let frm = Self {
            budget,
            horizon,
            layout: Layout::rounds(horizon, budget),
            delta,
            cutoff_override: cutoff,
            round: None,
        };
        // fail early on unusable round parameters
        frm.params_for(1)?;
        frm.params_for(budget - 1)?;
        Ok(frm)
    }

    fn params_for(&self, round: usize) -> Result<RoundParams> {
        let seg = &self.layout.segments[round];
        let n = seg.end + 1 - seg.start;
        let c = match self.cutoff_override {
            Some(c) => c.min(n - 1),
            None => cutoff(n)?,
        };
        Ok(RoundParams::with_cutoff(n, c, self.delta)?)
    }

    /// Parameters of every round after the first.
    pub fn round_params(&self) -> Result<Vec<RoundParams>> {
        (1..self.budget).map(|r| self.params_for(r)).collect()
    }

    pub fn layout_ref(&self) -> &Layout {
        &self.layout
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

impl Strategy for Frm {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Frm
    }

    fn layout(&self) -> Layout {
        self.layout.clone()
    }

    fn decide(&mut self, view: &StepView<'_>) -> Proposal {
        let r = self.layout.segment_of(view.step);
        if r == 0 {
            return Proposal::reject();
        }
        if self.round.as_ref().map(|(idx, _)| *idx) != Some(r) {
            let params = self.params_for(r).expect("validated at construction");
            self.round = Some((r, FrmRound::new(params)));
        }
        let (_, round) = self.round.as_mut().expect("round initialized above");
        match view.score {
            Some(s) => round.step(s),
            None => Proposal::reject(),
        }
    }

    fn commit(&mut self, _view: &StepView<'_>, accepted: bool) {
        if accepted {
            if let Some((_, round)) = self.round.as_mut() {
                round.finish();
            }
        }
    }
}
