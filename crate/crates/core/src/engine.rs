//! Drives one strategy over one stream under the online contract.
//!
//! At every step the engine computes the arriving instance's score against
//! the current selection (one distance per selected instance), asks the
//! strategy for a proposal, and then applies the rules that belong to the
//! setting rather than to any policy:
//!
//! - step 1 is accepted when the strategy's layout says so;
//! - no acceptance beyond the current segment quota;
//! - a forced acceptance whenever the steps left in the segment equal the
//!   slots still owed (for single-segment layouts this is exactly
//!   `N − j + 1 = b − k`).
//!
//! The result is a [`DecisionTrace`], which [`replay`] can verify from
//! scratch and [`write_trace`]/[`parse_trace`] serialize in a line format.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{self, Instance, MetricsError, SelectionState};
use crate::strategies::{Layout, Strategy, StrategyConfig, StrategyError, StepView};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("stream has {len} instances but the strategy expects horizon {horizon}")]
    HorizonMismatch { len: usize, horizon: usize },
    #[error("stream length {len} is smaller than the budget {budget}")]
    StreamTooShort { len: usize, budget: usize },
    #[error("instance at position {position} has dimension {got}, expected {expected}")]
    Dimension {
        position: usize,
        got: usize,
        expected: usize,
    },
    #[error("empty stream")]
    EmptyStream,
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("malformed trace at line {line}: {reason}")]
    TraceFormat { line: usize, reason: String },
}

/// Outcome of one step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Decision {
    pub accept: bool,
    pub threshold: Option<f64>,
    /// Accepted by default because the remaining steps equal the open slots.
    pub forced: bool,
}

/// Full record of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTrace {
    pub strategy: String,
    pub n: usize,
    pub b: usize,
    pub d: usize,
    pub decisions: Vec<Decision>,
    /// 1-based accepted positions, increasing.
    pub positions: Vec<usize>,
    /// Score of each step against the selection at that step; `None` while
    /// nothing is selected.
    pub scores: Vec<Option<f64>>,
    pub selected_scores_final: Vec<f64>,
    pub reward: f64,
    pub failed: bool,
    /// Wall-clock seconds spent in the run loop. Not part of equality-relevant
    /// output; excluded from serialization.
    #[serde(skip)]
    pub wall_time: f64,
}

impl DecisionTrace {
    pub fn accepted_count(&self) -> usize {
        self.decisions.iter().filter(|d| d.accept).count()
    }

    pub fn forced_count(&self) -> usize {
        self.decisions.iter().filter(|d| d.forced).count()
    }
}

fn check_stream(stream: &[Instance], budget: usize) -> Result<usize, EngineError> {
    let first = stream.first().ok_or(EngineError::EmptyStream)?;
    let d = first.dim();
    if let Some(bad) = stream.iter().position(|x| x.dim() != d) {
        return Err(EngineError::Dimension {
            position: bad + 1,
            got: stream[bad].dim(),
            expected: d,
        });
    }
    if stream.len() < budget {
        return Err(EngineError::StreamTooShort {
            len: stream.len(),
            budget,
        });
    }
    Ok(d)
}

/// Builds the configured strategy and runs it over `stream`.
pub fn run(config: &StrategyConfig, stream: &[Instance]) -> Result<DecisionTrace, EngineError> {
    check_stream(stream, config.budget)?;
    if stream.len() != config.horizon {
        return Err(EngineError::HorizonMismatch {
            len: stream.len(),
            horizon: config.horizon,
        });
    }
    let mut strategy = config.build()?;
    run_strategy(strategy.as_mut(), config.budget, stream)
}

/// Runs an already-built strategy with budget `budget` over `stream`.
pub fn run_strategy(
    strategy: &mut dyn Strategy,
    budget: usize,
    stream: &[Instance],
) -> Result<DecisionTrace, EngineError> {
    let d = check_stream(stream, budget)?;
    let horizon = stream.len();
    let layout = strategy.layout();
    let last = layout.segments.last().map(|s| (s.end, s.quota));
    if last != Some((horizon, budget)) {
        return Err(EngineError::HorizonMismatch {
            len: horizon,
            horizon: last.map_or(0, |l| l.0),
        });
    }

    let started = Instant::now();
    let mut selection = SelectionState::new();
    let mut decisions = Vec::with_capacity(horizon);
    let mut scores = Vec::with_capacity(horizon);
    let mut failed = false;

    for (i, instance) in stream.iter().enumerate() {
        let step = i + 1;
        let score = (!selection.is_empty()).then(|| selection.min_distance_to(&instance.vector));
        let view = StepView {
            step,
            horizon,
            budget,
            instance,
            score,
            selection: &selection,
        };
        let k = selection.len();
        let decision = if step == 1 && layout.accepts_first {
            Decision {
                accept: true,
                threshold: None,
                forced: false,
            }
        } else if !layout.has_room(step, k) {
            Decision::default()
        } else {
            let proposal = strategy.decide(&view);
            let forced = !proposal.accept && layout.is_forced(step, k);
            Decision {
                accept: proposal.accept || forced,
                threshold: proposal.threshold,
                forced,
            }
        };
        strategy.commit(&view, decision.accept);
        failed |= decision.forced;
        if decision.accept {
            selection.push(Instance::new(step, instance.vector.clone()))?;
        }
        decisions.push(decision);
        scores.push(score);
    }
    let wall_time = started.elapsed().as_secs_f64();

    let reward = if budget >= 2 {
        metrics::reward(&selection, budget)?
    } else {
        0.0
    };
    Ok(DecisionTrace {
        strategy: strategy.kind().name().to_string(),
        n: horizon,
        b: budget,
        d,
        decisions,
        positions: selection.positions().to_vec(),
        scores,
        selected_scores_final: selection.selected_scores().to_vec(),
        reward,
        failed,
        wall_time,
    })
}

/// Result of [`replay`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayReport {
    pub passed: bool,
    /// 1-based step of the first divergence, if it is tied to a step.
    pub first_divergence: Option<usize>,
    pub message: String,
}

impl ReplayReport {
    fn ok() -> Self {
        Self {
            passed: true,
            first_divergence: None,
            message: "ok".into(),
        }
    }

    fn fail(step: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            passed: false,
            first_divergence: step,
            message: message.into(),
        }
    }
}

/// Recomputes every score and the reward from scratch and checks the trace
/// invariants. With `layout`, forced flags are checked against the layout's
/// segments; without it, against the single-segment failure indicator.
pub fn replay(trace: &DecisionTrace, stream: &[Instance], layout: Option<&Layout>) -> ReplayReport {
    let fallback;
    let layout = match layout {
        Some(l) => l,
        None => {
            fallback = Layout::single(trace.n, trace.b);
            &fallback
        }
    };
    if stream.len() != trace.n || trace.decisions.len() != trace.n || trace.scores.len() != trace.n {
        return ReplayReport::fail(None, "length mismatch between trace and stream");
    }
    let mut selection = SelectionState::new();
    let mut any_forced = false;
    for (i, (x, dec)) in stream.iter().zip(&trace.decisions).enumerate() {
        let step = i + 1;
        let expected = if selection.is_empty() {
            None
        } else {
            match metrics::candidate_score(&selection, x) {
                Ok(s) => Some(s),
                Err(e) => return ReplayReport::fail(Some(step), e.to_string()),
            }
        };
        let recorded = trace.scores[i];
        if expected.map(f64::to_bits) != recorded.map(f64::to_bits) {
            return ReplayReport::fail(
                Some(step),
                format!("score {recorded:?} differs from recomputed {expected:?}"),
            );
        }
        if dec.accept != trace.positions.binary_search(&step).is_ok() {
            return ReplayReport::fail(Some(step), "decision disagrees with recorded positions");
        }
        if dec.forced && !dec.accept {
            return ReplayReport::fail(Some(step), "forced decision not accepted");
        }
        let k = selection.len();
        if dec.forced && !layout.is_forced(step, k) {
            return ReplayReport::fail(Some(step), "forced outside the failure regime");
        }
        if !dec.accept && layout.is_forced(step, k) {
            return ReplayReport::fail(Some(step), "rejection while acceptance was forced");
        }
        if dec.accept && !layout.has_room(step, k) {
            return ReplayReport::fail(Some(step), "acceptance beyond quota");
        }
        any_forced |= dec.forced;
        if dec.accept {
            if let Err(e) = selection.push(Instance::new(step, x.vector.clone())) {
                return ReplayReport::fail(Some(step), e.to_string());
            }
        }
    }
    if selection.len() != trace.b {
        return ReplayReport::fail(None, format!("{} acceptances, expected {}", selection.len(), trace.b));
    }
    if selection.positions() != trace.positions.as_slice() {
        return ReplayReport::fail(None, "accepted positions differ from decisions");
    }
    if any_forced != trace.failed {
        return ReplayReport::fail(None, "failure flag inconsistent with forced decisions");
    }
    if trace.b >= 2 {
        let reward = match metrics::mindist_within(selection.selected()) {
            Ok(r) => r,
            Err(e) => return ReplayReport::fail(None, e.to_string()),
        };
        if reward.to_bits() != trace.reward.to_bits() {
            return ReplayReport::fail(
                None,
                format!("reward {} differs from recomputed {reward}", trace.reward),
            );
        }
        let loo: Vec<f64> = (0..selection.len())
            .map(|l| metrics::selected_score(&selection, l).unwrap_or(f64::NAN))
            .collect();
        if loo.iter().map(|v| v.to_bits()).ne(trace.selected_scores_final.iter().map(|v| v.to_bits())) {
            return ReplayReport::fail(None, "final selected scores differ from recomputation");
        }
    }
    ReplayReport::ok()
}

pub const TRACE_FORMAT_VERSION: u32 = 1;
const TRACE_MAGIC: &str = "#streamdiv-trace";

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:?}"))
}

/// Serializes a trace: a versioned header, one `step,score,threshold,accept,forced`
/// line per decision, and a trailer with the reward and failure flag. Floats
/// use the shortest round-trip representation.
pub fn write_trace(trace: &DecisionTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TRACE_MAGIC} v{TRACE_FORMAT_VERSION}");
    let _ = writeln!(
        out,
        "#strategy={} n={} b={} d={}",
        trace.strategy, trace.n, trace.b, trace.d
    );
    out.push_str("step,score,threshold,accept,forced\n");
    for (i, (d, s)) in trace.decisions.iter().zip(&trace.scores).enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            i + 1,
            fmt_opt(*s),
            fmt_opt(d.threshold),
            u8::from(d.accept),
            u8::from(d.forced)
        );
    }
    let finals: Vec<String> = trace.selected_scores_final.iter().map(|v| format!("{v:?}")).collect();
    let _ = writeln!(
        out,
        "#reward={:?} failed={} selected_scores={}",
        trace.reward,
        u8::from(trace.failed),
        finals.join(";")
    );
    out
}

/// Parses the output of [`write_trace`].
pub fn parse_trace(text: &str) -> Result<DecisionTrace, EngineError> {
    let bad = |line: usize, reason: &str| EngineError::TraceFormat {
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (ln, magic) = lines.next().ok_or_else(|| bad(1, "empty input"))?;
    if magic.trim() != format!("{TRACE_MAGIC} v{TRACE_FORMAT_VERSION}") {
        return Err(bad(ln, "unknown header or version"));
    }
    let (ln, meta) = lines.next().ok_or_else(|| bad(2, "missing metadata"))?;
    let meta = meta.strip_prefix('#').ok_or_else(|| bad(ln, "metadata must start with #"))?;
    let mut strategy = None;
    let (mut n, mut b, mut d) = (None, None, None);
    for kv in meta.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad(ln, "expected key=value"))?;
        let parse = |v: &str| v.parse::<usize>().map_err(|_| bad(ln, "bad integer"));
        match k {
            "strategy" => strategy = Some(v.to_string()),
            "n" => n = Some(parse(v)?),
            "b" => b = Some(parse(v)?),
            "d" => d = Some(parse(v)?),
            _ => return Err(bad(ln, "unknown metadata key")),
        }
    }
    let (n, b, d) = match (n, b, d) {
        (Some(n), Some(b), Some(d)) => (n, b, d),
        _ => return Err(bad(ln, "metadata needs n, b and d")),
    };
    let (ln, header) = lines.next().ok_or_else(|| bad(3, "missing column header"))?;
    if header.trim() != "step,score,threshold,accept,forced" {
        return Err(bad(ln, "unexpected column header"));
    }
    let opt = |ln: usize, s: &str| -> Result<Option<f64>, EngineError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>().map(Some).map_err(|_| bad(ln, "bad float"))
        }
    };
    let flag = |ln: usize, s: &str| match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(bad(ln, "flag must be 0 or 1")),
    };
    let mut decisions = Vec::with_capacity(n);
    let mut scores = Vec::with_capacity(n);
    let mut positions = Vec::new();
    let mut trailer = None;
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("#reward=") {
            trailer = Some((ln, rest.to_string()));
            break;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(bad(ln, "expected 5 columns"));
        }
        let step: usize = cols[0].parse().map_err(|_| bad(ln, "bad step"))?;
        if step != decisions.len() + 1 {
            return Err(bad(ln, "steps must be consecutive from 1"));
        }
        let dec = Decision {
            threshold: opt(ln, cols[2])?,
            accept: flag(ln, cols[3])?,
            forced: flag(ln, cols[4])?,
        };
        if dec.accept {
            positions.push(step);
        }
        scores.push(opt(ln, cols[1])?);
        decisions.push(dec);
    }
    let (ln, trailer) = trailer.ok_or_else(|| bad(n + 4, "missing #reward trailer"))?;
    let mut parts = trailer.split_whitespace();
    let reward: f64 = parts
        .next()
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| bad(ln, "bad reward"))?;
    let failed = match parts.next() {
        Some("failed=0") => false,
        Some("failed=1") => true,
        _ => return Err(bad(ln, "bad failed flag")),
    };
    let finals = parts
        .next()
        .and_then(|p| p.strip_prefix("selected_scores="))
        .ok_or_else(|| bad(ln, "missing selected_scores"))?;
    let selected_scores_final = if finals.is_empty() {
        Vec::new()
    } else {
        finals
            .split(';')
            .map(|v| v.parse::<f64>().map_err(|_| bad(ln, "bad selected score")))
            .collect::<Result<Vec<_>, _>>()?
    };
    if decisions.len() != n {
        return Err(bad(ln, "decision count differs from n"));
    }
    Ok(DecisionTrace {
        strategy: strategy.unwrap_or_default(),
        n,
        b,
        d,
        decisions,
        positions,
        scores,
        selected_scores_final,
        reward,
        failed,
        wall_time: 0.0,
    })
}
