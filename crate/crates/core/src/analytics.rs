//! Closed-form round quantities: the expected rank `γ`, the conditional
//! acceptance mean `μ_j` and deviation `σ_j`, the switch index, the learning
//! cutoff and the threshold decrement schedules.
//!
//! Steps `j` are 1-based positions inside a round of length `n`; the cutoff
//! `c` is the number of learning-phase steps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("invalid rank parameters: need 1 <= b <= c <= n, got b={b}, c={c}, n={n}")]
    InvalidRank { b: usize, c: usize, n: usize },
    #[error("invalid round: need 1 <= c < n, got c={c}, n={n}")]
    InvalidRound { c: usize, n: usize },
    #[error("step {j} outside [{c}, {n}]")]
    StepOutOfRange { j: usize, c: usize, n: usize },
    #[error("round length {0} too short for a learning phase (need n >= 4)")]
    RoundTooShort(usize),
    #[error("exponential decrement scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("switch {switch} outside [{lo}, {hi}]")]
    InvalidSwitch { switch: usize, lo: usize, hi: usize },
}

pub type Result<T> = std::result::Result<T, AnalyticsError>;

/// Expected absolute rank of the `b`-th best of `c` items drawn from a
/// ranked pool of `n`: `b(n+b)/(c+b)`.
///
/// Requires `1 <= b <= c <= n`. Use [`gamma_extended`] to evaluate the same
/// expression for `c < b`.
pub fn gamma(b: usize, c: usize, n: usize) -> Result<f64> {
    if b == 0 || b > c || c > n {
        return Err(AnalyticsError::InvalidRank { b, c, n });
    }
    Ok(gamma_expr(b, c, n))
}

/// [`gamma`] without the `b <= c` restriction (still needs `b >= 1` and
/// `c <= n`).
pub fn gamma_extended(b: usize, c: usize, n: usize) -> Result<f64> {
    if b == 0 || c > n {
        return Err(AnalyticsError::InvalidRank { b, c, n });
    }
    Ok(gamma_expr(b, c, n))
}

fn gamma_expr(b: usize, c: usize, n: usize) -> f64 {
    let (b, c, n) = (b as f64, c as f64, n as f64);
    b * (n + b) / (c + b)
}

fn check_step(j: usize, c: usize, n: usize) -> Result<()> {
    if c == 0 || c >= n {
        return Err(AnalyticsError::InvalidRound { c, n });
    }
    if j < c || j > n {
        return Err(AnalyticsError::StepOutOfRange { j, c, n });
    }
    Ok(())
}

/// Expected acceptance indicator at step `j` given that the round does not
/// fail, for a round of length `n` with cutoff `c`:
///
/// `μ_j = (1 − (1 − (γ−1)/n)^{j−c}) / (1 − (1 − (γ−1)/n)^{n−c})`, `γ = γ(1, c)`.
pub fn mu(j: usize, c: usize, n: usize) -> Result<f64> {
    check_step(j, c, n)?;
    Ok(mu_unchecked(j, c, n))
}

fn mu_unchecked(j: usize, c: usize, n: usize) -> f64 {
    if j == c {
        return 0.0;
    }
    if j == n {
        return 1.0;
    }
    let gamma = gamma_expr(1, c, n);
    let keep = 1.0 - (gamma - 1.0) / n as f64;
    let num = 1.0 - keep.powi((j - c) as i32);
    let den = 1.0 - keep.powi((n - c) as i32);
    (num / den).clamp(0.0, 1.0)
}

/// Standard deviation of the acceptance indicator: `sqrt(μ_j − μ_j²)`.
pub fn sigma(j: usize, c: usize, n: usize) -> Result<f64> {
    Ok(sigma_from_mu(mu(j, c, n)?))
}

pub fn sigma_from_mu(mu: f64) -> f64 {
    (mu - mu * mu).max(0.0).sqrt()
}

fn guard_holds(mu: f64) -> bool {
    // μ = σ = 0 only at j = c, where nothing can be relaxed yet
    mu > 0.0 && mu - sigma_from_mu(mu) >= 0.0
}

/// The relaxation guard `μ_j − σ_j >= 0` for `μ_j > 0`, i.e. `μ_j >= 1/2`.
pub fn relaxation_guard(j: usize, c: usize, n: usize) -> Result<bool> {
    Ok(guard_holds(mu(j, c, n)?))
}

/// First step `j ∈ {c+1, …, n}` where the relaxation guard holds (`μ_j >=
/// 1/2`), found by bisection over the monotone sequence `μ_j`.
pub fn switch_index(c: usize, n: usize) -> Result<usize> {
    if c == 0 || c >= n {
        return Err(AnalyticsError::InvalidRound { c, n });
    }
    // μ_c = 0 < 1/2 and μ_n = 1 >= 1/2: invariant lo fails, hi holds.
    let (mut lo, mut hi) = (c, n);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if guard_holds(mu_unchecked(mid, c, n)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Learning-phase length for a round of `n` steps: `max(1, ⌊√n − 1⌋)`.
pub fn cutoff(n: usize) -> Result<usize> {
    if n < 4 {
        return Err(AnalyticsError::RoundTooShort(n));
    }
    Ok((n.isqrt() - 1).max(1))
}

/// How many sorted-score positions the threshold moves down at each step
/// after the switch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DeltaSchedule {
    /// `δ_j = 1`.
    Constant,
    /// `δ_j = max(0, ⌊exp((j − shift) / scale)⌋)`.
    Exponential { shift: f64, scale: f64 },
}

impl Default for DeltaSchedule {
    fn default() -> Self {
        DeltaSchedule::TUNED
    }
}

impl DeltaSchedule {
    /// The exponential schedule tuned for rounds of 500 steps.
    pub const TUNED: DeltaSchedule = DeltaSchedule::Exponential {
        shift: 412.0,
        scale: 72.0,
    };

    pub fn exponential(shift: f64, scale: f64) -> Result<Self> {
        if !scale.is_finite() || scale <= 0.0 {
            return Err(AnalyticsError::NonPositiveScale(scale));
        }
        Ok(DeltaSchedule::Exponential { shift, scale })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DeltaSchedule::Constant => Ok(()),
            DeltaSchedule::Exponential { scale, .. } if scale > 0.0 && scale.is_finite() => Ok(()),
            DeltaSchedule::Exponential { scale, .. } => Err(AnalyticsError::NonPositiveScale(scale)),
        }
    }

    /// Decrement at 1-based round step `j`.
    pub fn delta(&self, j: usize) -> usize {
        match *self {
            DeltaSchedule::Constant => 1,
            DeltaSchedule::Exponential { shift, scale } => {
                let v = ((j as f64 - shift) / scale).exp().floor();
                if v.is_finite() && v > 0.0 {
                    // saturating: the caller clamps to the number of seen scores
                    v.min(usize::MAX as f64) as usize
                } else if v > 0.0 {
                    usize::MAX
                } else {
                    0
                }
            }
        }
    }
}

/// Resolved parameters of one round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundParams {
    pub n: usize,
    pub c: usize,
    pub switch: usize,
    pub delta: DeltaSchedule,
}

impl RoundParams {
    /// Round of length `n` with the default cutoff and the solved switch.
    pub fn new(n: usize, delta: DeltaSchedule) -> Result<Self> {
        Self::with_cutoff(n, cutoff(n)?, delta)
    }

    pub fn with_cutoff(n: usize, c: usize, delta: DeltaSchedule) -> Result<Self> {
        if n < 4 {
            return Err(AnalyticsError::RoundTooShort(n));
        }
        delta.validate()?;
        let switch = switch_index(c, n)?;
        Ok(Self { n, c, switch, delta })
    }

    /// Explicit switch, e.g. to disable relaxation with `switch > n`
    /// (`switch` must lie in `c+1..=n+1`; `n+1` means never relax).
    pub fn with_switch(n: usize, c: usize, switch: usize, delta: DeltaSchedule) -> Result<Self> {
        if c == 0 || c >= n {
            return Err(AnalyticsError::InvalidRound { c, n });
        }
        if switch <= c || switch > n + 1 {
            return Err(AnalyticsError::InvalidSwitch {
                switch,
                lo: c + 1,
                hi: n + 1,
            });
        }
        delta.validate()?;
        Ok(Self { n, c, switch, delta })
    }

    /// Whether the threshold is relaxed at step `j`.
    pub fn is_dynamic(&self, j: usize) -> bool {
        j >= self.switch
    }
}
