//! Offline references with full access to the batch: exact Max-Min
//! selection by enumeration and the farthest-point greedy approximation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{squared_l2, Instance};

/// Default cap on the number of enumerated subsets.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("need 2 <= b <= N, got b={b}, N={n}")]
    InvalidBudget { b: usize, n: usize },
    #[error("C({n},{b}) = {subsets} subsets exceeds the enumeration cap {cap}; use the greedy oracle")]
    CapExceeded {
        n: usize,
        b: usize,
        subsets: u128,
        cap: u128,
    },
    #[error("instances have mixed dimensions")]
    DimensionMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMethod {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// 1-based positions into the input, increasing.
    pub positions: Vec<usize>,
    pub value: f64,
    pub method: OracleMethod,
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn distance_matrix(xs: &[Instance]) -> Result<Vec<Vec<f64>>, OracleError> {
    let d = xs.first().map_or(0, Instance::dim);
    if xs.iter().any(|x| x.dim() != d) {
        return Err(OracleError::DimensionMismatch);
    }
    let n = xs.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = squared_l2(&xs[i].vector, &xs[j].vector).sqrt();
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    Ok(m)
}

fn check_budget(n: usize, b: usize) -> Result<(), OracleError> {
    if b < 2 || b > n {
        return Err(OracleError::InvalidBudget { b, n });
    }
    Ok(())
}

/// Exact optimum over all `C(N, b)` subsets with the default cap.
pub fn brute_force(xs: &[Instance], b: usize) -> Result<OracleResult, OracleError> {
    brute_force_capped(xs, b, DEFAULT_ENUMERATION_CAP)
}

/// Exact optimum; subsets are visited in lexicographic order and only a
/// strictly better value replaces the incumbent, so ties resolve to the
/// lexicographically smallest position set.
pub fn brute_force_capped(xs: &[Instance], b: usize, cap: u128) -> Result<OracleResult, OracleError> {
    let n = xs.len();
    check_budget(n, b)?;
    let subsets = binomial(n, b);
    if subsets > cap {
        return Err(OracleError::CapExceeded { n, b, subsets, cap });
    }
    let dist = distance_matrix(xs)?;

    // partial[t] = min pairwise distance among idx[0..=t]
    let mut idx: Vec<usize> = (0..b).collect();
    let mut partial = vec![f64::INFINITY; b];
    let mut best_value = f64::NEG_INFINITY;
    let mut best = idx.clone();
    let mut from = 0;
    loop {
        for t in from..b {
            let prev = if t == 0 { f64::INFINITY } else { partial[t - 1] };
            let mut m = prev;
            for s in 0..t {
                m = m.min(dist[idx[s]][idx[t]]);
            }
            partial[t] = m;
        }
        if partial[b - 1] > best_value {
            best_value = partial[b - 1];
            best.copy_from_slice(&idx);
        }
        // next combination in lexicographic order
        let Some(t) = (0..b).rev().find(|&t| idx[t] < n - b + t) else {
            break;
        };
        idx[t] += 1;
        for s in t + 1..b {
            idx[s] = idx[s - 1] + 1;
        }
        from = t;
    }
    Ok(OracleResult {
        positions: best.iter().map(|i| i + 1).collect(),
        value: best_value,
        method: OracleMethod::Exact,
    })
}

/// Farthest-point greedy: start from a diameter pair, then repeatedly add the
/// instance farthest from the chosen set. Ties go to the smallest position.
pub fn greedy_maxmin(xs: &[Instance], b: usize) -> Result<OracleResult, OracleError> {
    let n = xs.len();
    check_budget(n, b)?;
    let dist = distance_matrix(xs)?;
    let (mut a, mut c, mut diam) = (0, 1, f64::NEG_INFINITY);
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] > diam {
                (a, c, diam) = (i, j, dist[i][j]);
            }
        }
    }
    let mut chosen = vec![a, c];
    let mut nearest: Vec<f64> = (0..n).map(|i| dist[i][a].min(dist[i][c])).collect();
    let mut value = diam;
    while chosen.len() < b {
        let mut pick = usize::MAX;
        let mut far = f64::NEG_INFINITY;
        for (i, &v) in nearest.iter().enumerate() {
            if !chosen.contains(&i) && v > far {
                (pick, far) = (i, v);
            }
        }
        value = value.min(far);
        chosen.push(pick);
        for (i, v) in nearest.iter_mut().enumerate() {
            *v = v.min(dist[i][pick]);
        }
    }
    chosen.sort_unstable();
    Ok(OracleResult {
        positions: chosen.iter().map(|i| i + 1).collect(),
        value,
        method: OracleMethod::Greedy,
    })
}
