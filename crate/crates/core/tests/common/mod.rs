//! Shared fixtures and independent reference computations for the
//! integration tests. Nothing here calls into the library's distance code.

#![allow(dead_code)]

pub use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use streamdiv::metrics::Instance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn line(xs: &[f64]) -> Vec<Instance> {
    xs.iter()
        .enumerate()
        .map(|(i, &x)| Instance::new(i + 1, vec![x]))
        .collect()
}

pub fn points(xs: &[(f64, f64)]) -> Vec<Instance> {
    xs.iter()
        .enumerate()
        .map(|(i, &(a, b))| Instance::new(i + 1, vec![a, b]))
        .collect()
}

/// Uniform points in `[-5, 5)^d`.
pub fn random_stream(rng: &mut impl Rng, n: usize, d: usize) -> Vec<Instance> {
    (0..n)
        .map(|i| Instance::new(i + 1, (0..d).map(|_| rng.random_range(-5.0..5.0)).collect()))
        .collect()
}

/// Euclidean distance with a Neumaier-compensated sum of squares.
pub fn ref_dist(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b) {
        let t = (x - y) * (x - y);
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    }
    (sum + comp).sqrt()
}

/// Smallest distance over all unordered pairs.
pub fn ref_min_pairwise(set: &[&[f64]]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            best = best.min(ref_dist(set[i], set[j]));
        }
    }
    best
}

/// Distance from `x` to the nearest of `set`.
pub fn ref_score(set: &[&[f64]], x: &[f64]) -> f64 {
    set.iter().map(|s| ref_dist(s, x)).fold(f64::INFINITY, f64::min)
}

/// Exact Max-Min optimum by bitmask enumeration.
pub fn ref_optimum(xs: &[Instance], b: usize) -> f64 {
    let n = xs.len();
    assert!(n <= 20);
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != b {
            continue;
        }
        let set: Vec<&[f64]> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| xs[i].vector.as_slice())
            .collect();
        best = best.max(ref_min_pairwise(&set));
    }
    best
}

/// Twelve 2-d points: x1 = (0,0), x8 = (4.8,0), x11 at distance 3.5 from x1
/// and 4.2 from x8, x12 = (4.8,-4.2), the rest clustered between them.
pub fn twelve_point_stream() -> Vec<Instance> {
    let x = (3.5f64 * 3.5 - 4.2 * 4.2 + 4.8 * 4.8) / (2.0 * 4.8);
    let y = (3.5f64 * 3.5 - x * x).sqrt();
    points(&[
        (0.0, 0.0),
        (0.3, 0.2),
        (-0.4, 0.1),
        (2.4, 1.0),
        (0.2, -0.5),
        (1.5, 0.5),
        (2.9, 1.2),
        (4.8, 0.0),
        (2.0, 2.0),
        (1.0, 1.2),
        (x, y),
        (4.8, -4.2),
    ])
}

/// Hypergeometric-free rank sampler: the ranks (1 = best) of `c` distinct
/// items drawn uniformly from a pool of `n`.
pub fn sample_ranks(rng: &mut impl Rng, n: usize, c: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, n, c).into_iter().map(|i| i + 1).collect()
}
