//! Small deterministic numeric helpers shared by the sweep and ensemble code.

/// Evenly spaced grid of `n` points covering `[min, max]` inclusive.
///
/// The last point is pinned to `max` so that mirrored grids stay symmetric.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let span = max - min;
            let last = (n - 1) as f64;
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        max
                    } else {
                        min + span * (k as f64) / last
                    }
                })
                .collect()
        }
    }
}

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (cascade) summation with a fixed split point.
///
/// The reduction tree depends only on the slice length, so the result is
/// bit-stable for a given input regardless of how callers schedule work.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().fold(0.0, |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Arithmetic mean via [`pairwise_sum`]. Returns `None` for an empty slice.
pub fn pairwise_mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(pairwise_sum(xs) / xs.len() as f64)
    }
}
