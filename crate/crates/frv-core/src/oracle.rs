//! Definition-level reference implementations, deliberately slow.
//!
//! Everything here recomputes a quantity straight from its defining
//! expression: sup-inf point distances over spatial grids, metric sups over
//! dense α-grids, hulls of discretized selection averages, and raw centered
//! moments. The fast closed-form paths are checked against these in tests
//! and in the acceptance suite; no code is shared between the two sides.

use crate::fuzzy::FuzzyNumber;
use crate::intervals::Interval;

/// Grid resolutions used by the brute-force references.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub spatial_step: f64,
    pub alpha_step: f64,
    pub draws: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            spatial_step: 1e-3,
            alpha_step: 1e-3,
            draws: 100_000,
        }
    }
}

/// Spatial discretization of an interval: `lo, lo + h, ...` plus the exact
/// upper endpoint.
fn spatial_grid(a: &Interval, h: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    let mut i = 0u64;
    loop {
        let x = a.lo() + i as f64 * h;
        if x >= a.hi() {
            break;
        }
        pts.push(x);
        i += 1;
    }
    pts.push(a.hi());
    pts
}

/// Largest over `from` of the distance to the nearest point of `to`.
///
/// `to` is an affine grid except for its final exact-endpoint entry, so the
/// nearest neighbour of `x` sits within one slot of the rounded index; the
/// two-sided scan below returns the same minimum a full scan would.
fn directed_sup_inf(from: &[f64], to: &[f64], to_lo: f64, h: f64) -> f64 {
    let mut sup = 0.0f64;
    for &x in from {
        let guess = (((x - to_lo) / h).round() as i64).clamp(0, to.len() as i64 - 1);
        let mut inf = f64::INFINITY;
        for j in guess - 1..=guess + 1 {
            if (0..to.len() as i64).contains(&j) {
                inf = inf.min((x - to[j as usize]).abs());
            }
        }
        inf = inf.min((x - to[to.len() - 1]).abs());
        sup = sup.max(inf);
    }
    sup
}

/// Hausdorff distance recomputed as the max of the two directed sup-inf
/// point distances over spatial grids of both intervals.
///
/// Each grid endpoint is off by at most one step, so the result is within
/// `2 * spatial_step` of the true distance.
pub fn hausdorff_bruteforce(a: &Interval, b: &Interval, res: &Resolution) -> f64 {
    assert!(res.spatial_step > 0.0);
    let ga = spatial_grid(a, res.spatial_step);
    let gb = spatial_grid(b, res.spatial_step);
    let ab = directed_sup_inf(&ga, &gb, b.lo(), res.spatial_step);
    let ba = directed_sup_inf(&gb, &ga, a.lo(), res.spatial_step);
    ab.max(ba)
}

/// Sup metric recomputed as a max over the dense α-grid `k / m`,
/// `k = 1 ..= m` with `m = round(1 / alpha_step)`.
///
/// Always a lower bound of the true sup; for `pwl` inputs it is within
/// `slope * alpha_step` of it.
pub fn d_h_infty_bruteforce(u: &FuzzyNumber, v: &FuzzyNumber, res: &Resolution) -> f64 {
    assert!(res.alpha_step > 0.0);
    let m = (1.0 / res.alpha_step).round().max(1.0) as usize;
    let mut sup = 0.0f64;
    for k in 1..=m {
        let alpha = k as f64 / m as f64;
        let d = u
            .level_set(alpha)
            .expect("grid alpha in (0, 1]")
            .hausdorff(&v.level_set(alpha).expect("grid alpha in (0, 1]"));
        sup = sup.max(d);
    }
    sup
}

/// Hull of the averages achievable by discretized selections: the i-th
/// sample contributes one grid point of its interval, and the hull of all
/// achievable averages is returned.
///
/// Averaging is monotone in every coordinate, so the hull endpoints are the
/// averages of the per-sample grid extremes; the grids are scanned in full
/// to find them.
pub fn aumann_bruteforce(interval_samples: &[Interval], selection_step: f64) -> Interval {
    assert!(!interval_samples.is_empty(), "empty sample list");
    assert!(selection_step > 0.0);
    let mut sum_min = 0.0f64;
    let mut sum_max = 0.0f64;
    for sample in interval_samples {
        let grid = spatial_grid(sample, selection_step);
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &g in &grid {
            min = min.min(g);
            max = max.max(g);
        }
        sum_min += min;
        sum_max += max;
    }
    let n = interval_samples.len() as f64;
    Interval::new(sum_min / n, sum_max / n).expect("ordered sums stay ordered")
}

/// Covariance recomputed from raw centered moments: two passes, centered
/// products summed in index order, divided by `n - 1`.
pub fn cov_bruteforce(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "sample lists differ in length");
    let n = xs.len();
    assert!(n >= 2, "need at least two paired samples");
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let mut acc = 0.0f64;
    for i in 0..n {
        acc += (xs[i] - mean_x) * (ys[i] - mean_y);
    }
    acc / (n - 1) as f64
}
