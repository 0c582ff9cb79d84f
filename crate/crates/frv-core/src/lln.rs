//! Convergence experiments for Minkowski sample means.
//!
//! A trial draws one sample point ω, forms the running Minkowski average of
//! X^1(ω), ..., X^n(ω) and of the matching expectations, and measures the
//! uniform Hausdorff distance between the two means. Tail probabilities of
//! that distance are estimated over derived replication streams, compared
//! against a Chebyshev envelope built from the normalized variance sum, and
//! (for the cosine-center family) against an exact one-dimensional
//! quadrature. A decomposition diagnostic splits each trial's distance
//! along an ε-partition of the expectation mean to show which term of the
//! underlying bound dominates.

use rayon::prelude::*;

use crate::fuzzy::FuzzyNumber;
use crate::intervals::Direction;
use crate::models::{ModelKind, ModelSpec, OmegaSeed};

/// 97.5% standard normal quantile: the z of a two-sided 95% interval.
pub const Z95: f64 = 1.959963984540054;

/// Default midpoint count for [`exact_tail_cosine`]; sized so quadrature
/// error sits well below Monte Carlo half-widths.
pub const DEFAULT_QUADRATURE_POINTS: usize = 2_000_000;

/// One distance measurement: how far the sample mean of the first `n`
/// members landed from the mean of their expectations at sample point ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub n: usize,
    pub omega: OmegaSeed,
    pub distance: f64,
}

/// Tail probability estimate with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Both running Minkowski means of a trial: the sampled one and the
/// expectation one, averaged over members 1 ..= n.
pub fn minkowski_means(
    model: &ModelSpec,
    n: usize,
    omega: OmegaSeed,
) -> (FuzzyNumber, FuzzyNumber) {
    assert!(n >= 1, "a mean needs at least one member");
    let mut sum_x = model.sample(1, omega);
    let mut sum_e = model.analytic_expectation(1);
    for k in 2..=n {
        sum_x = sum_x
            .add(&model.sample(k, omega))
            .expect("samples share one interpolation mode");
        sum_e = sum_e
            .add(&model.analytic_expectation(k))
            .expect("expectations share one interpolation mode");
    }
    let lambda = 1.0 / n as f64;
    (sum_x.scale(lambda), sum_e.scale(lambda))
}

/// Runs one trial: the uniform Hausdorff distance between the two
/// Minkowski means at sample point ω.
pub fn run_trial(model: &ModelSpec, n: usize, omega: OmegaSeed) -> TrialResult {
    let (sample_mean, expect_mean) = minkowski_means(model, n, omega);
    TrialResult {
        n,
        omega,
        distance: sample_mean.uniform_hausdorff(&expect_mean),
    }
}

/// Wilson score interval for `successes` out of `trials` at `z` standard
/// normal units, clamped to [0, 1]. Always contains the point estimate.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    assert!(trials >= 1, "interval needs at least one trial");
    assert!(successes <= trials);
    assert!(z > 0.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // the true endpoints bracket p; rounding must not un-bracket it
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Distances of all replications, one per derived ω, in replication order.
/// Replications run in parallel; the collected order is fixed by the index,
/// so downstream folds see the same sequence no matter the thread count.
fn trial_distances(model: &ModelSpec, n: usize, replications: usize, master_seed: u64) -> Vec<f64> {
    (0..replications)
        .into_par_iter()
        .map(|r| run_trial(model, n, OmegaSeed::derive(master_seed, r as u64)).distance)
        .collect()
}

/// Estimated probability that a trial distance exceeds `eps`, over
/// `replications` derived sample points, with its 95% Wilson interval.
pub fn tail_probability(
    model: &ModelSpec,
    n: usize,
    eps: f64,
    replications: usize,
    master_seed: u64,
) -> TailEstimate {
    assert!(eps > 0.0 && eps.is_finite());
    assert!(replications >= 1);
    let distances = trial_distances(model, n, replications, master_seed);
    let exceed = distances.iter().filter(|&&d| d > eps).count();
    let (ci_lo, ci_hi) = wilson_interval(exceed, replications, Z95);
    TailEstimate {
        p_hat: exceed as f64 / replications as f64,
        ci_lo,
        ci_hi,
    }
}

/// The Chebyshev envelope at one schedule point: the worst normalized
/// variance sum over the model's α-grid and both directions, divided by
/// ε². Tail probabilities of scalar support means cannot exceed it when
/// the members are uncorrelated.
pub fn chebyshev_bound(model: &ModelSpec, n: usize, eps: f64) -> f64 {
    assert!(eps > 0.0 && eps.is_finite());
    let mut worst = 0.0f64;
    for &alpha in model.grid() {
        for dir in Direction::BOTH {
            worst = worst.max(model.variance_condition(n, alpha, dir));
        }
    }
    worst / (eps * eps)
}

/// One schedule point of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub eps: f64,
    pub replications: usize,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_distance: f64,
    pub chebyshev_bound: f64,
    /// Exact tail for models with a scalar reduction; None otherwise.
    pub oracle_tail: Option<f64>,
}

/// A convergence study: one row per schedule point, shared ε.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
}

pub use crate::models::CsvError;

impl StudyResult {
    pub const CSV_HEADER: &'static str =
        "n,eps,replications,p_hat,ci_lo,ci_hi,mean_distance,chebyshev_bound,oracle_tail";

    /// Renders the study as CSV; a missing oracle tail prints as an empty
    /// last field.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let oracle = row.oracle_tail.map_or(String::new(), |t| t.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                row.n,
                row.eps,
                row.replications,
                row.p_hat,
                row.ci_lo,
                row.ci_hi,
                row.mean_distance,
                row.chebyshev_bound,
                oracle
            ));
        }
        out
    }

    /// Parses the CSV emitted by [`to_csv`](Self::to_csv).
    pub fn from_csv(text: &str) -> Result<StudyResult, CsvError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header == Self::CSV_HEADER => {}
            _ => {
                return Err(CsvError {
                    line: 1,
                    msg: format!("expected header `{}`", Self::CSV_HEADER),
                })
            }
        }
        let mut rows = Vec::new();
        for (i, raw) in lines {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = raw.split(',').collect();
            if fields.len() != 9 {
                return Err(CsvError {
                    line,
                    msg: format!("expected 9 fields, found {}", fields.len()),
                });
            }
            let bad = |what: &str| CsvError {
                line,
                msg: format!("not a number in field {what}"),
            };
            rows.push(StudyRow {
                n: fields[0].parse().map_err(|_| bad("n"))?,
                eps: fields[1].parse().map_err(|_| bad("eps"))?,
                replications: fields[2].parse().map_err(|_| bad("replications"))?,
                p_hat: fields[3].parse().map_err(|_| bad("p_hat"))?,
                ci_lo: fields[4].parse().map_err(|_| bad("ci_lo"))?,
                ci_hi: fields[5].parse().map_err(|_| bad("ci_hi"))?,
                mean_distance: fields[6].parse().map_err(|_| bad("mean_distance"))?,
                chebyshev_bound: fields[7].parse().map_err(|_| bad("chebyshev_bound"))?,
                oracle_tail: if fields[8].is_empty() {
                    None
                } else {
                    Some(fields[8].parse().map_err(|_| bad("oracle_tail"))?)
                },
            });
        }
        Ok(StudyResult { rows })
    }

    /// Plot-friendly triples `n p_hat chebyshev_bound`, one per line.
    pub fn plot_data(&self) -> String {
        self.rows
            .iter()
            .map(|r| format!("{} {} {}\n", r.n, r.p_hat, r.chebyshev_bound))
            .collect()
    }

    /// Whether the study shows the tail collapsing: the last estimate is
    /// below `target_p`, beats the first by `decrease_factor`, and their
    /// confidence intervals do not overlap.
    pub fn converged(&self, target_p: f64, decrease_factor: f64) -> bool {
        let (Some(first), Some(last)) = (self.rows.first(), self.rows.last()) else {
            return false;
        };
        last.p_hat < target_p
            && last.p_hat < first.p_hat / decrease_factor
            && last.ci_hi < first.ci_lo
    }
}

/// Runs [`tail_probability`] across a schedule of n, attaching the
/// Chebyshev envelope and, for the cosine-center family, the exact
/// quadrature tail. Identical inputs give a bit-identical study no matter
/// how the replications are scheduled across threads.
pub fn convergence_study(
    model: &ModelSpec,
    schedule: &[usize],
    eps: f64,
    replications: usize,
    master_seed: u64,
) -> StudyResult {
    assert!(!schedule.is_empty(), "schedule must name at least one n");
    assert!(
        schedule.windows(2).all(|w| w[0] < w[1]),
        "schedule must increase strictly"
    );
    assert!(eps > 0.0 && eps.is_finite());
    assert!(replications >= 1);
    let rows = schedule
        .iter()
        .map(|&n| {
            let distances = trial_distances(model, n, replications, master_seed);
            let exceed = distances.iter().filter(|&&d| d > eps).count();
            let (ci_lo, ci_hi) = wilson_interval(exceed, replications, Z95);
            let mean_distance = distances.iter().sum::<f64>() / replications as f64;
            let oracle_tail = match model.kind() {
                ModelKind::CosineCenter { .. } => {
                    Some(exact_tail_cosine(n, eps, DEFAULT_QUADRATURE_POINTS))
                }
                _ => None,
            };
            StudyRow {
                n,
                eps,
                replications,
                p_hat: exceed as f64 / replications as f64,
                ci_lo,
                ci_hi,
                mean_distance,
                chebyshev_bound: chebyshev_bound(model, n, eps),
                oracle_tail,
            }
        })
        .collect();
    StudyResult { rows }
}

/// Exact tail of the cosine-center distance law: the probability that
/// `|(1/n)·Σ_{k=1..n} cos(kU)|` exceeds `eps` for U uniform on (0, 2π),
/// by midpoint quadrature.
///
/// The inner sum collapses to `sin(nu/2)·cos((n+1)u/2)/sin(u/2)`; the
/// removable singularity at u → 0 has limit n, so the mean there is 1.
pub fn exact_tail_cosine(n: usize, eps: f64, quadrature_points: usize) -> f64 {
    assert!(n >= 1);
    assert!(quadrature_points >= 1);
    assert!(eps >= 0.0);
    let nf = n as f64;
    let count = (0..quadrature_points)
        .filter(|&j| {
            let u = std::f64::consts::TAU * (j as f64 + 0.5) / quadrature_points as f64;
            let den = (u / 2.0).sin();
            let mean = if den.abs() < 1e-9 {
                1.0
            } else {
                (nf * u / 2.0).sin() * ((nf + 1.0) * u / 2.0).cos() / (den * nf)
            };
            mean.abs() > eps
        })
        .count();
    count as f64 / quadrature_points as f64
}

/// The three terms of the partition decomposition of one trial's distance.
///
/// The distance between the two means is bounded by the worst levelwise
/// distance at the partition cuts (`cut_term`), plus the worst distance
/// between right limits at the cuts (`limit_term`), plus twice the worst
/// within-cell drift of the reference mean (`drift_term`, below `2ε` by
/// the partition's guarantee).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionReport {
    pub n: usize,
    pub eps: f64,
    pub distance: f64,
    pub cut_term: f64,
    pub limit_term: f64,
    pub drift_term: f64,
    pub cells: usize,
    /// Whether `distance ≤ cut_term + limit_term + drift_term` held.
    pub holds: bool,
}

impl DecompositionReport {
    pub fn bound(&self) -> f64 {
        self.cut_term + self.limit_term + self.drift_term
    }

    /// Name of the largest term, for quick scanning of reports.
    pub fn dominant_term(&self) -> &'static str {
        if self.cut_term >= self.limit_term && self.cut_term >= self.drift_term {
            "cut"
        } else if self.limit_term >= self.drift_term {
            "limit"
        } else {
            "drift"
        }
    }
}

/// Splits one trial's distance along the ε-partition of the expectation
/// mean and checks the three-term bound.
pub fn decomposition_diagnostic(
    model: &ModelSpec,
    n: usize,
    omega: OmegaSeed,
    eps: f64,
) -> DecompositionReport {
    assert!(eps > 0.0 && eps.is_finite());
    let (sample_mean, expect_mean) = minkowski_means(model, n, omega);
    let distance = sample_mean.uniform_hausdorff(&expect_mean);
    let partition = expect_mean
        .epsilon_partition(eps)
        .expect("eps checked positive");
    let cuts = partition.cuts();
    let mut cut_term = 0.0f64;
    let mut drift = 0.0f64;
    for w in cuts.windows(2) {
        let at_cut = sample_mean
            .level_set(w[1])
            .expect("cuts above zero lie in (0, 1]")
            .hausdorff(&expect_mean.level_set(w[1]).expect("cut in (0, 1]"));
        cut_term = cut_term.max(at_cut);
        let cell_drift = expect_mean
            .level_set(w[1])
            .expect("cut in (0, 1]")
            .hausdorff(&expect_mean.level_plus(w[0]).expect("cut below one"));
        drift = drift.max(cell_drift);
    }
    let mut limit_term = 0.0f64;
    for &c in &cuts[..cuts.len() - 1] {
        let at_limit = sample_mean
            .level_plus(c)
            .expect("cut below one")
            .hausdorff(&expect_mean.level_plus(c).expect("cut below one"));
        limit_term = limit_term.max(at_limit);
    }
    let drift_term = 2.0 * drift;
    DecompositionReport {
        n,
        eps,
        distance,
        cut_term,
        limit_term,
        drift_term,
        cells: partition.cells(),
        holds: distance <= cut_term + limit_term + drift_term,
    }
}

/// Tail estimate of one scalar support mean, with its Chebyshev ceiling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarTail {
    pub alpha: f64,
    pub dir: Direction,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub chebyshev_bound: f64,
}

/// Tail estimates of the scalar support means at each (α, direction) cell.
///
/// Support functions are additive under Minkowski averaging, so the scalar
/// mean of member supports equals the support of the Minkowski mean; each
/// cell measures how often that scalar strays more than `eps` from its
/// expectation counterpart, against the classical Chebyshev bound
/// `variance_condition / ε²` for that cell.
pub fn scalar_support_tails(
    model: &ModelSpec,
    n: usize,
    eps: f64,
    replications: usize,
    master_seed: u64,
    alpha_grid: &[f64],
) -> Vec<ScalarTail> {
    assert!(eps > 0.0 && eps.is_finite());
    assert!(replications >= 1);
    let cells: Vec<(f64, Direction)> = alpha_grid
        .iter()
        .flat_map(|&alpha| Direction::BOTH.map(move |dir| (alpha, dir)))
        .collect();
    let gaps: Vec<Vec<f64>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let omega = OmegaSeed::derive(master_seed, r as u64);
            let (sample_mean, expect_mean) = minkowski_means(model, n, omega);
            cells
                .iter()
                .map(|&(alpha, dir)| {
                    let s = sample_mean
                        .level_set(alpha)
                        .expect("alpha grid lies in (0, 1]")
                        .support(dir);
                    let e = expect_mean
                        .level_set(alpha)
                        .expect("alpha grid lies in (0, 1]")
                        .support(dir);
                    (s - e).abs()
                })
                .collect()
        })
        .collect();
    cells
        .iter()
        .enumerate()
        .map(|(ci, &(alpha, dir))| {
            let exceed = gaps.iter().filter(|rep| rep[ci] > eps).count();
            let (ci_lo, ci_hi) = wilson_interval(exceed, replications, Z95);
            ScalarTail {
                alpha,
                dir,
                p_hat: exceed as f64 / replications as f64,
                ci_lo,
                ci_hi,
                chebyshev_bound: model.variance_condition(n, alpha, dir) / (eps * eps),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::uniform_grid;

    fn grid() -> Vec<f64> {
        uniform_grid(11)
    }

    fn cosine() -> ModelSpec {
        ModelSpec::cosine_center(0.0, 1.0, 1.0, grid()).unwrap()
    }

    fn crisp() -> ModelSpec {
        ModelSpec::iid_triangular(2.5, 0.0, 0.0, 0.0, grid()).unwrap()
    }

    #[test]
    fn crisp_trials_never_move() {
        let model = crisp();
        for n in [1usize, 5, 50] {
            let trial = run_trial(&model, n, OmegaSeed(3));
            assert_eq!(trial.distance, 0.0);
            assert_eq!(trial.n, n);
        }
    }

    #[test]
    fn cosine_distance_reduces_to_the_scalar_mean_shift() {
        let model = cosine();
        for (n, seed) in [(1usize, 4u64), (7, 5), (60, 6)] {
            let omega = OmegaSeed(seed);
            let trial = run_trial(&model, n, omega);
            // apexes are crisp: the support at α = 1 is the center itself
            let scalar_mean = (1..=n)
                .map(|k| model.support_sample(k, 1.0, Direction::Pos, omega).unwrap())
                .sum::<f64>()
                / n as f64;
            assert!(
                (trial.distance - scalar_mean.abs()).abs() <= 1e-12,
                "pipeline drifted from the scalar law at n = {n}"
            );
        }
    }

    #[test]
    fn shared_shift_distance_ignores_n() {
        let model = ModelSpec::shared_shift(0.0, 1.0, 1.0, 1.0, grid()).unwrap();
        let omega = OmegaSeed(11);
        let d1 = run_trial(&model, 1, omega).distance;
        let d17 = run_trial(&model, 17, omega).distance;
        assert!((d1 - d17).abs() <= 1e-12);
        assert!(d1 > 0.0);
    }

    #[test]
    fn wilson_interval_frozen_values() {
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert!(lo.abs() < 1e-15);
        assert!((hi - 0.03699349820698568).abs() < 1e-15);
        let (lo, hi) = wilson_interval(92, 100, Z95);
        assert!((lo - 0.8500189229905127).abs() < 1e-15);
        assert!((hi - 0.9589065385156194).abs() < 1e-15);
    }

    #[test]
    fn wilson_interval_brackets_the_estimate() {
        for trials in [1usize, 10, 97, 500] {
            for successes in [0, trials / 3, trials] {
                let (lo, hi) = wilson_interval(successes, trials, Z95);
                let p = successes as f64 / trials as f64;
                assert!((0.0..=1.0).contains(&lo));
                assert!((0.0..=1.0).contains(&hi));
                assert!(lo <= p && p <= hi, "({successes}, {trials})");
            }
        }
    }

    #[test]
    fn crisp_tails_are_empty() {
        let est = tail_probability(&crisp(), 10, 0.01, 50, 1);
        assert_eq!(est.p_hat, 0.0);
        assert_eq!(est.ci_lo, 0.0);
        assert!(est.ci_hi > 0.0);
    }

    #[test]
    fn exact_tail_cosine_known_values() {
        assert_eq!(exact_tail_cosine(1, 1.0, 100_000), 0.0);
        assert!(exact_tail_cosine(1, 0.0, 100_000) >= 1.0 - 1e-5);
        let p = exact_tail_cosine(1, 0.5, DEFAULT_QUADRATURE_POINTS);
        assert!((p - 2.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn exact_tail_shrinks_with_n() {
        let points = 200_000;
        let tails: Vec<f64> = [1usize, 10, 100, 1000]
            .iter()
            .map(|&n| exact_tail_cosine(n, 0.1, points))
            .collect();
        for w in tails.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "tail grew: {tails:?}");
        }
        assert!(tails[3] < 0.02);
    }

    #[test]
    fn chebyshev_bound_known_values() {
        let model = cosine();
        assert!((chebyshev_bound(&model, 10, 0.1) - 5.0).abs() < 1e-9);
        assert!((chebyshev_bound(&model, 100, 0.1) - 0.5).abs() < 1e-9);
        assert!((chebyshev_bound(&model, 1000, 0.1) - 0.05).abs() < 1e-9);
    }

    #[test]
    fn study_rows_carry_all_diagnostics() {
        let study = convergence_study(&cosine(), &[10, 50], 0.1, 60, 7);
        assert_eq!(study.rows.len(), 2);
        for row in &study.rows {
            assert!(row.ci_lo <= row.p_hat && row.p_hat <= row.ci_hi);
            assert!(row.mean_distance >= 0.0);
            assert!(row.oracle_tail.is_some());
            assert_eq!(row.replications, 60);
            assert_eq!(row.eps, 0.1);
        }
        let iid = ModelSpec::iid_triangular(0.0, 1.0, 1.0, 1.0, grid()).unwrap();
        let study = convergence_study(&iid, &[10], 0.5, 30, 7);
        assert!(study.rows[0].oracle_tail.is_none());
    }

    #[test]
    fn study_csv_round_trips() {
        let study = convergence_study(&cosine(), &[10, 50], 0.1, 40, 9);
        let text = study.to_csv();
        assert!(text.starts_with(StudyResult::CSV_HEADER));
        let back = StudyResult::from_csv(&text).unwrap();
        assert_eq!(study, back);

        let iid = ModelSpec::iid_triangular(0.0, 1.0, 1.0, 1.0, grid()).unwrap();
        let study = convergence_study(&iid, &[10], 0.5, 30, 7);
        let back = StudyResult::from_csv(&study.to_csv()).unwrap();
        assert_eq!(study, back);
    }

    #[test]
    fn study_csv_rejects_malformed_input() {
        assert!(StudyResult::from_csv("nope\n").is_err());
        let bad_field = format!("{}\n10,0.1,50,x,0,1,0,1,\n", StudyResult::CSV_HEADER);
        let err = StudyResult::from_csv(&bad_field).unwrap_err();
        assert_eq!(err.line, 2);
        let short = format!("{}\n10,0.1\n", StudyResult::CSV_HEADER);
        assert!(StudyResult::from_csv(&short).is_err());
    }

    #[test]
    fn plot_data_emits_one_triple_per_row() {
        let study = convergence_study(&cosine(), &[10, 50], 0.1, 30, 3);
        let plot = study.plot_data();
        let lines: Vec<&str> = plot.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("10 "));
        assert_eq!(lines[0].split(' ').count(), 3);
    }

    #[test]
    fn convergence_checks_target_factor_and_separation() {
        let row = |n: usize, p: f64, lo: f64, hi: f64| StudyRow {
            n,
            eps: 0.1,
            replications: 100,
            p_hat: p,
            ci_lo: lo,
            ci_hi: hi,
            mean_distance: 0.0,
            chebyshev_bound: 1.0,
            oracle_tail: None,
        };
        let good = StudyResult {
            rows: vec![row(10, 0.6, 0.5, 0.7), row(10_000, 0.01, 0.0, 0.03)],
        };
        assert!(good.converged(0.02, 5.0));
        // too high at the end
        let high = StudyResult {
            rows: vec![row(10, 0.6, 0.5, 0.7), row(10_000, 0.05, 0.02, 0.09)],
        };
        assert!(!high.converged(0.02, 5.0));
        // overlap between first and last intervals
        let overlap = StudyResult {
            rows: vec![row(10, 0.06, 0.02, 0.1), row(10_000, 0.01, 0.0, 0.03)],
        };
        assert!(!overlap.converged(0.02, 5.0));
        assert!(!StudyResult { rows: vec![] }.converged(0.02, 5.0));
    }

    #[test]
    fn study_is_thread_count_invariant() {
        let model = cosine();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| convergence_study(&model, &[10, 30], 0.1, 40, 17).to_csv())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn decomposition_of_a_crisp_trial_is_all_zeros() {
        let report = decomposition_diagnostic(&crisp(), 5, OmegaSeed(2), 0.25);
        assert_eq!(report.distance, 0.0);
        assert_eq!(report.cut_term, 0.0);
        assert_eq!(report.limit_term, 0.0);
        assert_eq!(report.drift_term, 0.0);
        assert!(report.holds);
    }

    #[test]
    fn decomposition_bound_holds_across_models() {
        let models = [
            cosine(),
            ModelSpec::iid_triangular(0.5, 1.0, 2.0, 1.0, grid()).unwrap(),
            ModelSpec::cosine_center_spread(0.0, 1.0, 0.5, grid()).unwrap(),
            ModelSpec::shared_shift(0.0, 1.0, 1.0, 1.0, grid()).unwrap(),
        ];
        for model in &models {
            for s in 0..20u64 {
                let report = decomposition_diagnostic(model, 25, OmegaSeed::derive(31, s), 0.2);
                assert!(
                    report.holds,
                    "{} violated: distance {} > bound {}",
                    model.kind(),
                    report.distance,
                    report.bound()
                );
                assert!(report.drift_term < 2.0 * 0.2);
                assert!(report.cells >= 1);
            }
        }
    }

    #[test]
    fn decomposition_names_a_dominant_term() {
        let report = decomposition_diagnostic(&cosine(), 10, OmegaSeed(5), 0.2);
        assert!(["cut", "limit", "drift"].contains(&report.dominant_term()));
    }

    #[test]
    fn scalar_tails_respect_their_chebyshev_ceilings() {
        let model = cosine();
        let tails = scalar_support_tails(&model, 100, 0.1, 100, 23, &[0.1, 0.5, 0.9]);
        assert_eq!(tails.len(), 6);
        for cell in &tails {
            let half = (cell.ci_hi - cell.ci_lo) / 2.0;
            assert!(
                cell.p_hat - half <= cell.chebyshev_bound,
                "cell (α = {}, {}) broke its ceiling",
                cell.alpha,
                cell.dir
            );
            // n = 100, ε = 0.1: (1/200) / 0.01
            assert!((cell.chebyshev_bound - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn scalar_tails_match_the_fuzzy_distance_for_fixed_spreads() {
        // fixed spreads collapse every cell to the same scalar law, so the
        // worst cell tail equals the fuzzy-distance tail
        let model = cosine();
        let (n, eps, reps, seed) = (50usize, 0.15f64, 80usize, 29u64);
        let est = tail_probability(&model, n, eps, reps, seed);
        let tails = scalar_support_tails(&model, n, eps, reps, seed, &[0.3, 0.8]);
        for cell in &tails {
            assert_eq!(cell.p_hat, est.p_hat);
        }
    }
}
