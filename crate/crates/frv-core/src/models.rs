//! Parametric families of fuzzy random sequences and their moment tools.
//!
//! A model fixes a sequence X^1, X^2, ... of fuzzy-number-valued draws over
//! a common sample point ω. Four constructions are provided: independent
//! triangular noise, two single-phase cosine families whose members are
//! pairwise uncorrelated without being independent, and a fully correlated
//! shared-shift family that serves as a negative control. The module also
//! carries the closed-form expectations and support variances of these
//! families, Monte Carlo counterparts, and an empirical uncorrelatedness
//! report over support evaluations.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::fuzzy::{validate_grid, AlphaKnot, FuzzyError, FuzzyNumber, InterpMode};
use crate::intervals::{Direction, Interval};

/// Flag threshold in standard errors: wide enough that false flags stay
/// negligible across a full report grid.
pub const DEFAULT_FLAG_Z: f64 = 4.0;

/// Draws per deterministic accumulation chunk. Partial sums are merged in
/// chunk order, so results do not depend on how chunks are scheduled.
const CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("center must be finite, got {center}")]
    BadCenter { center: f64 },
    #[error("spreads must be finite and nonnegative, got left {left}, right {right}")]
    BadSpread { left: f64, right: f64 },
    #[error("noise scale must be finite and nonnegative, got {noise}")]
    BadNoise { noise: f64 },
    #[error("base width must be finite and nonnegative, got {w0}")]
    BadWidth { w0: f64 },
    #[error("modulation depth must lie in [0, 1) so widths stay positive, got {beta0}")]
    BadModulation { beta0: f64 },
    #[error("covariance of an index with itself is a variance, pick distinct indices")]
    EqualIndices,
    #[error("need at least {min} draws, got {got}")]
    TooFewDraws { min: usize, got: usize },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// One sample point ω of the underlying probability space, identified by a
/// 64-bit seed. The whole sequence X^1, X^2, ... is a function of one ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OmegaSeed(pub u64);

impl OmegaSeed {
    /// The i-th sample point of a replication stream: a splitmix64 step on
    /// the master seed, so neighbouring indices give unrelated ω.
    pub fn derive(master: u64, index: u64) -> OmegaSeed {
        let mut z = master.wrapping_add(index.wrapping_mul(0x9E3779B97F4A7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        OmegaSeed(z ^ (z >> 31))
    }
}

/// Which kind of level evaluation a covariance cell was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelBasis {
    /// Plain level sets at α.
    Set,
    /// Right limits of the level map at α.
    Plus,
}

impl fmt::Display for LevelBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelBasis::Set => "set",
            LevelBasis::Plus => "plus",
        })
    }
}

impl std::str::FromStr for LevelBasis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "set" => Ok(LevelBasis::Set),
            "plus" => Ok(LevelBasis::Plus),
            other => Err(format!(
                "unknown level basis `{other}`, expected `set` or `plus`"
            )),
        }
    }
}

/// Line-numbered parse failure of a CSV report.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {msg}")]
pub struct CsvError {
    pub line: usize,
    pub msg: String,
}

/// The model families.
///
/// All four sample symmetric-or-skewed triangular numbers on the model's
/// α-grid; they differ in how randomness enters and how it couples across
/// the index k.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// `tri(c + noise·Z_k, l, r)` with Z_k standard normal, independent
    /// across k.
    IidTriangular {
        center: f64,
        left: f64,
        right: f64,
        noise: f64,
    },
    /// `tri(c + cos(kU), l, r)` with one shared U ~ Uniform(0, 2π) per ω.
    /// Members are pairwise uncorrelated but share all their randomness.
    CosineCenter { center: f64, left: f64, right: f64 },
    /// Symmetric triangular with center `c + cos(kU)` and random width
    /// `w0·(1 + β0·sin(kU))`, same shared U. Uncorrelated members whose
    /// spread varies with ω as well.
    CosineCenterSpread { center: f64, w0: f64, beta0: f64 },
    /// `tri(c + noise·Z, l, r)` with a single Z shared by every index:
    /// maximally correlated, the negative control.
    SharedShiftCorrelated {
        center: f64,
        left: f64,
        right: f64,
        noise: f64,
    },
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::IidTriangular { .. } => "iid-triangular",
            ModelKind::CosineCenter { .. } => "cosine-center",
            ModelKind::CosineCenterSpread { .. } => "cosine-center-spread",
            ModelKind::SharedShiftCorrelated { .. } => "shared-shift-correlated",
        })
    }
}

/// A model kind plus the α-grid its sampled numbers live on.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    kind: ModelKind,
    grid: Vec<f64>,
}

fn check_center(center: f64) -> Result<(), SimError> {
    if center.is_finite() {
        Ok(())
    } else {
        Err(SimError::BadCenter { center })
    }
}

fn check_spreads(left: f64, right: f64) -> Result<(), SimError> {
    if left >= 0.0 && left.is_finite() && right >= 0.0 && right.is_finite() {
        Ok(())
    } else {
        Err(SimError::BadSpread { left, right })
    }
}

fn check_noise(noise: f64) -> Result<(), SimError> {
    if noise >= 0.0 && noise.is_finite() {
        Ok(())
    } else {
        Err(SimError::BadNoise { noise })
    }
}

impl ModelSpec {
    pub fn iid_triangular(
        center: f64,
        left: f64,
        right: f64,
        noise: f64,
        grid: Vec<f64>,
    ) -> Result<Self, SimError> {
        check_center(center)?;
        check_spreads(left, right)?;
        check_noise(noise)?;
        validate_grid(&grid)?;
        Ok(ModelSpec {
            kind: ModelKind::IidTriangular {
                center,
                left,
                right,
                noise,
            },
            grid,
        })
    }

    pub fn cosine_center(
        center: f64,
        left: f64,
        right: f64,
        grid: Vec<f64>,
    ) -> Result<Self, SimError> {
        check_center(center)?;
        check_spreads(left, right)?;
        validate_grid(&grid)?;
        Ok(ModelSpec {
            kind: ModelKind::CosineCenter {
                center,
                left,
                right,
            },
            grid,
        })
    }

    pub fn cosine_center_spread(
        center: f64,
        w0: f64,
        beta0: f64,
        grid: Vec<f64>,
    ) -> Result<Self, SimError> {
        check_center(center)?;
        if !(w0 >= 0.0 && w0.is_finite()) {
            return Err(SimError::BadWidth { w0 });
        }
        if !(0.0..1.0).contains(&beta0) {
            return Err(SimError::BadModulation { beta0 });
        }
        validate_grid(&grid)?;
        Ok(ModelSpec {
            kind: ModelKind::CosineCenterSpread { center, w0, beta0 },
            grid,
        })
    }

    pub fn shared_shift(
        center: f64,
        left: f64,
        right: f64,
        noise: f64,
        grid: Vec<f64>,
    ) -> Result<Self, SimError> {
        check_center(center)?;
        check_spreads(left, right)?;
        check_noise(noise)?;
        validate_grid(&grid)?;
        Ok(ModelSpec {
            kind: ModelKind::SharedShiftCorrelated {
                center,
                left,
                right,
                noise,
            },
            grid,
        })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// The shared draw of a sample point: stream 0 of its generator.
    fn shared_rng(omega: OmegaSeed) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(omega.0);
        rng.set_stream(0);
        rng
    }

    /// Per-index draws come from stream k, disjoint from the shared stream.
    fn index_rng(omega: OmegaSeed, k: usize) -> ChaCha8Rng {
        debug_assert!(k >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(omega.0);
        rng.set_stream(k as u64);
        rng
    }

    fn shared_phase(omega: OmegaSeed) -> f64 {
        Self::shared_rng(omega).random::<f64>() * std::f64::consts::TAU
    }

    /// The k-th member of the sequence at sample point ω. Pure in (k, ω):
    /// repeated calls return identical numbers.
    ///
    /// Panics if `k == 0`; indices start at 1.
    pub fn sample(&self, k: usize, omega: OmegaSeed) -> FuzzyNumber {
        assert!(k >= 1, "sequence indices start at 1");
        let (center, left, right) = match &self.kind {
            ModelKind::IidTriangular {
                center,
                left,
                right,
                noise,
            } => {
                let z: f64 = Self::index_rng(omega, k).sample(StandardNormal);
                (center + noise * z, *left, *right)
            }
            ModelKind::CosineCenter {
                center,
                left,
                right,
            } => {
                let u = Self::shared_phase(omega);
                (center + (k as f64 * u).cos(), *left, *right)
            }
            ModelKind::CosineCenterSpread { center, w0, beta0 } => {
                let u = Self::shared_phase(omega);
                let w = w0 * (1.0 + beta0 * (k as f64 * u).sin());
                (center + (k as f64 * u).cos(), w, w)
            }
            ModelKind::SharedShiftCorrelated {
                center,
                left,
                right,
                noise,
            } => {
                let z: f64 = Self::shared_rng(omega).sample(StandardNormal);
                (center + noise * z, *left, *right)
            }
        };
        FuzzyNumber::triangular(center, left, right, &self.grid)
            .expect("validated model parameters keep levels ordered")
    }

    /// Closed-form expectation of the k-th member, computed endpointwise
    /// per level: the random center terms all have mean zero.
    pub fn analytic_expectation(&self, k: usize) -> FuzzyNumber {
        assert!(k >= 1, "sequence indices start at 1");
        let (center, left, right) = match &self.kind {
            ModelKind::IidTriangular {
                center,
                left,
                right,
                ..
            } => (*center, *left, *right),
            ModelKind::CosineCenter {
                center,
                left,
                right,
            } => (*center, *left, *right),
            ModelKind::CosineCenterSpread { center, w0, .. } => (*center, *w0, *w0),
            ModelKind::SharedShiftCorrelated {
                center,
                left,
                right,
                ..
            } => (*center, *left, *right),
        };
        FuzzyNumber::triangular(center, left, right, &self.grid)
            .expect("validated model parameters keep levels ordered")
    }

    /// Monte Carlo expectation: the knotwise average of sampled levels over
    /// `n_draws` sample points derived from `seed`.
    ///
    /// Draws are accumulated in fixed-size chunks and the partial sums are
    /// merged in chunk order, so the result is identical no matter how many
    /// threads execute the chunks.
    pub fn mc_expectation(&self, k: usize, n_draws: usize, seed: u64) -> FuzzyNumber {
        assert!(n_draws >= 2, "averaging needs at least two draws");
        let g = self.grid.len();
        let n_chunks = n_draws.div_ceil(CHUNK);
        let partials: Vec<(Vec<f64>, Vec<f64>)> = (0..n_chunks)
            .into_par_iter()
            .map(|ci| {
                let mut lo_sum = vec![0.0f64; g];
                let mut hi_sum = vec![0.0f64; g];
                for i in ci * CHUNK..((ci + 1) * CHUNK).min(n_draws) {
                    let x = self.sample(k, OmegaSeed::derive(seed, i as u64));
                    for (j, knot) in x.knots().iter().enumerate() {
                        lo_sum[j] += knot.level.lo();
                        hi_sum[j] += knot.level.hi();
                    }
                }
                (lo_sum, hi_sum)
            })
            .collect();
        let mut lo_sum = vec![0.0f64; g];
        let mut hi_sum = vec![0.0f64; g];
        for (lo_part, hi_part) in partials {
            for j in 0..g {
                lo_sum[j] += lo_part[j];
                hi_sum[j] += hi_part[j];
            }
        }
        let n = n_draws as f64;
        let knots = (0..g)
            .map(|j| AlphaKnot {
                alpha: self.grid[j],
                level: Interval::new(lo_sum[j] / n, hi_sum[j] / n)
                    .expect("averaged endpoints stay ordered"),
            })
            .collect();
        FuzzyNumber::new(knots, InterpMode::PiecewiseLinear).expect("averaged levels stay nested")
    }

    /// Support evaluation of the k-th member at one sample point:
    /// `support(dir, level_set(X^k(ω), alpha))`.
    pub fn support_sample(
        &self,
        k: usize,
        alpha: f64,
        dir: Direction,
        omega: OmegaSeed,
    ) -> Result<f64, SimError> {
        Ok(self.sample(k, omega).level_set(alpha)?.support(dir))
    }

    /// Same as [`support_sample`](Self::support_sample) on the right limit
    /// of the level map at `alpha`.
    pub fn support_sample_plus(
        &self,
        k: usize,
        alpha: f64,
        dir: Direction,
        omega: OmegaSeed,
    ) -> Result<f64, SimError> {
        Ok(self.sample(k, omega).level_plus(alpha)?.support(dir))
    }

    /// Sample covariance of the support evaluations of members k and m at
    /// one α and direction, over `n_draws` shared sample points.
    ///
    /// The standard error is the plug-in one: the standard deviation of the
    /// centered products divided by √n.
    pub fn estimate_cov(
        &self,
        k: usize,
        m: usize,
        alpha: f64,
        dir: Direction,
        n_draws: usize,
        seed: u64,
    ) -> Result<CovReport, SimError> {
        if k == m {
            return Err(SimError::EqualIndices);
        }
        if n_draws < 30 {
            return Err(SimError::TooFewDraws {
                min: 30,
                got: n_draws,
            });
        }
        let mut xs = Vec::with_capacity(n_draws);
        let mut ys = Vec::with_capacity(n_draws);
        for i in 0..n_draws {
            let omega = OmegaSeed::derive(seed, i as u64);
            xs.push(self.support_sample(k, alpha, dir, omega)?);
            ys.push(self.support_sample(m, alpha, dir, omega)?);
        }
        let (cov_hat, std_err) = paired_cov(&xs, &ys);
        Ok(CovReport {
            k,
            m,
            alpha,
            dir_k: dir,
            dir_m: dir,
            basis: LevelBasis::Set,
            cov_hat,
            std_err,
            n_samples: n_draws,
            flagged: cov_hat.abs() > DEFAULT_FLAG_Z * std_err,
        })
    }

    /// Closed-form variance of the support evaluation of member k.
    ///
    /// The cosine families get it from the second moments of cos and sin
    /// over a full period and their orthogonality; the normal-shift
    /// families from the noise scale.
    pub fn variance_of_support(&self, k: usize, alpha: f64, dir: Direction) -> f64 {
        assert!(k >= 1, "sequence indices start at 1");
        assert!(
            (0.0..=1.0).contains(&alpha),
            "variance is defined on alpha in [0, 1]"
        );
        let _ = dir; // symmetric constructions: both directions match
        match &self.kind {
            ModelKind::IidTriangular { noise, .. } => noise * noise,
            ModelKind::CosineCenter { .. } => 0.5,
            ModelKind::CosineCenterSpread { w0, beta0, .. } => {
                let beta = (1.0 - alpha) * w0 * beta0;
                0.5 + 0.5 * beta * beta
            }
            ModelKind::SharedShiftCorrelated { noise, .. } => noise * noise,
        }
    }

    /// The normalized variance sum `(1/n²)·Σ_{k=1..n} Var(support of X^k)`;
    /// its decay to zero as n grows is what drives the sample means home.
    pub fn variance_condition(&self, n: usize, alpha: f64, dir: Direction) -> f64 {
        assert!(n >= 1);
        let sum: f64 = (1..=n)
            .map(|k| self.variance_of_support(k, alpha, dir))
            .sum();
        sum / ((n as f64) * (n as f64))
    }

    /// Covariance reports for every pair `k < m ≤ max_k`, every α of the
    /// grid, all four direction combinations, on both level bases, with the
    /// default flag threshold.
    pub fn uncorrelatedness_report(
        &self,
        max_k: usize,
        alpha_grid: &[f64],
        n_draws: usize,
        seed: u64,
    ) -> Vec<CovReport> {
        self.uncorrelatedness_report_with_z(max_k, alpha_grid, n_draws, seed, DEFAULT_FLAG_Z)
    }

    /// As [`uncorrelatedness_report`](Self::uncorrelatedness_report) with an
    /// explicit flag threshold.
    ///
    /// Only cells with matching directions are ever flagged; cross-direction
    /// covariances are genuinely nonzero for coupled families and are
    /// reported for inspection only. Pairs run in parallel and each pair is
    /// accumulated sequentially, so the report is deterministic in
    /// (model, seed) regardless of thread count.
    pub fn uncorrelatedness_report_with_z(
        &self,
        max_k: usize,
        alpha_grid: &[f64],
        n_draws: usize,
        seed: u64,
        z: f64,
    ) -> Vec<CovReport> {
        assert!(max_k >= 2, "need at least one pair of indices");
        assert!(n_draws >= 30, "covariance estimates need draws");
        assert!(z > 0.0);
        let pairs: Vec<(usize, usize)> = (1..=max_k)
            .flat_map(|k| (k + 1..=max_k).map(move |m| (k, m)))
            .collect();
        pairs
            .into_par_iter()
            .map(|(k, m)| self.pair_report(k, m, alpha_grid, n_draws, seed, z))
            .collect::<Vec<Vec<CovReport>>>()
            .into_iter()
            .flatten()
            .collect()
    }

    /// All covariance cells of one index pair, in grid order: α outermost,
    /// then basis, then the four direction combinations.
    fn pair_report(
        &self,
        k: usize,
        m: usize,
        alpha_grid: &[f64],
        n_draws: usize,
        seed: u64,
        z: f64,
    ) -> Vec<CovReport> {
        let bases = [LevelBasis::Set, LevelBasis::Plus];
        let n_cells = alpha_grid.len() * 2 * 2;
        let fresh = || (0..n_cells).map(|_| Vec::with_capacity(n_draws)).collect();
        let mut streams_k: Vec<Vec<f64>> = fresh();
        let mut streams_m: Vec<Vec<f64>> = fresh();
        let cell = |ai: usize, di: usize, bi: usize| (ai * 2 + di) * 2 + bi;
        for i in 0..n_draws {
            let omega = OmegaSeed::derive(seed, i as u64);
            let xk = self.sample(k, omega);
            let xm = self.sample(m, omega);
            for (ai, &alpha) in alpha_grid.iter().enumerate() {
                for (di, dir) in Direction::BOTH.into_iter().enumerate() {
                    for (bi, basis) in bases.into_iter().enumerate() {
                        let evaluate = |x: &FuzzyNumber| match basis {
                            LevelBasis::Set => x.level_set(alpha),
                            LevelBasis::Plus => x.level_plus(alpha),
                        };
                        if let (Ok(lk), Ok(lm)) = (evaluate(&xk), evaluate(&xm)) {
                            streams_k[cell(ai, di, bi)].push(lk.support(dir));
                            streams_m[cell(ai, di, bi)].push(lm.support(dir));
                        }
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(alpha_grid.len() * 2 * 4);
        for (ai, &alpha) in alpha_grid.iter().enumerate() {
            for (bi, basis) in bases.into_iter().enumerate() {
                for dir_k in Direction::BOTH {
                    for dir_m in Direction::BOTH {
                        let xs = &streams_k[cell(ai, dir_index(dir_k), bi)];
                        let ys = &streams_m[cell(ai, dir_index(dir_m), bi)];
                        if xs.is_empty() {
                            // basis out of domain at this α (e.g. right
                            // limits at α = 1): nothing to report
                            continue;
                        }
                        let (cov_hat, std_err) = paired_cov(xs, ys);
                        out.push(CovReport {
                            k,
                            m,
                            alpha,
                            dir_k,
                            dir_m,
                            basis,
                            cov_hat,
                            std_err,
                            n_samples: xs.len(),
                            flagged: dir_k == dir_m && cov_hat.abs() > z * std_err,
                        });
                    }
                }
            }
        }
        out
    }
}

fn dir_index(dir: Direction) -> usize {
    match dir {
        Direction::Neg => 0,
        Direction::Pos => 1,
    }
}

/// Two-pass sample covariance with unbiased (n − 1) normalization, plus the
/// plug-in standard error: sd of the centered products over √n.
///
/// Sums run in index order; callers that rebuild the same streams get
/// bit-identical numbers.
fn paired_cov(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let len = xs.len();
    debug_assert_eq!(len, ys.len());
    debug_assert!(len >= 2);
    let n = len as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sum_p = 0.0f64;
    for i in 0..len {
        sum_p += (xs[i] - mean_x) * (ys[i] - mean_y);
    }
    let cov_hat = sum_p / (len - 1) as f64;
    let mean_p = sum_p / n;
    let mut var_p = 0.0f64;
    for i in 0..len {
        let d = (xs[i] - mean_x) * (ys[i] - mean_y) - mean_p;
        var_p += d * d;
    }
    let std_err = (var_p / (len - 1) as f64 / n).sqrt();
    (cov_hat, std_err)
}

/// One empirical covariance cell of the uncorrelatedness report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovReport {
    pub k: usize,
    pub m: usize,
    pub alpha: f64,
    pub dir_k: Direction,
    pub dir_m: Direction,
    pub basis: LevelBasis,
    pub cov_hat: f64,
    pub std_err: f64,
    pub n_samples: usize,
    pub flagged: bool,
}

impl CovReport {
    pub const CSV_HEADER: &'static str = "k,m,alpha,dir,basis,cov_hat,std_err,n_samples,flagged";

    /// One CSV row; matching directions print as one label, mixed ones as
    /// `dir_k/dir_m`.
    pub fn to_csv_row(&self) -> String {
        let dir = if self.dir_k == self.dir_m {
            self.dir_k.to_string()
        } else {
            format!("{}/{}", self.dir_k, self.dir_m)
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.k,
            self.m,
            self.alpha,
            dir,
            self.basis,
            self.cov_hat,
            self.std_err,
            self.n_samples,
            self.flagged
        )
    }
}

/// Renders a covariance report as CSV, header first.
pub fn cov_report_csv(rows: &[CovReport]) -> String {
    let mut out = String::from(CovReport::CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_row());
        out.push('\n');
    }
    out
}

/// Parses the CSV emitted by [`cov_report_csv`]; round-trips exactly.
pub fn parse_cov_report_csv(text: &str) -> Result<Vec<CovReport>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CovReport::CSV_HEADER => {}
        _ => {
            return Err(CsvError {
                line: 1,
                msg: format!("expected header `{}`", CovReport::CSV_HEADER),
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
        let bad = |what: &str, detail: String| CsvError {
            line,
            msg: format!("bad {what}: {detail}"),
        };
        let num =
            |what: &str, field: &str| field.parse::<f64>().map_err(|e| bad(what, e.to_string()));
        let (dir_k, dir_m) = match fields[3].split_once('/') {
            Some((k, m)) => (
                k.parse().map_err(|e| bad("direction", e))?,
                m.parse().map_err(|e| bad("direction", e))?,
            ),
            None => {
                let dir: Direction = fields[3].parse().map_err(|e| bad("direction", e))?;
                (dir, dir)
            }
        };
        rows.push(CovReport {
            k: fields[0]
                .parse()
                .map_err(|e: std::num::ParseIntError| bad("k", e.to_string()))?,
            m: fields[1]
                .parse()
                .map_err(|e: std::num::ParseIntError| bad("m", e.to_string()))?,
            alpha: num("alpha", fields[2])?,
            dir_k,
            dir_m,
            basis: fields[4].parse().map_err(|e: String| bad("basis", e))?,
            cov_hat: num("cov_hat", fields[5])?,
            std_err: num("std_err", fields[6])?,
            n_samples: fields[7]
                .parse()
                .map_err(|e: std::num::ParseIntError| bad("n_samples", e.to_string()))?,
            flagged: fields[8]
                .parse()
                .map_err(|e: std::str::ParseBoolError| bad("flagged", e.to_string()))?,
        });
    }
    Ok(rows)
}
