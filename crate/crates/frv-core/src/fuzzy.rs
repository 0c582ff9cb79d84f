//! Fuzzy numbers represented by finitely many α-level knots.
//!
//! A fuzzy number stores a nested family of intervals indexed by a strictly
//! increasing α-grid from 0 to 1, plus an interpolation mode that fixes the
//! levels between knots: `pwl` interpolates endpoints linearly, `step` keeps
//! each level constant on the half-open cell ending at a knot, which makes
//! the level map left-continuous in α.

use std::fmt;

use thiserror::Error;

use crate::intervals::{Interval, IntervalError};

/// How levels between knots are defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpMode {
    /// Level endpoints vary linearly between adjacent knots.
    PiecewiseLinear,
    /// Levels are constant on each cell `(alpha[j-1], alpha[j]]`.
    Step,
}

impl fmt::Display for InterpMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InterpMode::PiecewiseLinear => "pwl",
            InterpMode::Step => "step",
        })
    }
}

/// One stored level: the interval attached to a grid value of α.
///
/// The knot at α = 0 anchors the support end of the family; for `step`
/// numbers it may strictly contain every positive level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaKnot {
    pub alpha: f64,
    pub level: Interval,
}

/// First structural defect found in a knot family, if any.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ValidityViolation {
    #[error("a fuzzy number needs at least the alpha = 0 and alpha = 1 knots")]
    Empty,
    #[error("first knot must sit at alpha = 0, found {found}")]
    MissingZeroKnot { found: f64 },
    #[error("last knot must sit at alpha = 1, found {found}")]
    MissingUnitKnot { found: f64 },
    #[error("knot alphas must increase strictly, violated at index {index}")]
    UnorderedAlpha { index: usize },
    #[error("levels must shrink as alpha grows: knot {index} is not contained in knot {}", .index - 1)]
    NotNested { index: usize },
}

/// Checks ordering, the 0/1 anchors, and downward nesting of a knot family.
pub fn check_knots(knots: &[AlphaKnot]) -> Result<(), ValidityViolation> {
    let first = knots.first().ok_or(ValidityViolation::Empty)?;
    if first.alpha != 0.0 {
        return Err(ValidityViolation::MissingZeroKnot { found: first.alpha });
    }
    let last = knots.last().expect("nonempty");
    if last.alpha != 1.0 {
        return Err(ValidityViolation::MissingUnitKnot { found: last.alpha });
    }
    for index in 1..knots.len() {
        if !(knots[index].alpha > knots[index - 1].alpha) {
            return Err(ValidityViolation::UnorderedAlpha { index });
        }
        if !knots[index].level.is_subset_of(&knots[index - 1].level) {
            return Err(ValidityViolation::NotNested { index });
        }
    }
    Ok(())
}

/// Checks that `grid` is a strictly increasing run of αs from 0 to 1.
pub fn validate_grid(grid: &[f64]) -> Result<(), FuzzyError> {
    let ok = grid.first() == Some(&0.0)
        && grid.last() == Some(&1.0)
        && grid.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(FuzzyError::BadGrid)
    }
}

/// The uniform α-grid with `knots` points; `knots` must be at least 2.
pub fn uniform_grid(knots: usize) -> Vec<f64> {
    assert!(knots >= 2, "a grid needs both endpoints");
    (0..knots).map(|i| i as f64 / (knots - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("alpha {alpha} outside the level-set domain (0, 1]")]
    AlphaNotInLevelDomain { alpha: f64 },
    #[error("alpha {alpha} outside the right-limit domain [0, 1)")]
    AlphaNotInRightLimitDomain { alpha: f64 },
    #[error("interpolation modes differ: {left} vs {right}")]
    ModeMismatch { left: InterpMode, right: InterpMode },
    #[error("epsilon must be positive and finite, got {eps}")]
    BadEpsilon { eps: f64 },
    #[error("spreads must be finite and nonnegative, got left {left}, right {right}")]
    BadSpread { left: f64, right: f64 },
    #[error("center must be finite, got {center}")]
    BadCenter { center: f64 },
    #[error("alpha grid must increase strictly from 0 to 1")]
    BadGrid,
    #[error("partition cuts must increase strictly from 0 to 1")]
    BadPartition,
    #[error(transparent)]
    Invalid(#[from] ValidityViolation),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Syntax or structural error in the plain-text knot format.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiteralError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] ValidityViolation),
}

/// Fuzzy number: a validated knot family plus its interpolation mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNumber {
    knots: Vec<AlphaKnot>,
    mode: InterpMode,
}

impl FuzzyNumber {
    pub fn new(knots: Vec<AlphaKnot>, mode: InterpMode) -> Result<Self, ValidityViolation> {
        check_knots(&knots)?;
        Ok(FuzzyNumber { knots, mode })
    }

    /// The fuzzy number whose every level equals `level`.
    pub fn constant(level: Interval, mode: InterpMode) -> Self {
        FuzzyNumber {
            knots: vec![
                AlphaKnot { alpha: 0.0, level },
                AlphaKnot { alpha: 1.0, level },
            ],
            mode,
        }
    }

    /// The crisp number `{x}`.
    pub fn crisp(x: f64, mode: InterpMode) -> Result<Self, IntervalError> {
        Ok(Self::constant(Interval::singleton(x)?, mode))
    }

    /// Triangular number: the level at α is
    /// `[center - (1-α)·left, center + (1-α)·right]`, stored on `grid`.
    pub fn triangular(
        center: f64,
        left: f64,
        right: f64,
        grid: &[f64],
    ) -> Result<Self, FuzzyError> {
        if !center.is_finite() {
            return Err(FuzzyError::BadCenter { center });
        }
        if !(left >= 0.0 && left.is_finite() && right >= 0.0 && right.is_finite()) {
            return Err(FuzzyError::BadSpread { left, right });
        }
        validate_grid(grid)?;
        let knots = grid
            .iter()
            .map(|&alpha| AlphaKnot {
                alpha,
                level: Interval::new(
                    center - (1.0 - alpha) * left,
                    center + (1.0 - alpha) * right,
                )
                .expect("triangular endpoints are ordered"),
            })
            .collect();
        Ok(FuzzyNumber {
            knots,
            mode: InterpMode::PiecewiseLinear,
        })
    }

    pub fn mode(&self) -> InterpMode {
        self.mode
    }

    pub fn knots(&self) -> &[AlphaKnot] {
        &self.knots
    }

    /// Re-runs the structural checks on the stored knots.
    pub fn check_valid(&self) -> Result<(), ValidityViolation> {
        check_knots(&self.knots)
    }

    /// The level set at `alpha ∈ (0, 1]`.
    pub fn level_set(&self, alpha: f64) -> Result<Interval, FuzzyError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(FuzzyError::AlphaNotInLevelDomain { alpha });
        }
        let idx = self.knots.partition_point(|k| k.alpha < alpha);
        let upper = &self.knots[idx];
        match self.mode {
            InterpMode::Step => Ok(upper.level),
            InterpMode::PiecewiseLinear => {
                if upper.alpha == alpha {
                    return Ok(upper.level);
                }
                let lower = &self.knots[idx - 1];
                let t = (alpha - lower.alpha) / (upper.alpha - lower.alpha);
                let lo = lower.level.lo() + t * (upper.level.lo() - lower.level.lo());
                let hi = lower.level.hi() + t * (upper.level.hi() - lower.level.hi());
                // rounding can invert a degenerate-width level by one ulp
                Ok(Interval::new(lo.min(hi), lo.max(hi)).expect("finite by construction"))
            }
        }
    }

    /// The right limit of the level map at `alpha ∈ [0, 1)`: the closure of
    /// the union of all levels strictly above `alpha`.
    pub fn level_plus(&self, alpha: f64) -> Result<Interval, FuzzyError> {
        if !(alpha >= 0.0 && alpha < 1.0) {
            return Err(FuzzyError::AlphaNotInRightLimitDomain { alpha });
        }
        match self.mode {
            InterpMode::PiecewiseLinear => {
                // endpoints are continuous in α, so the right limit is the level
                if alpha == 0.0 {
                    Ok(self.knots[0].level)
                } else {
                    self.level_set(alpha)
                }
            }
            InterpMode::Step => {
                let idx = self.knots.partition_point(|k| k.alpha <= alpha);
                Ok(self.knots[idx].level)
            }
        }
    }

    /// The level at a merged-grid cut, extending `level_set` to cut 0.
    fn level_at_cut(&self, cut: f64) -> Interval {
        if cut <= 0.0 {
            self.knots[0].level
        } else {
            self.level_set(cut).expect("cut lies in (0, 1]")
        }
    }

    /// Uniform Hausdorff distance: the sup over α ∈ (0, 1] of the levelwise
    /// Hausdorff distance.
    ///
    /// On each merged knot cell the endpoint gaps are affine (`pwl`) or
    /// constant (`step`), so the sup over the half-open cell is reached at
    /// its right end or as the right limit at its left end; both are exact
    /// knot evaluations.
    pub fn uniform_hausdorff(&self, other: &FuzzyNumber) -> f64 {
        let cuts = merged_cuts(self, other);
        let mut best = 0.0f64;
        for w in cuts.windows(2) {
            let at_right = self
                .level_set(w[1])
                .expect("merged cut in (0, 1]")
                .hausdorff(&other.level_set(w[1]).expect("merged cut in (0, 1]"));
            let at_left_limit = self
                .level_plus(w[0])
                .expect("merged cut in [0, 1)")
                .hausdorff(&other.level_plus(w[0]).expect("merged cut in [0, 1)"));
            best = best.max(at_right).max(at_left_limit);
        }
        best
    }

    /// Levelwise Minkowski sum on the merged knot grid.
    pub fn add(&self, other: &FuzzyNumber) -> Result<FuzzyNumber, FuzzyError> {
        if self.mode != other.mode {
            return Err(FuzzyError::ModeMismatch {
                left: self.mode,
                right: other.mode,
            });
        }
        // aligned grids skip the merge; the result matches the merged path
        // bit for bit because every merged cut would land on a shared knot
        if self.knots.len() == other.knots.len()
            && self
                .knots
                .iter()
                .zip(&other.knots)
                .all(|(a, b)| a.alpha == b.alpha)
        {
            let knots = self
                .knots
                .iter()
                .zip(&other.knots)
                .map(|(a, b)| AlphaKnot {
                    alpha: a.alpha,
                    level: a.level.minkowski_add(&b.level),
                })
                .collect();
            return Ok(FuzzyNumber {
                knots,
                mode: self.mode,
            });
        }
        let knots: Vec<AlphaKnot> = merged_cuts(self, other)
            .into_iter()
            .map(|alpha| AlphaKnot {
                alpha,
                level: self
                    .level_at_cut(alpha)
                    .minkowski_add(&other.level_at_cut(alpha)),
            })
            .collect();
        debug_assert!(check_knots(&knots).is_ok());
        Ok(FuzzyNumber {
            knots,
            mode: self.mode,
        })
    }

    /// Levelwise scaling by a finite factor.
    pub fn scale(&self, lambda: f64) -> FuzzyNumber {
        let knots = self
            .knots
            .iter()
            .map(|k| AlphaKnot {
                alpha: k.alpha,
                level: k.level.scale(lambda),
            })
            .collect();
        FuzzyNumber {
            knots,
            mode: self.mode,
        }
    }

    /// Magnitude: the uniform Hausdorff distance to the crisp number `{0}`.
    pub fn norm(&self) -> f64 {
        self.uniform_hausdorff(&FuzzyNumber::constant(Interval::zero(), self.mode))
    }

    /// Splits `[0, 1]` into cuts whose level drift stays strictly below
    /// `eps`: for consecutive cuts `a < b`,
    /// `hausdorff(level_set(b), level_plus(a)) < eps`.
    ///
    /// A greedy upward scan over the knot grid always picks the largest
    /// admissible cut, so ties resolve toward fewer cuts. `pwl` cells may
    /// drift more than `eps` across a single cell; those cells are first
    /// subdivided uniformly so that every sub-cell drifts at most `eps/2`.
    pub fn epsilon_partition(&self, eps: f64) -> Result<AlphaPartition, FuzzyError> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(FuzzyError::BadEpsilon { eps });
        }
        let mut candidates: Vec<f64> = self.knots.iter().map(|k| k.alpha).collect();
        if self.mode == InterpMode::PiecewiseLinear {
            let mut extra = Vec::new();
            for w in self.knots.windows(2) {
                let drift = w[1].level.hausdorff(&w[0].level);
                if drift >= eps / 2.0 {
                    let parts = (drift / (eps / 2.0)).floor() as usize + 1;
                    for i in 1..parts {
                        extra.push(
                            w[0].alpha + (i as f64 / parts as f64) * (w[1].alpha - w[0].alpha),
                        );
                    }
                }
            }
            candidates.extend(extra);
            candidates.sort_by(f64::total_cmp);
            candidates.dedup();
        }

        let mut cuts = vec![0.0];
        let mut cur = 0.0f64;
        while cur < 1.0 {
            let reach = self.level_plus(cur).expect("cur < 1");
            let start = candidates.partition_point(|&c| c <= cur);
            let mut chosen = None;
            // drift is nondecreasing in the cut, so scan forward to the
            // largest candidate that keeps the strict bound
            for &c in &candidates[start..] {
                if self
                    .level_set(c)
                    .expect("candidate in (0, 1]")
                    .hausdorff(&reach)
                    < eps
                {
                    chosen = Some(c);
                } else {
                    break;
                }
            }
            // step levels repeat the next knot exactly and pwl sub-cells
            // drift at most eps/2, so the very next candidate qualifies
            cur = chosen.expect("next candidate stays within eps");
            cuts.push(cur);
        }
        Ok(AlphaPartition { cuts })
    }

    /// Serializes to the plain-text knot format: a `mode:` header, then one
    /// `alpha lo hi` line per knot in ascending α.
    pub fn to_literal(&self) -> String {
        let mut out = format!("mode: {}\n", self.mode);
        for k in &self.knots {
            out.push_str(&format!("{} {} {}\n", k.alpha, k.level.lo(), k.level.hi()));
        }
        out
    }

    /// Parses the plain-text knot format; blank lines and `#` comments are
    /// skipped, every other defect is reported with its line number.
    pub fn from_literal(text: &str) -> Result<Self, LiteralError> {
        let syntax = |line: usize, msg: String| LiteralError::Syntax { line, msg };
        let mut mode = None;
        let mut knots = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if mode.is_none() {
                let rest = trimmed.strip_prefix("mode:").ok_or_else(|| {
                    syntax(line, "expected header `mode: pwl` or `mode: step`".into())
                })?;
                mode = Some(match rest.trim() {
                    "pwl" => InterpMode::PiecewiseLinear,
                    "step" => InterpMode::Step,
                    other => return Err(syntax(line, format!("unknown mode `{other}`"))),
                });
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(syntax(line, "expected three fields: alpha lo hi".into()));
            }
            let nums: Vec<f64> = fields
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| syntax(line, format!("not a number: `{f}`")))
                })
                .collect::<Result<_, _>>()?;
            let level = Interval::new(nums[1], nums[2]).map_err(|e| syntax(line, e.to_string()))?;
            knots.push(AlphaKnot {
                alpha: nums[0],
                level,
            });
        }
        let mode = mode.ok_or_else(|| syntax(last_line + 1, "missing `mode:` header".into()))?;
        Ok(FuzzyNumber::new(knots, mode)?)
    }
}

/// Sorted deduplicated union of both knot grids.
fn merged_cuts(a: &FuzzyNumber, b: &FuzzyNumber) -> Vec<f64> {
    let mut cuts: Vec<f64> = a
        .knots
        .iter()
        .chain(b.knots.iter())
        .map(|k| k.alpha)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// Strictly increasing cuts of `[0, 1]` starting at 0 and ending at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaPartition {
    cuts: Vec<f64>,
}

impl AlphaPartition {
    pub fn new(cuts: Vec<f64>) -> Result<Self, FuzzyError> {
        let ok = cuts.first() == Some(&0.0)
            && cuts.last() == Some(&1.0)
            && cuts.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(AlphaPartition { cuts })
        } else {
            Err(FuzzyError::BadPartition)
        }
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    /// Number of cells, one less than the number of cuts.
    pub fn cells(&self) -> usize {
        self.cuts.len() - 1
    }
}
